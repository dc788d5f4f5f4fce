import logging
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv

from src.config.settings import get_settings
from src.routers.cli_routes import build_parser, dispatch
from src.utils.exceptions import EngineError, InternalInvariantError
from src.utils.render import render

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def _configure_logging():
    settings = get_settings()
    level = logging.DEBUG if settings.debug else getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT_ERROR

    try:
        report, status = dispatch(args)
    except InternalInvariantError as e:
        logger.error(f"internal invariant violated: {e}")
        return EXIT_INTERNAL_ERROR
    except EngineError as e:
        logger.error(f"{e}")
        return EXIT_INPUT_ERROR

    print(render(report, args.format or get_settings().report_format))
    return status


if __name__ == "__main__":
    sys.exit(main())
