import argparse
import logging
from pathlib import Path
from typing import Callable, Optional

from src.models.cell_complex import EquivariantCellComplex
from src.models.cohomology import LocalSystem
from src.schemas.report import ReportDocument
from src.services.borel_service import BorelService
from src.services.catalog_service import CatalogService
from src.services.classify_service import LENS_NOTE, ClassifyService
from src.services.complex_service import ComplexService
from src.services.verification_service import VerificationService
from src.utils.space_io import read_space, write_space

logger = logging.getLogger(__name__)

# command handlers return the report and the exit status
Handler = Callable[[argparse.Namespace], tuple[ReportDocument, int]]

SPACE_ALIASES = {"wedge": "wedge_free"}


def _space_params(args: argparse.Namespace) -> dict:
    params = {"p": args.p, "q": args.q, "N": args.n, "refine": args.refine}
    return {key: value for key, value in params.items() if value is not None}


def _load_space(args: argparse.Namespace) -> EquivariantCellComplex:
    """A catalog name, or a path to a space file."""
    name = SPACE_ALIASES.get(args.space, args.space)
    if name not in CatalogService.names() and Path(args.space).exists():
        return read_space(args.space)
    return CatalogService.build(name, **_space_params(args))


def cmd_space(args: argparse.Namespace) -> tuple[ReportDocument, int]:
    name = SPACE_ALIASES.get(args.space, args.space)
    X = CatalogService.build(name, **_space_params(args))
    if args.output:
        write_space(X, args.output)
    counts = X.counts()
    results = {
        f"dimension {k}": f"{row['fixed']} fixed, {row['free']} free" for k, row in counts.items()
    }
    results["euler characteristic"] = str(ComplexService.euler_characteristic(X))
    results["fixed components"] = str(len(ComplexService.components(ComplexService.fixed_subcomplex(X))))
    report = ReportDocument(
        command="space",
        inputs={"space": X.name, "output": args.output},
        results=results,
        certificates={"valid": not ComplexService.validate(X)},
    )
    return report, 0


def cmd_cohomology(args: argparse.Namespace) -> tuple[ReportDocument, int]:
    X = _load_space(args)
    coefficient = LocalSystem.parse(args.coeff)
    if args.relative == "fixed":
        report = BorelService.relative_to_fixed(X, coefficient, args.max_deg)
    elif args.relative and args.relative.startswith("sub="):
        ids = [cell_id for cell_id in args.relative[4:].split(",") if cell_id]
        ref = ComplexService.subcomplex_ref(X, ids)
        report = BorelService.relative_equivariant_cohomology(X, ref, coefficient, args.max_deg)
    elif args.reduced:
        report = BorelService.reduced_cohomology(X, args.basepoint, coefficient, args.max_deg)
    else:
        report = BorelService.equivariant_cohomology(X, coefficient, args.max_deg)
    document = ReportDocument(
        command="cohomology",
        inputs={
            "space": X.name,
            "coeff": str(coefficient),
            "max_deg": args.max_deg,
            "relative": report.relative_to,
            "truncation": report.truncation,
        },
        results={f"H^{k}": str(group) for k, group in enumerate(report.groups)},
        certificates={"stable": report.stable},
    )
    return document, 0


def cmd_verify(args: argparse.Namespace) -> tuple[ReportDocument, int]:
    entries = VerificationService.run(args.suite, args.q)
    hard_failed = [e for e in entries if e.hard and not e.passed]
    flagged = [e for e in entries if not e.hard and not e.passed]
    notes = [f"flagged: {e.name}: expected {e.expected}, computed {e.computed}" for e in flagged]
    document = ReportDocument(
        command="verify",
        inputs={"suite": args.suite, "q": args.q},
        results={
            "entries": str(len(entries)),
            "passed": str(sum(1 for e in entries if e.passed)),
            "hard failures": str(len(hard_failed)),
            "flagged": str(len(flagged)),
        },
        verdicts=entries,
        notes=notes,
        summary="verification passed" if not hard_failed else "verification FAILED",
    )
    return document, 1 if hard_failed else 0


def cmd_classify(args: argparse.Namespace) -> tuple[ReportDocument, int]:
    name = SPACE_ALIASES.get(args.space, args.space)
    params = _space_params(args)
    verdict = ClassifyService.surjectivity_report(name, **params)
    results = {
        "Vec^2_Q": str(verdict.classification),
        "FKMM target": str(verdict.target),
        "verdict": verdict.verdict,
    }
    if verdict.ratio is not None:
        results["order ratio"] = str(verdict.ratio)
    notes = []
    if name == "lens":
        results["Pic_R"] = str(ClassifyService.pic_r_lens(params.get("q", 1)))
        notes.append(LENS_NOTE)
        notes.append("Pic_R acts on Vec^2_Q by E ↦ L ⊗ E through the identity identification of both groups")
    document = ReportDocument(
        command="classify",
        inputs={"space": verdict.space},
        results=results,
        notes=notes,
    )
    return document, 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=None, help="report format")

    space_params = argparse.ArgumentParser(add_help=False)
    space_params.add_argument("--p", type=int, default=None, help="fixed coordinates of sphere_pq")
    space_params.add_argument("--q", type=int, default=None, help="lens parameter, or flipped coordinates of sphere_pq")
    space_params.add_argument("--n", type=int, default=None, help="N for antipodal_sphere and wedge_free")
    space_params.add_argument("--refine", type=int, default=None, help="λ-circle refinement of the lens model")

    parser = argparse.ArgumentParser(prog="z2topo", description="Exact Z2-equivariant cohomology engine")
    commands = parser.add_subparsers(dest="command", required=True)

    space = commands.add_parser("space", parents=[common, space_params], help="build a catalog space")
    space.add_argument("space", help=f"one of {', '.join(CatalogService.names())}")
    space.add_argument("-o", "--output", default=None, help="space file to write")
    space.set_defaults(handler=cmd_space)

    cohomology = commands.add_parser("cohomology", parents=[common, space_params],
                                     help="equivariant cohomology of a space")
    cohomology.add_argument("space", help="catalog name or space file")
    cohomology.add_argument("--coeff", default="z1", help="z0 or z1")
    cohomology.add_argument("--max-deg", type=int, default=3)
    cohomology.add_argument("--relative", default=None, help="'fixed' or 'sub=<id>,<id>,...'")
    cohomology.add_argument("--reduced", action="store_true", help="cohomology relative to a fixed 0-cell")
    cohomology.add_argument("--basepoint", default=None)
    cohomology.set_defaults(handler=cmd_cohomology)

    verify = commands.add_parser("verify", parents=[common], help="reproduce reference tables")
    verify.add_argument("suite", choices=VerificationService.suites())
    verify.add_argument("--q", type=int, default=None, help="restrict lens suites to one q")
    verify.set_defaults(handler=cmd_verify)

    classify = commands.add_parser("classify", parents=[common, space_params],
                                   help="rank-2 Quaternionic classification and FKMM target")
    classify.add_argument("space", help="lens, wedge or a catalog space of dimension at most 1")
    classify.set_defaults(handler=cmd_classify)
    return parser


def dispatch(args: argparse.Namespace) -> tuple[ReportDocument, int]:
    handler: Optional[Handler] = getattr(args, "handler", None)
    logger.debug(f"dispatching {args.command}")
    return handler(args)
