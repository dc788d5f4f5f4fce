import os
from functools import lru_cache
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Load environment variables from .env file
load_dotenv()


class Settings(BaseModel):
    # root logging level
    log_level: str = Field(default="WARNING")

    # DEBUG=true forces debug logging
    debug: bool = Field(default=False)

    # default report format for the CLI
    report_format: Literal["text", "json"] = Field(default="text")

    # cap on |sub| * |quotient| for extension enumeration
    extension_cap: int = Field(default=10**6, ge=1)

    # truncation level N = max_degree + margin
    truncation_margin: int = Field(default=2, ge=2)

    # recompute at N + 1 and compare
    stability_check: bool = Field(default=True)

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_level(cls, v):
        """Upper-case the level name; empty values fall back to WARNING"""
        if v is None or (isinstance(v, str) and not v.strip()):
            return "WARNING"
        return str(v).strip().upper()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


@lru_cache
def get_settings() -> Settings:
    return Settings(
        log_level=os.getenv("Z2TOPO_LOG_LEVEL", "WARNING"),
        debug=_flag("Z2TOPO_DEBUG", "False"),
        report_format=os.getenv("Z2TOPO_REPORT_FORMAT", "text"),
        extension_cap=int(os.getenv("Z2TOPO_EXTENSION_CAP", str(10**6))),
        truncation_margin=int(os.getenv("Z2TOPO_TRUNCATION_MARGIN", "2")),
        stability_check=_flag("Z2TOPO_STABILITY_CHECK", "True"),
    )
