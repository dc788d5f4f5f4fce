from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator


class CellEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # opaque identifier, unique within the file
    id: str = Field(min_length=1)

    # non-negative dimension
    dim: int = Field(ge=0)

    # free cells stand for a τ-pair, fixed cells are pointwise fixed
    orbit: Literal["free", "fixed"]

    @field_validator("dim", mode="before")
    @classmethod
    def reject_non_integers(cls, v):
        """Dimensions must be JSON integers, not floats or strings"""
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError("dim must be an integer")
        return v


class BoundaryTerm(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # id of a cell one dimension lower
    cell: str

    # coefficient a + b·τ
    a: int = Field(default=0)
    b: int = Field(default=0)

    @field_validator("a", "b", mode="before")
    @classmethod
    def reject_non_integers(cls, v):
        """Coefficients must be exact integers"""
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValueError("coefficients must be integers")
        return v


class SpaceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cells: list[CellEntry]

    # boundary per free-orbit representative and per fixed cell
    boundary: dict[str, list[BoundaryTerm]] = Field(default_factory=dict)
