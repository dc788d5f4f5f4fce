from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.integer_matrix import IntegerMatrix
from src.utils.exceptions import InvalidParameterError, MismatchedTargetsError


@dataclass(frozen=True)
class MapClassGroup:
    """A group of equivariant homotopy classes of maps, with how its elements are read."""

    label: str
    group: FgAbelianGroup
    encoding: str


@dataclass(frozen=True)
class ClutchingPresentation:
    """
    Bundle classes over X1 ∪_f X2 as double cosets of boundary map classes:
    [X1, G] \\ [T, G] / [X2, G], left acting by restriction, right by pullback along f.
    The clutching map f enters only through its degree matrix.
    """

    boundary: MapClassGroup
    left: MapClassGroup
    left_hom: GroupHom
    right: MapClassGroup
    right_hom: GroupHom
    degree_matrix: IntegerMatrix

    def __post_init__(self):
        for piece, hom in ((self.left, self.left_hom), (self.right, self.right_hom)):
            if hom.source != piece.group or hom.target != self.boundary.group:
                raise MismatchedTargetsError(f"{piece.label} does not map into {self.boundary.label}")


@dataclass(frozen=True)
class DoubleCosets:
    """The orbit set of an abelian ambient group under two subgroup translations."""

    ambient: FgAbelianGroup
    group: FgAbelianGroup
    projection: GroupHom

    def class_of(self, element) -> tuple[int, ...]:
        return self.projection(element)


@dataclass(frozen=True)
class SignVector:
    """Signs ±1 on the fixed points, in fixed-cell order."""

    points: tuple[str, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.points) != len(self.signs):
            raise InvalidParameterError("sign vector and fixed points differ in length")
        if any(s not in (1, -1) for s in self.signs):
            raise InvalidParameterError(f"signs must be +1 or -1, got {self.signs}")

    @classmethod
    def trivial(cls, points: tuple[str, ...]) -> SignVector:
        return cls(points, (1,) * len(points))

    @classmethod
    def from_bits(cls, points: tuple[str, ...], bits: tuple[int, ...]) -> SignVector:
        return cls(points, tuple(-1 if b else 1 for b in bits))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(1 if s == -1 else 0 for s in self.signs)

    def __str__(self) -> str:
        return "(" + ", ".join("+1" if s == 1 else "-1" for s in self.signs) + ")"


@dataclass(frozen=True)
class FkmmClass:
    representative: SignVector
    is_trivial: bool
    quotient_order: int
    orbit_size: int


Verdict = Literal["bijective-consistent", "not-surjective", "inconclusive"]


@dataclass(frozen=True)
class SurjectivityVerdict:
    space: str
    classification: FgAbelianGroup
    target: FgAbelianGroup
    verdict: Verdict
    ratio: Optional[int] = None


StableOutcome = Literal["trivial", "unique", "empty", "rank-2", "pic", "reduced", "unstable"]


@dataclass(frozen=True)
class StableRankVerdict:
    """Where the classification of rank-`rank` bundles over a d-dimensional space reduces to."""

    category: Literal["Q", "R"]
    d: int
    rank: int
    outcome: StableOutcome
    target_rank: Optional[int] = None

    def describe(self) -> str:
        if self.outcome == "trivial":
            return "only the trivial bundle"
        if self.outcome == "unique":
            return "a single isomorphism class"
        if self.outcome == "empty":
            return "no bundles of this rank"
        if self.outcome == "rank-2":
            return "reduces to Vec^2_Q"
        if self.outcome == "pic":
            return "Pic_Q ≅ Pic_R" if self.category == "Q" else "reduces to Pic_R"
        if self.outcome == "reduced":
            return f"reduces to rank {self.target_rank}"
        return "outside the stable range"
