from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Hashable, Optional, Sequence

from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.integer_matrix import IntegerMatrix
from src.utils.exceptions import DimensionMismatchError, InvalidParameterError

if TYPE_CHECKING:
    from src.services.abelian_service import Subquotient


@dataclass(frozen=True)
class LocalSystem:
    """The coefficient system Z(m): τ acts on Z by (-1)^m. Only the parity of m matters."""

    m: int

    def __post_init__(self):
        if self.m not in (0, 1):
            raise InvalidParameterError(f"local system Z({self.m}) is not supported, use Z(0) or Z(1)")

    @classmethod
    def parse(cls, text: str) -> LocalSystem:
        key = text.strip().lower()
        if key in ("z0", "z(0)", "0"):
            return cls(0)
        if key in ("z1", "z(1)", "1"):
            return cls(1)
        raise InvalidParameterError(f"unknown coefficient system '{text}'")

    def shifted(self, k: int = 1) -> LocalSystem:
        return LocalSystem((self.m + k) % 2)

    def __str__(self) -> str:
        return f"Z({self.m})"


Z0 = LocalSystem(0)
Z1 = LocalSystem(1)


@dataclass(frozen=True)
class CochainComplex:
    """Free cochain groups C^0, C^1, ... with δ^k: C^k -> C^{k+1}.

    labels[k] names the basis of C^k; differentials[k] has shape
    (len(labels[k+1]), len(labels[k])). Degrees outside the stored range are zero.
    """

    labels: tuple[tuple[Hashable, ...], ...]
    differentials: tuple[IntegerMatrix, ...]

    def __post_init__(self):
        for k, delta in enumerate(self.differentials):
            expected = (self.dim(k + 1), self.dim(k))
            if delta.shape != expected:
                raise DimensionMismatchError(f"δ^{k} has shape {delta.shape}, expected {expected}")

    def dim(self, k: int) -> int:
        return len(self.labels[k]) if 0 <= k < len(self.labels) else 0

    def differential(self, k: int) -> IntegerMatrix:
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return IntegerMatrix.zeros(self.dim(k + 1), self.dim(k))

    def index(self, k: int) -> dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.labels[k])} if 0 <= k < len(self.labels) else {}


@dataclass
class CohomologyGroup:
    """H^k of a cochain complex: the group, cocycle generators and a coordinate map."""

    degree: int
    quotient: Subquotient
    cochains: CochainComplex = field(repr=False)

    @property
    def group(self) -> FgAbelianGroup:
        return self.quotient.group

    @property
    def generators(self) -> list[tuple[int, ...]]:
        return self.quotient.generators

    def coordinates(self, cocycle: Sequence[int]) -> Optional[tuple[int, ...]]:
        return self.quotient.coordinates(cocycle)


@dataclass(frozen=True)
class CohomologyReport:
    space: str
    coefficient: LocalSystem
    groups: tuple[FgAbelianGroup, ...]
    truncation: int
    stable: bool
    relative_to: Optional[str] = None

    def __getitem__(self, k: int) -> FgAbelianGroup:
        return self.groups[k]


@dataclass(frozen=True)
class ExactSequence:
    """Groups joined by maps[i]: groups[i] -> groups[i+1], with exactness at each interior node."""

    labels: tuple[str, ...]
    groups: tuple[FgAbelianGroup, ...]
    maps: tuple[GroupHom, ...]
    exact_at: tuple[bool, ...]

    @property
    def certified(self) -> bool:
        return all(self.exact_at)

    def group(self, label: str) -> FgAbelianGroup:
        return self.groups[self.labels.index(label)]

    def map_from(self, label: str) -> GroupHom:
        return self.maps[self.labels.index(label)]
