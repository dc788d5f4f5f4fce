from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Iterator, Sequence

from sympy import factorint

from src.models.integer_matrix import IntegerMatrix
from src.utils.exceptions import DimensionMismatchError, IllFormedHomError, InfiniteGroupError


@dataclass(frozen=True, order=True)
class FgAbelianGroup:
    """Z^rank ⊕ Z_{d1} ⊕ ... ⊕ Z_{dk} with d_i >= 2 and d_i | d_{i+1}.

    Generators are ordered free part first, then torsion in invariant-factor order.
    Elements are integer tuples of length rank + len(torsion), torsion
    coordinates reduced into [0, d_i).
    """

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError(f"negative rank {self.rank}")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be at least 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} break the divisibility chain")

    @classmethod
    def trivial(cls) -> FgAbelianGroup:
        return cls()

    @classmethod
    def free(cls, rank: int) -> FgAbelianGroup:
        return cls(rank=rank)

    @classmethod
    def cyclic(cls, n: int) -> FgAbelianGroup:
        """Z for n = 0, the trivial group for n = 1, Z_n otherwise."""
        if n == 0:
            return cls(rank=1)
        n = abs(n)
        return cls() if n == 1 else cls(torsion=(n,))

    @classmethod
    def from_elementary_divisors(cls, rank: int, prime_powers: Sequence[int]) -> FgAbelianGroup:
        """Assembles invariant factors from a multiset of prime powers."""
        by_prime: dict[int, list[int]] = {}
        for q in prime_powers:
            if q == 1:
                continue
            (p, _), = factorint(q).items()
            by_prime.setdefault(p, []).append(q)
        length = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * length
        for powers in by_prime.values():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[length - 1 - i] *= q
        return cls(rank=rank, torsion=tuple(f for f in factors if f > 1))

    # Shape

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each generator, 0 for free generators."""
        return (0,) * self.rank + self.torsion

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> int | None:
        return prod(self.torsion) if self.is_finite else None

    def exponent(self) -> int | None:
        if not self.is_finite:
            return None
        return self.torsion[-1] if self.torsion else 1

    def elementary_divisors(self) -> list[int]:
        divisors = []
        for d in self.torsion:
            divisors.extend(p**e for p, e in sorted(factorint(d).items()))
        return sorted(divisors)

    def torsion_part(self) -> FgAbelianGroup:
        return FgAbelianGroup(torsion=self.torsion)

    # Elements

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def reduce(self, element: Sequence[int]) -> tuple[int, ...]:
        if len(element) != self.ngens:
            raise DimensionMismatchError(f"element of length {len(element)} in a group with {self.ngens} generators")
        return tuple(int(x) % d if d else int(x) for x, d in zip(element, self.orders))

    def add(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(x, y)])

    def scale(self, k: int, x: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([k * a for a in x])

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite:
            raise InfiniteGroupError(f"cannot enumerate the elements of {self}")
        return product(*(range(d) for d in self.torsion))

    def relation_matrix(self) -> IntegerMatrix:
        """Rows are relations on the generators (one per torsion generator)."""
        rows = []
        for i, d in enumerate(self.orders):
            if d:
                row = [0] * self.ngens
                row[i] = d
                rows.append(row)
        return IntegerMatrix.from_rows(rows, cols=self.ngens)

    def sort_key(self) -> tuple:
        return (self.rank, len(self.torsion), self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by its matrix on generators (target.ngens × source.ngens)."""

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: IntegerMatrix = field(compare=True)

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise IllFormedHomError(
                f"matrix shape {self.matrix.shape} does not fit {self.source} -> {self.target}"
            )
        # normalize torsion rows, then check source relations land in target relations
        rows = [
            [v % d if d else v for v in self.matrix.row(i)]
            for i, d in enumerate(self.target.orders)
        ]
        normalized = IntegerMatrix.from_rows(rows, cols=self.source.ngens)
        object.__setattr__(self, "matrix", normalized)
        for j, order in enumerate(self.source.orders):
            if order == 0:
                continue
            image = self.target.reduce([order * v for v in normalized.column(j)])
            if any(image):
                raise IllFormedHomError(
                    f"generator {j} of order {order} maps to an element of different order in {self.target}"
                )

    @classmethod
    def from_images(cls, source: FgAbelianGroup, target: FgAbelianGroup,
                    images: Sequence[Sequence[int]]) -> GroupHom:
        """Builds the hom sending source generator j to images[j]."""
        return cls(source, target, IntegerMatrix.from_columns([list(v) for v in images], rows=target.ngens))

    @classmethod
    def identity(cls, group: FgAbelianGroup) -> GroupHom:
        return cls(group, group, IntegerMatrix.identity(group.ngens))

    @classmethod
    def zero(cls, source: FgAbelianGroup, target: FgAbelianGroup) -> GroupHom:
        return cls(source, target, IntegerMatrix.zeros(target.ngens, source.ngens))

    def __call__(self, element: Sequence[int]) -> tuple[int, ...]:
        return self.target.reduce(self.matrix.apply(list(element)))

    def compose(self, inner: GroupHom) -> GroupHom:
        """self ∘ inner."""
        if inner.target != self.source:
            raise IllFormedHomError(f"cannot compose {inner.source} -> {inner.target} with {self.source} -> {self.target}")
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __str__(self) -> str:
        return f"{self.source} -> {self.target} {self.matrix.to_rows()}"
