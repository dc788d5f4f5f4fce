from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

# monomial t^{j/2} c^ε, stored as (j, ε)
Monomial = tuple[int, int]


def _normalize(terms: Iterable[tuple[Monomial, int]]) -> tuple[tuple[Monomial, int], ...]:
    collected: dict[Monomial, int] = {}
    for (j, e), value in terms:
        if j < 0 or e < 0:
            raise ValueError(f"negative exponent in t^({j}/2) c^{e}")
        if e >= 2:
            continue  # c² = 0
        collected[(j, e)] = collected.get((j, e), 0) + value
    normal = []
    for (j, e), value in sorted(collected.items()):
        if j >= 1:
            value %= 2  # 2·t^{1/2} = 0
        if value:
            normal.append(((j, e), value))
    return tuple(normal)


@dataclass(frozen=True)
class Cp1RingElement:
    """An element of Z[t^{1/2}, c] / (2t^{1/2}, c²) in normal form.

    t^{j/2} c^ε sits in degree j + 2ε with coefficients Z((j + ε) mod 2);
    coefficients are reduced mod 2 whenever j >= 1.
    """

    terms: tuple[tuple[Monomial, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _normalize(self.terms))

    @classmethod
    def monomial(cls, j: int, e: int = 0, coefficient: int = 1) -> Cp1RingElement:
        return cls((((j, e), coefficient),))

    @classmethod
    def one(cls) -> Cp1RingElement:
        return cls.monomial(0, 0)

    @classmethod
    def t_half(cls) -> Cp1RingElement:
        return cls.monomial(1, 0)

    @classmethod
    def c(cls) -> Cp1RingElement:
        return cls.monomial(0, 1)

    def __add__(self, other: Cp1RingElement) -> Cp1RingElement:
        return Cp1RingElement(self.terms + other.terms)

    def __mul__(self, other: Cp1RingElement | int) -> Cp1RingElement:
        if isinstance(other, int):
            return Cp1RingElement(tuple((m, value * other) for m, value in self.terms))
        return Cp1RingElement(tuple(
            ((j1 + j2, e1 + e2), a * b)
            for (j1, e1), a in self.terms
            for (j2, e2), b in other.terms
        ))

    __rmul__ = __mul__

    def coefficient(self, j: int, e: int) -> int:
        return dict(self.terms).get((j, e), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (j, e), value in self.terms:
            factors = []
            if j:
                factors.append("t" if j == 2 else f"t^({j}/2)" if j % 2 else f"t^{j // 2}")
            if e:
                factors.append("c")
            body = "·".join(factors) or "1"
            parts.append(body if value == 1 else f"{value}{body}")
        return " + ".join(parts)
