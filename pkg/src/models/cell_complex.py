from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

Orbit = Literal["free", "fixed"]

# a cell of the underlying (non-equivariant) complex: (orbit id, copy),
# copy 0 for fixed cells and orbit representatives, 1 for the τ-partner
FullCell = tuple[str, int]


@dataclass(frozen=True)
class GroupRingElement:
    """a·1 + b·τ in the integral group ring of Z2."""

    a: int = 0
    b: int = 0

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        return GroupRingElement(self.a + other.a, self.b + other.b)

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return GroupRingElement(self.a - other.a, self.b - other.b)

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement(-self.a, -self.b)

    def __mul__(self, other: GroupRingElement | int) -> GroupRingElement:
        if isinstance(other, int):
            return GroupRingElement(self.a * other, self.b * other)
        # τ² = 1
        return GroupRingElement(self.a * other.a + self.b * other.b,
                                self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self) -> GroupRingElement:
        """τ·x, swapping the two coefficients."""
        return GroupRingElement(self.b, self.a)

    def augmentation(self) -> int:
        return self.a + self.b

    def twisted(self, m: int) -> int:
        """Value under τ ↦ (-1)^m."""
        return self.a + (-1) ** m * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self) -> str:
        return f"{self.a}+{self.b}τ"


ONE = GroupRingElement(1, 0)
TAU = GroupRingElement(0, 1)

BoundaryTerms = tuple[tuple[str, GroupRingElement], ...]


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    orbit: Orbit

    @property
    def is_free(self) -> bool:
        return self.orbit == "free"


@dataclass(frozen=True)
class EquivariantCellComplex:
    """A finite Z2-CW complex in orbit encoding.

    Free cells are stored by their orbit representative; the τ-partner is
    implicit and its boundary is τ applied to the representative's boundary.
    A fixed cell carries coefficients with b = 0.
    """

    cells: tuple[Cell, ...] = ()
    boundary: Mapping[str, BoundaryTerms] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        index = {cell.id: cell for cell in self.cells}
        object.__setattr__(self, "_index", index)
        normalized = {}
        for cell in self.cells:
            terms: dict[str, GroupRingElement] = {}
            for target, coefficient in self.boundary.get(cell.id, ()):
                if target in index and not index[target].is_free:
                    coefficient = GroupRingElement(coefficient.augmentation(), 0)
                terms[target] = terms.get(target, GroupRingElement()) + coefficient
            normalized[cell.id] = tuple((t, c) for t, c in terms.items() if not c.is_zero())
        # unknown cells stay in the table; validate() reports them
        normalized.update({k: tuple(v) for k, v in self.boundary.items() if k not in index})
        object.__setattr__(self, "boundary", normalized)

    # Lookup

    def __contains__(self, cell_id: str) -> bool:
        return cell_id in self._index

    def cell(self, cell_id: str) -> Cell:
        return self._index[cell_id]

    @property
    def ids(self) -> list[str]:
        return [cell.id for cell in self.cells]

    @property
    def dimension(self) -> int:
        return max((cell.dim for cell in self.cells), default=-1)

    def cells_in_dim(self, k: int) -> list[Cell]:
        return [cell for cell in self.cells if cell.dim == k]

    @property
    def fixed_cells(self) -> list[Cell]:
        return [cell for cell in self.cells if not cell.is_free]

    @property
    def free_cells(self) -> list[Cell]:
        return [cell for cell in self.cells if cell.is_free]

    @property
    def is_free(self) -> bool:
        return not self.fixed_cells

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def terms(self, cell_id: str) -> BoundaryTerms:
        return self.boundary[cell_id]

    # Underlying complex

    def full_cells(self, k: int) -> list[FullCell]:
        result = []
        for cell in self.cells_in_dim(k):
            result.append((cell.id, 0))
            if cell.is_free:
                result.append((cell.id, 1))
        return result

    def tau(self, full: FullCell) -> FullCell:
        cell_id, copy = full
        return (cell_id, 1 - copy) if self.cell(cell_id).is_free else full

    def full_chain(self, terms: Iterable[tuple[str, GroupRingElement]], copy: int = 0) -> dict[FullCell, int]:
        """Expands orbit-encoded terms into underlying cells, applying τ^copy."""
        chain: dict[FullCell, int] = {}
        for target, coefficient in terms:
            if self.cell(target).is_free:
                first, second = (coefficient.a, coefficient.b) if copy == 0 else (coefficient.b, coefficient.a)
                for key, value in (((target, 0), first), ((target, 1), second)):
                    if value:
                        chain[key] = chain.get(key, 0) + value
            else:
                chain[(target, 0)] = chain.get((target, 0), 0) + coefficient.augmentation()
        return {k: v for k, v in chain.items() if v}

    def full_boundary(self, full: FullCell) -> dict[FullCell, int]:
        cell_id, copy = full
        return self.full_chain(self.boundary[cell_id], copy)

    def encode(self, chain: Mapping[FullCell, int]) -> BoundaryTerms:
        """Orbit encoding of an underlying chain, the inverse of full_chain at copy 0."""
        terms: dict[str, GroupRingElement] = {}
        for (cell_id, copy), value in chain.items():
            piece = GroupRingElement(value, 0) if copy == 0 else GroupRingElement(0, value)
            terms[cell_id] = terms.get(cell_id, GroupRingElement()) + piece
        return tuple((t, c) for t, c in terms.items() if not c.is_zero())

    def counts(self) -> dict[int, dict[str, int]]:
        """Cells per dimension split by orbit type."""
        table: dict[int, dict[str, int]] = {}
        for cell in self.cells:
            row = table.setdefault(cell.dim, {"fixed": 0, "free": 0})
            row[cell.orbit] += 1
        return dict(sorted(table.items()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** cell.dim * (2 if cell.is_free else 1) for cell in self.cells)


@dataclass(frozen=True)
class SubcomplexRef:
    """A τ-invariant subcomplex, named by the ids of its cells in the parent."""

    parent: EquivariantCellComplex
    cell_ids: frozenset[str]

    def __contains__(self, cell_id: str) -> bool:
        return cell_id in self.cell_ids


@dataclass(frozen=True)
class CellularMap:
    """An equivariant cellular chain map, stored on representatives and fixed cells.

    chain[c] is the image of the source cell c as orbit-encoded target terms;
    the image of a τ-partner is τ applied to it.
    """

    source: EquivariantCellComplex
    target: EquivariantCellComplex
    chain: Mapping[str, BoundaryTerms]
    name: str = ""

    def full_image(self, full: FullCell) -> dict[FullCell, int]:
        cell_id, copy = full
        return self.target.full_chain(self.chain.get(cell_id, ()), copy)

    @classmethod
    def inclusion(cls, sub: EquivariantCellComplex, parent: EquivariantCellComplex) -> CellularMap:
        return cls(sub, parent, {cell.id: ((cell.id, ONE),) for cell in sub.cells}, name="inclusion")

    @classmethod
    def identity(cls, complex_: EquivariantCellComplex) -> CellularMap:
        return cls.inclusion(complex_, complex_)

    @classmethod
    def from_cell_map(cls, source: EquivariantCellComplex, target: EquivariantCellComplex,
                      mapping: Mapping[str, str]) -> CellularMap:
        """A cell bijection onto a subcomplex, each cell sent to its image with coefficient 1."""
        return cls(source, target, {s: ((t, ONE),) for s, t in mapping.items()}, name="identification")


def terms(*pairs: tuple[str, int, int] | tuple[str, int]) -> BoundaryTerms:
    """Shorthand for boundary terms: ("e", a) or ("e", a, b)."""
    result = []
    for pair in pairs:
        cell_id, a, *rest = pair
        result.append((cell_id, GroupRingElement(a, rest[0] if rest else 0)))
    return tuple(result)


def make_complex(cells: Sequence[tuple[str, int, Orbit]], boundary: Mapping[str, BoundaryTerms],
                 name: str = "") -> EquivariantCellComplex:
    return EquivariantCellComplex(
        cells=tuple(Cell(cell_id, dim, orbit) for cell_id, dim, orbit in cells),
        boundary=dict(boundary),
        name=name,
    )
