import logging
from typing import Iterable, Mapping

from src.models.abelian_group import FgAbelianGroup
from src.models.cell_complex import (
    ONE,
    BoundaryTerms,
    Cell,
    CellularMap,
    EquivariantCellComplex,
    FullCell,
    GroupRingElement,
    SubcomplexRef,
)
from src.models.cohomology import CochainComplex
from src.models.integer_matrix import IntegerMatrix
from src.services.cochain_service import CochainService
from src.utils.exceptions import (
    InvalidComplexError,
    InvalidParameterError,
    NonCellularMapError,
    NotASubcomplexError,
)

logger = logging.getLogger(__name__)


def _add_into(total: dict, chain: Mapping, k: int = 1):
    for key, value in chain.items():
        total[key] = total.get(key, 0) + k * value


def _clean(chain: Mapping) -> dict:
    return {key: value for key, value in chain.items() if value}


class ComplexService:
    """Validation, constructors and invariants of finite Z2-CW complexes."""

    # Validation

    @staticmethod
    def validate(X: EquivariantCellComplex) -> list[str]:
        """
        Lists every violated invariant of X. An empty list means X is valid.
        """
        problems = []
        seen = set()
        for cell in X.cells:
            if cell.id in seen:
                problems.append(f"duplicate cell id '{cell.id}'")
            seen.add(cell.id)
            if cell.dim < 0:
                problems.append(f"cell '{cell.id}' has negative dimension {cell.dim}")
            if cell.orbit not in ("free", "fixed"):
                problems.append(f"cell '{cell.id}' has unknown orbit type '{cell.orbit}'")
        for key in X.boundary:
            if key not in X:
                problems.append(f"boundary given for unknown cell '{key}'")
        if problems:
            return problems

        well_formed = True
        for cell in X.cells:
            for target, coefficient in X.terms(cell.id):
                if target not in X:
                    problems.append(f"boundary of '{cell.id}' refers to unknown cell '{target}'")
                    well_formed = False
                elif X.cell(target).dim != cell.dim - 1:
                    problems.append(f"boundary of '{cell.id}' (dim {cell.dim}) contains '{target}' of dim {X.cell(target).dim}")
                    well_formed = False
                elif not cell.is_free and X.cell(target).is_free:
                    problems.append(f"fixed cell '{cell.id}' has free cell '{target}' in its boundary")
        if not well_formed:
            return problems

        for cell in X.cells:
            if cell.dim < 2:
                continue
            twice = ComplexService.boundary_of_chain(X, X.full_boundary((cell.id, 0)))
            for (target, copy), value in sorted(twice.items()):
                problems.append(f"∂∂({cell.id}) ≠ 0 at cell {'τ' if copy else ''}{target} (coefficient {value})")
        return problems

    @staticmethod
    def ensure_valid(X: EquivariantCellComplex) -> EquivariantCellComplex:
        problems = ComplexService.validate(X)
        if problems:
            raise InvalidComplexError(f"invalid complex '{X.name}': " + "; ".join(problems))
        return X

    @staticmethod
    def boundary_of_chain(X: EquivariantCellComplex, chain: Mapping[FullCell, int]) -> dict[FullCell, int]:
        total: dict[FullCell, int] = {}
        for full, value in chain.items():
            _add_into(total, X.full_boundary(full), value)
        return _clean(total)

    @staticmethod
    def validate_map(f: CellularMap) -> list[str]:
        """
        Checks that f is a degree-preserving equivariant chain map:
        vertices go to single vertices, fixed cells into the fixed subcomplex
        and f∂ = ∂f on every cell.
        """
        problems = []
        source, target = f.source, f.target
        for key in f.chain:
            if key not in source:
                problems.append(f"map given on unknown source cell '{key}'")
        for cell in source.cells:
            for image, _ in f.chain.get(cell.id, ()):
                if image not in target:
                    problems.append(f"'{cell.id}' maps onto unknown cell '{image}'")
                elif target.cell(image).dim != cell.dim:
                    problems.append(f"'{cell.id}' (dim {cell.dim}) maps onto '{image}' of dim {target.cell(image).dim}")
                elif not cell.is_free and target.cell(image).is_free:
                    problems.append(f"fixed cell '{cell.id}' maps onto free cell '{image}'")
        if problems:
            return problems
        for cell in source.cells_in_dim(0):
            image = f.full_image((cell.id, 0))
            if list(image.values()) != [1]:
                problems.append(f"vertex '{cell.id}' does not map to a single vertex")
        for cell in source.cells:
            if cell.dim == 0:
                continue
            pushed: dict[FullCell, int] = {}
            for full, value in source.full_boundary((cell.id, 0)).items():
                _add_into(pushed, f.full_image(full), value)
            expected = ComplexService.boundary_of_chain(target, f.full_image((cell.id, 0)))
            if _clean(pushed) != expected:
                problems.append(f"chain map does not commute with the boundary at '{cell.id}'")
        return problems

    # Subcomplexes

    @staticmethod
    def subcomplex_ref(X: EquivariantCellComplex, ids: Iterable[str]) -> SubcomplexRef:
        ids = frozenset(ids)
        unknown = sorted(i for i in ids if i not in X)
        if unknown:
            raise NotASubcomplexError(f"cells {unknown} are not in '{X.name}'")
        for cell_id in ids:
            missing = [t for t, _ in X.terms(cell_id) if t not in ids]
            if missing:
                raise NotASubcomplexError(f"boundary of '{cell_id}' leaves the subcomplex through {sorted(missing)}")
        return SubcomplexRef(X, ids)

    @staticmethod
    def subcomplex(ref: SubcomplexRef, name: str = "") -> EquivariantCellComplex:
        X = ref.parent
        return EquivariantCellComplex(
            cells=tuple(cell for cell in X.cells if cell.id in ref.cell_ids),
            boundary={cell_id: X.terms(cell_id) for cell_id in ref.cell_ids},
            name=name or f"{X.name}|sub",
        )

    @staticmethod
    def closure(X: EquivariantCellComplex, ids: Iterable[str]) -> SubcomplexRef:
        """Smallest subcomplex containing the given cells."""
        pending = list(ids)
        closed: set[str] = set()
        while pending:
            cell_id = pending.pop()
            if cell_id in closed:
                continue
            closed.add(cell_id)
            pending.extend(t for t, _ in X.terms(cell_id))
        return ComplexService.subcomplex_ref(X, closed)

    @staticmethod
    def fixed_subcomplex(X: EquivariantCellComplex) -> EquivariantCellComplex:
        ref = ComplexService.subcomplex_ref(X, (cell.id for cell in X.fixed_cells))
        return ComplexService.subcomplex(ref, name=f"{X.name}^τ")

    @staticmethod
    def is_subcomplex_of(A: EquivariantCellComplex, X: EquivariantCellComplex) -> bool:
        for cell in A.cells:
            if cell.id not in X or X.cell(cell.id) != cell:
                return False
            if dict(A.terms(cell.id)) != dict(X.terms(cell.id)):
                return False
        return True

    # Constructors

    @staticmethod
    def product(X: EquivariantCellComplex, Y: EquivariantCellComplex, name: str = "") -> EquivariantCellComplex:
        """
        X × Y with the diagonal involution.

        A free×free pair of orbits gives two product orbits, represented by
        x×y and x×τy (ids "x.y" and "x.~y"); every other pair gives one.
        Boundaries follow ∂(a×b) = ∂a×b + (-1)^{dim a} a×∂b.
        """
        cells = []
        for x in X.cells:
            for y in Y.cells:
                orbit = "free" if x.is_free or y.is_free else "fixed"
                cells.append(Cell(f"{x.id}.{y.id}", x.dim + y.dim, orbit))
                if x.is_free and y.is_free:
                    cells.append(Cell(f"{x.id}.~{y.id}", x.dim + y.dim, "free"))
        cells.sort(key=lambda cell: cell.dim)

        def locate(xf: FullCell, yf: FullCell) -> FullCell:
            (x, s), (y, t) = xf, yf
            x_free, y_free = X.cell(x).is_free, Y.cell(y).is_free
            if x_free and y_free:
                return (f"{x}.{y}", s) if s == t else (f"{x}.~{y}", s)
            if x_free:
                return (f"{x}.{y}", s)
            if y_free:
                return (f"{x}.{y}", t)
            return (f"{x}.{y}", 0)

        boundary = {}
        for x in X.cells:
            for y in Y.cells:
                reps = [((x.id, 0), (y.id, 0))]
                if x.is_free and y.is_free:
                    reps.append(((x.id, 0), (y.id, 1)))
                for xf, yf in reps:
                    chain: dict[FullCell, int] = {}
                    for xb, value in X.full_boundary(xf).items():
                        _add_into(chain, {locate(xb, yf): value})
                    sign = (-1) ** x.dim
                    for yb, value in Y.full_boundary(yf).items():
                        _add_into(chain, {locate(xf, yb): sign * value})
                    cell_id = locate(xf, yf)[0]
                    boundary[cell_id] = _clean(chain)

        encoded = {
            cell_id: tuple(
                (target, GroupRingElement(value, 0) if copy == 0 else GroupRingElement(0, value))
                for (target, copy), value in chain.items()
            )
            for cell_id, chain in boundary.items()
        }
        result = EquivariantCellComplex(tuple(cells), encoded, name=name or f"{X.name}×{Y.name}")
        logger.debug(f"product {result.name}: {len(cells)} orbit cells")
        return result

    @staticmethod
    def glue(X1: EquivariantCellComplex, X2: EquivariantCellComplex, attaching: CellularMap,
             prefixes: tuple[str, str] = ("a:", "b:"), name: str = "") -> EquivariantCellComplex:
        """
        The adjunction space X2 ∪_g X1 of an equivariant cellular chain map
        g: A -> X2 from a subcomplex A of X1.

        Cells are those of X2 and those of X1 outside A, renamed with the
        prefixes; boundary terms of X1 that land in A are replaced by their
        images under g. A cell bijection onto a subcomplex of X2 is the pushout
        along an identification of subcomplexes.
        """
        A = attaching.source
        if attaching.target is not X2 and attaching.target != X2:
            raise NonCellularMapError("attaching map does not land in the second complex")
        if not ComplexService.is_subcomplex_of(A, X1):
            raise NotASubcomplexError(f"'{A.name}' is not a subcomplex of '{X1.name}'")
        ComplexService.subcomplex_ref(X1, A.ids)
        problems = ComplexService.validate_map(attaching)
        if problems:
            raise NonCellularMapError("attaching map rejected: " + "; ".join(problems))

        p1, p2 = prefixes
        cells = [Cell(p2 + cell.id, cell.dim, cell.orbit) for cell in X2.cells]
        boundary: dict[str, BoundaryTerms] = {
            p2 + cell.id: tuple((p2 + t, c) for t, c in X2.terms(cell.id)) for cell in X2.cells
        }
        for cell in X1.cells:
            if cell.id in A:
                continue
            cells.append(Cell(p1 + cell.id, cell.dim, cell.orbit))
            terms: list[tuple[str, GroupRingElement]] = []
            for target, coefficient in X1.terms(cell.id):
                if target in A:
                    terms.extend((p2 + image, coefficient * value) for image, value in attaching.chain.get(target, ()))
                else:
                    terms.append((p1 + target, coefficient))
            boundary[p1 + cell.id] = tuple(terms)
        cells.sort(key=lambda cell: cell.dim)
        result = EquivariantCellComplex(tuple(cells), boundary, name=name or f"{X2.name}∪{X1.name}")
        return ComplexService.ensure_valid(result)

    @staticmethod
    def identify(X1: EquivariantCellComplex, X2: EquivariantCellComplex, mapping: Mapping[str, str],
                 prefixes: tuple[str, str] = ("a:", "b:"), name: str = "") -> EquivariantCellComplex:
        """Glues along a cell bijection between subcomplexes of X1 and X2."""
        if len(set(mapping.values())) != len(mapping):
            raise NonCellularMapError("identification is not injective")
        A = ComplexService.subcomplex(ComplexService.subcomplex_ref(X1, mapping.keys()), name=f"{X1.name}|A")
        ComplexService.subcomplex_ref(X2, mapping.values())
        for source, image in mapping.items():
            if X1.cell(source).dim != X2.cell(image).dim or X1.cell(source).orbit != X2.cell(image).orbit:
                raise NonCellularMapError(f"'{source}' and '{image}' differ in dimension or orbit type")
        return ComplexService.glue(X1, X2, CellularMap.from_cell_map(A, X2, mapping), prefixes, name)

    @staticmethod
    def disjoint_union(X1: EquivariantCellComplex, X2: EquivariantCellComplex,
                       prefixes: tuple[str, str] = ("a:", "b:")) -> EquivariantCellComplex:
        empty = EquivariantCellComplex(name="∅")
        return ComplexService.glue(X1, X2, CellularMap(empty, X2, {}), prefixes, name=f"{X1.name}⊔{X2.name}")

    @staticmethod
    def subdivide_circle_map(n: int) -> tuple[EquivariantCellComplex, CellularMap]:
        """
        A circle with trivial involution cut into n vertices and n edges, with
        the cellular map onto the one-vertex circle sending every edge to the
        single edge. The map has degree n.
        """
        if n < 1:
            raise InvalidParameterError(f"a circle needs at least one edge, got {n}")
        target = EquivariantCellComplex((Cell("v", 0, "fixed"), Cell("s", 1, "fixed")), {}, name="circle_trivial")
        cells = [(f"v{i}", 0, "fixed") for i in range(n)] + [(f"e{i}", 1, "fixed") for i in range(n)]
        boundary = {
            f"e{i}": ((f"v{(i + 1) % n}", ONE), (f"v{i}", -ONE)) for i in range(n)
        }
        circle = EquivariantCellComplex(
            tuple(Cell(c, d, o) for c, d, o in cells), boundary, name=f"circle_{n}"
        )
        chain = {f"v{i}": (("v", ONE),) for i in range(n)}
        chain.update({f"e{i}": (("s", ONE),) for i in range(n)})
        return circle, CellularMap(circle, target, chain, name=f"degree_{n}")

    @staticmethod
    def orbit_complex(X: EquivariantCellComplex) -> EquivariantCellComplex:
        """The quotient X/τ of a free complex, one cell per orbit, τ sent to 1."""
        if not X.is_free:
            raise InvalidParameterError(f"'{X.name}' has fixed cells; the orbit complex needs a free action")
        cells = tuple(Cell(cell.id, cell.dim, "fixed") for cell in X.cells)
        boundary = {
            cell.id: tuple((t, GroupRingElement(c.augmentation(), 0)) for t, c in X.terms(cell.id))
            for cell in X.cells
        }
        return EquivariantCellComplex(cells, boundary, name=f"{X.name}/τ")

    # Invariants

    @staticmethod
    def euler_characteristic(X: EquivariantCellComplex) -> int:
        return X.euler_characteristic()

    @staticmethod
    def components(X: EquivariantCellComplex) -> list[frozenset[FullCell]]:
        """Connected components of the underlying complex, as sets of cells."""
        parent: dict[FullCell, FullCell] = {}

        def find(u: FullCell) -> FullCell:
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        everything = [full for k in range(X.dimension + 1) for full in X.full_cells(k)]
        for full in everything:
            parent[full] = full
        for full in everything:
            for other in X.full_boundary(full):
                parent[find(other)] = find(full)
        groups: dict[FullCell, set[FullCell]] = {}
        for full in everything:
            groups.setdefault(find(full), set()).add(full)
        return sorted((frozenset(g) for g in groups.values()), key=lambda g: sorted(g))

    @staticmethod
    def cellular_cochains(X: EquivariantCellComplex) -> CochainComplex:
        """Cellular cochains of the underlying complex, forgetting τ."""
        labels = tuple(tuple(X.full_cells(k)) for k in range(X.dimension + 1))
        differentials = []
        for k in range(X.dimension):
            rows = {full: i for i, full in enumerate(labels[k + 1])}
            cols = {full: j for j, full in enumerate(labels[k])}
            delta = [[0] * len(cols) for _ in rows]
            for full, i in rows.items():
                for face, value in X.full_boundary(full).items():
                    delta[i][cols[face]] += value
            differentials.append(IntegerMatrix.from_rows(delta, cols=len(cols)))
        return CochainComplex(labels, tuple(differentials))

    @staticmethod
    def ordinary_cohomology(X: EquivariantCellComplex, max_deg: int) -> list[FgAbelianGroup]:
        """Non-equivariant cellular cohomology H^k(X; Z) for k = 0..max_deg."""
        C = ComplexService.cellular_cochains(X)
        return [h.group for h in CochainService.cohomology_groups(C, max_deg)]
