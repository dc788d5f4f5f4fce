import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional

from src.config.settings import get_settings
from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.cell_complex import CellularMap, EquivariantCellComplex, FullCell, SubcomplexRef
from src.models.cohomology import (
    CochainComplex,
    CohomologyGroup,
    CohomologyReport,
    ExactSequence,
    LocalSystem,
)
from src.models.integer_matrix import IntegerMatrix
from src.services.abelian_service import AbelianService
from src.services.cochain_service import CochainService
from src.services.complex_service import ComplexService
from src.utils.exceptions import (
    ExactnessError,
    InvalidParameterError,
    NonCellularMapError,
    NotACoverError,
    StabilityError,
)

logger = logging.getLogger(__name__)

# orbit of X × S^N: (cell of X, sphere dimension j, twisted); the twisted
# orbit of a free×free pair is represented by x × τe_j
OrbitKey = tuple[str, int, bool]


def _locate(X: EquivariantCellComplex, x: FullCell, j: int, t: int) -> tuple[OrbitKey, int]:
    """Orbit and copy of the product cell (x, s) × (e_j, t)."""
    cell_id, s = x
    if not X.cell(cell_id).is_free:
        return (cell_id, j, False), t
    if s == t:
        return (cell_id, j, False), s
    return (cell_id, j, True), s


def _sphere_boundary(j: int, t: int) -> dict[tuple[int, int], int]:
    # ∂e_j = e_{j-1} + (-1)^j τe_{j-1}, and τ applied for the partner
    if j == 0:
        return {}
    return {(j - 1, t): 1, (j - 1, 1 - t): (-1) ** j}


@dataclass
class BorelCochains:
    """Equivariant cochains of X × S^N with values in Z(m), one basis element per orbit."""

    X: EquivariantCellComplex
    coefficient: LocalSystem
    N: int
    complex: CochainComplex

    def over(self, ids: Iterable[str]) -> CochainComplex:
        """Cochains of Y × S^N for the subcomplex Y with the given cells."""
        ids = frozenset(ids)
        return BorelService.restrict(self.complex, lambda key: key[0] in ids)

    def relative(self, ids: Iterable[str]) -> CochainComplex:
        """Cochains vanishing on Y × S^N."""
        ids = frozenset(ids)
        return BorelService.restrict(self.complex, lambda key: key[0] not in ids)


class BorelService:
    """Borel equivariant cohomology H^k_{Z2}(X, Z(m)) through finite truncations X × S^N."""

    @staticmethod
    def truncation(max_deg: int) -> int:
        return max_deg + get_settings().truncation_margin

    @staticmethod
    def cochains(X: EquivariantCellComplex, coefficient: LocalSystem, N: int) -> BorelCochains:
        """
        Cochain complex of Z2-maps from the cellular chains of X × S^N into Z(m).

        The product is free, so each orbit contributes one generator and δ is
        the transposed boundary with τ evaluated as (-1)^m. This evaluation is
        the only place the twist enters.
        """
        m = coefficient.m
        top = X.dimension + N
        labels: list[list[OrbitKey]] = [[] for _ in range(top + 1)]
        for cell in X.cells:
            for j in range(N + 1):
                labels[cell.dim + j].append((cell.id, j, False))
                if cell.is_free:
                    labels[cell.dim + j].append((cell.id, j, True))
        index = [{key: i for i, key in enumerate(level)} for level in labels]

        differentials = []
        for k in range(top):
            delta = [[0] * len(labels[k]) for _ in labels[k + 1]]
            for row, (cell_id, j, twisted) in enumerate(labels[k + 1]):
                x = (cell_id, 0)
                t = 1 if twisted else 0
                for face, value in X.full_boundary(x).items():
                    key, copy = _locate(X, face, j, t)
                    delta[row][index[k][key]] += value * (-1) ** (m * copy)
                sign = (-1) ** X.cell(cell_id).dim
                for (i, u), value in _sphere_boundary(j, t).items():
                    key, copy = _locate(X, x, i, u)
                    delta[row][index[k][key]] += sign * value * (-1) ** (m * copy)
            differentials.append(IntegerMatrix.from_rows(delta, cols=len(labels[k])))
        complex_ = CochainComplex(tuple(tuple(level) for level in labels), tuple(differentials))
        logger.debug(f"Borel cochains of {X.name} at N={N}: {[len(level) for level in labels]}")
        return BorelCochains(X, coefficient, N, complex_)

    @staticmethod
    def restrict(C: CochainComplex, keep: Callable[[Hashable], bool]) -> CochainComplex:
        """The subquotient complex on the basis labels satisfying keep."""
        chosen = [[i for i, label in enumerate(level) if keep(label)] for level in C.labels]
        labels = tuple(tuple(level[i] for i in rows) for level, rows in zip(C.labels, chosen))
        differentials = tuple(
            C.differential(k).select_rows(chosen[k + 1]).select_columns(chosen[k])
            for k in range(len(C.labels) - 1)
        )
        return CochainComplex(labels, differentials)

    @staticmethod
    def pullback(f: CellularMap, coefficient: LocalSystem, N: int, k: int) -> IntegerMatrix:
        """Degree-k cochain map C(X' × S^N) -> C(X × S^N) of f × id."""
        source, target = f.source, f.target
        m = coefficient.m
        rows = BorelService.cochains_labels(source, N, k)
        cols = {key: i for i, key in enumerate(BorelService.cochains_labels(target, N, k))}
        F = [[0] * len(cols) for _ in rows]
        for r, (cell_id, j, twisted) in enumerate(rows):
            t = 1 if twisted else 0
            for image, value in f.full_image((cell_id, 0)).items():
                key, copy = _locate(target, image, j, t)
                F[r][cols[key]] += value * (-1) ** (m * copy)
        return IntegerMatrix.from_rows(F, cols=len(cols))

    @staticmethod
    def cochains_labels(X: EquivariantCellComplex, N: int, k: int) -> list[OrbitKey]:
        labels = []
        for cell in X.cells:
            j = k - cell.dim
            if 0 <= j <= N:
                labels.append((cell.id, j, False))
                if cell.is_free:
                    labels.append((cell.id, j, True))
        return labels

    # Cohomology

    @staticmethod
    def _groups(X: EquivariantCellComplex, coefficient: LocalSystem, max_deg: int, N: int,
                relative_ids: Optional[frozenset[str]] = None) -> list[FgAbelianGroup]:
        cochains = BorelService.cochains(X, coefficient, N)
        C = cochains.complex if relative_ids is None else cochains.relative(relative_ids)
        return [h.group for h in CochainService.cohomology_groups(C, max_deg)]

    @staticmethod
    def _report(X: EquivariantCellComplex, coefficient: LocalSystem, max_deg: int,
                relative_ids: Optional[frozenset[str]], relative_to: Optional[str]) -> CohomologyReport:
        if max_deg < 0:
            raise InvalidParameterError(f"max degree must be non-negative, got {max_deg}")
        N = BorelService.truncation(max_deg)
        logger.info(f"equivariant cohomology of {X.name} with {coefficient}, degrees 0..{max_deg}, N={N}")
        groups = BorelService._groups(X, coefficient, max_deg, N, relative_ids)
        stable = False
        if get_settings().stability_check:
            again = BorelService._groups(X, coefficient, max_deg, N + 1, relative_ids)
            if again != groups:
                raise StabilityError(
                    f"{X.name}: truncations N={N} and N={N + 1} disagree: "
                    f"{[str(g) for g in groups]} vs {[str(g) for g in again]}"
                )
            stable = True
        return CohomologyReport(
            space=X.name, coefficient=coefficient, groups=tuple(groups),
            truncation=N, stable=stable, relative_to=relative_to,
        )

    @staticmethod
    def equivariant_cohomology(X: EquivariantCellComplex, coefficient: LocalSystem, max_deg: int) -> CohomologyReport:
        return BorelService._report(X, coefficient, max_deg, None, None)

    @staticmethod
    def relative_equivariant_cohomology(X: EquivariantCellComplex, Y: SubcomplexRef,
                                        coefficient: LocalSystem, max_deg: int,
                                        label: Optional[str] = None) -> CohomologyReport:
        """H^k_{Z2}(X|Y, Z(m)) from the cochains vanishing on Y × S^N."""
        ref = ComplexService.subcomplex_ref(X, Y.cell_ids)
        return BorelService._report(X, coefficient, max_deg, ref.cell_ids, label or f"{len(ref.cell_ids)} cells")

    @staticmethod
    def relative_to_fixed(X: EquivariantCellComplex, coefficient: LocalSystem, max_deg: int) -> CohomologyReport:
        fixed = ComplexService.subcomplex_ref(X, (cell.id for cell in X.fixed_cells))
        return BorelService.relative_equivariant_cohomology(X, fixed, coefficient, max_deg, label="fixed")

    @staticmethod
    def reduced_cohomology(X: EquivariantCellComplex, basepoint: Optional[str],
                           coefficient: LocalSystem, max_deg: int) -> CohomologyReport:
        """Cohomology relative to a fixed 0-cell, the first one when basepoint is None."""
        candidates = [cell.id for cell in X.cells_in_dim(0) if not cell.is_free]
        if not candidates:
            raise InvalidParameterError(f"'{X.name}' has no fixed 0-cell to use as basepoint")
        basepoint = basepoint or candidates[0]
        if basepoint not in candidates:
            raise InvalidParameterError(f"'{basepoint}' is not a fixed 0-cell of '{X.name}'")
        ref = ComplexService.subcomplex_ref(X, [basepoint])
        return BorelService.relative_equivariant_cohomology(X, ref, coefficient, max_deg, label=basepoint)

    # Maps

    @staticmethod
    def induced_map(f: CellularMap, coefficient: LocalSystem, k: int) -> GroupHom:
        """
        f^*: H^k_{Z2}(X', Z(m)) -> H^k_{Z2}(X, Z(m)) for f: X -> X', computed by
        pulling back cocycle generators and solving for source coordinates.
        """
        problems = ComplexService.validate_map(f)
        if problems:
            raise NonCellularMapError("; ".join(problems))
        N = BorelService.truncation(k)
        target = CochainService.cohomology(BorelService.cochains(f.target, coefficient, N).complex, k)
        source = CochainService.cohomology(BorelService.cochains(f.source, coefficient, N).complex, k)
        F = BorelService.pullback(f, coefficient, N, k)
        return CochainService.induced_hom(F, target, source)

    @staticmethod
    def restriction(X: EquivariantCellComplex, Y: SubcomplexRef, coefficient: LocalSystem, k: int) -> GroupHom:
        """H^k_{Z2}(X) -> H^k_{Z2}(Y) along the inclusion."""
        sub = ComplexService.subcomplex(ComplexService.subcomplex_ref(X, Y.cell_ids), name=f"{X.name}|Y")
        return BorelService.induced_map(CellularMap.inclusion(sub, X), coefficient, k)

    @staticmethod
    def cokernel_of_restriction(X: EquivariantCellComplex, coefficient: LocalSystem, k: int) -> FgAbelianGroup:
        """Coker^k(X|X^τ): cokernel of H^k_{Z2}(X) -> H^k_{Z2}(X^τ)."""
        fixed = ComplexService.subcomplex_ref(X, (cell.id for cell in X.fixed_cells))
        r = BorelService.restriction(X, fixed, coefficient, k)
        return AbelianService.hom_cokernel(r).group

    # Exact sequences

    @staticmethod
    def _node(C: CochainComplex, k: int) -> CohomologyGroup:
        return CochainService.cohomology(C, k)

    @staticmethod
    def _certify(labels, groups, maps, name: str) -> ExactSequence:
        exact = tuple(
            AbelianService.check_exact_at(maps[i - 1], maps[i]) for i in range(1, len(groups) - 1)
        )
        sequence = ExactSequence(tuple(labels), tuple(groups), tuple(maps), exact)
        if not sequence.certified:
            failed = [labels[i + 1] for i, ok in enumerate(exact) if not ok]
            raise ExactnessError(f"{name} is not exact at {failed}")
        logger.info(f"{name}: exactness certified at {len(exact)} nodes")
        return sequence

    @staticmethod
    def les_of_pair(X: EquivariantCellComplex, Y: SubcomplexRef, coefficient: LocalSystem,
                    lo: int, hi: int) -> ExactSequence:
        """
        ... -> H^k(X|Y) -> H^k(X) -> H^k(Y) -> H^{k+1}(X|Y) -> ... for k = lo..hi,
        all maps assembled at cochain level. A leading zero group is added when lo = 0.
        """
        if not 0 <= lo <= hi:
            raise InvalidParameterError(f"bad degree range {lo}..{hi}")
        ref = ComplexService.subcomplex_ref(X, Y.cell_ids)
        N = BorelService.truncation(hi + 1)
        cochains = BorelService.cochains(X, coefficient, N)
        full, sub, rel = cochains.complex, cochains.over(ref.cell_ids), cochains.relative(ref.cell_ids)
        R = CochainService.restriction_matrix

        labels, groups, maps = [], [], []
        nodes: list[CohomologyGroup] = []
        matrices: list[IntegerMatrix] = []
        for k in range(lo, hi + 1):
            h_rel, h_abs, h_sub = BorelService._node(rel, k), BorelService._node(full, k), BorelService._node(sub, k)
            if nodes:
                # δ1: extend a cocycle on Y by zero, take δ in X, keep the part off Y
                connecting = R(full.labels[k], rel.labels[k]) @ full.differential(k - 1) @ R(sub.labels[k - 1], full.labels[k - 1])
                matrices.append(connecting)
            nodes += [h_rel, h_abs, h_sub]
            labels += [f"H^{k}(X|Y)", f"H^{k}(X)", f"H^{k}(Y)"]
            matrices += [R(rel.labels[k], full.labels[k]), R(full.labels[k], sub.labels[k])]
        for i, F in enumerate(matrices):
            maps.append(CochainService.induced_hom(F, nodes[i], nodes[i + 1]))
        groups = [h.group for h in nodes]
        if lo == 0:
            zero = FgAbelianGroup.trivial()
            labels.insert(0, "0")
            groups.insert(0, zero)
            maps.insert(0, GroupHom.zero(zero, groups[1]))
        return BorelService._certify(labels, groups, maps, name=f"LES of ({X.name}, Y)")

    @staticmethod
    def mayer_vietoris_check(X: EquivariantCellComplex, U1: SubcomplexRef, U2: SubcomplexRef,
                             coefficient: LocalSystem, lo: int, hi: int) -> ExactSequence:
        """
        ... -> H^k(X) -> H^k(U1) ⊕ H^k(U2) -> H^k(U1 ∩ U2) -> H^{k+1}(X) -> ...
        certified exact for k = lo..hi.
        """
        if not 0 <= lo <= hi:
            raise InvalidParameterError(f"bad degree range {lo}..{hi}")
        first = ComplexService.subcomplex_ref(X, U1.cell_ids)
        second = ComplexService.subcomplex_ref(X, U2.cell_ids)
        if first.cell_ids | second.cell_ids != frozenset(X.ids):
            raise NotACoverError(f"subcomplexes do not cover '{X.name}'")
        shared = first.cell_ids & second.cell_ids
        N = BorelService.truncation(hi + 1)
        cochains = BorelService.cochains(X, coefficient, N)
        full = cochains.complex
        C1, C2, CA = cochains.over(first.cell_ids), cochains.over(second.cell_ids), cochains.over(shared)
        both = CochainService.direct_sum(C1, C2)
        R = CochainService.restriction_matrix

        labels, nodes, matrices = [], [], []
        for k in range(lo, hi + 1):
            if nodes:
                connecting = R(C1.labels[k], full.labels[k]) @ C1.differential(k - 1) @ R(CA.labels[k - 1], C1.labels[k - 1])
                matrices.append(connecting)
            nodes += [BorelService._node(full, k), BorelService._node(both, k), BorelService._node(CA, k)]
            labels += [f"H^{k}(X)", f"H^{k}(U1)⊕H^{k}(U2)", f"H^{k}(U1∩U2)"]
            into_sum = IntegerMatrix.vstack([R(full.labels[k], C1.labels[k]), R(full.labels[k], C2.labels[k])],
                                            cols=len(full.labels[k]))
            difference = IntegerMatrix.hstack([R(C1.labels[k], CA.labels[k]), -R(C2.labels[k], CA.labels[k])],
                                              rows=len(CA.labels[k]))
            matrices += [into_sum, difference]
        maps = [CochainService.induced_hom(F, nodes[i], nodes[i + 1]) for i, F in enumerate(matrices)]
        groups = [h.group for h in nodes]
        if lo == 0:
            zero = FgAbelianGroup.trivial()
            labels.insert(0, "0")
            groups.insert(0, zero)
            maps.insert(0, GroupHom.zero(zero, groups[1]))
        return BorelService._certify(labels, groups, maps, name=f"Mayer-Vietoris of {X.name}")
