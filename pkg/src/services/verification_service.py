import logging
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from src.models.abelian_group import FgAbelianGroup
from src.models.cohomology import Z0, Z1, LocalSystem
from src.schemas.report import VerificationEntry
from src.services.abelian_service import AbelianService
from src.services.borel_service import BorelService
from src.services.catalog_service import CatalogService
from src.services.classify_service import ClassifyService
from src.services.complex_service import ComplexService
from src.services.cp1_ring_service import Cp1RingService
from src.utils.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

ZERO = FgAbelianGroup.trivial()
Z = FgAbelianGroup.free(1)


def Zn(n: int) -> FgAbelianGroup:
    return FgAbelianGroup.cyclic(n)


def _sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    return AbelianService.direct_sum(*groups)


def _entry(suite: str, name: str, expected, computed, hard: bool = True) -> VerificationEntry:
    return VerificationEntry(
        suite=suite, name=name, expected=str(expected), computed=str(computed),
        hard=hard, passed=expected == computed,
    )


def _rows(suite: str, space: str, coefficient: Optional[LocalSystem], expected: Sequence,
          computed: Sequence, soft_from: Optional[int] = None) -> list[VerificationEntry]:
    coeff = f", {coefficient}" if coefficient else ""
    return [
        _entry(suite, f"H^{k}({space}{coeff})", e, c, hard=soft_from is None or k < soft_from)
        for k, (e, c) in enumerate(zip(expected, computed))
    ]


def _orbit_count(bound: int, rank: int, generators: Iterable[Sequence[int]]) -> int:
    """Classes of Z^rank / <generators> met by the box [0, bound)^rank, by union-find."""
    box = list(product(range(bound), repeat=rank))
    parent = {x: x for x in box}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    steps = [tuple(g) for g in generators]
    for x in box:
        for g in steps:
            for sign in (1, -1):
                y = tuple(a + sign * b for a, b in zip(x, g))
                if y in parent:
                    parent[find(y)] = find(x)
    return len({find(x) for x in box})


class VerificationService:
    """Reproduces the reference tables and runs the engine's self-checks."""

    DEFAULT_QS = (1, 2, 3)

    @staticmethod
    def table_cp1() -> list[VerificationEntry]:
        suite = "table5.1"
        X = CatalogService.cp1_conj()
        expected = {
            Z1: [ZERO, Zn(2), Z, Zn(2), Zn(2)],
            Z0: [Z, ZERO, Zn(2), Zn(2), Zn(2)],
        }
        entries = []
        for coefficient, row in expected.items():
            computed = BorelService.equivariant_cohomology(X, coefficient, 4).groups
            entries += _rows(suite, X.name, coefficient, row, computed)
            ring = [Cp1RingService.group(k, coefficient) for k in range(5)]
            entries += [
                _entry(suite, f"H^{k}({X.name}, {coefficient}) from the ring presentation", c, r)
                for k, (c, r) in enumerate(zip(computed, ring))
            ]
        return entries

    @staticmethod
    def table_lens(qs: Sequence[int]) -> list[VerificationEntry]:
        suite = "table5.2"
        entries = []
        for q in qs:
            X = CatalogService.lens(q)
            equivariant = {
                Z1: [ZERO, Zn(2), Zn(2 * q), _sum(Zn(2), Zn(2))],
                Z0: [Z, ZERO, _sum(Zn(2), Zn(2)), _sum(Z, Zn(2))],
            }
            for coefficient, row in equivariant.items():
                computed = BorelService.equivariant_cohomology(X, coefficient, 3).groups
                entries += _rows(suite, X.name, coefficient, row, computed, soft_from=3)
                for k, group in enumerate(computed):
                    candidates = Cp1RingService.gysin_constrain(q, k, coefficient)
                    entries.append(_entry(
                        suite, f"Gysin candidates for H^{k}({X.name}, {coefficient}) contain {group}",
                        True, group in candidates, hard=k < 3,
                    ))
            ordinary = ComplexService.ordinary_cohomology(X, 3)
            entries += _rows(suite, f"{X.name}, forgetting τ", None, [Z, ZERO, Zn(2 * q), Z], ordinary)
        return entries

    @staticmethod
    def table_circle() -> list[VerificationEntry]:
        X = CatalogService.circle_trivial()
        entries = []
        for coefficient, row in ((Z1, [ZERO, Zn(2), Zn(2), Zn(2)]), (Z0, [Z, Z, Zn(2), Zn(2)])):
            computed = BorelService.equivariant_cohomology(X, coefficient, 3).groups
            entries += _rows("table5.3", X.name, coefficient, row, computed)
        return entries

    @staticmethod
    def table_fixed_circles(qs: Sequence[int]) -> list[VerificationEntry]:
        suite = "table5.4"
        entries = []
        pair = _sum(Zn(2), Zn(2))
        for q in qs:
            fixed = ComplexService.fixed_subcomplex(CatalogService.lens(q))
            name = f"lens({q})^τ"
            entries.append(_entry(suite, f"components of {name}", 2, len(ComplexService.components(fixed))))
            entries += _rows(suite, f"{name}, forgetting τ", None, [FgAbelianGroup.free(2)] * 2,
                             ComplexService.ordinary_cohomology(fixed, 1))
            computed = BorelService.equivariant_cohomology(fixed, Z1, 3).groups
            entries += _rows(suite, name, Z1, [ZERO, pair, pair, pair], computed)
        return entries

    @staticmethod
    def fkmm_target_lens(qs: Sequence[int]) -> list[VerificationEntry]:
        """The FKMM target of the lens space, directly and along the sequence of the pair."""
        suite = "fkmm-target"
        entries = []
        for q in qs:
            X = CatalogService.lens(q)
            fixed = ComplexService.subcomplex_ref(X, (cell.id for cell in X.fixed_cells))
            direct = ClassifyService.fkmm_target(X)
            entries.append(_entry(suite, f"H^2({X.name}|fixed, Z(1))", Zn(4 * q), direct))

            r1 = BorelService.restriction(X, fixed, Z1, 1)
            r2 = BorelService.restriction(X, fixed, Z1, 2)
            entries.append(_entry(suite, f"H^1 restriction of {X.name} is injective", True,
                                  AbelianService.is_injective(r1)))
            entries.append(_entry(suite, f"H^2 restriction of {X.name} is zero", True, r2.is_zero()))
            coker = AbelianService.hom_cokernel(r1).group
            kernel = AbelianService.hom_kernel(r2).group
            entries.append(_entry(suite, f"Coker^1({X.name}|fixed)", Zn(2), coker))
            entries.append(_entry(suite, f"ker of H^2 restriction of {X.name}", Zn(2 * q), kernel))
            extensions = AbelianService.extension_candidates(kernel, coker)
            entries.append(_entry(
                suite, f"extensions of {kernel} by {coker}",
                sorted(map(str, {_sum(Zn(2), Zn(2 * q)), Zn(4 * q)})), sorted(map(str, extensions)),
            ))
            entries.append(_entry(suite, f"sequence of the pair admits {direct}", True,
                                  direct in ClassifyService.fkmm_target_candidates(X)))
            sequence = BorelService.les_of_pair(X, fixed, Z1, 1, 2)
            entries.append(_entry(suite, f"exactness of the sequence of ({X.name}, fixed)", True, sequence.certified))
        return entries

    @staticmethod
    def lens_classification(qs: Sequence[int]) -> list[VerificationEntry]:
        suite = "lens-classification"
        entries = []
        for q in qs:
            name = f"lens({q})"
            vec = ClassifyService.classify_rank2_lens(q)
            entries.append(_entry(suite, f"Vec^2_Q({name})", Zn(2 * q), vec))
            pic = ClassifyService.pic_r_lens(q)
            entries.append(_entry(suite, f"Pic_R({name}) by clutching", Zn(2 * q), pic))
            entries.append(_entry(suite, f"Pic_R({name}) from H^1 of the pieces", pic,
                                  ClassifyService.pic_r_lens_from_cohomology(q)))
            borel = BorelService.equivariant_cohomology(CatalogService.lens(q), Z1, 2)[2]
            entries.append(_entry(suite, f"Pic_R({name}) against H^2({name}, Z(1))", pic, borel))

            presentation = ClassifyService.lens_presentation(q, "U2")
            generators = [presentation.left_hom.matrix.column(0), presentation.right_hom.matrix.column(0)]
            entries.append(_entry(suite, f"double coset of {name} against orbit enumeration", vec.order(),
                                  _orbit_count(4 * q, 2, generators)))

            verdict = ClassifyService.surjectivity_report("lens", q=q)
            entries.append(_entry(suite, f"FKMM target of {name}", Zn(4 * q), verdict.target))
            entries.append(_entry(suite, f"surjectivity verdict for {name}", "not-surjective", verdict.verdict))
            entries.append(_entry(suite, f"order ratio for {name}", 2, verdict.ratio))

            c = vec.reduce((1,))
            current = vec.zero()
            orbit = []
            for _ in range(2 * q):
                current = ClassifyService.torsor_translate(pic, vec, c, current)
                orbit.append(current)
            entries.append(_entry(suite, f"line bundle action on Vec^2_Q({name}) is a {2 * q}-cycle", True,
                                  orbit[-1] == vec.zero() and len(set(orbit)) == 2 * q))
        return entries

    @staticmethod
    def wedge(ns: Sequence[int] = (1, 2, 3)) -> list[VerificationEntry]:
        suite = "wedge"
        entries = []
        for N in ns:
            X = CatalogService.wedge_free(N)
            expected = FgAbelianGroup.free(N)
            entries.append(_entry(suite, f"Vec^2_Q({X.name})", expected, ClassifyService.classify_wedge(N)))
            entries.append(_entry(suite, f"FKMM target of {X.name}", expected, ClassifyService.fkmm_target(X)))
            entries.append(_entry(suite, f"reduced H^2({X.name}, Z(1))", expected,
                                  BorelService.reduced_cohomology(X, None, Z1, 2)[2]))
            entries.append(_entry(suite, f"surjectivity verdict for {X.name}", "bijective-consistent",
                                  ClassifyService.surjectivity_report("wedge_free", N=N).verdict))
        X = CatalogService.wedge_free(2)
        lobes = [ComplexService.subcomplex_ref(X, ["pt", f"h{i}"]) for i in (1, 2)]
        sequence = BorelService.mayer_vietoris_check(X, *lobes, Z1, 0, 3)
        entries.append(_entry(suite, f"Mayer-Vietoris exactness for the lobes of {X.name}", True, sequence.certified))
        lobe = BorelService.reduced_cohomology(CatalogService.wedge_free(1), None, Z1, 2)[2]
        entries.append(_entry(suite, f"reduced H^2 of {X.name} splits over the lobes", _sum(lobe, lobe),
                              BorelService.reduced_cohomology(X, None, Z1, 2)[2]))
        return entries

    @staticmethod
    def points() -> list[VerificationEntry]:
        X = CatalogService.point()
        odd = [ZERO if k % 2 == 0 else Zn(2) for k in range(7)]
        even = [Z] + [Zn(2) if k % 2 == 0 else ZERO for k in range(1, 7)]
        entries = []
        for coefficient, row in ((Z1, odd), (Z0, even)):
            entries += _rows("points", X.name, coefficient, row,
                             BorelService.equivariant_cohomology(X, coefficient, 6).groups)
        return entries

    @staticmethod
    def free_product() -> list[VerificationEntry]:
        """Z2 × X with the swap has the ordinary cohomology of X in Z(1) coefficients."""
        entries = []
        for X in (CatalogService.point(), CatalogService.circle_trivial(), CatalogService.cp1_conj()):
            doubled = ComplexService.product(CatalogService.free_pair(), X, name=f"Z2 × {X.name}")
            entries += _rows("free-product", doubled.name, Z1, ComplexService.ordinary_cohomology(X, 3),
                             BorelService.equivariant_cohomology(doubled, Z1, 3).groups)
        return entries

    @staticmethod
    def low_dimension() -> list[VerificationEntry]:
        suite = "low-dim"
        entries = []
        for name, params in (("point", {}), ("free_pair", {}), ("s11", {}), ("circle_trivial", {}),
                             ("sphere_pq", {"p": 1, "q": 1})):
            verdict = ClassifyService.surjectivity_report(name, **params)
            entries.append(_entry(suite, f"FKMM target of {verdict.space}", ZERO, verdict.target))
            entries.append(_entry(suite, f"surjectivity verdict for {verdict.space}", "bijective-consistent",
                                  verdict.verdict))
        return entries

    @staticmethod
    def self_consistency() -> list[VerificationEntry]:
        suite = "self-consistency"
        entries = []
        catalog = [
            CatalogService.point(), CatalogService.free_pair(), CatalogService.antipodal_sphere(2),
            CatalogService.sphere_pq(1, 2), CatalogService.circle_trivial(), CatalogService.s11(),
            CatalogService.torus_t020(), CatalogService.disk_conj(), CatalogService.cp1_conj(),
            CatalogService.wedge_free(2), CatalogService.lens(1),
        ]
        for X in catalog:
            for coefficient in (Z1, Z0):
                report = BorelService.equivariant_cohomology(X, coefficient, 4)
                entries.append(_entry(suite, f"truncation stability of {X.name}, {coefficient}", True, report.stable))

        for X in catalog:
            if not any(cell.dim == 0 for cell in X.fixed_cells):
                continue
            point = BorelService.equivariant_cohomology(CatalogService.point(), Z1, 3).groups
            absolute = BorelService.equivariant_cohomology(X, Z1, 3).groups
            reduced = BorelService.reduced_cohomology(X, None, Z1, 3).groups
            entries += [
                _entry(suite, f"H^{k}({X.name}, Z(1)) splits as reduced ⊕ point", a, _sum(r, p))
                for k, (a, r, p) in enumerate(zip(absolute, reduced, point))
            ]

        lens = CatalogService.lens_pieces(1)
        cp1 = CatalogService.cp1_conj()
        pairs = [
            (lens.lens, ComplexService.subcomplex_ref(lens.lens, (c.id for c in lens.lens.fixed_cells))),
            (cp1, ComplexService.subcomplex_ref(cp1, (c.id for c in cp1.fixed_cells))),
        ]
        for X, Y in pairs:
            for coefficient in (Z1, Z0):
                sequence = BorelService.les_of_pair(X, Y, coefficient, 0, 3)
                entries.append(_entry(suite, f"exactness of the sequence of ({X.name}, fixed), {coefficient}",
                                      True, sequence.certified))
        sequence = BorelService.mayer_vietoris_check(lens.lens, *lens.cover(), Z1, 0, 3)
        entries.append(_entry(suite, f"Mayer-Vietoris exactness for the pieces of {lens.lens.name}", True,
                              sequence.certified))

        for X in (CatalogService.free_pair(), CatalogService.antipodal_sphere(1), CatalogService.antipodal_sphere(2)):
            entries += _rows(suite, f"{X.name} against its orbit space", Z0,
                             ComplexService.ordinary_cohomology(ComplexService.orbit_complex(X), 3),
                             BorelService.equivariant_cohomology(X, Z0, 3).groups)

        coarse, fine = CatalogService.lens(1), CatalogService.lens(1, refine=2)
        for coefficient in (Z1, Z0):
            entries += _rows(suite, "lens(1) under refinement", coefficient,
                             BorelService.equivariant_cohomology(coarse, coefficient, 3).groups,
                             BorelService.equivariant_cohomology(fine, coefficient, 3).groups)
        return entries

    # Suites

    @staticmethod
    def suites() -> list[str]:
        return list(_SUITES) + ["all"]

    @staticmethod
    def run(suite: str, q: Optional[int] = None) -> list[VerificationEntry]:
        if q is not None and q < 1:
            raise InvalidParameterError(f"q must be positive, got {q}")
        qs = (q,) if q is not None else VerificationService.DEFAULT_QS
        if suite == "all":
            names = list(_SUITES)
        elif suite in _SUITES:
            names = [suite]
        else:
            raise InvalidParameterError(f"unknown suite '{suite}', expected one of {VerificationService.suites()}")
        entries = []
        for name in names:
            logger.info(f"running verification suite {name}")
            entries += _SUITES[name](qs)
        failed = sum(1 for e in entries if not e.passed)
        logger.info(f"{len(entries)} entries, {failed} not passed")
        return entries


_SUITES: dict[str, Callable[[Sequence[int]], list[VerificationEntry]]] = {
    "table5.1": lambda qs: VerificationService.table_cp1(),
    "table5.2": VerificationService.table_lens,
    "table5.3": lambda qs: VerificationService.table_circle(),
    "table5.4": VerificationService.table_fixed_circles,
    "fkmm-target": VerificationService.fkmm_target_lens,
    "lens-classification": VerificationService.lens_classification,
    "wedge": lambda qs: VerificationService.wedge(),
    "points": lambda qs: VerificationService.points(),
    "free-product": lambda qs: VerificationService.free_product(),
    "low-dim": lambda qs: VerificationService.low_dimension(),
    "self-consistency": lambda qs: VerificationService.self_consistency(),
}
