import logging
from itertools import product
from typing import Literal, Sequence

from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.cell_complex import CellularMap, EquivariantCellComplex
from src.models.clutching import (
    ClutchingPresentation,
    DoubleCosets,
    FkmmClass,
    MapClassGroup,
    SignVector,
    StableRankVerdict,
    SurjectivityVerdict,
)
from src.models.cohomology import Z1
from src.models.integer_matrix import IntegerMatrix
from src.services.abelian_service import AbelianService
from src.services.borel_service import BorelService
from src.services.catalog_service import CatalogService
from src.services.cochain_service import CochainService
from src.services.complex_service import ComplexService
from src.utils.exceptions import (
    InfiniteGroupError,
    InvalidParameterError,
    MismatchedTargetsError,
    NotAnFkmmSpaceError,
    UnsupportedSpaceError,
)

logger = logging.getLogger(__name__)

LENS_NOTE = (
    "Vec^2_Q(lens(q)) is computed as Z_2q from the clutching double coset; "
    "a uniform Z_4 for all q does not match the order count against the FKMM target Z_4q"
)


def _free_hom(target: FgAbelianGroup, homs: Sequence[GroupHom]) -> GroupHom:
    """A hom from a free group whose image is the sum of the images of homs."""
    matrix = IntegerMatrix.hstack([h.matrix for h in homs], rows=target.ngens)
    return GroupHom(FgAbelianGroup.free(matrix.cols), target, matrix)


class ClassifyService:
    """Clutching classifications, FKMM targets and the surjectivity comparison."""

    # Double cosets

    @staticmethod
    def double_coset_set(left: GroupHom, ambient: FgAbelianGroup, right: GroupHom) -> DoubleCosets:
        """
        Orbits of ambient under translation by the images of left and right.
        The ambient group is abelian, so the orbit set is the cokernel of the
        combined image.
        """
        if left.target != ambient or right.target != ambient:
            raise MismatchedTargetsError(f"double coset maps must both land in {ambient}")
        cokernel = AbelianService.hom_cokernel(_free_hom(ambient, [left, right]))
        return DoubleCosets(ambient, cokernel.group, cokernel.hom)

    @staticmethod
    def coset_representatives(cosets: DoubleCosets) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Lexicographically smallest non-negative ambient element of every class."""
        if not cosets.group.is_finite:
            raise InfiniteGroupError(f"{cosets.group} has infinitely many classes")
        exponent = cosets.group.exponent()
        bounds = [min(exponent, d) if d else exponent for d in cosets.ambient.orders]
        found: dict[tuple[int, ...], tuple[int, ...]] = {}
        for element in product(*(range(b) for b in bounds)):
            found.setdefault(cosets.class_of(element), element)
            if len(found) == cosets.group.order():
                break
        return found

    # Lens space

    @staticmethod
    def clutching_degree_matrix(q: int) -> IntegerMatrix:
        """Action of f(z, λ) = (z, z^{2q}λ) on the z- and λ-loops of the torus."""
        return IntegerMatrix.from_rows([[1, 0], [2 * q, 1]])

    @staticmethod
    def lens_presentation(q: int, structure: Literal["U2", "U1"] = "U2") -> ClutchingPresentation:
        """
        Boundary torus classes read as degrees along the z- and λ-circles
        (half-degrees of det for Û(2)); each piece retracts onto its λ-circle.
        Pulling back along f acts on degrees by the transposed degree matrix.
        """
        if q < 1:
            raise InvalidParameterError(f"lens space needs q >= 1, got {q}")
        D = ClassifyService.clutching_degree_matrix(q)
        if structure == "U2":
            boundary = MapClassGroup("[T^{0,2,0}, Û(2)]", FgAbelianGroup.free(2), "half-degrees (z, λ)")
            piece = FgAbelianGroup.free(1)
            restriction = IntegerMatrix.from_columns([[0, 1]], rows=2)
            pullback = D.T
            encoding = "half of deg∘det"
            label = "Û(2)"
        else:
            boundary = MapClassGroup("[T^{0,2,0}, Ũ(1)]", FgAbelianGroup(2, (2,)), "degrees (z, λ), sign ε")
            piece = FgAbelianGroup(1, (2,))
            restriction = IntegerMatrix.from_columns([[0, 1, 0], [0, 0, 1]], rows=3)
            pullback = IntegerMatrix.block_diagonal([D.T, IntegerMatrix.identity(1)])
            encoding = "degree, sign ε"
            label = "Ũ(1)"
        left = MapClassGroup(f"[X1, {label}]", piece, encoding)
        right = MapClassGroup(f"[X2, {label}]", piece, encoding)
        return ClutchingPresentation(
            boundary=boundary,
            left=left,
            left_hom=GroupHom(piece, boundary.group, restriction),
            right=right,
            right_hom=GroupHom(piece, boundary.group, pullback @ restriction),
            degree_matrix=D,
        )

    @staticmethod
    def classify_presentation(presentation: ClutchingPresentation) -> DoubleCosets:
        return ClassifyService.double_coset_set(
            presentation.left_hom, presentation.boundary.group, presentation.right_hom
        )

    @staticmethod
    def classify_rank2_lens(q: int) -> FgAbelianGroup:
        """Vec^2_Q(lens(q)) as the Û(2) clutching double coset."""
        group = ClassifyService.classify_presentation(ClassifyService.lens_presentation(q, "U2")).group
        logger.info(f"Vec^2_Q(lens({q})) = {group}")
        return group

    @staticmethod
    def pic_r_lens(q: int) -> FgAbelianGroup:
        """Pic_R(lens(q)) as the Ũ(1) clutching double coset."""
        return ClassifyService.classify_presentation(ClassifyService.lens_presentation(q, "U1")).group

    @staticmethod
    def pic_r_lens_from_cohomology(q: int, refine: int = 1) -> FgAbelianGroup:
        """
        The same double coset with the class groups replaced by H^1_{Z2}(-, Z(1))
        of the two pieces and of the boundary torus of the cell model.
        """
        pieces = CatalogService.lens_pieces(q, refine)
        restriction = BorelService.induced_map(CellularMap.inclusion(pieces.boundary, pieces.X1), Z1, 1)
        pullback = BorelService.induced_map(pieces.attaching, Z1, 1)
        return ClassifyService.double_coset_set(restriction, restriction.target, pullback).group

    @staticmethod
    def torsor_translate(pic: FgAbelianGroup, classification: FgAbelianGroup,
                         c: Sequence[int], base: Sequence[int]) -> tuple[int, ...]:
        """
        Translates a bundle class by a line bundle class, E ↦ L ⊗ E.
        Pic_R is identified with the classification group by the identity map.
        """
        if pic != classification:
            raise MismatchedTargetsError(f"Pic_R = {pic} is not identified with {classification}")
        return classification.add(classification.reduce(base), pic.reduce(c))

    # Wedge of swapped spheres

    @staticmethod
    def lobe_presentation() -> ClutchingPresentation:
        """
        One lobe Z2 × S^2 cut along its equators into two copies of Z2 × D^2.
        Maps out of a free orbit are maps out of one component, so boundary
        classes are read by deg∘det there and the disks carry only the constant class.
        """
        boundary = MapClassGroup("[Z2 × S^1, Û(2)]", FgAbelianGroup.free(1), "deg∘det on one component")
        disk = MapClassGroup("[Z2 × D^2, Û(2)]", FgAbelianGroup.trivial(), "constant")
        D = IntegerMatrix.identity(1)
        restriction = IntegerMatrix.zeros(1, 0)
        return ClutchingPresentation(
            boundary=boundary,
            left=disk,
            left_hom=GroupHom(disk.group, boundary.group, restriction),
            right=disk,
            right_hom=GroupHom(disk.group, boundary.group, D.T @ restriction),
            degree_matrix=D,
        )

    @staticmethod
    def wedge_presentation(N: int) -> ClutchingPresentation:
        """
        wedge_free(N) cut along the equators of all lobes. The two sides are
        wedges of equivariant disks at the fixed point; lobe data is stacked
        block-diagonally (every lobe group is free or trivial, so the direct sum
        keeps the block order).
        """
        if N < 1:
            raise InvalidParameterError(f"wedge needs N >= 1, got {N}")
        lobes = [ClassifyService.lobe_presentation() for _ in range(N)]
        lobe = lobes[0]
        boundary = MapClassGroup(
            f"⊕^{N} {lobe.boundary.label}",
            AbelianService.direct_sum(*(p.boundary.group for p in lobes)),
            f"{lobe.boundary.encoding}, per lobe",
        )
        left = MapClassGroup(
            "[X1, Û(2)]", AbelianService.direct_sum(*(p.left.group for p in lobes)), lobe.left.encoding
        )
        right = MapClassGroup(
            "[X2, Û(2)]", AbelianService.direct_sum(*(p.right.group for p in lobes)), lobe.right.encoding
        )
        return ClutchingPresentation(
            boundary=boundary,
            left=left,
            left_hom=GroupHom(left.group, boundary.group,
                              IntegerMatrix.block_diagonal([p.left_hom.matrix for p in lobes])),
            right=right,
            right_hom=GroupHom(right.group, boundary.group,
                               IntegerMatrix.block_diagonal([p.right_hom.matrix for p in lobes])),
            degree_matrix=IntegerMatrix.block_diagonal([p.degree_matrix for p in lobes]),
        )

    @staticmethod
    def classify_wedge(N: int) -> FgAbelianGroup:
        """Vec^2_Q(wedge_free(N)) as the Û(2) clutching double coset over the lobe equators."""
        group = ClassifyService.classify_presentation(ClassifyService.wedge_presentation(N)).group
        logger.info(f"Vec^2_Q(wedge_free({N})) = {group}")
        return group

    # FKMM invariant

    @staticmethod
    def fkmm_target(X: EquivariantCellComplex) -> FgAbelianGroup:
        """H^2_{Z2}(X|X^τ, Z(1)), the group the FKMM invariant lives in."""
        return BorelService.relative_to_fixed(X, Z1, 2)[2]

    @staticmethod
    def fkmm_target_candidates(X: EquivariantCellComplex) -> set[FgAbelianGroup]:
        """
        The same group located by the exact sequence of the pair (X, X^τ):
        an extension of ker(H^2(X) -> H^2(X^τ)) by Coker^1(X|X^τ).
        """
        fixed = ComplexService.subcomplex_ref(X, (cell.id for cell in X.fixed_cells))
        r1 = BorelService.restriction(X, fixed, Z1, 1)
        r2 = BorelService.restriction(X, fixed, Z1, 2)
        groups = [r1.source, r1.target, None, r2.source, r2.target]
        return AbelianService.exact_sequence_constrain(groups, [r1, None, None, r2])[2]

    @staticmethod
    def fkmm_space_invariant(X: EquivariantCellComplex, s: SignVector) -> FkmmClass:
        """
        Class of the sign vector s in Map(X^τ, {±1}) modulo the restrictions of
        global equivariant circle maps, i.e. the image of
        H^1_{Z2}(X, Z(1)) -> H^1_{Z2}(X^τ, Z(1)) ≅ (Z2)^{|X^τ|}.
        """
        fixed = ComplexService.fixed_subcomplex(X)
        if fixed.is_empty or fixed.dimension > 0:
            raise NotAnFkmmSpaceError(f"'{X.name}' needs a finite nonempty fixed set of points")
        if not BorelService.equivariant_cohomology(X, Z1, 2)[2].is_trivial:
            raise NotAnFkmmSpaceError(f"H^2_Z2('{X.name}', Z(1)) is not zero")
        points = tuple(fixed.ids)
        if s.points != points:
            raise InvalidParameterError(f"sign vector is given on {s.points}, fixed points are {points}")

        N = BorelService.truncation(1)
        on_points = CochainService.cohomology(BorelService.cochains(fixed, Z1, N).complex, 1)
        on_space = CochainService.cohomology(BorelService.cochains(X, Z1, N).complex, 1)
        F = BorelService.pullback(CellularMap.inclusion(fixed, X), Z1, N, 1)
        r = CochainService.induced_hom(F, on_space, on_points)

        # the cocycle equal to 1 on pt × e_1 represents the generator at pt
        labels = on_points.cochains.labels[1]
        basis = []
        for point in points:
            unit = [1 if label == (point, 1, False) else 0 for label in labels]
            basis.append(on_points.coordinates(unit))
        group = on_points.group

        def element(bits: Sequence[int]) -> tuple[int, ...]:
            total = group.zero()
            for bit, b in zip(bits, basis):
                if bit:
                    total = group.add(total, b)
            return total

        to_bits = {element(bits): bits for bits in product((0, 1), repeat=len(points))}
        image = {group.zero()}
        for generator in r.matrix.columns():
            image |= {group.add(y, group.reduce(generator)) for y in image}
        orbit = {group.add(element(s.bits), y) for y in image}
        representative = min(to_bits[y] for y in orbit)
        return FkmmClass(
            representative=SignVector.from_bits(points, representative),
            is_trivial=group.zero() in orbit,
            quotient_order=2 ** len(points) // len(image),
            orbit_size=len(image),
        )

    # Surjectivity

    @staticmethod
    def compare(space: str, classification: FgAbelianGroup, target: FgAbelianGroup) -> SurjectivityVerdict:
        ratio = None
        if classification == target:
            verdict = "bijective-consistent"
        elif classification.is_finite and target.is_finite and classification.order() < target.order():
            verdict = "not-surjective"
        else:
            verdict = "inconclusive"
        if classification.is_finite and target.is_finite and target.order() % classification.order() == 0:
            ratio = target.order() // classification.order()
        return SurjectivityVerdict(space, classification, target, verdict, ratio)

    @staticmethod
    def low_dimensional_classification(X: EquivariantCellComplex) -> FgAbelianGroup:
        """Vec^2_Q(X) where the stable rank table leaves only the trivial bundle."""
        fixed_empty = ComplexService.fixed_subcomplex(X).is_empty
        stable = ClassifyService.stable_rank_reduce(X.dimension, 2, fixed_empty)
        if stable.outcome != "trivial":
            raise UnsupportedSpaceError(
                f"no classification is implemented for '{X.name}': rank 2 in dimension {X.dimension} "
                f"{stable.describe()}"
            )
        return FgAbelianGroup.trivial()

    @staticmethod
    def surjectivity_report(name: str, **params) -> SurjectivityVerdict:
        """
        Compares Vec^2_Q(X) with the FKMM target for lens(q), wedge_free(N)
        and catalog spaces of dimension at most 1.
        """
        if name == "lens":
            q = params.get("q") or 1
            X = CatalogService.lens(q, params.get("refine") or 1)
            classification = ClassifyService.classify_rank2_lens(q)
        elif name in ("wedge", "wedge_free"):
            N = params.get("N") or 1
            X = CatalogService.wedge_free(N)
            classification = ClassifyService.classify_wedge(N)
        else:
            X = CatalogService.build(name, **params)
            classification = ClassifyService.low_dimensional_classification(X)
        verdict = ClassifyService.compare(X.name, classification, ClassifyService.fkmm_target(X))
        logger.info(f"{X.name}: {verdict.classification} vs {verdict.target}: {verdict.verdict}")
        return verdict

    # Stable range

    @staticmethod
    def stable_rank_reduce(d: int, rank: int, fixed_empty: bool, pic_q_nonempty: bool = True,
                           category: Literal["Q", "R"] = "Q") -> StableRankVerdict:
        """
        Case tables of the stable rank conditions. For category R the fixed set
        is assumed empty or zero-dimensional.
        """
        if d < 0 or rank < 1:
            raise InvalidParameterError(f"need d >= 0 and rank >= 1, got d={d}, rank={rank}")

        def verdict(outcome, target=None):
            return StableRankVerdict(category, d, rank, outcome, target)

        if category == "R":
            if d <= 1:
                return verdict("trivial")
            if d <= 3:
                return verdict("pic", 1)
            return verdict("reduced", d // 2) if rank >= (d + 1) / 2 else verdict("unstable")

        if rank % 2 == 0:
            m = rank // 2
            if d <= 1:
                return verdict("trivial")
            if d <= 5:
                return verdict("rank-2", 2)
            sigma = (d + 2) // 4
            return verdict("reduced", 2 * sigma) if m >= (d + 3) / 4 else verdict("unstable")

        if not fixed_empty:
            raise InvalidParameterError("odd-rank Quaternionic bundles need an empty fixed set")
        if not pic_q_nonempty:
            return verdict("empty")
        m = rank // 2
        if d <= 1:
            return verdict("unique")
        if d <= 3:
            return verdict("pic", 1)
        if d <= 5:
            return verdict("rank-2", 2)
        return verdict("reduced", d // 2) if m >= (d - 1) / 4 else verdict("unstable")
