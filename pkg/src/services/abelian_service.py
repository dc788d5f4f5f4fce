import logging
from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Literal, Optional, Sequence, Union

from sympy import factorint
from sympy.utilities.iterables import partitions

from src.config.settings import get_settings
from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.integer_matrix import IntegerMatrix
from src.services.linalg_service import LinalgService
from src.utils.exceptions import (
    ExtensionTooLargeError,
    IllFormedHomError,
    InfiniteGroupError,
    LiftError,
    MalformedTemplateError,
)

logger = logging.getLogger(__name__)

KnownMap = Union[GroupHom, Literal["zero"], None]


class Subquotient:
    """The group span(basis) / span(relations) inside an ambient Z^n.

    `basis` has independent columns; every relation column must lie in their
    span. The canonical group comes with one ambient vector per canonical
    generator and a coordinate map from ambient vectors back to elements.
    """

    def __init__(self, basis: IntegerMatrix, relations: IntegerMatrix):
        self.basis = basis
        self._basis_snf = LinalgService.smith_normal_form(basis)
        coordinates = LinalgService.solve_many(basis, relations.columns())
        if coordinates is None:
            raise LiftError("relations do not lie in the lattice spanned by the basis")
        r = basis.cols
        Y = IntegerMatrix.from_columns(coordinates, rows=r)
        snf = LinalgService.smith_normal_form(Y)
        self._U = snf.U
        diagonal = list(snf.diagonal) + [0] * (r - len(snf.diagonal))
        free = [i for i, d in enumerate(diagonal) if d == 0]
        torsion = [i for i, d in enumerate(diagonal) if d >= 2]
        self._slots = free + torsion
        self.group = FgAbelianGroup(rank=len(free), torsion=tuple(diagonal[i] for i in torsion))
        generators = basis @ snf.U_inv if r else IntegerMatrix.zeros(basis.rows, 0)
        self.generators = [generators.column(i) for i in self._slots]

    def coordinates(self, vector: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Canonical element of an ambient vector, None when it is outside the lattice."""
        y = LinalgService.solve_with(self._basis_snf, vector)
        if y is None:
            return None
        z = self._U.apply(y)
        return self.group.reduce([z[i] for i in self._slots])


@dataclass(frozen=True)
class GroupWithMap:
    """A derived group together with its inclusion or projection hom."""

    group: FgAbelianGroup
    hom: GroupHom


def _torsion_relations(group: FgAbelianGroup) -> IntegerMatrix:
    """Columns d_j·e_j for each torsion generator (column form of the presentation)."""
    return group.relation_matrix().transpose()


def _preimage_lattice(f: GroupHom) -> IntegerMatrix:
    """Basis of {x in Z^n : f.matrix·x lies in the target relation lattice}."""
    n = f.source.ngens
    relations = _torsion_relations(f.target)
    stacked = IntegerMatrix.hstack([f.matrix, relations.scale(-1)])
    kernel = LinalgService.kernel_basis(stacked)
    projected = kernel.select_rows(range(n))
    if projected.cols == 0:
        return IntegerMatrix.zeros(n, 0)
    return LinalgService.column_space_basis(projected)


def _prime_power_groups(p: int, e: int) -> list[list[int]]:
    shapes = []
    for partition in partitions(e):
        powers = []
        for part, multiplicity in sorted(partition.items()):
            powers.extend([p**part] * multiplicity)
        shapes.append(powers)
    return shapes


def _embeds(small: FgAbelianGroup, big: FgAbelianGroup) -> bool:
    """Finite abelian `small` is isomorphic to a subgroup of `big`."""
    def exponents(group):
        table = {}
        for q in group.elementary_divisors():
            (p, e), = factorint(q).items()
            table.setdefault(p, []).append(e)
        return {p: sorted(es, reverse=True) for p, es in table.items()}

    mine, theirs = exponents(small), exponents(big)
    for p, es in mine.items():
        other = theirs.get(p, [])
        if len(es) > len(other) or any(a > b for a, b in zip(es, other)):
            return False
    return True


class AbelianService:
    """Finitely generated abelian groups: canonical forms, subquotients, Ext and extensions."""

    @staticmethod
    def from_presentation(relations: IntegerMatrix) -> FgAbelianGroup:
        """
        Canonical form of Z^g / rowspace(relations), g = number of columns.
        """
        return AbelianService.presentation(relations).group

    @staticmethod
    def presentation(relations: IntegerMatrix) -> Subquotient:
        g = relations.cols
        return Subquotient(IntegerMatrix.identity(g), relations.transpose())

    @staticmethod
    def is_isomorphic(A: FgAbelianGroup, B: FgAbelianGroup) -> bool:
        return A == B

    @staticmethod
    def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
        return FgAbelianGroup.from_elementary_divisors(
            sum(g.rank for g in groups), [d for g in groups for d in g.elementary_divisors()]
        )

    @staticmethod
    def hom_kernel(f: GroupHom) -> GroupWithMap:
        """
        Kernel of f with its inclusion into f.source.
        """
        P = _preimage_lattice(f)
        quotient = Subquotient(P, _torsion_relations(f.source))
        inclusion = GroupHom.from_images(quotient.group, f.source, quotient.generators)
        return GroupWithMap(quotient.group, inclusion)

    @staticmethod
    def hom_image(f: GroupHom) -> GroupWithMap:
        """
        Image of f with its inclusion into f.target. The image is Z^n / P where P is
        the preimage of the target relations.
        """
        n = f.source.ngens
        quotient = Subquotient(IntegerMatrix.identity(n), _preimage_lattice(f))
        images = [f.matrix.apply(v) for v in quotient.generators]
        inclusion = GroupHom.from_images(quotient.group, f.target, images)
        return GroupWithMap(quotient.group, inclusion)

    @staticmethod
    def hom_cokernel(f: GroupHom) -> GroupWithMap:
        """
        Cokernel target / image with the projection from f.target.
        """
        m = f.target.ngens
        relations = IntegerMatrix.hstack([_torsion_relations(f.target), f.matrix], rows=m)
        quotient = Subquotient(IntegerMatrix.identity(m), relations)
        unit = IntegerMatrix.identity(m)
        images = [quotient.coordinates(unit.column(i)) for i in range(m)]
        projection = GroupHom.from_images(f.target, quotient.group, images)
        return GroupWithMap(quotient.group, projection)

    @staticmethod
    def lift(f: GroupHom, element: Sequence[int]) -> Optional[tuple[int, ...]]:
        """A preimage of element under f, or None if element is not in the image."""
        n = f.source.ngens
        relations = _torsion_relations(f.target)
        stacked = IntegerMatrix.hstack([f.matrix, relations], rows=f.target.ngens)
        solution = LinalgService.solve_linear(stacked, list(element))
        if solution is None:
            return None
        return f.source.reduce(solution[:n])

    @staticmethod
    def is_injective(f: GroupHom) -> bool:
        return AbelianService.hom_kernel(f).group.is_trivial

    @staticmethod
    def is_surjective(f: GroupHom) -> bool:
        return AbelianService.hom_cokernel(f).group.is_trivial

    @staticmethod
    def is_isomorphism(f: GroupHom) -> bool:
        return AbelianService.is_injective(f) and AbelianService.is_surjective(f)

    @staticmethod
    def ext_group(B: FgAbelianGroup, A: FgAbelianGroup) -> FgAbelianGroup:
        """
        Ext^1(B, A). Free summands of B contribute nothing; Z_n contributes A / nA.
        """
        orders = []
        for n in B.torsion:
            orders.extend([n] * A.rank)
            orders.extend(gcd(n, a) for a in A.torsion)
        return AbelianService.from_presentation(IntegerMatrix.diagonal(orders))

    @staticmethod
    def groups_of_order(n: int) -> list[FgAbelianGroup]:
        """All abelian groups of order n, up to isomorphism."""
        factors = sorted(factorint(n).items())
        choices = [_prime_power_groups(p, e) for p, e in factors]
        groups = {
            FgAbelianGroup.from_elementary_divisors(0, [q for shape in combo for q in shape])
            for combo in product(*choices)
        }
        return sorted(groups, key=FgAbelianGroup.sort_key)

    @staticmethod
    def subgroup_types(group: FgAbelianGroup) -> list[FgAbelianGroup]:
        """Isomorphism types of subgroups of a finite group (equivalently, of its quotients)."""
        if not group.is_finite:
            raise InfiniteGroupError(f"subgroup types of infinite {group} are not enumerated")
        order = group.order()
        divisors = [d for d in range(1, order + 1) if order % d == 0]
        return [
            H for d in divisors for H in AbelianService.groups_of_order(d) if _embeds(H, group)
        ]

    @staticmethod
    def extension_candidates(quotient: FgAbelianGroup, sub: FgAbelianGroup) -> set[FgAbelianGroup]:
        """
        Middle groups E of 0 -> sub -> E -> quotient -> 0, by enumerating extension
        cocycles: lifts x_i of the quotient generators with q_i·x_i = c_i, where
        c_i runs over sub / q_i·sub.
        """
        if not (quotient.is_finite and sub.is_finite):
            raise InfiniteGroupError(f"extension enumeration needs finite groups, got {quotient} and {sub}")
        cap = get_settings().extension_cap
        if quotient.order() * sub.order() > cap:
            raise ExtensionTooLargeError(f"|sub|·|quotient| = {quotient.order() * sub.order()} exceeds {cap}")
        s, u = sub.torsion, quotient.torsion
        width = len(s) + len(u)
        ranges = [range(gcd(q, d)) for q in u for d in s]
        candidates = set()
        for cocycle in product(*ranges):
            rows = []
            for j, d in enumerate(s):
                row = [0] * width
                row[j] = d
                rows.append(row)
            for i, q in enumerate(u):
                row = [0] * width
                row[len(s) + i] = q
                for j in range(len(s)):
                    row[j] = -cocycle[i * len(s) + j]
                rows.append(row)
            candidates.add(AbelianService.from_presentation(IntegerMatrix.from_rows(rows, cols=width)))
        logger.debug(f"{len(candidates)} extension classes of {quotient} by {sub}")
        return candidates

    @staticmethod
    def extension_set(quotient: FgAbelianGroup, sub: FgAbelianGroup) -> set[FgAbelianGroup]:
        """
        Middle groups of 0 -> sub -> E -> quotient -> 0 allowing free parts.
        Exact when sub is finite; a superset of the true answer otherwise.
        """
        if quotient.is_finite and sub.is_finite:
            return AbelianService.extension_candidates(quotient, sub)
        rank = quotient.rank + sub.rank
        if sub.is_finite:
            # the free part of the quotient splits off
            middles = AbelianService.extension_candidates(quotient.torsion_part(), sub)
            return {FgAbelianGroup(rank=rank, torsion=E.torsion) for E in middles}
        # torsion of E is an extension of a subgroup of tors(quotient) by tors(sub)
        result = set()
        for H in AbelianService.subgroup_types(quotient.torsion_part()):
            for E in AbelianService.extension_candidates(H, sub.torsion_part()):
                result.add(FgAbelianGroup(rank=rank, torsion=E.torsion))
        return result

    @staticmethod
    def exact_sequence_constrain(groups: Sequence[Optional[FgAbelianGroup]],
                                 maps: Sequence[KnownMap]) -> dict[int, set[FgAbelianGroup]]:
        """
        Candidate groups for each unknown slot (None) of an exact sequence
        groups[0] -> groups[1] -> ... where maps[i]: groups[i] -> groups[i+1]
        is a GroupHom, the literal "zero", or None when unknown.

        An unknown slot X between G_{i-1} and G_{i+1} is an extension of
        ker(G_{i+1} -> G_{i+2}) by coker(G_{i-2} -> G_{i-1}); missing maps widen
        these to all quotient or subgroup types. Returns empty sets when the known
        part of the sequence is itself inexact.
        """
        AbelianService._check_template(groups, maps)
        unknown = [i for i, g in enumerate(groups) if g is None]
        if not AbelianService._known_part_exact(groups, maps):
            logger.warning("known part of the sequence is not exact")
            return {i: set() for i in unknown}
        result = {}
        for i in unknown:
            subs = AbelianService._image_into(groups, maps, i)
            quotients = AbelianService._image_out_of(groups, maps, i)
            candidates = set()
            for quotient in quotients:
                for sub in subs:
                    candidates |= AbelianService.extension_set(quotient, sub)
            result[i] = candidates
        return result

    @staticmethod
    def _check_template(groups, maps):
        if len(maps) != len(groups) - 1:
            raise MalformedTemplateError(f"{len(groups)} slots need {len(groups) - 1} maps, got {len(maps)}")
        for i, g in enumerate(groups):
            if g is None and (i == 0 or i == len(groups) - 1):
                raise MalformedTemplateError(f"unknown slot {i} at the end of the sequence")
            if g is None and (groups[i - 1] is None or groups[i + 1] is None):
                raise MalformedTemplateError(f"unknown slot {i} has an unknown neighbour")
        for i, f in enumerate(maps):
            if isinstance(f, GroupHom):
                if groups[i] is None or groups[i + 1] is None:
                    raise MalformedTemplateError(f"map {i} touches an unknown slot but is given as a matrix")
                if f.source != groups[i] or f.target != groups[i + 1]:
                    raise MalformedTemplateError(f"map {i} does not run {groups[i]} -> {groups[i + 1]}")
            elif f not in (None, "zero"):
                raise MalformedTemplateError(f"map {i} must be a GroupHom, 'zero' or None")

    @staticmethod
    def _as_hom(groups, maps, i) -> Optional[GroupHom]:
        f = maps[i]
        if isinstance(f, GroupHom):
            return f
        if f == "zero" and groups[i] is not None and groups[i + 1] is not None:
            return GroupHom.zero(groups[i], groups[i + 1])
        return None

    @staticmethod
    def _known_part_exact(groups, maps) -> bool:
        for i in range(1, len(groups) - 1):
            f = AbelianService._as_hom(groups, maps, i - 1)
            g = AbelianService._as_hom(groups, maps, i)
            if f is None or g is None:
                continue
            if not g.compose(f).is_zero():
                return False
            kernel = AbelianService.hom_kernel(g)
            lifted = [AbelianService.lift(kernel.hom, f(v)) for v in GroupHom.identity(f.source).matrix.columns()]
            if any(x is None for x in lifted):
                return False
            into_kernel = GroupHom.from_images(f.source, kernel.group, lifted)
            if not AbelianService.is_surjective(into_kernel):
                return False
        return True

    @staticmethod
    def _image_into(groups, maps, i) -> list[FgAbelianGroup]:
        """Candidates for the image of the map entering slot i."""
        left = groups[i - 1]
        if maps[i - 1] == "zero" or left.is_trivial:
            return [FgAbelianGroup.trivial()]
        if i - 2 >= 0 and maps[i - 2] == "zero":
            return [left]
        if i - 2 >= 0:
            before = AbelianService._as_hom(groups, maps, i - 2)
            if before is not None:
                return [AbelianService.hom_cokernel(before).group]
        if not left.is_finite:
            raise MalformedTemplateError(f"slot {i}: the map from infinite {left} leaves the slot unconstrained")
        return AbelianService.subgroup_types(left)

    @staticmethod
    def _image_out_of(groups, maps, i) -> list[FgAbelianGroup]:
        """Candidates for the image of the map leaving slot i."""
        right = groups[i + 1]
        if maps[i] == "zero" or right.is_trivial:
            return [FgAbelianGroup.trivial()]
        if i + 2 < len(groups) and maps[i + 1] == "zero":
            return [right]
        if i + 2 < len(groups):
            after = AbelianService._as_hom(groups, maps, i + 1)
            if after is not None:
                return [AbelianService.hom_kernel(after).group]
        if not right.is_finite:
            raise MalformedTemplateError(f"slot {i}: the map into infinite {right} leaves the slot unconstrained")
        return AbelianService.subgroup_types(right)

    @staticmethod
    def check_exact_at(f: GroupHom, g: GroupHom) -> bool:
        """im f = ker g for composable f, g."""
        if f.target != g.source:
            raise IllFormedHomError("maps are not composable")
        return AbelianService._known_part_exact([f.source, f.target, g.target], [f, g])
