import logging

from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.cohomology import LocalSystem
from src.models.cp1_ring import Cp1RingElement, Monomial
from src.models.integer_matrix import IntegerMatrix
from src.services.abelian_service import AbelianService
from src.utils.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)


class Cp1RingService:
    """The equivariant cohomology ring of CP^1 with conjugation, and the Gysin route to the lens space."""

    @staticmethod
    def multiply(a: Cp1RingElement, b: Cp1RingElement) -> Cp1RingElement:
        return a * b

    @staticmethod
    def basis(k: int, coefficient: LocalSystem) -> list[Monomial]:
        """
        Monomials t^{j/2} c^ε spanning H^k_{Z2}(CP^1, Z(m)): j + 2ε = k and
        j + ε ≡ m mod 2. The integral monomials (j = 0) come first.
        """
        if k < 0:
            return []
        found = [(k - 2 * e, e) for e in (0, 1) if k - 2 * e >= 0 and (k - 2 * e + e) % 2 == coefficient.m]
        return sorted(found, key=lambda mono: (mono[0] != 0, mono))

    @staticmethod
    def group(k: int, coefficient: LocalSystem) -> FgAbelianGroup:
        monomials = Cp1RingService.basis(k, coefficient)
        free = sum(1 for j, _ in monomials if j == 0)
        return FgAbelianGroup(rank=free, torsion=(2,) * (len(monomials) - free))

    @staticmethod
    def cup_hom(element: Cp1RingElement, degree: int, k: int, coefficient: LocalSystem) -> GroupHom:
        """
        Multiplication by a homogeneous element of the given degree, as a map
        H^k(Z(m)) -> H^{k+degree}(Z(m + degree-twist)).
        """
        twists = {(j + e) % 2 for (j, e), _ in element.terms}
        if len(twists) > 1:
            raise InvalidParameterError(f"{element} mixes coefficient systems")
        shift = twists.pop() if twists else 0
        source_basis = Cp1RingService.basis(k, coefficient)
        target_coefficient = coefficient.shifted(shift)
        target_basis = Cp1RingService.basis(k + degree, target_coefficient)
        source = Cp1RingService.group(k, coefficient)
        target = Cp1RingService.group(k + degree, target_coefficient)
        columns = []
        for j, e in source_basis:
            product = element * Cp1RingElement.monomial(j, e)
            columns.append([product.coefficient(*mono) for mono in target_basis])
        return GroupHom(source, target, IntegerMatrix.from_columns(columns, rows=len(target_basis)))

    @staticmethod
    def euler_class(q: int) -> Cp1RingElement:
        """Real first Chern class 2q·c of the circle bundle L_2q -> CP^1."""
        if q < 1:
            raise InvalidParameterError(f"lens space needs q >= 1, got {q}")
        return Cp1RingElement.c() * (2 * q)

    @staticmethod
    def gysin_constrain(q: int, k: int, coefficient: LocalSystem) -> set[FgAbelianGroup]:
        """
        Candidates for H^k_{Z2}(L_2q, Z(m)) from the Gysin window
        H^{k-2}(B, Z(m+1)) -> H^k(B, Z(m)) -> H^k(L) -> H^{k-1}(B, Z(m+1)) -> H^{k+1}(B, Z(m)),
        B = CP^1, both outer maps cup products with the Euler class.
        """
        euler = Cp1RingService.euler_class(q)
        twisted = coefficient.shifted(1)
        before = Cp1RingService.cup_hom(euler, 2, k - 2, twisted) if k >= 2 else None
        after = Cp1RingService.cup_hom(euler, 2, k - 1, twisted) if k >= 1 else None
        groups = [
            Cp1RingService.group(k - 2, twisted),
            Cp1RingService.group(k, coefficient),
            None,
            Cp1RingService.group(k - 1, twisted),
            Cp1RingService.group(k + 1, coefficient),
        ]
        maps = [before or "zero", None, None, after or "zero"]
        candidates = AbelianService.exact_sequence_constrain(groups, maps)[2]
        logger.info(f"Gysin candidates for H^{k}(L_{2 * q}, {coefficient}): {sorted(str(g) for g in candidates)}")
        return candidates
