import logging
from typing import Hashable, Sequence

from src.models.abelian_group import GroupHom
from src.models.cohomology import CochainComplex, CohomologyGroup
from src.models.integer_matrix import IntegerMatrix
from src.services.abelian_service import Subquotient
from src.services.linalg_service import LinalgService
from src.utils.exceptions import DimensionMismatchError, LiftError

logger = logging.getLogger(__name__)


class CochainService:
    """Cohomology of free cochain complexes, with generators and induced maps."""

    @staticmethod
    def cohomology(C: CochainComplex, k: int) -> CohomologyGroup:
        """
        H^k = ker δ^k / im δ^{k-1}, canonical form with cocycle generators.
        """
        n = C.dim(k)
        cocycles = LinalgService.kernel_basis(C.differential(k)) if n else IntegerMatrix.zeros(0, 0)
        boundaries = C.differential(k - 1) if k > 0 else IntegerMatrix.zeros(n, 0)
        return CohomologyGroup(degree=k, quotient=Subquotient(cocycles, boundaries), cochains=C)

    @staticmethod
    def cohomology_groups(C: CochainComplex, max_deg: int) -> list[CohomologyGroup]:
        return [CochainService.cohomology(C, k) for k in range(max_deg + 1)]

    @staticmethod
    def induced_hom(F: IntegerMatrix, domain: CohomologyGroup, codomain: CohomologyGroup) -> GroupHom:
        """
        Homomorphism H(domain) -> H(codomain) of the cochain map F.
        Raises LiftError when F sends a cocycle outside the codomain cocycles.
        """
        if F.shape != (codomain.cochains.dim(codomain.degree), domain.cochains.dim(domain.degree)):
            raise DimensionMismatchError(f"cochain map of shape {F.shape} does not fit degree {domain.degree}")
        images = []
        for z in domain.generators:
            element = codomain.coordinates(F.apply(z))
            if element is None:
                raise LiftError(f"cochain map does not send cocycles to cocycles in degree {domain.degree}")
            images.append(element)
        return GroupHom.from_images(domain.group, codomain.group, images)

    @staticmethod
    def direct_sum(first: CochainComplex, second: CochainComplex) -> CochainComplex:
        top = max(len(first.labels), len(second.labels))
        labels = tuple(
            tuple((0, x) for x in (first.labels[k] if k < len(first.labels) else ()))
            + tuple((1, x) for x in (second.labels[k] if k < len(second.labels) else ()))
            for k in range(top)
        )
        differentials = tuple(
            IntegerMatrix.block_diagonal([first.differential(k), second.differential(k)])
            for k in range(top - 1)
        )
        return CochainComplex(labels, differentials)

    @staticmethod
    def restriction_matrix(source: Sequence[Hashable], target: Sequence[Hashable]) -> IntegerMatrix:
        """Cochain map C(source) -> C(target) keeping the values on shared labels."""
        position = {label: i for i, label in enumerate(source)}
        F = [[0] * len(source) for _ in target]
        for row, label in enumerate(target):
            if label in position:
                F[row][position[label]] = 1
        return IntegerMatrix.from_rows(F, cols=len(source))

