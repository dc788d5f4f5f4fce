import logging
from dataclasses import dataclass
from typing import Callable

from src.models.cell_complex import (
    ONE,
    BoundaryTerms,
    CellularMap,
    EquivariantCellComplex,
    GroupRingElement,
    SubcomplexRef,
    make_complex,
)
from src.services.complex_service import ComplexService
from src.utils.exceptions import InvalidParameterError, UnknownSpaceError

logger = logging.getLogger(__name__)

# Orientation convention shared by every builder: a free cell e_k attached to
# a fixed sphere has ∂e_k equal to the fundamental cycle with coefficient +1,
# and each later free cell has ∂e_{k+1} = e_k + (-1)^{k+1-p} τe_k.


@dataclass(frozen=True)
class LensPieces:
    """The lens space model X2 ∪_g X1 together with the data it is glued from."""

    q: int
    refine: int
    X1: EquivariantCellComplex
    X2: EquivariantCellComplex
    boundary: EquivariantCellComplex
    attaching: CellularMap
    lens: EquivariantCellComplex

    def cover(self) -> tuple[SubcomplexRef, SubcomplexRef]:
        """Two subcomplexes of the lens: X1 with the boundary torus of X2, and X2."""
        torus = [cell.id for cell in self.lens.cells
                 if cell.id.startswith("X2:") and cell.id[3:].split(".")[0] in ("p", "m", "e1")]
        first = ComplexService.closure(
            self.lens, [cell.id for cell in self.lens.cells if cell.id.startswith("X1:")] + torus
        )
        second = ComplexService.subcomplex_ref(
            self.lens, [cell.id for cell in self.lens.cells if cell.id.startswith("X2:")]
        )
        return first, second


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidParameterError(message)


class CatalogService:
    """Builders for the named involutive spaces."""

    @staticmethod
    def point() -> EquivariantCellComplex:
        return make_complex([("pt", 0, "fixed")], {}, name="point")

    @staticmethod
    def free_pair() -> EquivariantCellComplex:
        return make_complex([("x", 0, "free")], {}, name="free_pair")

    @staticmethod
    def _sphere(p: int, q: int, name: str) -> EquivariantCellComplex:
        # fixed sphere S^{p-1}, then one free orbit in each dimension p..p+q-1
        cells: list = []
        boundary: dict[str, BoundaryTerms] = {}
        if p == 1:
            cells += [("p", 0, "fixed"), ("m", 0, "fixed")]
            fundamental: BoundaryTerms = (("m", ONE), ("p", -ONE))
        elif p >= 2:
            cells += [("v", 0, "fixed"), ("s", p - 1, "fixed")]
            fundamental = (("s", ONE),)
        else:
            fundamental = ()
        for k in range(q):
            cell_id = f"e{p + k}"
            cells.append((cell_id, p + k, "free"))
            if k == 0:
                boundary[cell_id] = fundamental
            else:
                below = f"e{p + k - 1}"
                boundary[cell_id] = ((below, GroupRingElement(1, (-1) ** k)),)
        return make_complex(cells, boundary, name=name)

    @staticmethod
    def antipodal_sphere(N: int) -> EquivariantCellComplex:
        """S^N with the antipodal map: free e_0..e_N, ∂e_k = (1 + (-1)^k τ) e_{k-1}."""
        _require(N >= 0, f"sphere dimension must be non-negative, got {N}")
        return CatalogService._sphere(0, N + 1, name=f"antipodal_sphere({N})")

    @staticmethod
    def sphere_pq(p: int, q: int) -> EquivariantCellComplex:
        """The unit sphere S^{p,q} in R^{p+q}, τ negating the last q coordinates."""
        _require(p >= 0 and q >= 0 and 1 <= p + q <= 4, f"sphere_pq needs p, q >= 0 and 1 <= p+q <= 4, got ({p}, {q})")
        return CatalogService._sphere(p, q, name=f"sphere_pq({p},{q})")

    @staticmethod
    def circle_trivial() -> EquivariantCellComplex:
        return CatalogService._sphere(2, 0, name="circle_trivial")

    @staticmethod
    def s11() -> EquivariantCellComplex:
        """Circle with reflection: fixed points p = +1, m = -1 and the upper arc e1."""
        return CatalogService._sphere(1, 1, name="s11")

    @staticmethod
    def torus_t020() -> EquivariantCellComplex:
        return ComplexService.product(CatalogService.s11(), CatalogService.s11(), name="torus_t020")

    @staticmethod
    def disk_conj() -> EquivariantCellComplex:
        """
        Unit disk with complex conjugation: fixed diameter d from m to p, upper
        arc e1 from p to m, upper half disk h bounded by d + e1.
        """
        return make_complex(
            [("p", 0, "fixed"), ("m", 0, "fixed"), ("d", 1, "fixed"), ("e1", 1, "free"), ("h", 2, "free")],
            {
                "d": (("p", ONE), ("m", -ONE)),
                "e1": (("m", ONE), ("p", -ONE)),
                "h": (("d", ONE), ("e1", ONE)),
            },
            name="disk_conj",
        )

    @staticmethod
    def cp1_conj() -> EquivariantCellComplex:
        """CP^1 with conjugation: fixed equator v, s and the two hemispheres as one free orbit."""
        return CatalogService._sphere(2, 1, name="cp1_conj")

    @staticmethod
    def wedge_free(N: int) -> EquivariantCellComplex:
        """N pairs of 2-spheres swapped by τ, wedged at the fixed point."""
        _require(N >= 1, f"wedge_free needs N >= 1, got {N}")
        cells = [("pt", 0, "fixed")] + [(f"h{i}", 2, "free") for i in range(1, N + 1)]
        return make_complex(cells, {}, name=f"wedge_free({N})")

    @staticmethod
    def reflected_circle(refine: int) -> EquivariantCellComplex:
        """
        s11 with the upper arc cut into `refine` edges a1..ar through free
        vertices w1..w_{r-1}; refine = 1 is s11 itself.
        """
        _require(refine >= 1, f"refinement must be positive, got {refine}")
        if refine == 1:
            return CatalogService.s11()
        cells = [("p", 0, "fixed"), ("m", 0, "fixed")]
        cells += [(f"w{i}", 0, "free") for i in range(1, refine)]
        cells += [(f"a{i}", 1, "free") for i in range(1, refine + 1)]
        stops = ["p"] + [f"w{i}" for i in range(1, refine)] + ["m"]
        boundary = {
            f"a{i}": ((stops[i], ONE), (stops[i - 1], -ONE)) for i in range(1, refine + 1)
        }
        return make_complex(cells, boundary, name=f"s11_refined({refine})")

    @staticmethod
    def lens_pieces(q: int, refine: int = 1) -> LensPieces:
        """
        The lens space L_2q with involution as an adjunction space.

        X1 and X2 are copies of disk_conj × s11 (the λ-circle of X2 cut into
        2·refine edges). The boundary torus of X1 is attached to X2 by the
        chain map of f(z, λ) = (z, z^{2q}λ): λ-arcs go to the subdivided
        λ-arcs, and the z-arcs at λ = ±1 pick up q times the λ-loop at z = -1,
        the winding of z^{2q} along the upper z-arc.
        """
        _require(q >= 1, f"lens space needs q >= 1, got {q}")
        disk = CatalogService.disk_conj()
        circle = CatalogService.s11()
        fine = CatalogService.reflected_circle(refine)
        X1 = ComplexService.product(disk, circle, name="X1")
        X2 = ComplexService.product(disk, fine, name="X2")

        edges = ["e1"] if refine == 1 else [f"a{i}" for i in range(1, refine + 1)]
        torus_ids = [f"{x}.{y}" for x in ("p", "m", "e1") for y in ("p", "m", "e1")] + ["e1.~e1"]
        boundary = ComplexService.subcomplex(ComplexService.subcomplex_ref(X1, torus_ids), name="∂X1")

        loop = tuple((f"m.{edge}", GroupRingElement(q, -q)) for edge in edges)
        chain: dict[str, BoundaryTerms] = {}
        for x in ("p", "m"):
            for y in ("p", "m"):
                chain[f"{x}.{y}"] = ((f"{x}.{y}", ONE),)
            chain[f"{x}.e1"] = tuple((f"{x}.{edge}", ONE) for edge in edges)
        for y in ("p", "m"):
            chain[f"e1.{y}"] = ((f"e1.{y}", ONE),) + loop
        chain["e1.e1"] = tuple((f"e1.{edge}", ONE) for edge in edges)
        chain["e1.~e1"] = tuple((f"e1.~{edge}", ONE) for edge in edges)
        attaching = CellularMap(boundary, X2, chain, name=f"clutching(2q={2 * q})")

        lens = ComplexService.glue(X1, X2, attaching, prefixes=("X1:", "X2:"), name=f"lens({q})")
        logger.info(f"built lens({q}) with refinement {refine}: {len(lens.cells)} orbit cells")
        return LensPieces(q, refine, X1, X2, boundary, attaching, lens)

    @staticmethod
    def lens(q: int, refine: int = 1) -> EquivariantCellComplex:
        return CatalogService.lens_pieces(q, refine).lens

    @staticmethod
    def names() -> list[str]:
        return sorted(_BUILDERS)

    @staticmethod
    def build(name: str, **params) -> EquivariantCellComplex:
        """
        Builds a catalog space by name. Accepted parameters: N for
        antipodal_sphere and wedge_free, p and q for sphere_pq, q and refine for lens.
        """
        builder = _BUILDERS.get(name)
        if builder is None:
            raise UnknownSpaceError(f"unknown space '{name}', expected one of {CatalogService.names()}")
        try:
            X = builder(**{k: v for k, v in params.items() if v is not None})
        except TypeError as e:
            raise InvalidParameterError(f"bad parameters for '{name}': {e}")
        return ComplexService.ensure_valid(X)


_BUILDERS: dict[str, Callable[..., EquivariantCellComplex]] = {
    "point": CatalogService.point,
    "free_pair": CatalogService.free_pair,
    "antipodal_sphere": CatalogService.antipodal_sphere,
    "sphere_pq": CatalogService.sphere_pq,
    "circle_trivial": CatalogService.circle_trivial,
    "s11": CatalogService.s11,
    "torus_t020": CatalogService.torus_t020,
    "disk_conj": CatalogService.disk_conj,
    "cp1_conj": CatalogService.cp1_conj,
    "wedge_free": CatalogService.wedge_free,
    "lens": CatalogService.lens,
}
