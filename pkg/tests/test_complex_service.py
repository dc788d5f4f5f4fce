import pytest

from src.models.abelian_group import FgAbelianGroup
from src.models.cell_complex import ONE, TAU, CellularMap, GroupRingElement, make_complex, terms
from src.models.cohomology import Z0, Z1
from src.services.borel_service import BorelService
from src.services.catalog_service import CatalogService
from src.services.complex_service import ComplexService
from src.utils.exceptions import InvalidComplexError, InvalidParameterError, NonCellularMapError, NotASubcomplexError

Z = FgAbelianGroup.free(1)
ZERO = FgAbelianGroup.trivial()


def test_group_ring_arithmetic():
    x = GroupRingElement(2, 3)
    assert x * TAU == GroupRingElement(3, 2)
    assert TAU * TAU == ONE
    assert (ONE + TAU) * (ONE - TAU) == GroupRingElement(0, 0)
    assert x.augmentation() == 5
    assert x.twisted(1) == -1
    assert x.conjugate() == GroupRingElement(3, 2)


def test_fixed_cell_coefficients_are_normalized():
    X = make_complex([("v", 0, "fixed"), ("w", 0, "fixed"), ("e", 1, "free")],
                     {"e": terms(("w", 1, 0), ("v", 0, -1))})
    assert dict(X.terms("e")) == {"w": ONE, "v": GroupRingElement(-1, 0)}


def test_validate_reports_unknown_cells():
    X = make_complex([("e", 1, "free")], {"e": terms(("ghost", 1))})
    problems = ComplexService.validate(X)
    assert any("ghost" in p for p in problems)


def test_validate_reports_wrong_dimensions():
    X = make_complex([("v", 0, "fixed"), ("h", 2, "free")], {"h": terms(("v", 1))})
    assert ComplexService.validate(X)


def test_validate_reports_fixed_cells_bounded_by_free_cells():
    X = make_complex([("x", 0, "free"), ("e", 1, "fixed")], {"e": terms(("x", 1))})
    assert any("free cell" in p for p in ComplexService.validate(X))


def test_validate_reports_nonzero_boundary_squared():
    X = make_complex(
        [("v", 0, "fixed"), ("w", 0, "fixed"), ("e", 1, "fixed"), ("h", 2, "free")],
        {"e": terms(("w", 1), ("v", -1)), "h": terms(("e", 1))},
    )
    problems = ComplexService.validate(X)
    assert any(p.startswith("∂∂(h)") for p in problems)
    with pytest.raises(InvalidComplexError):
        ComplexService.ensure_valid(X)


def test_subcomplex_ref_requires_closure():
    X = CatalogService.disk_conj()
    with pytest.raises(NotASubcomplexError):
        ComplexService.subcomplex_ref(X, ["h"])
    with pytest.raises(NotASubcomplexError):
        ComplexService.subcomplex_ref(X, ["nowhere"])
    assert ComplexService.closure(X, ["h"]).cell_ids == frozenset(X.ids)


def test_fixed_subcomplex_of_disk_is_the_diameter():
    fixed = ComplexService.fixed_subcomplex(CatalogService.disk_conj())
    assert set(fixed.ids) == {"p", "m", "d"}
    assert ComplexService.ordinary_cohomology(fixed, 1) == [Z, ZERO]


def test_product_of_reflected_circles():
    T = ComplexService.product(CatalogService.s11(), CatalogService.s11())
    assert ComplexService.validate(T) == []
    assert T.counts() == {0: {"fixed": 4, "free": 0}, 1: {"fixed": 0, "free": 4}, 2: {"fixed": 0, "free": 2}}
    assert "e1.~e1" in T
    assert ComplexService.euler_characteristic(T) == 0
    assert ComplexService.ordinary_cohomology(T, 2) == [Z, FgAbelianGroup.free(2), Z]


@pytest.mark.parametrize(
    "names",
    [("s11", "circle_trivial", "free_pair"), ("s11", "s11", "point"), ("free_pair", "s11", "free_pair")],
)
def test_product_is_associative_up_to_relabeling(names):
    X, Y, W = (CatalogService.build(name) for name in names)
    left = ComplexService.product(ComplexService.product(X, Y), W)
    right = ComplexService.product(X, ComplexService.product(Y, W))
    assert ComplexService.validate(left) == [] and ComplexService.validate(right) == []
    assert left.counts() == right.counts()
    assert ComplexService.euler_characteristic(left) == ComplexService.euler_characteristic(right)
    assert ComplexService.ordinary_cohomology(left, 3) == ComplexService.ordinary_cohomology(right, 3)
    assert (BorelService.equivariant_cohomology(left, Z1, 2).groups
            == BorelService.equivariant_cohomology(right, Z1, 2).groups)


def test_product_with_point_is_the_same_space():
    X = CatalogService.cp1_conj()
    P = ComplexService.product(CatalogService.point(), X)
    assert ComplexService.ordinary_cohomology(P, 2) == ComplexService.ordinary_cohomology(X, 2)


def test_subdivided_circle_map_is_cellular():
    circle, degree = ComplexService.subdivide_circle_map(4)
    assert ComplexService.validate(circle) == []
    assert ComplexService.validate_map(degree) == []
    assert ComplexService.ordinary_cohomology(circle, 1) == [Z, Z]


@pytest.mark.parametrize("n", [1, 2, 4])
def test_subdivided_circle_map_multiplies_degree_one_classes(n):
    _, degree = ComplexService.subdivide_circle_map(n)
    induced = BorelService.induced_map(degree, Z0, 1)
    assert induced.source == Z and induced.target == Z
    assert induced.matrix.to_rows() == [[n]]


def test_subdivide_circle_map_needs_an_edge():
    with pytest.raises(InvalidParameterError):
        ComplexService.subdivide_circle_map(0)


def test_validate_map_detects_broken_chain_maps():
    X = CatalogService.s11()
    bad = CellularMap(X, X, {"p": (("p", ONE),), "m": (("p", ONE),), "e1": (("e1", ONE),)})
    assert ComplexService.validate_map(bad)
    assert ComplexService.validate_map(CellularMap.identity(X)) == []


def test_identify_two_disks_along_the_boundary_gives_a_sphere():
    disk = CatalogService.disk_conj()
    boundary = {"p": "p", "m": "m", "e1": "e1"}
    glued = ComplexService.identify(disk, disk, boundary)
    assert ComplexService.validate(glued) == []
    assert ComplexService.ordinary_cohomology(glued, 2) == [Z, ZERO, Z]


def test_identify_rejects_mismatched_cells():
    disk = CatalogService.disk_conj()
    with pytest.raises(NonCellularMapError):
        ComplexService.identify(disk, disk, {"p": "p", "m": "m", "d": "e1"})


def test_disjoint_union():
    union = ComplexService.disjoint_union(CatalogService.point(), CatalogService.point())
    assert len(union.cells) == 2
    assert len(ComplexService.components(union)) == 2


def test_orbit_complex_of_antipodal_sphere_is_projective_plane():
    quotient = ComplexService.orbit_complex(CatalogService.antipodal_sphere(2))
    assert ComplexService.ordinary_cohomology(quotient, 2) == [Z, ZERO, FgAbelianGroup.cyclic(2)]


def test_orbit_complex_needs_a_free_action():
    with pytest.raises(InvalidParameterError):
        ComplexService.orbit_complex(CatalogService.s11())


def test_components_of_free_pair():
    assert len(ComplexService.components(CatalogService.free_pair())) == 2
    assert len(ComplexService.components(CatalogService.s11())) == 1
