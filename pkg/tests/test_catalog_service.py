import pytest

from src.models.abelian_group import FgAbelianGroup
from src.models.cell_complex import CellularMap
from src.services.catalog_service import CatalogService
from src.services.complex_service import ComplexService
from src.utils.exceptions import InvalidParameterError, UnknownSpaceError

Z = FgAbelianGroup.free(1)
ZERO = FgAbelianGroup.trivial()


def Zn(n):
    return FgAbelianGroup.cyclic(n)


@pytest.fixture(scope="module")
def lens_pieces():
    return {q: CatalogService.lens_pieces(q) for q in (1, 2, 3)}


CATALOG = [
    ("point", {}),
    ("free_pair", {}),
    ("antipodal_sphere", {"N": 2}),
    ("sphere_pq", {"p": 1, "q": 2}),
    ("sphere_pq", {"p": 2, "q": 1}),
    ("circle_trivial", {}),
    ("s11", {}),
    ("torus_t020", {}),
    ("disk_conj", {}),
    ("cp1_conj", {}),
    ("wedge_free", {"N": 3}),
    ("lens", {"q": 2}),
]


@pytest.mark.parametrize("name, params", CATALOG)
def test_catalog_spaces_are_valid(name, params):
    X = CatalogService.build(name, **params)
    assert ComplexService.validate(X) == []


@pytest.mark.parametrize(
    "name, params, expected",
    [
        ("point", {}, [Z, ZERO, ZERO]),
        ("free_pair", {}, [FgAbelianGroup.free(2), ZERO, ZERO]),
        ("antipodal_sphere", {"N": 2}, [Z, ZERO, Z]),
        ("sphere_pq", {"p": 1, "q": 2}, [Z, ZERO, Z]),
        ("sphere_pq", {"p": 3, "q": 0}, [Z, ZERO, Z]),
        ("circle_trivial", {}, [Z, Z, ZERO]),
        ("s11", {}, [Z, Z, ZERO]),
        ("torus_t020", {}, [Z, FgAbelianGroup.free(2), Z]),
        ("disk_conj", {}, [Z, ZERO, ZERO]),
        ("cp1_conj", {}, [Z, ZERO, Z]),
        ("wedge_free", {"N": 2}, [Z, ZERO, FgAbelianGroup.free(4)]),
    ],
)
def test_underlying_spaces_have_their_singular_cohomology(name, params, expected):
    X = CatalogService.build(name, **params)
    assert ComplexService.ordinary_cohomology(X, 2) == expected


def test_reflected_circle_counts():
    X = CatalogService.s11()
    assert X.counts() == {0: {"fixed": 2, "free": 0}, 1: {"fixed": 0, "free": 1}}


@pytest.mark.parametrize("N", [1, 2, 3])
def test_wedge_euler_characteristic(N):
    assert ComplexService.euler_characteristic(CatalogService.wedge_free(N)) == 1 + 2 * N


@pytest.mark.parametrize("q", [1, 2, 3])
def test_lens_has_the_cohomology_of_l2q(lens_pieces, q):
    lens = lens_pieces[q].lens
    assert ComplexService.ordinary_cohomology(lens, 3) == [Z, ZERO, Zn(2 * q), Z]
    assert ComplexService.euler_characteristic(lens) == 0


@pytest.mark.parametrize("q", [1, 2, 3])
def test_lens_fixed_set_is_two_circles(lens_pieces, q):
    fixed = ComplexService.fixed_subcomplex(lens_pieces[q].lens)
    assert len(ComplexService.components(fixed)) == 2
    assert ComplexService.ordinary_cohomology(fixed, 1) == [FgAbelianGroup.free(2)] * 2


def test_lens_pieces_are_glued_along_the_boundary_torus(lens_pieces):
    pieces = lens_pieces[2]
    assert ComplexService.validate_map(pieces.attaching) == []
    assert ComplexService.is_subcomplex_of(pieces.boundary, pieces.X1)
    assert ComplexService.ordinary_cohomology(pieces.boundary, 2) == [Z, FgAbelianGroup.free(2), Z]
    inclusion = CellularMap.inclusion(pieces.boundary, pieces.X1)
    assert ComplexService.validate_map(inclusion) == []


def test_lens_cover_covers(lens_pieces):
    pieces = lens_pieces[1]
    first, second = pieces.cover()
    assert first.cell_ids | second.cell_ids == frozenset(pieces.lens.ids)


def test_refined_lens_is_valid():
    X = CatalogService.lens(1, refine=2)
    assert ComplexService.validate(X) == []
    assert ComplexService.ordinary_cohomology(X, 3) == [Z, ZERO, Zn(2), Z]


def test_names_are_sorted():
    names = CatalogService.names()
    assert names == sorted(names)
    assert "lens" in names and "wedge_free" in names


def test_unknown_space():
    with pytest.raises(UnknownSpaceError):
        CatalogService.build("klein_bottle")


@pytest.mark.parametrize(
    "name, params",
    [
        ("lens", {"q": 0}),
        ("wedge_free", {"N": 0}),
        ("sphere_pq", {"p": 3, "q": 3}),
        ("point", {"q": 2}),
        ("antipodal_sphere", {"N": -1}),
    ],
)
def test_bad_parameters(name, params):
    with pytest.raises(InvalidParameterError):
        CatalogService.build(name, **params)
