import pytest

from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.cell_complex import CellularMap, SubcomplexRef
from src.models.cohomology import Z0, Z1, LocalSystem
from src.services.abelian_service import AbelianService
from src.services.borel_service import BorelService
from src.services.catalog_service import CatalogService
from src.services.complex_service import ComplexService
from src.utils.exceptions import InvalidParameterError, NotACoverError, NotASubcomplexError

ZERO = FgAbelianGroup.trivial()
Z = FgAbelianGroup.free(1)
Z2 = FgAbelianGroup.cyclic(2)
Z2Z2 = FgAbelianGroup(0, (2, 2))


def Zn(n):
    return FgAbelianGroup.cyclic(n)


def fixed_ref(X):
    return ComplexService.subcomplex_ref(X, (cell.id for cell in X.fixed_cells))


@pytest.fixture(scope="module")
def lenses():
    return {q: CatalogService.lens_pieces(q) for q in (1, 2)}


@pytest.mark.parametrize(
    "name, coefficient, expected",
    [
        ("point", Z1, [ZERO, Z2, ZERO, Z2, ZERO]),
        ("point", Z0, [Z, ZERO, Z2, ZERO, Z2]),
        ("cp1_conj", Z1, [ZERO, Z2, Z, Z2, Z2]),
        ("cp1_conj", Z0, [Z, ZERO, Z2, Z2, Z2]),
    ],
)
def test_equivariant_cohomology_to_degree_four(name, coefficient, expected):
    report = BorelService.equivariant_cohomology(CatalogService.build(name), coefficient, 4)
    assert list(report.groups) == expected
    assert report.stable
    assert report.truncation == 6


def test_circle_with_trivial_involution():
    report = BorelService.equivariant_cohomology(CatalogService.circle_trivial(), Z1, 3)
    assert list(report.groups) == [ZERO, Z2, Z2, Z2]


@pytest.mark.parametrize("coefficient", [Z0, Z1])
def test_free_pair_sees_only_degree_zero(coefficient):
    report = BorelService.equivariant_cohomology(CatalogService.free_pair(), coefficient, 3)
    assert list(report.groups) == [Z, ZERO, ZERO, ZERO]


@pytest.mark.parametrize("name", ["point", "circle_trivial", "cp1_conj"])
def test_free_pair_times_space_gives_ordinary_cohomology(name):
    X = CatalogService.build(name)
    product = ComplexService.product(CatalogService.free_pair(), X)
    report = BorelService.equivariant_cohomology(product, Z1, 3)
    assert list(report.groups) == ComplexService.ordinary_cohomology(X, 3)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_free_action_matches_orbit_complex(N):
    X = CatalogService.antipodal_sphere(N)
    report = BorelService.equivariant_cohomology(X, Z0, 3)
    assert list(report.groups) == ComplexService.ordinary_cohomology(ComplexService.orbit_complex(X), 3)


@pytest.mark.parametrize("q", [1, 2])
def test_lens_through_degree_two(lenses, q):
    lens = lenses[q].lens
    assert list(BorelService.equivariant_cohomology(lens, Z1, 2).groups) == [ZERO, Z2, Zn(2 * q)]
    assert list(BorelService.equivariant_cohomology(lens, Z0, 2).groups) == [Z, ZERO, Z2Z2]


@pytest.mark.parametrize("q", [1, 2])
def test_lens_relative_to_fixed_set(lenses, q):
    report = BorelService.relative_to_fixed(lenses[q].lens, Z1, 2)
    assert report[2] == Zn(4 * q)
    assert report.relative_to == "fixed"


def test_relative_to_empty_subcomplex_is_absolute():
    X = CatalogService.cp1_conj()
    empty = ComplexService.subcomplex_ref(X, [])
    relative = BorelService.relative_equivariant_cohomology(X, empty, Z1, 3)
    assert relative.groups == BorelService.equivariant_cohomology(X, Z1, 3).groups


def test_reflected_circle_relative_to_fixed_points():
    assert BorelService.relative_to_fixed(CatalogService.s11(), Z1, 2)[2] == ZERO


def test_relative_needs_a_subcomplex():
    X = CatalogService.disk_conj()
    with pytest.raises(NotASubcomplexError):
        BorelService.relative_equivariant_cohomology(X, SubcomplexRef(X, frozenset(["d"])), Z1, 2)


def test_reduced_cohomology_of_a_point_vanishes():
    report = BorelService.reduced_cohomology(CatalogService.point(), None, Z1, 3)
    assert all(g == ZERO for g in report.groups)


@pytest.mark.parametrize(
    "X",
    [CatalogService.cp1_conj(), CatalogService.wedge_free(1)],
    ids=["cp1_conj", "wedge_free(1)"],
)
def test_reduced_degree_two_is_z(X):
    assert BorelService.reduced_cohomology(X, None, Z1, 2)[2] == Z


@pytest.mark.parametrize("name", ["cp1_conj", "s11", "circle_trivial", "disk_conj"])
@pytest.mark.parametrize("coefficient", [Z0, Z1])
def test_reduced_splitting(name, coefficient):
    X = CatalogService.build(name)
    absolute = BorelService.equivariant_cohomology(X, coefficient, 3)
    reduced = BorelService.reduced_cohomology(X, None, coefficient, 3)
    point = BorelService.equivariant_cohomology(CatalogService.point(), coefficient, 3)
    for k in range(4):
        assert absolute[k] == AbelianService.direct_sum(reduced[k], point[k])


def test_reduced_cohomology_needs_a_fixed_vertex():
    with pytest.raises(InvalidParameterError):
        BorelService.reduced_cohomology(CatalogService.free_pair(), None, Z1, 2)
    with pytest.raises(InvalidParameterError):
        BorelService.reduced_cohomology(CatalogService.s11(), "e1", Z1, 2)


def test_negative_degree_is_rejected():
    with pytest.raises(InvalidParameterError):
        BorelService.equivariant_cohomology(CatalogService.point(), Z1, -1)


def test_local_system_parsing():
    assert LocalSystem.parse("Z(1)") == Z1
    assert LocalSystem.parse("z0") == Z0
    assert Z1.shifted() == Z0
    with pytest.raises(InvalidParameterError):
        LocalSystem.parse("Z(2)")
    with pytest.raises(InvalidParameterError):
        LocalSystem(3)


@pytest.mark.parametrize("k", [1, 2])
def test_identity_induces_identity(k):
    X = CatalogService.cp1_conj()
    f = BorelService.induced_map(CellularMap.identity(X), Z1, k)
    assert f == GroupHom.identity(f.source)


def test_lens_restrictions_to_the_fixed_circles(lenses):
    lens = lenses[1].lens
    r1 = BorelService.restriction(lens, fixed_ref(lens), Z1, 1)
    assert r1.source == Z2 and r1.target == Z2Z2
    assert AbelianService.is_injective(r1)
    r2 = BorelService.restriction(lens, fixed_ref(lens), Z1, 2)
    assert r2.is_zero()


def test_cokernel_of_restriction():
    assert BorelService.cokernel_of_restriction(CatalogService.lens(1), Z1, 1) == Z2
    assert BorelService.cokernel_of_restriction(CatalogService.antipodal_sphere(2), Z1, 1) == ZERO
    assert BorelService.cokernel_of_restriction(CatalogService.circle_trivial(), Z1, 1) == ZERO


def test_les_of_lens_and_fixed_set(lenses):
    lens = lenses[1].lens
    sequence = BorelService.les_of_pair(lens, fixed_ref(lens), Z1, 1, 2)
    assert sequence.certified
    assert sequence.group("H^2(X|Y)") == Zn(4)
    assert sequence.group("H^1(Y)") == Z2Z2


def test_les_with_empty_subcomplex():
    X = CatalogService.cp1_conj()
    sequence = BorelService.les_of_pair(X, ComplexService.subcomplex_ref(X, []), Z1, 0, 3)
    assert sequence.certified
    assert sequence.labels[0] == "0"
    for k in range(4):
        assert sequence.group(f"H^{k}(X|Y)") == sequence.group(f"H^{k}(X)")
        assert sequence.group(f"H^{k}(Y)") == ZERO


@pytest.mark.parametrize("coefficient", [Z0, Z1])
def test_les_of_sphere_and_equator(coefficient):
    X = CatalogService.cp1_conj()
    assert BorelService.les_of_pair(X, fixed_ref(X), coefficient, 0, 3).certified


def test_les_degree_range():
    X = CatalogService.point()
    with pytest.raises(InvalidParameterError):
        BorelService.les_of_pair(X, ComplexService.subcomplex_ref(X, []), Z1, 2, 1)


def test_mayer_vietoris_on_wedge_lobes():
    X = CatalogService.wedge_free(2)
    lobes = [ComplexService.subcomplex_ref(X, ["pt", f"h{i}"]) for i in (1, 2)]
    sequence = BorelService.mayer_vietoris_check(X, *lobes, Z1, 0, 3)
    assert sequence.certified
    assert sequence.group("H^2(X)") == FgAbelianGroup.free(2)


def test_mayer_vietoris_degenerate_cover():
    X = CatalogService.s11()
    everything = ComplexService.subcomplex_ref(X, X.ids)
    assert BorelService.mayer_vietoris_check(X, everything, everything, Z1, 0, 2).certified


def test_mayer_vietoris_on_lens_pieces(lenses):
    pieces = lenses[1]
    assert BorelService.mayer_vietoris_check(pieces.lens, *pieces.cover(), Z1, 0, 2).certified


def test_mayer_vietoris_needs_a_cover():
    X = CatalogService.wedge_free(2)
    lobe = ComplexService.subcomplex_ref(X, ["pt", "h1"])
    with pytest.raises(NotACoverError):
        BorelService.mayer_vietoris_check(X, lobe, lobe, Z1, 0, 2)
