import pytest

from src.models.abelian_group import FgAbelianGroup
from src.models.cohomology import Z0, Z1
from src.models.cp1_ring import Cp1RingElement
from src.services.cp1_ring_service import Cp1RingService
from src.utils.exceptions import InvalidParameterError

ZERO = FgAbelianGroup.trivial()
Z = FgAbelianGroup.free(1)
Z2 = FgAbelianGroup.cyclic(2)

t_half = Cp1RingElement.t_half()
c = Cp1RingElement.c()


def test_relations():
    assert Cp1RingService.multiply(c, c).is_zero()
    assert (t_half * 2).is_zero()
    assert Cp1RingService.multiply(t_half, t_half) == Cp1RingElement.monomial(2)
    assert str(t_half * t_half) == "t"


def test_integral_multiples_of_c_survive():
    assert (c * 4).coefficient(0, 1) == 4
    assert str(c * 4) == "4c"


def test_one_is_a_unit():
    x = t_half * c + t_half
    assert Cp1RingElement.one() * x == x


@pytest.mark.parametrize(
    "coefficient, expected",
    [
        (Z1, [ZERO, Z2, Z, Z2, Z2]),
        (Z0, [Z, ZERO, Z2, Z2, Z2]),
    ],
)
def test_ring_groups(coefficient, expected):
    assert [Cp1RingService.group(k, coefficient) for k in range(5)] == expected


def test_cup_with_euler_class():
    f = Cp1RingService.cup_hom(Cp1RingService.euler_class(2), 2, 0, Z0)
    assert f.source == Z and f.target == Z
    assert f.matrix.to_rows() == [[4]]


def test_cup_rejects_mixed_elements():
    with pytest.raises(InvalidParameterError):
        Cp1RingService.cup_hom(c + Cp1RingElement.one(), 2, 0, Z0)


def test_euler_class_needs_positive_q():
    with pytest.raises(InvalidParameterError):
        Cp1RingService.euler_class(0)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_gysin_candidates_in_degree_two(q):
    assert FgAbelianGroup.cyclic(2 * q) in Cp1RingService.gysin_constrain(q, 2, Z1)


def test_gysin_candidates_in_degree_zero():
    assert Cp1RingService.gysin_constrain(1, 0, Z1) == {ZERO}
