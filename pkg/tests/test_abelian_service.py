import random
from collections import Counter
from math import gcd

import pytest

from src.models.abelian_group import FgAbelianGroup, GroupHom
from src.models.integer_matrix import IntegerMatrix
from src.services.abelian_service import AbelianService
from src.utils.exceptions import IllFormedHomError, InfiniteGroupError, MalformedTemplateError

ZERO = FgAbelianGroup.trivial()
Z = FgAbelianGroup.free(1)


def Zn(n):
    return FgAbelianGroup.cyclic(n)


def element_order(G: FgAbelianGroup, x) -> int:
    k, y = 1, tuple(x)
    while any(y):
        y = G.add(y, x)
        k += 1
    return k


def subgroups(G: FgAbelianGroup) -> set[frozenset]:
    """Every subgroup of a finite group, grown one generator at a time."""
    elements = list(G.elements())
    found = {frozenset([G.zero()])}
    frontier = list(found)
    while frontier:
        H = frontier.pop()
        for x in elements:
            if x in H:
                continue
            multiples = [G.scale(k, x) for k in range(element_order(G, x))]
            bigger = frozenset(G.add(h, m) for h in H for m in multiples)
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return found


def profile(G: FgAbelianGroup) -> Counter:
    return Counter(element_order(G, x) for x in G.elements())


def brute_force_extensions(quotient: FgAbelianGroup, sub: FgAbelianGroup) -> set[FgAbelianGroup]:
    """Groups E of order |Q|·|S| with a subgroup of type S and quotient of type Q."""
    result = set()
    for E in AbelianService.groups_of_order(quotient.order() * sub.order()):
        for H in subgroups(E):
            if len(H) != sub.order():
                continue
            if Counter(element_order(E, h) for h in H) != profile(sub):
                continue
            cosets = {frozenset(E.add(x, h) for h in H) for x in E.elements()}
            orders = Counter()
            for coset in cosets:
                x = min(coset)
                k, y = 1, x
                while y not in H:
                    y = E.add(y, x)
                    k += 1
                orders[k] += 1
            if orders == profile(quotient):
                result.add(E)
                break
    return result


def test_canonical_form_of_presentations():
    assert AbelianService.from_presentation(IntegerMatrix.from_rows([[2, 0], [0, 3]])) == Zn(6)
    assert AbelianService.from_presentation(IntegerMatrix.from_rows([[0, 0]])) == FgAbelianGroup.free(2)
    assert AbelianService.from_presentation(IntegerMatrix.from_rows([[1, 1]])) == Z
    assert AbelianService.from_presentation(IntegerMatrix.from_rows([[2, 0], [0, 4], [0, 0]])) == FgAbelianGroup(0, (2, 4))


def test_group_rendering():
    assert str(ZERO) == "0"
    assert str(Z) == "Z"
    assert str(FgAbelianGroup(2, (2, 4))) == "Z^2 ⊕ Z_2 ⊕ Z_4"


def test_elementary_divisors_assemble_invariant_factors():
    assert FgAbelianGroup.from_elementary_divisors(0, [2, 3]) == Zn(6)
    assert FgAbelianGroup.from_elementary_divisors(1, [2, 2, 4]) == FgAbelianGroup(1, (2, 2, 4))
    assert AbelianService.direct_sum(Zn(2), Zn(3), Z) == FgAbelianGroup(1, (6,))


def test_kernel_image_cokernel_of_doubling_on_z4():
    f = GroupHom(Zn(4), Zn(4), IntegerMatrix.from_rows([[2]]))
    assert AbelianService.hom_kernel(f).group == Zn(2)
    assert AbelianService.hom_image(f).group == Zn(2)
    assert AbelianService.hom_cokernel(f).group == Zn(2)
    assert not AbelianService.is_injective(f)
    assert not AbelianService.is_surjective(f)


def test_cokernel_of_multiplication_on_z():
    f = GroupHom(Z, Z, IntegerMatrix.from_rows([[6]]))
    cokernel = AbelianService.hom_cokernel(f)
    assert cokernel.group == Zn(6)
    assert cokernel.hom((1,)) != cokernel.group.zero()
    assert AbelianService.is_injective(f)


def test_ill_formed_hom_is_rejected():
    # a generator of order 2 cannot go to 1 in Z_3
    with pytest.raises(IllFormedHomError):
        GroupHom(Zn(2), Zn(3), IntegerMatrix.from_rows([[1]]))


def test_lift_finds_preimages():
    f = GroupHom(Z, Zn(6), IntegerMatrix.from_rows([[2]]))
    x = AbelianService.lift(f, (4,))
    assert f(x) == (4,)
    assert AbelianService.lift(f, (1,)) is None


@pytest.mark.parametrize(
    "B, A, expected",
    [
        (Zn(2), Zn(2), Zn(2)),
        (Zn(6), Zn(2), Zn(2)),
        (Zn(4), Z, Zn(4)),
        (Z, Zn(5), ZERO),
        (Zn(3), Zn(2), ZERO),
    ],
)
def test_ext_group(B, A, expected):
    assert AbelianService.ext_group(B, A) == expected


def test_groups_of_order():
    assert set(AbelianService.groups_of_order(8)) == {Zn(8), FgAbelianGroup(0, (2, 4)), FgAbelianGroup(0, (2, 2, 2))}
    assert AbelianService.groups_of_order(1) == [ZERO]


def test_extensions_of_cyclic_groups():
    assert AbelianService.extension_candidates(Zn(2), Zn(2)) == {FgAbelianGroup(0, (2, 2)), Zn(4)}
    assert AbelianService.extension_candidates(Zn(4), Zn(2)) == {FgAbelianGroup(0, (2, 4)), Zn(8)}
    assert AbelianService.extension_candidates(Zn(3), Zn(2)) == {Zn(6)}


def test_extension_candidates_reject_infinite_groups():
    with pytest.raises(InfiniteGroupError):
        AbelianService.extension_candidates(Z, Zn(2))


def test_extension_set_splits_free_quotients():
    assert AbelianService.extension_set(Z, Zn(2)) == {FgAbelianGroup(1, (2,))}


def _finite_pairs(limit: int):
    groups = {n: AbelianService.groups_of_order(n) for n in range(1, limit + 1)}
    for q in range(1, limit + 1):
        for s in range(1, limit // q + 1):
            for Q in groups[q]:
                for S in groups[s]:
                    yield Q, S


@pytest.mark.parametrize("quotient, sub", list(_finite_pairs(24)), ids=str)
def test_extension_candidates_match_exhaustive_search(quotient, sub):
    assert AbelianService.extension_candidates(quotient, sub) == brute_force_extensions(quotient, sub)


def test_exact_sequence_constrain_with_zero_maps():
    groups = [ZERO, Zn(2), None, Zn(3), ZERO]
    candidates = AbelianService.exact_sequence_constrain(groups, ["zero", None, None, "zero"])
    assert candidates == {2: {Zn(6)}}


def test_exact_sequence_constrain_with_known_maps():
    # Z --2--> Z -> ? -> Z_2 --0--> 0 forces ? to be an extension of Z_2 by Z_2
    double = GroupHom(Z, Z, IntegerMatrix.from_rows([[2]]))
    groups = [Z, Z, None, Zn(2), ZERO]
    candidates = AbelianService.exact_sequence_constrain(groups, [double, None, None, "zero"])
    assert candidates[2] == {FgAbelianGroup(0, (2, 2)), Zn(4)}


def test_exact_sequence_template_errors():
    with pytest.raises(MalformedTemplateError):
        AbelianService.exact_sequence_constrain([None, Zn(2)], [None])
    with pytest.raises(MalformedTemplateError):
        AbelianService.exact_sequence_constrain([Zn(2), None, Zn(2)], [None])


def test_check_exact_at():
    double = GroupHom(Z, Z, IntegerMatrix.from_rows([[2]]))
    reduce = GroupHom(Z, Zn(2), IntegerMatrix.from_rows([[1]]))
    assert AbelianService.check_exact_at(double, reduce)
    identity = GroupHom.identity(Z)
    assert not AbelianService.check_exact_at(identity, reduce)


def random_finite_group(rng: random.Random) -> FgAbelianGroup:
    return AbelianService.direct_sum(*(Zn(rng.choice([2, 3, 4, 6, 8, 9])) for _ in range(rng.randint(1, 3))))


def random_endomorphism(rng: random.Random, G: FgAbelianGroup) -> GroupHom:
    """Entry (i, j) is a multiple of d_i / gcd(d_i, d_j), so every generator order is respected."""
    d = G.orders
    rows = [[rng.randint(0, 3) * (d[i] // gcd(d[i], d[j])) for j in range(len(d))] for i in range(len(d))]
    return GroupHom(G, G, IntegerMatrix.from_rows(rows, cols=len(d)))


@pytest.mark.parametrize("seed", range(50))
def test_canonical_form_is_idempotent(seed):
    rng = random.Random(4000 + seed)
    rows, cols = rng.randint(1, 4), rng.randint(1, 4)
    relations = IntegerMatrix.from_rows([[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)], cols=cols)
    G = AbelianService.from_presentation(relations)
    assert AbelianService.from_presentation(G.relation_matrix()) == G


@pytest.mark.parametrize("seed", range(50))
def test_short_exact_sequence_middle_is_a_candidate(seed):
    rng = random.Random(5000 + seed)
    B = random_finite_group(rng)
    f = random_endomorphism(rng, B)
    A = AbelianService.hom_image(f).group
    C = AbelianService.hom_cokernel(f).group
    assert A.order() * C.order() == B.order()
    candidates = AbelianService.exact_sequence_constrain([ZERO, A, None, C, ZERO], ["zero", None, None, "zero"])
    assert B in candidates[2]
