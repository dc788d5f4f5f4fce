import random
from itertools import combinations
from math import gcd, lcm

import pytest
from sympy import Matrix

from src.models.integer_matrix import IntegerMatrix
from src.services.linalg_service import LinalgService
from src.utils.exceptions import DimensionMismatchError


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 6) -> IntegerMatrix:
    return IntegerMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)


def determinantal_divisors(A: IntegerMatrix) -> list[int]:
    """d_k = D_k / D_{k-1}, D_k the gcd of all k×k minors."""
    rows = A.to_rows()
    m, n = A.shape
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for r in combinations(range(m), k):
            for c in combinations(range(n), k):
                g = gcd(g, int(Matrix([[rows[i][j] for j in c] for i in r]).det()))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


def primitive_integer_vector(column) -> list[int]:
    scale = lcm(*(int(x.q) for x in column))
    vector = [int(x * scale) for x in column]
    g = gcd(*vector)
    return [v // g for v in vector]


def test_snf_of_diagonal_matrix():
    A = IntegerMatrix.from_rows([[2, 0], [0, 3]])
    snf = LinalgService.smith_normal_form(A)
    assert snf.diagonal == (1, 6)


def test_snf_of_zero_matrix():
    snf = LinalgService.smith_normal_form(IntegerMatrix.zeros(2, 3))
    assert snf.rank == 0
    assert snf.diagonal == (0, 0)


@pytest.mark.parametrize("seed", range(200))
def test_snf_decomposition_is_exact(seed):
    rng = random.Random(seed)
    A = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8), bound=9)
    snf = LinalgService.smith_normal_form(A)
    assert snf.U @ A @ snf.V == snf.S
    assert snf.U_inv @ snf.S @ snf.V_inv == A
    assert snf.U @ snf.U_inv == IntegerMatrix.identity(A.rows)
    assert snf.V @ snf.V_inv == IntegerMatrix.identity(A.cols)
    nonzero = [d for d in snf.diagonal if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@pytest.mark.parametrize("seed", range(30))
def test_snf_matches_gcd_of_minors(seed):
    rng = random.Random(1000 + seed)
    A = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
    nonzero = [d for d in LinalgService.smith_normal_form(A).diagonal if d]
    assert nonzero == determinantal_divisors(A)


@pytest.mark.parametrize("seed", range(10))
def test_kernel_basis_is_annihilated(seed):
    rng = random.Random(2000 + seed)
    A = random_matrix(rng, 2, 4)
    K = LinalgService.kernel_basis(A)
    assert K.rows == 4
    assert K.cols == 4 - LinalgService.rank(A)
    assert (A @ K).is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_kernel_basis_is_saturated(seed):
    rng = random.Random(3000 + seed)
    rows = rng.randint(1, 4)
    A = random_matrix(rng, rows, rng.randint(rows + 1, 6), bound=9)
    K = LinalgService.kernel_basis(A)
    rational_kernel = Matrix(A.to_rows()).nullspace()
    assert K.cols == len(rational_kernel)
    for column in rational_kernel:
        v = primitive_integer_vector(column)
        assert not any(A.apply(v))
        x = LinalgService.solve_linear(K, v)
        assert x is not None
        assert K.apply(x) == tuple(v)


@pytest.mark.parametrize("rows", [[[1, 1]], [[2, 2]], [[3, 3], [6, 6]]])
def test_scaled_kernel_vector_resolves_through_the_primitive_generator(rows):
    A = IntegerMatrix.from_rows(rows)
    K = LinalgService.kernel_basis(A)
    assert K.cols == 1
    assert abs(gcd(*K.column(0))) == 1
    for v, k in (((1, -1), 1), ((2, -2), 2), ((-3, 3), 3)):
        x = LinalgService.solve_linear(K, v)
        assert x is not None and abs(x[0]) == k


def test_solve_linear_finds_integer_solutions():
    A = IntegerMatrix.from_rows([[2, 4], [0, 3]])
    x = LinalgService.solve_linear(A, [6, 3])
    assert A.apply(x) == (6, 3)


def test_solve_linear_rejects_rational_solutions():
    A = IntegerMatrix.from_rows([[2]])
    assert LinalgService.solve_linear(A, [1]) is None


def test_solve_linear_checks_shapes():
    with pytest.raises(DimensionMismatchError):
        LinalgService.solve_linear(IntegerMatrix.identity(2), [1, 2, 3])


def test_column_space_basis_spans_the_same_lattice():
    A = IntegerMatrix.from_rows([[2, 4, 6], [0, 0, 0]])
    B = LinalgService.column_space_basis(A)
    assert B.cols == 1
    assert LinalgService.solve_linear(B, A.column(2)) is not None
    assert LinalgService.solve_linear(A, B.column(0)) is not None
