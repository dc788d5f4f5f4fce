import logging
from typing import Optional, Sequence

from src.models.integer_matrix import IntegerMatrix, SmithDecomposition
from src.utils.exceptions import DimensionMismatchError

logger = logging.getLogger(__name__)


class _Reduction:
    """Working state of a Smith reduction.

    Row operations on D are mirrored on U (left) and U_inv (right), column
    operations on V (right) and V_inv (left), keeping U·A·V = D throughout.
    """

    def __init__(self, A: IntegerMatrix):
        m, n = A.shape
        self.D = A.to_numpy()
        self.U = IntegerMatrix.identity(m).to_numpy()
        self.U_inv = IntegerMatrix.identity(m).to_numpy()
        self.V = IntegerMatrix.identity(n).to_numpy()
        self.V_inv = IntegerMatrix.identity(n).to_numpy()

    # row i <- row i + k * row t
    def add_row(self, i: int, t: int, k: int):
        self.D[i, :] += k * self.D[t, :]
        self.U[i, :] += k * self.U[t, :]
        self.U_inv[:, t] -= k * self.U_inv[:, i]

    def swap_rows(self, i: int, t: int):
        if i == t:
            return
        self.D[[i, t], :] = self.D[[t, i], :]
        self.U[[i, t], :] = self.U[[t, i], :]
        self.U_inv[:, [i, t]] = self.U_inv[:, [t, i]]

    def negate_row(self, i: int):
        self.D[i, :] *= -1
        self.U[i, :] *= -1
        self.U_inv[:, i] *= -1

    # column j <- column j + k * column t
    def add_column(self, j: int, t: int, k: int):
        self.D[:, j] += k * self.D[:, t]
        self.V[:, j] += k * self.V[:, t]
        self.V_inv[t, :] -= k * self.V_inv[j, :]

    def swap_columns(self, j: int, t: int):
        if j == t:
            return
        self.D[:, [j, t]] = self.D[:, [t, j]]
        self.V[:, [j, t]] = self.V[:, [t, j]]
        self.V_inv[[j, t], :] = self.V_inv[[t, j], :]

    def pivot(self, t: int) -> Optional[tuple[int, int]]:
        """Smallest nonzero |entry| in D[t:, t:], ties broken by lowest (row, col)."""
        best = None
        m, n = self.D.shape
        for i in range(t, m):
            for j in range(t, n):
                value = abs(self.D[i, j])
                if value and (best is None or value < best[0]):
                    best = (value, i, j)
        return None if best is None else (best[1], best[2])

    def clear(self, t: int):
        m, n = self.D.shape
        while True:
            dirty = False
            for i in range(t + 1, m):
                if self.D[i, t]:
                    self.add_row(i, t, -(self.D[i, t] // self.D[t, t]))
                    dirty = dirty or self.D[i, t] != 0
            for j in range(t + 1, n):
                if self.D[t, j]:
                    self.add_column(j, t, -(self.D[t, j] // self.D[t, t]))
                    dirty = dirty or self.D[t, j] != 0
            if dirty:
                # a remainder is smaller than the pivot; move it into place
                i, j = self.pivot_in_cross(t)
                self.swap_rows(t, i)
                self.swap_columns(t, j)
                continue
            offender = self.non_divisible(t)
            if offender is None:
                return
            self.add_row(t, offender, 1)

    def pivot_in_cross(self, t: int) -> tuple[int, int]:
        m, n = self.D.shape
        candidates = [(abs(self.D[i, t]), i, t) for i in range(t, m) if self.D[i, t]]
        candidates += [(abs(self.D[t, j]), t, j) for j in range(t, n) if self.D[t, j]]
        _, i, j = min(candidates)
        return i, j

    def non_divisible(self, t: int) -> Optional[int]:
        m, n = self.D.shape
        d = self.D[t, t]
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if self.D[i, j] % d:
                    return i
        return None


class LinalgService:
    """Exact integer linear algebra built on the Smith normal form."""

    @staticmethod
    def smith_normal_form(A: IntegerMatrix) -> SmithDecomposition:
        """
        Computes U, S, V with U·A·V = S, S diagonal with non-negative
        entries d_1 | d_2 | ..., and U, V unimodular.
        Pivoting takes the smallest nonzero absolute value, ties by lowest index,
        so the decomposition is reproducible.
        """
        work = _Reduction(A)
        m, n = A.shape
        for t in range(min(m, n)):
            position = work.pivot(t)
            if position is None:
                break
            work.swap_rows(t, position[0])
            work.swap_columns(t, position[1])
            work.clear(t)
            if work.D[t, t] < 0:
                work.negate_row(t)
        logger.debug(f"Smith normal form of a {m}x{n} matrix computed")
        return SmithDecomposition(
            U=IntegerMatrix(work.U),
            S=IntegerMatrix(work.D),
            V=IntegerMatrix(work.V),
            U_inv=IntegerMatrix(work.U_inv),
            V_inv=IntegerMatrix(work.V_inv),
        )

    @staticmethod
    def solve_with(snf: SmithDecomposition, b: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Solves A·x = b reusing the decomposition of A."""
        rows, cols = snf.S.shape
        if len(b) != rows:
            raise DimensionMismatchError(f"right-hand side of length {len(b)} against {snf.S.shape}")
        c = snf.U.apply(b)
        diagonal = snf.diagonal
        y = [0] * cols
        for i, value in enumerate(c):
            d = diagonal[i] if i < len(diagonal) else 0
            if d == 0:
                if value != 0:
                    return None
            elif value % d:
                return None
            else:
                y[i] = value // d
        return snf.V.apply(y)

    @staticmethod
    def solve_linear(A: IntegerMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
        """
        Returns an integer x with A·x = b, or None when no integer solution exists.
        """
        if len(b) != A.rows:
            raise DimensionMismatchError(f"right-hand side of length {len(b)} against {A.shape}")
        return LinalgService.solve_with(LinalgService.smith_normal_form(A), b)

    @staticmethod
    def solve_many(A: IntegerMatrix, columns: Sequence[Sequence[int]]) -> Optional[list[tuple[int, ...]]]:
        """Solves A·x = b for each b, sharing one decomposition. None if any fails."""
        snf = LinalgService.smith_normal_form(A)
        solutions = []
        for b in columns:
            x = LinalgService.solve_with(snf, b)
            if x is None:
                return None
            solutions.append(x)
        return solutions

    @staticmethod
    def kernel_basis(A: IntegerMatrix) -> IntegerMatrix:
        """
        Columns form a basis of the integer kernel lattice of A.
        These are the columns of V past the rank, so the basis is saturated.
        """
        snf = LinalgService.smith_normal_form(A)
        rank = snf.rank
        return snf.V.select_columns(range(rank, A.cols))

    @staticmethod
    def rank(A: IntegerMatrix) -> int:
        return LinalgService.smith_normal_form(A).rank

    @staticmethod
    def column_space_basis(A: IntegerMatrix) -> IntegerMatrix:
        """Independent columns spanning the same lattice as the columns of A."""
        snf = LinalgService.smith_normal_form(A)
        columns = [
            [d * v for v in snf.U_inv.column(i)]
            for i, d in enumerate(snf.diagonal) if d
        ]
        return IntegerMatrix.from_columns(columns, rows=A.rows)
