from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from src.utils.exceptions import DimensionMismatchError


def _frozen(data: np.ndarray) -> np.ndarray:
    data.flags.writeable = False
    return data


def _object_array(rows: int, cols: int) -> np.ndarray:
    data = np.empty((rows, cols), dtype=object)
    data.fill(0)
    return data


class IntegerMatrix:
    """Immutable integer matrix with arbitrary-precision entries.

    Entries are held as Python ints in a numpy object array, so arithmetic never
    overflows. Every operation returns a new matrix.
    """

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray):
        if data.ndim != 2:
            raise DimensionMismatchError(f"expected a 2-dimensional array, got {data.ndim}")
        copy = _object_array(*data.shape)
        for (i, j), value in np.ndenumerate(data):
            copy[i, j] = int(value)
        self._data = _frozen(copy)

    @classmethod
    def _wrap(cls, data: np.ndarray) -> IntegerMatrix:
        # trusted path: data is a fresh object array of Python ints
        matrix = cls.__new__(cls)
        matrix._data = _frozen(data)
        return matrix

    # Constructors

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else (cols or 0)
        if cols is not None and rows and width != cols:
            raise DimensionMismatchError(f"rows have {width} entries, expected {cols}")
        data = _object_array(len(rows), width)
        for i, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatchError(f"ragged row {i}: {len(row)} entries, expected {width}")
            for j, value in enumerate(row):
                data[i, j] = int(value)
        return cls._wrap(data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntegerMatrix:
        data = _object_array(rows, len(columns))
        for j, column in enumerate(columns):
            if len(column) != rows:
                raise DimensionMismatchError(f"column {j} has {len(column)} entries, expected {rows}")
            for i, value in enumerate(column):
                data[i, j] = int(value)
        return cls._wrap(data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls._wrap(_object_array(rows, cols))

    @classmethod
    def identity(cls, n: int) -> IntegerMatrix:
        data = _object_array(n, n)
        for i in range(n):
            data[i, i] = 1
        return cls._wrap(data)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntegerMatrix:
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        if len(entries) > min(rows, cols):
            raise DimensionMismatchError("too many diagonal entries for the requested shape")
        data = _object_array(rows, cols)
        for i, value in enumerate(entries):
            data[i, i] = int(value)
        return cls._wrap(data)

    @classmethod
    def hstack(cls, blocks: Sequence[IntegerMatrix], rows: int | None = None) -> IntegerMatrix:
        if not blocks:
            return cls.zeros(rows or 0, 0)
        height = blocks[0].rows
        if any(b.rows != height for b in blocks):
            raise DimensionMismatchError("hstack blocks disagree on row count")
        return cls._wrap(np.concatenate([b._data for b in blocks], axis=1).astype(object))

    @classmethod
    def vstack(cls, blocks: Sequence[IntegerMatrix], cols: int | None = None) -> IntegerMatrix:
        if not blocks:
            return cls.zeros(0, cols or 0)
        width = blocks[0].cols
        if any(b.cols != width for b in blocks):
            raise DimensionMismatchError("vstack blocks disagree on column count")
        return cls._wrap(np.concatenate([b._data for b in blocks], axis=0).astype(object))

    @classmethod
    def block_diagonal(cls, blocks: Sequence[IntegerMatrix]) -> IntegerMatrix:
        data = _object_array(sum(b.rows for b in blocks), sum(b.cols for b in blocks))
        r = c = 0
        for block in blocks:
            data[r:r + block.rows, c:c + block.cols] = block._data
            r += block.rows
            c += block.cols
        return cls._wrap(data)

    # Shape and access

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside shape {self.shape}")
        return self._data[i, j]

    def row(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} outside shape {self.shape}")
        return tuple(self._data[i, :])

    def column(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} outside shape {self.shape}")
        return tuple(self._data[:, j])

    def to_rows(self) -> list[list[int]]:
        return [list(self._data[i, :]) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_numpy(self) -> np.ndarray:
        return self._data.copy()

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._data.flat)

    # Arithmetic

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix._wrap(self._data.T.copy())

    @property
    def T(self) -> IntegerMatrix:
        return self.transpose()

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return IntegerMatrix.zeros(self.rows, other.cols)
        return IntegerMatrix._wrap(np.dot(self._data, other._data).astype(object))

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(vector)} against {self.shape}")
        return tuple(
            sum((self._data[i, j] * int(vector[j]) for j in range(self.cols)), 0)
            for i in range(self.rows)
        )

    def __add__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return IntegerMatrix._wrap(self._data + other._data)

    def __sub__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot subtract {other.shape} from {self.shape}")
        return IntegerMatrix._wrap(self._data - other._data)

    def __neg__(self) -> IntegerMatrix:
        return IntegerMatrix._wrap(-self._data)

    def scale(self, k: int) -> IntegerMatrix:
        return IntegerMatrix._wrap(self._data * int(k))

    def select_rows(self, indices: Iterable[int]) -> IntegerMatrix:
        indices = list(indices)
        data = _object_array(len(indices), self.cols)
        for new, old in enumerate(indices):
            data[new, :] = self._data[old, :]
        return IntegerMatrix._wrap(data)

    def select_columns(self, indices: Iterable[int]) -> IntegerMatrix:
        indices = list(indices)
        data = _object_array(self.rows, len(indices))
        for new, old in enumerate(indices):
            data[:, new] = self._data[:, old]
        return IntegerMatrix._wrap(data)

    # Value semantics

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for a, b in zip(self._data.flat, other._data.flat)
        )

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self._data.flat)))

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.to_rows()!r}, shape={self.shape})"


class SmithDecomposition:
    """U·A·V = S with U, V unimodular and S diagonal, d_i | d_{i+1}.

    The inverses of U and V are kept alongside, since integer inverses are
    needed for generator bookkeeping and cannot come from float inversion.
    """

    __slots__ = ("U", "S", "V", "U_inv", "V_inv")

    def __init__(self, U: IntegerMatrix, S: IntegerMatrix, V: IntegerMatrix,
                 U_inv: IntegerMatrix, V_inv: IntegerMatrix):
        self.U = U
        self.S = S
        self.V = V
        self.U_inv = U_inv
        self.V_inv = V_inv

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    def __repr__(self) -> str:
        return f"SmithDecomposition(diagonal={self.diagonal}, shape={self.S.shape})"
