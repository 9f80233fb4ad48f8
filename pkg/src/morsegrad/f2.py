"""Sparse linear algebra over the two-element field.

Vectors are Python ints used as bitsets: bit ``i`` set means coordinate ``i``
is one.  Matrices are stored column-major as a tuple of such bitsets.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def low_bit(v: int) -> int:
    """Index of the lowest set bit of a non-zero bitset."""
    return (v & -v).bit_length() - 1


def bits(v: int) -> Iterator[int]:
    """Iterate the indices of set bits in increasing order."""
    while v:
        b = v & -v
        yield b.bit_length() - 1
        v ^= b


class EchelonBasis:
    """Incrementally built echelon basis of a subspace of F2^m.

    Each stored vector has a distinct pivot (its lowest set bit) and carries a
    tag bitset.  Tags are combined with the same XORs as the vectors, which is
    how kernels and coordinates are tracked.
    """

    __slots__ = ("_pivots",)

    def __init__(self) -> None:
        self._pivots: dict[int, tuple[int, int]] = {}

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Reduce ``v`` as far as possible; returns ``(residual, tag)``.

        A zero residual means ``v`` lies in the span.
        """
        pivots = self._pivots
        while v:
            entry = pivots.get(low_bit(v))
            if entry is None:
                break
            v ^= entry[0]
            tag ^= entry[1]
        return v, tag

    def add(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Reduce ``v`` and store the residual if it is non-zero.

        Returns ``(residual, tag)`` as :meth:`reduce` does, before insertion.
        """
        r, t = self.reduce(v, tag)
        if r:
            self._pivots[low_bit(r)] = (r, t)
        return r, t

    def __contains__(self, v: int) -> bool:
        return self.reduce(v)[0] == 0


def rank(columns: Iterable[int]) -> int:
    basis = EchelonBasis()
    for c in columns:
        basis.add(c)
    return len(basis)


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of the kernel of the matrix with the given columns.

    Kernel vectors are bitsets over column indices.
    """
    basis = EchelonBasis()
    out = []
    for j, c in enumerate(columns):
        r, t = basis.add(c, 1 << j)
        if not r:
            out.append(t)
    return out


def solve(columns: Sequence[int], target: int) -> int | None:
    """Some ``x`` with ``A x = target``, or ``None`` when inconsistent."""
    basis = EchelonBasis()
    for j, c in enumerate(columns):
        basis.add(c, 1 << j)
    r, t = basis.reduce(target)
    return None if r else t


class BinaryMatrix:
    """A ``rows x cols`` matrix over F2 in sparse column-major bitset form."""

    __slots__ = ("rows", "cols", "columns")

    def __init__(self, rows: int, cols: int, columns: Iterable[int] | None = None):
        self.rows = rows
        self.cols = cols
        cs = tuple(columns) if columns is not None else (0,) * cols
        if len(cs) != cols:
            raise ValueError(f"expected {cols} columns, got {len(cs)}")
        limit = 1 << rows
        for c in cs:
            if c < 0 or c >= limit:
                raise ValueError("column has entries outside the row range")
        self.columns = cs

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int]]) -> BinaryMatrix:
        cs = [0] * cols
        seen = set()
        for i, j in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) out of bounds for {rows}x{cols}")
            if (i, j) in seen:
                raise ValueError(f"duplicate entry ({i}, {j})")
            seen.add((i, j))
            cs[j] |= 1 << i
        return cls(rows, cols, cs)

    @classmethod
    def from_dense(cls, array) -> BinaryMatrix:
        dense = [[int(x) & 1 for x in row] for row in array]
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_entries(rows, cols, [(i, j) for i in range(rows) for j in range(cols) if dense[i][j]])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BinaryMatrix:
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> list[tuple[int, int]]:
        return sorted((i, j) for j, c in enumerate(self.columns) for i in bits(c))

    def to_dense(self):
        import numpy as np

        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, j in self.entries:
            out[i, j] = 1
        return out

    def rank(self) -> int:
        return rank(self.columns)

    def kernel(self) -> list[int]:
        return kernel(self.columns)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __matmul__(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        mine = self.columns
        out = []
        for c in other.columns:
            acc = 0
            for i in bits(c):
                acc ^= mine[i]
            out.append(acc)
        return BinaryMatrix(self.rows, other.cols, out)

    def __add__(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BinaryMatrix(self.rows, self.cols, [a ^ b for a, b in zip(self.columns, other.columns)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and self.columns == other.columns

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.columns))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def transpose(self) -> BinaryMatrix:
        return BinaryMatrix.from_entries(self.cols, self.rows, [(j, i) for i, j in self.entries])

    def hstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return BinaryMatrix(self.rows, self.cols + other.cols, self.columns + other.columns)

    def vstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        shift = self.rows
        return BinaryMatrix(
            self.rows + other.rows,
            self.cols,
            [a | (b << shift) for a, b in zip(self.columns, other.columns)],
        )
