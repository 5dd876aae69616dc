"""
Exact sparse linear algebra over the rationals.

Every homology rank in the project is computed here. Values are stored as
``fractions.Fraction`` so there is no overflow and no rounding.
"""

import heapq
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator

from services.errors import ShapeError

logger = logging.getLogger(__name__)

Rational = Fraction


class SparseMatrix:
    """
    Row-major sparse matrix with rational entries.

    Entries given to the constructor are accumulated, so repeated keys are
    summed and zero results are dropped.
    """

    __slots__ = ("n_rows", "n_cols", "_rows")

    def __init__(
        self,
        n_rows: int,
        n_cols: int,
        entries: Iterable[tuple[int, int, int | Fraction]] = (),
    ):
        if n_rows < 0 or n_cols < 0:
            raise ShapeError(f"Negative matrix shape: {n_rows}x{n_cols}")
        self.n_rows = n_rows
        self.n_cols = n_cols
        rows: dict[int, dict[int, Fraction]] = {}
        for r, c, value in entries:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ShapeError(
                    f"Entry ({r}, {c}) out of range for a {n_rows}x{n_cols} matrix"
                )
            row = rows.setdefault(r, {})
            total = row.get(c, 0) + Fraction(value)
            if total:
                row[c] = total
            else:
                row.pop(c, None)
        self._rows = {r: row for r, row in rows.items() if row}

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, ((i, i, 1) for i in range(n)))

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "SparseMatrix":
        return cls(n_rows, n_cols)

    @classmethod
    def from_dense(cls, rows: list[list[int | Fraction]]) -> "SparseMatrix":
        """
        Builds a matrix from a list of rows.
        Args:
            rows (list[list]): Dense rows, all of the same length.
        Returns:
            SparseMatrix: The sparse version of the input.
        """
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        if any(len(row) != n_cols for row in rows):
            raise ShapeError("Rows of a dense matrix must have equal length")
        return cls(
            n_rows,
            n_cols,
            ((r, c, v) for r, row in enumerate(rows) for c, v in enumerate(row) if v),
        )

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * self.n_cols for _ in range(self.n_rows)]
        for r, c, v in self.entries():
            dense[r][c] = v
        return dense

    def entries(self) -> Iterator[tuple[int, int, Fraction]]:
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield r, c, row[c]

    def row(self, r: int) -> dict[int, Fraction]:
        return dict(self._rows.get(r, {}))

    def get(self, r: int, c: int) -> Fraction:
        return self._rows.get(r, {}).get(c, Fraction(0))

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def is_zero(self) -> bool:
        return not self._rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __repr__(self) -> str:
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def transpose(m: SparseMatrix) -> SparseMatrix:
    return SparseMatrix(m.n_cols, m.n_rows, ((c, r, v) for r, c, v in m.entries()))


def compose(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """
    Exact product ``a @ b``.
    Args:
        a (SparseMatrix): Left factor.
        b (SparseMatrix): Right factor.
    Returns:
        SparseMatrix: The product, with zero entries dropped.
    Raises:
        ShapeError: If ``a.n_cols != b.n_rows``.
    """
    if a.n_cols != b.n_rows:
        raise ShapeError(
            f"Cannot compose a {a.n_rows}x{a.n_cols} matrix with a {b.n_rows}x{b.n_cols} matrix"
        )
    product: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for r, arow in a._rows.items():
        for k, av in arow.items():
            brow = b._rows.get(k)
            if not brow:
                continue
            for c, bv in brow.items():
                product[(r, c)] += av * bv
    return SparseMatrix(
        a.n_rows, b.n_cols, ((r, c, v) for (r, c), v in product.items() if v)
    )


def rank(m: SparseMatrix) -> int:
    """
    Rank over the rationals by sparse Gaussian elimination.

    The pivot row is the live row with the fewest nonzeros (ties go to the
    smallest row index); inside it the pivot column is the one with the
    fewest live rows (ties go to the smallest column index).
    Args:
        m (SparseMatrix): The matrix.
    Returns:
        int: Dimension of the column space.
    """
    rows = {r: dict(row) for r, row in m._rows.items()}
    col_rows: dict[int, set[int]] = defaultdict(set)
    for r, row in rows.items():
        for c in row:
            col_rows[c].add(r)
    heap = [(len(row), r) for r, row in rows.items()]
    heapq.heapify(heap)

    result = 0
    while heap:
        size, r = heapq.heappop(heap)
        pivot_row = rows.get(r)
        if pivot_row is None or len(pivot_row) != size:
            continue
        pivot_col = min(pivot_row, key=lambda c: (len(col_rows[c]), c))
        pivot_value = pivot_row[pivot_col]
        del rows[r]
        for c in pivot_row:
            col_rows[c].discard(r)
        result += 1

        for other in sorted(col_rows[pivot_col]):
            other_row = rows[other]
            factor = other_row[pivot_col] / pivot_value
            for c, v in pivot_row.items():
                updated = other_row.get(c, 0) - factor * v
                if updated:
                    if c not in other_row:
                        col_rows[c].add(other)
                    other_row[c] = updated
                elif c in other_row:
                    del other_row[c]
                    col_rows[c].discard(other)
            if other_row:
                heapq.heappush(heap, (len(other_row), other))
            else:
                del rows[other]

    logger.debug("rank of %dx%d matrix (nnz=%d): %d", m.n_rows, m.n_cols, m.nnz, result)
    return result


def kernel_dim(m: SparseMatrix) -> int:
    return m.n_cols - rank(m)
