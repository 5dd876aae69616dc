from fractions import Fraction

import numpy as np
import pytest
from numpy.random import PCG64, Generator

from services.errors import ShapeError
from services.exactlin import SparseMatrix, compose, kernel_dim, rank, transpose


def test_identity_and_zero_ranks():
    assert rank(SparseMatrix.identity(5)) == 5
    assert rank(SparseMatrix.zeros(3, 4)) == 0
    assert kernel_dim(SparseMatrix.zeros(3, 4)) == 4


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 2], [2, 4]], 1),
        ([[1, 2, 3], [4, 5, 6], [7, 8, 10]], 3),
        ([[1, 2, 3], [4, 5, 6], [7, 8, 9]], 2),
        ([[0, 0], [0, 0]], 0),
        ([[Fraction(1, 3), 1], [1, 3]], 1),
    ],
)
def test_rank_of_small_matrices(rows, expected):
    assert rank(SparseMatrix.from_dense(rows)) == expected


def test_hilbert_matrix_is_exactly_regular():
    n = 9
    hilbert = [[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)]
    assert rank(SparseMatrix.from_dense(hilbert)) == n


def test_repeated_entries_accumulate():
    m = SparseMatrix(2, 2, [(0, 0, 1), (0, 0, -1), (1, 1, 2), (1, 1, 3)])
    assert m.get(0, 0) == 0
    assert m.get(1, 1) == 5
    assert m.nnz == 1


def test_entry_out_of_range():
    with pytest.raises(ShapeError):
        SparseMatrix(2, 2, [(2, 0, 1)])


def test_compose_and_transpose():
    a = SparseMatrix.from_dense([[1, 2, 0], [0, 1, 1]])
    b = SparseMatrix.from_dense([[1, 0], [0, 1], [1, 1]])
    assert compose(a, b).to_dense() == [[1, 2], [1, 2]]
    assert transpose(a).shape == (3, 2)
    assert transpose(transpose(a)) == a
    assert compose(SparseMatrix.identity(2), a) == a


def test_compose_shape_mismatch():
    with pytest.raises(ShapeError):
        compose(SparseMatrix.identity(2), SparseMatrix.identity(3))


def test_rank_matches_transpose_rank():
    rows = [[1, 0, 2, 0], [0, 1, 1, 0], [1, 1, 3, 0], [2, -1, 3, 0]]
    m = SparseMatrix.from_dense(rows)
    assert rank(m) == rank(transpose(m)) == 2


def random_matrix(seed: int, n_rows: int, n_cols: int, inner: int | None = None) -> np.ndarray:
    """Sparse small-integer matrix; a product through ``inner`` columns when given."""
    rng = Generator(PCG64(seed))
    if inner is None:
        values = rng.integers(-2, 3, size=(n_rows, n_cols))
        return values * (rng.random((n_rows, n_cols)) < 0.4)
    left = rng.integers(-2, 3, size=(n_rows, inner))
    right = rng.integers(-2, 3, size=(inner, n_cols))
    return left @ right


def as_sparse(values: np.ndarray) -> SparseMatrix:
    return SparseMatrix.from_dense([[int(v) for v in row] for row in values])


@pytest.mark.parametrize("seed", range(20))
def test_random_rank_properties(seed):
    rng = Generator(PCG64(100 + seed))
    n_rows, n_cols = (int(v) for v in rng.integers(1, 9, size=2))
    values = random_matrix(seed, n_rows, n_cols, inner=int(rng.integers(1, 5)) if seed % 2 else None)
    m = as_sparse(values)
    assert rank(m) == rank(transpose(m)) == np.linalg.matrix_rank(values)
    assert kernel_dim(m) + rank(m) == n_cols


@pytest.mark.parametrize("seed", range(10))
def test_random_composition_rank(seed):
    a = as_sparse(random_matrix(seed, 6, 5, inner=3))
    b = as_sparse(random_matrix(50 + seed, 5, 7))
    product = compose(a, b)
    assert product.shape == (6, 7)
    assert rank(product) <= min(rank(a), rank(b))


def test_rational_entries_keep_exact_rank():
    values = random_matrix(7, 5, 5, inner=2)
    scaled = [[Fraction(int(v), 3) for v in row] for row in values]
    assert rank(SparseMatrix.from_dense(scaled)) == np.linalg.matrix_rank(values)


def test_entries_cancelling_to_zero_are_dropped():
    m = SparseMatrix(3, 3, [(0, 1, Fraction(1, 2)), (0, 1, Fraction(-1, 2)), (2, 2, 4), (2, 2, -4)])
    assert m.nnz == 0
    assert m.is_zero()
    assert rank(m) == 0
    assert list(m.entries()) == []
