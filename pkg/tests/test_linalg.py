from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedgraded.linalg import (Matrix, as_rational, format_rational, independent, inverse,
                                kernel, quotient, rank, reduce, solve)


def small_matrices(max_side=4):
    return st.integers(1, max_side).flatmap(lambda r: st.integers(1, max_side).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_rational_parsing_and_format():
    assert as_rational("3/6") == Fraction(1, 2)
    assert as_rational("-4") == -4
    assert format_rational(Fraction(-2, 4)) == "-1/2"
    assert format_rational(Fraction(5)) == "5"
    with pytest.raises(ValueError):
        as_rational("1.5x")


def test_sparse_storage_has_no_zeros():
    m = Matrix.from_rows([[0, 1], [0, 0]])
    assert m.nnz() == 1
    assert (m - m).nnz() == 0


def test_reduce_identity():
    r = reduce(Matrix.identity(3))
    assert r.rank == 3 and r.kernel_basis == ()


def test_reduce_zero():
    r = reduce(Matrix.zeros(2, 5))
    assert r.rank == 0 and len(r.kernel_basis) == 5


def test_reduce_hand_example():
    # row reduce [[1,2],[2,4]] by hand: rank 1, kernel spanned by (2,-1)
    r = reduce(Matrix.from_rows([[1, 2], [2, 4]]))
    assert r.rank == 1
    (v,) = r.kernel_basis
    assert v[0] * -1 == v[1] * 2


def test_solve_and_inverse():
    a = Matrix.from_rows([[2, 1], [1, 1]])
    inv = inverse(a)
    assert a @ inv == Matrix.identity(2)
    x = solve(a, Matrix.from_rows([[3], [2]]))
    assert x == Matrix.from_rows([[1], [1]])
    assert solve(Matrix.from_rows([[1], [1]]), Matrix.from_rows([[1], [0]])) is None


def test_quotient_splits():
    sub = Matrix.from_rows([[1], [1], [0]])
    q, s = quotient(3, sub)
    assert q.shape == (2, 3)
    assert (q @ sub).is_zero()
    assert q @ s == Matrix.identity(2)


def test_kron_shape():
    a, b = Matrix.from_rows([[1, 2]]), Matrix.from_rows([[0], [3]])
    assert a.kron(b) == Matrix.from_rows([[0, 0], [3, 6]])


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    r = reduce(m)
    assert r.rank == rank(m) == rank(m.T)
    assert r.rank + len(r.kernel_basis) == m.cols
    k = kernel(m)
    assert (m @ k).is_zero()
    if k.cols:
        assert independent(k)
    assert len(r.image_basis) == r.rank


@settings(max_examples=40, deadline=None)
@given(small_matrices(3), small_matrices(3))
def test_product_rank_bound(a, b):
    a, b = Matrix.from_rows(a), Matrix.from_rows(b)
    b = Matrix.from_rows(b.to_rows()[:a.cols] + [[0] * b.cols] * max(0, a.cols - b.rows))
    assert rank(a @ b) <= min(rank(a), rank(b))
