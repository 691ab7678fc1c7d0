from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcmkit.errors import UsageError
from mcmkit.linalg import GF, QQ, DenseMatrix, RowSpace


def test_rref_identity_gf5():
    m = DenseMatrix.identity(GF(5), 3)
    reduced, pivots, rank = m.rref()
    assert rank == 3
    assert pivots == (0, 1, 2)
    assert reduced == m


def test_rref_rank_one_gf5():
    m = DenseMatrix(GF(5), [[1, 2], [2, 4]])
    reduced, pivots, rank = m.rref()
    assert rank == 1
    assert pivots == (0,)
    assert reduced.rows()[0].tolist() == [1, 2]


def test_rref_zero_matrix():
    m = DenseMatrix.zeros(GF(5), 2, 3)
    _, pivots, rank = m.rref()
    assert rank == 0
    assert pivots == ()


def test_kernel_identity_empty():
    m = DenseMatrix.identity(GF(5), 2)
    assert m.kernel_basis().shape == (2, 0)


def test_kernel_rank_one():
    m = DenseMatrix(GF(5), [[1, 2], [2, 4]])
    k = m.kernel_basis()
    assert k.shape == (2, 1)
    assert (m @ k).is_zero()
    # spanned by (3, 1) up to scaling: x + 2y = 0 mod 5
    x, y = k[0, 0], k[1, 0]
    assert (x + 2 * y) % 5 == 0 and (x, y) != (0, 0)


def test_kernel_zero_map():
    m = DenseMatrix.zeros(GF(5), 1, 2)
    k = m.kernel_basis()
    assert k.shape == (2, 2)
    assert k.rank() == 2


def test_solve_identity():
    m = DenseMatrix.identity(GF(7), 3)
    rhs = DenseMatrix(GF(7), [[1], [2], [3]])
    assert m.solve(rhs) == rhs


def test_solve_scalar_inverse():
    m = DenseMatrix(GF(5), [[2]])
    rhs = DenseMatrix(GF(5), [[1]])
    x = m.solve(rhs)
    assert x == DenseMatrix(GF(5), [[3]])


def test_solve_inconsistent():
    m = DenseMatrix(GF(5), [[0]])
    rhs = DenseMatrix(GF(5), [[1]])
    assert m.solve(rhs) is None


def test_solve_shape_mismatch():
    m = DenseMatrix.identity(GF(5), 2)
    rhs = DenseMatrix(GF(5), [[1]])
    with pytest.raises(UsageError):
        m.solve(rhs)


def test_rational_matrices():
    m = DenseMatrix(QQ, [[Fraction(1, 2), 1], [1, 2]])
    reduced, pivots, rank = m.rref()
    assert rank == 1
    k = m.kernel_basis()
    assert (m @ k).is_zero()
    assert k.shape == (2, 1)


small_mats = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(0, 6), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


@given(small_mats)
@settings(max_examples=150, deadline=None)
def test_rank_equals_rank_of_transpose(rows):
    m = DenseMatrix(GF(7), rows)
    assert m.rank() == m.transpose().rank()


@given(small_mats)
@settings(max_examples=150, deadline=None)
def test_rank_nullity(rows):
    m = DenseMatrix(GF(7), rows)
    k = m.kernel_basis()
    assert m.ncols == m.rank() + k.ncols
    assert (m @ k).is_zero()
    assert k.rank() == k.ncols


@given(small_mats, st.integers(0, 1))
@settings(max_examples=100, deadline=None)
def test_solve_roundtrip_exact(rows, ncols_rhs):
    m = DenseMatrix(GF(7), rows)
    # build an rhs guaranteed to be consistent
    x = DenseMatrix(GF(7), [[(i * 3 + j) % 7 for j in range(ncols_rhs + 1)] for i in range(m.ncols)])
    rhs = m @ x
    sol = m.solve(rhs)
    assert sol is not None
    assert m @ sol == rhs


def test_rowspace_reduce_and_membership():
    s = RowSpace(GF(7), 4)
    assert s.add([1, 2, 3, 4])
    assert s.add([0, 1, 1, 0])
    assert not s.add([1, 3, 4, 4])  # sum of the two
    assert s.dim == 2
    assert s.contains([2, 4, 6, 1])
    r = s.reduce([0, 0, 1, 0])
    assert r.any()
    assert s.copy().dim == 2


def test_rowspace_canonical_reduction_is_idempotent():
    s = RowSpace(GF(5), 3)
    s.add([1, 1, 0])
    s.add([0, 2, 1])
    v = [3, 4, 2]
    r1 = s.reduce(v)
    r2 = s.reduce(r1)
    assert (r1 == r2).all()
