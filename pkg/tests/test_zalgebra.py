"""Smith normal form, rational ranks, kernels and images."""

import itertools
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khoma.zalgebra import (
    SparseIntMat,
    image_basis_q,
    kernel_basis_q,
    rank_q,
    snf,
)


def dense_det(mat):
    """Fraction Gaussian determinant, for unimodularity checks."""
    n = len(mat)
    a = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def minor_gcd(mat, k):
    """gcd of all k x k minors; the product d_1...d_k must equal it."""
    rows, cols = len(mat), len(mat[0])
    g = 0
    for rsel in itertools.combinations(range(rows), k):
        for csel in itertools.combinations(range(cols), k):
            sub = [[mat[r][c] for c in csel] for r in rsel]
            g = gcd(g, int(dense_det(sub)))
    return g


def check_snf(dense):
    a = SparseIntMat.from_dense(dense, cols=len(dense[0]) if dense else 0)
    res = snf(a, want_transforms=True)
    assert res.rank == len(res.invariant_factors)
    assert all(d > 0 for d in res.invariant_factors)
    for d, e in zip(res.invariant_factors, res.invariant_factors[1:]):
        assert e % d == 0
    product = res.u @ a @ res.v
    assert product == res.diagonal(a.rows, a.cols)
    assert abs(dense_det(res.u.to_dense())) == 1
    assert abs(dense_det(res.v.to_dense())) == 1
    return res


def test_snf_identity():
    res = check_snf([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert res.invariant_factors == (1, 1, 1)
    assert res.rank == 3


def test_snf_two_by_two():
    # gcd of entries is 2 and |det| = 8, forcing factors (2, 4)
    res = check_snf([[2, 4], [6, 8]])
    assert res.invariant_factors == (2, 4)
    assert res.rank == 2


def test_snf_zero_matrix():
    res = snf(SparseIntMat.zero(2, 5))
    assert res.invariant_factors == ()
    assert res.rank == 0


def test_snf_empty_matrix():
    res = snf(SparseIntMat.zero(0, 0), want_transforms=True)
    assert res.rank == 0
    assert res.u.rows == 0 and res.v.cols == 0


def test_snf_torsion_example():
    res = check_snf([[2, 0], [0, 2]])
    assert res.invariant_factors == (2, 2)
    res = check_snf([[6, 0], [0, 10]])
    assert res.invariant_factors == (2, 30)


def test_snf_known_torsion_chain():
    res = check_snf(
        [
            [2, 4, 4],
            [-6, 6, 12],
            [10, 4, 16],
        ]
    )
    assert res.invariant_factors == (2, 2, 156)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4),
        min_size=4,
        max_size=4,
    )
)
def test_snf_matches_minor_gcd_oracle(dense):
    res = check_snf(dense)
    prod = 1
    for k, d in enumerate(res.invariant_factors, start=1):
        prod *= d
        assert prod == minor_gcd(dense, k)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31))
def test_rank_q_equals_snf_rank_on_random_sparse(seed):
    rng = random.Random(seed)
    rows = rng.randrange(1, 50)
    cols = rng.randrange(1, 50)
    entries = {}
    for _ in range(rng.randrange(0, 3 * max(rows, cols))):
        entries[(rng.randrange(rows), rng.randrange(cols))] = rng.choice(
            [v for v in range(-9, 10) if v]
        )
    a = SparseIntMat(rows, cols, entries)
    assert rank_q(a) == snf(a).rank


def test_rank_q_examples():
    assert rank_q(SparseIntMat.identity(5)) == 5
    assert rank_q(SparseIntMat.from_dense([[1, 2], [2, 4]])) == 1
    assert rank_q(SparseIntMat.zero(3, 4)) == 0


def test_kernel_identity_is_empty():
    assert kernel_basis_q(SparseIntMat.identity(3)) == []


def test_kernel_single_equation():
    basis = kernel_basis_q(SparseIntMat.from_dense([[1, 1]]))
    assert len(basis) == 1
    (vec,) = basis
    assert vec[0] == -vec[1] != 0


def test_image_rank_one():
    basis = image_basis_q(SparseIntMat.from_dense([[1, 2], [2, 4]]))
    assert len(basis) == 1
    (vec,) = basis
    assert vec == [Fraction(1), Fraction(2)]


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31))
def test_rank_nullity_and_bases(seed):
    rng = random.Random(seed)
    rows = rng.randrange(1, 10)
    cols = rng.randrange(1, 10)
    entries = {
        (r, c): rng.randrange(-4, 5)
        for r in range(rows)
        for c in range(cols)
        if rng.random() < 0.4
    }
    a = SparseIntMat(rows, cols, entries)
    ker = kernel_basis_q(a)
    img = image_basis_q(a)
    r = rank_q(a)
    assert len(ker) + r == a.cols
    assert len(img) == r
    # every kernel vector really is annihilated
    for vec in ker:
        for row in range(a.rows):
            assert sum(Fraction(a.get(row, c)) * vec[c] for c in range(a.cols)) == 0


def test_matmul_and_transpose():
    a = SparseIntMat.from_dense([[1, 2], [0, 1]])
    b = SparseIntMat.from_dense([[1, 0], [3, 1]])
    assert (a @ b).to_dense() == [[7, 2], [3, 1]]
    assert a.transpose().to_dense() == [[1, 0], [2, 1]]
    with pytest.raises(ValueError):
        a @ SparseIntMat.zero(3, 3)


def test_entries_are_cleaned():
    a = SparseIntMat(2, 2, {(0, 0): 0, (1, 1): 5})
    assert a.nnz == 1
    with pytest.raises(ValueError):
        SparseIntMat(1, 1, {(1, 0): 2})
