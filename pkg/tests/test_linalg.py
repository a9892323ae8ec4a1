"""Exact matrix substrate: RREF, solve, nullspace, inverse, kron/vec
conventions, over prime fields and the rationals."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from mackeykit.linalg import GF, QQ, Mat, perm_to_mat


def test_gf_validates_primality():
    GF(2)
    GF(97)
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        GF(1)


def test_field_equality_and_char():
    assert GF(3) == GF(3)
    assert GF(3) != GF(5)
    assert QQ.p is None and GF(7).p == 7


def test_mod_p_reduction_on_construction():
    m = Mat(GF(5), np.array([[7, -3], [10, 4]]))
    assert m == Mat(GF(5), np.array([[2, 2], [0, 4]]))


def test_rational_normalization_of_denominator():
    m = Mat(QQ, np.array([[2, 4], [6, 8]]), den=2)
    assert m.entry(0, 0) == Fraction(1)
    assert m.entry(1, 0) == Fraction(3)
    assert m == Mat(QQ, np.array([[1, 2], [3, 4]]))


def test_arithmetic_against_fraction_oracle():
    rng = np.random.default_rng(7)
    a = Mat(QQ, rng.integers(-5, 6, size=(4, 4)), den=3)
    b = Mat(QQ, rng.integers(-5, 6, size=(4, 4)), den=2)
    prod = (a @ b).to_fractions()
    af, bf = a.to_fractions(), b.to_fractions()
    for i in range(4):
        for j in range(4):
            assert prod[i][j] == sum(af[i][k] * bf[k][j] for k in range(4))
    s = (a + b).to_fractions()
    for i in range(4):
        for j in range(4):
            assert s[i][j] == af[i][j] + bf[i][j]


@pytest.mark.parametrize("field", [GF(2), GF(3), QQ])
def test_rref_properties(field):
    rng = np.random.default_rng(11)
    a = Mat(field, rng.integers(-4, 5, size=(5, 7)))
    r, pivots = a.rref()
    # pivot columns carry identity pattern
    for k, c in enumerate(pivots):
        col = [r.entry(i, c) for i in range(5)]
        assert col[k] == 1 and all(col[i] == 0 for i in range(5) if i != k)
    assert a.rank() == len(pivots)


@pytest.mark.parametrize("field", [GF(2), GF(3), QQ])
def test_nullspace_and_solve(field):
    rng = np.random.default_rng(13)
    a = Mat(field, rng.integers(-4, 5, size=(4, 6)))
    ns = a.nullspace()
    assert (a @ ns).is_zero()
    assert a.rank() + ns.ncols == 6
    # a consistent system solves exactly
    x = Mat(field, rng.integers(-3, 4, size=(6, 2)))
    b = a @ x
    sol = a.solve(b)
    assert sol is not None and a @ sol == b


def test_solve_rejects_inconsistent_system():
    a = Mat(QQ, np.array([[1, 0], [2, 0]]))
    b = Mat(QQ, np.array([[1], [0]]))
    assert a.solve(b) is None


@pytest.mark.parametrize("field", [GF(2), GF(5), QQ])
def test_inverse(field):
    rng = np.random.default_rng(17)
    while True:
        a = Mat(field, rng.integers(-4, 5, size=(4, 4)))
        if a.is_invertible():
            break
    inv = a.inv()
    assert (a @ inv).is_identity() and (inv @ a).is_identity()


def test_singular_matrix_not_invertible():
    a = Mat(QQ, np.array([[1, 2], [2, 4]]))
    assert not a.is_invertible()
    a2 = Mat(GF(3), np.array([[1, 2], [2, 4]]))  # second row = 2 * first mod 3
    assert not a2.is_invertible()


def test_pow_matches_repeated_multiplication():
    a = Mat(GF(7), np.array([[1, 2], [3, 4]]))
    acc = Mat.identity(GF(7), 2)
    for e in range(6):
        assert a.pow(e) == acc
        acc = acc @ a


def test_kron_vec_convention():
    # column-major vec: vec(A F B) = (B^T (x) A) vec(F)
    rng = np.random.default_rng(19)
    A = Mat(QQ, rng.integers(-3, 4, size=(3, 2)))
    F = Mat(QQ, rng.integers(-3, 4, size=(2, 4)))
    B = Mat(QQ, rng.integers(-3, 4, size=(4, 2)))
    lhs = (A @ F @ B).vec()
    rhs = B.T.kron(A) @ F.vec()
    assert lhs == rhs


def test_vec_unvec_roundtrip():
    m = Mat(GF(3), np.arange(12).reshape(3, 4))
    assert Mat.unvec(GF(3), m.vec(), 3, 4) == m


def test_block_diag_and_stacks():
    a = Mat(QQ, np.array([[1]]))
    b = Mat(QQ, np.array([[2, 3], [4, 5]]))
    d = Mat.block_diag(QQ, [a, b])
    assert d.shape == (3, 3)
    assert d.entry(0, 0) == 1 and d.entry(2, 2) == 5 and d.entry(0, 1) == 0
    h = a.hstack(Mat(QQ, np.array([[9]])))
    assert h.shape == (1, 2) and h.entry(0, 1) == 9
    v = a.vstack(Mat(QQ, np.array([[8]])))
    assert v.shape == (2, 1) and v.entry(1, 0) == 8


def test_perm_to_mat_acts_on_basis():
    P = perm_to_mat(QQ, [2, 0, 1])  # e0 -> e2, e1 -> e0, e2 -> e1
    e0 = Mat(QQ, np.array([[1], [0], [0]]))
    assert P @ e0 == Mat(QQ, np.array([[0], [0], [1]]))


def test_fraction_solve_with_denominators():
    a = Mat(QQ, np.array([[2, 1], [1, 3]]), den=2)  # [[1, 1/2], [1/2, 3/2]]
    x = Mat(QQ, np.array([[1], [3]]), den=3)
    b = a @ x
    sol = a.solve(b)
    assert sol == x


def test_rank_of_kron_is_product_of_ranks():
    a = Mat(QQ, np.array([[1, 2], [2, 4], [0, 1]]))   # rank 2
    b = Mat(QQ, np.array([[1, 1], [1, 1]]))           # rank 1
    assert a.kron(b).rank() == a.rank() * b.rank()
