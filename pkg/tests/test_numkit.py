import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from sjdomains import numkit


def test_as_row_vector_shapes():
    assert_allclose(numkit.as_row_vector(2.0).real, [2.0])
    assert_allclose(numkit.as_row_vector([1, 2, 3]).real, [1, 2, 3])
    assert numkit.as_row_vector(np.ones((2, 2))).shape == (4,)  # flattened
    with pytest.raises(ValueError):
        numkit.as_row_vector([1, 2, 3], n=2)


def test_symmetrize_is_projection():
    rng = np.random.default_rng(0)
    mat = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    sym = numkit.symmetrize(mat)
    assert_allclose(sym, sym.T)
    assert_allclose(numkit.symmetrize(sym), sym)


def test_solve_matches_numpy_and_flags_singular():
    rng = np.random.default_rng(1)
    mat = rng.normal(size=(3, 3)) + np.eye(3) * 3
    rhs = rng.normal(size=3)
    assert_allclose(numkit.solve(mat, rhs), np.linalg.solve(mat, rhs))
    with pytest.raises(np.linalg.LinAlgError):
        numkit.solve(np.zeros((2, 2)), np.ones(2))


def test_det_power_integer_matches_plain_power():
    rng = np.random.default_rng(2)
    mat = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) + 4 * np.eye(3)
    det = np.linalg.det(mat)
    assert_allclose(numkit.det_power(mat, 3), det ** 3, rtol=1e-10)
    assert_allclose(numkit.det_power(mat, -2), det ** -2.0, rtol=1e-10)


def test_det_power_half_squares_to_det():
    rng = np.random.default_rng(3)
    base = rng.normal(size=(3, 3))
    mat = base @ base.T + np.eye(3)
    half = numkit.det_power(mat, 0.5)
    assert_allclose(half ** 2, np.linalg.det(mat), rtol=1e-10)


def test_posdef_certificate():
    ok, _ = numkit.posdef_certificate(np.eye(2))
    assert ok
    ok, lam = numkit.posdef_certificate(np.diag([1.0, -0.5]))
    assert not ok
    assert lam < 0


def test_multiindex_helpers():
    assert numkit.mi_factorial((3, 2)) == 12
    assert numkit.mi_total((3, 2)) == 5
    idx = list(numkit.enumerate_multiindices(2, 3))
    assert len(idx) == 10
    assert idx[0] == (0, 0)
    assert all(sum(s) <= 3 for s in idx)


def test_symindex_counts_and_weights():
    # upper-triangle exponents of a symmetric 2x2 matrix power
    labels = numkit.enumerate_symindices(2, 2)
    assert all(max(a.weight()) <= 2 for a in labels)
    a = numkit.SymIndex(2, (1, 2, 0))
    assert a.total() == 5  # full-matrix sum counts off-diagonals twice
    assert a.ahat() == 1  # diagonal total
    assert a.weight() == (4, 2)
    full = a.full()
    assert_allclose(full, full.T)
    assert numkit.SymIndex.from_full(full) == a


def test_symindex_factorial_and_zero():
    zero = numkit.SymIndex.zero(3)
    assert zero.factorial() == 1
    assert numkit.SymIndex(1, (4,)).factorial() == 24


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 31 - 1))
def test_solve_roundtrip_property(n, seed):
    rng = np.random.default_rng(seed)
    mat = rng.normal(size=(n, n)) + n * np.eye(n)
    rhs = rng.normal(size=(n, n))
    sol = numkit.solve(mat, rhs)
    assert np.max(np.abs(mat @ sol - rhs)) < 1e-8
