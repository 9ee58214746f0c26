import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sjdomains import domains, fockpoly, numkit
from sjdomains.fockpoly import PolyFunction

M, K = 0.25, 3


def test_p_s_hand_values():
    # P_(1) = Z, P_(2) = Z^2 + W, P_(3) = Z^3 + 3 Z W
    z = np.array([0.7 - 0.2j])
    w = np.array([[0.3 + 0.1j]])
    assert_allclose(fockpoly.p_s((1,)).evaluate(z, w), z[0])
    assert_allclose(fockpoly.p_s((2,)).evaluate(z, w), z[0] ** 2 + w[0, 0])
    assert_allclose(fockpoly.p_s((3,)).evaluate(z, w), z[0] ** 3 + 3 * z[0] * w[0, 0])
    assert_allclose(fockpoly.p_s((2,)).evaluate(np.array([1.0]),
                                                np.array([[0.5]])), 1.5)


def test_p_s_exact_coefficients():
    assert fockpoly.p_s((6,)).has_exact_coeffs()
    assert fockpoly.p_s((2, 1)).has_exact_coeffs()


def test_generating_function_matches_recursion():
    for s in fockpoly.enumerate_multiindices(1, 8):
        assert (fockpoly.p_s(tuple(s)) - fockpoly.p_s_from_generating(tuple(s))).is_zero()
    for s in fockpoly.enumerate_multiindices(2, 4):
        assert (fockpoly.p_s(tuple(s)) - fockpoly.p_s_from_generating(tuple(s))).is_zero()


def test_poly_algebra_is_pointwise():
    rng = np.random.default_rng(3)
    f = fockpoly.p_s((2, 1))
    g = fockpoly.p_s((1, 1))
    for _ in range(10):
        x = domains.sample_sj_disk_point(2, 0.6, 0.9, seed=int(rng.integers(2 ** 31)))
        fv, gv = f.evaluate(x.z, x.w), g.evaluate(x.z, x.w)
        assert_allclose((f + g).evaluate(x.z, x.w), fv + gv, rtol=1e-12)
        assert_allclose((f * g).evaluate(x.z, x.w), fv * gv, rtol=1e-12)
        assert_allclose((f * (0.5 - 2j)).evaluate(x.z, x.w), fv * (0.5 - 2j), rtol=1e-12)


def test_poly_derivatives():
    # d/dz of Z^2 + W is 2 Z; d/dW of Z^2 + W is 1
    p = fockpoly.p_s((2,))
    z = np.array([0.4 + 0.3j])
    assert_allclose(p.dz(0).evaluate(z, np.zeros((1, 1))), 2 * z[0])
    assert_allclose(p.dw(0, 0).evaluate(z, np.zeros((1, 1))), 1.0)


def test_poly_batch_evaluation_matches_scalar():
    f = fockpoly.basis_f((2, 1), M)
    zs = np.array([[0.1 + 0.2j, -0.3j], [0.5, 0.2 - 0.1j]])
    ws = np.stack([0.1 * np.eye(2), np.array([[0.2, 0.1j], [0.1j, -0.3]])])
    vals = f.evaluate_batch(zs, ws)
    for i in range(2):
        assert_allclose(vals[i], f.evaluate(zs[i], ws[i]), rtol=1e-12)


def test_poly_json_roundtrip():
    f = fockpoly.basis_f((2, 0), M) + fockpoly.basis_f((0, 1), M) * (1 - 1j)
    back = PolyFunction.from_json(f.to_json(), 2)
    assert (f - back).is_zero()


def test_flip_w_involution():
    f = fockpoly.p_s((3,))
    assert (f.flip_w().flip_w() - f).is_zero()
    w = np.array([[0.4]])
    z = np.array([0.5 - 0.1j])
    assert_allclose(f.flip_w().evaluate(z, w), f.evaluate(z, -w), rtol=1e-12)


def test_heat_system_exact_on_scaled_basis():
    for s in fockpoly.enumerate_multiindices(1, 8):
        assert fockpoly.pde_check(fockpoly.basis_f_scaled(tuple(s), M), M) == 0.0
    for s in fockpoly.enumerate_multiindices(2, 4):
        assert fockpoly.pde_check(fockpoly.basis_f_scaled(tuple(s), M), M) == 0.0


def test_heat_system_float_basis_small():
    worst = max(fockpoly.pde_check(fockpoly.basis_f(tuple(s), M), M)
                for s in fockpoly.enumerate_multiindices(1, 8))
    assert worst < 1e-10


def test_express_in_matching_basis_roundtrip():
    f = (fockpoly.basis_f_scaled((3,), M) * (2.0 + 1j)
         + fockpoly.basis_f_scaled((1,), M) * (-0.5))
    coeffs = fockpoly.express_in_matching_basis(f, M)
    rebuilt = PolyFunction.zero(1)
    for s, c in coeffs.items():
        rebuilt = rebuilt + fockpoly.basis_f_scaled(s, M) * c
    assert (rebuilt - f).is_zero()


def test_matching_expansion_fixed_point():
    # both sides equal (1 - 0.3^2)^(-1/2) at the coincident real point
    res = fockpoly.expansion_matching(np.zeros(1), 0.3 * np.eye(1),
                                      np.zeros(1), 0.3 * np.eye(1),
                                      fockpoly.TruncationSpec(max_degree=20))
    assert abs(res.value - 0.91 ** -0.5) < 1e-8
    closed = fockpoly.matching_kernel_closed(np.zeros(1), 0.3 * np.eye(1),
                                             np.zeros(1), 0.3 * np.eye(1))
    assert_allclose(closed, 0.91 ** -0.5, rtol=1e-14)


@pytest.mark.parametrize("n", [1, 2])
def test_expansions_converge_on_safe_pairs(n):
    rng = np.random.default_rng(10 + n)
    spec = fockpoly.TruncationSpec(max_degree=12)
    for _ in range(5):
        xp = domains.sample_sj_disk_point(n, 0.25, 0.3, seed=int(rng.integers(2 ** 31)))
        x = domains.sample_sj_disk_point(n, 0.25, 0.3, seed=int(rng.integers(2 ** 31)))
        res = fockpoly.expansion_matching(xp.z, xp.w, x.z, x.w, spec)
        closed = fockpoly.matching_kernel_closed(xp.z, xp.w, x.z, x.w)
        assert abs(res.value - closed) < 1e-5
        res = fockpoly.expansion_fock_at_w(x.w, xp.z, x.z, M, spec)
        closed = fockpoly.fock_at_w_closed(x.w, xp.z, x.z, M)
        assert abs(res.value - closed) < 1e-5
        res = fockpoly.expansion_fock_full(xp, x, M, spec)
        closed = fockpoly.fock_full_closed(xp, x, M)
        assert abs(res.value - closed) < 1e-5


def test_discrete_kernel_constant_value():
    # n = 1: 8 m (k - 3/2)
    assert_allclose(fockpoly.discrete_kernel_constant(M, K, 1), 3.0)


def test_discrete_kernel_expansion():
    rng = np.random.default_rng(30)
    spec = fockpoly.TruncationSpec(max_degree=12)
    for _ in range(5):
        xp = domains.sample_sj_disk_point(1, 0.25, 0.3, seed=int(rng.integers(2 ** 31)))
        x = domains.sample_sj_disk_point(1, 0.25, 0.3, seed=int(rng.integers(2 ** 31)))
        res = fockpoly.expansion_discrete_kernel(xp, x, M, K, spec, a_max=12)
        closed = fockpoly.discrete_kernel_closed(xp, x, M, K)
        assert abs(res.value - closed) / abs(closed) < 1e-5


def test_q_basis_closed_form_n1():
    from scipy.special import beta as beta_fn
    qs = fockpoly.q_basis(1, K, 3)
    w = np.array([[0.4 - 0.2j]])
    for a, q in enumerate(qs):
        expect = w[0, 0] ** a / math.sqrt(math.pi * beta_fn(a + 1, K - 1.5))
        assert_allclose(q.evaluate(None, w), expect, rtol=1e-12)


def test_q_basis_requires_integrable_weight():
    with pytest.raises(ValueError):
        fockpoly.q_basis(1, 1, 2)


def test_series_basis_labels():
    labeled = fockpoly.series_basis(1, M, K, s_max=2, a_max=1)
    labels = [lbl for lbl, _ in labeled]
    assert len(labels) == 3 * 2
    assert labels[0] == ((0,), numkit.SymIndex(1, (0,)))


def test_truncation_result_tail_decreases():
    res = fockpoly.expansion_matching(np.zeros(1), 0.3 * np.eye(1),
                                      np.zeros(1), 0.3 * np.eye(1),
                                      fockpoly.TruncationSpec(max_degree=14))
    resid = [abs(p - 0.91 ** -0.5) for p in res.partials]
    assert resid[-1] < resid[0]
    assert resid[-1] < 1e-6
