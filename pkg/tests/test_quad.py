import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import beta as beta_fn

from sjdomains import domains, fockpoly, kernels, numkit, quad

M, K = 0.25, 3


def test_identity_form_moments_are_factorials():
    form = quad.GaussianForm.identity(1)
    for s in range(5):
        for r in range(5):
            val = quad.monomial_moment(form, (s,), (r,)) / math.pi
            target = math.factorial(s) if s == r else 0.0
            assert abs(val - target) <= 1e-12


def test_identity_form_moments_n2():
    form = quad.GaussianForm.identity(2)
    idx = list(fockpoly.enumerate_multiindices(2, 3))
    for s in idx:
        for r in idx:
            val = quad.monomial_moment(form, tuple(s), tuple(r)) / math.pi ** 2
            target = float(fockpoly.mi_factorial(tuple(s))) if tuple(s) == tuple(r) else 0.0
            assert abs(val - target) <= 1e-12


def test_from_quadratic_polarization():
    # recover the quadratic form q(u) = 8 pi m A(W, z) from evaluations
    w = np.array([[0.3 - 0.2j]])
    direct = quad.GaussianForm.from_disk_weight(w, M, flip=False)

    def fn(z):
        return 8.0 * math.pi * M * kernels.a_form(w, z).real

    rebuilt = quad.GaussianForm.from_quadratic(fn, 1)
    assert_allclose(rebuilt.q, direct.q, atol=1e-10)


def test_normalization_closed_form():
    # integral of the z-Gaussian: pi^n det(1 - W conj(W))^{1/2} (8 pi m)^{-n}
    for t in range(6):
        x = domains.sample_sj_disk_point(2, 0.7, 0.1, seed=t)
        form = quad.GaussianForm.from_disk_weight(x.w, M, flip=False)
        closed = (math.pi ** 2 * (8 * math.pi * M) ** -2
                  * math.sqrt(np.linalg.det(np.eye(2) - x.w @ x.w.conj()).real))
        assert_allclose(form.normalization(), closed, rtol=1e-12)


def test_flip_matches_reflected_argument():
    w = np.array([[0.4 + 0.1j]])
    flipped = quad.GaussianForm.from_disk_weight(w, M, flip=True)
    reflected = quad.GaussianForm.from_disk_weight(-w, M, flip=False)
    assert_allclose(flipped.q, reflected.q, atol=1e-12)


def test_gauss_hermite_agrees_with_exact_moments():
    w = np.array([[0.35 - 0.15j]])
    form = quad.GaussianForm.from_disk_weight(w, M, flip=False)
    pairs = {((2,), (2,)): 1.0, ((1,), (1,)): 0.5 - 0.25j, ((0,), (0,)): -1.0}
    exact = quad.gaussian_moment(pairs, form)
    gh = quad.gauss_hermite_moment(pairs, form, order=40)
    assert_allclose(gh, exact, rtol=1e-12)


def test_pair_product_rejects_w_terms():
    f = fockpoly.p_s((2,))  # contains a W monomial
    with pytest.raises(ValueError):
        quad.pair_product(f, f)


def test_fock_inner_orthonormal():
    w = np.array([[0.3 + 0.2j]])
    idx = list(fockpoly.enumerate_multiindices(1, 4))
    polys = [fockpoly.basis_phi(w, tuple(s), M) for s in idx]
    for a, pa in enumerate(polys):
        for b, pb in enumerate(polys):
            val = quad.fock_inner(pa, pb, w, M)
            assert abs(val - (1.0 if a == b else 0.0)) < 1e-12


def test_fock_inner_reference_normalization_ratio():
    w = np.zeros((1, 1))
    phi0 = fockpoly.basis_phi(w, (0,), M)
    calibrated = quad.fock_inner(phi0, phi0, w, M)
    reference = quad.fock_inner(phi0, phi0, w, M, normalization="reference")
    assert_allclose(calibrated / reference, 4.0, rtol=1e-12)
    with pytest.raises(ValueError):
        quad.fock_inner(phi0, phi0, w, M, normalization="bogus")


def test_calibrate_norms_values():
    cal = quad.calibrate_norms(1, M)
    assert_allclose(cal["constant"], 8 * math.pi * M, rtol=1e-12)
    assert_allclose(cal["reference_constant"], 2 * math.pi * M, rtol=1e-12)
    assert_allclose(cal["ratio"], 4.0, rtol=1e-12)


def test_generating_series_pairing():
    x = domains.sample_sj_disk_point(1, 0.25, 0.3, seed=3)
    xp = domains.sample_sj_disk_point(1, 0.25, 0.3, seed=4)
    res = quad.verify_gaussian_pairing(xp.w, x.w, xp.z, x.z, trunc=14)
    assert res["residual"] < 1e-8


def test_mc_disk_inner_against_beta_moments():
    # |w|^{2a} against the bounded-domain weight: pi B(a + 1, k - 3/2)
    cfg = quad.MCConfig(samples=200000, seed=11)
    one = fockpoly.PolyFunction.constant(1, 1.0)
    est = quad.mc_disk_inner(one, one, 1, K, cfg)
    target = math.pi * beta_fn(1, K - 1.5)
    assert abs(est.estimate - target) <= 3 * est.sigma
    wmono = fockpoly.PolyFunction.monomial(1, a=numkit.SymIndex(1, (1,)))
    est = quad.mc_disk_inner(wmono, wmono, 1, K, cfg)
    target = math.pi * beta_fn(2, K - 1.5)
    assert abs(est.estimate - target) <= 3 * est.sigma


def test_mc_determinism():
    cfg = quad.MCConfig(samples=20000, seed=5)
    one = fockpoly.PolyFunction.constant(1, 1.0)
    est1 = quad.mc_disk_inner(one, one, 1, K, cfg)
    est2 = quad.mc_disk_inner(one, one, 1, K, cfg)
    assert est1.estimate == est2.estimate
    assert est1.sigma == est2.sigma


def test_mc_sigma_scaling():
    one = fockpoly.PolyFunction.constant(1, 1.0)
    small = quad.mc_disk_inner(one, one, 1, K, quad.MCConfig(samples=20000, seed=6))
    big = quad.mc_disk_inner(one, one, 1, K, quad.MCConfig(samples=80000, seed=6))
    assert 1.6 < small.sigma / big.sigma < 2.4


def test_mc_dj_gram_identity_small():
    labeled = fockpoly.series_basis(1, M, K, s_max=1, a_max=1)
    funcs = [f for _, f in labeled]
    cfg = quad.MCConfig(samples=100000, seed=7)
    gram, sigma = quad.mc_dj_gram(funcs, 1, M, K, cfg)
    err = np.abs(gram - np.eye(len(funcs)))
    assert np.all(err <= 3 * sigma + 1e-9)


def test_mc_dj_gram_exact_z_matches_sampled():
    labeled = fockpoly.series_basis(1, M, K, s_max=1, a_max=0)
    funcs = [f for _, f in labeled]
    cfg = quad.MCConfig(samples=60000, seed=8)
    g_rb, s_rb = quad.mc_dj_gram(funcs, 1, M, K, cfg, exact_z=True)
    g_mc, s_mc = quad.mc_dj_gram(funcs, 1, M, K, cfg, exact_z=False)
    comb = np.sqrt(s_rb ** 2 + s_mc ** 2)
    assert np.all(np.abs(g_rb - g_mc) <= 4 * comb + 1e-9)
    # the exact-z path cancels odd-parity entries identically
    assert abs(g_rb[0, 1]) < 1e-14


def test_mc_dj_exact_z_rejects_unsupported():
    one = fockpoly.PolyFunction.constant(2, 1.0)
    with pytest.raises(ValueError):
        quad.mc_dj_gram([one], 2, M, 4, quad.MCConfig(samples=1000, seed=0),
                        exact_z=True)


def test_mc_hj_matches_disk_norm():
    from sjdomains import discrete_series as ds
    params = ds.ReprParams(1, M, K)
    labeled = fockpoly.series_basis(1, M, K, s_max=1, a_max=0)
    psi = labeled[0][1]
    cfg = quad.MCConfig(samples=120000, seed=9)
    disk = quad.mc_dj_inner(psi, psi, 1, M, K, cfg)
    phi = ds.t_star(psi, params)
    space = quad.mc_hj_inner(phi, phi, 1, M, K, cfg)
    tol = 3 * math.hypot(disk.sigma, space.sigma)
    assert abs(disk.estimate - space.estimate) <= tol
    assert abs(disk.estimate - 1.0) <= 3 * disk.sigma


def test_pack_unpack_roundtrip():
    x = domains.sample_sj_disk_point(2, 0.6, 0.8, seed=12)
    back = quad.unpack_disk_point(quad.pack_disk_point(x), 2)
    assert_allclose(back.w, x.w)
    assert_allclose(back.z, x.z)
    y = domains.cayley_forward(x)
    vec = quad.pack_space_point(y)
    assert vec.shape == (2 * (2 * 3 // 2) + 2 * 2,)


def test_numeric_jacobian_linear_map():
    mat = np.array([[2.0, 1.0], [0.5, -1.0]])
    jac = quad.numeric_jacobian(lambda v: mat @ v, np.zeros(2))
    assert_allclose(jac, mat, atol=1e-9)
