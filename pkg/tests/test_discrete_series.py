import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sjdomains import discrete_series as ds
from sjdomains import domains, fockpoly, groups, quad

PARAMS = ds.ReprParams(1, 0.25, 3)


def test_repr_params_validation():
    with pytest.raises(ValueError):
        ds.ReprParams(1, -0.25, 3)
    with pytest.raises(ValueError):
        ds.ReprParams(1, 0.25, 1)  # needs k > n + 1/2
    with pytest.raises(ValueError):
        ds.ReprParams(1, 0.25, 2.5)
    assert ds.ReprParams(2, 0.25, 4).to_dict() == {"n": 2, "m": 0.25, "k": 4}


def _test_poly(params):
    qb = fockpoly.q_basis(params.n, params.k, 1)
    n = params.n
    return (fockpoly.basis_big_f((0,) * n, qb[0], params.m)
            + fockpoly.basis_big_f((1,) + (0,) * (n - 1), qb[1], params.m) * (0.4 - 0.3j))


def test_transfer_roundtrip_disk():
    psi = _test_poly(PARAMS)
    back = ds.t_inv(ds.t_star(psi, PARAMS), PARAMS)
    for t in range(30):
        x = domains.sample_sj_disk_point(1, 0.6, 0.8, seed=t)
        assert abs(back((x.w, x.z)) - psi.evaluate(x.z, x.w)) < 1e-12


def test_transfer_roundtrip_space():
    def phi(pair):
        om, zeta = pair
        return np.exp(1j * np.trace(om)) * (1.0 + complex(zeta @ zeta))

    carrier = ds.SampledFunction(phi, side="space")
    forth = ds.t_star(ds.t_inv(carrier, PARAMS), PARAMS)
    for t in range(30):
        y = domains.cayley_forward(domains.sample_sj_disk_point(1, 0.6, 0.8, seed=t))
        assert abs(forth((y.omega, y.zeta)) - phi((y.omega, y.zeta))) < 1e-12


def test_transfer_roundtrip_n2():
    params = ds.ReprParams(2, 0.25, 4)
    psi = _test_poly(params)
    back = ds.t_inv(ds.t_star(psi, params), params)
    for t in range(10):
        x = domains.sample_sj_disk_point(2, 0.5, 0.6, seed=t)
        assert abs(back((x.w, x.z)) - psi.evaluate(x.z, x.w)) < 1e-12


def test_batch_evaluation_matches_scalar():
    psi = _test_poly(PARAMS)
    phi = ds.t_star(psi, PARAMS)
    oms, zetas = [], []
    for t in range(6):
        y = domains.cayley_forward(domains.sample_sj_disk_point(1, 0.5, 0.6, seed=t))
        oms.append(y.omega)
        zetas.append(y.zeta)
    oms, zetas = np.stack(oms), np.stack(zetas)
    vals = phi.evaluate_space_batch(oms, zetas)
    for i in range(6):
        assert_allclose(vals[i], phi((oms[i], zetas[i])), rtol=1e-12)


def test_sampled_function_side_guard():
    phi = ds.t_star(_test_poly(PARAMS), PARAMS)
    with pytest.raises(ValueError):
        phi.evaluate_batch(np.zeros((1, 1), complex), np.zeros((1, 1, 1), complex))


def test_operator_composition_is_antihomomorphism():
    # T_g psi = jmk_star(g, .) psi(g . .): T_{g1} T_{g2} = T_{g2 g1}
    psi = _test_poly(PARAMS)
    g1 = groups.random_jacobi_star(1, scale=0.4, seed=21)
    g2 = groups.random_jacobi_star(1, scale=0.4, seed=22)
    lhs = ds.pi_star_apply(g1, ds.pi_star_apply(g2, psi, PARAMS), PARAMS)
    rhs = ds.pi_star_apply(groups.jacobi_star_mul(g2, g1), psi, PARAMS)
    for t in range(10):
        x = domains.sample_sj_disk_point(1, 0.5, 0.7, seed=50 + t)
        assert abs(lhs((x.w, x.z)) - rhs((x.w, x.z))) < 1e-10


def test_intertwining_pointwise():
    psi = _test_poly(PARAMS)
    phi = ds.t_star(psi, PARAMS)
    for t in range(10):
        gs = groups.random_jacobi_star(1, scale=0.4, seed=31 + t)
        y = domains.cayley_forward(domains.sample_sj_disk_point(1, 0.5, 0.6, seed=41 + t))
        lhs = ds.t_star(ds.pi_star_apply(gs, psi, PARAMS), PARAMS)((y.omega, y.zeta))
        rhs = ds.pi_apply(groups.theta_inv(gs), phi, PARAMS)((y.omega, y.zeta))
        assert abs(lhs - rhs) < 1e-10


def test_chart_identities_hold_and_sign_variant_fails():
    rep = ds.verify_identities(PARAMS, count=50, seed=2)
    assert rep.passed
    transfer = {c.name: c for c in rep.checks}["exponent-transfer"]
    assert transfer.residual < 1e-12
    assert transfer.detail["printed_sign_variant_residual"] > 1e-2


def test_jacobian_constant_both_sizes():
    rep = ds.verify_jacobian_constant(PARAMS, count=10, seed=3)
    assert rep.passed
    assert rep.checks[0].detail["target"] == 16.0
    rep = ds.verify_jacobian_constant(ds.ReprParams(2, 0.25, 4), count=5, seed=3)
    assert rep.passed
    assert rep.checks[0].detail["target"] == 1024.0


def test_gram_matrix_labels():
    labels, gram, sigma = ds.gram_matrix(PARAMS, quad.MCConfig(samples=20000, seed=4),
                                         s_max=2, a_max=1)
    assert len(labels) == 3 * 2
    assert gram.shape == (6, 6)
    assert sigma.shape == (6, 6)


def test_verify_gram_small_run():
    rep = ds.verify_gram(PARAMS, quad.MCConfig(samples=120000, seed=5))
    assert rep.passed
    names = {c.name for c in rep.checks}
    assert names == {"gram-identity", "sigma-budget", "parity-zeros"}


def test_isometry_small_run():
    rep = ds.verify_isometry(PARAMS, quad.MCConfig(samples=60000, seed=6))
    assert rep.passed
    assert len(rep.checks) == 4


def test_reproducing_small_run():
    rep = ds.reproducing_check(PARAMS, quad.MCConfig(samples=60000, seed=7),
                               trunc_s=8, trunc_a=5, points=3, seed=7)
    assert rep.passed
    with pytest.raises(ValueError):
        ds.reproducing_check(ds.ReprParams(2, 0.25, 4),
                             quad.MCConfig(samples=1000, seed=0))


def test_transported_function_provenance():
    phi = ds.t_star(_test_poly(PARAMS), PARAMS)
    assert phi.provenance == "transported"
    assert phi.side == "space"
    op = ds.pi_apply(groups.random_jacobi(1, seed=1), phi, PARAMS)
    assert op.provenance == "composite"
