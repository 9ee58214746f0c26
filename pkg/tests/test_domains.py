import numpy as np
import pytest
from numpy.testing import assert_allclose

from sjdomains import domains, groups


def test_disk_point_validation():
    with pytest.raises(ValueError):
        domains.DiskPoint(np.array([[1.2]]))  # outside the unit ball
    pt = domains.SJDiskPoint(np.array([[0.3 + 0.1j]]), np.array([0.5 - 0.2j]))
    assert pt.n == 1


def test_space_point_validation():
    with pytest.raises(ValueError):
        domains.UpperHalfPoint(np.array([[1.0 - 0.5j]]))  # Im not positive
    pt = domains.SJSpacePoint(np.array([[0.4 + 1.1j]]), np.array([0.2 + 0.3j]))
    assert pt.n == 1


def test_points_symmetrized():
    mat = np.array([[0.1, 0.2], [0.0, 0.1]])
    pt = domains.SJDiskPoint(mat, np.zeros(2))
    assert_allclose(pt.w, pt.w.T)


def test_cayley_base_point():
    x = domains.SJDiskPoint(np.zeros((1, 1)), np.zeros(1))
    y = domains.cayley_forward(x)
    assert_allclose(y.omega, 1j * np.eye(1))
    assert_allclose(y.zeta, np.zeros(1))


def test_cayley_roundtrip():
    for n in (1, 2, 3):
        for t in range(80):
            x = domains.sample_sj_disk_point(n, 0.85, 1.5, seed=1000 * n + t)
            back = domains.cayley_inverse(domains.cayley_forward(x))
            assert np.max(np.abs(back.w - x.w)) < 1e-12
            assert np.max(np.abs(back.z - x.z)) < 1e-12


def test_cayley_roundtrip_space_side():
    for n in (1, 2):
        for t in range(40):
            y = domains.cayley_forward(
                domains.sample_sj_disk_point(n, 0.7, 1.0, seed=77 * n + t))
            forth = domains.cayley_forward(domains.cayley_inverse(y))
            assert np.max(np.abs(forth.omega - y.omega)) < 1e-12
            assert np.max(np.abs(forth.zeta - y.zeta)) < 1e-12


def test_imaginary_part_determinant_identity():
    # det Im(Omega) = det(1 - W conj(W)) / |det(1 - W)|^2
    for t in range(30):
        x = domains.sample_sj_disk_point(2, 0.7, 1.0, seed=t)
        y = domains.cayley_forward(x)
        lhs = np.linalg.det(y.omega.imag)
        gram = np.eye(2) - x.w @ x.w.conj()
        rhs = np.linalg.det(gram).real / abs(np.linalg.det(np.eye(2) - x.w)) ** 2
        assert_allclose(lhs, rhs, rtol=1e-11)


def test_cayley_equivariance():
    for n in (1, 2):
        for t in range(25):
            g = groups.random_jacobi(n, scale=0.5, seed=31 * n + t)
            x = domains.sample_sj_disk_point(n, 0.6, 0.8, seed=47 * n + t)
            lhs = domains.cayley_forward(groups.act_sj_disk(groups.theta_iso(g), x))
            rhs = groups.act_sj_space(g, domains.cayley_forward(x))
            assert np.max(np.abs(lhs.omega - rhs.omega)) < 1e-9
            assert np.max(np.abs(lhs.zeta - rhs.zeta)) < 1e-9


def test_json_point_roundtrip():
    x = domains.sample_sj_disk_point(2, 0.6, 0.8, seed=5)
    back = domains.json_to_point(domains.point_to_json(x))
    assert_allclose(back.w, x.w)
    assert_allclose(back.z, x.z)
    y = domains.cayley_forward(x)
    back = domains.json_to_point(domains.point_to_json(y))
    assert_allclose(back.omega, y.omega)
    assert_allclose(back.zeta, y.zeta)


def test_complex_json_encoding():
    assert domains.complex_to_json(1 - 2j) == [1.0, -2.0]
    assert domains.json_to_complex([1.0, -2.0]) == 1 - 2j
