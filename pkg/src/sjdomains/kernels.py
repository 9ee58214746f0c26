"""Automorphy factors and kernel functions for both symplectic models and
both Jacobi groups, plus the weight functions consumed by the inner products.

Scalar conventions that are easy to get wrong, all pinned by the test suite:
  - theta_star is i-valued on the center, so the scalar automorphy factor on
    the bounded model carries exp(-4 pi m theta_star): on a central element
    (alpha = 0, varkappa = -i kappa / 2) this is exp(2 pi i m kappa), the
    same central character the unbounded factor produces.
  - the invariant weight on the bounded Jacobi domain carries A(-W, z), not
    A(W, z); the two versions differ by the substitution W -> -W and only
    the flipped one transforms by |factor|^2 under the action.  Both are
    exposed; kmk_star_weight keeps the plain sign.
"""

from __future__ import annotations

import numpy as np

from . import numkit
from .domains import DiskPoint, SJDiskPoint, SJSpacePoint, UpperHalfPoint
from .groups import (JacobiElement, JacobiStarElement, SpElement,
                     SpStarElement, right_divide)


def _wz(x):
    if isinstance(x, SJDiskPoint):
        return x.w, x.z
    if isinstance(x, DiskPoint):
        return x.w, np.zeros(x.n, dtype=complex)
    w, z = x
    return numkit.symmetrize(w), numkit.as_row_vector(z)


def _oz(y):
    if isinstance(y, SJSpacePoint):
        return y.omega, y.zeta
    if isinstance(y, UpperHalfPoint):
        return y.omega, np.zeros(y.n, dtype=complex)
    om, zeta = y
    return numkit.symmetrize(om), numkit.as_row_vector(zeta)


def _block_diag(top, bottom):
    n = top.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = top
    out[n:, n:] = bottom
    return out


# --- factors and kernels for the two symplectic models ---

def j1(sigma: SpElement, y) -> np.ndarray:
    """block-diag(t(c Omega + d)^{-1}, c Omega + d)."""
    omega, _ = _oz(y)
    den = sigma.c @ omega + sigma.d
    return _block_diag(numkit.solve(den.T, np.eye(den.shape[0])), den)


def k1(yp, y) -> np.ndarray:
    """Anti-diagonal blocks conj(Omega) - Omega' and (Omega' - conj(Omega))^{-1}."""
    omp, _ = _oz(yp)
    om, _ = _oz(y)
    n = om.shape[0]
    diff = om.conj() - omp
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, n:] = diff
    out[n:, :n] = numkit.solve(-diff, np.eye(n))
    return out


def j1_star(omega: SpStarElement, x) -> np.ndarray:
    w, _ = _wz(x)
    den = omega.q.conj() @ w + omega.p.conj()
    return _block_diag(numkit.solve(den.T, np.eye(den.shape[0])), den)


def k1_star(xp, x) -> np.ndarray:
    wp, _ = _wz(xp)
    w, _ = _wz(x)
    n = w.shape[0]
    gram = np.eye(n) - wp @ w.conj()
    return _block_diag(gram, numkit.solve(gram, np.eye(n)).T)


# --- scalar factors for the two Jacobi groups ---

def theta_factor(g: JacobiElement, y) -> complex:
    """kappa + lam t(zeta) + nu t(lam) - nu (c Omega + d)^{-1} c t(nu),
    nu = zeta + lam Omega + mu."""
    omega, zeta = _oz(y)
    lam, mu = g.h.lam, g.h.mu
    nu = zeta + lam @ omega + mu
    den = g.sigma.c @ omega + g.sigma.d
    quad = right_divide(nu, den) @ g.sigma.c @ nu
    return complex(g.h.kappa + lam @ zeta + nu @ lam - quad)


def theta_star(gs: JacobiStarElement, x) -> complex:
    """varkappa + z t(alpha) + nu t(alpha) - nu (conj(q) W + conj(p))^{-1}
    conj(q) t(nu), nu = z + alpha W + conj(alpha)."""
    w, z = _wz(x)
    alpha = gs.alpha
    nu = z + alpha @ w + alpha.conj()
    den = gs.omega.q.conj() @ w + gs.omega.p.conj()
    quad = right_divide(nu, den) @ gs.omega.q.conj() @ nu
    return complex(gs.varkappa + z @ alpha + nu @ alpha - quad)


def k2_space(yp, y) -> complex:
    """-(1/2)(zeta' - conj(zeta))(Omega' - conj(Omega'))^{-1} t(zeta' - conj(zeta))."""
    omp, zp = _oz(yp)
    _, z = _oz(y)
    diff = zp - z.conj()
    return complex(-0.5 * (right_divide(diff, omp - omp.conj()) @ diff))


def a_form(w, z) -> complex:
    """(conj(z) + z conj(W)/2)(I - W conj(W))^{-1} t(z)
    + conj(z)(I - W conj(W))^{-1} W t(conj(z))/2; real and >= 0."""
    return a_polar((w, z), (w, z))


def a_polar(xp, x) -> complex:
    wp, zp = _wz(xp)
    w, z = _wz(x)
    n = w.shape[0]
    gram = np.eye(n) - wp @ w.conj()
    first = (z.conj() + 0.5 * zp @ w.conj()) @ numkit.solve(gram, zp)
    second = 0.5 * z.conj() @ numkit.solve(gram, wp @ z.conj())
    return complex(first + second)


# --- representation-level factors and kernels ---

def jmk(g: JacobiElement, y, m, k) -> complex:
    """det(c Omega + d)^{-k} exp(2 pi i m theta)."""
    omega, _ = _oz(y)
    den = g.sigma.c @ omega + g.sigma.d
    return complex(numkit.det_power(den, -k) * np.exp(2j * np.pi * m * theta_factor(g, y)))


def jmk_star(gs: JacobiStarElement, x, m, k) -> complex:
    """det(conj(q) W + conj(p))^{-k} exp(-4 pi m theta_star).

    theta_star takes values in i R on the center, so the -4 pi m exponent is
    what reproduces the central character exp(2 pi i m kappa) and makes the
    factor a multiplicative cocycle of modulus compatible with the invariant
    weight; see the cocycle and weight-invariance suites.
    """
    w, _ = _wz(x)
    den = gs.omega.q.conj() @ w + gs.omega.p.conj()
    return complex(numkit.det_power(den, -k) * np.exp(-4.0 * np.pi * m * theta_star(gs, x)))


def kmk_weight(y, m, k) -> float:
    """exp(4 pi m eta Y^{-1} t(eta)) (det Y)^k with Y = Im Omega, eta = Im zeta."""
    omega, zeta = _oz(y)
    yim, eta = omega.imag, zeta.imag
    quad = float((numkit.solve(yim, eta) @ eta).real)
    return float(np.exp(4.0 * np.pi * m * quad) * numkit.det_power(yim, k).real)


def hj_inner_weight(y, m, k) -> float:
    """(det Y)^k exp(-4 pi m eta Y^{-1} t(eta)): the weight the unbounded-model
    inner product integrates against (it decays in eta and carries the +k
    determinant power that matches the bounded side through the transform)."""
    omega, zeta = _oz(y)
    yim, eta = omega.imag, zeta.imag
    quad = float((numkit.solve(yim, eta) @ eta).real)
    return float(np.exp(-4.0 * np.pi * m * quad) * numkit.det_power(yim, k).real)


def kmk_kernel(yp, y, m, k) -> complex:
    """det((i/2) conj(Omega) - (i/2) Omega')^{-k} exp(2 pi i m K2)."""
    omp, _ = _oz(yp)
    om, _ = _oz(y)
    det_part = numkit.det_power(0.5j * om.conj() - 0.5j * omp, -k)
    return complex(det_part * np.exp(2j * np.pi * m * k2_space(yp, y)))


def kmk_star_weight(x, m, k) -> float:
    """det(I - W conj(W))^{-k} exp(8 pi m A(W, z))."""
    w, z = _wz(x)
    gram = np.eye(w.shape[0]) - w @ w.conj()
    return float(numkit.det_power(gram, -k).real * np.exp(8.0 * np.pi * m * a_form(w, z).real))


def kmk_star_weight_flipped(x, m, k) -> float:
    """det(I - W conj(W))^{-k} exp(8 pi m A(-W, z)): the action-invariant
    variant (the plain one transforms with an extra z-independent factor)."""
    w, z = _wz(x)
    gram = np.eye(w.shape[0]) - w @ w.conj()
    return float(numkit.det_power(gram, -k).real * np.exp(8.0 * np.pi * m * a_form(-w, z).real))


def kmk_star_kernel(xp, x, m, k) -> complex:
    """det(I - W' conj(W))^{-k} exp(8 pi m A(W', z'; W, z))."""
    wp, _ = _wz(xp)
    w, _ = _wz(x)
    gram = np.eye(w.shape[0]) - wp @ w.conj()
    return complex(numkit.det_power(gram, -k) * np.exp(8.0 * np.pi * m * a_polar(xp, x)))


def weight_diagnostics(y, m, k) -> dict:
    """Compare the printed weight, the kernel diagonal, and the weight the
    inner product actually uses; they disagree by det-power sign and a
    factor 2 in the exponent, so all three are reported side by side."""
    diag = kmk_kernel(y, y, m, k)
    lit = kmk_weight(y, m, k)
    used = hj_inner_weight(y, m, k)
    return {
        "kernel_diagonal": complex(diag),
        "weight_printed": lit,
        "weight_used": used,
        "diagonal_over_printed": complex(diag) / lit,
    }
