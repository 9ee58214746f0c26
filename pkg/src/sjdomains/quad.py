"""Quadrature layer: exact moments of complex Gaussian weights, a tensor
Gauss-Hermite cross-check, seeded Monte Carlo engines for the weighted inner
products on the bounded domains, and finite-difference Jacobian helpers.

Real coordinates are always ordered (Re z_1..Re z_n, Im z_1..Im z_n); for
matrix charts, (Re W_ij upper row-major, Im W_ij, Re z, Im z).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import kernels, numkit
from .domains import SJDiskPoint, SJSpacePoint
from .fockpoly import PolyFunction


# --- Gaussian forms and exact moments ---

@dataclass(frozen=True)
class GaussianForm:
    """Weight exp(-x^T Q x) on R^{2n} in the coordinates (Re z, Im z)."""

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] % 2:
            raise ValueError("q must be 2n x 2n")
        if np.max(np.abs(q - q.T)) > 1e-10 * max(1.0, np.max(np.abs(q))):
            raise ValueError("q must be symmetric")
        ok, lam = numkit.posdef_certificate(q)
        if not ok:
            raise ValueError(f"q must be positive definite (min eigenvalue {lam:.3e})")
        object.__setattr__(self, "q", 0.5 * (q + q.T))

    @property
    def n(self):
        return self.q.shape[0] // 2

    @classmethod
    def identity(cls, n):
        return cls(np.eye(2 * n))

    @classmethod
    def from_quadratic(cls, fn, n):
        """Polarize a real-valued quadratic form fn(z), z a length-n complex
        row vector; exact for quadratic fn."""
        dim = 2 * n

        def at(x):
            return float(np.real(fn(x[:n] + 1j * x[n:])))

        q = np.zeros((dim, dim))
        base = [at(e) for e in np.eye(dim)]
        for i in range(dim):
            q[i, i] = base[i]
        for i in range(dim):
            for j in range(i + 1, dim):
                e = np.zeros(dim)
                e[i] = e[j] = 1.0
                q[i, j] = q[j, i] = 0.5 * (at(e) - base[i] - base[j])
        return cls(q)

    @classmethod
    def from_disk_weight(cls, w, m, flip=True):
        """The form 8 pi m A(-W, z) (flip=True, the invariant-weight Gaussian)
        or 8 pi m A(W, z) (flip=False, the fixed-W Fock weight)."""
        w = numkit.symmetrize(w)
        sign = -1.0 if flip else 1.0
        n = w.shape[0]
        return cls.from_quadratic(
            lambda z: 8.0 * math.pi * m * kernels.a_form(sign * w, z).real, n)

    def normalization(self):
        """integral of exp(-x^T Q x) over R^{2n} = pi^n det(Q)^{-1/2}."""
        return math.pi ** self.n / math.sqrt(float(np.linalg.det(self.q)))

    def covariance(self):
        return numkit.solve(self.q, np.eye(2 * self.n)).real / 2.0


def _isserlis(cov, alpha, memo):
    """E[x^alpha] for x ~ N(0, cov), by the Stein recursion."""
    alpha = tuple(alpha)
    if sum(alpha) == 0:
        return 1.0
    if sum(alpha) % 2:
        return 0.0
    if alpha in memo:
        return memo[alpha]
    i0 = next(i for i, a in enumerate(alpha) if a > 0)
    total = 0.0
    lower = list(alpha)
    lower[i0] -= 1
    for j, aj in enumerate(lower):
        if aj == 0:
            continue
        sub = list(lower)
        sub[j] -= 1
        total += cov[i0, j] * aj * _isserlis(cov, tuple(sub), memo)
    memo[alpha] = total
    return total


def _pair_to_real(s, r, n):
    """Expand z^s conj(z)^r into real monomials {alpha: complex coeff}."""
    poly = {(0,) * (2 * n): 1.0 + 0j}
    for j in range(n):
        for sign, count in ((1j, s[j]), (-1j, r[j])):
            for _ in range(count):
                out = {}
                for alpha, c in poly.items():
                    a1 = list(alpha)
                    a1[j] += 1
                    out[tuple(a1)] = out.get(tuple(a1), 0j) + c
                    a2 = list(alpha)
                    a2[n + j] += 1
                    out[tuple(a2)] = out.get(tuple(a2), 0j) + c * sign
                poly = out
    return poly


def monomial_moment(form: GaussianForm, s, r) -> complex:
    """integral of z^s conj(z)^r exp(-x^T Q x) over C^n, plain Lebesgue."""
    n = form.n
    cov = form.covariance()
    znorm = form.normalization()
    memo = {}
    total = 0j
    for alpha, c in _pair_to_real(tuple(s), tuple(r), n).items():
        total += c * _isserlis(cov, alpha, memo)
    return complex(total * znorm)


def gaussian_moment(pairs: dict, form: GaussianForm) -> complex:
    """integral of sum_{(s,r)} pairs[s,r] z^s conj(z)^r exp(-x^T Q x), exact.

    pairs maps (s, r) exponent-tuple pairs to coefficients: a polynomial in z
    and conj(z) with the holomorphic/antiholomorphic exponents kept paired.
    """
    n = form.n
    cov = form.covariance()
    znorm = form.normalization()
    memo = {}
    total = 0j
    for (s, r), coeff in pairs.items():
        if coeff == 0:
            continue
        acc = 0j
        for alpha, c in _pair_to_real(tuple(s), tuple(r), n).items():
            acc += c * _isserlis(cov, alpha, memo)
        total += complex(coeff) * acc
    return complex(total * znorm)


def pair_product(f: PolyFunction, g: PolyFunction) -> dict:
    """Pairs dict of f(z) conj(g(z)) for polynomials in z alone."""
    for poly in (f, g):
        if any(any(a.upper) for (_, a) in poly.terms):
            raise ValueError("pair_product needs z-only polynomials")
    out = {}
    for (s, _), cf in f.terms.items():
        for (r, _), cg in g.terms.items():
            key = (s, r)
            out[key] = out.get(key, 0j) + complex(cf) * np.conj(complex(cg))
    return out


_GH_CACHE = {}


def gauss_hermite_moment(pairs: dict, form: GaussianForm, order: int = 40) -> complex:
    """Tensor Gauss-Hermite evaluation of gaussian_moment, for cross-checks."""
    dim = 2 * form.n
    if (order,) not in _GH_CACHE:
        _GH_CACHE[(order,)] = np.polynomial.hermite.hermgauss(order)
    nodes, weights = _GH_CACHE[(order,)]
    evals, vecs = np.linalg.eigh(form.q)
    # x = root @ y whitens the form: x^T Q x = |y|^2
    root = vecs @ np.diag(evals ** -0.5)
    grids = np.meshgrid(*([nodes] * dim), indexing="ij")
    ys = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*([weights] * dim), indexing="ij")
    wgrid = np.ones(len(ys))
    for g in wgrids:
        wgrid = wgrid * g.ravel()
    xs = ys @ root.T
    zs = xs[:, :form.n] + 1j * xs[:, form.n:]
    total = np.zeros(len(ys), dtype=complex)
    for (s, r), coeff in pairs.items():
        val = np.full(len(ys), complex(coeff))
        for j, e in enumerate(s):
            if e:
                val = val * zs[:, j] ** e
        for j, e in enumerate(r):
            if e:
                val = val * np.conj(zs[:, j]) ** e
        total += val
    jac = abs(float(np.linalg.det(root)))
    return complex(np.sum(total * wgrid) * jac)


# --- Fock inner products and the calibration constant ---

def fock_inner(f: PolyFunction, g: PolyFunction, w, m,
               normalization: str = "calibrated") -> complex:
    """Inner product of z-polynomials in the fixed-W Fock space:
    prefactor det(I - W conj(W))^{-1/2} pi^{-n} integral of
    f conj(g) exp(-8 pi m A(W, z)) dLeb(z), evaluated exactly.

    normalization: 'calibrated' uses the constant that makes the basis
    orthonormal ((8 pi m)^n); 'reference' uses (2 pi m)^n and is off by the
    reported ratio."""
    if hasattr(w, "w"):
        w = w.w
    w = numkit.symmetrize(w)
    n = w.shape[0]
    if normalization == "calibrated":
        pref = (8.0 * math.pi * m) ** n
    elif normalization == "reference":
        pref = (2.0 * math.pi * m) ** n
    else:
        raise ValueError("normalization must be 'calibrated' or 'reference'")
    form = GaussianForm.from_disk_weight(w, m, flip=False)
    gram = np.eye(n) - w @ w.conj()
    det_part = numkit.det_power(gram, -0.5)
    integral = gaussian_moment(pair_product(f, g), form)
    return complex(pref * det_part * integral / math.pi ** n)


def calibrate_norms(n: int, m) -> dict:
    """Numerically determine the constant c_n(m) that gives the constant
    function norm 1 at W = 0, and report it against (2 pi m)^n."""
    form = GaussianForm.from_disk_weight(np.zeros((n, n)), m, flip=False)
    zero = (0,) * n
    base = gaussian_moment({(zero, zero): 1.0}, form) / math.pi ** n
    constant = float(1.0 / base.real)
    reference = float((2.0 * math.pi * m) ** n)
    return {"constant": constant, "reference_constant": reference,
            "ratio": constant / reference,
            "closed_form": float((8.0 * math.pi * m) ** n)}


def verify_gaussian_pairing(wp, w, zp, z, trunc: int) -> dict:
    """Pair the truncated exponential generating series with itself under the
    restored Gaussian weight exp(-U conj(t(U))) pi^{-n} dLeb(U) and compare
    with the closed form det(I - W' conj(W))^{-1/2} exp A(W', z'; W, z)."""
    from . import fockpoly
    wp = numkit.symmetrize(wp)
    w = numkit.symmetrize(w)
    zp_v = numkit.as_row_vector(zp)
    z_v = numkit.as_row_vector(z)
    n = z_v.shape[0]
    coeffs_p, coeffs = {}, {}
    for s in numkit.enumerate_multiindices(n, trunc):
        poly = fockpoly.p_s(tuple(s))
        fact = numkit.mi_factorial(tuple(s))
        coeffs_p[tuple(s)] = poly.evaluate(zp_v, wp) / fact
        coeffs[tuple(s)] = poly.evaluate(z_v, w) / fact
    pairs = {}
    for s, cp in coeffs_p.items():
        for r, cq in coeffs.items():
            pairs[(s, r)] = cp * np.conj(cq)
    lhs = gaussian_moment(pairs, GaussianForm.identity(n)) / math.pi ** n
    rhs = fockpoly.matching_kernel_closed(zp_v, wp, z_v, w)
    return {"lhs": complex(lhs), "rhs": complex(rhs), "residual": abs(lhs - rhs)}


# --- Monte Carlo engines ---

@dataclass(frozen=True)
class MCConfig:
    samples: int = 100000
    seed: int = 0
    batch: int = 100000


@dataclass(frozen=True)
class MCEstimate:
    estimate: complex
    sigma: float
    samples: int
    seed: int
    elapsed: float

    def agrees(self, other_value, nsigma=3.0, floor=0.0):
        return abs(self.estimate - other_value) <= nsigma * self.sigma + floor


def _upper_dim(n):
    return n * (n + 1) // 2


def _sample_w(rng, count, n):
    """Symmetric W with independent uniform unit-disk upper entries, plus the
    indicator of membership in the bounded domain (largest singular value < 1).
    Proposal density pi^{-n(n+1)/2} on the polydisk."""
    d = _upper_dim(n)
    radii = np.sqrt(rng.uniform(size=(count, d)))
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(count, d))
    entries = radii * np.exp(1j * angles)
    ws = np.zeros((count, n, n), dtype=complex)
    for idx, (i, j) in enumerate(numkit.upper_pairs(n)):
        ws[:, i, j] = entries[:, idx]
        ws[:, j, i] = entries[:, idx]
    if n == 1:
        mask = np.abs(ws[:, 0, 0]) < 1.0
    else:
        smax = np.linalg.svd(ws, compute_uv=False)[:, 0]
        mask = smax < 1.0
    return ws, mask


def _batch_a_form(ws, zs):
    """a_form evaluated on stacked (W, z) samples."""
    n = ws.shape[1]
    eye = np.eye(n)
    gram = eye[None, :, :] - ws @ ws.conj()
    zcol = zs[:, :, None]
    sol_z = np.linalg.solve(gram, zcol)[:, :, 0]
    sol_wzbar = np.linalg.solve(gram, ws @ zs.conj()[:, :, None])[:, :, 0]
    first = np.einsum("bi,bi->b", zs.conj() + 0.5 * np.einsum("bi,bij->bj", zs, ws.conj()), sol_z)
    second = 0.5 * np.einsum("bi,bi->b", zs.conj(), sol_wzbar)
    return first + second


def _batch_forms(ws, m, flip=True):
    """Per-sample matrices Q of the Gaussian 8 pi m A(+/-W, z) by polarization."""
    count, n = ws.shape[0], ws.shape[1]
    base = -ws if flip else ws
    dim = 2 * n
    units = []
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = 1.0
        units.append(e[:n] + 1j * e[n:])

    def f_of(zrow):
        zz = np.broadcast_to(zrow, (count, n))
        return 8.0 * math.pi * m * _batch_a_form(base, zz).real

    diag = [f_of(units[i]) for i in range(dim)]
    q = np.zeros((count, dim, dim))
    for i in range(dim):
        q[:, i, i] = diag[i]
    for i in range(dim):
        for j in range(i + 1, dim):
            q[:, i, j] = q[:, j, i] = 0.5 * (f_of(units[i] + units[j]) - diag[i] - diag[j])
    return q


def _sample_z_given_w(rng, qmats):
    """z ~ density exp(-x^T Q x) / Z per sample; returns zs and the per-sample
    normalizer Z = pi^n det(Q)^{-1/2}."""
    count, dim = qmats.shape[0], qmats.shape[1]
    n = dim // 2
    cov = np.linalg.inv(qmats) / 2.0
    chol = np.linalg.cholesky(cov)
    gauss = rng.standard_normal((count, dim))
    xs = np.einsum("bij,bj->bi", chol, gauss)
    zs = xs[:, :n] + 1j * xs[:, n:]
    znorm = math.pi ** n / np.sqrt(np.linalg.det(qmats))
    return zs, znorm


def _z_coeff_groups(poly: PolyFunction):
    """n=1 only: split f(z,w) = sum_p z^p A_p(w) into {p: [(w_power, coeff)]}."""
    groups = {}
    for (s, a), c in poly.terms.items():
        groups.setdefault(s[0], []).append((a.upper[0], complex(c)))
    return groups


def _z_moment_table(qmats, pmax, qmax):
    """Per-sample E[z^p conj(z)^q] for the n=1 Gaussian exp(-x^T Q x), from
    the moment generating function: E[e^{uz+v conj(z)}] =
    exp(u^2 c2/2 + v^2 conj(c2)/2 + uv c1)."""
    cov = np.linalg.inv(qmats) / 2.0
    c1 = cov[:, 0, 0] + cov[:, 1, 1]
    c2 = cov[:, 0, 0] - cov[:, 1, 1] + 2j * cov[:, 0, 1]
    table = {}
    for p in range(pmax + 1):
        for q in range(qmax + 1):
            if (p - q) % 2:
                table[(p, q)] = np.zeros(len(qmats), dtype=complex)
                continue
            acc = np.zeros(len(qmats), dtype=complex)
            for gam in range(min(p, q), -1, -2):
                al, be = (p - gam) // 2, (q - gam) // 2
                coef = (math.factorial(p) * math.factorial(q)
                        / (math.factorial(al) * math.factorial(be) * math.factorial(gam)
                           * 2 ** (al + be)))
                acc += coef * c2 ** al * np.conj(c2) ** be * c1 ** gam
            table[(p, q)] = acc
    return table


def _rb_supported(polys, n):
    return n == 1 and all(isinstance(p, PolyFunction) for p in polys)


def _rb_coeff_stack(polys, wsc):
    """Stack of per-sample w-coefficient values A_p^i(w), shape (nf, pmax+1, N)."""
    groups = [_z_coeff_groups(p) for p in polys]
    pmax = max((p for g in groups for p in g), default=0)
    stack = np.zeros((len(polys), pmax + 1, len(wsc)), dtype=complex)
    for i, g in enumerate(groups):
        for p, terms in g.items():
            for apow, c in terms:
                stack[i, p, :] += c * wsc ** apow
    return stack, pmax


def _eval_factor(fn, zs, ws):
    if isinstance(fn, PolyFunction) or hasattr(fn, "evaluate_batch"):
        return fn.evaluate_batch(zs, ws)
    count = len(ws)
    zseq = zs if zs is not None else [None] * count
    return np.array([fn((ws[i], zseq[i])) for i in range(count)], dtype=complex)


def _finalize(av, sqv, count, seed, t0):
    mean = av / count
    var = max(sqv.real / count - abs(mean) ** 2, 0.0)
    return MCEstimate(complex(mean), math.sqrt(var / count), count, seed,
                      time.perf_counter() - t0)


def mc_disk_gram(polys, n, k, cfg: MCConfig):
    """Shared-sample MC Gram matrix for the weighted measure
    det(I - W conj(W))^{k - n - 3/2} dLeb(W); returns (gram, sigma)."""
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    d = _upper_dim(n)
    nf = len(polys)
    acc = np.zeros((nf, nf), dtype=complex)
    acc2 = np.zeros((nf, nf))
    done = 0
    while done < cfg.samples:
        count = min(cfg.batch, cfg.samples - done)
        ws, mask = _sample_w(rng, count, n)
        eye = np.eye(n)
        dets = np.where(mask, np.linalg.det(eye[None] - ws @ ws.conj()).real, 1.0)
        weight = np.where(mask, dets ** (float(k) - n - 1.5) * math.pi ** d, 0.0)
        vals = np.stack([_eval_factor(p, None, ws) for p in polys])
        acc += (vals * weight) @ vals.conj().T
        acc2 += (np.abs(vals) ** 2 * weight ** 2) @ (np.abs(vals) ** 2).T
        done += count
    gram = acc / done
    var = np.maximum(acc2 / done - np.abs(gram) ** 2, 0.0)
    return gram, np.sqrt(var / done)


def mc_disk_inner(f, g, n, k, cfg: MCConfig) -> MCEstimate:
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    d = _upper_dim(n)
    av, sqv, done = 0j, 0j, 0
    while done < cfg.samples:
        count = min(cfg.batch, cfg.samples - done)
        ws, mask = _sample_w(rng, count, n)
        eye = np.eye(n)
        dets = np.where(mask, np.linalg.det(eye[None] - ws @ ws.conj()).real, 1.0)
        weight = np.where(mask, dets ** (float(k) - n - 1.5) * math.pi ** d, 0.0)
        vals = _eval_factor(f, None, ws) * np.conj(_eval_factor(g, None, ws)) * weight
        av += vals.sum()
        sqv += (np.abs(vals) ** 2).sum()
        done += count
    return _finalize(av, sqv, done, cfg.seed, t0)


def _flip_of(weight_convention):
    if weight_convention == "plain":
        return False
    if weight_convention == "invariant":
        return True
    raise ValueError("weight_convention must be 'plain' or 'invariant'")


def mc_dj_gram(polys, n, m, k, cfg: MCConfig, weight_convention="plain",
               exact_z=None):
    """Shared-sample MC Gram for the bounded Jacobi-domain inner product
    f conj(g) det(I-W conj(W))^k exp(-8 pi m A(W,z)) against the measure
    det(I-W conj(W))^{-n-2} pi^{-n} dLeb(z) dLeb(W).

    weight_convention 'plain' integrates against the reciprocal of the kernel
    diagonal (the convention the orthonormal basis lives in); 'invariant'
    flips the sign of the W argument in the Gaussian, giving the weight that
    the group action actually preserves.  The two conventions agree on
    functions whose z-degree stays below 2.

    For n = 1 and polynomial inputs the conditional z-law is Gaussian, so the
    z-integral is taken exactly per sample (Wick moments) and only the
    W-average is stochastic; exact_z=False forces plain sampling."""
    flip = _flip_of(weight_convention)
    if exact_z is None:
        exact_z = _rb_supported(polys, n)
    elif exact_z and not _rb_supported(polys, n):
        raise ValueError("exact_z requires n = 1 and polynomial inputs")
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    d = _upper_dim(n)
    nf = len(polys)
    acc = np.zeros((nf, nf), dtype=complex)
    acc2 = np.zeros((nf, nf))
    done = 0
    chunk = min(cfg.batch, 20000) if exact_z else cfg.batch
    while done < cfg.samples:
        count = min(chunk, cfg.samples - done)
        ws, mask = _sample_w(rng, count, n)
        safe_ws = np.where(mask[:, None, None], ws, 0.0)
        qmats = _batch_forms(safe_ws, m, flip=flip)
        eye = np.eye(n)
        dets = np.linalg.det(eye[None] - safe_ws @ safe_ws.conj()).real
        if exact_z:
            znorm = math.pi ** n / np.sqrt(np.linalg.det(qmats))
            weight = np.where(mask,
                              dets ** (float(k) - n - 2) * math.pi ** d * znorm / math.pi ** n,
                              0.0)
            stack, pmax = _rb_coeff_stack(polys, safe_ws[:, 0, 0])
            table = _z_moment_table(qmats, pmax, pmax)
            pairs = np.zeros((nf, nf, count), dtype=complex)
            for p in range(pmax + 1):
                for q in range(pmax + 1):
                    mom = table[(p, q)]
                    if not np.any(mom):
                        continue
                    pairs += np.einsum("ib,jb,b->ijb", stack[:, p, :],
                                       stack[:, q, :].conj(), mom)
            acc += np.einsum("ijb,b->ij", pairs, weight)
            acc2 += np.einsum("ijb,b->ij", np.abs(pairs) ** 2, weight ** 2).real
        else:
            zs, znorm = _sample_z_given_w(rng, qmats)
            weight = np.where(mask,
                              dets ** (float(k) - n - 2) * math.pi ** d * znorm / math.pi ** n,
                              0.0)
            vals = np.stack([_eval_factor(p, zs, safe_ws) for p in polys])
            acc += (vals * weight) @ vals.conj().T
            acc2 += (np.abs(vals) ** 2 * weight ** 2) @ (np.abs(vals) ** 2).T
        done += count
    gram = acc / done
    var = np.maximum(acc2 / done - np.abs(gram) ** 2, 0.0)
    return gram, np.sqrt(var / done)


def mc_dj_inner(psi1, psi2, n, m, k, cfg: MCConfig,
                weight_convention="plain", exact_z=None) -> MCEstimate:
    """Two-function case of mc_dj_gram; see there for the conventions."""
    t0 = time.perf_counter()
    gram, sigma = mc_dj_gram([psi1, psi2], n, m, k, cfg,
                             weight_convention=weight_convention, exact_z=exact_z)
    return MCEstimate(complex(gram[0, 1]), float(sigma[0, 1]), cfg.samples,
                      cfg.seed, time.perf_counter() - t0)


def mc_hj_inner(phi1, phi2, n, m, k, cfg: MCConfig) -> MCEstimate:
    """MC inner product on the unbounded Jacobi domain with the decaying
    weight (det Y)^k exp(-4 pi m eta Y^{-1} t(eta)), overall constant
    2^{-n(n+3)}, measure (det Y)^{-n-2} pi^{-n} dLeb(zeta) dLeb(Omega).

    Samples are proposed in the bounded chart (the only practical way to
    cover the domain) and mapped forward; the overall constant cancels the
    chart Jacobian constant 2^{n(n+3)} exactly, and the remaining weight and
    measure factors are evaluated from the raw (Omega, zeta) values so the
    identities relating the two sides stay testable rather than assumed.
    phi1/phi2 are callables on (Omega, zeta) pairs."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
    d = _upper_dim(n)
    av, sqv, done = 0j, 0j, 0
    eye = np.eye(n)
    while done < cfg.samples:
        count = min(cfg.batch, cfg.samples - done)
        ws, mask = _sample_w(rng, count, n)
        safe_ws = np.where(mask[:, None, None], ws, 0.0)
        qmats = _batch_forms(safe_ws, m, flip=True)
        zs, znorm = _sample_z_given_w(rng, qmats)
        # forward chart: Omega = i(I+W)(I-W)^{-1}, zeta = 2i z (I-W)^{-1}
        res = eye[None] - safe_ws
        oms = 1j * np.linalg.solve(np.transpose(res, (0, 2, 1)),
                                   np.transpose(eye[None] + safe_ws, (0, 2, 1)))
        oms = np.transpose(oms, (0, 2, 1))
        zetas = 2j * np.linalg.solve(np.transpose(res, (0, 2, 1)), zs[:, :, None])[:, :, 0]
        yims = oms.imag
        etas = zetas.imag
        det_y = np.linalg.det(yims)
        quad = np.einsum("bi,bi->b", np.linalg.solve(yims, etas[:, :, None])[:, :, 0], etas)
        det_res = np.abs(np.linalg.det(res)) ** 2
        xqx = np.einsum("bi,bij,bj->b", np.concatenate([zs.real, zs.imag], axis=1), qmats,
                        np.concatenate([zs.real, zs.imag], axis=1))
        pref = (det_y ** (float(k) - n - 2) * det_res ** (-(n + 2))
                * znorm * math.pi ** (d - n))

        def eval_phi(phi):
            if hasattr(phi, "evaluate_space_batch_split"):
                vals, logs = phi.evaluate_space_batch_split(oms, zetas)
                return np.asarray(vals, dtype=complex), np.asarray(logs, dtype=float)
            if hasattr(phi, "evaluate_space_batch"):
                vals = np.asarray(phi.evaluate_space_batch(oms, zetas), dtype=complex)
            else:
                vals = np.array([phi((oms[i], zetas[i])) if mask[i] else 0.0
                                 for i in range(count)], dtype=complex)
            return vals, np.zeros(count)

        vals1, logs1 = eval_phi(phi1)
        vals2, logs2 = (vals1, logs1) if phi2 is phi1 else eval_phi(phi2)
        # transported functions carry a +exponent that the weight's -exponent
        # cancels to O(1); summing the logs before exp keeps boundary samples
        # finite where the factored product would hit inf * 0
        log_weight = logs1 + logs2 - 4.0 * np.pi * m * quad + xqx
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.where(mask, vals1 * np.conj(vals2) * np.exp(log_weight) * pref, 0.0)
        av += vals.sum()
        sqv += (np.abs(vals) ** 2).sum()
        done += count
    return _finalize(av, sqv, done, cfg.seed, t0)


# --- finite-difference Jacobians and real charts ---

def pack_disk_point(x: SJDiskPoint) -> np.ndarray:
    n = x.n
    wu = np.array([x.w[i, j] for (i, j) in numkit.upper_pairs(n)])
    return np.concatenate([wu.real, wu.imag, x.z.real, x.z.imag])


def unpack_disk_point(vec, n) -> SJDiskPoint:
    d = _upper_dim(n)
    wu = vec[:d] + 1j * vec[d:2 * d]
    w = np.zeros((n, n), dtype=complex)
    for idx, (i, j) in enumerate(numkit.upper_pairs(n)):
        w[i, j] = w[j, i] = wu[idx]
    z = vec[2 * d:2 * d + n] + 1j * vec[2 * d + n:]
    return SJDiskPoint(w, z)


def pack_space_point(y: SJSpacePoint) -> np.ndarray:
    n = y.n
    ou = np.array([y.omega[i, j] for (i, j) in numkit.upper_pairs(n)])
    return np.concatenate([ou.real, ou.imag, y.zeta.real, y.zeta.imag])


def unpack_space_point(vec, n) -> SJSpacePoint:
    d = _upper_dim(n)
    ou = vec[:d] + 1j * vec[d:2 * d]
    om = np.zeros((n, n), dtype=complex)
    for idx, (i, j) in enumerate(numkit.upper_pairs(n)):
        om[i, j] = om[j, i] = ou[idx]
    zeta = vec[2 * d:2 * d + n] + 1j * vec[2 * d + n:]
    return SJSpacePoint(om, zeta)


def numeric_jacobian(fn, x0, step=1e-5):
    """Central-difference Jacobian of a vector map R^D -> R^D."""
    x0 = np.asarray(x0, dtype=float)
    dim = x0.shape[0]
    cols = []
    for i in range(dim):
        dx = np.zeros(dim)
        dx[i] = step
        cols.append((np.asarray(fn(x0 + dx)) - np.asarray(fn(x0 - dx))) / (2 * step))
    return np.stack(cols, axis=1)
