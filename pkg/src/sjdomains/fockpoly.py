"""Polynomial engine: the matching-type polynomials P_s(Z, W), the derived
orthonormal bases of the Fock-type spaces, and truncated kernel expansions
with closed-form references.

Coefficient exactness policy: P_s coefficients are integers; the scaled basis
representatives used by the differential-system check keep exact Fraction
coefficients so that residuals are exactly zero, not merely small.  The
normalized bases used by quadrature carry float coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels, numkit
from .numkit import SymIndex, enumerate_multiindices, enumerate_symindices, mi_factorial


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def _key(s, a):
    return tuple(int(v) for v in s), a


@dataclass(frozen=True)
class TruncationSpec:
    """Truncation policy for kernel expansions: keep total degree <= max_degree
    and estimate the dropped tail either from the last included grade or from
    a geometric extrapolation of the last two grades."""
    max_degree: int
    tail_estimate_mode: str = "last-term"

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        if self.tail_estimate_mode not in ("last-term", "geometric-bound"):
            raise ValueError("unknown tail_estimate_mode %r" % (self.tail_estimate_mode,))


@dataclass(frozen=True)
class TruncationResult:
    value: complex
    tail_estimate: float
    partials: tuple = field(default=(), repr=False)

    def grade_increments(self):
        out = []
        prev = 0.0
        for p in self.partials:
            out.append(abs(p - prev))
            prev = p
        return out


def _tail_from_partials(partials, mode):
    if len(partials) < 2:
        return float("inf")
    last = abs(partials[-1] - partials[-2])
    if mode == "last-term":
        return last
    if len(partials) < 3:
        return float("inf")
    prev = abs(partials[-2] - partials[-3])
    if prev == 0.0:
        return last
    r = last / prev
    if r >= 1.0:
        return float("inf")
    return last * r / (1.0 - r)


class PolyFunction:
    """Polynomial in the row vector z (or Z) and the symmetric matrix W.

    Terms are stored as {(s, a): coeff} with s a length-n exponent tuple for z
    and a a SymIndex for W; each upper-triangle entry W_ij (i <= j) counts as
    one variable.  Coefficients may be int/Fraction (exact) or float/complex.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = int(n)
        self.terms = {}
        if terms:
            for (s, a), c in terms.items():
                if len(s) != self.n or a.n != self.n:
                    raise ValueError("term arity mismatch")
                if c == 0:
                    continue
                self.terms[_key(s, a)] = c

    # --- constructors ---

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def constant(cls, n, c):
        return cls(n, {((0,) * n, SymIndex.zero(n)): c})

    @classmethod
    def monomial(cls, n, s=None, a=None, coeff=1):
        s = (0,) * n if s is None else tuple(int(v) for v in s)
        a = SymIndex.zero(n) if a is None else a
        return cls(n, {(s, a): coeff})

    # --- ring operations ---

    def _binop(self, other, sign):
        if isinstance(other, PolyFunction):
            if other.n != self.n:
                raise ValueError("arity mismatch")
            out = dict(self.terms)
            for key, c in other.terms.items():
                new = out.get(key, 0) + sign * c
                if new == 0:
                    out.pop(key, None)
                else:
                    out[key] = new
            res = PolyFunction(self.n)
            res.terms = out
            return res
        return self._binop(PolyFunction.constant(self.n, other), sign)

    def __add__(self, other):
        return self._binop(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, other):
        if not isinstance(other, PolyFunction):
            if other == 0:
                return PolyFunction(self.n)
            res = PolyFunction(self.n)
            res.terms = {k: c * other for k, c in self.terms.items()}
            return res
        if other.n != self.n:
            raise ValueError("arity mismatch")
        out = {}
        for (s1, a1), c1 in self.terms.items():
            for (s2, a2), c2 in other.terms.items():
                s = tuple(x + y for x, y in zip(s1, s2))
                a = SymIndex(self.n, tuple(x + y for x, y in zip(a1.upper, a2.upper)))
                key = (s, a)
                new = out.get(key, 0) + c1 * c2
                if new == 0:
                    out.pop(key, None)
                else:
                    out[key] = new
        res = PolyFunction(self.n)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyFunction) and self.n == other.n and self.terms == other.terms

    def __repr__(self):
        return "PolyFunction(n=%d, %d terms)" % (self.n, len(self.terms))

    # --- structure ---

    def is_zero(self):
        return not self.terms

    def z_degree(self):
        return max((sum(s) for (s, _) in self.terms), default=0)

    def w_degree(self):
        return max((sum(a.upper) for (_, a) in self.terms), default=0)

    def terms_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0][0]), kv[0][0], kv[0][1].upper))

    def has_exact_coeffs(self):
        return all(_is_exact(c) for c in self.terms.values())

    def map_coeffs(self, fn):
        res = PolyFunction(self.n)
        res.terms = {k: fn(c) for k, c in self.terms.items() if fn(c) != 0}
        return res

    def flip_w(self):
        """Substitute W -> -W: each stored W_ij picks up one sign."""
        res = PolyFunction(self.n)
        res.terms = {(s, a): c * (-1) ** sum(a.upper) for (s, a), c in self.terms.items()}
        return res

    # --- calculus ---

    def dz(self, j):
        out = {}
        for (s, a), c in self.terms.items():
            if s[j] == 0:
                continue
            s2 = list(s)
            s2[j] -= 1
            out[(tuple(s2), a)] = out.get((tuple(s2), a), 0) + c * s[j]
        res = PolyFunction(self.n)
        res.terms = out
        return res

    def dw(self, i, j):
        """Derivative in the single variable W_ij (i <= j)."""
        if i > j:
            i, j = j, i
        out = {}
        for (s, a), c in self.terms.items():
            e = a.entry(i, j)
            if e == 0:
                continue
            upper = list(a.upper)
            upper[numkit._upper_offset(self.n, i, j)] -= 1
            key = (s, SymIndex(self.n, tuple(upper)))
            out[key] = out.get(key, 0) + c * e
        res = PolyFunction(self.n)
        res.terms = out
        return res

    # --- evaluation ---

    def evaluate(self, z=None, w=None):
        z = np.zeros(self.n, dtype=complex) if z is None else numkit.as_row_vector(z, self.n)
        total = 0j
        for (s, a), c in self.terms.items():
            val = complex(c)
            for i, e in enumerate(s):
                if e:
                    val *= z[i] ** e
            if any(a.upper):
                if w is None:
                    raise ValueError("term involves W but no W supplied")
                wm = np.asarray(w, dtype=complex)
                for (i, j), e in zip(numkit.upper_pairs(self.n), a.upper):
                    if e:
                        val *= wm[i, j] ** e
            total += val
        return total

    def evaluate_batch(self, zs=None, ws=None):
        """Vectorized evaluation: zs (N, n) complex, ws (N, n, n) complex."""
        if zs is None and ws is None:
            raise ValueError("need at least one batch argument")
        nrow = len(zs) if zs is not None else len(ws)
        out = np.zeros(nrow, dtype=complex)
        for (s, a), c in self.terms.items():
            val = np.full(nrow, complex(c))
            for i, e in enumerate(s):
                if e:
                    val = val * zs[:, i] ** e
            for (i, j), e in zip(numkit.upper_pairs(self.n), a.upper):
                if e:
                    val = val * ws[:, i, j] ** e
            out += val
        return out

    # --- serialization ---

    def to_json(self):
        out = []
        for (s, a), c in self.terms_sorted():
            cc = complex(c)
            out.append({"s": list(s), "a": [list(map(int, row)) for row in a.full()],
                        "c": [cc.real, cc.imag]})
        return out

    @classmethod
    def from_json(cls, data, n):
        terms = {}
        for item in data:
            a = SymIndex.from_full(np.asarray(item["a"]))
            c = complex(item["c"][0], item["c"][1])
            terms[(tuple(item["s"]), a)] = c
        return cls(n, terms)


# --- the matching-type polynomials ---

@lru_cache(maxsize=None)
def p_s(s: tuple) -> PolyFunction:
    """P_s(Z, W) = sum over symmetric multi-indices a with w(a) <= s of
    s! / (2^ahat a! (s - w(a))!) Z^{s - w(a)} W^a; integer coefficients."""
    s = tuple(int(v) for v in s)
    if any(v < 0 for v in s):
        raise ValueError("negative exponent")
    n = len(s)
    terms = {}
    sfact = mi_factorial(s)
    for a in enumerate_symindices(n, max(s) if s else 0):
        w = a.weight()
        if any(wv > sv for wv, sv in zip(w, s)):
            continue
        t = tuple(sv - wv for sv, wv in zip(s, w))
        coeff = Fraction(sfact, (2 ** a.ahat()) * a.factorial() * mi_factorial(t))
        if coeff.denominator != 1:
            raise ArithmeticError("non-integer matching coefficient")
        terms[(t, a)] = int(coeff)
    return PolyFunction(n, terms)


def p_s_from_generating(s: tuple, extra_degree: int = 0) -> PolyFunction:
    """Independent construction of P_s: s! times the U^s Taylor coefficient of
    exp(U tZ + U W tU / 2), computed by exact truncated series arithmetic."""
    s = tuple(int(v) for v in s)
    n = len(s)
    total = sum(s)
    # terms of the exponent, keyed (u exponent, z exponent, W index) -> Fraction
    gens = []
    zero_s = (0,) * n
    zero_a = SymIndex.zero(n)
    for i in range(n):
        ei = tuple(1 if j == i else 0 for j in range(n))
        gens.append(((ei, ei, zero_a), Fraction(1)))
    for idx, (i, j) in enumerate(numkit.upper_pairs(n)):
        u = tuple((1 if t == i else 0) + (1 if t == j else 0) for t in range(n))
        upper = tuple(1 if t == idx else 0 for t in range(len(zero_a.upper)))
        gens.append(((u, zero_s, SymIndex(n, upper)), Fraction(1, 2) if i == j else Fraction(1)))

    def mul(p1, p2):
        out = {}
        for (u1, z1, a1), c1 in p1.items():
            for (u2, z2, a2), c2 in p2.items():
                u = tuple(x + y for x, y in zip(u1, u2))
                if any(x > y for x, y in zip(u, s)):
                    continue
                key = (u, tuple(x + y for x, y in zip(z1, z2)),
                       SymIndex(n, tuple(x + y for x, y in zip(a1.upper, a2.upper))))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return {k: v for k, v in out.items() if v != 0}

    expo = dict(gens)
    series = {(zero_s, zero_s, zero_a): Fraction(1)}
    power = {(zero_s, zero_s, zero_a): Fraction(1)}
    for j in range(1, total + extra_degree + 1):
        power = mul(power, expo)
        inv = Fraction(1, math.factorial(j))
        for key, c in power.items():
            series[key] = series.get(key, Fraction(0)) + c * inv
    sfact = mi_factorial(s)
    terms = {}
    for (u, z, a), c in series.items():
        if u == s:
            val = c * sfact
            terms[(z, a)] = int(val) if val.denominator == 1 else val
    return PolyFunction(n, terms)


# --- normalized bases ---

def _scale_pow(base: float, e: int) -> float:
    return math.sqrt(base) ** e


def basis_f(s: tuple, m: float) -> PolyFunction:
    """f_s(W, z) = P_s(sqrt(8 pi m) z, W) / sqrt(s!), float coefficients."""
    s = tuple(int(v) for v in s)
    root = math.sqrt(float(mi_factorial(s)))
    u = 8.0 * math.pi * m
    poly = p_s(s)
    res = PolyFunction(poly.n)
    res.terms = {(t, a): c * _scale_pow(u, sum(t)) / root for (t, a), c in poly.terms.items()}
    return res


def basis_f_scaled(s: tuple, m: float) -> PolyFunction:
    """Exact-rational representative of basis_f: the same polynomial divided by
    the overall constant (8 pi m)^{|s|/2}/sqrt(s!), so each coefficient is the
    exact Fraction c_a u^{-deg_W(a)} with u the double-precision value of
    8 pi m.  Scalar multiples are invisible to the differential-system check,
    which this representative satisfies with exactly zero residual."""
    s = tuple(int(v) for v in s)
    u = Fraction(8.0 * math.pi * m)
    poly = p_s(s)
    res = PolyFunction(poly.n)
    terms = {}
    for (t, a), c in poly.terms.items():
        val = Fraction(c) / u ** sum(a.upper)
        terms[(t, a)] = int(val) if val.denominator == 1 else val
    res.terms = terms
    return res


def basis_phi(w, s: tuple, m: float) -> PolyFunction:
    """Phi_{W,s}(z) = f_s(W, z) with the matrix W substituted numerically:
    a polynomial in z alone."""
    s = tuple(int(v) for v in s)
    n = len(s)
    if hasattr(w, "w"):
        w = w.w
    wm = numkit.symmetrize(w) if w is not None else np.zeros((n, n), dtype=complex)
    f = basis_f(s, m)
    terms = {}
    zero_a = SymIndex.zero(n)
    for (t, a), c in f.terms.items():
        val = complex(c)
        for (i, j), e in zip(numkit.upper_pairs(n), a.upper):
            if e:
                val *= wm[i, j] ** e
        key = (t, zero_a)
        terms[key] = terms.get(key, 0) + val
    return PolyFunction(n, terms)


def sym_degree_list(n: int, max_degree: int):
    """Symmetric indices with at most max_degree stored entries, graded order."""
    return [a for a in enumerate_symindices(n, 2 * max_degree) if sum(a.upper) <= max_degree]


def q_basis(n: int, k, max_degree: int, cfg=None):
    """Orthonormal polynomials in W for the weighted measure
    det(I - W conj(W))^{k - n - 3/2} dLeb(W) on the bounded symmetric domain.

    n = 1: closed form q_a(w) = w^a / sqrt(pi B(a + 1, k - 3/2)).
    n >= 2: monomials orthonormalized against a Monte Carlo Gram matrix
    (Cholesky back-substitution), accurate only to the MC error.
    """
    if not k > n + 0.5:
        raise ValueError("need k > n + 1/2 for a finite-norm basis")
    if n == 1:
        from scipy.special import beta as beta_fn
        out = []
        for a in range(max_degree + 1):
            norm = math.sqrt(math.pi * float(beta_fn(a + 1, float(k) - 1.5)))
            out.append(PolyFunction.monomial(1, a=SymIndex(1, (a,)), coeff=1.0 / norm))
        return out
    from . import quad
    monos = [PolyFunction.monomial(n, a=a, coeff=1.0) for a in sym_degree_list(n, max_degree)]
    cfg = cfg or quad.MCConfig(samples=200000, seed=20240)
    gram, _sigma = quad.mc_disk_gram(monos, n, k, cfg)
    low = np.linalg.cholesky(gram)
    coeffs = numkit.solve(low.T, np.eye(len(monos)))  # columns: new basis in monomials
    out = []
    for row in coeffs.T:
        acc = PolyFunction(n)
        for c, mono in zip(row, monos):
            acc = acc + mono * complex(c)
        out.append(acc)
    return out


def basis_big_f(s: tuple, a_poly: PolyFunction, m: float) -> PolyFunction:
    """F_{s,a} = (8 pi m)^{n/2} f_s(W, z) q_a(W), orthonormal for the bounded
    Jacobi-domain inner product (unit normalization constant convention)."""
    s = tuple(int(v) for v in s)
    n = len(s)
    return basis_f(s, m) * a_poly * float((8.0 * math.pi * m) ** (n / 2.0))


def series_basis(n: int, m: float, k, s_max: int, a_max: int, cfg=None):
    """Labeled orthonormal family F_{s,a} with |s| <= s_max and deg q_a <= a_max,
    ordered by (|s|, s, a)."""
    qs = q_basis(n, k, a_max, cfg)
    labels_a = sym_degree_list(n, a_max)
    out = []
    for s in enumerate_multiindices(n, s_max):
        for a, qa in zip(labels_a, qs):
            out.append(((tuple(s), a), basis_big_f(tuple(s), qa, m)))
    return out


# --- differential system ---

def pde_check(f: PolyFunction, m: float) -> float:
    """Largest coefficient residual of d^2 f / dz_j dz_k
    - 8 pi m (1 + delta_jk) df/dW_jk over all j <= k.

    Exactly 0.0 (exact rational arithmetic throughout) when f has int/Fraction
    coefficients, e.g. any output of basis_f_scaled or combinations thereof.
    """
    exact = f.has_exact_coeffs()
    mult = Fraction(8.0 * math.pi * m) if exact else 8.0 * math.pi * m
    worst = 0.0
    for i in range(f.n):
        for j in range(i, f.n):
            lhs = f.dz(i).dz(j)
            rhs = f.dw(i, j) * (mult * (2 if i == j else 1))
            diff = lhs - rhs
            if diff.terms:
                worst = max(worst, max(abs(complex(c)) for c in diff.terms.values()))
    return worst


def express_in_matching_basis(f: PolyFunction, m: float):
    """Write f(z, W) = sum_s c_s(W) fs_s(z, W) over the exact scaled basis
    representatives (basis_f_scaled); returns {s: PolyFunction in W}.

    Works by back-substitution on the z-leading terms; exact when f has exact
    coefficients.  Every polynomial is reachable: the representative of s has
    unit z^s coefficient and only lower z-degrees otherwise.
    """
    remainder = f
    out = {}
    guard = 0
    while not remainder.is_zero():
        guard += 1
        if guard > 10000:
            raise RuntimeError("back-substitution failed to terminate")
        deg = remainder.z_degree()
        layer = [(sv, av, c) for (sv, av), c in remainder.terms.items() if sum(sv) == deg]
        (sv, av, c) = layer[0]
        coeff_w = PolyFunction.monomial(f.n, a=av, coeff=c)
        out[sv] = out.get(sv, PolyFunction(f.n)) + coeff_w
        remainder = remainder - coeff_w * basis_f_scaled(sv, m)
    return out


# --- kernel expansions against closed forms ---

def matching_kernel_closed(zp, wp, z, w) -> complex:
    """det(I - W' conj(W))^{-1/2} exp A(W', z'; W, z) evaluated at the given
    (capital) variables."""
    wp = numkit.symmetrize(wp)
    w = numkit.symmetrize(w)
    gram = np.eye(w.shape[0]) - wp @ w.conj()
    return complex(numkit.det_power(gram, -0.5) * np.exp(kernels.a_polar((wp, zp), (w, z))))


def expansion_matching(zp, wp, z, w, trunc: TruncationSpec) -> TruncationResult:
    """sum over |s| <= d of P_s(Z', W') conj(P_s(Z, W)) / s!."""
    zp = numkit.as_row_vector(zp)
    n = zp.shape[0]
    partials, total = [], 0j
    for d in range(trunc.max_degree + 1):
        for s in enumerate_multiindices(n, d):
            if sum(s) != d:
                continue
            poly = p_s(tuple(s))
            total += (poly.evaluate(zp, wp) * np.conj(poly.evaluate(z, w))
                      / mi_factorial(tuple(s)))
        partials.append(total)
    return TruncationResult(total, _tail_from_partials(partials, trunc.tail_estimate_mode),
                            tuple(partials))


def fock_at_w_closed(w, zp, z, m: float) -> complex:
    w = numkit.symmetrize(w)
    gram = np.eye(w.shape[0]) - w @ w.conj()
    expo = 8.0 * math.pi * m * kernels.a_polar((w, zp), (w, z))
    return complex(numkit.det_power(gram, -0.5) * np.exp(expo))


def expansion_fock_at_w(w, zp, z, m: float, trunc: TruncationSpec) -> TruncationResult:
    """sum over |s| <= d of Phi_{W,s}(z') conj(Phi_{W,s}(z)) at fixed W."""
    zp = numkit.as_row_vector(zp)
    n = zp.shape[0]
    partials, total = [], 0j
    for d in range(trunc.max_degree + 1):
        for s in enumerate_multiindices(n, d):
            if sum(s) != d:
                continue
            phi = basis_phi(w, tuple(s), m)
            total += phi.evaluate(zp) * np.conj(phi.evaluate(z))
        partials.append(total)
    return TruncationResult(total, _tail_from_partials(partials, trunc.tail_estimate_mode),
                            tuple(partials))


def fock_full_closed(xp, x, m: float) -> complex:
    wp, zp = kernels._wz(xp)
    w, z = kernels._wz(x)
    gram = np.eye(w.shape[0]) - wp @ w.conj()
    expo = 8.0 * math.pi * m * kernels.a_polar(xp, x)
    return complex(numkit.det_power(gram, -0.5) * np.exp(expo))


def expansion_fock_full(xp, x, m: float, trunc: TruncationSpec) -> TruncationResult:
    """sum over |s| <= d of f_s(W', z') conj(f_s(W, z))."""
    wp, zp = kernels._wz(xp)
    w, z = kernels._wz(x)
    n = len(zp)
    partials, total = [], 0j
    for d in range(trunc.max_degree + 1):
        for s in enumerate_multiindices(n, d):
            if sum(s) != d:
                continue
            f = basis_f(tuple(s), m)
            total += f.evaluate(zp, wp) * np.conj(f.evaluate(z, w))
        partials.append(total)
    return TruncationResult(total, _tail_from_partials(partials, trunc.tail_estimate_mode),
                            tuple(partials))


def discrete_kernel_constant(m: float, k, n: int = 1) -> float:
    """Constant rho with sum_{s,a} F_{s,a}(x') conj(F_{s,a}(x)) =
    rho det(I - W' conj(W))^{-k} exp(8 pi m A(W', z'; W, z)).

    With the unit normalization constant convention the reproducing kernel
    of the weighted space keeps an explicit constant: for n = 1 the q-basis
    sums to ((k - 3/2)/pi)(1 - w' conj(w))^{-(k - 1/2)}, giving
    rho = 8 m (k - 3/2).  (Equivalently: unit constant in the kernel would
    force the normalization constant of the inner product to equal rho.)
    """
    if n != 1:
        raise ValueError("closed-form constant implemented for n = 1 only")
    return float(8.0 * m * (float(k) - 1.5))


def discrete_kernel_closed(xp, x, m: float, k) -> complex:
    wp, _ = kernels._wz(xp)
    n = wp.shape[0]
    return discrete_kernel_constant(m, k, n) * kernels.kmk_star_kernel(xp, x, m, k)


def expansion_discrete_kernel(xp, x, m: float, k, trunc: TruncationSpec,
                              a_max: int) -> TruncationResult:
    """sum over |s| <= d, deg a <= a_max of F_{s,a}(x') conj(F_{s,a}(x)); n=1."""
    wp, zp = kernels._wz(xp)
    w, z = kernels._wz(x)
    n = len(zp)
    if n != 1:
        raise ValueError("reference constant implemented for n = 1 only")
    qs = q_basis(n, k, a_max)
    qvp = [q.evaluate(None, wp) for q in qs]
    qv = [q.evaluate(None, w) for q in qs]
    scale = float((8.0 * math.pi * m) ** n)
    partials, total = [], 0j
    for d in range(trunc.max_degree + 1):
        for s in enumerate_multiindices(n, d):
            if sum(s) != d:
                continue
            f = basis_f(tuple(s), m)
            base = scale * f.evaluate(zp, wp) * np.conj(f.evaluate(z, w))
            total += base * sum(qp * np.conj(qq) for qp, qq in zip(qvp, qv))
        partials.append(total)
    return TruncationResult(total, _tail_from_partials(partials, trunc.tail_estimate_mode),
                            tuple(partials))
