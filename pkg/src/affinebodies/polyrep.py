"""Radial functions as Cartesian monomial polynomials.

Every closed-form radial basis used by the toolkit (2D Fourier modes, real
spherical harmonics, constants) restricts to the unit sphere from a polynomial
in the ambient coordinates:

* ``cos kθ`` and ``sin kθ`` on the circle are Re/Im of ``(x+iy)^k``;
* the real orthonormal spherical harmonic of degree ``l`` equals a homogeneous
  degree-``l`` polynomial on the unit sphere.

Working with the polynomial gives exact first and second derivatives
everywhere, with no pole or chart issues. Construction is exact (Fraction
arithmetic); only the final normalization introduces floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = ["RadialPolynomial", "fourier2d_polynomial", "harmonics3d_polynomial",
           "constant_polynomial", "real_sph_harm_monomials"]


def _legendre_coeffs(l: int) -> list[Fraction]:
    """Exact coefficients of the Legendre polynomial P_l."""
    if l == 0:
        return [Fraction(1)]
    prev, cur = [Fraction(1)], [Fraction(0), Fraction(1)]
    for n in range(1, l):
        shifted = [Fraction(0)] + cur
        nxt = [(2 * n + 1) * c for c in shifted]
        for i, c in enumerate(prev):
            nxt[i] -= n * c
        cur, prev = [c / (n + 1) for c in nxt], cur
    return cur


def _poly_diff_1d(coeffs: list[Fraction]) -> list[Fraction]:
    return [coeffs[k] * k for k in range(1, len(coeffs))]


def _mono_mul(d1: dict, d2: dict) -> dict:
    out: dict = {}
    for e1, c1 in d1.items():
        for e2, c2 in d2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _re_im_xy_pow(m: int, ndim: int) -> tuple[dict, dict]:
    """Re and Im of (x+iy)^m as monomial dicts in ndim variables."""
    re: dict = {}
    im: dict = {}
    tail = (0,) * (ndim - 2)
    for k in range(m + 1):
        c = Fraction(math.comb(m, k))
        e = (m - k, k) + tail
        if k % 4 == 0:
            re[e] = re.get(e, Fraction(0)) + c
        elif k % 4 == 1:
            im[e] = im.get(e, Fraction(0)) + c
        elif k % 4 == 2:
            re[e] = re.get(e, Fraction(0)) - c
        else:
            im[e] = im.get(e, Fraction(0)) - c
    return re, im


def _r2_pow(p: int) -> dict:
    out = {(0, 0, 0): Fraction(1)}
    base = {(2, 0, 0): Fraction(1), (0, 2, 0): Fraction(1), (0, 0, 2): Fraction(1)}
    for _ in range(p):
        out = _mono_mul(out, base)
    return out


@lru_cache(maxsize=None)
def real_sph_harm_monomials(l: int, m: int) -> tuple[tuple[tuple[int, int, int], float], ...]:
    """Monomials of the homogeneous polynomial equal to the real orthonormal
    spherical harmonic Y_{l,m} on the unit sphere.

    Convention: m > 0 pairs with cos(m*phi), m < 0 with sin(|m|*phi), no
    Condon-Shortley phase. Returned as ((exponents, coefficient), ...).
    """
    am = abs(m)
    q = _legendre_coeffs(l)
    for _ in range(am):
        q = _poly_diff_1d(q)
    # sum_j q_j z^j (x^2+y^2+z^2)^((l-am-j)/2); j has the parity of l-am
    tail: dict = {}
    for j, qj in enumerate(q):
        if qj == 0:
            continue
        p2 = l - am - j
        term = _mono_mul({(0, 0, j): qj}, _r2_pow(p2 // 2))
        for e, c in term.items():
            tail[e] = tail.get(e, Fraction(0)) + c
    if am == 0:
        base = tail
    else:
        re, im = _re_im_xy_pow(am, 3)
        base = _mono_mul(re if m > 0 else im, tail)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi)
                     * math.factorial(l - am) / math.factorial(l + am))
    if am != 0:
        norm *= math.sqrt(2.0)
    return tuple((e, float(c) * norm) for e, c in sorted(base.items()))


def _merge(terms: dict, monos, scale: float) -> None:
    for e, c in monos:
        terms[e] = terms.get(e, 0.0) + scale * c


class _MonoSet:
    """One polynomial as exponent matrix + coefficient vector, with fast
    batched evaluation via shared per-variable power tables."""

    __slots__ = ("exps", "coeffs", "dim")

    def __init__(self, terms: dict, dim: int):
        items = sorted((e, c) for e, c in terms.items() if c != 0.0)
        if not items:
            items = [((0,) * dim, 0.0)]
        self.dim = dim
        self.exps = np.array([e for e, _ in items], dtype=np.intp)
        self.coeffs = np.array([c for _, c in items])

    def diff(self, d: int) -> "_MonoSet":
        out: dict = {}
        for e, c in zip(self.exps, self.coeffs):
            if e[d] == 0:
                continue
            ne = tuple(int(v) - (1 if i == d else 0) for i, v in enumerate(e))
            out[ne] = out.get(ne, 0.0) + float(c) * int(e[d])
        return _MonoSet(out, self.dim)

    def eval_with_tables(self, tables) -> np.ndarray:
        m, n = len(self.coeffs), tables[0].shape[1]
        chunk = max(1, 4_000_000 // max(n, 1))
        if m <= chunk:
            prod = tables[0][self.exps[:, 0]]
            for d in range(1, self.dim):
                prod = prod * tables[d][self.exps[:, d]]
            return self.coeffs @ prod
        out = np.zeros(n)
        for lo in range(0, m, chunk):
            hi = min(lo + chunk, m)
            prod = tables[0][self.exps[lo:hi, 0]]
            for d in range(1, self.dim):
                prod = prod * tables[d][self.exps[lo:hi, d]]
            out += self.coeffs[lo:hi] @ prod
        return out


class RadialPolynomial:
    """Polynomial P with P(u) = r(u) on the unit sphere, plus exact gradient
    and Hessian polynomials, evaluated in batch."""

    def __init__(self, terms: dict, dim: int):
        self.dim = dim
        self.value = _MonoSet(terms, dim)
        self.grad = [self.value.diff(d) for d in range(dim)]
        self.hess = [[self.grad[i].diff(j) for j in range(dim)] for i in range(dim)]
        degs = [self.value.exps[:, d].max() for d in range(dim)]
        self._maxdeg = [int(v) for v in degs]

    def _tables(self, pts: np.ndarray):
        tabs = []
        for d in range(self.dim):
            md = self._maxdeg[d]
            t = np.empty((md + 1, len(pts)))
            t[0] = 1.0
            for e in range(1, md + 1):
                t[e] = t[e - 1] * pts[:, d]
            tabs.append(t)
        return tabs

    def eval_batch(self, pts: np.ndarray, order: int = 2):
        """Return (P, gradP, hessP) at pts; higher entries are None below `order`."""
        tabs = self._tables(pts)
        val = self.value.eval_with_tables(tabs)
        if order == 0:
            return val, None, None
        g = np.stack([gp.eval_with_tables(tabs) for gp in self.grad], axis=-1)
        if order == 1:
            return val, g, None
        n, d = len(pts), self.dim
        H = np.empty((n, d, d))
        for i in range(d):
            for j in range(i, d):
                H[:, i, j] = self.hess[i][j].eval_with_tables(tabs)
                if j > i:
                    H[:, j, i] = H[:, i, j]
        return val, g, H


def fourier2d_polynomial(coefficients) -> RadialPolynomial:
    """r(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta) with the flat
    layout [a0, a1, b1, a2, b2, ...] (a trailing b may be omitted)."""
    coeffs = list(coefficients)
    terms: dict = {(0, 0): coeffs[0]}
    k = 1
    idx = 1
    while idx < len(coeffs):
        re, im = _re_im_xy_pow(k, 2)
        _merge(terms, [(e, float(c)) for e, c in re.items()], coeffs[idx])
        if idx + 1 < len(coeffs):
            _merge(terms, [(e, float(c)) for e, c in im.items()], coeffs[idx + 1])
        idx += 2
        k += 1
    return RadialPolynomial(terms, 2)


def harmonics3d_polynomial(coefficients) -> RadialPolynomial:
    """r(u) = sum c_{lm} Y_{lm}(u), flat layout index l^2 + l + m, length (L+1)^2."""
    coeffs = list(coefficients)
    L = int(round(math.sqrt(len(coeffs)))) - 1
    terms: dict = {}
    for l in range(L + 1):
        for m in range(-l, l + 1):
            c = coeffs[l * l + l + m]
            if c == 0.0:
                continue
            _merge(terms, real_sph_harm_monomials(l, m), c)
    return RadialPolynomial(terms, 3)


def constant_polynomial(dim: int, value: float = 1.0) -> RadialPolynomial:
    return RadialPolynomial({(0,) * dim: value}, dim)
