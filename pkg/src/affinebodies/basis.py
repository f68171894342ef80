"""Critical orthonormal bases of the slope field f(v) = dI/dt at t = 1.

The slope field is even, continuous, and sums to zero over every orthonormal
basis; a basis of zeros therefore exists and is found constructively by
intermediate-value bisection along great-circle arcs, restricting to the
orthogonal complement after each hit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FrameNotCritical, NoSignChange
from .geometry import Body, plane_frame
from .isoperimetric import iso_derivative

DIM2_SAMPLES = 64
DIM3_SAMPLE_SET = None  # built lazily


class SlopeField:
    """Cached evaluator of v -> I'_v(1); even in v, deduplicated to ~1e-12."""

    def __init__(self, body: Body | None, resolution: int | None = None,
                 evaluator=None, dim: int | None = None):
        self.body = body
        self.resolution = resolution
        self.dim = body.dim if body is not None else dim
        self._evaluator = evaluator or self._default_evaluator
        self.cache: dict = {}

    @classmethod
    def for_body(cls, body: Body, resolution: int | None = None) -> "SlopeField":
        return cls(body, resolution=resolution)

    @classmethod
    def from_function(cls, dim: int, fn) -> "SlopeField":
        return cls(None, evaluator=fn, dim=dim)

    def _default_evaluator(self, v: np.ndarray) -> float:
        return iso_derivative(self.body, v, 1.0, self.resolution)

    def _key(self, v: np.ndarray):
        # canonical sign: first component of magnitude > 1e-8 made positive
        w = v
        for comp in v:
            if abs(comp) > 1e-8:
                if comp < 0:
                    w = -v
                break
        return tuple(np.round(w, 12))


def slope(field: SlopeField, v: np.ndarray) -> float:
    """f(v) = I'_v(1) with caching; the field is even so v and -v share a value."""
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("slope: v must be a unit vector")
    key = field._key(v)
    if key not in field.cache:
        field.cache[key] = float(field._evaluator(v))
    return field.cache[key]


def _arc_bisect(field: SlopeField, u: np.ndarray, w: np.ndarray,
                theta_hi: float, f_lo: float, f_hi: float, tol: float,
                max_iter: int = 60) -> np.ndarray:
    """Bisection for a zero of f along v(theta) = u cos(theta) + w sin(theta)."""
    lo, hi = 0.0, theta_hi
    best, best_f = u, abs(f_lo)
    if abs(f_hi) < best_f:
        best, best_f = u * np.cos(theta_hi) + w * np.sin(theta_hi), abs(f_hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        vm = u * np.cos(mid) + w * np.sin(mid)
        fm = slope(field, vm)
        if abs(fm) < best_f:
            best, best_f = vm, abs(fm)
        if abs(fm) <= tol:
            return vm
        if (fm > 0) == (f_lo > 0):
            lo, f_lo = mid, fm
        else:
            hi, f_hi = mid, fm
    return best


def find_zero_on_arc(field: SlopeField, u: np.ndarray, w: np.ndarray,
                     tol: float) -> np.ndarray:
    """Zero of the field on the quarter arc between orthogonal u and w."""
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if abs(u @ w) > 1e-10:
        raise ValueError("find_zero_on_arc: u and w must be orthogonal (1e-10)")
    fu = slope(field, u)
    if abs(fu) <= tol:
        return u
    fw = slope(field, w)
    if abs(fw) <= tol:
        return w
    if (fu > 0) == (fw > 0):
        raise NoSignChange(
            f"find_zero_on_arc: same sign at both endpoints ({fu:.3e}, {fw:.3e})")
    return _arc_bisect(field, u, w, np.pi / 2, fu, fw, tol)


def _dim3_samples() -> np.ndarray:
    """Half of the 26-direction axis/edge/vertex set (the field is even)."""
    global DIM3_SAMPLE_SET
    if DIM3_SAMPLE_SET is None:
        dirs = [(1, 0, 0), (0, 1, 0), (0, 0, 1),
                (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1), (0, 1, 1), (0, 1, -1),
                (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)]
        arr = np.array(dirs, dtype=float)
        DIM3_SAMPLE_SET = arr / np.linalg.norm(arr, axis=1)[:, None]
        DIM3_SAMPLE_SET.setflags(write=False)
    return DIM3_SAMPLE_SET


@dataclass
class CriticalBasis:
    """Orthonormal directions with |slope| residuals; field_small marks bodies
    whose sampled field never exceeded the tolerance (every basis qualifies)."""

    directions: list
    residuals: np.ndarray
    field_small: bool = False


def _circle_zero(field: SlopeField, axis: np.ndarray, tol: float,
                 n_samples: int = DIM2_SAMPLES):
    """Zero of the field on the circle orthogonal to `axis`, or None if the
    restricted field is uniformly below tol."""
    a, b = plane_frame(axis)
    psis = np.pi * np.arange(n_samples) / n_samples
    vals = np.array([slope(field, a * np.cos(p) + b * np.sin(p)) for p in psis])
    i = int(np.argmax(np.abs(vals)))
    if abs(vals[i]) < tol:
        return None
    u = a * np.cos(psis[i]) + b * np.sin(psis[i])
    w = -a * np.sin(psis[i]) + b * np.cos(psis[i])
    fu, fw = vals[i], slope(field, w)
    if abs(fw) <= tol:
        return w
    if (fu > 0) == (fw > 0):
        raise NoSignChange(
            "circle search: orthogonal pair with one sign; sum identity violated")
    return _arc_bisect(field, u, w, np.pi / 2, fu, fw, tol)


def critical_basis(body: Body, tol: float = 1e-6,
                   resolution: int | None = None) -> CriticalBasis:
    """Orthonormal basis with |I'_{e_i}(1)| <= tol along every member.

    Implements the inductive construction: bisect a sign-opposite orthonormal
    pair to a zero v, then repeat inside the complement of v; the last member
    is critical for free by the orthonormal-sum identity.
    """
    if tol < 1e-8:
        raise ValueError("critical_basis: tol must be >= 1e-8")
    field = SlopeField.for_body(body, resolution)
    inner = tol / 4.0
    if body.dim == 2:
        thetas = np.pi * np.arange(DIM2_SAMPLES) / DIM2_SAMPLES
        dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
        vals = np.array([slope(field, d) for d in dirs])
        if np.max(np.abs(vals)) < tol:
            basis = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
            res = np.array([abs(slope(field, e)) for e in basis])
            return CriticalBasis(basis, res, field_small=True)
        i = int(np.argmax(np.abs(vals)))
        u = dirs[i]
        w = np.array([-u[1], u[0]])
        fu, fw = vals[i], slope(field, w)
        if abs(fw) <= inner:
            v0 = w
        else:
            v0 = _arc_bisect(field, u, w, np.pi / 2, fu, fw, inner)
        e2 = np.array([-v0[1], v0[0]])
        basis = [v0, e2]
    else:
        samples = _dim3_samples()
        vals = np.array([slope(field, d) for d in samples])
        if np.max(np.abs(vals)) < tol:
            basis = [np.eye(3)[i] for i in range(3)]
            res = np.array([abs(slope(field, e)) for e in basis])
            return CriticalBasis(basis, res, field_small=True)
        i = int(np.argmax(np.abs(vals)))
        u_star, F = samples[i], vals[i]
        sgn = 1.0 if F > 0 else -1.0
        j = int(np.argmin(vals * sgn))
        if vals[j] * sgn < 0:
            q, fq = samples[j], vals[j]
        else:
            # all samples on one side: the orthonormal-sum identity forces a
            # value <= -|F|/2 somewhere on the circle orthogonal to u_star
            a, b = plane_frame(u_star)
            psis = np.pi * np.arange(32) / 32
            circ = np.outer(np.cos(psis), a) + np.outer(np.sin(psis), b)
            gv = np.array([slope(field, d) for d in circ])
            jj = int(np.argmin(gv * sgn))
            if gv[jj] * sgn >= 0:
                raise NoSignChange(
                    "critical_basis: no opposite-sign direction found; "
                    "orthonormal-sum identity numerically violated")
            q, fq = circ[jj], gv[jj]
        if abs(fq) <= inner:
            v1 = q
        else:
            w = q - (q @ u_star) * u_star
            w /= np.linalg.norm(w)
            theta_star = float(np.arccos(np.clip(q @ u_star, -1.0, 1.0)))
            v1 = _arc_bisect(field, u_star, w, theta_star, F, fq, inner)
        more = _complete_from_axis(field, v1, inner)
        basis = [v1] + more
    res = np.array([abs(slope(field, e)) for e in basis])
    return CriticalBasis(basis, res, field_small=False)


def _complete_from_axis(field: SlopeField, v1: np.ndarray, inner_tol: float) -> list:
    """Two critical directions in the circle orthogonal to v1 (dim 3)."""
    e1 = _circle_zero(field, v1, inner_tol)
    if e1 is None:
        e1, _ = plane_frame(v1)
    e2 = np.cross(v1, e1)
    e2 /= np.linalg.norm(e2)
    return [e1, e2]


def complete_frame(body: Body, frame, tol: float = 1e-6,
                   resolution: int | None = None) -> CriticalBasis:
    """Extend an orthonormal critical frame to a full critical basis by running
    the construction inside the frame's orthogonal complement."""
    if tol < 1e-8:
        raise ValueError("complete_frame: tol must be >= 1e-8")
    frame = [np.asarray(f, dtype=float) for f in frame]
    n = body.dim
    if len(frame) > n:
        raise ValueError("complete_frame: frame larger than the dimension")
    for i, f in enumerate(frame):
        if abs(np.linalg.norm(f) - 1.0) > 1e-10:
            raise ValueError(f"complete_frame: member {i} is not unit")
        for g in frame[:i]:
            if abs(f @ g) > 1e-10:
                raise ValueError("complete_frame: frame is not orthonormal")
    field = SlopeField.for_body(body, resolution)
    for i, f in enumerate(frame):
        r = abs(slope(field, f))
        if r > tol:
            raise FrameNotCritical(
                f"complete_frame: member {i} has slope residual {r:.3e} > {tol:g}")
    if len(frame) == 0:
        return critical_basis(body, tol, resolution)
    if len(frame) == n:
        res = np.array([abs(slope(field, f)) for f in frame])
        return CriticalBasis(list(frame), res, field_small=False)
    inner = tol / 4.0
    if n == 2:
        partner = np.array([-frame[0][1], frame[0][0]])
        basis = [frame[0], partner]
    elif len(frame) == 1:
        basis = [frame[0]] + _complete_from_axis(field, frame[0], inner)
    else:  # n == 3, k == 2: the completion is forced up to sign
        third = np.cross(frame[0], frame[1])
        third /= np.linalg.norm(third)
        basis = [frame[0], frame[1], third]
    res = np.array([abs(slope(field, e)) for e in basis])
    return CriticalBasis(basis, res, field_small=False)
