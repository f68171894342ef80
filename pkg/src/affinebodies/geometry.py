"""Smooth convex bodies in radial representation: validation, measurement,
orthogonal affinities, and planar sections.

A body is stored as a closed-form radial polynomial about its centroid plus a
linear map, through the gauge function phi (phi(x) <= 1 iff x in K, 1-homogeneous).
Linear images — in particular orthogonal affinities — compose exactly on the
linear map, so the radial function and its first two derivatives stay
closed-form for every transformed body.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import BadRatio, BadSpec, NonConvex, NonPositiveRadial, Unsupported
from .polyrep import (RadialPolynomial, constant_polynomial,
                      fourier2d_polynomial, harmonics3d_polynomial,
                      real_sph_harm_monomials)

KINDS = ("fourier2d", "harmonics3d", "ellipsoid")

# default quadrature / validation resolutions per dimension
DEFAULT_RESOLUTION = {2: 2048, 3: 64}
VALIDATION_RESOLUTION = {2: 4096, 3: 64}
CURVATURE_TOL = 1e-8
CENTERED_TOL = 1e-10


@dataclass(frozen=True)
class BodySpec:
    """Declarative description of a body; see `load_spec` for the file format."""

    dim: int
    kind: str
    coefficients: tuple
    label: str = ""

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise BadSpec(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.dim not in (2, 3):
            raise BadSpec(f"dim must be 2 or 3, got {self.dim}")
        n = len(self.coefficients)
        if n == 0:
            raise BadSpec("empty coefficient list")
        if not all(isinstance(c, (int, float)) and math.isfinite(c) for c in self.coefficients):
            raise BadSpec("coefficients must be finite numbers")
        if self.kind == "fourier2d":
            if self.dim != 2:
                raise BadSpec("fourier2d requires dim 2")
        elif self.kind == "harmonics3d":
            if self.dim != 3:
                raise BadSpec("harmonics3d requires dim 3")
            L = int(round(math.sqrt(n))) - 1
            if (L + 1) ** 2 != n:
                raise BadSpec(f"harmonics3d needs (L+1)^2 coefficients, got {n}")
        elif self.kind == "ellipsoid":
            if n != self.dim:
                raise BadSpec(f"ellipsoid needs {self.dim} semi-axes, got {n}")
            if any(c <= 0 for c in self.coefficients):
                raise BadSpec("ellipsoid semi-axes must be positive")


def save_spec(spec: BodySpec, path) -> None:
    doc = {"dim": spec.dim, "kind": spec.kind,
           "coefficients": list(map(float, spec.coefficients)), "label": spec.label}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_spec(path) -> BodySpec:
    """Read a body spec file; rejects unknown kinds, unknown fields, and
    coefficient counts that do not match the declared kind."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BadSpec(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise BadSpec("spec document must be a JSON object")
    allowed = {"dim", "kind", "coefficients", "label"}
    extra = set(doc) - allowed
    if extra:
        raise BadSpec(f"unknown fields in spec: {sorted(extra)}")
    missing = {"dim", "kind", "coefficients"} - set(doc)
    if missing:
        raise BadSpec(f"missing fields in spec: {sorted(missing)}")
    spec = BodySpec(dim=doc["dim"], kind=doc["kind"],
                    coefficients=tuple(doc["coefficients"]),
                    label=str(doc.get("label", "")))
    spec.validate()
    return spec


@dataclass(frozen=True)
class AffinityParams:
    """Stretch by ratio t along unit direction v, fixing the hyperplane
    through the origin orthogonal to v."""

    v: np.ndarray
    t: float

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "v", v)
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("direction v must be a unit vector (|v|-1 <= 1e-12)")
        if not (self.t > 0):
            raise BadRatio(f"affinity ratio must be positive, got {self.t}")


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes/weights on S^{n-1}; weights sum to the sphere measure."""

    dim: int
    nodes: np.ndarray          # (N, dim) unit vectors
    weights: np.ndarray        # (N,) positive
    shape: tuple               # (n,) for dim 2, (n_polar, n_az) for dim 3

    @property
    def size(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=32)
def _sphere_grid_cached(dim: int, resolution: int) -> SphereGrid:
    if dim == 2:
        theta = 2 * np.pi * np.arange(resolution) / resolution
        nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        weights = np.full(resolution, 2 * np.pi / resolution)
        shape = (resolution,)
    else:
        # Gauss-Legendre in the polar angle (clusters nodes toward the poles,
        # which keeps strongly stretched area elements integrable to near
        # machine precision), uniform in azimuth.
        x, wl = leggauss(resolution)
        theta = (x + 1) * (np.pi / 2)
        n_az = 2 * resolution
        phi = (np.arange(n_az) + 0.5) * (2 * np.pi / n_az)
        st, ct = np.sin(theta), np.cos(theta)
        nodes = np.empty((resolution * n_az, 3))
        nodes[:, 0] = np.repeat(st, n_az) * np.tile(np.cos(phi), resolution)
        nodes[:, 1] = np.repeat(st, n_az) * np.tile(np.sin(phi), resolution)
        nodes[:, 2] = np.repeat(ct, n_az)
        weights = np.repeat(wl * (np.pi / 2) * st, n_az) * (2 * np.pi / n_az)
        shape = (resolution, n_az)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereGrid(dim=dim, nodes=nodes, weights=weights, shape=shape)


def sphere_grid(dim: int, resolution: int) -> SphereGrid:
    """Uniform-measure quadrature grid on the circle / sphere."""
    if dim not in (2, 3):
        raise Unsupported(f"sphere_grid: dim must be 2 or 3, got {dim}")
    if resolution < 16:
        raise ValueError("sphere_grid: resolution must be >= 16")
    return _sphere_grid_cached(dim, int(resolution))


def tangent_frames(U: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal tangent frame at each unit vector, (N, dim, dim-1)."""
    n, dim = U.shape
    if dim == 2:
        E = np.empty((n, 2, 1))
        E[:, 0, 0] = -U[:, 1]
        E[:, 1, 0] = U[:, 0]
        return E
    anchor = np.zeros((n, 3))
    use_z = np.abs(U[:, 2]) <= 0.9
    anchor[use_z, 2] = 1.0
    anchor[~use_z, 0] = 1.0
    e1 = anchor - (np.einsum("ni,ni->n", anchor, U))[:, None] * U
    e1 /= np.linalg.norm(e1, axis=1)[:, None]
    e2 = np.cross(U, e1)
    return np.stack([e1, e2], axis=-1)


@dataclass
class SphereData:
    """Radial data of a body sampled at unit directions."""

    u: np.ndarray
    r: np.ndarray
    gs: np.ndarray = None        # ambient tangential gradient of r, (N, dim)
    area_element: np.ndarray = None
    normal: np.ndarray = None    # outward unit normal at r(u) u
    frames: np.ndarray = None
    grad_frame: np.ndarray = None    # (N, dim-1)
    hess_frame: np.ndarray = None    # (N, dim-1, dim-1)


class Body:
    """Smooth convex body, centered at its centroid, with exact derivatives."""

    def __init__(self, dim, base, linmap, kind, spec, label="", centered=True,
                 curvature_margin=None):
        self.dim = dim
        self.base = base
        self.linmap = np.asarray(linmap, dtype=float)
        self.kind = kind
        self.spec = spec
        self.label = label
        self.centered = centered
        self.curvature_margin = curvature_margin
        self._is_identity = bool(np.array_equal(self.linmap, np.eye(dim)))
        self._amap = None
        self._grid_cache = {}

    # -- gauge evaluation ---------------------------------------------------

    def gauge(self, pts: np.ndarray, order: int = 0):
        """phi and its requested derivatives at arbitrary nonzero points."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        B = self.linmap
        y = pts if self._is_identity else pts @ B.T
        phi, g, H = _poly_gauge(self.base, y, order)
        if self._is_identity or order == 0:
            return phi, g, H
        g = g @ B
        if order >= 2:
            H = np.einsum("ba,nbc,cd->nad", B, H, B)
        return phi, g, H

    def radial(self, U: np.ndarray) -> np.ndarray:
        """Radial function at unit directions."""
        phi, _, _ = self.gauge(U, order=0)
        return 1.0 / phi

    def contains(self, pts: np.ndarray, tol: float = 0.0) -> np.ndarray:
        phi, _, _ = self.gauge(pts, order=0)
        return phi <= 1.0 + tol

    def sphere_eval(self, U: np.ndarray, order: int = 1) -> SphereData:
        """Radial value plus surface data at unit directions U."""
        U = np.atleast_2d(np.asarray(U, dtype=float))
        phi, gphi, Hphi = self.gauge(U, order=max(order, 1) if order else 0)
        r = 1.0 / phi
        data = SphereData(u=U, r=r)
        if order == 0:
            return data
        gF = -gphi / phi[:, None] ** 2
        radial_part = np.einsum("ni,ni->n", gF, U)
        gs = gF - radial_part[:, None] * U
        data.gs = gs
        gs2 = np.einsum("ni,ni->n", gs, gs)
        data.area_element = r ** (self.dim - 2) * np.sqrt(r * r + gs2)
        data.normal = gphi / np.linalg.norm(gphi, axis=1)[:, None]
        if order >= 2:
            FH = (-Hphi / phi[:, None, None] ** 2
                  + 2.0 * gphi[:, :, None] * gphi[:, None, :] / phi[:, None, None] ** 3)
            E = tangent_frames(U)
            data.frames = E
            data.grad_frame = np.einsum("nid,ni->nd", E, gs)
            # Hessian on the sphere in the frame: E^T (hess F) E - (u . grad F) I
            HfE = np.einsum("nie,nij,njf->nef", E, FH, E)
            k = self.dim - 1
            HfE -= radial_part[:, None, None] * np.eye(k)[None]
            data.hess_frame = HfE
        return data

    # -- quadrature ----------------------------------------------------------

    def quad_grid(self, resolution: int | None = None) -> SphereGrid:
        """Quadrature grid adapted to this body's linear map.

        The uniform grid is pushed forward through u -> Au/|Au| (A the map from
        the base body) with the exact Jacobian det(A)/|Au|^n as weight factor,
        so integrands stay smooth in the base variable at any stretch ratio.
        """
        res = int(resolution) if resolution else DEFAULT_RESOLUTION[self.dim]
        grid = sphere_grid(self.dim, res)
        if self._is_identity:
            return grid
        key = res
        cached = self._grid_cache.get(key)
        if cached is not None:
            return cached
        A = self._affine_map()
        AU = grid.nodes @ A.T
        norms = np.linalg.norm(AU, axis=1)
        nodes = AU / norms[:, None]
        det = float(np.linalg.det(A))
        weights = grid.weights * det / norms ** self.dim
        nodes.setflags(write=False)
        weights.setflags(write=False)
        out = SphereGrid(dim=self.dim, nodes=nodes, weights=weights, shape=grid.shape)
        self._grid_cache[key] = out
        return out

    def _affine_map(self) -> np.ndarray:
        if self._amap is None:
            self._amap = np.linalg.inv(self.linmap)
        return self._amap


def _poly_gauge(poly: RadialPolynomial, y: np.ndarray, order: int):
    """Gauge phi(y) = |y| / P(y/|y|) with derivatives, for strictly positive P."""
    rho = np.linalg.norm(y, axis=1)
    psi = y / rho[:, None]
    P, a, Hp = poly.eval_batch(psi, order)
    phi = rho / P
    if order == 0:
        return phi, None, None
    dim = y.shape[1]
    adp = np.einsum("ni,ni->n", a, psi)
    gF = (a - adp[:, None] * psi) / rho[:, None]
    G = 1.0 / P
    gG = -gF * (G * G)[:, None]
    gphi = G[:, None] * psi + rho[:, None] * gG
    if order == 1:
        return phi, gphi, None
    eye = np.eye(dim)[None]
    proj = eye - psi[:, :, None] * psi[:, None, :]
    HF = np.einsum("nij,njk,nkl->nil", proj, Hp, proj)
    HF -= (psi[:, :, None] * a[:, None, :] + a[:, :, None] * psi[:, None, :]
           + adp[:, None, None] * eye)
    HF += 3.0 * adp[:, None, None] * psi[:, :, None] * psi[:, None, :]
    HF /= (rho * rho)[:, None, None]
    HG = (-HF * (G * G)[:, None, None]
          + 2.0 * gF[:, :, None] * gF[:, None, :] * (G ** 3)[:, None, None])
    Hphi = (psi[:, :, None] * gG[:, None, :] + gG[:, :, None] * psi[:, None, :]
            + G[:, None, None] * proj / rho[:, None, None]
            + rho[:, None, None] * HG)
    return phi, gphi, Hphi


# -- measurement ---------------------------------------------------------------


def volume(body: Body, resolution: int | None = None) -> float:
    """(1/n) * integral of r^n over the sphere of directions."""
    grid = body.quad_grid(resolution)
    r = body.radial(grid.nodes)
    return float(np.sum(grid.weights * r ** body.dim) / body.dim)


def centroid(body: Body, resolution: int | None = None) -> np.ndarray:
    """Volume centroid, from the radial moment formulas."""
    grid = body.quad_grid(resolution)
    r = body.radial(grid.nodes)
    vol = float(np.sum(grid.weights * r ** body.dim) / body.dim)
    mom = (grid.weights * r ** (body.dim + 1)) @ grid.nodes / (body.dim + 1)
    return mom / vol


def surface_area(body: Body, resolution: int | None = None) -> float:
    """Surface measure of the boundary from the radial area element."""
    grid = body.quad_grid(resolution)
    data = body.sphere_eval(grid.nodes, order=1)
    return float(np.sum(grid.weights * data.area_element))


def mean_radius(body: Body, resolution: int | None = None) -> float:
    grid = body.quad_grid(resolution)
    r = body.radial(grid.nodes)
    return float(np.sum(grid.weights * r) / np.sum(grid.weights))


def principal_curvatures(body: Body, U: np.ndarray) -> np.ndarray:
    """Principal curvatures of the boundary at directions U; (N, dim-1), ascending."""
    data = body.sphere_eval(U, order=2)
    r, gf, Hf = data.r, data.grad_frame, data.hess_frame
    if body.dim == 2:
        g = gf[:, 0]
        Gm = r * r + g * g
        Mm = (r * r + 2 * g * g - r * Hf[:, 0, 0]) / np.sqrt(r * r + g * g)
        return (Mm / Gm)[:, None]
    g2 = np.einsum("nd,nd->n", gf, gf)
    root = np.sqrt(r * r + g2)
    eye = np.eye(2)[None]
    Gm = (r * r)[:, None, None] * eye + gf[:, :, None] * gf[:, None, :]
    Mm = ((r * r)[:, None, None] * eye + 2 * gf[:, :, None] * gf[:, None, :]
          - r[:, None, None] * Hf) / root[:, None, None]
    # generalized symmetric 2x2 pencil det(M - kappa G) = 0
    a = Gm[:, 0, 0] * Gm[:, 1, 1] - Gm[:, 0, 1] ** 2
    b = -(Gm[:, 1, 1] * Mm[:, 0, 0] + Gm[:, 0, 0] * Mm[:, 1, 1]
          - 2 * Gm[:, 0, 1] * Mm[:, 0, 1])
    c = Mm[:, 0, 0] * Mm[:, 1, 1] - Mm[:, 0, 1] ** 2
    disc = np.sqrt(np.maximum(b * b - 4 * a * c, 0.0))
    k1 = (-b - disc) / (2 * a)
    k2 = (-b + disc) / (2 * a)
    return np.stack([k1, k2], axis=-1)


# -- construction ---------------------------------------------------------------


def _build_base(spec: BodySpec):
    if spec.kind == "fourier2d":
        return fourier2d_polynomial(spec.coefficients), np.eye(2)
    if spec.kind == "harmonics3d":
        return harmonics3d_polynomial(spec.coefficients), np.eye(3)
    axes = np.asarray(spec.coefficients, dtype=float)
    return constant_polynomial(spec.dim), np.diag(1.0 / axes)


def _check_positive(body: Body, resolution: int) -> None:
    grid = body.quad_grid(resolution)
    r = body.radial(grid.nodes)
    if not np.all(np.isfinite(r)) or np.min(r) <= 0:
        raise NonPositiveRadial(
            f"make_body: radial function not strictly positive (min {np.min(r):.3e})")


def _validate_body(body: Body, resolution: int | None = None) -> float:
    """Positivity and curvature checks on a dense grid; returns the margin."""
    res = resolution or VALIDATION_RESOLUTION[body.dim]
    _check_positive(body, res)
    grid = body.quad_grid(res)
    kappa = principal_curvatures(body, grid.nodes)
    margin = float(kappa.min())
    if margin <= CURVATURE_TOL:
        raise NonConvex(
            f"make_body: minimum principal curvature {margin:.3e} <= {CURVATURE_TOL}")
    return margin


def ray_exit(body: Body, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Distance from an interior point to the boundary along unit directions.

    Newton on phi(origin + lam*dir) = 1 from an exterior bracket; convexity of
    the gauge along the ray makes the iteration monotone.
    """
    origin = np.asarray(origin, dtype=float)
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    n = len(dirs)
    r_dir = body.radial(dirs)
    lam = (r_dir + np.linalg.norm(origin)) * 1.25
    pts = origin[None, :] + lam[:, None] * dirs
    for _ in range(60):
        phi, _, _ = body.gauge(pts, order=0)
        inside = phi <= 1.0
        if not inside.any():
            break
        lam[inside] *= 2.0
        pts = origin[None, :] + lam[:, None] * dirs
    active = np.arange(n)
    for _ in range(25):
        phi, gphi, _ = body.gauge(pts[active], order=1)
        f = phi - 1.0
        keep = np.abs(f) >= 1e-14
        if keep.any():
            sub = active[keep]
            deriv = np.einsum("ni,ni->n", gphi[keep], dirs[sub])
            lam[sub] = lam[sub] - f[keep] / deriv
            pts[sub] = origin[None, :] + lam[sub, None] * dirs[sub]
            active = sub
        else:
            break
    return lam


def fit_fourier2d(fn, order: int, samples: int = 4096) -> tuple:
    """Fourier coefficients [a0, a1, b1, ...] of a function of the angle,
    by FFT projection on a uniform grid."""
    theta = 2 * np.pi * np.arange(samples) / samples
    vals = np.asarray(fn(theta), dtype=float)
    F = np.fft.rfft(vals) / samples
    coeffs = [float(F[0].real)]
    for k in range(1, order + 1):
        coeffs.append(float(2 * F[k].real))
        coeffs.append(float(-2 * F[k].imag))
    return tuple(coeffs)


@lru_cache(maxsize=8)
def _harmonic_basis_values(L: int, resolution: int):
    grid = sphere_grid(3, resolution)
    vals = np.empty(((L + 1) ** 2, grid.size))
    pows = []
    for d in range(3):
        t = np.empty((L + 1, grid.size))
        t[0] = 1.0
        for e in range(1, L + 1):
            t[e] = t[e - 1] * grid.nodes[:, d]
        pows.append(t)
    for l in range(L + 1):
        for m in range(-l, l + 1):
            acc = np.zeros(grid.size)
            for (i, j, k), c in real_sph_harm_monomials(l, m):
                acc += c * (pows[0][i] * pows[1][j] * pows[2][k])
            vals[l * l + l + m] = acc
    vals.setflags(write=False)
    return vals


def fit_harmonics3d(fn, degree: int, resolution: int = 64) -> tuple:
    """Real spherical-harmonic coefficients (flat (L+1)^2 layout) of a function
    of unit directions, by discrete projection on the quadrature grid."""
    grid = sphere_grid(3, resolution)
    vals = np.asarray(fn(grid.nodes), dtype=float)
    basis = _harmonic_basis_values(degree, resolution)
    return tuple(float(c) for c in basis @ (grid.weights * vals))


def _fit_about(body: Body, point: np.ndarray, spec: BodySpec) -> BodySpec:
    """Refit the radial function about a new interior point, same basis kind."""
    if spec.kind == "fourier2d":
        m_in = len(spec.coefficients) // 2
        m_fit = min(max(m_in + 8, 16), 96)
        grid = sphere_grid(2, 4096)
        lam = ray_exit(body, point, grid.nodes)
        F = np.fft.rfft(lam) / grid.size
        coeffs = [float(F[0].real)]
        for k in range(1, m_fit + 1):
            coeffs.append(float(2 * F[k].real))
            coeffs.append(float(-2 * F[k].imag))
        return BodySpec(2, "fourier2d", tuple(coeffs), spec.label)
    L_in = int(round(math.sqrt(len(spec.coefficients)))) - 1
    L_fit = min(max(L_in + 4, 10), 18)
    res = 64
    grid = sphere_grid(3, res)
    lam = ray_exit(body, point, grid.nodes)
    basis = _harmonic_basis_values(L_fit, res)
    coeffs = tuple(float(c) for c in basis @ (grid.weights * lam))
    return BodySpec(3, "harmonics3d", coeffs, spec.label)


def make_body(spec: BodySpec, recenter: bool = True,
              validation_resolution: int | None = None) -> Body:
    """Build and validate a Body from its spec.

    Recentering (default on) re-expresses the radial function about the
    computed centroid by projection onto the same basis, iterated until the
    centroid norm is below 1e-10 of the mean radius.
    """
    spec.validate()
    poly, linmap = _build_base(spec)
    body = Body(spec.dim, poly, linmap, spec.kind, spec, label=spec.label,
                centered=False)
    if spec.kind == "ellipsoid":
        body.centered = True
        body.curvature_margin = _validate_body(body, validation_resolution)
        return body
    res = validation_resolution or VALIDATION_RESOLUTION[spec.dim]
    _check_positive(body, res)
    mr = mean_radius(body)
    c = centroid(body)
    if not recenter:
        body.centered = bool(np.linalg.norm(c) <= CENTERED_TOL * mr)
        body.curvature_margin = _validate_body(body, validation_resolution)
        return body
    cur_spec = spec
    for _ in range(8):
        if np.linalg.norm(c) <= 1e-12 * mr:
            break
        cur_spec = _fit_about(body, c, cur_spec)
        poly, linmap = _build_base(cur_spec)
        body = Body(cur_spec.dim, poly, linmap, cur_spec.kind, cur_spec,
                    label=spec.label, centered=False)
        _check_positive(body, res)
        c = centroid(body)
    if np.linalg.norm(c) > CENTERED_TOL * mr:
        raise BadSpec(f"make_body: recentering did not converge "
                      f"(|centroid| = {np.linalg.norm(c):.3e})")
    body.centered = True
    body.curvature_margin = _validate_body(body, validation_resolution)
    return body


# -- transformations -------------------------------------------------------------


def apply_affinity(body: Body, aff: AffinityParams) -> Body:
    """Image of the body under the orthogonal affinity a^v_t; exact pullback."""
    if not body.centered:
        raise ValueError("apply_affinity: body must be centered")
    if aff.v.shape != (body.dim,):
        raise ValueError(f"apply_affinity: direction has wrong dimension {aff.v.shape}")
    v = aff.v
    ainv = np.eye(body.dim) + (1.0 / aff.t - 1.0) * np.outer(v, v)
    out = Body(body.dim, body.base, body.linmap @ ainv, body.kind, body.spec,
               label=body.label, centered=True, curvature_margin=None)
    return out


def scale_body(body: Body, lam: float) -> Body:
    """Homothety by a positive factor."""
    if not (lam > 0):
        raise ValueError("scale factor must be positive")
    margin = None if body.curvature_margin is None else body.curvature_margin / lam
    return Body(body.dim, body.base, body.linmap / lam, body.kind, body.spec,
                label=body.label, centered=body.centered, curvature_margin=margin)


def plane_frame(v: np.ndarray) -> tuple:
    """Deterministic orthonormal basis of the hyperplane orthogonal to v
    (one vector in 2D, two in 3D)."""
    v = np.asarray(v, dtype=float)
    E = tangent_frames(v[None, :])
    return tuple(E[0, :, k] for k in range(len(v) - 1))


def section_body(body: Body, v: np.ndarray, fit_order: int = 64,
                 samples: int = 2048) -> Body:
    """Planar section through the centroid, orthogonal to v, as a 2D body
    recentered to its own in-plane centroid."""
    if body.dim != 3:
        raise Unsupported("section_body: only dim-3 bodies have planar sections")
    if not body.centered:
        raise ValueError("section_body: body must be centered")
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    b1, b2 = plane_frame(v)
    theta = 2 * np.pi * np.arange(samples) / samples
    dirs3 = np.outer(np.cos(theta), b1) + np.outer(np.sin(theta), b2)
    rho = body.radial(dirs3)
    # in-plane centroid from the raw section radial
    dth = 2 * np.pi / samples
    area2 = np.sum(rho ** 2) / 2 * dth
    cx = np.sum(rho ** 3 * np.cos(theta)) / 3 * dth / area2
    cy = np.sum(rho ** 3 * np.sin(theta)) / 3 * dth / area2
    c3 = cx * b1 + cy * b2
    lam = ray_exit(body, c3, dirs3)
    F = np.fft.rfft(lam) / samples
    coeffs = [float(F[0].real)]
    for k in range(1, fit_order + 1):
        coeffs.append(float(2 * F[k].real))
        coeffs.append(float(-2 * F[k].imag))
    label = f"{body.label}|section" if body.label else "section"
    spec2 = BodySpec(2, "fourier2d", tuple(coeffs), label)
    return make_body(spec2)
