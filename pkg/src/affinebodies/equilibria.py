"""Static equilibria of a body resting on a plane, with respect to its centroid.

For a centered body in radial form these are exactly the critical points of
the radial function on the sphere of directions; the Morse index of the
critical point classifies the equilibrium (min = stable, max = unstable,
index 1 in 3D = saddle). Counts obey the Poincare-Hopf identity, which the
counting routines verify on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Degenerate, NotReached, PoincareHopfViolation
from .geometry import (AffinityParams, Body, apply_affinity, mean_radius,
                       plane_frame, section_body, sphere_grid)

SEED_RESOLUTION = {2: 2048, 3: 128}
DEDUP_ANGLE = 1e-6
HESSIAN_TOL = 1e-8

KIND_BY_INDEX_3D = {0: "stable", 1: "saddle", 2: "unstable"}
KIND_BY_INDEX_2D = {0: "stable", 1: "unstable"}


@dataclass
class EquilibriumPoint:
    u: np.ndarray          # direction on the sphere
    p: np.ndarray          # boundary point r(u) u
    index: int             # Morse index of r at u
    kind: str
    hessian_eigs: tuple
    grad_norm: float


@dataclass
class EquilibriumCounts:
    S: int
    U: int
    N: int
    T: int
    dim: int = 3

    def identity_holds(self) -> bool:
        if self.dim == 2:
            return self.S == self.U and self.N == 0
        return self.S + self.U - self.N == 2


def _grid_local_minima(q: np.ndarray, shape: tuple) -> np.ndarray:
    """Indices of local minima of q on the structured direction grid.

    Azimuth wraps; polar edges compare against +inf. Exact value ties (grid
    lines on a symmetry plane of the body) are broken by flat index so a tied
    basin still yields exactly one seed.
    """
    if len(shape) == 1:
        n = len(q)
        ids = np.arange(n)
        mask = np.ones(n, dtype=bool)
        for d in (-1, 1):
            qs, is_ = np.roll(q, d), np.roll(ids, d)
            mask &= (q < qs) | ((q == qs) & (ids < is_))
        return np.flatnonzero(mask)
    npol, naz = shape
    q2 = q.reshape(npol, naz)
    ids = np.arange(npol * naz).reshape(npol, naz)
    qpad = np.full((npol + 2, naz), np.inf)
    qpad[1:-1] = q2
    ipad = np.full((npol + 2, naz), npol * naz + 1)
    ipad[1:-1] = ids
    mask = np.ones((npol, naz), dtype=bool)
    for dp in (-1, 0, 1):
        for da in (-1, 0, 1):
            if dp == 0 and da == 0:
                continue
            qs = np.roll(qpad, da, axis=1)[1 + dp:npol + 1 + dp]
            is_ = np.roll(ipad, da, axis=1)[1 + dp:npol + 1 + dp]
            mask &= (q2 < qs) | ((q2 == qs) & (ids < is_))
    return np.flatnonzero(mask.reshape(-1))


def _seed_directions(body: Body, resolution: int) -> np.ndarray:
    """Newton seeds: local minima of |grad r|^2 on a uniform and (for
    transformed bodies) an adapted grid, plus the mapped axis directions."""
    seeds = []
    grids = [sphere_grid(body.dim, resolution)]
    if not body._is_identity:
        grids.append(body.quad_grid(resolution))
    for grid in grids:
        data = body.sphere_eval(grid.nodes, order=2)
        q = np.einsum("nd,nd->n", data.grad_frame, data.grad_frame)
        idx = _grid_local_minima(q, grid.shape)
        if len(idx):
            seeds.append(grid.nodes[idx])
    axes = np.eye(body.dim)
    extra = [axes, -axes]
    if not body._is_identity:
        A = body._affine_map()
        mapped = axes @ A.T
        mapped /= np.linalg.norm(mapped, axis=1)[:, None]
        extra += [mapped, -mapped]
    seeds.append(np.concatenate(extra, axis=0))
    return np.concatenate(seeds, axis=0)


def _newton_refine(body: Body, seeds: np.ndarray, gtol: float,
                   max_iter: int = 40, max_step: float = 0.3) -> np.ndarray:
    """Newton iteration for critical points of r on the sphere; diverged or
    singular seeds are dropped."""
    pts = seeds.copy()
    n = len(pts)
    alive = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    k = body.dim - 1
    for _ in range(max_iter):
        act = np.flatnonzero(alive & ~converged)
        if len(act) == 0:
            break
        data = body.sphere_eval(pts[act], order=2)
        gf, Hf, E = data.grad_frame, data.hess_frame, data.frames
        gnorm = np.linalg.norm(gf, axis=1)
        done = gnorm <= gtol
        converged[act[done]] = True
        todo = ~done
        if not todo.any():
            continue
        ia = act[todo]
        gf, Hf, E = gf[todo], Hf[todo], E[todo]
        if k == 1:
            h = Hf[:, 0, 0]
            bad = np.abs(h) < 1e-300
            delta = np.zeros_like(gf)
            delta[~bad, 0] = -gf[~bad, 0] / h[~bad]
        else:
            det = Hf[:, 0, 0] * Hf[:, 1, 1] - Hf[:, 0, 1] ** 2
            bad = np.abs(det) < 1e-300
            delta = np.empty_like(gf)
            with np.errstate(divide="ignore", invalid="ignore"):
                delta[:, 0] = -(Hf[:, 1, 1] * gf[:, 0] - Hf[:, 0, 1] * gf[:, 1]) / det
                delta[:, 1] = -(Hf[:, 0, 0] * gf[:, 1] - Hf[:, 0, 1] * gf[:, 0]) / det
        if bad.any():
            alive[ia[bad]] = False
            keep = ~bad
            ia, delta, E = ia[keep], delta[keep], E[keep]
            if len(ia) == 0:
                continue
        dn = np.linalg.norm(delta, axis=1)
        clip = np.minimum(1.0, max_step / np.maximum(dn, 1e-300))
        delta = delta * clip[:, None]
        step = np.einsum("nid,nd->ni", E, delta)
        new = pts[ia] + step
        nrm = np.linalg.norm(new, axis=1)
        ok = nrm > 1e-12
        alive[ia[~ok]] = False
        pts[ia[ok]] = new[ok] / nrm[ok, None]
    return pts[alive & converged]


def _dedup_roots(roots: np.ndarray, angle_tol: float = DEDUP_ANGLE) -> np.ndarray:
    if len(roots) == 0:
        return roots
    order = np.lexsort(tuple(np.round(roots[:, d], 9) for d in range(roots.shape[1])))
    roots = roots[order]
    kept = [roots[0]]
    cos_tol = np.cos(angle_tol)
    for r in roots[1:]:
        if all((r @ k) < cos_tol for k in kept):
            kept.append(r)
    return np.array(kept)


def find_equilibria(body: Body, tol: float = 1e-10,
                    seed_resolution: int | None = None) -> list:
    """All equilibria of the body, refined by Newton iteration on the sphere
    and classified by the Hessian of r in an orthonormal tangent frame.

    `tol` bounds the gradient norm relative to the mean radius.
    """
    if not body.centered:
        raise ValueError("find_equilibria: body must be centered")
    res = seed_resolution or SEED_RESOLUTION[body.dim]
    mr = mean_radius(body)
    gtol = tol * mr
    seeds = _seed_directions(body, res)
    roots = _newton_refine(body, seeds, gtol)
    roots = _dedup_roots(roots)
    if len(roots) == 0:
        grid = sphere_grid(body.dim, res)
        data = body.sphere_eval(grid.nodes, order=2)
        q = np.einsum("nd,nd->n", data.grad_frame, data.grad_frame)
        if float(q.max()) <= gtol * gtol * 4:
            raise Degenerate(
                "find_equilibria: radial gradient vanishes everywhere "
                "(ball-like body; every boundary point is critical)")
        return []
    data = body.sphere_eval(roots, order=2)
    kind_map = KIND_BY_INDEX_2D if body.dim == 2 else KIND_BY_INDEX_3D
    pts = []
    for i in range(len(roots)):
        Hf = data.hess_frame[i]
        if body.dim == 2:
            eigs = np.array([Hf[0, 0]])
        else:
            tr, df = Hf[0, 0] + Hf[1, 1], Hf[0, 0] - Hf[1, 1]
            disc = np.sqrt(df * df + 4 * Hf[0, 1] ** 2)
            eigs = np.array([(tr - disc) / 2, (tr + disc) / 2])
        if np.min(np.abs(eigs)) < HESSIAN_TOL * mr:
            raise Degenerate(
                f"find_equilibria: near-zero Hessian eigenvalue "
                f"{np.min(np.abs(eigs)):.3e} at direction {roots[i]}")
        index = int(np.sum(eigs < 0))
        pts.append(EquilibriumPoint(
            u=roots[i], p=data.r[i] * roots[i], index=index,
            kind=kind_map[index], hessian_eigs=tuple(float(e) for e in eigs),
            grad_norm=float(np.linalg.norm(data.grad_frame[i]))))
    pts.sort(key=lambda p: (p.index,) + tuple(np.round(p.u, 9)))
    return pts


def counts(body: Body, tol: float = 1e-10,
           seed_resolution: int | None = None) -> EquilibriumCounts:
    """Tally equilibria by kind and enforce the Poincare-Hopf identity,
    reseeding once at double grid density before failing."""
    res = seed_resolution or SEED_RESOLUTION[body.dim]
    S = U = N = 0
    for r in (res, 2 * res):
        pts = find_equilibria(body, tol, seed_resolution=r)
        S = sum(1 for p in pts if p.kind == "stable")
        U = sum(1 for p in pts if p.kind == "unstable")
        N = sum(1 for p in pts if p.kind == "saddle")
        c = EquilibriumCounts(S=S, U=U, N=N, T=S + U + N, dim=body.dim)
        if c.identity_holds() and S >= 1 and U >= 1:
            return c
    raise PoincareHopfViolation(
        f"counts: identity violated after reseed (S={S}, U={U}, N={N}, dim={body.dim})")


def counts_vs_t(body: Body, v: np.ndarray, t_grid, tol: float = 1e-10,
                seed_resolution: int | None = None) -> list:
    """(t, counts) rows along the affinity family; every row satisfies the
    dimension's count identity."""
    ts = np.asarray(list(t_grid), dtype=float)
    if np.any(np.diff(ts) <= 0):
        raise ValueError("counts_vs_t: grid must be sorted ascending")
    v = np.asarray(v, dtype=float)
    out = []
    for t in ts:
        K = apply_affinity(body, AffinityParams(v, float(t)))
        out.append((float(t), counts(K, tol, seed_resolution)))
    return out


def find_t_star(body: Body, v: np.ndarray, t_max: float,
                points_per_decade: int = 8, mirror: bool = False,
                seed_resolution: int | None = None) -> float:
    """Smallest grid ratio beyond which the unstable count stays at 2 up to
    t_max (verified pointwise on a log grid, not assumed).

    With mirror=True the scan runs at ratios 1/t and the returned threshold
    tau satisfies U(t) = 2 for every grid t <= tau.
    """
    if t_max < 10:
        raise ValueError("find_t_star: t_max must be >= 10")
    v = np.asarray(v, dtype=float)
    n = int(np.ceil(np.log10(t_max) * points_per_decade)) + 1
    grid = np.logspace(0.0, np.log10(t_max), n)
    ratios = 1.0 / grid if mirror else grid
    Us = []
    for t in ratios:
        K = apply_affinity(body, AffinityParams(v, float(t)))
        Us.append(counts(K, seed_resolution=seed_resolution).U)
    Us = np.array(Us)
    if Us[-1] != 2:
        raise NotReached(
            f"find_t_star: U != 2 at the end of the window "
            f"(U={Us[-1]} at t={ratios[-1]:g}); trailing counts {list(Us[-5:])}")
    bad = np.flatnonzero(Us != 2)
    i_star = 0 if len(bad) == 0 else int(bad[-1]) + 1
    return float(ratios[i_star])


def equilibria_2d_graph(f, fprime, a: float, b: float, t: float,
                        tol: float = 1e-10, n_scan: int = 4096) -> np.ndarray:
    """Roots of x + t^2 f(x) f'(x) on (a, b) for a concave positive graph f.

    Sign-change scan on n_scan subintervals followed by bisection; residuals
    are at most tol*(b-a).
    """
    if not (t > 0):
        raise ValueError("equilibria_2d_graph: t must be positive")
    xs = np.linspace(a, b, n_scan + 1)[1:-1]
    R = xs + t * t * np.asarray(f(xs)) * np.asarray(fprime(xs))
    abs_tol = tol * (b - a)
    roots = [float(x) for x, r in zip(xs, R) if r == 0.0]
    sign_flip = np.flatnonzero(R[:-1] * R[1:] < 0)
    for i in sign_flip:
        lo, hi = xs[i], xs[i + 1]
        rlo = R[i]
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            rm = mid + t * t * float(f(mid)) * float(fprime(mid))
            if abs(rm) <= abs_tol:
                lo = hi = mid
                break
            if (rm > 0) == (rlo > 0):
                lo, rlo = mid, rm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return np.array(sorted(roots))


def graph_system_residual(body: Body, v: np.ndarray, t: float,
                          u: np.ndarray) -> np.ndarray:
    """Residuals x_i + t^2 f (d_i f) of the graph-form equilibrium system at
    directions u of the stretched body K^v(t); f is the graph height of the
    original body over the fixed hyperplane."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    U = np.atleast_2d(np.asarray(u, dtype=float))
    K = apply_affinity(body, AffinityParams(v, float(t)))
    r_t = K.radial(U)
    p = r_t[:, None] * U
    sv = p @ v
    q = p + (1.0 / t - 1.0) * sv[:, None] * v[None, :]
    h = q @ v
    _, gphi, _ = body.gauge(q, order=1)
    denom = gphi @ v
    scale = np.linalg.norm(gphi, axis=1)
    if np.any(np.abs(denom) < 1e-8 * scale):
        raise ValueError(
            "graph_system_residual: equilibrium lies on the silhouette; "
            "the graph parametrization degenerates there")
    frame = plane_frame(v)
    res = np.empty((len(U), body.dim - 1))
    for i, bvec in enumerate(frame[: body.dim - 1]):
        x_i = q @ bvec
        df_i = -(gphi @ bvec) / denom
        res[:, i] = x_i + t * t * h * df_i
    return res


@dataclass
class CorollaryReport:
    """Large-t count structure versus the central section."""

    passed: bool
    t: float
    counts_transformed: EquilibriumCounts
    counts_section: EquilibriumCounts


def corollary_check(body: Body, v: np.ndarray, t: float = 50.0,
                    seed_resolution: int | None = None) -> CorollaryReport:
    """At large t the stretched body has 2 unstable points, stable count equal
    to the section's stable count, and saddle count equal to the section's
    unstable count."""
    if body.dim != 3:
        raise ValueError("corollary_check: requires a dim-3 body")
    v = np.asarray(v, dtype=float)
    K = apply_affinity(body, AffinityParams(v, float(t)))
    ct = counts(K, seed_resolution=seed_resolution)
    section = section_body(body, v)
    cs = counts(section, seed_resolution=seed_resolution)
    passed = (ct.U == 2) and (ct.S == cs.S) and (ct.N == cs.U)
    return CorollaryReport(passed=passed, t=float(t),
                           counts_transformed=ct, counts_section=cs)
