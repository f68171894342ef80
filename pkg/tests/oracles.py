"""Independent oracles: closed forms, brute-force searches, QMC sampling.

Everything here deliberately avoids the library's quadrature, Newton, and
classification code paths so that agreement is evidence, not tautology.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc


def spheroid_area(a: float, c: float) -> float:
    """Closed-form surface area of the spheroid x^2/a^2+y^2/a^2+z^2/c^2=1."""
    if abs(c - a) < 1e-14 * max(a, c):
        return 4.0 * np.pi * a * a
    if c > a:  # prolate
        e = np.sqrt(1.0 - (a / c) ** 2)
        return 2.0 * np.pi * a * a * (1.0 + (c / (a * e)) * np.arcsin(e))
    e = np.sqrt(1.0 - (c / a) ** 2)  # oblate
    return 2.0 * np.pi * a * a * (1.0 + ((1.0 - e * e) / e) * np.arctanh(e))


def spheroid_area_second_derivative(t: float, h: float = 1e-3) -> float:
    """A''(t) for the unit-ball family stretched to (1,1,t), by Richardson
    differences of the closed form."""
    def d2(hh):
        return (spheroid_area(1, t + hh) - 2 * spheroid_area(1, t)
                + spheroid_area(1, t - hh)) / hh ** 2
    return (4 * d2(h / 2) - d2(h)) / 3


def spheroid_iso(t: float) -> float:
    """Normalized isoperimetric ratio of the (1,1,t) spheroid."""
    V = 4 * np.pi / 3 * t
    return (V / spheroid_area(1, t) ** 1.5) * 6 * np.sqrt(np.pi)


def fourier_curvature(coeffs, theta: np.ndarray) -> np.ndarray:
    """Planar curvature of r(theta) from trig sums: (r^2+2r'^2-r r'')/(r^2+r'^2)^1.5."""
    r = np.full_like(theta, float(coeffs[0]))
    rp = np.zeros_like(theta)
    rpp = np.zeros_like(theta)
    k = 1
    i = 1
    while i < len(coeffs):
        a = float(coeffs[i])
        b = float(coeffs[i + 1]) if i + 1 < len(coeffs) else 0.0
        r += a * np.cos(k * theta) + b * np.sin(k * theta)
        rp += -a * k * np.sin(k * theta) + b * k * np.cos(k * theta)
        rpp += -a * k * k * np.cos(k * theta) - b * k * k * np.sin(k * theta)
        i += 2
        k += 1
    return (r * r + 2 * rp * rp - r * rpp) / (r * r + rp * rp) ** 1.5


def qmc_centroid(contains, lo, hi, dim: int, m: int = 21) -> np.ndarray:
    """Centroid by Sobol membership sampling over a bounding box."""
    sampler = qmc.Sobol(d=dim, scramble=False)
    pts = lo + sampler.random_base2(m) * (np.asarray(hi) - np.asarray(lo))
    mask = contains(pts)
    return pts[mask].mean(axis=0)


def _cyclic_sign_changes(diffs: np.ndarray) -> np.ndarray:
    """Sign changes around the cyclic neighbor ring; diffs has shape (..., k)."""
    s = np.sign(diffs)
    rolled = np.roll(s, -1, axis=-1)
    return np.sum(s != rolled, axis=-1)


def brute_force_counts_2d(body, n: int = 1_000_000):
    """Stable/unstable counts from dense neighbor comparison of the radial."""
    theta = (np.arange(n) + 0.37) * 2 * np.pi / n
    U = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    r = body.radial(U)
    left, right = np.roll(r, 1), np.roll(r, -1)
    S = int(np.sum((r < left) & (r < right)))
    Umax = int(np.sum((r > left) & (r > right)))
    return S, Umax


_ICOSPHERE_CACHE: dict = {}


def _icosphere(subdiv: int):
    """Vertices and faces of a subdivided icosahedron (vectorized splits)."""
    if subdiv in _ICOSPHERE_CACHE:
        return _ICOSPHERE_CACHE[subdiv]
    g = (1 + np.sqrt(5)) / 2
    verts = np.array([(-1, g, 0), (1, g, 0), (-1, -g, 0), (1, -g, 0),
                      (0, -1, g), (0, 1, g), (0, -1, -g), (0, 1, -g),
                      (g, 0, -1), (g, 0, 1), (-g, 0, -1), (-g, 0, 1)], float)
    faces = np.array([(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
                      (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
                      (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
                      (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)])
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    for _ in range(subdiv):
        e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
        e.sort(axis=1)
        uniq, inv = np.unique(e, axis=0, return_inverse=True)
        mid = verts[uniq[:, 0]] + verts[uniq[:, 1]]
        mid /= np.linalg.norm(mid, axis=1)[:, None]
        mid_idx = len(verts) + np.arange(len(uniq))
        verts = np.concatenate([verts, mid])
        F = len(faces)
        m01, m12, m20 = (mid_idx[inv[:F]], mid_idx[inv[F:2 * F]],
                         mid_idx[inv[2 * F:]])
        a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
        faces = np.concatenate([
            np.stack([a, m01, m20], 1), np.stack([b, m12, m01], 1),
            np.stack([c, m20, m12], 1), np.stack([m01, m12, m20], 1)])
    _ICOSPHERE_CACHE[subdiv] = (verts, faces)
    return verts, faces


def _neighbor_lists(subdiv: int):
    verts, faces = _icosphere(subdiv)
    e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    e = np.unique(np.concatenate([e, e[:, ::-1]]), axis=0)
    src, dst = e[:, 0], e[:, 1]
    starts = np.searchsorted(src, np.arange(len(verts) + 1))
    nbrs = [dst[starts[i]:starts[i + 1]].tolist() for i in range(len(verts))]
    return verts, nbrs


def _persistent_extrema(vals: np.ndarray, nbrs, tau: float):
    """Number of superlevel-persistent maxima and the merge (saddle) count.

    Union-find sweep of the superlevel filtration; a component dying with
    persistence <= tau is mesh noise and cancels against its saddle. Returns
    (count, merges, min_kept, max_dropped)."""
    n = len(vals)
    order = np.argsort(-vals, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    parent = np.full(n, -1, dtype=np.int64)
    birth = np.empty(n)

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    merges = 0
    min_kept, max_dropped = np.inf, 0.0
    for v in order:
        higher = [w for w in nbrs[v] if rank[w] < rank[v]]
        if not higher:
            parent[v] = v
            birth[v] = vals[v]
            continue
        roots = sorted({find(w) for w in higher}, key=lambda c: birth[c])
        best = roots[-1]
        parent[v] = best
        for c in roots[:-1]:
            pers = birth[c] - vals[v]
            if pers > tau:
                merges += 1
                min_kept = min(min_kept, pers)
            else:
                max_dropped = max(max_dropped, pers)
            parent[c] = best
    return merges + 1, merges, min_kept, max_dropped


def brute_force_counts_3d(body, subdiv: int = 7, tau_rel: float = 1e-3):
    """(S, U, N) by persistence counting of the radial on an icosphere mesh.

    Maxima and minima are persistent components of the super/sublevel
    filtrations; each merge event is a saddle. Piecewise-linear noise pairs
    have persistence at the squared-mesh scale and are cancelled by the
    threshold; a 10x separation between kept and dropped persistences is
    asserted so a borderline threshold cannot pass silently.
    """
    verts, nbrs = _neighbor_lists(subdiv)
    r = body.radial(verts)
    tau = tau_rel * (r.max() - r.min())
    Umax, merges_up, kept_u, drop_u = _persistent_extrema(r, nbrs, tau)
    S, merges_dn, kept_s, drop_s = _persistent_extrema(-r, nbrs, tau)
    kept = min(kept_u, kept_s)
    dropped = max(drop_u, drop_s, tau / 10)
    assert kept > 10 * dropped, \
        f"oracle threshold ambiguous: kept {kept:.3e} vs dropped {dropped:.3e}"
    return S, Umax, merges_up + merges_dn


def polygon_centroid(xy: np.ndarray) -> np.ndarray:
    """Shoelace centroid of a closed polygon given counterclockwise."""
    x, y = xy[:, 0], xy[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    A = 0.5 * np.sum(cross)
    cx = np.sum((x + xn) * cross) / (6 * A)
    cy = np.sum((y + yn) * cross) / (6 * A)
    return np.array([cx, cy])


def ray_march_radial(contains, origin: np.ndarray, dirs: np.ndarray,
                     r_max: float, steps: int = 2000, bisect: int = 60) -> np.ndarray:
    """Boundary distance along rays by marching plus pure bisection."""
    out = np.empty(len(dirs))
    ts = np.linspace(0.0, r_max, steps)[1:]  # skip the origin itself
    for i, d in enumerate(dirs):
        pts = origin[None, :] + ts[:, None] * d[None, :]
        inside = contains(pts)
        j = int(np.argmin(inside))  # first outside point
        if not inside[0] or inside[j]:
            raise ValueError("ray_march_radial: bad bracket")
        lo, hi = ts[j - 1], ts[j]
        for _ in range(bisect):
            mid = 0.5 * (lo + hi)
            if contains((origin + mid * d)[None, :])[0]:
                lo = mid
            else:
                hi = mid
        out[i] = 0.5 * (lo + hi)
    return out
