"""The polynomial radial representation against trig/scipy references."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

try:
    from scipy.special import sph_harm_y

    def _scipy_sph(m, l, phi, theta):
        return sph_harm_y(l, m, theta, phi)
except ImportError:  # older scipy
    from scipy.special import sph_harm

    def _scipy_sph(m, l, phi, theta):
        return sph_harm(m, l, phi, theta)

from affinebodies.polyrep import (fourier2d_polynomial, harmonics3d_polynomial,
                                  real_sph_harm_monomials)


def _unit_sphere_points(n, dim, seed=0):
    rng = np.random.default_rng(seed)
    p = rng.standard_normal((n, dim))
    return p / np.linalg.norm(p, axis=1)[:, None]


@pytest.mark.parametrize("l", range(0, 9))
def test_real_harmonics_match_scipy(l):
    pts = _unit_sphere_points(40, 3, seed=l)
    theta = np.arccos(pts[:, 2])
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    for m in range(-l, l + 1):
        mine = np.zeros(len(pts))
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        for (i, j, k), c in real_sph_harm_monomials(l, m):
            mine += c * x ** i * y ** j * z ** k
        Y = _scipy_sph(abs(m), l, phi, theta)
        if m > 0:
            ref = np.sqrt(2) * (-1) ** m * Y.real
        elif m < 0:
            ref = np.sqrt(2) * (-1) ** m * Y.imag
        else:
            ref = Y.real
        assert np.abs(mine - ref).max() < 1e-13


@given(coeffs=st.lists(st.floats(-1, 1), min_size=1, max_size=9))
@settings(max_examples=40, deadline=None)
def test_fourier_poly_matches_trig_sum(coeffs):
    poly = fourier2d_polynomial(coeffs)
    theta = np.linspace(0, 2 * np.pi, 17, endpoint=False)
    pts = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    val, _, _ = poly.eval_batch(pts, order=0)
    ref = np.full_like(theta, coeffs[0])
    k, i = 1, 1
    while i < len(coeffs):
        ref += coeffs[i] * np.cos(k * theta)
        if i + 1 < len(coeffs):
            ref += coeffs[i + 1] * np.sin(k * theta)
        i += 2
        k += 1
    assert np.abs(val - ref).max() < 1e-12


@pytest.mark.parametrize("builder,dim,coeffs", [
    (fourier2d_polynomial, 2, (1.0, 0.2, -0.1, 0.05, 0.3)),
    (harmonics3d_polynomial, 3,
     tuple(np.random.default_rng(5).normal(0, 0.2, 16))),
])
def test_gradient_hessian_by_finite_differences(builder, dim, coeffs):
    poly = builder(coeffs)
    pts = _unit_sphere_points(12, dim, seed=7) * 1.1
    val, grad, hess = poly.eval_batch(pts, order=2)
    h = 1e-6
    for d in range(dim):
        e = np.zeros(dim)
        e[d] = h
        vp, gp, _ = poly.eval_batch(pts + e, order=1)
        vm, gm, _ = poly.eval_batch(pts - e, order=1)
        assert np.abs((vp - vm) / (2 * h) - grad[:, d]).max() < 1e-6
        assert np.abs((gp - gm) / (2 * h) - hess[:, :, d]).max() < 1e-5


def test_harmonic_orthonormality_on_quadrature_grid():
    from affinebodies.geometry import sphere_grid
    grid = sphere_grid(3, 32)
    vals = []
    for l in range(4):
        for m in range(-l, l + 1):
            acc = np.zeros(grid.size)
            x, y, z = grid.nodes[:, 0], grid.nodes[:, 1], grid.nodes[:, 2]
            for (i, j, k), c in real_sph_harm_monomials(l, m):
                acc += c * x ** i * y ** j * z ** k
            vals.append(acc)
    V = np.array(vals)
    G = (V * grid.weights) @ V.T
    assert np.abs(G - np.eye(len(V))).max() < 1e-12
