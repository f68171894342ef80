"""Isoperimetric ratio, derivative, maximum, quasiconcavity, and A''."""

import numpy as np
import pytest

from affinebodies import (AffinityParams, BodySpec, IsoCurve, apply_affinity,
                          check_quasiconcave, iso_curve, iso_derivative,
                          iso_max, iso_ratio, make_body, scale_body,
                          surface_second_derivative)
from affinebodies.errors import BracketNotFound
from affinebodies.isoperimetric import area_derivative, iso_exponent

from conftest import EZ
from oracles import spheroid_area, spheroid_area_second_derivative, spheroid_iso


def test_ball_and_disk_score_one(ball, disk):
    assert abs(iso_ratio(ball) - 1.0) < 1e-12
    assert abs(iso_ratio(disk) - 1.0) < 1e-12


def test_prolate_iso_matches_closed_form(prolate):
    ref = (4 * np.pi * 2 / 3) / spheroid_area(1, 2) ** 1.5 * 6 * np.sqrt(np.pi)
    assert ref < 1.0
    assert abs(iso_ratio(prolate) - ref) < 1e-10


def test_iso_bound_and_scale_invariance(zoo):
    for b in zoo:
        val = iso_ratio(b)
        assert val <= 1 + 1e-9, b.label
        for lam in (0.5, 2.0):
            assert abs(iso_ratio(scale_body(b, lam)) - val) < 1e-10, b.label


def test_curve_single_point_matches_iso_ratio(ell3):
    c = iso_curve(ell3, EZ, [1.0])
    assert abs(c.I[0] - iso_ratio(ell3)) < 1e-14


def test_ball_curve_endpoints_match_spheroid_oracle(ball):
    # t = 0.5 gives the oblate aspect-2 spheroid, t = 2 the prolate one;
    # these are different shapes with different ratios (no t <-> 1/t mirror)
    c = iso_curve(ball, EZ, [0.5, 1.0, 2.0])
    assert abs(c.I[0] - spheroid_iso(0.5)) < 1e-10
    assert abs(c.I[2] - spheroid_iso(2.0)) < 1e-10
    assert c.I[0] < 1 and c.I[2] < 1
    assert abs(c.I[1] - 1.0) < 1e-12
    c.validate()


def test_decreasing_tail(ell3):
    c = iso_curve(ell3, EZ, [10.0, 100.0, 1000.0])
    assert c.I[0] > c.I[1] > c.I[2]


def test_directional_symmetry_exact(ell3):
    grid = [0.5, 1.0, 2.0]
    a = iso_curve(ell3, EZ, grid)
    b = iso_curve(ell3, -EZ, grid)
    assert np.array_equal(a.I, b.I) and np.array_equal(a.A, b.A)


def test_empty_grid_rejected(ell3):
    with pytest.raises(ValueError):
        iso_curve(ell3, EZ, [])


def test_derivative_ball_is_zero_at_one(ball):
    assert abs(iso_derivative(ball, EZ, 1.0)) < 1e-6


def test_derivative_prolate_negative_along_long_axis(prolate):
    val = iso_derivative(prolate, EZ, 1.0)
    # oracle: differentiate the closed-form spheroid curve I(t) ~ (1,1,2t)
    h = 1e-5
    ref = (spheroid_iso(2 * (1 + h)) - spheroid_iso(2 * (1 - h))) / (2 * h)
    assert val < 0
    assert abs(val - ref) < 1e-6


def test_derivative_consistent_with_curve_differences(wobbly):
    t0, h = 1.3, 1e-4
    c = iso_curve(wobbly, EZ, [t0 - h, t0 + h])
    fd = (c.I[1] - c.I[0]) / (2 * h)
    assert abs(iso_derivative(wobbly, EZ, t0) - fd) < 1e-6


def test_iso_max_ball(ball):
    t_star, i_star = iso_max(ball, EZ)
    assert abs(t_star - 1.0) < 1e-6
    assert abs(i_star - 1.0) < 1e-6


def test_iso_max_prolate_restores_ball(prolate):
    t_star, i_star = iso_max(prolate, EZ)
    assert abs(t_star - 0.5) < 1e-6
    assert abs(i_star - 1.0) < 1e-6


def test_iso_max_residual_and_local_maximality(wobbly):
    t_star, i_star = iso_max(wobbly, EZ)
    assert abs(iso_derivative(wobbly, EZ, t_star)) < 1e-6
    c = iso_curve(wobbly, EZ, [0.8 * t_star, t_star, 1.25 * t_star])
    assert c.I[1] > c.I[0] and c.I[1] > c.I[2]
    assert abs(c.I[1] - i_star) < 1e-12


def test_numerator_strictly_decreasing(ell3):
    s = iso_exponent(3)
    ts = np.logspace(-2, 2, 17)
    vals = []
    for t in ts:
        A = __import__("affinebodies").surface_area(
            apply_affinity(ell3, AffinityParams(EZ, float(t))))
        vals.append(A - s * t * area_derivative(ell3, EZ, float(t)))
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_limits_far_below_peak(fmix):
    v = np.array([0.0, 1.0])
    t_star, i_star = iso_max(fmix, v)
    c = iso_curve(fmix, v, [1e-3, 1e3])
    assert c.I[0] < 0.5 * i_star and c.I[1] < 0.5 * i_star


def test_quasiconcave_ball_curve(ball):
    ts = np.logspace(-2, 2, 81)
    rep = check_quasiconcave(iso_curve(ball, EZ, ts))
    assert rep.passed and rep.sign_changes == 1 and not rep.violations


def test_quasiconcave_synthetic_counterexample():
    curve = IsoCurve(v=np.array([0.0, 1.0]), t=np.array([1.0, 2.0, 3.0, 4.0]),
                     V=np.ones(4), A=np.ones(4),
                     I=np.array([0.2, 0.5, 0.3, 0.6]), s=2.0, normalizer=1.0)
    rep = check_quasiconcave(curve)
    assert not rep.passed
    assert rep.sign_changes == 3
    assert len(rep.violations) == 1


def test_quasiconcave_needs_three_samples(ball):
    c = iso_curve(ball, EZ, [0.5, 2.0])
    with pytest.raises(ValueError):
        check_quasiconcave(c)


def test_second_derivative_ball_matches_oracle(ball):
    val = surface_second_derivative(ball, EZ, 1.0)
    ref = spheroid_area_second_derivative(1.0)
    assert abs(val / ref - 1) < 1e-5


def test_second_derivative_positive_and_cross_checked(zoo):
    # cross_check=True raises MethodDisagreement beyond 1e-4 relative, so a
    # clean return already certifies the two routes agree
    for b in zoo:
        v = EZ if b.dim == 3 else np.array([0.0, 1.0])
        for t in (0.5, 1.0, 2.0):
            assert surface_second_derivative(b, v, t) > 0, (b.label, t)


def test_bracket_not_found_on_tiny_window(ell3):
    with pytest.raises(BracketNotFound):
        iso_max(ell3, EZ, bracket=(200.0, 400.0))
