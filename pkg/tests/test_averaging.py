"""Field sampling, hyperbolic binning, and the critical number."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinebodies import (AveragingConfig, FieldTable, bin_averages,
                          conjecture_report, critical_number, sample_field)
from affinebodies.averaging import _s_grid


def _synthetic_table(I, T, w=None):
    I = np.asarray(I, dtype=float)
    T = np.asarray(T, dtype=int)
    n = len(I)
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    t = np.ones(n)
    return FieldTable(label="synthetic", dim=2, v=np.zeros((n, 2)),
                      sphere_weight=w, s=np.arcsinh(t), t=t,
                      s_weight=np.ones(n), I=I, T=T)


def test_s_grid_weight_identity():
    # the hyperbolic substitution is exact: total t-axis weight is 2*s_max
    for s_max, steps in ((4.0, 65), (3.0, 33), (5.5, 48)):
        s, t, w = _s_grid(s_max, steps)
        assert abs(w.sum() - 2 * s_max) < 1e-12
        assert np.all(t > 0)
        assert t.min() == pytest.approx(1.0 / np.sinh(s_max), rel=1e-14)
        assert t.max() == pytest.approx(np.sinh(s_max), rel=1e-14)


def test_s_grid_log_symmetric():
    _, t, _ = _s_grid(4.0, 65)
    ts = np.sort(t)
    assert np.abs(np.log(ts) + np.log(ts[::-1])).max() < 1e-12


def test_sample_field_2d_rows(fmix):
    table = sample_field(fmix, sphere_res=16, s_max=3.0, s_steps=33)
    assert table.rows == 16 * 33
    assert np.all(table.I > 0) and np.all(table.I <= 1 + 1e-9)
    assert np.all(table.T >= 2)
    assert np.all(table.T % 2 == 0)          # dim 2: S = U
    assert np.abs(np.sinh(table.s) - table.t).max() <= 1e-14 * np.maximum(1, table.t).max()
    assert table.meta["excluded_rows"] == 0


def test_sample_field_3d_rows(ell3):
    table = sample_field(ell3, sphere_res=4, s_max=3.0, s_steps=33,
                         resolution=48, seed_resolution=48)
    assert table.rows == 4 * 8 * 33
    assert np.all(table.I > 0) and np.all(table.I <= 1 + 1e-9)
    assert np.all(table.T >= 2)
    assert np.all(table.T % 2 == 0)          # centrally symmetric body
    # spot-check a few rows against direct evaluation
    from affinebodies import AffinityParams, apply_affinity, counts, iso_ratio
    rng = np.random.default_rng(3)
    for i in rng.integers(0, table.rows, 5):
        K = apply_affinity(ell3, AffinityParams(table.v[i], float(table.t[i])))
        assert counts(K, seed_resolution=48).T == table.T[i]
        assert abs(iso_ratio(K, 48) - table.I[i]) < 1e-12


def test_sample_field_validates_window(fmix):
    with pytest.raises(ValueError):
        sample_field(fmix, 16, s_max=2.0, s_steps=33)
    with pytest.raises(ValueError):
        sample_field(fmix, 16, s_max=4.0, s_steps=16)


def test_bin_averages_k1_is_global_mean():
    tab = _synthetic_table([0.1, 0.5, 0.9], [4, 6, 8], w=[1.0, 2.0, 1.0])
    ba = bin_averages(tab, 1)
    assert ba.t_values[0] == pytest.approx((4 + 12 + 8) / 4.0)
    assert ba.is_monotone()


def test_bin_averages_top_bin_includes_one():
    tab = _synthetic_table([1.0, 0.999, 0.2], [2, 4, 8])
    ba = bin_averages(tab, 2)
    assert ba.t_values[1] == pytest.approx(3.0)
    assert ba.t_values[0] == pytest.approx(8.0)


def test_bin_averages_empty_bin_undefined():
    tab = _synthetic_table([0.9, 0.95], [4, 6])
    ba = bin_averages(tab, 4)
    assert ba.t_values[:3] == [None, None, None]
    assert ba.occupancy[0] == 0.0
    assert ba.is_monotone()  # judged on the defined entries only


@given(st.lists(st.tuples(st.floats(0.01, 1.0), st.integers(2, 40)),
                min_size=1, max_size=60))
@settings(max_examples=60, deadline=None)
def test_bin_mean_bounds(rows):
    I = [r[0] for r in rows]
    T = [r[1] for r in rows]
    tab = _synthetic_table(I, T)
    for k in (1, 2, 5):
        ba = bin_averages(tab, k)
        idx = np.minimum((tab.I * k).astype(int), k - 1)
        for i, ti in enumerate(ba.t_values):
            if ti is None:
                continue
            sel = tab.T[idx == i]
            assert sel.min() - 1e-12 <= ti <= sel.max() + 1e-12


def test_critical_number_monotone_synthetic():
    rng = np.random.default_rng(0)
    I = rng.uniform(0.01, 1.0, 400)
    T = np.round(4 + 4 * I).astype(int)
    tab = _synthetic_table(I, T)
    best = critical_number(tab, k_max=8)
    assert best.k_star == 8


def test_critical_number_k1_always_qualifies():
    tab = _synthetic_table([0.2, 0.4, 0.9], [8, 2, 4])  # decreasing in I
    best = critical_number(tab, k_max=4)
    assert best.k_star >= 1


def test_conjecture_report_structure_and_determinism(ellipse, fmix):
    cfg = AveragingConfig(sphere_res=16, s_max=3.0, s_steps=33, k_max=6)
    r1 = conjecture_report([ellipse, fmix], cfg)
    r2 = conjecture_report([ellipse, fmix], cfg)
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    for entry in r1["bodies"]:
        assert "error" not in entry
        assert entry["k_star"] >= 1
        assert set(entry["tables"]) == {"2", "3", "4"}
        two = entry["tables"]["2"]
        defined = [x for x in two["t_i"] if x is not None]
        assert all(b >= a for a, b in zip(defined, defined[1:]))


def test_conjecture_report_isolates_failures(ellipse, ball):
    cfg = AveragingConfig(sphere_res=16, s_max=3.0, s_steps=33,
                          retry_doubling=False)
    rep = conjecture_report([ball, ellipse], cfg)
    assert "error" in rep["bodies"][0]          # every ratio of a ball is a ball
    assert "error" not in rep["bodies"][1]
