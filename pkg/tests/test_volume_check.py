"""Monte-Carlo range volumes, derivative and projection checks, framework conditions."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slablb.construction import ConstructionConfig, build_instance
from slablb.reduction import normalize_query
from slablb.rng import trial_rng
from slablb.volume_check import (
    CSV_HEADER,
    RangeEvaluator,
    condition_report,
    cube_points,
    derivative_bound_check,
    estimate_pair_volume,
    estimate_range_volume,
    projected_volume,
    projected_volume_check,
    sample_pairs,
    wilson_estimate,
    worker_count,
)

N = 20_000


@pytest.fixture(scope="module")
def inst():
    return build_instance(ConstructionConfig())


@pytest.fixture(scope="module")
def center_query(inst):
    return inst.queries[len(inst.queries) // 2]


def test_zero_width_has_no_volume(inst, center_query):
    est = estimate_range_volume(center_query, inst, N, seed=1, w=0.0)
    assert est.estimate <= 3 / N


def test_range_missing_the_cube_is_empty(inst):
    # shifting a01 far moves the zero set of P out of the cube
    far = normalize_query(inst.base_query.updated({(0, 1): inst.base_query[(0, 1)] + 50}))
    est = estimate_range_volume(far, inst, N, seed=2)
    assert est.hits == 0 and est.ci_high < 5 / N


def test_volume_roughly_linear_in_width(inst, center_query):
    one = estimate_range_volume(center_query, inst, 100_000, seed=3)
    two = estimate_range_volume(center_query, inst, 100_000, seed=3, w=2 * inst.w)
    assert 1.5 <= two.estimate / one.estimate <= 2.5


def test_guards(inst, center_query):
    with pytest.raises(ValueError):
        estimate_pair_volume(center_query, center_query, inst, N)
    with pytest.raises(ValueError):
        estimate_range_volume(center_query, inst, 5_000)


def test_pair_volume_below_single_volumes(inst):
    q1, q2 = inst.queries[0], inst.queries[1]
    s1 = estimate_range_volume(q1, inst, 100_000, seed=4)
    s2 = estimate_range_volume(q2, inst, 100_000, seed=4)
    pair = estimate_pair_volume(q1, q2, inst, 100_000, seed=4)
    width = max(s.ci_high - s.ci_low for s in (s1, s2))
    assert pair.estimate <= min(s1.estimate, s2.estimate) + 3 * width


def test_estimates_are_deterministic_and_thread_independent(inst, center_query, monkeypatch):
    a = estimate_range_volume(center_query, inst, 120_000, seed=5)
    monkeypatch.setenv("SLABLB_THREADS", "1")
    assert worker_count() == 1
    b = estimate_range_volume(center_query, inst, 120_000, seed=5)
    assert a == b
    assert estimate_range_volume(center_query, inst, 120_000, seed=6) != a


def test_wilson_interval_coverage_known_p():
    rng = np.random.default_rng(11)
    p, n, reps = 0.013, 10_000, 200
    hits = rng.binomial(n, p, size=reps)
    covered = sum(e.ci_low <= p <= e.ci_high for e in (wilson_estimate(int(h), n) for h in hits))
    assert covered / reps >= 0.9
    zero = wilson_estimate(0, n)
    assert zero.ci_low == 0 and 0 < zero.ci_high < 5 / n


def test_range_ci_coverage(inst, center_query):
    truth = estimate_range_volume(center_query, inst, 1_000_000, seed=999).estimate
    reps = [estimate_range_volume(center_query, inst, 10_000, seed=s) for s in range(50)]
    assert sum(e.ci_low <= truth <= e.ci_high for e in reps) / 50 >= 0.9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_float_membership_matches_exact(seed):
    inst = build_instance(ConstructionConfig())
    rng = trial_rng(seed)
    q = inst.queries[int(rng.integers(len(inst.queries)))]
    ev = RangeEvaluator(q, inst.w)
    pts = cube_points(inst, 64, seed, 0, "membership-test")
    fast = ev.member(pts)
    assert all(bool(fast[k]) == ev.exact_member(pts[k]) for k in range(len(pts)))


def test_cube_points_inside_cube(inst):
    pts = cube_points(inst, 1000, 0, 0, "x")
    c = np.array([float(v) for v in inst.base_point])
    assert np.all(np.abs(pts - c) <= inst.config.eps_p / 2)


# --- derivatives and projections ----------------------------------------------


def test_derivative_bound_on_base_query(inst):
    rep = derivative_bound_check(inst.base_query, inst, lines=300, seed=0)
    assert rep.passed
    c = rep.fitted_constants["c"]
    assert c > 0
    assert all(v >= c * (1 - 1e-12) for v in rep.measured["sampled_min_abs_derivative"] if math.isfinite(v))


def _side(inst, axis):
    c, h = float(inst.base_point[axis]), inst.config.eps_p / 2
    return c - h, c + h


def test_projection_full_side_equals_range_volume(inst, center_query):
    full = projected_volume(center_query, inst, 0, _side(inst, 0), 100_000, seed=8)
    assert full == estimate_range_volume(center_query, inst, 100_000, seed=8)


def test_projection_half_and_empty_interval(inst, center_query):
    lo, hi = _side(inst, 0)
    full = projected_volume(center_query, inst, 0, (lo, hi), 200_000, seed=9)
    half = projected_volume(center_query, inst, 0, (lo, (lo + hi) / 2), 200_000, seed=9)
    assert 0.3 <= half.estimate / full.estimate <= 0.7
    mid = (lo + hi) / 2
    assert projected_volume(center_query, inst, 0, (mid, mid), 50_000, seed=9).estimate <= 3 / 50_000


def test_projected_volume_check(inst, center_query):
    lo, hi = _side(inst, 0)
    rep = projected_volume_check(center_query, inst, 0, (lo, (lo + hi) / 2), 50_000, seed=1,
                                 slices=8, slice_samples=5_000)
    assert rep.passed
    with pytest.raises(ValueError):
        projected_volume_check(center_query, inst, 0, (lo - 1, hi), 50_000)


# --- framework conditions -----------------------------------------------------


def test_sample_pairs():
    pairs = sample_pairs(256, 64, 7)
    assert len(pairs) == 64 and all(i != j for i, j in pairs)
    assert pairs == sample_pairs(256, 64, 7)


def test_condition_report_schema(inst):
    rep, rows = condition_report(inst, samples=20_000, pairs=8, seed=3)
    for key in ("psi", "tau_grid", "m", "S_lower", "c_realized"):
        assert key in rep.params
    assert rep.params["psi"] == 8.0 and rep.params["m"] == 256
    assert set(rep.measured) >= {"condition1", "condition2", "inputs_in_range"}
    assert len(rows) == 256 + 8 and all(len(r) == len(CSV_HEADER) for r in rows)
    thr1, thr2 = rep.bound["condition1"], rep.bound["condition2"]
    assert thr1 == pytest.approx(4 * (8 / 9) * 512**0.1 / 512)
    assert thr2 == pytest.approx(4 / (512 * 8))
    assert rep.to_json()["check_id"] == "framework_conditions"


def test_condition_report_rejects_formula_instance():
    with pytest.raises(ValueError):
        condition_report(build_instance(ConstructionConfig(mode="formula")), samples=20_000)


def test_exact_fraction_width_matches_float(inst, center_query):
    ev = RangeEvaluator(center_query, Fraction(1, 64))
    assert ev.w == 1 / 64 and ev.w_exact == Fraction(1, 64)
