"""Monte-Carlo checks of the framework conditions on a materialised instance.

All volumes are fractions of the input cube (side eps_p around the base
point). A sample b belongs to the range of query a at width w iff
0 <= P(a, b) <= -f(a, b, w). Membership runs in floats; samples within
``BOUNDARY_TOL`` of either boundary are re-decided in exact arithmetic.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.stats import binomtest

from .construction import ConstructionInstance, box_bounds, box_min_abs
from .reduction import FlatParams, b_index, intersection_poly
from .report import VerificationReport, status_of
from .rng import trial_rng

BOUNDARY_TOL = 1e-12
BATCH_SIZE = 50_000
MIN_SAMPLES = 10_000
CONFIDENCE = 0.95


@dataclass(frozen=True)
class VolumeEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    samples: int
    seed: int
    hits: int

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "ci_low": self.ci_low, "ci_high": self.ci_high,
                "samples": self.samples, "seed": self.seed, "hits": self.hits}


def wilson_estimate(hits: int, samples: int, seed: int = 0) -> VolumeEstimate:
    ci = binomtest(hits, samples).proportion_ci(confidence_level=CONFIDENCE, method="wilson")
    est = hits / samples
    # clamp float noise so ci_low <= estimate <= ci_high always holds
    return VolumeEstimate(est, min(ci.low, est), max(ci.high, est), samples, seed, hits)


def worker_count() -> int:
    cap = os.environ.get("SLABLB_THREADS")
    n = os.cpu_count() or 1
    return max(1, min(n, int(cap))) if cap else n


# ---------------------------------------------------------------------------
# sampling and membership


def cube_points(inst: ConstructionInstance, count: int, seed: int, batch: int, stream: str,
                eps_p: float | None = None) -> np.ndarray:
    eps = inst.config.eps_p if eps_p is None else eps_p
    rng = trial_rng(seed, batch, stream)
    center = np.array([float(c) for c in inst.base_point])
    return center + eps * (rng.random((count, center.size)) - 0.5)


class RangeEvaluator:
    """Float membership with exact fallback for one query at one width."""

    def __init__(self, query: FlatParams, w):
        ip = intersection_poly(query)
        self.P, self.f = ip.P, ip.f
        self.w = float(w)
        self.w_exact = Fraction(w)
        self._p = ip.P.to_float_evaluator()
        self._f = ip.f.to_float_evaluator()

    def values(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        p = self._p(pts)
        upper = -self._f(np.column_stack([pts, np.full(len(pts), self.w)]))
        return p, upper

    def member(self, pts: np.ndarray) -> np.ndarray:
        p, upper = self.values(pts)
        inside = (p >= 0) & (p <= upper)
        near = (np.abs(p) < BOUNDARY_TOL) | (np.abs(p - upper) < BOUNDARY_TOL)
        for k in np.flatnonzero(near):
            inside[k] = self.exact_member(pts[k])
        return inside

    def exact_member(self, pt: np.ndarray) -> bool:
        b = [Fraction(float(v)) for v in pt]
        p = self.P.eval(b)
        return 0 <= p <= -self.f.eval(b + [self.w_exact])


def _batches(samples: int) -> list[tuple[int, int]]:
    full, rest = divmod(samples, BATCH_SIZE)
    sizes = [BATCH_SIZE] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _run_batches(samples: int, job: Callable[[int, int], np.ndarray]) -> np.ndarray:
    """Sum per-batch count vectors; batches are independent so order does not matter."""
    plan = _batches(samples)
    workers = min(worker_count(), len(plan))
    if workers <= 1:
        parts = [job(b, n) for b, n in plan]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bn: job(*bn), plan))
    return np.sum(parts, axis=0)


def _width(inst: ConstructionInstance, w) -> float:
    return inst.w if w is None else w


def estimate_range_volume(query: FlatParams, inst: ConstructionInstance, samples: int = 200_000,
                          seed: int = 0, w=None) -> VolumeEstimate:
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    ev = RangeEvaluator(query, _width(inst, w))

    def job(batch: int, n: int) -> np.ndarray:
        return np.array([ev.member(cube_points(inst, n, seed, batch, "volume")).sum()])

    return wilson_estimate(int(_run_batches(samples, job)[0]), samples, seed)


def estimate_pair_volume(q1: FlatParams, q2: FlatParams, inst: ConstructionInstance,
                         samples: int = 200_000, seed: int = 0, w=None) -> VolumeEstimate:
    if q1 == q2:
        raise ValueError("pair volume needs two different queries")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    e1, e2 = RangeEvaluator(q1, _width(inst, w)), RangeEvaluator(q2, _width(inst, w))

    def job(batch: int, n: int) -> np.ndarray:
        pts = cube_points(inst, n, seed, batch, "volume")
        return np.array([(e1.member(pts) & e2.member(pts)).sum()])

    return wilson_estimate(int(_run_batches(samples, job)[0]), samples, seed)


# ---------------------------------------------------------------------------
# derivative and projection checks


def _half(inst: ConstructionInstance, eps_p: float | None = None) -> Fraction:
    return Fraction(str(inst.config.eps_p if eps_p is None else eps_p)) / 2


def derivative_box_min(query: FlatParams, inst: ConstructionInstance, eps_p: float | None = None) -> list[Fraction]:
    """Exact min over the cube of |dP/db_k| for every k (corner evaluation)."""
    P = intersection_poly(query).P
    return [box_min_abs(P.diff(k), inst.base_point, _half(inst, eps_p)) for k in range(P.num_vars)]


def breakdown_scale(query: FlatParams, inst: ConstructionInstance, max_doublings: int = 12) -> float | None:
    """Smallest eps_p * 2^j at which some partial derivative can vanish in the cube."""
    eps = inst.config.eps_p
    for _ in range(max_doublings + 1):
        if min(derivative_box_min(query, inst, eps)) == 0:
            return eps
        eps *= 2
    return None


def derivative_bound_check(query: FlatParams, inst: ConstructionInstance, lines: int = 1000,
                           seed: int = 0, points_per_line: int = 16) -> VerificationReport:
    """Directional derivatives of P along random axis-parallel lines through the cube.

    P is multilinear, so dP/db_k does not depend on b_k and its exact minimum
    over the cube is attained at a corner; that minimum is the constant every
    sampled value must respect.
    """
    P = intersection_poly(query).P
    nb = P.num_vars
    at_base = [P.diff(k).eval(inst.base_point) for k in range(nb)]
    box_min = derivative_box_min(query, inst)
    grads = [P.diff(k).to_float_evaluator() for k in range(nb)]
    rng = trial_rng(seed, 0, "derivative-lines")
    axes = rng.integers(0, nb, size=lines)
    anchors = cube_points(inst, lines, seed, 1, "derivative-lines")
    eps = inst.config.eps_p
    sampled = np.full(nb, math.inf)
    for axis, anchor in zip(axes, anchors):
        pts = np.repeat(anchor[None, :], points_per_line, axis=0)
        pts[:, axis] = float(inst.base_point[axis]) + eps * (np.linspace(0, 1, points_per_line) - 0.5)
        sampled[axis] = min(sampled[axis], float(np.abs(grads[axis](pts)).min()))
    c = min(box_min)
    seen = sampled[np.isfinite(sampled)]
    ok = c > 0 and all(v != 0 for v in at_base) and bool(np.all(seen >= float(c) * (1 - 1e-12)))
    return VerificationReport(
        "derivative_bound", status_of(ok),
        params={"lines": lines, "points_per_line": points_per_line, "seed": seed, "eps_p": eps},
        measured={"sampled_min_abs_derivative": [float(v) for v in sampled],
                  "partials_at_base_point": at_base,
                  "breakdown_eps_p": breakdown_scale(query, inst)},
        bound="min |dP/db_k| over the cube >= c > 0",
        fitted_constants={"c": float(c), "per_axis_box_min": [float(v) for v in box_min]},
    )


def _projection_axis(query: FlatParams, inst: ConstructionInstance, avoid: int) -> tuple[int, Fraction, Fraction]:
    """A second-block axis j != avoid (the width factor does not depend on it)
    with the largest exact box minimum of |dP/db_j|, and max of the width factor."""
    t, d = query.t, query.d
    ip = intersection_poly(query)
    half = _half(inst)
    cands = [b_index(t, d, t + 1, j) for j in range(1, d - t + 1)]
    cands = [j for j in cands if j != avoid]
    mins = {j: box_min_abs(ip.P.diff(j), inst.base_point, half) for j in cands}
    j = max(cands, key=lambda k: mins[k])
    return j, mins[j], box_bounds(ip.minor, inst.base_point, half)[1]


def projection_constant(query: FlatParams, inst: ConstructionInstance, axis: int) -> float:
    """c with Vol(r_I) / Vol(cube) <= c w |I| / eps_p.

    Along b_j the range has length at most w max(minor) / min|dP/db_j|, so
    the fraction is at most (max minor / min|dP/db_j|) / eps_p * w |I| / eps_p.
    """
    _, lo, hi = _projection_axis(query, inst, axis)
    if lo == 0:
        return math.inf
    return float(hi / lo) / inst.config.eps_p


def projected_volume(query: FlatParams, inst: ConstructionInstance, axis: int, interval: Sequence[float],
                     samples: int = 200_000, seed: int = 0, w=None) -> VolumeEstimate:
    lo, hi = (float(v) for v in interval)
    ev = RangeEvaluator(query, _width(inst, w))

    def job(batch: int, n: int) -> np.ndarray:
        pts = cube_points(inst, n, seed, batch, "volume")
        sel = (pts[:, axis] >= lo) & (pts[:, axis] <= hi)
        return np.array([(ev.member(pts) & sel).sum()])

    return wilson_estimate(int(_run_batches(samples, job)[0]), samples, seed)


def projected_volume_check(query: FlatParams, inst: ConstructionInstance, axis: int,
                           interval: Sequence[float], samples: int = 200_000, seed: int = 0,
                           slices: int = 32, slice_samples: int = 20_000) -> VerificationReport:
    """Projection bound on one side of the cube plus the 2D-slice area bound."""
    eps = inst.config.eps_p
    center = float(inst.base_point[axis])
    lo, hi = (float(v) for v in interval)
    if not (center - eps / 2 - 1e-15 <= lo <= hi <= center + eps / 2 + 1e-15):
        raise ValueError("interval must lie inside the cube side")
    w = inst.w
    c = projection_constant(query, inst, axis)
    est = projected_volume(query, inst, axis, (lo, hi), samples, seed)
    bound = c * w * (hi - lo) / eps

    # 2D slices through the chosen b_j axis and a random other axis
    j, _, _ = _projection_axis(query, inst, axis)
    ev = RangeEvaluator(query, w)
    rng = trial_rng(seed, 0, "slices")
    nb = len(inst.base_point)
    worst = 0.0
    for s in range(slices):
        other = int(rng.choice([k for k in range(nb) if k != j]))
        anchor = cube_points(inst, 1, seed, s, "slice-anchor")[0]
        pts = np.repeat(anchor[None, :], slice_samples, axis=0)
        uv = rng.random((slice_samples, 2)) - 0.5
        pts[:, j] = float(inst.base_point[j]) + eps * uv[:, 0]
        pts[:, other] = float(inst.base_point[other]) + eps * uv[:, 1]
        worst = max(worst, float(ev.member(pts).mean()))
    # area <= eps (w max minor / min|dP/db_j|), i.e. fraction <= c w
    slice_bound = c * w
    slice_ci = wilson_estimate(int(round(worst * slice_samples)), slice_samples)
    ok = est.ci_low <= bound and slice_ci.ci_low <= slice_bound
    return VerificationReport(
        "projected_volume", status_of(ok),
        params={"axis": axis, "interval": [lo, hi], "samples": samples, "seed": seed,
                "slices": slices, "slice_samples": slice_samples, "w": w, "eps_p": eps},
        measured={"volume": est.to_json(), "max_slice_area_fraction": worst},
        bound={"volume": bound, "slice_area_fraction": slice_bound},
        fitted_constants={"c": c},
    )


# ---------------------------------------------------------------------------
# the two framework conditions


CSV_HEADER = ["check_id", "query_i", "query_j", "estimate", "ci_low", "ci_high", "threshold", "pass"]


def sample_pairs(m: int, pairs: int, seed: int) -> list[tuple[int, int]]:
    rng = trial_rng(seed, 0, "pairs")
    out: list[tuple[int, int]] = []
    seen = set()
    limit = m * (m - 1) // 2
    while len(out) < min(pairs, limit):
        i, j = sorted(int(v) for v in rng.choice(m, size=2, replace=False))
        if (i, j) not in seen:
            seen.add((i, j))
            out.append((i, j))
    return out


def condition_report(inst: ConstructionInstance, samples: int = 200_000, pairs: int = 64,
                     seed: int = 0, kappa: float = 4.0, pair_quorum: float = 0.95
                     ) -> tuple[VerificationReport, list[list]]:
    """Condition 1 on every query, Condition 2 on sampled pairs; returns (report, csv rows)."""
    cfg = inst.config
    queries = inst.queries
    if not queries:
        raise ValueError("instance has no materialised queries")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    m, n = len(queries), cfg.n
    c_real = math.log(m) / math.log(n) if m > 1 and n > 1 else 0.0
    thr1 = 4 * c_real * cfg.Q / n
    thr2 = kappa / (n * cfg.psi)
    pair_idx = sample_pairs(m, pairs, seed)
    evals = [RangeEvaluator(q, cfg.w) for q in queries]

    def job(batch: int, size: int) -> np.ndarray:
        pts = cube_points(inst, size, seed, batch, "conditions")
        masks = np.stack([e.member(pts) for e in evals])
        singles = masks.sum(axis=1)
        both = np.array([(masks[i] & masks[j]).sum() for i, j in pair_idx], dtype=np.int64)
        return np.concatenate([singles, both])

    counts = _run_batches(samples, job)
    rows, c1_fail, c2_pass = [], [], 0
    singles = [wilson_estimate(int(k), samples, seed) for k in counts[:m]]
    for i, est in enumerate(singles):
        ok = est.estimate >= thr1
        if not ok:
            c1_fail.append(i)
        rows.append(["condition1", i, "", est.estimate, est.ci_low, est.ci_high, thr1, ok])
    pair_est = []
    for (i, j), k in zip(pair_idx, counts[m:]):
        est = wilson_estimate(int(k), samples, seed)
        ok = est.ci_high <= thr2
        c2_pass += ok
        pair_est.append(est)
        rows.append(["condition2", i, j, est.estimate, est.ci_low, est.ci_high, thr2, ok])

    in_range = [sum(ev.member(np.array([[float(v) for v in b] for b in inst.inputs])))
                for ev in evals] if inst.inputs else []
    frac2 = c2_pass / len(pair_idx) if pair_idx else 1.0
    ok = not c1_fail and frac2 >= pair_quorum
    report = VerificationReport(
        "framework_conditions", status_of(ok),
        params={"n": n, "Q": cfg.Q, "psi": cfg.psi, "w": cfg.w, "eps_p": cfg.eps_p, "C": cfg.C,
                "tau_grid": inst.tau_grid, "m": m, "S_lower": m * cfg.Q, "c_realized": c_real,
                "samples": samples, "pairs": len(pair_idx), "seed": seed, "kappa": kappa,
                "pair_quorum": pair_quorum},
        measured={
            "condition1": {"queries": m, "failures": len(c1_fail), "failed_queries": c1_fail[:20],
                           "min_estimate": min(e.estimate for e in singles),
                           "max_estimate": max(e.estimate for e in singles), "pass": not c1_fail},
            "condition2": {"pairs": len(pair_idx), "passed": c2_pass, "fraction": frac2,
                           "max_ci_high": max((e.ci_high for e in pair_est), default=0.0),
                           "pass": frac2 >= pair_quorum},
            "inputs_in_range": {"min": min(in_range, default=0), "max": max(in_range, default=0),
                                "expected_at_threshold": thr1 * n},
        },
        bound={"condition1": thr1, "condition2": thr2},
    )
    return report, rows
