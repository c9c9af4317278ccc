"""The hard instance: a base query/input pair in general position, random
inputs in a small cube around the input point, and a query lattice around
the query point.

Only t = 1 (lines, d >= 3) and t = 2, d = 4 (triangles in R^4) are built.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

from .poly_core import MultiPoly, resultant, substitute
from .reduction import (
    FlatParams,
    SlabParams,
    b_index,
    b_keys,
    check_assumptions,
    derive_P,
    free_a_keys,
    intersection_poly,
    normalize_query,
    split_GF,
    xy_exponent,
)
from .rng import trial_rng

BASE_DENOMINATOR = 64
BASE_BUDGET = 100_000
# query-cube ratio used when conditioning the base pair, so the pair never depends on C
REFERENCE_C = 10
# stated Q exponent for triangle-triangle, next to the derived one
STATED_TRIANGLE_EXPONENT = 125


@dataclass(frozen=True)
class ConstructionConfig:
    d: int = 3
    t: int = 1
    n: int = 512
    q_exponent: float = 0.1
    eps_p: float = 0.3
    C: float = 10.0
    eps0: float = 1 / 16
    c_w: float = 4.0
    c_tau: float = 1.0
    grid: int = 4
    mode: str = "desk"
    seed: int = 7
    # box-wide lower bound on every |dP/db_k| and on the width factor, relative to eps_p
    margin: float = 0.0
    # base-point conditioning: sheet shift per lattice step in slab widths, and
    # width factor over eps_p times the l1 gradient in b (both at C = REFERENCE_C)
    min_separation: float = 0.75
    min_aspect: float = 0.8
    # lets C drop below 10 for negative controls
    negative_control: bool = False

    def validate(self) -> None:
        if not ((self.t == 1 and self.d >= 3) or (self.t, self.d) == (2, 4)):
            raise ValueError(f"unsupported (t, d) = ({self.t}, {self.d})")
        if self.n < 0 or self.grid < 1 or self.grid > 8:
            raise ValueError("need n >= 0 and 1 <= grid <= 8")
        if not 0 < self.eps_p < 1:
            raise ValueError("eps_p must lie in (0, 1)")
        if self.C < 10 and not (self.negative_control and self.C >= 1):
            raise ValueError("C must be at least 10 (set negative_control for smaller C)")
        if self.q_exponent < 0:
            raise ValueError("q_exponent must be non-negative")
        if self.mode not in ("desk", "formula"):
            raise ValueError("mode must be 'desk' or 'formula'")
        if self.n > 0 and self.w > self.eps_p:
            raise ValueError(f"w = {self.w} exceeds eps_p = {self.eps_p}")
        if self.mode == "desk" and self.n > 10_000:
            raise ValueError("desk mode materialises at most 10^4 inputs")

    @property
    def beta(self) -> int:
        return 2 * (self.d - 1) if self.t == 1 else 6

    @property
    def Q(self) -> float:
        return float(self.n) ** self.q_exponent if self.n > 0 else 1.0

    @property
    def w(self) -> float:
        return self.c_w * self.Q / self.n if self.n > 0 else 0.0

    @property
    def eps_q(self) -> float:
        return self.eps_p / self.C

    @property
    def psi(self) -> float:
        return psi(self.n)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "ConstructionConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown construction keys: {sorted(unknown)}")
        return cls(**obj)


def psi(n: int) -> float:
    """2^sqrt(log2 n), with log base 2."""
    return 2.0 ** math.sqrt(math.log2(n)) if n > 1 else 1.0


def beta_for(t: int, d: int) -> int:
    return 2 * (d - 1) if t == 1 else 6


def q_exponent_derived(beta: int) -> int:
    """Exponent of Q in S(n) = n^beta / Q^e from m = (1/tau)^beta and S = m Q."""
    return beta * (3 * beta + 4) - 1


def q_exponent_line_closed_form(d: int) -> int:
    return 4 * (3 * d - 1) * (d - 1) - 1


# ---------------------------------------------------------------------------
# base pair


def p_support(t: int, d: int) -> list[tuple[int, ...]]:
    """Monomials a generic query puts in P: constant, every b, and the cross terms."""
    nb = (t + 1) * (d - t)

    def mono(*keys):
        e = [0] * nb
        for i, j in keys:
            e[b_index(t, d, i, j)] = 1
        return tuple(e)

    out = [mono()] + [mono(k) for k in b_keys(t, d)]
    if t == 1:
        out += [mono((1, i), (2, j)) for i in range(1, d) for j in range(1, d) if i != j]
    else:
        for j, l in itertools.permutations((1, 2), 2):
            out += [mono((2, j), (3, l)), mono((1, j), (2, l)), mono((1, j), (3, l))]
    return out


def base_pair_failures(a: FlatParams, b: list[Fraction]) -> list[str]:
    """The general-position conditions that fail at (a, b); empty means accepted."""
    t, d = a.t, a.d
    p = derive_P(a)
    slab = SlabParams.from_vector(d, t, b)
    bad = []
    as1, as2 = check_assumptions(a, slab)
    if not as1:
        bad.append("det A = 0")
    if p.eval(b) != 0:
        bad.append("b not on the zero set")
    if any(p.coefficient(e) == 0 for e in p_support(t, d)):
        bad.append("zero coefficient")
    if any(p.diff(k).eval(b) == 0 for k in range(p.num_vars)):
        bad.append("axis-parallel tangent")
    if not as2:
        bad.append("width factor not positive")
    y, x = b_index(t, d, 1, 1), b_index(t, d, 2, 2)
    sp = split_GF(p, {k: b[k] for k in range(p.num_vars) if k not in (y, x)}, y, x)
    if sp.degenerate or sp.G.degree() < 1 or resultant(sp.G, sp.F) == 0:
        bad.append("zero resultant on the slice")
    return bad


def box_bounds(poly: MultiPoly, center: list[Fraction], half: Fraction) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of a multilinear polynomial over the cube center +- half."""
    if not poly.is_multilinear():
        raise ValueError("corner bounds need a multilinear polynomial")
    used = sorted({k for e in poly.terms for k, v in enumerate(e) if v})
    vals = []
    for signs in itertools.product((-1, 1), repeat=len(used)):
        pt = list(center)
        for k, s in zip(used, signs):
            pt[k] = center[k] + s * half
        vals.append(poly.eval(pt))
    return min(vals), max(vals)


def box_min_abs(poly: MultiPoly, center: list[Fraction], half: Fraction) -> Fraction:
    lo, hi = box_bounds(poly, center, half)
    return Fraction(0) if lo <= 0 <= hi else min(abs(lo), abs(hi))


def margin_failures(a: FlatParams, b: list[Fraction], eps_p: Fraction, margin: Fraction) -> list[str]:
    """Desk-scale conditioning: every partial and the width factor stay above
    ``margin`` over the whole cube of side eps_p (a strengthening of the
    pointwise conditions)."""
    if margin <= 0:
        return []
    ip = intersection_poly(a)
    half = eps_p / 2
    bad = [f"|dP/db_{k}| below margin" for k in range(ip.P.num_vars)
           if box_min_abs(ip.P.diff(k), b, half) < margin]
    if box_bounds(ip.minor, b, half)[0] < margin:
        bad.append("width factor below margin")
    return bad


def _grid_value(rng, lo: int, hi: int, den: int = BASE_DENOMINATOR) -> Fraction:
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


def conditioning(a: FlatParams, b: list[Fraction], cfg: ConstructionConfig) -> tuple[Fraction, Fraction]:
    """(separation, aspect) of a base pair at the desk lattice step.

    separation: min over free a-coordinates of |P(a + tau e_k, B) - P(a, B)| / (w minor(B)),
    aspect: minor(B) / (eps_p * sum_k |dP/db_k (B)|).
    """
    ip = intersection_poly(a)
    mu = ip.minor.eval(b)
    if mu <= 0:
        return Fraction(0), Fraction(0)
    eps_p = Fraction(str(cfg.eps_p))
    grad = sum(abs(ip.P.diff(k).eval(b)) for k in range(ip.P.num_vars))
    aspect = mu / (eps_p * grad) if grad else Fraction(0)
    if cfg.n == 0:
        return Fraction(0), aspect
    tau = eps_p / REFERENCE_C / cfg.grid
    width = Fraction(cfg.w) * mu
    p0 = ip.P.eval(b)
    sep = min(abs(derive_P(normalize_query(a.updated({k: a[k] + tau}))).eval(b) - p0)
              for k in free_a_keys(a.t, a.d))
    return sep / width, aspect


def choose_base_pair(cfg: ConstructionConfig, budget: int = BASE_BUDGET) -> tuple[FlatParams, list[Fraction]]:
    """Rejection search on denominator-64 grids; b_{1,1} is solved so P(A, B) = 0.

    The search ignores C, so a negative control reuses the pair of its C >= 10 twin.
    """
    key = replace(cfg, C=float(REFERENCE_C), negative_control=False, mode="desk")
    a, b = _search(key, budget)
    return a, list(b)


@functools.lru_cache(maxsize=32)
def _search(cfg: ConstructionConfig, budget: int) -> tuple[FlatParams, tuple[Fraction, ...]]:
    t, d = cfg.t, cfg.d
    nb = (t + 1) * (d - t)
    y = b_index(t, d, 1, 1)
    eps_p, margin = Fraction(str(cfg.eps_p)), Fraction(str(cfg.margin))
    rng = trial_rng(cfg.seed, 0, "base-pair")
    tally: dict[str, int] = {}

    def reject(reason):
        tally[reason] = tally.get(reason, 0) + 1

    for _ in range(budget):
        vals = {k: _grid_value(rng, -2, 2) for k in free_a_keys(t, d)}
        if vals[(2, 2)] == 0 or vals[(0, 1)] == 0:
            reject("a22 or a01 zero")
            continue
        a = normalize_query(FlatParams(d, t, {**vals, (1, 1): 0}))
        p = derive_P(a)
        b = [_grid_value(rng, -1, 1) for _ in range(nb)]
        # P is affine in b_{1,1}: P = slope * b11 + rest
        b[y] = Fraction(0)
        rest = p.eval(b)
        slope = p.diff(y).eval(b)
        if slope == 0:
            reject("P flat in b11")
            continue
        b[y] = -rest / slope
        if abs(b[y]) > 2:
            reject("b11 out of range")
            continue
        if cfg.min_aspect > 0 or cfg.min_separation > 0:
            sep, aspect = conditioning(a, b, cfg)
            # with n = 0 there is no slab width, so separation is undefined
            if aspect < Fraction(str(cfg.min_aspect)) or (
                    cfg.n > 0 and sep < Fraction(str(cfg.min_separation))):
                reject("conditioning")
                continue
        bad = base_pair_failures(a, b) or margin_failures(a, b, eps_p, margin)
        if not bad:
            return a, tuple(b)
        for reason in bad:
            reject(reason)
    raise RuntimeError(f"no base pair within {budget} candidates; rejections: {tally}")


# ---------------------------------------------------------------------------
# inputs and queries


def gen_inputs(base_point: list[Fraction], cfg: ConstructionConfig) -> list[list[Fraction]]:
    """n points uniform in the cube of side eps_p centred at the base point (2^-32 grid)."""
    if cfg.n == 0:
        return []
    eps_p = Fraction(str(cfg.eps_p))
    rng = trial_rng(cfg.seed, 0, "inputs")
    raw = rng.integers(0, 2**32 + 1, size=(cfg.n, len(base_point)))
    return [[c + eps_p * (Fraction(int(u), 2**32) - Fraction(1, 2)) for c, u in zip(base_point, row)]
            for row in raw]


def tau_formula(cfg: ConstructionConfig) -> float:
    """c_tau * w * (Q psi)^(3 beta + 3)."""
    return cfg.c_tau * cfg.w * (cfg.Q * cfg.psi) ** (3 * cfg.beta + 3)


def gen_queries(base_query: FlatParams, cfg: ConstructionConfig) -> tuple[list[FlatParams], Fraction]:
    """Cell-centred lattice with ``grid`` points per free coordinate in the eps_q cube."""
    eps_q = Fraction(str(cfg.eps_p)) / Fraction(str(cfg.C))
    tau = eps_q / cfg.grid
    if tau > eps_q:
        raise ValueError("grid step exceeds eps_q: empty query set")
    keys = free_a_keys(cfg.t, cfg.d)
    offsets = [eps_q * (Fraction(2 * k + 1, 2 * cfg.grid) - Fraction(1, 2)) for k in range(cfg.grid)]
    queries = []
    for combo in itertools.product(offsets, repeat=len(keys)):
        vals = {k: base_query[k] + off for k, off in zip(keys, combo)}
        queries.append(normalize_query(base_query.updated(vals)))
    return queries, tau


def bound_formulas(cfg: ConstructionConfig, tau: float | None = None) -> dict:
    """m = (1/tau)^beta, S_lower = m Q and the Q exponent, in log space as well."""
    beta = cfg.beta
    tau = tau_formula(cfg) if tau is None else float(tau)
    log2_m = -beta * math.log2(tau) if tau > 0 else math.inf
    m = 2.0**log2_m if log2_m < 1000 else math.inf
    return {
        "tau": tau,
        "beta": beta,
        "m": m,
        "log2_m": log2_m,
        "S_lower": m * cfg.Q,
        "log2_S_lower": log2_m + math.log2(cfg.Q),
        "exponent": q_exponent_derived(beta),
    }


# ---------------------------------------------------------------------------
# the assembled instance


@dataclass
class ConstructionInstance:
    config: ConstructionConfig
    base_query: FlatParams
    base_point: list[Fraction]
    inputs: list[list[Fraction]]
    queries: list[FlatParams]
    tau_grid: Fraction | None
    derived: dict = field(default_factory=dict)

    @property
    def beta(self) -> int:
        return self.config.beta

    @property
    def psi(self) -> float:
        return self.config.psi

    @property
    def w(self) -> float:
        return self.config.w

    @property
    def m_bound(self) -> float:
        return self.derived["m"]

    def to_json(self) -> dict:
        from .report import jsonable

        return jsonable({
            "config": self.config.to_json(),
            "base_query": self.base_query.to_json(),
            "base_point": self.base_point,
            "inputs": self.inputs,
            "queries": [q.to_json() for q in self.queries],
            "derived": self.derived,
        })

    @classmethod
    def from_json(cls, obj: Mapping) -> "ConstructionInstance":
        cfg = ConstructionConfig.from_json(obj["config"])
        tau = obj["derived"].get("tau_grid")
        return cls(
            cfg,
            FlatParams.from_json(obj["base_query"]),
            [Fraction(v) for v in obj["base_point"]],
            [[Fraction(v) for v in row] for row in obj["inputs"]],
            [FlatParams.from_json(q) for q in obj["queries"]],
            None if tau is None else Fraction(tau),
            dict(obj["derived"]),
        )


def build_instance(cfg: ConstructionConfig) -> ConstructionInstance:
    cfg.validate()
    a, b = choose_base_pair(cfg)
    formula = bound_formulas(cfg)
    derived = {
        "beta": cfg.beta,
        "psi": cfg.psi,
        "Q": cfg.Q,
        "w": cfg.w,
        "eps_q": cfg.eps_q,
        "tau_formula": formula["tau"],
        "m_formula": formula["m"],
        "log2_m_formula": formula["log2_m"],
        "q_exponent": formula["exponent"],
    }
    if cfg.mode == "formula":
        derived.update(tau_grid=None, m=formula["m"], S_lower=formula["S_lower"])
        return ConstructionInstance(cfg, a, b, [], [], None, derived)
    queries, tau = gen_queries(a, cfg)
    m = len(queries)
    derived.update(
        tau_grid=tau,
        m=m,
        S_lower=m * cfg.Q,
        c_realized=math.log(m) / math.log(cfg.n) if m > 1 and cfg.n > 1 else 0.0,
    )
    return ConstructionInstance(cfg, a, b, gen_inputs(b, cfg), queries, tau, derived)


# ---------------------------------------------------------------------------
# bound table


def bounds_rows(ds=(3, 4)) -> list[dict]:
    rows = []
    for d in ds:
        beta = beta_for(1, d)
        rows.append({"problem": "line-hyperslab", "d": d, "beta": beta,
                     "derived": q_exponent_derived(beta), "stated": q_exponent_line_closed_form(d)})
    if 4 in ds:
        beta = beta_for(2, 4)
        rows.append({"problem": "triangle-triangle", "d": 4, "beta": beta,
                     "derived": q_exponent_derived(beta), "stated": STATED_TRIANGLE_EXPONENT})
    for r in rows:
        r["status"] = "ok" if r["derived"] == r["stated"] else "DISCREPANCY"
    return rows


def bounds_table(ds=(3, 4)) -> str:
    """Fixed-width table of S(n) = n^beta / Q^e exponents: derived vs stated."""
    head = f"{'problem':<18} {'d':>2} {'beta':>4} {'n_exp':>5} {'Q_exp_derived':>13} {'Q_exp_stated':>12}  status"
    lines = [head]
    for r in bounds_rows(ds):
        lines.append(f"{r['problem']:<18} {r['d']:>2} {r['beta']:>4} {r['beta']:>5} "
                     f"{r['derived']:>13} {r['stated']:>12}  {r['status']}")
    return "\n".join(lines) + "\n"
