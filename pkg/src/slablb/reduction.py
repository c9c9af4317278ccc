"""From flat/hyperslab intersection to polynomial slabs.

Parameter layout (fixed once, used everywhere):

=====================  ==========================================================
query t-flat           ``a[(0, 1)]`` plus ``a[(i, j)]`` for i = 1..d-t, j = 1..t+1
query matrix (d x t+1) row 1 = (a01, 0, .., 0); rows 2..t = unit rows e_2..e_t;
                       row t+i = (a_{i,1}, .., a_{i,t+1}) for i = 1..d-t
input hyperslab        ``b[(i, j)]`` for i = 1..t+1, j = 1..d-t, width w in [0, w0]
slab matrix (t+1 x d)  [I_t | b_{1..t, .}] over [0 | b_{t+1, .}], rhs (0, .., 0, w-1)
b variable index       (i - 1) * (d - t) + (j - 1); w (when present) comes last
=====================  ==========================================================

For t = 1 this gives the 2(d-1) variables b_{1,1..d-1}, b_{2,1..d-1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

from .poly_core import (
    ExactMatrix,
    MultiPoly,
    UniPoly,
    as_fraction,
    cofactor_det,
    det_exact,
    has_root_in,
    interpolate,
    solve_exact,
    substitute,
)

Key = tuple[int, int]


def a_keys(t: int, d: int) -> list[Key]:
    return [(0, 1)] + [(i, j) for i in range(1, d - t + 1) for j in range(1, t + 2)]


def b_keys(t: int, d: int) -> list[Key]:
    return [(i, j) for i in range(1, t + 2) for j in range(1, d - t + 1)]


def b_index(t: int, d: int, i: int, j: int) -> int:
    return (i - 1) * (d - t) + (j - 1)


def free_a_keys(t: int, d: int) -> list[Key]:
    """Query coordinates left free once a_{1,1} is pinned by normalisation."""
    return [k for k in a_keys(t, d) if k != (1, 1)]


def _check_dims(t: int, d: int) -> None:
    if not 0 < t < d:
        raise ValueError(f"need 0 < t < d, got t={t}, d={d}")


def _keyed(raw: Mapping, keys: list[Key], what: str) -> dict[Key, Fraction]:
    vals = {tuple(k): as_fraction(v) for k, v in raw.items()}
    if set(vals) != set(keys):
        missing = sorted(set(keys) - set(vals))
        extra = sorted(set(vals) - set(keys))
        raise ValueError(f"{what} keys mismatch: missing {missing}, unexpected {extra}")
    return {k: vals[k] for k in keys}


def _frac_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _frac_from(obj: Mapping) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


@dataclass(frozen=True, eq=True)
class FlatParams:
    d: int
    t: int
    a: Mapping[Key, Fraction] = field(compare=True)

    def __post_init__(self):
        _check_dims(self.t, self.d)
        object.__setattr__(self, "a", _keyed(self.a, a_keys(self.t, self.d), "query"))

    def __hash__(self):
        return hash((self.d, self.t, tuple(self.a.items())))

    def __getitem__(self, key: Key) -> Fraction:
        return self.a[key]

    def updated(self, values: Mapping[Key, object]) -> "FlatParams":
        return FlatParams(self.d, self.t, {**self.a, **values})

    def free_vector(self) -> list[Fraction]:
        return [self.a[k] for k in free_a_keys(self.t, self.d)]

    def to_json(self) -> dict:
        return {"d": self.d, "t": self.t,
                "a": [{"i": i, "j": j, **_frac_json(v)} for (i, j), v in self.a.items()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "FlatParams":
        return cls(int(obj["d"]), int(obj["t"]), {(e["i"], e["j"]): _frac_from(e) for e in obj["a"]})


@dataclass(frozen=True, eq=True)
class SlabParams:
    d: int
    t: int
    b: Mapping[Key, Fraction]
    w0: Fraction = Fraction(0)

    def __post_init__(self):
        _check_dims(self.t, self.d)
        object.__setattr__(self, "b", _keyed(self.b, b_keys(self.t, self.d), "slab"))
        w0 = as_fraction(self.w0)
        if w0 < 0:
            raise ValueError("slab width w0 must be non-negative")
        object.__setattr__(self, "w0", w0)

    def __hash__(self):
        return hash((self.d, self.t, tuple(self.b.items()), self.w0))

    def vector(self) -> list[Fraction]:
        return list(self.b.values())

    @classmethod
    def from_vector(cls, d: int, t: int, vec: Sequence, w0=0) -> "SlabParams":
        return cls(d, t, dict(zip(b_keys(t, d), vec)), w0)

    def to_json(self) -> dict:
        return {"d": self.d, "t": self.t, "w0": _frac_json(self.w0),
                "b": [{"i": i, "j": j, **_frac_json(v)} for (i, j), v in self.b.items()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "SlabParams":
        return cls(int(obj["d"]), int(obj["t"]), {(e["i"], e["j"]): _frac_from(e) for e in obj["b"]},
                   _frac_from(obj["w0"]))


# ---------------------------------------------------------------------------
# primal matrices and the linear system


def query_matrix(a: FlatParams) -> ExactMatrix:
    d, t = a.d, a.t
    rows = [[a[(0, 1)]] + [0] * t]
    for r in range(1, t):
        rows.append([int(c == r) for c in range(t + 1)])
    for i in range(1, d - t + 1):
        rows.append([a[(i, j)] for j in range(1, t + 2)])
    return ExactMatrix(rows)


def slab_matrix(b: SlabParams) -> ExactMatrix:
    d, t = b.d, b.t
    rows = []
    for i in range(1, t + 2):
        unit = [int(i == c + 1) for c in range(t)]
        rows.append(unit + [b.b[(i, j)] for j in range(1, d - t + 1)])
    return ExactMatrix(rows)


def slab_rhs(t: int, w) -> list[Fraction]:
    return [Fraction(0)] * t + [as_fraction(w) - 1]


def system_matrix(a: FlatParams, b: SlabParams) -> ExactMatrix:
    """The (t+1) x (t+1) matrix of the combined system, slab times query."""
    if (a.d, a.t) != (b.d, b.t):
        raise ValueError("query and slab dimensions differ")
    return slab_matrix(b) @ query_matrix(a)


def _leading_minor(m: ExactMatrix, k: int) -> Fraction:
    if k == 0:
        return Fraction(1)
    return det_exact(ExactMatrix([m.row(i)[:k] for i in range(k)]))


def check_assumptions(a: FlatParams, b: SlabParams) -> tuple[bool, bool]:
    """(proper intersection: det != 0, width monotonicity: leading t x t minor > 0)."""
    m = system_matrix(a, b)
    return det_exact(m) != 0, _leading_minor(m, a.t) > 0


def width_polynomial(a: FlatParams, b: SlabParams) -> UniPoly:
    """phi(w) whose roots are the widths at which the flats meet.

    By Cramer's rule the last unknown equals 1 iff det(A) - det(A_s(w)) = 0,
    where A_s(w) has its last column replaced by the right-hand side. phi is
    recovered exactly by interpolation at t + 2 widths.
    """
    m = system_matrix(a, b)
    t = a.t
    ws = list(range(t + 2))
    vals = [det_exact(m) - det_exact(m.with_column(t, slab_rhs(t, w))) for w in ws]
    return interpolate(ws, vals)


def intersects_oracle(a: FlatParams, b: SlabParams) -> bool:
    """Does the query flat meet the hyperslab for some width in [0, w0]?"""
    m = system_matrix(a, b)
    if det_exact(m) == 0:
        raise ValueError("flat and hyperslab do not intersect properly (det A = 0)")
    return has_root_in(width_polynomial(a, b), 0, b.w0)


def intersection_point(a: FlatParams, b: SlabParams, w) -> tuple[list[Fraction], list[Fraction]]:
    """Solve the combined system at width ``w``; returns (tau, x in R^d)."""
    m = system_matrix(a, b)
    tau = solve_exact(m, slab_rhs(a.t, w))
    qm = query_matrix(a)
    x = [sum((qm[r, c] * tau[c] for c in range(a.t + 1)), Fraction(0)) for r in range(a.d)]
    return tau, x


# ---------------------------------------------------------------------------
# symbolic expansion


class IntersectionPoly(NamedTuple):
    P: MultiPoly  # w-free part, over the b variables
    f: MultiPoly  # w-carrying part, over (b..., w)
    minor: MultiPoly  # leading t x t minor, over the b variables


def _symbolic_entries(a: FlatParams) -> list[list[MultiPoly]]:
    d, t = a.d, a.t
    nb = (t + 1) * (d - t)
    n = nb + 1
    rows = []
    for r in range(t + 1):
        row = []
        for c in range(t + 1):
            e = MultiPoly.zero(n)
            if r == c:
                e = e + (a[(0, 1)] if r == 0 else 1)
            for i in range(1, d - t + 1):
                e = e + MultiPoly.variable(n, b_index(t, d, r + 1, i)) * a[(i, c + 1)]
            if r == c == t:
                e = e - MultiPoly.variable(n, nb)
            row.append(e)
        rows.append(row)
    return rows


@lru_cache(maxsize=4096)
def intersection_poly(a: FlatParams) -> IntersectionPoly:
    """Cofactor expansion of the intersection determinant, split by w."""
    nb = (a.t + 1) * (a.d - a.t)
    entries = _symbolic_entries(a)
    full = cofactor_det(entries, MultiPoly.zero(nb + 1))
    p_terms = {e[:nb]: c for e, c in full.items() if e[nb] == 0}
    f = MultiPoly(nb + 1, {e: c for e, c in full.items() if e[nb] > 0})
    if a.t == 1:
        minor = entries[0][0]
    else:
        minor = cofactor_det([row[: a.t] for row in entries[: a.t]], MultiPoly.zero(nb + 1))
    minor = substitute(minor, {nb: 0})
    return IntersectionPoly(MultiPoly(nb, p_terms), f, minor)


def derive_P1(a: FlatParams) -> MultiPoly:
    """Closed form of the w-free part for lines (t = 1)."""
    if a.t != 1 or a.d < 3:
        raise ValueError("P1 is defined for t = 1, d >= 3")
    d = a.d
    n = 2 * (d - 1)
    b1 = lambda i: MultiPoly.variable(n, b_index(1, d, 1, i))  # noqa: E731
    b2 = lambda i: MultiPoly.variable(n, b_index(1, d, 2, i))  # noqa: E731
    a01 = a[(0, 1)]
    p = MultiPoly.constant(n, a01)
    for i in range(1, d):
        p = p + b2(i) * (a01 * a[(i, 2)]) + b1(i) * a[(i, 1)]
    for i in range(1, d):
        for j in range(1, d):
            if i != j:
                p = p + b1(i) * b2(j) * (a[(i, 1)] * a[(j, 2)] - a[(j, 1)] * a[(i, 2)])
    return p


def derive_P2(a: FlatParams) -> MultiPoly:
    """Closed form of the w-free part for planes in R^4 (t = 2, d = 4)."""
    if (a.t, a.d) != (2, 4):
        raise ValueError("P2 is defined for t = 2, d = 4")
    n = 6
    b = lambda i, j: MultiPoly.variable(n, b_index(2, 4, i, j))  # noqa: E731
    a01 = a[(0, 1)]
    p = MultiPoly.constant(n, a01)
    for j in (1, 2):
        for i in (2, 3):
            p = p + b(i, j) * (a01 * a[(j, i)])
        p = p + b(1, j) * a[(j, 1)]
    for j in (1, 2):
        for l in (1, 2):
            if j == l:
                continue
            p = p + b(2, j) * b(3, l) * (a01 * (a[(j, 2)] * a[(l, 3)] - a[(j, 3)] * a[(l, 2)]))
            for k in (2, 3):
                p = p + b(1, j) * b(k, l) * (a[(j, 1)] * a[(l, k)] - a[(j, k)] * a[(l, 1)])
    return p


def derive_P(a: FlatParams) -> MultiPoly:
    return derive_P1(a) if a.t == 1 else derive_P2(a)


def normalize_query(a: FlatParams) -> FlatParams:
    """Pin a_{1,1} so the b_{1,1} b_{2,2} coefficient of P is exactly 1."""
    if a[(2, 2)] == 0:
        raise ValueError("normalisation needs a_{2,2} != 0")
    a11 = (1 + a[(1, 2)] * a[(2, 1)]) / a[(2, 2)]
    return FlatParams(a.d, a.t, {**a.a, (1, 1): a11})


def xy_exponent(t: int, d: int) -> tuple[int, ...]:
    n = (t + 1) * (d - t)
    e = [0] * n
    e[b_index(t, d, 1, 1)] = 1
    e[b_index(t, d, 2, 2)] = 1
    return tuple(e)


# ---------------------------------------------------------------------------
# bivariate slice


class GFSplit(NamedTuple):
    G: UniPoly
    F: UniPoly

    @property
    def degenerate(self) -> bool:
        return self.G.is_zero()


def split_GF(
    p: MultiPoly,
    slice_values: Mapping[int, object],
    y_var: int = 0,
    x_var: int | None = None,
    t: int = 1,
    d: int | None = None,
) -> GFSplit:
    """Slice ``p`` to two variables and write it as y G(x) + F(x).

    ``slice_values`` maps every other variable index to a value. By default
    y is b_{1,1} and x is b_{2,2} in the layout for ``(t, d)``.
    """
    if x_var is None:
        if d is None:
            d = p.num_vars // (t + 1) + t
        x_var = b_index(t, d, 2, 2)
    others = set(range(p.num_vars)) - {y_var, x_var}
    if set(slice_values) != others:
        raise ValueError("slice must fix every variable except y and x")
    h = substitute(p, slice_values)
    yi, xi = (0, 1) if y_var < x_var else (1, 0)
    g, f = {}, {}
    for e, c in h.items():
        if e[yi] > 1:
            raise ValueError("polynomial is not linear in y")
        (g if e[yi] else f)[e[xi]] = c
    as_uni = lambda m: UniPoly([m.get(k, 0) for k in range(max(m, default=0) + 1)])  # noqa: E731
    return GFSplit(as_uni(g), as_uni(f))


def slab_membership(a: FlatParams, b: SlabParams) -> bool:
    """0 <= P(a, b) <= -f(a, b, w0), evaluated exactly."""
    ip = intersection_poly(a)
    vec = b.vector()
    p = ip.P.eval(vec)
    upper = -ip.f.eval(vec + [b.w0])
    return 0 <= p <= upper


# ---------------------------------------------------------------------------
# randomized batch checks

REDUCTION_CASES = ((1, 3), (1, 4), (2, 4))
CLOSED_FORM_CASES = ((1, 3), (1, 4), (1, 5), (2, 4))


def random_query(rng, t: int, d: int, normalized: bool = True) -> FlatParams:
    from .rng import grid_fraction

    vals = {k: grid_fraction(rng) for k in a_keys(t, d)}
    vals[(0, 1)] = grid_fraction(rng, nonzero=True)
    vals[(2, 2)] = grid_fraction(rng, nonzero=True)
    a = FlatParams(d, t, vals)
    return normalize_query(a) if normalized else a


def random_slab(rng, t: int, d: int, w0=0) -> SlabParams:
    from .rng import grid_fractions

    return SlabParams.from_vector(d, t, grid_fractions(rng, (t + 1) * (d - t)), w0)


def closed_form_mismatches(a: FlatParams) -> list[str]:
    """Structural checks on one query; returns the names of failed checks."""
    ip = intersection_poly(a)
    p = derive_P(a)
    nb = ip.P.num_vars
    problems = []
    if p != ip.P:
        problems.append("closed form != symbolic expansion")
    if p.coefficient(xy_exponent(a.t, a.d)) != 1:
        problems.append("b11*b22 coefficient != 1")
    if p.total_degree() > 2:
        problems.append("degree-3 monomial present")
    if not p.is_multilinear():
        problems.append("not multilinear")
    if not substitute(ip.f, {nb: 0}).is_zero():
        problems.append("f(w=0) != 0")
    if ip.f.diff(nb) != -ip.minor.embed(nb + 1, list(range(nb))):
        problems.append("df/dw != -minor")
    return problems


def verify_closed_forms(trials: int = 100, seed: int = 0, cases=CLOSED_FORM_CASES):
    from .report import VerificationReport, status_of
    from .rng import trial_rng

    out = []
    for t, d in cases:
        bad = {}
        for k in range(trials):
            a = random_query(trial_rng(seed, k, f"closed-{t}-{d}"), t, d)
            problems = closed_form_mismatches(a)
            if problems:
                bad[k] = problems
        out.append(VerificationReport(
            f"closed_form_t{t}_d{d}", status_of(not bad),
            params={"t": t, "d": d, "trials": trials, "seed": seed},
            measured={"failures": len(bad), "examples": dict(list(bad.items())[:5])},
        ))
    return out


def random_reduction_instance(rng, t: int, d: int) -> tuple[FlatParams, SlabParams]:
    """Random (a, b, w0) with both assumptions, w0 placed near the crossing width."""
    while True:
        a = random_query(rng, t, d, normalized=bool(rng.integers(0, 2)))
        b = random_slab(rng, t, d)
        as1, as2 = check_assumptions(a, b)
        if as1 and as2:
            break
    ip = intersection_poly(a)
    vec = b.vector()
    crossing = ip.P.eval(vec) / ip.minor.eval(vec)
    mode = int(rng.integers(0, 6))
    jitter = Fraction(int(rng.integers(1, 65)), 1024)
    if mode == 0:
        w0 = crossing
    elif mode == 1:
        w0 = crossing * (1 + jitter)
    elif mode == 2:
        w0 = crossing * (1 - jitter)
    elif mode == 3:
        w0 = Fraction(0)
    else:
        w0 = Fraction(int(rng.integers(0, 257)), 64)
    return a, SlabParams(d, t, b.b, max(w0, Fraction(0)))


def verify_reduction_equivalence(trials: int = 10_000, seed: int = 0, cases=REDUCTION_CASES):
    from .report import VerificationReport, status_of
    from .rng import trial_rng

    out = []
    for t, d in cases:
        disagree, positives = [], 0
        for k in range(trials):
            a, b = random_reduction_instance(trial_rng(seed, k, f"reduction-{t}-{d}"), t, d)
            direct = intersects_oracle(a, b)
            positives += direct
            if direct != slab_membership(a, b):
                disagree.append(k)
        out.append(VerificationReport(
            f"reduction_equivalence_t{t}_d{d}", status_of(not disagree),
            params={"t": t, "d": d, "trials": trials, "seed": seed},
            measured={"agreement": 1 - len(disagree) / trials, "intersecting": positives,
                      "disagreements": disagree[:20]},
        ))
    return out
