"""Exact rational algebra: sparse multivariate polynomials, dense univariate
polynomials, exact matrices and the determinant-flavoured tools built on them.

Scalars are :class:`fractions.Fraction` throughout; nothing here ever rounds.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, TypeVar

import numpy as np

ExactScalar = Fraction
Exps = tuple[int, ...]

T = TypeVar("T")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, decimal strings and floats (exactly) to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    return Fraction(x)


def _sort_key(exps: Exps) -> tuple:
    return (sum(exps), exps)


# ---------------------------------------------------------------------------
# multivariate polynomials


class MultiPoly:
    """Sparse polynomial in ``num_vars`` indeterminates over the rationals.

    Terms map exponent tuples to nonzero coefficients. Instances are immutable;
    every operation returns a new polynomial in canonical (graded, then
    lexicographic) term order.
    """

    __slots__ = ("_num_vars", "_degree_bound", "_terms")

    def __init__(
        self,
        num_vars: int,
        terms: Mapping[Exps, object] | Iterable[tuple[Exps, object]] = (),
        degree_bound: int | None = None,
    ):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exps, Fraction] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise ValueError(f"exponent tuple {exps} has wrong length for {num_vars} vars")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            acc[exps] = acc.get(exps, Fraction(0)) + as_fraction(c)
        clean = {e: c for e, c in acc.items() if c != 0}
        actual = max((sum(e) for e in clean), default=0)
        if degree_bound is None:
            degree_bound = actual
        elif actual > degree_bound:
            raise ValueError(f"term of degree {actual} exceeds degree bound {degree_bound}")
        self._num_vars = num_vars
        self._degree_bound = degree_bound
        self._terms = {e: clean[e] for e in sorted(clean, key=_sort_key)}

    # construction helpers
    @classmethod
    def constant(cls, num_vars: int, value) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "MultiPoly":
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): 1})

    @classmethod
    def zero(cls, num_vars: int) -> "MultiPoly":
        return cls(num_vars, {})

    @property
    def num_vars(self) -> int:
        return self._num_vars

    @property
    def degree_bound(self) -> int:
        return self._degree_bound

    @property
    def terms(self) -> dict[Exps, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exps, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self._terms), default=-1)

    def is_multilinear(self) -> bool:
        return all(max(e, default=0) <= 1 for e in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._num_vars == other._num_vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self._num_vars, other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        if not self._terms:
            return f"MultiPoly({self._num_vars}, 0)"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(
                f"X{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return f"MultiPoly({self._num_vars}, {' + '.join(parts)})"

    # arithmetic
    def _check(self, other: "MultiPoly") -> None:
        if other._num_vars != self._num_vars:
            raise ValueError("polynomials live in different variable sets")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self._num_vars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return MultiPoly(self._num_vars, acc, max(self._degree_bound, other._degree_bound))

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self._num_vars, {e: -c for e, c in self._terms.items()}, self._degree_bound)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            return MultiPoly(self._num_vars, {e: v * c for e, v in self._terms.items()}, self._degree_bound)
        self._check(other)
        acc: dict[Exps, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self._num_vars, acc, self._degree_bound + other._degree_bound)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.constant(self._num_vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # evaluation and slicing
    def eval(self, point: Sequence) -> Fraction:
        return eval_poly(self, point)

    def substitute(self, assignments: Mapping[int, object]) -> "MultiPoly":
        return substitute(self, assignments)

    def diff(self, var: int) -> "MultiPoly":
        """Partial derivative with respect to ``var``."""
        acc = {}
        for e, c in self._terms.items():
            k = e[var]
            if k:
                e2 = list(e)
                e2[var] = k - 1
                acc[tuple(e2)] = c * k
        return MultiPoly(self._num_vars, acc, max(self._degree_bound - 1, 0))

    def embed(self, num_vars: int, positions: Sequence[int]) -> "MultiPoly":
        """Re-express in a larger variable set; variable i goes to ``positions[i]``."""
        if len(positions) != self._num_vars:
            raise ValueError("need one position per variable")
        acc = {}
        for e, c in self._terms.items():
            e2 = [0] * num_vars
            for i, k in zip(positions, e):
                e2[i] = k
            acc[tuple(e2)] = c
        return MultiPoly(num_vars, acc, self._degree_bound)

    def to_univariate(self) -> "UniPoly":
        if self._num_vars != 1:
            raise ValueError("not a univariate polynomial")
        deg = max(self.total_degree(), 0)
        coeffs = [Fraction(0)] * (deg + 1)
        for (k,), c in self._terms.items():
            coeffs[k] = c
        return UniPoly(coeffs)

    def to_float_evaluator(self) -> Callable[[np.ndarray], np.ndarray]:
        """Vectorised float evaluator over an ``(N, num_vars)`` array of points."""
        exps = np.array(list(self._terms), dtype=np.int64).reshape(-1, self._num_vars)
        coefs = np.array([float(c) for c in self._terms.values()], dtype=np.float64)
        multilinear = self.is_multilinear()

        def evaluate(points: np.ndarray) -> np.ndarray:
            points = np.asarray(points, dtype=np.float64)
            out = np.zeros(points.shape[0])
            for row, c in zip(exps, coefs):
                term = np.full(points.shape[0], c)
                for var in np.flatnonzero(row):
                    term *= points[:, var] if multilinear else points[:, var] ** row[var]
                out += term
            return out

        return evaluate

    # serialization
    def to_json(self) -> dict:
        return {
            "num_vars": self._num_vars,
            "degree_bound": self._degree_bound,
            "terms": [
                {"exps": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MultiPoly":
        terms = [
            (tuple(t["exps"]), Fraction(int(t["num"]), int(t["den"]))) for t in obj["terms"]
        ]
        return cls(int(obj["num_vars"]), terms, int(obj["degree_bound"]))


def eval_poly(p: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != p.num_vars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.num_vars} vars")
    xs = [as_fraction(x) for x in point]
    total = Fraction(0)
    for e, c in p.items():
        term = c
        for x, k in zip(xs, e):
            if k:
                term *= x**k
        total += term
    return total


def substitute(p: MultiPoly, assignments: Mapping[int, object]) -> MultiPoly:
    """Fix some variables to exact values.

    The result lives in the remaining variables, in their original order.
    """
    fixed = {int(k): as_fraction(v) for k, v in assignments.items()}
    for k in fixed:
        if not 0 <= k < p.num_vars:
            raise ValueError(f"variable index {k} out of range")
    keep = [i for i in range(p.num_vars) if i not in fixed]
    acc: dict[Exps, Fraction] = {}
    for e, c in p.items():
        val = c
        for i, v in fixed.items():
            if e[i]:
                val *= v ** e[i]
        e2 = tuple(e[i] for i in keep)
        acc[e2] = acc.get(e2, Fraction(0)) + val
    return MultiPoly(len(keep), acc, p.degree_bound)


def coeff_decompose(p: MultiPoly, var_index: int) -> dict[Exps, "UniPoly"]:
    """Group ``p`` as sum_j h_j(X_var) * X_rest^j.

    Keys are exponent tuples over the other variables (original order with
    ``var_index`` removed); values are univariate polynomials in X_var.
    """
    if not 0 <= var_index < p.num_vars:
        raise ValueError(f"variable index {var_index} out of range")
    groups: dict[Exps, dict[int, Fraction]] = {}
    for e, c in p.items():
        rest = e[:var_index] + e[var_index + 1:]
        groups.setdefault(rest, {})[e[var_index]] = c
    if not groups:
        return {(0,) * (p.num_vars - 1): UniPoly([0])}
    out = {}
    for rest in sorted(groups, key=_sort_key):
        powers = groups[rest]
        coeffs = [Fraction(0)] * (max(powers) + 1)
        for k, c in powers.items():
            coeffs[k] = c
        out[rest] = UniPoly(coeffs)
    return out


def reassemble(parts: Mapping[Exps, "UniPoly"], var_index: int) -> MultiPoly:
    """Inverse of :func:`coeff_decompose`."""
    n = len(next(iter(parts))) + 1
    acc = {}
    for rest, h in parts.items():
        for k, c in enumerate(h.coeffs):
            if c:
                acc[rest[:var_index] + (k,) + rest[var_index:]] = c
    return MultiPoly(n, acc)


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial, coefficients a_0..a_n in increasing degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        c = tuple(as_fraction(x) for x in coeffs)
        self.coeffs: tuple[Fraction, ...] = c if c else (Fraction(0),)

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "UniPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        return -1

    def is_zero(self) -> bool:
        return self.degree() < 0

    def leading(self) -> Fraction:
        d = self.degree()
        return self.coeffs[d] if d >= 0 else Fraction(0)

    def trimmed(self) -> "UniPoly":
        return UniPoly(self.coeffs[: self.degree() + 1] or (0,))

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.trimmed().coeffs == other.trimmed().coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            k = as_fraction(other)
            return UniPoly(c * k for c in self.coeffs)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        dq = other.degree()
        if dq < 0:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.trimmed().coeffs)
        lead = other.coeffs[dq]
        quot = [Fraction(0)] * max(len(rem) - dq, 1)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - dq] = c
                for j in range(dq + 1):
                    rem[k - dq + j] -= c * other.coeffs[j]
        return UniPoly(quot), UniPoly(rem[:dq] or [0]).trimmed()

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:] or [0])

    def monic(self) -> "UniPoly":
        lead = self.leading()
        if lead == 0:
            raise ValueError("zero polynomial has no monic form")
        return UniPoly(c / lead for c in self.trimmed().coeffs)

    def float_coeffs(self) -> np.ndarray:
        """Coefficients as floats, highest degree first (numpy.polyval order)."""
        return np.array([float(c) for c in reversed(self.trimmed().coeffs)])

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly(1, {(k,): c for k, c in enumerate(self.coeffs)})


def gcd_univariate(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over the rationals (Euclid)."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = p.trimmed(), q.trimmed()
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# matrices and determinants


class ExactMatrix:
    """Rectangular matrix of Fractions, stored row-major and immutable."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Sequence[Sequence]):
        grid = tuple(tuple(as_fraction(x) for x in row) for row in entries)
        if grid and any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("ragged matrix")
        self._entries = grid
        self.rows = len(grid)
        self.cols = len(grid[0]) if grid else 0

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._entries)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._entries]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self._entries == other._entries

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ExactMatrix({[[str(x) for x in r] for r in self._entries]})"

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[sum((a * b for a, b in zip(r, other.column(j))), Fraction(0)) for j in range(other.cols)]
             for r in self._entries]
        )

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([self.column(j) for j in range(self.cols)])

    def with_column(self, j: int, col: Sequence) -> "ExactMatrix":
        return ExactMatrix([r[:j] + (as_fraction(c),) + r[j + 1:] for r, c in zip(self._entries, col)])

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self._entries]


def bareiss(m: ExactMatrix) -> tuple[Fraction, int]:
    """Fraction-free determinant; returns (det, max intermediate bit length).

    Rows are first scaled to integers, the integer Bareiss recurrence runs with
    exact divisions, and the scaling is undone at the end.
    """
    if m.rows != m.cols:
        raise ValueError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return Fraction(1), 0
    scale = 1
    a: list[list[int]] = []
    for r in m.tolist():
        l = math.lcm(*(x.denominator for x in r))
        scale *= l
        a.append([int(x * l) for x in r])
    max_bits = max(abs(x).bit_length() for r in a for x in r)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0), max_bits
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                v = (row_i[j] * akk - aik * row_k[j]) // prev
                row_i[j] = v
                max_bits = max(max_bits, abs(v).bit_length())
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale), max_bits


def det_exact(m: ExactMatrix) -> Fraction:
    return bareiss(m)[0]


def cofactor_det(entries: Sequence[Sequence[T]], zero: T) -> T:
    """Laplace expansion along the first row over any commutative ring.

    Exponential; used as an independent oracle and for small symbolic
    determinants whose entries are polynomials.
    """
    n = len(entries)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(r) != n for r in entries):
        raise ValueError("determinant needs a square matrix")
    if n == 1:
        return entries[0][0]
    total = zero
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in entries[1:])]
        term = entries[0][j] * cofactor_det(minor, zero)
        total = total + term if j % 2 == 0 else total - term
    return total


def leibniz_det(entries: Sequence[Sequence[T]], zero: T) -> T:
    """Permutation-sum determinant; a second independent oracle."""
    n = len(entries)
    total = zero
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = entries[0][perm[0]]
        for i in range(1, n):
            term = term * entries[i][perm[i]]
        total = total - term if inv % 2 else total + term
    return total


def solve_exact(a: ExactMatrix, rhs: Sequence) -> list[Fraction]:
    """Gauss-Jordan solve of a nonsingular square system."""
    n = a.rows
    if a.cols != n or len(rhs) != n:
        raise ValueError("solve needs a square system")
    aug = [list(r) + [as_fraction(b)] for r, b in zip(a.tolist(), rhs)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k] != 0:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return [r[n] for r in aug]


def inverse_exact(a: ExactMatrix) -> ExactMatrix:
    n = a.rows
    cols = [solve_exact(a, [int(i == j) for i in range(n)]) for j in range(n)]
    return ExactMatrix(cols).transpose()


def vandermonde_matrix(xs: Sequence) -> ExactMatrix:
    n = len(xs)
    return ExactMatrix([[as_fraction(x) ** j for j in range(n)] for x in xs])


def vandermonde_det(xs: Sequence) -> Fraction:
    xs = [as_fraction(x) for x in xs]
    out = Fraction(1)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            out *= xs[j] - xs[i]
    return out


def sylvester(p: UniPoly, q: UniPoly) -> ExactMatrix:
    """Sylvester matrix: deg(q) shifted rows of p, then deg(p) rows of q."""
    dp, dq = p.degree(), q.degree()
    if dp < 0 or dq < 0:
        raise ValueError("Sylvester matrix of the zero polynomial is undefined")
    if dp < 1 and dq < 1:
        raise ValueError("Sylvester matrix needs at least one non-constant polynomial")
    n = dp + dq
    rows = []
    for poly, deg, copies in ((p, dp, dq), (q, dq, dp)):
        desc = list(reversed(poly.coeffs[: deg + 1]))
        for s in range(copies):
            rows.append([0] * s + desc + [0] * (n - s - deg - 1))
    return ExactMatrix(rows)


def resultant(p: UniPoly, q: UniPoly) -> Fraction:
    return det_exact(sylvester(p, q))


# ---------------------------------------------------------------------------
# real root counting


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p.trimmed(), p.derivative().trimmed()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_changes(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: UniPoly, lo, hi) -> int:
    """Number of distinct real roots in the closed interval [lo, hi].

    Raises on the zero polynomial, which vanishes everywhere.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    endpoint_roots = 0
    for r in {lo, hi}:
        if p(r) == 0:
            endpoint_roots += 1
            factor = UniPoly([-r, 1])
            while p.degree() > 0 and p(r) == 0:
                p = p.divmod(factor)[0]
    if p.degree() <= 0:
        return endpoint_roots
    # endpoints are no longer roots, so V(lo) - V(hi) counts distinct roots inside
    seq = sturm_sequence(p)
    inner = _sign_changes(s(lo) for s in seq) - _sign_changes(s(hi) for s in seq)
    return inner + endpoint_roots


def has_root_in(p: UniPoly, lo, hi) -> bool:
    if p.is_zero():
        return True
    return count_real_roots(p, lo, hi) > 0


def interpolate(xs: Sequence, ys: Sequence) -> UniPoly:
    """Exact interpolant of degree < len(xs) via a Vandermonde solve."""
    return UniPoly(solve_exact(vandermonde_matrix(xs), ys))
