import json
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slablb.poly_core import (
    ExactMatrix,
    MultiPoly,
    UniPoly,
    bareiss,
    coeff_decompose,
    cofactor_det,
    count_real_roots,
    det_exact,
    eval_poly,
    gcd_univariate,
    has_root_in,
    interpolate,
    inverse_exact,
    leibniz_det,
    reassemble,
    resultant,
    solve_exact,
    substitute,
    sylvester,
    vandermonde_det,
    vandermonde_matrix,
)
from slablb.rng import grid_fraction, grid_fractions, trial_rng

fractions = st.builds(Fr, st.integers(-16, 16), st.integers(1, 8))


def random_multipoly(rng, nvars, deg, nterms):
    terms = {}
    for _ in range(nterms):
        exps = [0] * nvars
        for _ in range(int(rng.integers(0, deg + 1))):
            exps[int(rng.integers(0, nvars))] += 1
        terms[tuple(exps)] = grid_fraction(rng)
    return MultiPoly(nvars, terms, deg)


def random_matrix(rng, n):
    return ExactMatrix([grid_fractions(rng, n) for _ in range(n)])


def X(n, i):
    return MultiPoly.variable(n, i)


# -- evaluation / substitution ------------------------------------------------


def test_eval_examples():
    assert eval_poly(X(1, 0) ** 2 + 1, [2]) == 5
    assert eval_poly(X(2, 0) * X(2, 1), [1, 1]) == 1


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_poly(X(2, 0), [1])


def test_zero_coefficients_never_stored():
    p = X(2, 0) - X(2, 0) + 3
    assert p.terms == {(0, 0): Fr(3)}
    assert MultiPoly.zero(3).total_degree() == -1


def test_degree_bound_is_enforced():
    with pytest.raises(ValueError):
        MultiPoly(1, {(3,): 1}, degree_bound=2)
    assert (X(2, 0) * X(2, 1)).degree_bound == 2


def test_substitute_example():
    p = X(3, 0) * X(3, 1) + X(3, 2)
    assert substitute(p, {2: 2}) == MultiPoly(2, {(1, 1): 1, (0, 0): 2})


def test_substitute_full_assignment_is_eval():
    rng = trial_rng(1)
    for i in range(20):
        p = random_multipoly(rng, 4, 3, 8)
        pt = grid_fractions(rng, 4)
        q = substitute(p, dict(enumerate(pt)))
        assert q.num_vars == 0
        assert q.coefficient(()) == eval_poly(p, pt)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_substitute_then_eval_matches_combined_point(seed, nvars):
    rng = trial_rng(seed)
    p = random_multipoly(rng, nvars, 3, 6)
    pt = grid_fractions(rng, nvars)
    fixed = [i for i in range(nvars) if rng.integers(0, 2)]
    q = substitute(p, {i: pt[i] for i in fixed})
    rest = [pt[i] for i in range(nvars) if i not in fixed]
    assert eval_poly(q, rest) == eval_poly(p, pt)


# -- coefficient decomposition -------------------------------------------------


def test_coeff_decompose_example():
    # p = X1 X2 + X2^2 + 3, grouped by X2
    p = MultiPoly(2, {(1, 1): 1, (0, 2): 1, (0, 0): 3})
    parts = coeff_decompose(p, 1)
    assert parts == {(1,): UniPoly([0, 1]), (0,): UniPoly([3, 0, 1])}


def test_coeff_decompose_constant():
    parts = coeff_decompose(MultiPoly.constant(3, 5), 0)
    assert parts == {(0, 0): UniPoly([5])}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 8), st.integers(0, 4))
def test_coeff_decompose_reassembly(seed, nvars, deg):
    rng = trial_rng(seed)
    p = random_multipoly(rng, nvars, deg, 10)
    var = int(rng.integers(0, nvars))
    parts = coeff_decompose(p, var)
    assert reassemble(parts, var) == p
    # direct oracle: sum_j h_j(X_var) X^j
    total = MultiPoly.zero(nvars)
    for rest, h in parts.items():
        mono = MultiPoly(nvars, {rest[:var] + (0,) + rest[var:]: 1})
        total = total + mono * h.to_multipoly().embed(nvars, [var])
    assert total == p


def test_json_roundtrip_keeps_big_integers():
    p = MultiPoly(2, {(1, 0): Fr(3**80, 7), (0, 1): Fr(-1, 2**70)})
    s = json.dumps(p.to_json())
    assert MultiPoly.from_json(json.loads(s)) == p
    assert isinstance(p.to_json()["terms"][0]["num"], str)


def test_diff():
    p = MultiPoly(2, {(2, 1): 3, (0, 1): 1})
    assert p.diff(0) == MultiPoly(2, {(1, 1): 6})


# -- determinants ----------------------------------------------------------------


def test_det_small_examples():
    assert det_exact(ExactMatrix.identity(3)) == 1
    a, b, c, d = Fr(3, 2), Fr(-5), Fr(7, 3), Fr(1, 9)
    assert det_exact(ExactMatrix([[a, b], [c, d]])) == a * d - b * c


def test_det_non_square():
    with pytest.raises(ValueError):
        det_exact(ExactMatrix([[1, 2, 3], [4, 5, 6]]))


def test_det_needs_pivot_swap():
    m = ExactMatrix([[0, 1, 2], [1, 0, 3], [4, -3, 8]])
    assert det_exact(m) == cofactor_det(m.tolist(), Fr(0))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_bareiss_matches_cofactor(n):
    rng = trial_rng(n, stream="bareiss")
    for _ in range(10):
        m = random_matrix(rng, n)
        assert det_exact(m) == cofactor_det(m.tolist(), Fr(0))


def test_cofactor_and_leibniz_agree():
    rng = trial_rng(3)
    m = random_matrix(rng, 5).tolist()
    assert cofactor_det(m, Fr(0)) == leibniz_det(m, Fr(0))


def test_bareiss_reports_bit_growth():
    m = ExactMatrix([[2**40, 1], [3, 2**41]])
    det, bits = bareiss(m)
    assert det == 2**81 - 3
    assert bits >= 81


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), fractions)
def test_linearity_of_determinant(seed, n, r):
    rng = trial_rng(seed)
    m = random_matrix(rng, n)
    j = int(rng.integers(0, n))
    w, v = grid_fractions(rng, n), grid_fractions(rng, n)
    split = m.with_column(j, [r * wi + vi for wi, vi in zip(w, v)])
    assert det_exact(split) == r * det_exact(m.with_column(j, w)) + det_exact(m.with_column(j, v))


def test_vandermonde_examples():
    assert vandermonde_det([0, 1, 2]) == 2
    assert vandermonde_det([1, 1, 5]) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(fractions, min_size=1, max_size=6))
def test_vandermonde_product_matches_det(xs):
    assert vandermonde_det(xs) == det_exact(vandermonde_matrix(xs))


def test_solve_and_inverse():
    rng = trial_rng(9)
    m = random_matrix(rng, 4)
    while det_exact(m) == 0:
        m = random_matrix(rng, 4)
    b = grid_fractions(rng, 4)
    x = solve_exact(m, b)
    assert [sum(a * xi for a, xi in zip(row, x)) for row in m.tolist()] == b
    assert m @ inverse_exact(m) == ExactMatrix.identity(4)


# -- Sylvester / resultant / gcd -----------------------------------------------------


def test_sylvester_linear_pair():
    p1, p2, q1, q2 = Fr(2), Fr(3), Fr(-1), Fr(5)
    assert sylvester(UniPoly([p2, p1]), UniPoly([q2, q1])) == ExactMatrix([[p1, p2], [q1, q2]])


def test_sylvester_band_layout():
    # p = x^2 + 1 (1 row), q = x + 1 (2 rows)
    m = sylvester(UniPoly([1, 0, 1]), UniPoly([1, 1]))
    assert m == ExactMatrix([[1, 0, 1], [1, 1, 0], [0, 1, 1]])
    assert det_exact(m) == 2  # p(-1)


def test_sylvester_degenerate_constant_partner():
    # deg(p) = 1, deg(q) = 0: 1x1 matrix [1]
    m = sylvester(UniPoly([0, 1]), UniPoly([1, 0]))
    assert m == ExactMatrix([[1]])
    assert resultant(UniPoly([0, 1]), UniPoly([1, 0])) == 1


def test_sylvester_rejects_two_constants_and_zero():
    with pytest.raises(ValueError):
        sylvester(UniPoly([2]), UniPoly([3]))
    with pytest.raises(ValueError):
        sylvester(UniPoly([0]), UniPoly([0, 1]))


def test_resultant_examples():
    assert resultant(UniPoly([2, 1]), UniPoly([2, 1])) == 0
    assert resultant(UniPoly([3, 2]), UniPoly([1, 1])) == -1
    g0, f1, f0 = Fr(3, 4), Fr(-2), Fr(5, 3)
    assert resultant(UniPoly([g0, 1]), UniPoly([f0, f1])) == f0 - g0 * f1


def test_resultant_against_root_product():
    # Res(p, q) = lc(p)^deg q * prod q(roots of p)
    rng = trial_rng(11)
    for _ in range(20):
        roots = grid_fractions(rng, 3)
        p = UniPoly.from_roots(roots, lead=Fr(3, 2))
        q = UniPoly(grid_fractions(rng, 3))
        if q.degree() < 1:
            continue
        expected = Fr(3, 2) ** q.degree()
        for r in roots:
            expected *= q(r)
        assert resultant(p, q) == expected


def test_gcd_examples():
    p = UniPoly.from_roots([-1, -2])
    q = UniPoly.from_roots([-1, -3])
    assert gcd_univariate(p, q) == UniPoly([1, 1])
    assert gcd_univariate(UniPoly([1, 1]), UniPoly([2, 1])) == UniPoly([1])
    with pytest.raises(ValueError):
        gcd_univariate(UniPoly([0]), UniPoly([0]))


def test_gcd_recovers_planted_factor():
    rng = trial_rng(12)
    for _ in range(30):
        planted = UniPoly(grid_fractions(rng, 2) + [1])
        a = UniPoly(grid_fractions(rng, 2) + [Fr(1, 2)])
        b = UniPoly(grid_fractions(rng, 3) + [3])
        g = gcd_univariate(planted * a, planted * b)
        expected = gcd_univariate(planted * gcd_univariate(a, b), planted)
        if gcd_univariate(a, b).degree() == 0:
            assert g == planted.monic()
        else:
            assert g.divmod(expected)[1].is_zero()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_resultant_zero_iff_common_factor(seed, plant):
    rng = trial_rng(seed)
    p = UniPoly(grid_fractions(rng, 3) + [grid_fraction(rng, nonzero=True)])
    q = UniPoly(grid_fractions(rng, 2) + [grid_fraction(rng, nonzero=True)])
    if plant:
        f = UniPoly([grid_fraction(rng), 1])
        p, q = p * f, q * f
    common = gcd_univariate(p, q).degree() >= 1
    assert (resultant(p, q) == 0) == common
    if plant:
        assert common


# -- root counting -------------------------------------------------------------------


def test_count_real_roots():
    p = UniPoly.from_roots([Fr(1, 2), 2, 2, 5])
    assert count_real_roots(p, 0, 3) == 2
    assert count_real_roots(p, 2, 2) == 1
    assert count_real_roots(p, Fr(1, 2), 5) == 3
    assert count_real_roots(p, 6, 7) == 0
    assert count_real_roots(UniPoly([1, 0, 1]), -10, 10) == 0
    assert has_root_in(UniPoly([0]), 0, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(fractions, min_size=1, max_size=4), fractions, fractions)
def test_root_count_matches_planted_roots(roots, lo, hi):
    lo, hi = min(lo, hi), max(lo, hi)
    p = UniPoly.from_roots(roots) * UniPoly([1, 0, 1])
    assert count_real_roots(p, lo, hi) == len({r for r in roots if lo <= r <= hi})


def test_interpolate():
    xs = [0, 1, 2, 3]
    p = UniPoly([1, -2, Fr(1, 3), 4])
    assert interpolate(xs, [p(x) for x in xs]) == p
