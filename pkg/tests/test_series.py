from fractions import Fraction as Q

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from eqtodd.series import (
    B_series,
    DivisionError,
    GermOrderError,
    LinearForm,
    MeromorphicGerm,
    PolySeries,
    b_coefficients,
    bernoulli_numbers,
    divide_by_linear,
    exp_linear,
    g_coefficients,
    g_series,
    germ_add,
    germ_equal,
    germ_mul,
    germ_negate,
    germ_normalize,
    germ_scale,
    format_series,
    series_from_json,
    series_to_json,
    substitute,
)

z = sp.symbols("z")


def sympy_coeffs(expr, order):
    ser = sp.series(expr, z, 0, order + 1).removeO()
    return [Q(str(sp.Rational(ser.coeff(z, k)))) for k in range(order + 1)]


def uni(coeffs, order):
    return PolySeries(1, order, {(k,): c for k, c in enumerate(coeffs)})


X = PolySeries.variable(0, 2, None)
Y = PolySeries.variable(1, 2, None)


# ----------------------------------------------------------- special series


def test_bernoulli_matches_sympy_generating_function():
    got = bernoulli_numbers(12)
    oracle = sympy_coeffs(z / (sp.exp(z) - 1), 11)
    assert got == [c * sp.factorial(k) for k, c in enumerate(oracle)]
    assert got[1] == Q(-1, 2)


def test_b_coefficients_match_definition():
    assert b_coefficients(10) == sympy_coeffs(1 / (1 - sp.exp(z)) + 1 / z, 10)


def test_b_low_order_values():
    assert b_coefficients(3) == [Q(1, 2), Q(-1, 12), 0, Q(1, 720)]
    assert B_series(LinearForm((-1,)), 1) == uni([Q(1, 2), Q(1, 12)], 1)


def test_g_series_matches_sympy():
    assert g_coefficients(9) == sympy_coeffs(z / (1 - sp.exp(-z)), 9)
    assert g_series(4) == uni([1, Q(1, 2), Q(1, 12), 0, Q(-1, 720)], 4)


@pytest.mark.parametrize("order", [0, 3, 8])
def test_g_equals_one_plus_z_b_minus_z(order):
    zser = PolySeries.variable(0, 1, order)
    rhs = 1 + zser * B_series(LinearForm((-1,)), order)
    assert g_series(order) == rhs


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3).filter(any), st.integers(0, 7))
@settings(max_examples=25, deadline=None)
def test_b_plus_b_negated_is_one(coeffs, order):
    m = LinearForm(coeffs)
    assert B_series(m, order) + B_series(-m, order) == PolySeries.constant(1, 3, order)


def test_b_rejects_zero_form():
    with pytest.raises(ValueError):
        B_series(LinearForm((0, 0)), 3)


def test_quadrant_product():
    r = B_series(LinearForm((-1, 0)), 2) * B_series(LinearForm((0, -1)), 2)
    want = {(0, 0): Q(1, 4), (1, 0): Q(1, 24), (0, 1): Q(1, 24), (1, 1): Q(1, 144)}
    assert r == PolySeries(2, 2, want)


# --------------------------------------------------------------- arithmetic


def test_exp_linear_examples():
    assert exp_linear(LinearForm((1,)), 2) == uni([1, 1, Q(1, 2)], 2)
    assert exp_linear(LinearForm((0, 0)), 5) == PolySeries.constant(1, 2, 5)


def test_exp_linear_matches_sympy():
    x, y = sp.symbols("x y")
    got = exp_linear(LinearForm((2, -3)), 4)
    t = sp.symbols("t")
    expanded = sp.expand(sp.series(sp.exp(t * (2 * x - 3 * y)), t, 0, 5).removeO().subs(t, 1))
    poly = sp.Poly(expanded, x, y)
    assert got.terms == {m: Q(str(c)) for m, c in zip(poly.monoms(), poly.coeffs())}


def test_truncated_product():
    one = PolySeries.constant(1, 1, 2)
    x = PolySeries.variable(0, 1, 2)
    assert (one + x) * (one - x) == uni([1, 0, -1], 2)


def test_order_is_minimum():
    a = PolySeries.constant(1, 2, 3)
    b = PolySeries.constant(1, 2, 5)
    assert (a + b).order == 3
    assert (a * PolySeries.constant(2, 2, None)).order == 3


def test_variable_count_mismatch():
    with pytest.raises(ValueError):
        PolySeries.constant(1, 2) + PolySeries.constant(1, 3)


def test_no_zero_or_overflow_terms_stored():
    s = PolySeries(2, 1, {(0, 0): 0, (1, 0): 2, (1, 1): 5})
    assert s.terms == {(1, 0): Q(2)}


poly_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=6,
)


@given(poly_terms, poly_terms)
@settings(max_examples=40, deadline=None)
def test_product_matches_sympy(a, b):
    x = sp.symbols("x0:3")
    to_sp = lambda t: sum((sp.Rational(c.numerator, c.denominator) * sp.prod([v**e for v, e in zip(x, k)]) for k, c in t.items()), sp.Integer(0))
    got = (PolySeries(3, None, a) * PolySeries(3, None, b)).terms
    expected = sp.Poly(sp.expand(to_sp(a) * to_sp(b)), *x)
    want = {m: Q(str(c)) for m, c in zip(expected.monoms(), expected.coeffs()) if c != 0}
    assert got == want


@given(poly_terms, st.integers(0, 6))
@settings(max_examples=30, deadline=None)
def test_power_is_repeated_product(a, k):
    s = PolySeries(3, 5, a)
    p = PolySeries.constant(1, 3, 5)
    for _ in range(k):
        p = p * s
    assert s**k == p


def test_compose_into_two_variables():
    s = uni([1, 2, 3], 2)
    out = s.compose([X + Y])
    assert out == PolySeries(2, 2, {(0, 0): 1, (1, 0): 2, (0, 1): 2, (2, 0): 3, (1, 1): 6, (0, 2): 3})


def test_substitute():
    s = X + Y
    assert substitute(s, negate=True) == -X - Y
    c = PolySeries.constant(7, 2, 4)
    assert substitute(c, [LinearForm((1, 0)), LinearForm((0, 1))], negate=True) == c
    r = B_series(LinearForm((-1, 0)), 3) * B_series(LinearForm((0, -1)), 3)
    assert substitute(r, negate=True) == B_series(LinearForm((1, 0)), 3) * B_series(LinearForm((0, 1)), 3)


# ----------------------------------------------------------------- division


def test_divide_examples():
    assert divide_by_linear(X * X - X * Y, LinearForm((1, 0))) == X - Y
    with pytest.raises(DivisionError) as info:
        divide_by_linear(X, LinearForm((0, 1)))
    assert info.value.degree == 1


def test_divide_bracket_from_the_2d_formula():
    T = 6
    num = B_series(LinearForm((0, -1)), T) - B_series(LinearForm((1, -1)), T)
    q = divide_by_linear(num, LinearForm((1, 0)))
    assert q.order == T - 1
    assert q.constant_term == Q(1, 12)
    assert (q * X).agrees_with(num, T)


@given(poly_terms, st.lists(st.integers(-3, 3), min_size=3, max_size=3).filter(any), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_division_round_trip(q_terms, form, order):
    q = PolySeries(3, order, q_terms)
    lf = LinearForm(form)
    prod = PolySeries(3, order + 1, q.terms) * lf.series(None)
    assert divide_by_linear(prod, lf) == q


# -------------------------------------------------------------------- germs


def test_one_over_one_minus_exp_is_b_minus_inverse():
    T = 6
    x = LinearForm((1,))
    # 1/(1-e^x) = -g(-x)/x
    g_neg = uni(g_coefficients(T), T).compose([(-x).series(T)])
    lhs = MeromorphicGerm(-g_neg, (x,))
    b = MeromorphicGerm(B_series(x, T), ())
    inv = MeromorphicGerm(PolySeries.constant(-1, 1, None), (x,))
    assert germ_equal(lhs, germ_add(b, inv))


def test_germ_reflexive_and_scaled_denominators():
    g = MeromorphicGerm(PolySeries.constant(1, 2, 5), (LinearForm((2, 0)),))
    assert germ_equal(g, g)
    h = MeromorphicGerm(PolySeries.constant(Q(1, 2), 2, 5), (LinearForm((1, 0)),))
    assert germ_equal(g, h)
    assert g.denominators == (LinearForm((1, 0)),)


def test_germ_effective_order_and_guard():
    g = MeromorphicGerm(PolySeries.constant(1, 2, 1), (LinearForm((1, 0)), LinearForm((0, 1))))
    assert g.effective_order == -1
    with pytest.raises(GermOrderError):
        germ_equal(g, g, order=-1)


def test_germ_mul_and_normalize():
    a = MeromorphicGerm(X * Y, (LinearForm((1, 0)),))
    b = MeromorphicGerm(PolySeries.constant(3, 2, None), (LinearForm((0, 1)),))
    prod = germ_normalize(germ_mul(a, b))
    assert prod.denominators == ()
    assert prod.numerator == PolySeries.constant(3, 2, None)
    assert germ_normalize(prod).numerator == prod.numerator


def test_germ_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        MeromorphicGerm(PolySeries.constant(1, 2), (LinearForm((0, 0)),))


def test_germ_negate_and_scale():
    g = MeromorphicGerm(PolySeries.constant(1, 2, None), (LinearForm((1, 0)), LinearForm((0, 1))))
    assert germ_equal(germ_negate(g), g)
    one = MeromorphicGerm(PolySeries.constant(1, 2, None), (LinearForm((1, 1)),))
    assert germ_equal(germ_negate(one), germ_scale(one, -1))


# --------------------------------------------------------------- formatting


def test_json_round_trip():
    s = PolySeries(2, 3, {(0, 0): Q(1, 4), (2, 1): Q(-5, 7)})
    blob = series_to_json(s)
    assert blob["terms"][1]["coef"] == "-5/7"
    assert series_from_json(blob) == s


def test_format_series():
    s = PolySeries(2, 2, {(0, 0): Q(3, 8), (1, 0): Q(-1, 12), (0, 1): 1})
    assert format_series(s) == "3/8 - 1/12*x + y"
    assert format_series(PolySeries.zero(1)) == "0"
