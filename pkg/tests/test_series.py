from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from fracsato import INF, Certificate, PrecisionExhausted, Q, Verdict, XSeries, ZSeries
from fracsato.series import binom, falling, series_derive, series_invert, series_mul

x = sp.Symbol("x")
rats = st.fractions(min_value=-5, max_value=5, max_denominator=6)
coeff_lists = st.lists(rats, min_size=1, max_size=7)


def to_sympy(s: XSeries):
    return sum(sp.Rational(int(c.numerator), int(c.denominator)) * x**k for k, c in enumerate(s.coeffs))


def from_fracs(cs, prec=None):
    return XSeries([Q(c) for c in cs], len(cs) if prec is None else prec)


def test_q_rejects_floats():
    with pytest.raises(TypeError):
        Q(0.5)
    assert Q("3/4") == Q(3) / 4
    assert Q(Fraction(1, 3)) * 3 == 1


def test_falling_and_binom():
    assert falling(5, 2) == 20
    assert falling(-1, 3) == -6
    assert falling(2, 3) == 0
    assert binom(-1, 3) == -1
    assert binom(Q("1/2"), 2) == Q("-1/8")


@given(coeff_lists, coeff_lists)
def test_product_matches_sympy(a, b):
    sa, sb = from_fracs(a), from_fracs(b)
    prod = sa * sb
    assert prod.prec >= min(len(a), len(b))
    ref = sp.Poly(sp.expand(to_sympy(sa) * to_sympy(sb)), x)
    for k in range(int(prod.prec)):
        assert sp.Rational(str(prod[k])) == ref.coeff_monomial(x**k)


@given(coeff_lists)
def test_inverse_matches_sympy(a):
    if a[0] == 0:
        a = [Fraction(1)] + a[1:]
    s = from_fracs(a)
    inv = s.invert()
    ref = sp.series(1 / to_sympy(s), x, 0, len(a)).removeO()
    for k in range(len(a)):
        assert sp.Rational(str(inv[k])) == sp.expand(ref).coeff(x, k)
    assert (s * inv).agrees(1)


def test_exact_inverse_needs_prec():
    s = XSeries([Q(1), Q(-1)])
    with pytest.raises(ValueError):
        s.invert()
    g = s.invert(5)
    assert list(g.coeffs) == [1] * 5 and g.prec == 5
    assert g == XSeries.geometric(1, 5)


def test_untrusted_coefficient_raises():
    s = XSeries([Q(1), Q(2)], 2)
    assert s[1] == 2
    with pytest.raises(PrecisionExhausted):
        s[2]
    assert XSeries([Q(1)])[9] == 0


def test_derivative_and_integral_precision():
    s = XSeries([Q(1), Q(2), Q(3)], 3)
    d = s.deriv()
    assert list(d.coeffs) == [2, 6] and d.prec == 2
    i = d.integrate(1)
    assert i.agrees(s) and i.prec == 3
    with pytest.raises(PrecisionExhausted):
        series_derive(XSeries([], 0))


def test_module_wrappers():
    a = XSeries([Q(1), Q(1)], 4)
    assert list(series_mul(a, a).coeffs[:3]) == [1, 2, 1]
    assert (series_invert(a) * a).agrees(1)


def test_zseries_arithmetic_and_floor():
    a = ZSeries({1: 1, -1: 2}, floor=-3)
    b = ZSeries({2: 1})
    c = a * b
    assert c.terms == {3: 1, 1: 2} and c.floor == -1
    assert (a - a).is_zero()
    inv = ZSeries({1: 1, 0: -1}).invert(floor=-6)
    prod = inv * ZSeries({1: 1, 0: -1})
    assert prod.agrees(1) and prod.floor <= 0


def test_zseries_truncated_inverse_floor():
    s = ZSeries({2: 1, -2: Q(1) / 20}, floor=-5)
    inv = s.invert()
    assert inv.top == -2
    assert (s * inv).agrees(1)


def test_certificate_is_three_valued():
    c = Certificate(Verdict.YES)
    with pytest.raises(TypeError):
        bool(c)
    assert Verdict.UNKNOWN.value == "unknown-at-precision"


def test_exact_marker():
    assert XSeries([Q(1)]).prec == INF
    assert ZSeries({0: 1}).is_exact
