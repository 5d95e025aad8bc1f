import pytest
from hypothesis import given, strategies as st

from fracsato import (
    ParseError,
    PsDO,
    Q,
    XSeries,
    ZSeries,
    format_psdo,
    format_ratpoly2,
    format_xseries,
    format_zseries,
    parse_frac,
    parse_psdo,
    parse_ratpoly2,
    parse_xseries,
    parse_zseries,
)

rats = st.fractions(min_value=-9, max_value=9, max_denominator=7).map(Q)


@st.composite
def xseries(draw):
    cs = draw(st.lists(rats, max_size=6))
    exact = draw(st.booleans())
    prec = None if exact else draw(st.integers(len(cs), len(cs) + 3))
    return XSeries(cs) if exact else XSeries(cs, prec)


@st.composite
def zseries(draw):
    terms = draw(st.dictionaries(st.integers(-6, 4), rats, max_size=5))
    floor = draw(st.one_of(st.none(), st.integers(-9, -7)))
    return ZSeries(terms) if floor is None else ZSeries(terms, floor)


@given(xseries())
def test_xseries_round_trip(s):
    back = parse_xseries(format_xseries(s))
    assert back.agrees(s) and back.prec == s.prec


@given(zseries())
def test_zseries_round_trip(s):
    back = parse_zseries(format_zseries(s))
    assert back.agrees(s) and back.floor == s.floor


@given(st.dictionaries(st.integers(-3, 3), xseries(), min_size=1, max_size=4))
def test_psdo_round_trip(terms):
    p = PsDO(terms, min(terms) - 1)
    back = parse_psdo(format_psdo(p))
    assert back.agrees(p) and back.floor == p.floor


def test_grammar_examples():
    s = parse_xseries("1 - 3/2*x + x^4 + O(x^6)")
    assert [s[k] for k in range(6)] == [1, Q("-3/2"), 0, 0, 1, 0] and s.prec == 6
    z = parse_zseries("z^3 + 2 + 5*z^-1 + O(z^-8)")
    assert z.terms == {3: 1, 0: 2, -1: 5} and z.floor == -7
    p = parse_psdo("D^2 + x*D^0 - 2*D^-1")
    assert p.order == 2 and p.terms[-1].agrees(-2)
    f = parse_frac("frac((1)*D^2+(1)*D^0;(1)*D^1)")
    assert f.den.order == 1
    poly = parse_ratpoly2("w^2 - 4*z^3 + z")
    assert format_ratpoly2(poly) == "w^2 - 4*z^3 + z"


@pytest.mark.parametrize("bad", ["1 + y", "x^", "(1 + x", "", "O(y^3)"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_xseries(bad)
