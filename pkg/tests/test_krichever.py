import random

import pytest

from fracsato import (
    CurveData,
    PointNotOnCurve,
    Q,
    ZOperator,
    ZSeries,
    conjugated_pair,
    elliptic_plane,
    elliptic_relation,
    example_4_5,
    parse_psdo,
    parse_ratpoly2,
    rank1_verify,
    right_act,
    section_check,
    standard_plane,
    weierstrass_p,
    weierstrass_residual,
    z_apply,
)
from fracsato.krichever import op_rational_section, weierstrass_coefficients

z = ZSeries.monomial(1)


def test_weierstrass_known_coefficients():
    g2, g3 = Q(3), Q(-2)
    c = weierstrass_coefficients(g2, g3, 5)
    assert c[2] == g2 / 20 and c[3] == g3 / 28
    assert c[4] == g2**2 / 1200
    assert c[5] == 3 * g2 * g3 / 6160


def test_weierstrass_ode():
    rng = random.Random(6)
    for _ in range(5):
        g2, g3 = Q(rng.randint(-9, 9)) / 7, Q(rng.randint(-9, 9)) / 5
        wp, wpp = weierstrass_p(g2, g3, 9)
        res = weierstrass_residual(g2, g3, wp, wpp)
        assert not res.terms and res.floor <= -10
        assert wpp.agrees(wp.deriv().scale(-1).shift(0) * z * z)


def test_cusp_is_exact():
    wp, wpp = weierstrass_p(0, 0)
    assert str(wp) == "z^2" and str(wpp) == "-2*z^3"


def test_curve_validation():
    with pytest.raises(PointNotOnCurve):
        CurveData(1, 1, 1, 2)
    c = CurveData(1, -1, 1, 2)
    assert c.discriminant == -26 and not c.singular


def test_cusp_plane_and_operators():
    W = elliptic_plane(CurveData(0, 0, 1, 2), 10)
    assert str(W.basis[0]).startswith("1 - z^-2")
    pair = conjugated_pair(W)
    L2 = parse_psdo("D^2 - 2*D^0 + 4*x*D^0 - 6*x^2*D^0")
    assert pair.l2.terms[2].agrees(1)
    assert pair.l2.terms[0].truncate(3).agrees(L2.terms[0])
    F, _ = elliptic_relation(W, pair)
    assert F == parse_ratpoly2("w^2 - 4*z^3")
    assert rank1_verify(W, W.wp)


def test_smooth_relation():
    c = CurveData(1, -1, 1, 2)
    W = elliptic_plane(c, 10)
    F, _ = elliptic_relation(W)
    assert F == parse_ratpoly2("w^2 - 4*z^3 + z - 1")


def test_zoperator_matches_right_action():
    op = ZOperator({2: ZSeries({1: 1, 0: 2}), 1: ZSeries({-1: 3}), 0: ZSeries({2: -1})})
    P = op.to_psdo()
    for j in (-2, 0, 3, 5):
        v = ZSeries.monomial(j)
        assert z_apply(op, v).agrees(right_act(v, P))


def test_zoperator_composition():
    rng = random.Random(2)
    for _ in range(5):
        a = ZOperator({k: ZSeries({e: Q(rng.randint(-2, 2)) for e in range(-1, 2)}) for k in range(2)})
        b = ZOperator({k: ZSeries({e: Q(rng.randint(-2, 2)) for e in range(-1, 2)}) for k in range(3)})
        v = ZSeries({3: 1, 1: -2, -1: 5})
        assert z_apply(a.compose(b), v).agrees(z_apply(a, z_apply(b, v)))


def test_z_apply_example():
    op = ZOperator({1: ZSeries({2: 1})})
    assert z_apply(op, ZSeries.monomial(-1)).agrees(-1)


def test_section_checks():
    W = standard_plane(10)
    assert section_check(W, ZOperator({1: ZSeries.const(1)})).kind == "preserving"
    assert section_check(W, ZOperator.multiplication(z * z)).kind == "preserving"
    ex = section_check(example_4_5(14), ZOperator({1: ZSeries.const(1)}))
    assert ex.kind in ("rational-section", "unknown-at-precision")
    assert ex.witnesses
    W = elliptic_plane(CurveData(1, -1, 1, 2), 8)
    assert section_check(W, ZOperator.multiplication(W.wp)).kind == "preserving"
    assert section_check(W, op_rational_section(W)).kind == "preserving"
