import random

import pytest
import sympy as sp

from fracsato import (
    INF,
    NotInvertible,
    NotNormalized,
    PsDO,
    Q,
    XSeries,
    ZeroOrder,
    commutator,
    diff_part,
    int_part,
    is_normalized,
    lax_bracket,
    parse_psdo,
    psdo_adjoint,
    psdo_invert,
    schur_dress,
)

x = sp.Symbol("x")


def rand_poly_op(rng, order, deg=3):
    return PsDO({k: XSeries([Q(rng.randint(-3, 3)) for _ in range(deg + 1)]) for k in range(order + 1)})


def act(p: PsDO, f):
    """Oracle: apply a differential operator with polynomial coefficients to ``f(x)``."""
    out = 0
    for k, c in p.terms.items():
        u = sum(sp.Rational(str(a)) * x**i for i, a in enumerate(c.coeffs))
        out += u * sp.diff(f, x, k)
    return sp.expand(out)


def test_leibniz_examples():
    D, X = PsDO.D(1), PsDO.x(1)
    assert D * X == X * D + 1
    assert PsDO.D(-1) * X == X * PsDO.D(-1) - PsDO.D(-2)
    # D^-1 x^2 = x^2 D^-1 - 2x D^-2 + 2 D^-3
    lhs = PsDO.D(-1) * PsDO.x(2)
    assert lhs == parse_psdo("x^2*D^-1 - 2*x*D^-2 + 2*D^-3")


def test_composition_matches_action():
    rng = random.Random(3)
    f = x**7 + 3 * x**4 - x + 2
    for _ in range(25):
        a, b = rand_poly_op(rng, rng.randint(0, 3)), rand_poly_op(rng, rng.randint(0, 3))
        assert act(a * b, f) == sp.expand(act(a, act(b, f)))


def test_inverse_is_two_sided():
    p = parse_psdo("D^2 + (1 + x)*D^0")
    inv = psdo_invert(p, depth=6, prec=8)
    for prod in (p * inv, inv * p):
        assert prod.agrees(1) and prod.floor < 0
    with pytest.raises(NotInvertible):
        psdo_invert(parse_psdo("x*D^1"))


def test_truncated_inverse_window():
    p = PsDO({1: XSeries.const(1), 0: XSeries([Q(1), Q(2)], 4)}, -2)
    inv = psdo_invert(p)
    assert inv.floor == -4
    assert (p * inv).agrees(1)


def test_adjoint():
    assert psdo_adjoint(parse_psdo("x*D^1")) == parse_psdo("-x*D^1 - 1*D^0")
    rng = random.Random(5)
    for _ in range(10):
        a, b = rand_poly_op(rng, 2), rand_poly_op(rng, 2)
        assert psdo_adjoint(a * b) == psdo_adjoint(b) * psdo_adjoint(a)
        assert psdo_adjoint(psdo_adjoint(a)) == a


def test_parts():
    p = parse_psdo("D^1 + x*D^0 + D^-1 + O(D^-4)")
    assert diff_part(p) == parse_psdo("D^1 + x*D^0")
    assert int_part(p).top == -1
    assert is_normalized(parse_psdo("D^2 + x*D^0"))
    assert not is_normalized(parse_psdo("D^2 + x*D^1"))


def test_schur_round_trip():
    rng = random.Random(11)
    for m in (1, 2, 3):
        U = PsDO({0: XSeries.const(1), **{-j: XSeries([Q(0)] + [Q(rng.randint(-2, 2)) for _ in range(4)]) for j in range(1, 5)}})
        L = U * PsDO.D(m) * psdo_invert(U, depth=5)
        V = schur_dress(L)
        assert V.agrees(U)
        assert all(V.terms[-j][0] == 0 for j in range(1, 4))


def test_schur_errors():
    with pytest.raises(ZeroOrder):
        schur_dress(PsDO.const(1))
    with pytest.raises(NotNormalized):
        schur_dress(parse_psdo("D^2 + D^1"))


def test_lax_bracket_has_negative_order():
    l = parse_psdo("D^1 + x*D^-1 + x^2*D^-2 + O(D^-6)")
    for n in (2, 3):
        b = lax_bracket(l, n)
        assert all(k < 0 for k, c in b.terms.items() if not c.is_zero())


def test_commutator_of_powers_vanishes():
    l = parse_psdo("D^2 + x*D^0")
    assert commutator(l * l, l * l * l).is_zero()
    assert commutator(l * l, l).floor == -INF
