import random

import pytest

from fracsato import (
    FracOp,
    NotDifferential,
    PsDO,
    Q,
    Verdict,
    XSeries,
    common_denominators,
    dord,
    frac_make,
    is_differential,
    ore_solve,
    ore_solve_left,
    parse_psdo,
    right_divide,
    right_gcd,
)

D, X, ONE = PsDO.D(1), PsDO.x(1), PsDO.const(1)


def rand_diff(rng, order, deg=2):
    terms = {k: XSeries([Q(rng.randint(-2, 2)) for _ in range(deg + 1)]) for k in range(order)}
    terms[order] = XSeries.const(1)
    return PsDO(terms)


def test_right_division():
    a = parse_psdo("D^3 + x*D^1 + 1*D^0")
    b = parse_psdo("D^1 + x*D^0")
    q, r = right_divide(a, b)
    assert (q * b + r) == a and (r.order is None or r.order < 1)


def test_right_gcd_recovers_common_factor():
    g = parse_psdo("D^1 + x*D^0")
    a = parse_psdo("D^1 + 2*D^0") * g
    b = parse_psdo("D^2 - 1*D^0") * g
    assert right_gcd(a, b) == g


def test_ore_solve_identity():
    rng = random.Random(8)
    r, l = ore_solve(D, X)
    assert X * r == D * l
    for _ in range(6):
        p, q = rand_diff(rng, rng.randint(1, 2), 1), rand_diff(rng, 1, 1)
        r, l = ore_solve(p, q)
        assert (q * r - p * l).is_zero()
        assert l.order <= q.order and not r.is_zero()
        ll, rr = ore_solve_left(p, q)
        assert (ll * p - rr * q).is_zero()


def test_ore_solve_rejects_non_differential():
    with pytest.raises(NotDifferential):
        ore_solve(PsDO.D(-1), D)


def test_fraction_arithmetic():
    inv = frac_make(ONE, D)
    assert (FracOp.from_psdo(D) * inv).expansion().agrees(1)
    assert (inv * FracOp.from_psdo(D)).expansion().agrees(1)
    s = inv + inv
    assert s.expansion().agrees(PsDO.D(-1).scale(2))
    t = FracOp.from_psdo(D) + inv
    assert (t * t).expansion().agrees(D * D + 2 + PsDO.D(-2))


def test_fraction_reduction():
    u = parse_psdo("D^1 + x*D^0")
    f = frac_make(D * D * u, D * u)
    assert f.reduced
    assert f.expansion().agrees(D)


def test_dord_values():
    assert dord(frac_make(ONE, D)) == 1
    assert dord(FracOp.from_psdo(D * D + X)) == 0
    assert dord(frac_make(ONE, D * D + X)) == 2
    r = dord(frac_make(ONE, D))
    assert is_differential(PsDO.D(-1) * r.witness).verdict is Verdict.YES


def test_is_differential_three_ways():
    assert is_differential(frac_make(D * D - 1, D - 1)).verdict is Verdict.YES
    assert is_differential(frac_make(ONE, D)).verdict is Verdict.NO


def test_common_denominators_orders():
    pairs = [(ONE, D), (X * D + 1, D + X)]
    cd = common_denominators(pairs)
    total = sum(q.order for _, q in pairs)
    assert cd.l_right.order <= total and cd.l_left.order <= total
    assert all(c.verdict is Verdict.YES for c in cd.right_checks + cd.left_checks)
