import pytest

from fracsato import (
    FracOp,
    NoRelationWithinBudget,
    NotCommutingAtWindow,
    PsDO,
    frac_make,
    order_bounds,
    parse_psdo,
    parse_ratpoly2,
    span_dim,
)
from fracsato.relations import bc_relation

D, ONE = PsDO.D(1), PsDO.const(1)


def test_fractional_pair_relation():
    T = FracOp.from_psdo(D) + frac_make(ONE, D)
    F, rep = bc_relation(D, T, return_report=True)
    assert F == parse_ratpoly2("z*w - z^2 - 1")
    assert rep.residual_window["floor"] < -2


def test_differential_pairs():
    assert bc_relation(D, D * D) == parse_ratpoly2("w - z^2")
    L = parse_psdo("D^2 + x*D^0")
    F = bc_relation(L * L, L * L * L)
    assert F == parse_ratpoly2("w^2 - z^3")


def test_relation_evaluates_to_zero():
    S = frac_make(D * D + ONE, D + ONE)
    p, q = S, S * S + S
    F = bc_relation(p, q)
    val = F.evaluate(p.expansion(), q.expansion(), ONE)
    assert all(c.is_zero() for c in val.terms.values())


def test_non_commuting_pair_is_rejected():
    with pytest.raises(NotCommutingAtWindow):
        bc_relation(D, parse_psdo("D^1 + x*D^0"))


def test_no_relation_within_budget():
    # D and D^-1 + D^-3 + ... commute but need a high-degree relation
    q = frac_make(ONE, D * D * D + D)
    with pytest.raises(NoRelationWithinBudget) as info:
        bc_relation(D, q, n_max=1)
    assert info.value.growth


def test_span_growth_and_bounds():
    T = FracOp.from_psdo(D) + frac_make(ONE, D)
    for n in (1, 2, 3):
        rep = span_dim(D, T, n)
        assert rep.span_dim <= rep.bound
    lo, hi = order_bounds(D, T, 2)
    assert (lo, hi) == (-2, 4)
    L = parse_psdo("D^2 + x*D^0")
    rep = span_dim(L, L * L, 3)
    assert rep.span_dim <= rep.differential_bound
