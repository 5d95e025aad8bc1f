import math
import random

import pytest

from fracsato import (
    FNotCertified,
    NotBigCell,
    Plane,
    PsDO,
    Q,
    Verdict,
    XSeries,
    ZSeries,
    certify_differential,
    clear_tails,
    conjugate_spectral,
    dressing_from_plane,
    example_4_5,
    field_membership,
    frac_certify,
    parse_psdo,
    plane_from_dressing,
    quotient_dim,
    rank,
    right_act,
    schur_dress,
    spectral_algebra,
    spectral_membership,
    spectral_polynomials,
    standard_plane,
)
from fracsato.series import falling

z = ZSeries.monomial(1)


def right_act_oracle(j, p: PsDO, lo):
    """Termwise ``z^j . u(x) D^m`` with ``z^j . x^k = j!/(j-k)! z^(j-k)``."""
    out = {}
    for m, u in p.terms.items():
        for k, a in enumerate(u.coeffs):
            e = j - k + m
            if a and e >= lo:
                out[e] = out.get(e, 0) + a * falling(j, k)
    return {e: c for e, c in out.items() if c}


def test_right_action_matches_oracle():
    p = parse_psdo("(1 + x^2)*D^1 + (3 - x)*D^0 + x^3*D^-2")
    for j in range(-3, 6):
        got = right_act(ZSeries.monomial(j), p)
        ref = right_act_oracle(j, p, -12)
        assert {e: c for e, c in got.terms.items() if e >= -12 and c} == ref


def test_right_action_is_an_action():
    a = parse_psdo("D^1 + x*D^0")
    b = parse_psdo("x^2*D^0 + D^-1")
    for j in range(0, 6):
        v = ZSeries.monomial(j)
        assert right_act(right_act(v, a), b).agrees(right_act(v, a * b))


def test_plane_dressing_round_trip():
    rng = random.Random(2)
    U = PsDO({0: XSeries.const(1), **{-j: XSeries([Q(0)] + [Q(rng.randint(-2, 2)) for _ in range(5)]) for j in range(1, 6)}})
    W = plane_from_dressing(U, 12)
    V = dressing_from_plane(W, jmax=5, prec=6)
    assert V.agrees(U)
    W2 = plane_from_dressing(V, 4)
    assert all(a.agrees(b) for a, b in zip(W.basis[:5], W2.basis))


def test_example_plane_basis():
    W = example_4_5(6)
    assert [str(v) for v in W.basis[:4]] == ["1", "z + z^-1", "z^2", "z^3 - 3*z^-1"]
    with pytest.raises(NotBigCell):
        Plane.from_spanning([ZSeries({1: 1}), ZSeries({-1: 1})], 1)


def test_standard_plane_spectral_algebra_is_polynomials():
    W = standard_plane(10)
    assert spectral_membership(W, z * z + 3).verdict is Verdict.YES
    polys = spectral_polynomials(W, 4)
    assert len(polys) == 5


def test_example_plane_algebra_is_trivial():
    W = example_4_5(14)
    for d in range(1, 7):
        c = spectral_membership(W, ZSeries.monomial(d))
        assert c.verdict is Verdict.NO and c.witness["residual"].terms
    assert [str(f) for f in spectral_polynomials(W, 6)] == ["1"]
    q = quotient_dim(W, z)
    assert (q.quotient_dim, q.stabilized) == (1, True)
    assert field_membership(W, z).verdict is Verdict.YES


def test_rank_one_and_two():
    W = example_4_5(14)
    assert tuple(rank(W, z, 8)) == (1, True)
    assert tuple(rank(standard_plane(12), z, 8)) == (1, True)
    # span of z^2k and z^2k g, with g = z + sum z^(1-2k)/k!
    g = ZSeries({1 - 2 * k: Q(1) / math.factorial(k) for k in range(0, 30)}, floor=-59)
    span = []
    for k in range(8):
        span += [ZSeries.monomial(2 * k), ZSeries.monomial(2 * k) * g]
    W2 = Plane.from_spanning(span, 12)
    r = rank(W2, z * z, 8)
    assert (r.rank, r.stabilized) == (2, True)
    with pytest.raises(FNotCertified):
        rank(W2, z, 8)


def test_spectral_algebra_contains_generators():
    W = standard_plane(8)
    hs = spectral_algebra(W, 3)
    assert len(hs) == 4


def test_q_recursion_against_direct_action():
    # f = z^-d + tail; Q = clear_tails([f]) must push f . Q into L_+
    rng = random.Random(9)
    for d in (1, 2, 3):
        tail = {-n: Q(rng.randint(-3, 3)) / rng.randint(1, 3) for n in range(d + 1, d + 8)}
        f = ZSeries({-d: 1, **tail}, floor=-(d + 7))
        q = clear_tails([f])
        img = right_act(f, q)
        assert not img.negative_part().terms
        assert q.order == d


def test_frac_certify():
    D = PsDO.D(1)
    T = D + PsDO.D(-1)
    c = frac_certify(T)
    assert c.verdict is Verdict.YES
    assert certify_differential(T * c.witness["denominator"]).verdict is Verdict.YES
    wild = PsDO({-2 * k: XSeries.monomial(k) for k in range(0, 7)}, -13)
    assert frac_certify(wild).verdict is Verdict.UNKNOWN


def test_conjugation_of_spectral_element_is_differential():
    L = parse_psdo("D^2 + (1 + x^2)*D^0")
    U = schur_dress(L, depth=8)
    C = conjugate_spectral(U, z * z)
    assert certify_differential(C).verdict is Verdict.YES
    assert C.agrees(L)
    # a random dressing does not make z^2 spectral
    rng = random.Random(4)
    V = PsDO({0: XSeries.const(1), **{-j: XSeries([Q(0)] + [Q(rng.randint(-2, 2)) for _ in range(6)]) for j in range(1, 5)}})
    W = plane_from_dressing(V, 10)
    assert spectral_membership(W, z * z).verdict is Verdict.NO
    assert certify_differential(conjugate_spectral(V, z * z, depth=6)).verdict is Verdict.NO


def test_odd_basis_closed_form():
    W = example_4_5(8)
    for n in range(4):
        dfact = math.prod(range(1, 2 * n + 2, 2))
        assert W.basis[2 * n + 1].agrees(ZSeries({2 * n + 1: 1, -1: (-1) ** n * dfact}))


def test_example_dressing_conjugates_z_to_a_fraction():
    W = example_4_5(14)
    U = dressing_from_plane(W, jmax=8, prec=8)
    C = conjugate_spectral(U, z)
    assert certify_differential(C).verdict is Verdict.NO
    assert frac_certify(C).verdict is Verdict.YES
