"""Acceptance checks, shared by the test suite and ``fracsato selftest``.

Each check returns a :class:`CheckResult`; a check passes only when its
exact assertions hold and it finishes inside its time budget.
"""

import random
import time
from dataclasses import dataclass, field

from .fractional import FracOp, common_denominators, dord, frac_make
from .grassmannian import (
    certify_differential,
    conjugate_spectral,
    dressing_from_plane,
    example_4_5,
    field_membership,
    frac_certify,
    quotient_dim,
    rank,
    spectral_membership,
    spectral_polynomials,
)
from .krichever import (
    CurveData,
    conjugated_pair,
    elliptic_plane,
    elliptic_relation,
    op_rational_section,
    section_check,
    weierstrass_coefficients,
    weierstrass_p,
    weierstrass_residual,
)
from .psdo import PsDO, psdo_invert, schur_dress
from .relations import bc_relation, span_dim
from .series import INF, Q, Verdict, XSeries, ZSeries
from .textio import parse_ratpoly2
from .grassmannian import as_differential

SEED = 20240531
SMOOTH = CurveData(1, -1, 1, 2)
CUSP = CurveData(0, 0, 1, 2)


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    def line(self):
        mark = "PASS" if self.ok else "FAIL"
        return f"[{mark}] criterion {self.number:2d}: {self.title} ({self.seconds:.2f}s / {self.limit:.0f}s)"


def _timed(number, title, limit):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:  # reported, never swallowed silently
                ok, detail = False, {"exception": f"{type(exc).__name__}: {exc}"}
            dt = time.perf_counter() - t0
            return CheckResult(number, title, bool(ok) and dt < limit, dt, limit, detail)

        run.number = number
        run.title = title
        return run

    return wrap


def _rand_q(rng, span=5):
    return Q(rng.randint(-span, span)) / rng.randint(1, 4)


def random_psdo(rng, prec=8, lo=-3, hi=3, width=4):
    top = rng.randint(lo, hi)
    terms = {k: XSeries([_rand_q(rng) for _ in range(prec)], prec) for k in range(top - width + 1, top + 1)}
    return PsDO(terms, top - width + 1)


def random_dressing(rng, depth=5, degree=7):
    terms = {0: XSeries.const(1)}
    for j in range(1, depth + 1):
        terms[-j] = XSeries([Q(0)] + [_rand_q(rng) for _ in range(degree)])
    return PsDO(terms)


@_timed(1, "product rule and associativity", 10)
def check_product_rule():
    D, x = PsDO.D(1), PsDO.x(1)
    one_a = D * x == x * D + 1
    Di = PsDO.D(-1)
    lhs = Di * x
    rhs = x * Di - PsDO.D(-2)
    two_a = lhs.agrees(rhs) and lhs.floor == -INF and rhs.floor == -INF
    rng = random.Random(SEED)
    bad = 0
    for _ in range(200):
        a, b, c = (random_psdo(rng) for _ in range(3))
        l, r = (a * b) * c, a * (b * c)
        if not l.agrees(r) or not any(k >= max(l.floor, r.floor) for k in l.terms):
            bad += 1
    return one_a and two_a and bad == 0, {"failures": bad}


@_timed(2, "Schur dressing round trip", 30)
def check_schur():
    rng = random.Random(SEED + 1)
    bad = 0
    for _ in range(50):
        U = random_dressing(rng)
        for m in (1, 2, 3):
            L = U * PsDO.D(m) * psdo_invert(U, depth=6)
            V = schur_dress(L)
            if not V.agrees(U) or V.floor > -5:
                bad += 1
    return bad == 0, {"failures": bad, "cases": 150}


@_timed(3, "plane with trivial spectral algebra", 10)
def check_example():
    W = example_4_5(14)
    z = ZSeries.monomial(1)
    rng = random.Random(SEED + 2)
    polys = [ZSeries.monomial(d) for d in range(1, 7)]
    for _ in range(20):
        d = rng.randint(1, 6)
        coeffs = {e: _rand_q(rng) for e in range(d)}
        coeffs[d] = Q(rng.choice([-3, -1, 1, 2]))
        polys.append(ZSeries(coeffs))
    memb = [spectral_membership(W, f).verdict for f in polys]
    consts = spectral_polynomials(W, 6)
    qd = quotient_dim(W, z)
    rk = rank(W, z, 8)
    ok = (
        all(v is Verdict.NO for v in memb)
        and all(f.is_exact and set(f.terms) <= {0} for f in consts)
        and qd.quotient_dim == 1
        and qd.stabilized
        and rk.rank == 1
        and rk.stabilized
    )
    return ok, {"kernel": [str(f) for f in consts], "quotient_dim": qd.quotient_dim, "rank": rk.rank}


@_timed(4, "fractional Burchnall-Chaundy pair", 5)
def check_bc_fractional():
    D = PsDO.D(1)
    P = FracOp.from_psdo(D)
    Qf = P + frac_make(PsDO.const(1), D)
    F = bc_relation(P, Qf)
    diff = (P - Qf).expansion()
    bound = -(dord(P).dord + dord(Qf).dord)
    ok = F.coeffs == parse_ratpoly2("z*w - z^2 - 1").coeffs and diff.order == -1 and bound == -1
    return ok, {"relation": str(F), "ord_difference": diff.order, "lower_bound": bound}


def _growth_pairs(rng):
    D = PsDO.D(1)
    T = FracOp.from_psdo(D) + frac_make(PsDO.const(1), D)
    S = frac_make(D * D + PsDO.const(1), D + PsDO.const(1))
    frac_pairs = []
    for base in (T, S):
        for _ in range(5):
            while True:
                a, b = rng.randint(1, 2), rng.randint(1, 2)
                if (a, b) != (1, 1) or rng.random() < 0.5:
                    break
            ca = [rng.randint(-2, 2) for _ in range(a)] + [1]
            cb = [rng.randint(-2, 2) for _ in range(b)] + [1]
            frac_pairs.append((_poly_in(base, ca), _poly_in(base, cb)))
    L = D * D + PsDO.x(1)
    diff_pairs = []
    for _ in range(10):
        a, b = rng.randint(1, 2), rng.randint(1, 2)
        ca = [rng.randint(-2, 2) for _ in range(a)] + [1]
        cb = [rng.randint(-2, 2) for _ in range(b)] + [1]
        diff_pairs.append((_poly_in(L, ca), _poly_in(L, cb)))
    return frac_pairs, diff_pairs


def _poly_in(base, coeffs):
    """``sum c_i base^i``, evaluated by Horner."""
    acc = None
    for c in reversed(coeffs):
        if acc is None:
            acc = base * 0 + c if isinstance(base, PsDO) else FracOp.from_psdo(PsDO.const(c))
        else:
            acc = acc * base + (c if isinstance(base, PsDO) else FracOp.from_psdo(PsDO.const(c)))
    return acc


@_timed(5, "span growth bounds", 60)
def check_growth():
    rng = random.Random(SEED + 3)
    frac_pairs, diff_pairs = _growth_pairs(rng)
    bad = []
    rows = []
    for idx, (p, q) in enumerate(frac_pairs + diff_pairs):
        dords = (dord(p).dord, dord(q).dord) if not isinstance(p, PsDO) else (0, 0)
        for n in (1, 2, 3):
            rep = span_dim(p, q, n, dords)
            ok = rep.span_dim <= rep.bound
            if rep.differential_bound is not None:
                ok = ok and rep.span_dim <= rep.differential_bound
            rows.append((idx, n, rep.span_dim, rep.bound, rep.differential_bound))
            if not ok:
                bad.append(rows[-1])
    return not bad, {"pairs": len(frac_pairs) + len(diff_pairs), "violations": bad, "rows": len(rows)}


@_timed(6, "Weierstrass expansion", 5)
def check_weierstrass():
    rng = random.Random(SEED + 4)
    bad = 0
    for _ in range(10):
        g2, g3 = _rand_q(rng, 9), _rand_q(rng, 9)
        c = weierstrass_coefficients(g2, g3, 4)
        if (c[2], c[3], c[4]) != (g2 / 20, g3 / 28, g2**2 / 1200):
            bad += 1
            continue
        wp, wpp = weierstrass_p(g2, g3, 8)
        res = weierstrass_residual(g2, g3, wp, wpp)
        # certified through w^10 means every exponent >= -10 is a known zero
        if res.terms and any(v for v in res.terms.values()) or res.floor > -10:
            bad += 1
    return bad == 0, {"failures": bad}


def _relation_for(c: CurveData):
    return parse_ratpoly2(f"w^2 - 4*z^3 + {c.g2}*z + {c.g3}".replace("+ -", "- "))


@_timed(7, "elliptic and cuspidal pipelines", 120)
def check_elliptic():
    detail = {}
    ok = True
    for name, c in (("cusp", CUSP), ("smooth", SMOOTH)):
        W = elliptic_plane(c, 10)
        pair = conjugated_pair(W)
        F, rep = elliptic_relation(W, pair)
        certs = pair.certificates
        good = (
            pair.l2.order == 2
            and pair.l3.order == 3
            and certs["l2"].verdict is Verdict.YES
            and certs["l3"].verdict is Verdict.YES
            and F.coeffs == _relation_for(c).coeffs
        )
        detail[name] = {"relation": str(F), "orders": (pair.l2.order, pair.l3.order)}
        ok = ok and good
    return ok, detail


@_timed(8, "spectral algebra and field on curve planes", 60)
def check_two_sided():
    W = elliptic_plane(SMOOTH, 10)
    U = dressing_from_plane(W)
    ok = True
    detail = {}
    for name, f in (("P", W.wp), ("P'", W.wpp), ("P^2", W.wp * W.wp)):
        m = spectral_membership(W, f).verdict
        d = certify_differential(conjugate_spectral(U, f)).verdict
        detail[name] = (m.value, d.value)
        ok = ok and m is Verdict.YES and d is Verdict.YES
    Wc = elliptic_plane(CUSP, 10)
    Uc = dressing_from_plane(Wc)
    z = ZSeries.monomial(1)
    fm = field_membership(Wc, z).verdict
    Cz = conjugate_spectral(Uc, z)
    fc = frac_certify(Cz).verdict
    dc = certify_differential(Cz).verdict
    detail["z on cusp"] = (fm.value, fc.value, dc.value)
    detail["z on smooth"] = field_membership(W, z).verdict.value
    ok = ok and fm is Verdict.YES and fc is Verdict.YES and dc is Verdict.NO
    return ok, detail


@_timed(9, "rational section operator", 120)
def check_section():
    ok = True
    detail = {}
    for name, c in (("smooth", SMOOTH), ("cusp", CUSP)):
        W = elliptic_plane(c, 8)
        op = op_rational_section(W)
        sec = section_check(W, op)
        U = dressing_from_plane(W)
        conj = U * op.to_psdo() * psdo_invert(U)
        cert = certify_differential(conj)
        order = as_differential(conj).order if cert.verdict is Verdict.YES else None
        detail[name] = {"section": str(sec), "order": order, "window": cert.window}
        ok = ok and sec.kind == "preserving" and order == 4
    return ok, detail


@_timed(10, "denominatorial order and common denominators", 10)
def check_dord():
    D, x, one = PsDO.D(1), PsDO.x(1), PsDO.const(1)
    d1 = dord(frac_make(one, D))
    d0 = dord(FracOp.from_psdo(D * D + x))
    ok = d1.dord == 1 and d0.dord == 0
    detail = {"dord(D^-1)": d1.dord, "dord(D^2 + x)": d0.dord}
    for pairs in ([(one, D), (x * D + 1, D + x)], [(D + 1, D + x), (D, D + 2)]):
        cd = common_denominators(pairs)
        total = sum(q.order for _, q in pairs)
        checks = cd.right_checks + cd.left_checks
        good = (
            all(c.verdict is Verdict.YES for c in checks)
            and cd.l_right.order <= total
            and cd.l_left.order <= total
        )
        ok = ok and good
        detail[str(len(detail))] = {"right": str(cd.l_right), "left": str(cd.l_left)}
    return ok, detail


CHECKS = [
    check_product_rule,
    check_schur,
    check_example,
    check_bc_fractional,
    check_growth,
    check_weierstrass,
    check_elliptic,
    check_two_sided,
    check_section,
    check_dord,
]


def run_all(echo=print):
    results = []
    for chk in CHECKS:
        r = chk()
        results.append(r)
        if echo:
            echo(r.line())
    return results
