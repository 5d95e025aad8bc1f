"""Big-cell planes in Sato's Grassmannian and the right action of operators.

A plane ``W`` is stored through its canonical basis ``v_n = z^n + (terms of
negative degree)``, ``n = 0..depth``.  Since ``W`` projects isomorphically
onto ``C[z]``, a series ``y`` with ``top(y) <= depth`` lies in ``W`` iff the
residual ``y - sum_{d>=0} y[d] v_d`` vanishes; residuals live in ``z^-1 C[[z^-1]]``
and carry their own trusted floor.
"""

import math
from dataclasses import dataclass, field

from .errors import (
    FNotCertified,
    NotBigCell,
    PrecisionExhausted,
    UnderdeterminedAtDepth,
)
from .linalg import Reducer, kernel_basis
from .psdo import DEFAULT_DEPTH, DEFAULT_PREC, PsDO, psdo_invert
from .series import INF, ONE, ZERO, Certificate, Verdict, XSeries, ZSeries, falling

# ---------------------------------------------------------------------------
# right action
# ---------------------------------------------------------------------------


def right_act(v: ZSeries, p: PsDO) -> ZSeries:
    """``v . p`` with ``z^j . x^k = j(j-1)..(j-k+1) z^(j-k)`` and ``z^j . D^m = z^(j+m)``."""
    tv = v.top if v.terms else (v.floor - 1 if v.floor != -INF else None)
    if not p.terms:
        if p.floor == -INF or tv is None:
            return ZSeries({})
        return ZSeries({}, tv + p.floor)
    ptop = max(p.terms)
    floor = -INF
    if v.floor != -INF:
        floor = max(floor, v.floor + ptop)
    if tv is not None and p.floor != -INF:
        floor = max(floor, tv + p.floor)
    # unknown x-tails: x^k with k >= prec hits z^j only when j < 0 or j >= k
    for m, u in p.terms.items():
        if u.prec == INF:
            continue
        P = int(u.prec)
        for j in v.terms:
            if j < 0 or j >= P:
                floor = max(floor, j - P + m + 1)
    out = {}
    for m, u in p.terms.items():
        cs = u.coeffs
        for j, c in v.terms.items():
            kmax = len(cs) - 1
            if j >= 0:
                kmax = min(kmax, j)
            for k in range(kmax + 1):
                a = cs[k]
                if not a:
                    continue
                e = j - k + m
                if e < floor:
                    break
                out[e] = out.get(e, ZERO) + c * a * falling(j, k)
    return ZSeries(out, floor)


def negative_part(y: ZSeries) -> ZSeries:
    return y.negative_part()


# ---------------------------------------------------------------------------
# planes
# ---------------------------------------------------------------------------


class Plane:
    """Canonical basis ``v_0..v_N`` of a big-cell point."""

    def __init__(self, basis, canonical=False):
        basis = list(basis)
        if not basis:
            raise NotBigCell("a plane needs at least v_0")
        if not canonical:
            basis = _canonicalize(basis)
        self.basis = basis

    @property
    def depth(self):
        return len(self.basis) - 1

    @property
    def floor(self):
        return max(v.floor for v in self.basis)

    @property
    def is_exact(self):
        return all(v.is_exact for v in self.basis)

    def __getitem__(self, n):
        return self.basis[n]

    @classmethod
    def from_spanning(cls, series, depth):
        """Plane spanned by ``series``, echelonized by degree and cut at ``depth``."""
        by_deg = {}
        for y in series:
            while not y.is_zero():
                d = y.top
                if d not in by_deg:
                    by_deg[d] = y.scale(1 / y.leading())
                    break
                y = y - by_deg[d].scale(y.leading())
        if any(d < 0 for d in by_deg):
            raise NotBigCell("the span meets z^-1 C[[z^-1]]")
        missing = [n for n in range(depth + 1) if n not in by_deg]
        if missing:
            raise NotBigCell(f"no element of degree {missing[0]}")
        return cls([by_deg[n] for n in range(depth + 1)])

    def truncated(self, depth):
        return Plane(self.basis[: depth + 1], canonical=True)

    def residual(self, y: ZSeries):
        """Negative part of ``y - sum y[d] v_d``; None when ``top(y) > depth``."""
        if y.is_zero():
            return y.negative_part()
        t = y.top
        if t > self.depth:
            return None
        if y.floor > min(t, 0):
            raise PrecisionExhausted("the polynomial part of y is not fully trusted")
        r = y
        for d in range(t, -1, -1):
            c = y.terms.get(d)
            if c:
                r = r - self.basis[d].scale(c)
        return r.negative_part()

    def contains(self, y: ZSeries) -> Certificate:
        r = self.residual(y)
        if r is None:
            return Certificate(Verdict.UNKNOWN, None, {"reason": "degree beyond depth"})
        win = {"floor": _num(r.floor)}
        if r.terms:
            return Certificate(Verdict.NO, r, win)
        if r.floor >= 0:
            return Certificate(Verdict.UNKNOWN, None, win)
        return Certificate(Verdict.YES, None, win)

    def __eq__(self, other):
        if not isinstance(other, Plane):
            return NotImplemented
        n = min(self.depth, other.depth)
        return all(a.agrees(b) for a, b in zip(self.basis[: n + 1], other.basis[: n + 1]))

    __hash__ = None

    def __repr__(self):
        return f"Plane(depth={self.depth}, floor={self.floor})"


def _num(v):
    return None if v in (INF, -INF) else int(v)


def _canonicalize(basis):
    out = []
    for n, w in enumerate(basis):
        if w.top != n:
            raise NotBigCell(f"basis element {n} has degree {w.top}")
        lead = w.leading()
        if lead != 1:
            w = w.scale(1 / lead)
        for d in range(n - 1, -1, -1):
            if d < w.floor:
                raise PrecisionExhausted(f"coefficient z^{d} of v_{n} is not trusted")
            c = w.terms.get(d)
            if c:
                w = w - out[d].scale(c)
        out.append(w)
    return out


def example_4_5(depth: int) -> Plane:
    """``W = span{z^n + n z^(n-2)}``, canonicalized."""
    return Plane([ZSeries({n: 1, n - 2: n}) for n in range(depth + 1)])


def standard_plane(depth: int) -> Plane:
    return Plane([ZSeries.monomial(n) for n in range(depth + 1)], canonical=True)


# ---------------------------------------------------------------------------
# dressing <-> plane
# ---------------------------------------------------------------------------


def plane_from_dressing(u: PsDO, depth: int) -> Plane:
    """``W = L_+ . U`` through ``v_n = z^n . U``."""
    if u.top != 0 or not u.terms[0].agrees(1) or any(k > 0 for k in u.terms):
        raise NotBigCell("dressing must be monic of order 0")
    return Plane([right_act(ZSeries.monomial(n), u) for n in range(depth + 1)])


def dressing_from_plane(w: Plane, jmax=None, prec=None) -> PsDO:
    """Monic order-0 ``U`` with ``L_+ . U = W``.

    With ``z^K . U = sum u_(j,k) K!/(K-k)! z^(K-k-j)``, membership of
    ``z^K . U`` in ``W`` at ``z^-J`` reads

        K! u_(J,K) = sum_d [z^K U]_d v_d[-J] - sum_(k<K) u_(J+K-k,k) K!/(K-k)!

    which is triangular in the x-degree ``K``.
    """
    N = w.depth
    F = w.floor
    if F == -INF:
        jmax = DEFAULT_DEPTH if jmax is None else jmax
        prec = min(N + 1, DEFAULT_PREC if prec is None else prec)
        jtot = jmax + prec - 1
    else:
        jtot = -F
        if jtot < 1:
            raise UnderdeterminedAtDepth("the plane's floor leaves no negative coefficients")
        if jmax is None:
            jmax = jtot
        if jmax > jtot:
            raise UnderdeterminedAtDepth(f"u_{jmax} needs coefficients below the floor {F}")
        if prec is not None and prec > min(N + 1, jtot - jmax + 1):
            raise UnderdeterminedAtDepth("requested x-precision exceeds what the plane pins down")
    u = {}  # (j, k) -> value, j >= 1

    def get(j, k):
        if j == 0:
            return ONE if k == 0 else ZERO
        return u[(j, k)]

    for K in range(0, min(N, jtot - 1) + 1):
        fK = math.factorial(K)
        # polynomial part [z^K U]_d, d = 0..K
        cK = {}
        for d in range(K + 1):
            s = ZERO
            for k in range(0, K - d + 1):
                j = K - k - d
                if j == 0 and k == 0:
                    s += 1
                elif j >= 1:
                    s += get(j, k) * falling(K, k)
            cK[d] = s
        for J in range(1, jtot - K + 1):
            s = ZERO
            for d, c in cK.items():
                if c:
                    s += c * w.basis[d][-J]
            for k in range(K):
                s -= get(J + K - k, k) * falling(K, k)
            u[(J, K)] = s / fK
    terms = {0: XSeries.const(1)}
    for j in range(1, jmax + 1):
        pj = min(N + 1, jtot - j + 1)
        if prec is not None:
            pj = min(pj, prec)
        terms[-j] = XSeries([u[(j, k)] for k in range(pj)], pj)
    return PsDO(terms, -jmax)


# ---------------------------------------------------------------------------
# spectral algebra and field
# ---------------------------------------------------------------------------


def _deg(f: ZSeries):
    if f.is_zero():
        raise ValueError("f is zero at its precision")
    return f.top


def spectral_membership(w: Plane, f: ZSeries) -> Certificate:
    """Is ``f W`` inside ``W``?  A trusted nonzero residual is a witness of no."""
    dfn = _deg(f)
    nmax = min(w.depth, w.depth - dfn)
    if nmax < 0:
        return Certificate(Verdict.UNKNOWN, None, {"n_max": nmax})
    lowest = INF
    for n in range(nmax + 1):
        r = w.residual(f * w.basis[n])
        if r.terms:
            return Certificate(Verdict.NO, {"n": n, "residual": r}, {"n_max": nmax, "floor": _num(r.floor)})
        lowest = min(lowest, r.floor)
    win = {"n_max": nmax, "floor": _num(lowest) if lowest != INF else None}
    if lowest >= 0:
        return Certificate(Verdict.UNKNOWN, None, win)
    return Certificate(Verdict.YES, None, win)


def spectral_polynomials(w: Plane, max_deg: int):
    """Basis (as exact polynomials) of ``{f in C[z], deg f <= max_deg, fW subset W}`` at the window."""
    nmax = w.depth - max_deg
    if nmax < 0:
        raise UnderdeterminedAtDepth("plane depth is below the polynomial degree")
    cols = []
    for i in range(max_deg + 1):
        zi = ZSeries.monomial(i)
        cols.append([w.residual(zi * w.basis[n]) for n in range(nmax + 1)])
    rows = {}
    for n in range(nmax + 1):
        fl = max(cols[i][n].floor for i in range(max_deg + 1))
        exps = set()
        for i in range(max_deg + 1):
            exps |= {e for e in cols[i][n].terms if e >= fl}
        for e in exps:
            rows[(n, e)] = [cols[i][n].terms.get(e, ZERO) for i in range(max_deg + 1)]
    ker = kernel_basis(list(rows.values()), ncols=max_deg + 1)
    return [ZSeries({i: c for i, c in enumerate(v)}) for v in ker]


@dataclass
class SpectralCert:
    f: ZSeries
    quotient_dim: int
    stabilized: bool
    excess_basis: list = field(default_factory=list)
    window: dict = field(default_factory=dict)


def _rank_windows(residuals, steps=3):
    """Ranks of nested windows over residual lists ``[(n, series)]``.

    Windows grow in ``n`` and downward in exponent; returns (ranks, windows, basis).
    """
    if not residuals:
        return [0] * steps, [], []
    M = residuals[-1][0]
    fl = max(r.floor for _, r in residuals)
    exps = [e for _, r in residuals for e in r.terms]
    lo = fl if fl != -INF else (min(exps) if exps else -1)
    lo = min(lo, -1)
    span_n = M + 1
    span_e = -lo
    step_n = max(1, span_n // (2 * steps))
    step_e = max(1, span_e // (2 * steps)) if fl != -INF else 0
    ranks, wins = [], []
    basis = []
    for s in range(steps - 1, -1, -1):
        mcut = M - s * step_n
        ecut = min(lo + s * step_e, -1)
        red = Reducer()
        chosen = []
        for n, r in residuals:
            if n > mcut:
                break
            v = {e: c for e, c in r.terms.items() if e >= ecut}
            if red.insert(v):
                chosen.append(r)
        ranks.append(red.rank)
        wins.append({"n_max": mcut, "exp_floor": ecut})
        basis = chosen
    return ranks, wins, basis


def _stable(ranks, wins):
    if len(wins) < len(ranks) or len(set(ranks)) != 1:
        return False
    return len({(w["n_max"], w["exp_floor"]) for w in wins}) == len(wins)


def quotient_dim(w: Plane, f: ZSeries) -> SpectralCert:
    """dim (W + fW)/W by elimination over three nested windows."""
    dfn = _deg(f)
    nmax = min(w.depth, w.depth - dfn)
    res = []
    for n in range(nmax + 1):
        r = w.residual(f * w.basis[n])
        res.append((n, r))
    ranks, wins, basis = _rank_windows(res)
    return SpectralCert(
        f=f,
        quotient_dim=ranks[-1],
        stabilized=_stable(ranks, wins),
        excess_basis=basis,
        window={"ranks": ranks, "windows": wins},
    )


def field_membership(w: Plane, f: ZSeries) -> Certificate:
    """Membership in the spectral field; never answers no."""
    cert = quotient_dim(w, f)
    verdict = Verdict.YES if cert.stabilized else Verdict.UNKNOWN
    return Certificate(verdict, cert, cert.window)


def spectral_algebra(w: Plane, max_deg: int, floor=None):
    """Elements of ``A_W`` of degree ``<= max_deg`` found at the window.

    Such an ``h`` satisfies ``h v_0 = sum_(d <= max_deg) c_d v_d``, so the
    unknowns are the ``c_d``; conditions are ``h v_n in W``.
    """
    v0 = w.basis[0]
    if v0.is_exact and len(v0.terms) > 1:
        inv = v0.invert(floor=w.depth * -2 - 8 if floor is None else floor)
    else:
        inv = v0.invert()
    cand = [w.basis[d] * inv for d in range(max_deg + 1)]
    nmax = w.depth - max_deg
    if nmax < 0:
        raise UnderdeterminedAtDepth("plane depth is below the degree bound")
    res = [[w.residual(h * w.basis[n]) for n in range(nmax + 1)] for h in cand]
    rows = []
    for n in range(nmax + 1):
        fl = max(res[d][n].floor for d in range(max_deg + 1))
        exps = set()
        for d in range(max_deg + 1):
            exps |= {e for e in res[d][n].terms if e >= fl}
        for e in sorted(exps):
            rows.append([res[d][n].terms.get(e, ZERO) for d in range(max_deg + 1)])
    ker = kernel_basis(rows, ncols=max_deg + 1)
    out = []
    for v in ker:
        h = None
        for d, c in enumerate(v):
            if c:
                h = cand[d].scale(c) if h is None else h + cand[d].scale(c)
        out.append(h.scale(1 / h.leading()))
    return out


# ---------------------------------------------------------------------------
# tails, fractional certification, conjugation
# ---------------------------------------------------------------------------


def _q_series(f: ZSeries, d: int, prec):
    """q(x) with ``f . q(x) = z^-d`` for ``f = z^-d + sum_(n>d) a_n z^-n``."""
    if f.is_exact and len(f.terms) == 1:
        return XSeries.const(1)
    if f.floor == -INF:
        K = (DEFAULT_PREC if prec is None else prec) - 1
    else:
        K = -f.floor - d
        if prec is not None:
            K = min(K, prec - 1)
    a = lambda n: f.terms.get(-n, ZERO)
    q = [ONE]
    fd = math.factorial(d - 1)
    for s in range(1, K + 1):
        ell = s + d
        acc = ZERO
        for m in range(s):
            am = a(ell - m)
            if am:
                sign = -1 if (ell - d - m - 1) % 2 else 1
                acc += sign * fd * am * q[m] / math.factorial(ell - 1 - m)
        q.append(acc)
    return XSeries(q, K + 1)


def tail_clearer(f: ZSeries, prec=None) -> PsDO:
    """Monic differential ``Q = q D^d q^-1`` with ``f . Q`` in ``L_+`` (``f`` of top ``-d``)."""
    f = f.negative_part()
    if f.is_zero():
        return PsDO.const(1)
    d = -f.top
    f = f.scale(1 / f.leading())
    q = _q_series(f, d, prec)
    if q.is_exact:
        return PsDO.D(d)
    return PsDO.mult(q) * PsDO.D(d) * PsDO.mult(q.invert())


def clear_tails(e, prec=None, max_rounds=None) -> PsDO:
    """Monic differential ``Q`` with ``e_i . Q`` in ``L_+`` for every ``e_i``."""
    e = [y for y in e]
    q = PsDO.const(1)
    rounds = 0
    limit = len(e) + 1 if max_rounds is None else max_rounds
    while True:
        images = [right_act(y, q).negative_part() for y in e]
        pending = [y for y in images if y.terms]
        if not pending:
            return q
        if rounds >= limit:
            raise PrecisionExhausted("tails did not clear within the window")
        y = max(pending, key=lambda s: s.top)
        q = q * tail_clearer(y, prec)
        rounds += 1


def excess_of(p: PsDO, depth=None):
    """Residual data of ``(L_+ + L_+ . p)/L_+`` for ``z^n``, ``n <= depth``."""
    M = DEFAULT_DEPTH if depth is None else depth
    out = []
    for n in range(M + 1):
        r = right_act(ZSeries.monomial(n), p).negative_part()
        if r.floor > -2:
            break  # fewer than two trusted exponents left
        out.append((n, r))
    return out


def frac_certify(p: PsDO, depth=None, prec=None) -> Certificate:
    """Fractionality via a stabilized finite excess; witness is a right denominator."""
    res = excess_of(p, depth)
    ranks, wins, basis = _rank_windows(res)
    window = {"ranks": ranks, "windows": wins}
    if not _stable(ranks, wins):
        return Certificate(Verdict.UNKNOWN, {"excess": ranks[-1]}, window)
    q = clear_tails(basis, prec)
    check = p * q
    bad = [k for k, c in check.terms.items() if k < 0 and not c.is_zero()]
    window["product_floor"] = _num(check.floor)
    if bad:
        return Certificate(Verdict.UNKNOWN, {"excess": ranks[-1], "denominator": q}, window)
    return Certificate(Verdict.YES, {"excess": ranks[-1], "denominator": q}, window)


def conjugate_spectral(u: PsDO, f: ZSeries, depth=None, prec=None) -> PsDO:
    """``U f(D) U^-1``."""
    ui = psdo_invert(u, depth=depth, prec=prec)
    return u * PsDO.from_zseries(f) * ui


def certify_differential(p: PsDO, probes=None) -> Certificate:
    """Negative part of ``p`` certified zero at its window (yes), or a witness ``z^j . p``."""
    neg = {k: c for k, c in p.terms.items() if k < 0}
    bad = {k: c for k, c in neg.items() if not c.is_zero()}
    if bad:
        top = max(bad)
        # smallest j whose image shows the tail
        J = DEFAULT_DEPTH if probes is None else probes
        for j in range(J + 1):
            r = right_act(ZSeries.monomial(j), p).negative_part()
            if r.terms:
                return Certificate(Verdict.NO, {"j": j, "image_tail": r}, {"floor": _num(p.floor)})
        return Certificate(Verdict.NO, {"order": top, "coefficient": bad[top]}, {"floor": _num(p.floor)})
    if p.floor >= 0:
        return Certificate(Verdict.UNKNOWN, None, {"floor": _num(p.floor)})
    return Certificate(Verdict.YES, None, {"floor": _num(p.floor)})


def as_differential(p: PsDO) -> PsDO:
    """Drop a negative part that is certified zero at the window."""
    cert = certify_differential(p)
    if cert.verdict is not Verdict.YES:
        raise PrecisionExhausted(f"operator is not certified differential ({cert.verdict})")
    return PsDO({k: c for k, c in p.terms.items() if k >= 0})


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


@dataclass
class RankResult:
    rank: int
    stabilized: bool
    generators: list
    history: list
    coefficient_functions: int
    deg_bound: int

    def __iter__(self):
        return iter((self.rank, self.stabilized))


def _vec(y: ZSeries, lo):
    return {e: c for e, c in y.terms.items() if e >= lo}


def _independent(series):
    red = Reducer()
    out = []
    for s in series:
        fl = s.floor if s.floor != -INF else min(min(s.terms, default=0), 0) - 1
        if red.insert({e: c for e, c in s.terms.items() if e >= fl}):
            out.append(s)
    return out


def _rank_columns(w, coeffs, gens, n):
    """Columns ``c v_n`` and ``-c v_g`` for the largest prefix of ``coeffs``
    whose trusted window has more exponents than there are unknowns."""
    for m in range(len(coeffs), 0, -1):
        use = coeffs[:m]
        cols = [c * w.basis[n] for c in use]
        for g in gens:
            cols += [-(c * w.basis[g]) for c in use]
        lo = max(s.floor for s in cols)
        top = max(s.top for s in cols if s.terms)
        if lo == -INF or (lo < 0 and top - lo + 1 > len(cols)):
            return cols, m
    return None, 0


def rank(w: Plane, f: ZSeries, deg_bound: int = 8, aw_degree=None, certify=True) -> RankResult:
    """Dimension of the span of ``W`` over a subfield of ``K_W`` containing ``f``.

    Coefficients are ``f^t h`` with ``t <= deg_bound`` and ``h`` running over
    elements of ``A_W`` of degree ``<= aw_degree`` found at the window (this
    brings in the rest of the function field when ``C(f)`` alone is too
    small).  ``v_n`` is a new generator when no such combination relates it
    to the previous generators.
    """
    rf = f.top if f.terms else None
    if rf is None or rf <= 0:
        raise FNotCertified("f must have positive degree")
    if certify and field_membership(w, f).verdict is not Verdict.YES:
        raise FNotCertified("f is not certified in the spectral field")
    if aw_degree is None:
        aw_degree = 2 * rf + 1
    aw_degree = min(aw_degree, w.depth)
    extras = [h for h in spectral_algebra(w, aw_degree) if h.top is not None and h.top > 0]
    hs = _independent([ZSeries.const(1)] + extras)
    powers = [ZSeries.const(1)]
    for _ in range(deg_bound):
        powers.append(powers[-1] * f)
    coeffs = _independent([pw * h for h in hs for pw in powers])
    coeffs.sort(key=lambda c: c.top)
    M = min(w.depth, rf * (deg_bound - 1))
    gens = [0]
    history = [(0, 1)]
    for n in range(1, M + 1):
        cols, nc = _rank_columns(w, coeffs, gens, n)
        if cols is None:
            break  # the window is too shallow for any coefficient set
        lo = max(s.floor for s in cols)
        if lo == -INF:
            lo = min((e for s in cols for e in s.terms), default=0)
        exps = sorted({e for s in cols for e in s.terms if e >= lo})
        m = [[s.terms.get(e, ZERO) for s in cols] for e in exps]
        ker = kernel_basis(m, ncols=len(cols)) if m else []
        dependent = any(any(v[:nc]) for v in ker)
        if not dependent:
            if nc < len(coeffs):
                break  # independence is only shown for a truncated coefficient set
            gens.append(n)
        history.append((n, len(gens)))
    r = len(gens)
    reached = history[-1][0]
    checks = [h for n_, h in history if n_ in (reached, reached - rf, reached - 2 * rf)]
    stabilized = reached - 2 * rf >= 0 and len(checks) == 3 and len(set(checks)) == 1
    return RankResult(r, stabilized, gens, history, len(coeffs), deg_bound)
