"""Fractional differential operators ``A B^-1``.

Arithmetic goes through the Ore condition: ``B^-1 C = R L^-1`` whenever
``B R = C L``.  ``ore_solve`` finds such ``R, L`` by exact linear algebra,
with polynomial unknowns when the inputs are exact and truncated-series
unknowns otherwise.
"""

import threading
from dataclasses import dataclass, field

from .errors import (
    DenominatorNotMonic,
    NoSolutionAtPrecision,
    NotDifferential,
    WindowTooSmall,
)
from .grassmannian import certify_differential
from .linalg import kernel_basis, solve
from .psdo import DEFAULT_DEPTH, PsDO, psdo_adjoint, psdo_invert
from .series import INF, ZERO, Certificate, Q, Verdict, XSeries

DEFAULT_ORE_DEGREE = 8
DEFAULT_DORD_PREC = 8


def _is_diff(p: PsDO) -> bool:
    return p.structurally_differential()


def _const_lead(p: PsDO):
    """Leading coefficient when it is an exact nonzero constant, else None."""
    k = p.order
    if k is None or p.top != k:
        return None
    c = p.terms[k]
    if c.is_exact and len(c.coeffs) == 1:
        return c.coeffs[0]
    return None


def _is_constant_coeff(p: PsDO) -> bool:
    return p.floor == -INF and all(c.is_exact and len(c.coeffs) <= 1 for c in p.terms.values())


# ---------------------------------------------------------------------------
# Euclidean division
# ---------------------------------------------------------------------------


def right_divide(a: PsDO, b: PsDO):
    """``a = q b + r`` with ``ord r < ord b``; needs a constant leading coefficient of ``b``."""
    lb = _const_lead(b)
    if lb is None:
        raise NotDifferential("right division needs a constant leading coefficient")
    nb = b.order
    q = PsDO.zero()
    r = a
    while True:
        k = r.order
        if k is None or k < nb:
            return q, r
        t = PsDO({k - nb: r.terms[k].scale(1 / lb)})
        q = q + t
        r = r - t * b
        r = PsDO({kk: c for kk, c in r.terms.items() if not (kk >= k and c.is_zero())}, r.floor)


def right_gcd(a: PsDO, b: PsDO):
    """Monic right gcd by Euclid, or None when a pivot is not constant."""
    while not b.is_zero():
        if _const_lead(b) is None:
            return None
        _, r = right_divide(a, b)
        a, b = b, r
    lc = _const_lead(a)
    if lc is None:
        return None
    return a.scale(1 / lc)


# ---------------------------------------------------------------------------
# Ore solving
# ---------------------------------------------------------------------------


def _poly_columns(op: PsDO, orders, deg):
    """Products ``op * (x^t D^i)`` for i in orders, t <= deg."""
    cols = []
    for i in orders:
        for t in range(deg + 1):
            cols.append(op * PsDO({i: XSeries.monomial(t)}))
    return cols


def _cells(cols, extra=()):
    keys = set()
    for c in list(cols) + list(extra):
        for k, s in c.terms.items():
            for t, v in enumerate(s.coeffs):
                if v:
                    keys.add((k, t))
    return sorted(keys)


def _trusted(cols, cells, probes=()):
    floor = max((c.floor for c in list(cols) + list(probes)), default=-INF)
    out = []
    for k, t in cells:
        if k < floor:
            continue
        ok = True
        for c in list(cols) + list(probes):
            s = c.terms.get(k)
            if s is not None and t >= s.prec:
                ok = False
                break
        if ok:
            out.append((k, t))
    return out


def _matrix(cols, cells):
    return [[c.terms[k][t] if k in c.terms and t < len(c.terms[k].coeffs) else ZERO for c in cols] for k, t in cells]


def _assemble(vec, orders, deg, prec=INF):
    terms = {}
    idx = 0
    for i in orders:
        cs = vec[idx : idx + deg + 1]
        idx += deg + 1
        terms[i] = XSeries(cs, prec)
    return PsDO(terms)


def ore_solve(p: PsDO, q: PsDO, max_degree=None):
    """Nonzero differential ``r, l`` with ``q r = p l`` and ``ord l <= ord q``."""
    if not (_is_diff(p) and _is_diff(q)):
        raise NotDifferential("ore_solve takes differential operators")
    if q.is_zero():
        raise NoSolutionAtPrecision("q must be nonzero")
    if p.is_zero():
        return PsDO.const(1), PsDO.zero()
    np_, nq = p.order, q.order
    exact = p.is_exact and q.is_exact
    D = DEFAULT_ORE_DEGREE if max_degree is None else max_degree
    for d in range(D + 1):
        for k in range(nq + 1):
            nr = np_ + k - nq
            if nr < 0:
                continue
            rorders = list(range(nr + 1))
            lorders = list(range(k + 1))
            cols = _poly_columns(q, rorders, d) + [-c for c in _poly_columns(p, lorders, d)]
            cells = _cells(cols)
            if not exact:
                probes = [q * PsDO({i: XSeries.zero(d + 1)}) for i in rorders]
                probes += [p * PsDO({i: XSeries.zero(d + 1)}) for i in lorders]
                cells = _trusted(cols, cells, probes)
            ker = kernel_basis(_matrix(cols, cells), ncols=len(cols))
            nr_cols = len(rorders) * (d + 1)
            ker = [v for v in ker if any(v[nr_cols:]) and any(v[:nr_cols])]
            if not ker:
                continue
            vec = _prefer_constant_lead(ker, nr_cols, k, d) or ker[0]
            prec = INF if exact else d + 1
            r = _assemble(vec[:nr_cols], rorders, d, prec)
            l = _assemble(vec[nr_cols:], lorders, d, prec)
            lead = l.leading()
            c = next(v for v in lead.coeffs if v)
            return r.scale(1 / c), l.scale(1 / c)
    raise NoSolutionAtPrecision(f"no solution with polynomial degree <= {D}")


def _prefer_constant_lead(ker, off, k, d):
    """Kernel combination whose l has leading coefficient exactly 1 at order k."""
    base = off + k * (d + 1)
    rows = [[v[base + t] for v in ker] for t in range(d + 1)]
    rhs = [1] + [0] * d
    sol = solve(rows, rhs)
    if sol is None:
        return None
    n = len(ker[0])
    return [sum((s * v[i] for s, v in zip(sol, ker)), ZERO) for i in range(n)]


def ore_solve_left(p: PsDO, q: PsDO, max_degree=None):
    """``l, r`` with ``l p = r q`` and ``ord l <= ord q`` (via adjoints)."""
    rr, ll = ore_solve(psdo_adjoint(p), psdo_adjoint(q), max_degree)
    # q* rr = p* ll  =>  ll* p = rr* q
    return psdo_adjoint(ll), psdo_adjoint(rr)


# ---------------------------------------------------------------------------
# FracOp
# ---------------------------------------------------------------------------


class FracOp:
    """``num * den^-1`` with ``den`` monic; or a bare expansion when no presentation is known."""

    __slots__ = ("num", "den", "depth", "reduced", "_expansion", "_lock")

    def __init__(self, num, den, depth=None, reduced=False, expansion=None):
        self.num = num
        self.den = den
        self.depth = DEFAULT_DEPTH if depth is None else depth
        self.reduced = reduced
        self._expansion = expansion
        self._lock = threading.Lock()

    @classmethod
    def from_psdo(cls, p: PsDO, depth=None):
        if _is_diff(p):
            return cls(p, PsDO.const(1), depth, True, p)
        return cls(None, None, depth, False, p)

    @classmethod
    def coerce(cls, p):
        return p if isinstance(p, FracOp) else cls.from_psdo(p)

    @property
    def has_presentation(self):
        return self.num is not None

    def expansion(self, depth=None) -> PsDO:
        if depth is not None and depth != self.depth and self.has_presentation:
            return self._expand(depth)
        if self._expansion is None:
            with self._lock:
                if self._expansion is None:
                    self._expansion = self._expand(self.depth)
        return self._expansion

    def _expand(self, depth):
        if self.den.order == 0 and _const_lead(self.den) == 1 and self.den.top == 0:
            return self.num
        return self.num * psdo_invert(self.den, depth=depth)

    @property
    def order(self):
        if self.has_presentation:
            return self.num.order - self.den.order
        return self._expansion.order

    def with_depth(self, depth):
        if not self.has_presentation:
            return self
        return FracOp(self.num, self.den, depth, self.reduced)

    # arithmetic through Ore
    def __mul__(self, other):
        if not isinstance(other, FracOp):
            if isinstance(other, PsDO):
                other = FracOp.from_psdo(other)
            else:
                c = Q(other)
                if self.has_presentation:
                    return FracOp(self.num.scale(c), self.den, self.depth, self.reduced)
                return FracOp(None, None, self.depth, False, self._expansion.scale(c))
        if not (self.has_presentation and other.has_presentation):
            return FracOp(None, None, max(self.depth, other.depth), False, self.expansion() * other.expansion())
        a, b, c, d = self.num, self.den, other.num, other.den
        if all(_is_constant_coeff(t) for t in (a, b, c, d)):
            return frac_make(a * c, d * b, max(self.depth, other.depth))
        if b.order == 0:
            return frac_make(a * c, d, max(self.depth, other.depth))
        r, l = ore_solve(c, b)  # b r = c l  =>  b^-1 c = r l^-1
        return _monic(a * r, d * l, max(self.depth, other.depth))

    __rmul__ = lambda self, other: self * other if not isinstance(other, FracOp) else other * self

    def __add__(self, other):
        if not isinstance(other, FracOp):
            other = FracOp.from_psdo(other if isinstance(other, PsDO) else PsDO.const(other))
        if not (self.has_presentation and other.has_presentation):
            return FracOp(None, None, max(self.depth, other.depth), False, self.expansion() + other.expansion())
        a, b, c, d = self.num, self.den, other.num, other.den
        depth = max(self.depth, other.depth)
        if all(_is_constant_coeff(t) for t in (a, b, c, d)):
            return frac_make(a * d + c * b, b * d, depth)
        if b.agrees(d) and b.is_exact and d.is_exact:
            return frac_make(a + c, b, depth)
        r, l = ore_solve(d, b)  # b r = d l
        m = b * r
        return _monic(a * r + c * l, m, depth)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-FracOp.coerce(other) if isinstance(other, (FracOp, PsDO)) else -Q(other))

    def __pow__(self, n):
        out = FracOp.from_psdo(PsDO.const(1), self.depth)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return f"FracOp({self})"

    def __str__(self):
        from .textio import format_frac, format_psdo

        if self.has_presentation:
            return format_frac(self)
        return format_psdo(self._expansion)


def _monic(num, den, depth):
    k = den.order
    lead = den.terms[k]
    if lead.is_exact and len(lead.coeffs) == 1:
        c = lead.coeffs[0]
        return frac_make(num.scale(1 / c), den.scale(1 / c), depth)
    if lead.coeffs and lead.coeffs[0]:
        inv = lead.invert(None if not lead.is_exact else DEFAULT_ORE_DEGREE + 4)
        m = PsDO.mult(inv)
        return frac_make(num * m, den * m, depth)
    raise DenominatorNotMonic("denominator leading coefficient is not a unit")


def frac_make(a: PsDO, b: PsDO, depth=None) -> FracOp:
    """The fraction ``a b^-1``, reduced by the right gcd when Euclid applies."""
    if not (_is_diff(a) and _is_diff(b)):
        raise NotDifferential("numerator and denominator must be differential")
    k = b.order
    if k is None or b.top != k or not b.terms[k].agrees(1) or not b.terms[k].is_exact:
        raise DenominatorNotMonic("denominator must have leading coefficient exactly 1")
    if k == 0:
        return FracOp(a, PsDO.const(1), depth, True)
    g = right_gcd(a, b) if a.is_exact and b.is_exact else None
    if g is None:
        return FracOp(a, b, depth, False)
    if g.order == 0:
        return FracOp(a, b, depth, True)
    qa, ra = right_divide(a, g)
    qb, rb = right_divide(b, g)
    if not (ra.is_zero() and rb.is_zero()):
        return FracOp(a, b, depth, False)
    lc = _const_lead(qb)
    return FracOp(qa.scale(1 / lc), qb.scale(1 / lc), depth, True)


# ---------------------------------------------------------------------------
# denominatorial order and certificates
# ---------------------------------------------------------------------------


@dataclass
class DordResult:
    dord: int
    witness: PsDO
    window: dict = field(default_factory=dict)

    def __int__(self):
        return self.dord

    def __eq__(self, other):
        if isinstance(other, int):
            return self.dord == other
        return NotImplemented


def _negative_cells(ops, probes):
    floor = max(o.floor for o in list(ops) + list(probes))
    keys = set()
    for o in ops:
        for k, s in o.terms.items():
            if k < 0 and k >= floor:
                for t in range(len(s.coeffs) if s.prec == INF else int(s.prec)):
                    keys.add((k, t))
    for pr in probes:
        for k, s in pr.terms.items():
            if k < 0 and k >= floor and s.prec != INF:
                for t in range(int(s.prec)):
                    keys.add((k, t))
    cells = []
    for k, t in sorted(keys):
        ok = True
        for o in list(ops) + list(probes):
            s = o.terms.get(k)
            if s is not None and t >= s.prec:
                ok = False
                break
        if ok:
            cells.append((k, t))
    return cells, floor


def dord(p, kmax=None, prec=None) -> DordResult:
    """Least order of a monic right denominator, found by solving order by order."""
    p = FracOp.coerce(p)
    e = p.expansion()
    P = DEFAULT_DORD_PREC if prec is None else prec
    K = (p.den.order if p.has_presentation else p.depth) if kmax is None else kmax
    for k in range(0, K + 1):
        lead = e * PsDO.D(k)
        orders = list(range(k))
        cols = [e * PsDO({i: XSeries.monomial(t)}) for i in orders for t in range(P)]
        probes = [e * PsDO({i: XSeries.zero(P)}) for i in orders]
        cells, floor = _negative_cells([lead] + cols, probes)
        if not cells:
            # an empty window certifies nothing unless every negative order is a known zero
            if floor >= 0:
                continue
            sol = [ZERO] * len(cols)
        else:
            rows = _matrix(cols, cells) if cols else [[] for _ in cells]
            rhs = [-(lead.terms[kk][t] if kk in lead.terms and t < len(lead.terms[kk].coeffs) else ZERO) for kk, t in cells]
            if cols:
                sol = solve(rows, rhs)
            else:
                sol = [] if not any(rhs) else None
        if sol is None:
            continue
        terms = {k: 1}
        for n, i in enumerate(orders):
            terms[i] = XSeries(sol[n * P : (n + 1) * P], P)
        witness = PsDO(terms)
        return DordResult(k, witness, {"cells": len(cells), "floor": None if floor == -INF else int(floor), "prec": P})
    raise WindowTooSmall(f"no monic right denominator of order <= {K} certified")


def is_differential(p, probes=None) -> Certificate:
    """Tri-state differentiality: exact division when a presentation exists, else window checks."""
    if isinstance(p, PsDO):
        return certify_differential(p, probes)
    if p.has_presentation and p.num.is_exact and p.den.is_exact and _const_lead(p.den) is not None:
        q, r = right_divide(p.num, p.den)
        if r.is_zero():
            return Certificate(Verdict.YES, {"quotient": q}, {"exact": True})
    return certify_differential(p.expansion(), probes)


@dataclass
class CommonDenominators:
    l_left: PsDO
    l_right: PsDO
    right_checks: list
    left_checks: list


def _prefix_products(pairs, depth, reverse):
    """Expansions of P_k Q_k^-1 ... P_1 Q_1^-1 (right) or P_1 Q_1^-1 ... P_k Q_k^-1 (left)."""
    out = []
    acc = None
    for P_, Q_ in pairs:
        f = P_ * psdo_invert(Q_, depth=depth)
        if acc is None:
            acc = f
        else:
            acc = f * acc if reverse else acc * f
        out.append(acc)
    return out


def common_denominators(pairs, depth=None, max_degree=None) -> CommonDenominators:
    """Denominators clearing every prefix product, built recursively through Ore solves."""
    pairs = [(P_, Q_) for P_, Q_ in pairs]
    if not pairs:
        one = PsDO.const(1)
        return CommonDenominators(one, one, [], [])
    for P_, Q_ in pairs:
        if not (_is_diff(P_) and _is_diff(Q_)) or Q_.is_zero():
            raise NotDifferential("pairs must be differential with nonzero Q")
    # right: M_1 = Q_1; carry N = P_k R_k; Q_{k+1} R' = N L'
    M = pairs[0][1]
    N = pairs[0][0]
    for P_, Q_ in pairs[1:]:
        R, L = ore_solve(N, Q_, max_degree)
        M = M * L
        N = P_ * R
    l_right = M
    # left: l P_1 = D Q_1, then l' (D P_2) = D' Q_2, ...
    S = PsDO.const(1)
    Dk = None
    for i, (P_, Q_) in enumerate(pairs):
        A = P_ if Dk is None else Dk * P_
        l, Dk = ore_solve_left(A, Q_, max_degree)
        S = l * S
    l_left = S
    dd = DEFAULT_DEPTH if depth is None else depth
    right_checks = [
        is_differential(t * l_right) for t in _prefix_products(pairs, dd, reverse=True)
    ]
    left_checks = [is_differential(l_left * t) for t in _prefix_products(pairs, dd, reverse=False)]
    return CommonDenominators(l_left, l_right, right_checks, left_checks)
