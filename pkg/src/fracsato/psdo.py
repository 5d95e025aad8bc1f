"""Pseudodifferential operators with power-series coefficients.

A ``PsDO`` is ``sum_k u_k(x) D^k`` over a window of orders.  Orders below
``floor`` are unknown; orders inside the window that are absent from
``terms`` are exact zeros.  Each coefficient carries its own x-precision.
Multiplication uses the generalized Leibniz rule

    D^a u = sum_j C(a, j) u^(j) D^(a - j)

and reports the widest window that both operands justify.
"""

from functools import lru_cache

from .errors import NotInvertible, NotLaxForm, NotNormalized, PrecisionExhausted, ZeroOrder
from .series import INF, ZERO, Q, XSeries, ZSeries, binom

DEFAULT_DEPTH = 12
DEFAULT_PREC = 12


@lru_cache(maxsize=None)
def _binom(a, j):
    return binom(a, j)


def _as_xseries(c):
    if isinstance(c, XSeries):
        return c
    if isinstance(c, (list, tuple)):
        return XSeries(c)
    return XSeries.const(c)


def _fin(v):
    return v != INF and v != -INF


class PsDO:
    __slots__ = ("terms", "floor")

    def __init__(self, terms=None, floor=-INF):
        self.floor = floor if floor == -INF else int(floor)
        t = {}
        if terms:
            for k, c in dict(terms).items():
                if k < self.floor:
                    continue
                c = _as_xseries(c)
                if c.is_exact and not c.coeffs:
                    continue
                t[int(k)] = c
        self.terms = t

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def D(cls, k=1, c=1):
        return cls({k: c})

    @classmethod
    def x(cls, power=1):
        return cls({0: XSeries.monomial(power)})

    @classmethod
    def mult(cls, u):
        """Multiplication by the function ``u(x)``."""
        return cls({0: _as_xseries(u)})

    @classmethod
    def zero(cls, floor=-INF):
        return cls({}, floor)

    @classmethod
    def from_zseries(cls, f: ZSeries):
        """The constant-coefficient operator f(D)."""
        return cls({e: XSeries.const(c) for e, c in f.terms.items()}, f.floor)

    def to_zseries(self) -> ZSeries:
        """Symbol of a constant-coefficient operator."""
        out = {}
        for k, c in self.terms.items():
            if any(c.coeffs[1:]) or (not c.is_exact and c.prec < 1):
                raise ValueError("operator does not have constant coefficients")
            out[k] = c[0] if c.coeffs else ZERO
        return ZSeries(out, self.floor)

    # -- inspection ---------------------------------------------------------
    @property
    def top(self):
        return max(self.terms) if self.terms else None

    def _eff_top(self):
        if self.terms:
            return max(self.terms)
        return self.floor - 1 if _fin(self.floor) else -INF

    @property
    def order(self):
        """Highest order with a certified-nonzero coefficient (None if none)."""
        ks = [k for k, c in self.terms.items() if not c.is_zero()]
        return max(ks) if ks else None

    def leading(self) -> XSeries:
        k = self.order
        if k is None:
            raise PrecisionExhausted("operator is zero at its precision")
        return self.terms[k]

    def coeff(self, k) -> XSeries:
        if k < self.floor:
            raise PrecisionExhausted(f"order {k} lies below the trusted floor {self.floor}")
        return self.terms.get(k, XSeries.zero())

    @property
    def is_exact(self):
        return self.floor == -INF and all(c.is_exact for c in self.terms.values())

    def is_zero(self):
        return all(c.is_zero() for c in self.terms.values())

    def min_prec(self):
        return min((c.prec for c in self.terms.values()), default=INF)

    def structurally_differential(self):
        return self.floor >= 0 or (
            self.floor == -INF and all(k >= 0 for k in self.terms)
        )

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, PsDO):
            return other
        return PsDO.mult(other)

    def __add__(self, other):
        other = self._coerce(other)
        floor = max(self.floor, other.floor)
        out = {k: c for k, c in self.terms.items() if k >= floor}
        for k, c in other.terms.items():
            if k >= floor:
                out[k] = out[k] + c if k in out else c
        return PsDO(out, floor)

    __radd__ = __add__

    def __neg__(self):
        return PsDO({k: -c for k, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        return PsDO({k: v.scale(c) for k, v in self.terms.items()}, self.floor)

    def __mul__(self, other):
        if not isinstance(other, PsDO):
            if isinstance(other, XSeries):
                other = PsDO.mult(other)
            else:
                return self.scale(other)
        return psdo_mul(self, other)

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use psdo_invert for negative powers")
        out = PsDO.const(1)
        for _ in range(n):
            out = out * self
        return out

    def truncate(self, floor=None, prec=None):
        f = self.floor if floor is None else max(self.floor, floor)
        terms = self.terms
        if prec is not None:
            terms = {k: c.truncate(prec) for k, c in terms.items()}
        return PsDO(terms, f)

    def map_coeffs(self, fn):
        return PsDO({k: fn(c) for k, c in self.terms.items()}, self.floor)

    # -- comparison ---------------------------------------------------------
    def agrees(self, other) -> bool:
        other = self._coerce(other)
        floor = max(self.floor, other.floor)
        keys = {k for k in self.terms if k >= floor} | {k for k in other.terms if k >= floor}
        zero = XSeries.zero()
        return all(self.terms.get(k, zero).agrees(other.terms.get(k, zero)) for k in keys)

    def __eq__(self, other):
        if isinstance(other, (PsDO, XSeries, int)):
            return self.agrees(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"PsDO({self})"

    def __str__(self):
        from .textio import format_psdo

        return format_psdo(self)


# ---------------------------------------------------------------------------


def _deriv_cache(c: XSeries):
    cache = [c]

    def get(j):
        while len(cache) <= j:
            cache.append(cache[-1].deriv())
        return cache[j]

    return get


def psdo_mul(p: PsDO, q: PsDO) -> PsDO:
    """Leibniz product with honest window and x-precision bookkeeping."""
    tp, tq = p._eff_top(), q._eff_top()
    floor = max(p.floor + tq, tp + q.floor)
    if floor == INF:
        floor = -INF
    # a negative power of D drags unboundedly many derivatives of q_b;
    # once j reaches prec(q_b) the contribution is entirely unknown
    neg = [a for a in p.terms if a < 0]
    if neg:
        amax = max(neg)
        for b, qb in q.terms.items():
            if qb.prec != INF:
                floor = max(floor, amax + b - int(qb.prec) + 1)
    out = {}
    for b, qb in q.terms.items():
        d = _deriv_cache(qb)
        for a, pa in p.terms.items():
            j = 0
            while True:
                r = a + b - j
                if r < floor:
                    break
                if a >= 0 and j > a:
                    break
                dj = d(j)
                if dj.is_exact and not dj.coeffs:
                    break
                c = _binom(a, j)
                term = pa * dj if c == 1 else pa.scale(c) * dj
                out[r] = out[r] + term if r in out else term
                j += 1
    return PsDO(out, floor)


def psdo_invert(p: PsDO, depth=None, prec=None) -> PsDO:
    """Two-sided inverse.

    Truncated inputs determine the window themselves (result floor
    ``floor(p) - 2 ord(p)``).  Exact inputs are inverted down to
    ``-ord(p) - depth``.  ``prec`` bounds the x-precision when the leading
    coefficient is an exact non-constant polynomial.
    """
    n = p.top
    if n is None:
        raise NotInvertible("zero operator")
    lead = p.terms[n]
    if lead.prec == 0 or not lead.coeffs or not lead[0]:
        raise NotInvertible("leading coefficient is not a unit of Q[[x]]")
    if lead.is_exact and len(lead.coeffs) > 1 and prec is None:
        prec = DEFAULT_PREC
    inv_lead = lead.invert(prec)
    if p.floor == -INF:
        qfloor = -n - (DEFAULT_DEPTH if depth is None else depth)
    else:
        qfloor = p.floor - 2 * n
        if depth is not None:
            qfloor = max(qfloor, -n - depth)
    q = {}
    derivs = {}
    for i in range(0, -n - qfloor + 1):
        acc = None
        for a, pa in p.terms.items():
            for b, dget in derivs.items():
                j = a + b + i
                if j < 0 or (a >= 0 and j > a):
                    continue
                dj = dget(j)
                if dj.is_exact and not dj.coeffs:
                    continue
                c = _binom(a, j)
                term = pa * dj if c == 1 else pa.scale(c) * dj
                acc = term if acc is None else acc + term
        rhs = XSeries.const(1) if i == 0 else XSeries.zero()
        if acc is not None:
            rhs = rhs - acc
        qb = inv_lead * rhs
        q[-n - i] = qb
        derivs[-n - i] = _deriv_cache(qb)
    return PsDO(q, qfloor)


def psdo_adjoint(p: PsDO) -> PsDO:
    """Formal adjoint: (u D^k)* = (-D)^k u."""
    floor = p.floor
    for k, u in p.terms.items():
        if k < 0 and u.prec != INF:
            floor = max(floor, k - int(u.prec) + 1)
    out = {}
    for k, u in p.terms.items():
        d = _deriv_cache(u)
        sign = -1 if k % 2 else 1
        j = 0
        while True:
            r = k - j
            if r < floor or (k >= 0 and j > k):
                break
            dj = d(j)
            if dj.is_exact and not dj.coeffs:
                break
            term = dj.scale(sign * _binom(k, j))
            out[r] = out[r] + term if r in out else term
            j += 1
    return PsDO(out, floor)


def diff_part(p: PsDO) -> PsDO:
    """Projection onto orders >= 0."""
    floor = -INF if p.floor <= 0 else p.floor
    return PsDO({k: c for k, c in p.terms.items() if k >= 0}, floor)


def int_part(p: PsDO) -> PsDO:
    """Projection onto orders < 0."""
    return PsDO({k: c for k, c in p.terms.items() if k < 0}, p.floor)


def is_normalized(l: PsDO) -> bool:
    m = l.order
    if m is None:
        return False
    if any(k > m for k in l.terms):
        return False
    if not l.terms[m].agrees(1):
        return False
    if m - 1 < l.floor:
        return False
    sub = l.terms.get(m - 1)
    return sub is None or sub.is_zero()


def schur_dress(l: PsDO, depth=None) -> PsDO:
    """Monic order-0 ``U`` with ``U D^m U^-1 = l`` and ``u_j(0) = 0``.

    The coefficient of ``D^(m-n)`` in ``U D^m - l U`` gives
    ``m u'_(n-1) = -(terms in u_j, j <= n-2)``, integrated with zero
    constant term.
    """
    m = l.order
    if m == 0:
        raise ZeroOrder("the operator has order 0")
    if m is None or not is_normalized(l):
        raise NotNormalized("need leading coefficient 1 and sub-leading coefficient 0")
    if l.floor == -INF:
        jmax = DEFAULT_DEPTH if depth is None else depth
    else:
        jmax = m - l.floor - 1
        if depth is not None:
            jmax = min(jmax, depth)
    lead = l.terms[m]
    slack = None if lead.is_exact else XSeries.zero(lead.prec)
    u = {0: XSeries.const(1)}
    d = {0: _deriv_cache(u[0])}
    for n in range(2, jmax + 2):
        target = m - n
        acc = XSeries.zero() if slack is None else slack
        for a, la in l.terms.items():
            for jj, get in d.items():
                i = a - jj - target
                if i < 0 or (a >= 0 and i > a):
                    continue
                if a == m and i <= 1:
                    continue
                di = get(i)
                if di.is_exact and not di.coeffs:
                    continue
                c = _binom(a, i)
                acc = acc + la.scale(c) * di
        up = acc.scale(Q(-1) / m)
        un = up.integrate(0)
        u[n - 1] = un
        d[n - 1] = _deriv_cache(un)
    return PsDO({-j: c for j, c in u.items()}, -jmax)


def lax_bracket(l: PsDO, n: int) -> PsDO:
    """[(l^n)_+, l] for a Lax operator l = D + (lower order)."""
    if n < 1:
        raise ValueError("n must be positive")
    if l.order != 1 or l.top != 1 or not l.terms[1].agrees(1):
        raise NotLaxForm("expected order 1 with leading coefficient 1")
    b = diff_part(l**n)
    out = b * l - l * b
    for k, c in out.terms.items():
        if k >= 0 and not c.is_zero():
            raise ArithmeticError(f"bracket has a nonzero order-{k} term {c}")
    return PsDO({k: c for k, c in out.terms.items() if k < 0}, out.floor)


def poly_eval(coeffs, p: PsDO) -> PsDO:
    """sum_i coeffs[i] p^i by Horner's rule."""
    out = PsDO.zero()
    for c in reversed(list(coeffs)):
        out = out * p + PsDO.const(c)
    return out


def commutator(a: PsDO, b: PsDO) -> PsDO:
    return a * b - b * a
