"""Exact scalars and truncated series.

Two series types live here:

``XSeries``
    a power series in ``x`` with rational coefficients, known modulo
    ``x**prec``.  Polynomials known exactly carry ``prec = inf``.

``ZSeries``
    a Laurent series in ``z**-1`` with finite top degree, known for every
    exponent ``>= floor``.  Laurent polynomials known exactly carry
    ``floor = -inf``.

Precision is carried per object.  Binary operations report the best
precision that can be justified from the operands and never more.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Any

import gmpy2

from .errors import NotAUnit, PrecisionExhausted

INF = math.inf
mpq = gmpy2.mpq
ZERO = mpq(0)
ONE = mpq(1)


def Q(value) -> "gmpy2.mpq":
    """Coerce ints, strings ("p/q"), Fractions and mpq to an exact rational."""
    if isinstance(value, type(ZERO)):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    if isinstance(value, str):
        return mpq(value.strip().replace(" ", ""))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    return mpq(value)


def fmt_scalar(c) -> str:
    return str(Q(c))


def falling(j: int, k: int) -> int:
    """j (j-1) ... (j-k+1), i.e. k! * binomial(j, k) for any integer j."""
    out = 1
    for i in range(k):
        out *= j - i
    return out


def binom(a: int, k: int) -> "gmpy2.mpq":
    """Generalized binomial coefficient C(a, k) for integer a and k >= 0."""
    return mpq(falling(a, k), math.factorial(k))


class Verdict(enum.Enum):
    YES = "yes-certified"
    NO = "no-witness"
    UNKNOWN = "unknown-at-precision"

    def __str__(self):
        return self.value


@dataclass
class Certificate:
    """A three-valued answer plus whatever evidence produced it."""

    verdict: Verdict
    witness: Any = None
    window: dict = field(default_factory=dict)

    def __bool__(self):
        raise TypeError("a Certificate is three-valued; inspect .verdict")


# ---------------------------------------------------------------------------
# XSeries
# ---------------------------------------------------------------------------


class XSeries:
    """Truncated power series ``c0 + c1 x + ... + O(x**prec)``.

    ``prec`` is the first untrusted degree; ``inf`` marks an exact polynomial.
    Instances are immutable.
    """

    __slots__ = ("_c", "prec")

    def __init__(self, coeffs=(), prec=INF):
        cs = [Q(c) for c in coeffs]
        if prec == INF:
            while cs and not cs[-1]:
                cs.pop()
        else:
            if prec < 0:
                prec = 0
            prec = int(prec)
            if len(cs) < prec:
                cs.extend([ZERO] * (prec - len(cs)))
            else:
                del cs[prec:]
        self._c = tuple(cs)
        self.prec = prec

    # construction helpers
    @classmethod
    def const(cls, c, prec=INF):
        return cls([c], prec)

    @classmethod
    def monomial(cls, k: int, c=1, prec=INF):
        return cls([0] * k + [c], prec)

    @classmethod
    def zero(cls, prec=INF):
        return cls((), prec)

    @classmethod
    def geometric(cls, ratio, prec):
        """1/(1 - ratio*x) truncated at ``prec``."""
        r = Q(ratio)
        return cls([r**k for k in range(prec)], prec)

    # basic access
    @property
    def coeffs(self):
        return self._c

    def __getitem__(self, k):
        if k < 0:
            return ZERO
        if k < len(self._c):
            return self._c[k]
        if k < self.prec:
            return ZERO
        raise PrecisionExhausted(f"x^{k} is beyond the known precision O(x^{self.prec})")

    def known(self, k) -> bool:
        return k < self.prec

    @property
    def is_exact(self) -> bool:
        return self.prec == INF

    def valuation(self):
        for k, c in enumerate(self._c):
            if c:
                return k
        return self.prec  # inf for the exact zero

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes (certified zero at precision)."""
        return not any(self._c)

    def degree(self):
        """Degree of an exact polynomial (-1 for zero)."""
        return len(self._c) - 1

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, XSeries):
            return other
        return XSeries.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        prec = min(self.prec, other.prec)
        n = max(len(self._c), len(other._c))
        if prec != INF:
            n = min(n, prec)
        a, b = self._c, other._c
        out = [(a[k] if k < len(a) else ZERO) + (b[k] if k < len(b) else ZERO) for k in range(n)]
        return XSeries(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return XSeries([-c for c in self._c], self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = Q(c)
        if not c:
            return XSeries.zero(self.prec if self.prec == INF else self.prec)
        return XSeries([c * a for a in self._c], self.prec)

    def __mul__(self, other):
        if not isinstance(other, XSeries):
            return self.scale(other)
        va, vb = self.valuation(), other.valuation()
        prec = min(self.prec + vb, other.prec + va)
        a, b = self._c, other._c
        if not a or not b:
            return XSeries.zero(prec)
        n = len(a) + len(b) - 1
        if prec != INF:
            n = min(n, int(prec))
        out = [ZERO] * n
        for i, ai in enumerate(a):
            if not ai or i >= n:
                continue
            for j in range(min(len(b), n - i)):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return XSeries(out, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = XSeries.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def deriv(self, times: int = 1):
        c = self._c
        for _ in range(times):
            c = tuple(k * c[k] for k in range(1, len(c)))
        prec = self.prec if self.prec == INF else max(self.prec - times, 0)
        return XSeries(c, prec)

    def integrate(self, constant=0):
        """Antiderivative with the given value at x = 0; gains one degree of precision."""
        out = [Q(constant)] + [c / (k + 1) for k, c in enumerate(self._c)]
        return XSeries(out, self.prec + 1)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return XSeries(self._c, prec)

    def invert(self, prec=None):
        """Multiplicative inverse.  Requires a nonzero constant term."""
        if self.prec == 0 or not self._c or not self._c[0]:
            raise NotAUnit("constant term is zero (or unknown); not a unit of Q[[x]]")
        if self.is_exact and len(self._c) == 1:
            return XSeries.const(1 / self._c[0])
        target = self.prec if prec is None else min(prec, self.prec)
        if target == INF:
            raise ValueError("inverse of a non-constant polynomial needs an explicit prec")
        target = int(target)
        a = self._c
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, target):
            s = ZERO
            for i in range(1, min(k, len(a) - 1) + 1):
                s += a[i] * out[k - i]
            out.append(-s * inv0)
        return XSeries(out, target)

    def __call__(self, value):
        """Evaluate an exact polynomial (or the constant term at 0)."""
        value = Q(value)
        if not value:
            return self[0]
        if not self.is_exact:
            raise PrecisionExhausted("cannot evaluate a truncated series away from 0")
        out = ZERO
        for c in reversed(self._c):
            out = out * value + c
        return out

    # comparison
    def agrees(self, other) -> bool:
        """Equality of the coefficients both operands know."""
        other = self._coerce(other)
        n = min(self.prec, other.prec)
        if n == INF:
            return self._c == other._c
        return all(self[k] == other[k] for k in range(int(n)))

    def __eq__(self, other):
        if isinstance(other, (XSeries, int)) or hasattr(other, "denominator"):
            return self.agrees(other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"XSeries({self})"

    def __str__(self):
        from .textio import format_xseries

        return format_xseries(self)


# ---------------------------------------------------------------------------
# ZSeries
# ---------------------------------------------------------------------------


class ZSeries:
    """Truncated Laurent series in ``z**-1``.

    ``terms`` maps exponent -> nonzero coefficient for trusted exponents;
    every exponent ``>= floor`` absent from ``terms`` is a certified zero.
    ``floor = -inf`` marks an exact Laurent polynomial.
    """

    __slots__ = ("terms", "floor")

    def __init__(self, terms=None, floor=-INF):
        t = {}
        if terms:
            for e, c in dict(terms).items():
                if e >= floor:
                    c = Q(c)
                    if c:
                        t[int(e)] = c
        self.terms = t
        self.floor = floor if floor == -INF else int(floor)

    @classmethod
    def monomial(cls, e: int, c=1, floor=-INF):
        return cls({e: c}, floor)

    @classmethod
    def const(cls, c, floor=-INF):
        return cls({0: c}, floor)

    @classmethod
    def from_poly(cls, coeffs, floor=-INF):
        """Polynomial in z from ascending coefficients."""
        return cls({k: c for k, c in enumerate(coeffs)}, floor)

    @property
    def top(self):
        return max(self.terms) if self.terms else None

    @property
    def is_exact(self):
        return self.floor == -INF

    def _eff_top(self):
        if self.terms:
            return max(self.terms)
        return self.floor - 1  # -inf for the exact zero

    def __getitem__(self, e):
        if e < self.floor:
            raise PrecisionExhausted(f"z^{e} lies below the trusted floor {self.floor}")
        return self.terms.get(e, ZERO)

    def leading(self):
        t = self.top
        return ZERO if t is None else self.terms[t]

    def is_zero(self):
        return not self.terms

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, ZSeries):
            return other
        return ZSeries.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        floor = max(self.floor, other.floor)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return ZSeries(out, floor)

    __radd__ = __add__

    def __neg__(self):
        return ZSeries({e: -c for e, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = Q(c)
        return ZSeries({e: c * v for e, v in self.terms.items()}, self.floor)

    def shift(self, k: int):
        """Multiply by z**k."""
        return ZSeries({e + k: c for e, c in self.terms.items()}, self.floor + k)

    def __mul__(self, other):
        if not isinstance(other, ZSeries):
            return self.scale(other)
        floor = max(self.floor + other._eff_top(), other.floor + self._eff_top())
        if floor == -INF and (self.floor != -INF or other.floor != -INF):
            floor = -INF if (self.is_exact and other.is_exact) else self.floor + other.floor - 1
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = ea + eb
                if e >= floor:
                    out[e] = out.get(e, ZERO) + ca * cb
        return ZSeries(out, floor)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ZSeries.const(1)
        for _ in range(n):
            out = out * self
        return out

    def invert(self, floor=None):
        """Multiplicative inverse.  ``floor`` bounds the result of an exact input."""
        d = self.top
        if d is None:
            raise NotAUnit("cannot invert a series that is zero at its precision")
        lead = self.terms[d]
        if self.is_exact and len(self.terms) == 1:
            return ZSeries.monomial(-d, 1 / lead)
        if self.is_exact:
            if floor is None:
                raise ValueError("inverse of an exact Laurent polynomial needs a floor")
            rel = -d - floor
        else:
            rel = d - self.floor
            if floor is not None:
                rel = min(rel, -d - floor)
        inv0 = 1 / lead
        # self = lead z^d (1 + sum_k r_k z^-k); invert term by term in depth k
        r = {d - e: c * inv0 for e, c in self.terms.items() if e != d}
        s = [ONE]
        for k in range(1, rel + 1):
            acc = ZERO
            for i in range(1, k + 1):
                ri = r.get(i)
                if ri:
                    acc += ri * s[k - i]
            s.append(-acc)
        return ZSeries({-d - k: inv0 * c for k, c in enumerate(s)}, -d - rel)

    def __truediv__(self, other):
        if isinstance(other, ZSeries):
            return self * other.invert()
        return self.scale(1 / Q(other))

    def deriv(self):
        """d/dz: z^j -> j z^(j-1)."""
        floor = self.floor if self.floor == -INF else self.floor - 1
        return ZSeries({e - 1: e * c for e, c in self.terms.items()}, floor)

    def truncate(self, floor):
        if floor <= self.floor:
            return self
        return ZSeries(self.terms, floor)

    def positive_part(self):
        """Projection onto C[z]; exact when the series is known down to 0."""
        if self.floor > 0:
            raise PrecisionExhausted("the polynomial part is not fully known")
        return ZSeries({e: c for e, c in self.terms.items() if e >= 0})

    def negative_part(self):
        return ZSeries({e: c for e, c in self.terms.items() if e < 0}, self.floor)

    def agrees(self, other) -> bool:
        other = self._coerce(other)
        floor = max(self.floor, other.floor)
        keys = {e for e in self.terms if e >= floor} | {e for e in other.terms if e >= floor}
        return all(self.terms.get(e, ZERO) == other.terms.get(e, ZERO) for e in keys)

    def __eq__(self, other):
        if isinstance(other, (ZSeries, int)) or hasattr(other, "denominator"):
            return self.agrees(other)
        return NotImplemented

    __hash__ = None

    def vector(self, lo: int, hi: int):
        """Coefficients at exponents hi, hi-1, ..., lo (all must be trusted)."""
        if lo < self.floor:
            raise PrecisionExhausted(f"z^{lo} lies below the trusted floor {self.floor}")
        return [self.terms.get(e, ZERO) for e in range(hi, lo - 1, -1)]

    def __repr__(self):
        return f"ZSeries({self})"

    def __str__(self):
        from .textio import format_zseries

        return format_zseries(self)


def series_mul(a: XSeries, b: XSeries) -> XSeries:
    return a * b


def series_invert(a: XSeries, prec=None) -> XSeries:
    return a.invert(prec)


def series_derive(a: XSeries) -> XSeries:
    if a.prec == 0:
        raise PrecisionExhausted("derivative of a series with no known coefficients")
    return a.deriv()
