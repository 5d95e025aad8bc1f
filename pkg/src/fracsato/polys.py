"""Bivariate polynomials F(z, w) with rational coefficients."""

from math import gcd, lcm

from .series import Q, ZERO


class RatPoly2:
    """Sparse map ``(i, j) -> coefficient`` for the monomial ``z^i w^j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for (i, j), c in (coeffs or {}).items():
            c = Q(c)
            if c:
                self.coeffs[(int(i), int(j))] = c

    def is_zero(self):
        return not self.coeffs

    def bidegree(self):
        if not self.coeffs:
            return (-1, -1)
        return (max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs))

    def total_degree(self):
        return max((i + j for i, j in self.coeffs), default=-1)

    def leading_key(self):
        """Monomial that leads under (w-degree, z-degree) descending."""
        return max(self.coeffs, key=lambda ij: (ij[1], ij[0]))

    def normalized(self):
        """Integer coefficients with content 1 and a positive leading coefficient."""
        if not self.coeffs:
            return self
        den = 1
        for c in self.coeffs.values():
            den = lcm(den, int(c.denominator))
        ints = {k: int(c * den) for k, c in self.coeffs.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if ints[self.leading_key()] < 0:
            g = -g
        return RatPoly2({k: Q(v) / g for k, v in ints.items()})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return RatPoly2(out)

    def __neg__(self):
        return RatPoly2({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RatPoly2):
            c = Q(other)
            return RatPoly2({k: c * v for k, v in self.coeffs.items()})
        out = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, ZERO) + a * b
        return RatPoly2(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, RatPoly2):
            return self.coeffs == other.coeffs
        return NotImplemented

    __hash__ = None

    def evaluate(self, p, q, one):
        """F(p, q) for commuting ``p, q`` in any ring with unit ``one``.

        Horner in ``q`` over polynomials in ``p``.
        """
        _, dj = self.bidegree()
        out = None
        for j in range(dj, -1, -1):
            row = {i: c for (i, jj), c in self.coeffs.items() if jj == j}
            inner = None
            for i in range(max(row, default=0), -1, -1):
                c = row.get(i, ZERO)
                inner = one * c if inner is None else inner * p + one * c
            out = inner if out is None else out * q + inner
        return out if out is not None else one * 0

    def __call__(self, z, w):
        return sum((c * z**i * w**j for (i, j), c in self.coeffs.items()), ZERO)

    def __repr__(self):
        return f"RatPoly2({self})"

    def __str__(self):
        from .textio import format_ratpoly2

        return format_ratpoly2(self)
