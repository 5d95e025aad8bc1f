"""Elliptic and cuspidal curves, their planes, and z-side operators.

Series in the local parameter ``w`` at the marked point are stored through
``z = 1/w`` as ``ZSeries``: ``P(z^-1) = z^2 + sum_k c_k z^(2-2k)``.
"""

from dataclasses import dataclass, field

from .errors import PointNotOnCurve
from .grassmannian import (
    Plane,
    _rank_windows,
    _stable,
    as_differential,
    certify_differential,
    conjugate_spectral,
    dressing_from_plane,
    rank,
)
from .psdo import PsDO
from .relations import bc_relation, check_commuting
from .series import INF, ZERO, Q, XSeries, ZSeries, binom


# ---------------------------------------------------------------------------
# Weierstrass series
# ---------------------------------------------------------------------------


def weierstrass_coefficients(g2, g3, terms: int):
    """``c_2..c_terms`` of ``P(w) = w^-2 + sum c_k w^(2k-2)``."""
    g2, g3 = Q(g2), Q(g3)
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, terms + 1):
        s = sum((c[m] * c[k - m] for m in range(2, k - 1)), ZERO)
        c[k] = 3 * s / ((2 * k + 1) * (k - 3))
    return {k: v for k, v in c.items() if k <= terms}


def weierstrass_p(g2, g3, terms: int = 10):
    """``(P, P')`` as series in ``z = 1/w``, both truncated after ``c_terms``.

    ``P'`` is ``dP/dw``.  With ``g2 = g3 = 0`` both are exact.
    """
    c = weierstrass_coefficients(g2, g3, terms)
    if all(v == 0 for v in c.values()):
        return ZSeries({2: 1}), ZSeries({3: -2})
    wp = ZSeries({2: 1, **{2 - 2 * k: v for k, v in c.items()}}, floor=1 - 2 * terms)
    wpp = ZSeries({3: -2, **{3 - 2 * k: v * (2 * k - 2) for k, v in c.items()}}, floor=2 - 2 * terms)
    return wp, wpp


def weierstrass_residual(g2, g3, wp: ZSeries, wpp: ZSeries) -> ZSeries:
    """``P'^2 - 4 P^3 + g2 P + g3``; certified zero when the expansion is right."""
    g2, g3 = Q(g2), Q(g3)
    return wpp * wpp - (wp * wp * wp).scale(4) + wp.scale(g2) + g3


# ---------------------------------------------------------------------------
# curves and planes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveData:
    g2: object
    g3: object
    a: object
    b: object

    def __post_init__(self):
        for name in ("g2", "g3", "a", "b"):
            object.__setattr__(self, name, Q(getattr(self, name)))
        if self.b**2 != 4 * self.a**3 - self.g2 * self.a - self.g3:
            raise PointNotOnCurve(f"({self.a}, {self.b}) is not on y^2 = 4x^3 - {self.g2}x - {self.g3}")

    @property
    def discriminant(self):
        return self.g2**3 - 27 * self.g3**2

    @property
    def singular(self):
        return self.discriminant == 0


class EllipticPlane(Plane):
    """A plane built from curve data; keeps ``P``, ``P'`` and the raw ``v0, v1``."""

    def __init__(self, basis, curve, wp, wpp, v0, v1):
        super().__init__(basis, canonical=True)
        self.curve = curve
        self.wp = wp
        self.wpp = wpp
        self.v0 = v0
        self.v1 = v1


def _inverse_floor(s: ZSeries, floor):
    if s.is_exact and len(s.terms) == 1:
        return s.invert()
    return s.invert(floor=floor) if s.is_exact else s.invert()


def elliptic_plane(c: CurveData, depth: int = 10, floor: int = -12) -> EllipticPlane:
    """Module over ``C[P, P']`` generated by ``(P - a)/P`` and ``(P' - b)/P``."""
    if not isinstance(c, CurveData):
        c = CurveData(*c)
    target = floor - depth - 6
    terms = max(4, (2 - target) // 2 + 1)
    wp, wpp = weierstrass_p(c.g2, c.g3, terms)
    inv = _inverse_floor(wp, target)
    v0 = (wp - c.a) * inv
    v1 = (wpp - c.b) * inv
    span = []
    pk = ZSeries.const(1)
    for k in range(depth // 2 + 1):
        span.append(pk * v0)
        span.append(pk * v1)
        pk = pk * wp
    W = Plane.from_spanning(span, depth)
    basis = [v.truncate(floor) for v in W.basis]
    return EllipticPlane(basis, c, wp, wpp, v0, v1)


@dataclass
class ConjugatedPair:
    l2: PsDO
    l3: PsDO
    dressing: PsDO
    certificates: dict = field(default_factory=dict)


def conjugated_pair(w: EllipticPlane, jmax=None, prec=None) -> ConjugatedPair:
    """``U P(D) U^-1`` and ``U P'(D) U^-1``, certified differential and then truncated to D^>=0."""
    U = dressing_from_plane(w, jmax, prec)
    raw2 = conjugate_spectral(U, w.wp)
    raw3 = conjugate_spectral(U, w.wpp)
    c2, c3 = certify_differential(raw2), certify_differential(raw3)
    l2, l3 = as_differential(raw2), as_differential(raw3)
    comm = check_commuting(l2, l3)
    return ConjugatedPair(l2, l3, U, {"l2": c2, "l3": c3, "commutator_floor": comm.floor})


def elliptic_relation(w: EllipticPlane, pair: ConjugatedPair = None, n_max=3):
    pair = pair or conjugated_pair(w)
    return bc_relation(pair.l2, pair.l3, n_max, return_report=True)


# ---------------------------------------------------------------------------
# z-side operators
# ---------------------------------------------------------------------------


def zderiv(v: ZSeries, times=1) -> ZSeries:
    for _ in range(times):
        v = v.deriv()
    return v


class ZOperator:
    """``sum_k a_k(z) d^k/dz^k`` with finitely many ``k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = {int(k): v if isinstance(v, ZSeries) else ZSeries.const(v) for k, v in coeffs.items()}
        self.coeffs = {k: v for k, v in self.coeffs.items() if not (v.is_exact and v.is_zero())}

    @property
    def max_ord(self):
        return max(self.coeffs, default=0)

    @classmethod
    def multiplication(cls, f: ZSeries):
        return cls({0: f})

    def compose(self, other: "ZOperator") -> "ZOperator":
        """``self o other``."""
        out = {}
        for k, a in self.coeffs.items():
            for m, b in other.coeffs.items():
                for i in range(k + 1):
                    term = a * zderiv(b, i)
                    term = term.scale(binom(k, i))
                    key = k - i + m
                    out[key] = out[key] + term if key in out else term
        return ZOperator(out)

    def to_psdo(self) -> PsDO:
        """Operator ``P~`` with ``v . P~ = self(v)``: ``a(z) d_z^k  <->  sum_m a[m] x^k D^m``."""
        floor = max((a.floor for a in self.coeffs.values()), default=-INF)
        terms = {}
        K = self.max_ord
        for k, a in self.coeffs.items():
            for m, c in a.terms.items():
                row = terms.setdefault(m, [ZERO] * (K + 1))
                row[k] += c
        return PsDO({m: XSeries(row) for m, row in terms.items()}, floor)


def z_apply(op: ZOperator, v: ZSeries) -> ZSeries:
    out = None
    for k, a in op.coeffs.items():
        t = a * zderiv(v, k)
        out = t if out is None else out + t
    return out if out is not None else ZSeries({})


@dataclass
class SectionResult:
    kind: str  # 'preserving' | 'rational-section' | 'unknown-at-precision'
    excess: int = 0
    window: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def __str__(self):
        return f"rational-section(excess {self.excess})" if self.kind == "rational-section" else self.kind


def section_check(w: Plane, op: ZOperator) -> SectionResult:
    """Does ``op`` map ``W`` into ``W`` (or a finite-codimension part of it)?"""
    res = []
    witnesses = []
    nmax = -1
    for n in range(w.depth + 1):
        y = z_apply(op, w.basis[n])
        r = w.residual(y)
        if r is None:
            break
        nmax = n
        res.append((n, r))
        if r.terms:
            witnesses.append(n)
    if nmax < 0:
        return SectionResult("unknown-at-precision", window={"n_max": nmax})
    floor = max(r.floor for _, r in res)
    win = {"n_max": nmax, "floor": int(floor) if floor != -INF else None}
    if not witnesses:
        if floor >= 0:
            return SectionResult("unknown-at-precision", window=win)
        return SectionResult("preserving", window=win)
    ranks, wins, _ = _rank_windows(res)
    win.update({"ranks": ranks, "windows": wins})
    if _stable(ranks, wins):
        return SectionResult("rational-section", ranks[-1], win, witnesses)
    return SectionResult("unknown-at-precision", ranks[-1], win, witnesses)


def op_rational_section(w: EllipticPlane) -> ZOperator:
    """``(P - a) v0 [-z^2 d_z + v1/(2 v0)] v0^-1`` with the raw ``v0, v1``.

    Expanded: ``-z^2 (P - a) d_z + P (z^2 v0' + v1/2)``.
    """
    a = w.curve.a
    z2 = ZSeries({2: 1})
    a1 = -(z2 * (w.wp - a))
    a0 = w.wp * (z2 * w.v0.deriv() + w.v1.scale(Q("1/2")))
    return ZOperator({1: a1, 0: a0})


def rank1_verify(w: Plane, f: ZSeries, deg_bound: int = 8) -> bool:
    res = rank(w, f, deg_bound)
    return res.rank == 1 and res.stabilized
