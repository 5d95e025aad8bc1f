"""Algebraic relations between commuting (fractional) operators.

Everything is read off trusted coefficient cells ``(order, x-degree)`` of
operator expansions.  A cell enters a linear system only when every
operator involved trusts it.
"""

from dataclasses import dataclass, field

from .errors import NoRelationWithinBudget, NotCommutingAtWindow
from .fractional import FracOp, dord
from .linalg import Reducer, kernel_basis
from .polys import RatPoly2
from .psdo import PsDO
from .series import INF, ZERO


def _cells_of(ops, lo=None):
    """Cells trusted by every operator in ``ops`` (orders >= lo when given)."""
    floor = max(o.floor for o in ops)
    if lo is not None:
        floor = max(floor, lo)
    orders = set()
    for o in ops:
        orders |= {k for k in o.terms if k >= floor}
    cells = []
    for k in sorted(orders, reverse=True):
        prec = min((o.terms[k].prec for o in ops if k in o.terms), default=INF)
        if prec == INF:
            n = max(len(o.terms[k].coeffs) for o in ops if k in o.terms)
        else:
            n = int(prec)
        cells.extend((k, t) for t in range(n))
    return cells, floor


def _vector(op, cells):
    out = []
    for k, t in cells:
        s = op.terms.get(k)
        out.append(s.coeffs[t] if s is not None and t < len(s.coeffs) else ZERO)
    return out


def check_commuting(a: PsDO, b: PsDO):
    c = a * b - b * a
    if any(not s.is_zero() for s in c.terms.values()):
        raise NotCommutingAtWindow("the commutator has a trusted nonzero coefficient")
    if not c.terms and c.floor != -INF and c.floor > 0:
        raise NotCommutingAtWindow("the commutator window is empty")
    return c


def _expansions(p, q, depth):
    p, q = FracOp.coerce(p), FracOp.coerce(q)
    if depth is not None:
        p, q = p.with_depth(depth), q.with_depth(depth)
    return p, q, p.expansion(), q.expansion()


def order_bounds(p, q, n: int):
    """``(-n (dord p + dord q), n (ord p + ord q))``."""
    p, q, ep, eq = _expansions(p, q, None)
    check_commuting(ep, eq)
    dp, dq = dord(p).dord, dord(q).dord
    return -n * (dp + dq), n * (ep.order + eq.order)


@dataclass
class BCReport:
    n_used: int
    span_dim: int
    bound: int
    relation: RatPoly2 = None
    residual_window: dict = field(default_factory=dict)
    kernel: list = field(default_factory=list)
    growth: list = field(default_factory=list)
    differential_bound: int = None


class _Monomials:
    """Cached products ``p^i q^j``."""

    def __init__(self, ep, eq):
        self.ep, self.eq = ep, eq
        self.pp = [PsDO.const(1)]
        self.cache = {}

    def __call__(self, i, j):
        key = (i, j)
        if key not in self.cache:
            while len(self.pp) <= i:
                self.pp.append(self.pp[-1] * self.ep)
            if j == 0:
                self.cache[key] = self.pp[i]
            else:
                self.cache[key] = self(i, j - 1) * self.eq
        return self.cache[key]


def _deepen(p: FracOp, q: FracOp, n, lo):
    """Expansions deep enough that monomials up to ``p^n q^n`` trust orders >= lo."""
    ep, eq = p.expansion(), q.expansion()
    top = max(ep.order, eq.order, 0)
    need = lo - 2 * n * top - 2
    for _ in range(4):
        if ep.floor <= need and eq.floor <= need:
            break
        extra = max(ep.floor, eq.floor) - need
        if p.has_presentation:
            p = p.with_depth(p.depth + extra)
        if q.has_presentation:
            q = q.with_depth(q.depth + extra)
        ep, eq = p.expansion(), q.expansion()
        if not (p.has_presentation or q.has_presentation):
            break
    return p, q, ep, eq


def span_dim(p, q, n: int, dords=None) -> BCReport:
    """Exact dimension of ``span{p^i q^j : i, j <= n}`` on trusted cells."""
    p, q = FracOp.coerce(p), FracOp.coerce(q)
    ep, eq = p.expansion(), q.expansion()
    check_commuting(ep, eq)
    if dords is None:
        dords = (dord(p).dord, dord(q).dord)
    dp, dq = dords
    lo = -n * (dp + dq)
    p, q, ep, eq = _deepen(p, q, n, lo)
    mons = _Monomials(ep, eq)
    ops = [mons(i, j) for i in range(n + 1) for j in range(n + 1)]
    cells, floor = _cells_of(ops)
    red = Reducer()
    for o in ops:
        red.insert(dict(enumerate(_vector(o, cells))))
    r = ep.order + eq.order + dp + dq
    diff_bound = (ep.order + eq.order) * n + 1 if dp == 0 and dq == 0 else None
    return BCReport(
        n_used=n,
        span_dim=red.rank,
        bound=2 * r * n + 1,
        residual_window={"floor": int(floor) if floor != -INF else None, "cells": len(cells)},
        differential_bound=diff_bound,
    )


def bc_relation(p, q, n_max: int = 3, depth=None, return_report=False):
    """First nonzero ``F`` with ``F(p, q) = 0`` on the trusted window, by increasing degree."""
    p, q = FracOp.coerce(p), FracOp.coerce(q)
    if depth is not None:
        p, q = p.with_depth(depth), q.with_depth(depth)
    ep, eq = p.expansion(), q.expansion()
    if ep.order is None or ep.order == 0:
        raise ValueError("p must have nonzero order")
    if eq.order is None or (eq.order == 0 and all(k <= 0 for k in eq.terms) and eq.is_zero()):
        raise ValueError("q must be nonconstant")
    check_commuting(ep, eq)
    mons = _Monomials(ep, eq)
    growth = []
    for n in range(1, n_max + 1):
        for d in range(n, 2 * n + 1):
            keys = [(i, j) for j in range(n + 1) for i in range(n + 1) if i + j <= d]
            ops = [mons(i, j) for i, j in keys]
            cells, floor = _cells_of(ops)
            m = [[row[c] for c in range(len(ops))] for row in zip(*[_vector(o, cells) for o in ops])]
            ker = kernel_basis(m, ncols=len(ops)) if m else []
            if not ker:
                continue
            cands = [RatPoly2({k: v for k, v in zip(keys, vec)}).normalized() for vec in ker]
            cands.sort(key=lambda f: (f.total_degree(), len(f.coeffs)))
            for F in cands:
                ok, win = _verify(F, ep, eq)
                if ok:
                    report = BCReport(
                        n_used=n,
                        span_dim=len(ops) - len(ker),
                        bound=None,
                        relation=F,
                        residual_window=win,
                        kernel=cands,
                        growth=growth,
                    )
                    return (F, report) if return_report else F
        full = [mons(i, j) for i in range(n + 1) for j in range(n + 1)]
        cells, _ = _cells_of(full)
        red = Reducer()
        for o in full:
            red.insert(dict(enumerate(_vector(o, cells))))
        growth.append((n, red.rank))
    raise NoRelationWithinBudget(
        f"no relation with n <= {n_max} on the trusted window (span growth {growth})", growth=growth
    )


def _verify(F: RatPoly2, ep: PsDO, eq: PsDO):
    val = F.evaluate(ep, eq, PsDO.const(1))
    bad = [k for k, c in val.terms.items() if not c.is_zero()]
    win = {"floor": int(val.floor) if val.floor != -INF else None,
           "orders": len(val.terms)}
    return (not bad), win
