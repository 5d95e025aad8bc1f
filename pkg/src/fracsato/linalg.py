"""Exact linear algebra over the rationals.

Elimination is fraction-free (Bareiss): each row is scaled to integers,
then every update ``(p*a - b*c) // prev`` stays integral, which keeps
intermediate entries at the size of minors instead of letting
denominators compound.  Back substitution for kernel vectors is done
once, in rationals, at the end.
"""

from math import lcm

import gmpy2

from .series import Q, ZERO

mpz = gmpy2.mpz
mpq = gmpy2.mpq


def _integer_rows(m):
    rows = []
    for row in m:
        row = [Q(v) for v in row]
        den = 1
        for v in row:
            d = int(v.denominator)
            if d != 1:
                den = lcm(den, d)
        rows.append([mpz(v * den) for v in row])
    return rows


def bareiss_echelon(m, ncols=None):
    """Fraction-free row echelon form.

    Returns ``(rows, pivots)``: integer rows of the echelon form (only the
    first ``len(pivots)`` are nonzero) and the pivot column of each.
    """
    a = _integer_rows(m)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    nrows = len(a)
    prev = mpz(1)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        best = None
        for i in range(r, nrows):
            v = a[i][c]
            if v:
                size = abs(v)
                if best is None or size < best:
                    piv, best = i, size
                    if size == 1:
                        break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        p = pr[c]
        for i in range(r + 1, nrows):
            row = a[i]
            b = row[c]
            if b:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - b * pr[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    if row[j]:
                        row[j] = (p * row[j]) // prev
            row[c] = mpz(0)
        prev = p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    m = list(m)
    if not m:
        return 0
    return len(bareiss_echelon(m)[1])


def kernel_basis(m, ncols=None):
    """Exact basis of the right null space of ``m``.

    Each vector has a 1 in its free column and 0 in the other free columns.
    ``ncols`` is required when ``m`` has no rows.
    """
    m = list(m)
    if ncols is None:
        if not m:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(m[0])
    if not m:
        return [[mpq(1) if i == k else ZERO for i in range(ncols)] for k in range(ncols)]
    rows, pivots = bareiss_echelon(m, ncols)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = mpq(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = rows[r]
            s = ZERO
            for j in range(c + 1, ncols):
                if row[j] and x[j]:
                    s += row[j] * x[j]
            x[c] = -s / row[c]
        basis.append(x)
    return basis


def solve(m, b):
    """One exact solution of ``m x = b`` or ``None`` when inconsistent."""
    m = list(m)
    ncols = len(m[0]) if m else 0
    aug = [list(row) + [Q(bi)] for row, bi in zip(m, b)]
    if not aug:
        return [ZERO] * ncols
    rows, pivots = bareiss_echelon(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = rows[r]
        s = mpq(row[ncols])
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return x


def matvec(m, v):
    return [sum((Q(a) * b for a, b in zip(row, v)), ZERO) for row in m]


class Reducer:
    """Incremental row reduction: insert vectors, test membership, track rank.

    Vectors are dicts ``index -> value``.  Stored rows are kept with a unit
    pivot so reducing a new vector costs one pass per stored row.
    """

    def __init__(self):
        self.rows = {}  # pivot index -> row dict with row[pivot] == 1

    def reduce(self, v):
        v = {k: Q(c) for k, c in v.items() if c}
        while v:
            hit = [k for k in v if k in self.rows]
            if not hit:
                break
            k = max(hit)
            c = v[k]
            for j, a in self.rows[k].items():
                nv = v.get(j, ZERO) - c * a
                if nv:
                    v[j] = nv
                else:
                    v.pop(j, None)
        return v

    def insert(self, v) -> bool:
        """Add ``v``; return True when it was independent of the stored rows."""
        r = self.reduce(v)
        if not r:
            return False
        k = max(r)
        inv = 1 / r[k]
        self.rows[k] = {j: a * inv for j, a in r.items()}
        return True

    @property
    def rank(self):
        return len(self.rows)
