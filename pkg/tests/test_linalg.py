import random

import sympy as sp

from fracsato import Q, bareiss_echelon, kernel_basis, matrix_rank, solve
from fracsato.linalg import Reducer, matvec


def rand_matrix(rng, r, c):
    return [[Q(rng.randint(-3, 3)) / rng.randint(1, 3) for _ in range(c)] for _ in range(r)]


def to_sympy(m):
    return sp.Matrix([[sp.Rational(str(v)) for v in row] for row in m])


def test_rank_and_kernel_against_sympy():
    rng = random.Random(7)
    for _ in range(40):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = rand_matrix(rng, r, c)
        if rng.random() < 0.5 and r > 1:
            m[-1] = [a + b for a, b in zip(m[0], m[1 % r])]
        ref = to_sympy(m)
        assert matrix_rank(m) == ref.rank()
        ker = kernel_basis(m, ncols=c)
        assert len(ker) == c - ref.rank()
        for v in ker:
            assert all(x == 0 for x in matvec(m, v))


def test_solve_consistent_and_inconsistent():
    m = [[Q(1), Q(2)], [Q(2), Q(4)]]
    assert solve(m, [Q(1), Q(3)]) is None
    sol = solve(m, [Q(1), Q(2)])
    assert matvec(m, sol) == [1, 2]


def test_echelon_returns_integer_rows():
    rows, piv = bareiss_echelon([[Q("1/2"), Q(1)], [Q(1), Q(3)]], 2)
    assert len(piv) == 2
    assert all(isinstance(v, int) or int(v) == v for row in rows for v in row)


def test_reducer_detects_dependence():
    red = Reducer()
    assert red.insert({0: Q(1), 2: Q(1)})
    assert red.insert({1: Q(1)})
    assert not red.insert({0: Q(2), 1: Q(3), 2: Q(2)})
    assert red.rank == 2
