import random
from fractions import Fraction

import pytest

from concordia import MatQ, RatPoly, SeifertMatrix, block_sum, realize
from concordia.exact.poly import LaurentPolyQ


@pytest.fixture
def rng():
    return random.Random(0xA1EC)


def rand_rat(rng, num=6, den=4):
    return Fraction(rng.randrange(-num, num + 1), rng.randrange(1, den + 1))


def random_plus_matrix(rng, size, rational=True):
    """A random valid matrix for eps = +1 (nonsingular skew part)."""
    while True:
        entries = [rand_rat(rng) if rational else Fraction(rng.randrange(-4, 5)) for _ in range(size * size)]
        A = MatQ(size, size, entries)
        if (A - A.transpose()).det() != 0:
            return SeifertMatrix(A, 1)


def random_minus_base(rng):
    """A valid 2x2 for eps = -1, from the genus-one realization."""
    while True:
        u = Fraction(rng.randrange(0, 5))
        v = Fraction(rng.randrange(1, 5))
        a = (u * u - v * v) / 4
        A = MatQ.from_rows([[a, u], [0, 1]])
        if (A + A.transpose()).det() != 0:
            return SeifertMatrix(A, -1)


def random_congruence(rng, n):
    """A random invertible integer matrix built from elementary moves."""
    P = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = Fraction(rng.randrange(-2, 3))
        for k in range(n):
            P[i][k] += c * P[j][k]
    return MatQ.from_rows(P)


def random_valid_matrix(rng, eps, size):
    """A random valid Seifert matrix of even size for either sign."""
    assert size % 2 == 0
    if eps == 1:
        return random_plus_matrix(rng, size)
    S = random_minus_base(rng)
    while S.dim < size:
        S = block_sum(S, random_minus_base(rng))
    P = random_congruence(rng, size)
    return SeifertMatrix(P * S.A * P.transpose(), -1)


def random_realizable_poly(rng, eps, genus):
    """A product of genus-one family polynomials passing the
    realizability conditions for the given sign."""
    poly = RatPoly.one()
    for _ in range(genus):
        if eps == 1:
            a = Fraction(rng.randrange(-6, 7))
            u = Fraction(rng.randrange(1, 5))
            poly = poly * RatPoly([a, u * u - 2 * a, a])
        else:
            u = Fraction(rng.randrange(0, 4))
            v = Fraction(rng.randrange(1, 4))
            a = (u * u - v * v) / 4
            poly = poly * RatPoly([a, -(u * u + v * v) / 2, a])
    return LaurentPolyQ(poly)


def shuffle_perm(s, r, n):
    """Permutation carrying the (outer, inner, base) index of an
    iterated cable onto the flat index of the single (r*s)-cable."""
    size = s * r * n
    P = [[0] * size for _ in range(size)]
    for w in range(s):
        for u in range(r):
            for i in range(n):
                P[(u * s + w) * n + i][w * r * n + u * n + i] = 1
    return MatQ.from_rows(P)
