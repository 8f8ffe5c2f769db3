"""Exact substrate: polynomials, factorization, diagonalization, roots."""

import random
from fractions import Fraction

import pytest

from concordia import (
    DomainError,
    LaurentPolyQ,
    MatQ,
    RatPoly,
    diagonalize_sym,
    factor_poly,
    is_square_rat,
    isolate_real_roots,
    poly_det,
)
from concordia.exact import (
    count_roots,
    poly_det_interp,
    refine_interval,
    signature_counts,
    sturm_chain,
)

T = RatPoly([0, 1])


def cofactor_det(M):
    """Independent determinant oracle: recursive Laplace expansion."""
    n = len(M)
    if n == 0:
        return RatPoly.one()
    if n == 1:
        return M[0][0]
    out = RatPoly.zero()
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * cofactor_det(minor)
        out = out + (term if j % 2 == 0 else -term)
    return out


class TestPolyDet:
    def test_fig8_presentation(self):
        A = [[1, 1], [0, -1]]
        M = [[T * A[i][j] - RatPoly.constant(A[j][i]) for j in range(2)] for i in range(2)]
        assert poly_det(M) == RatPoly([-1, 3, -1])

    def test_identity_3x3(self):
        M = [[RatPoly.one() if i == j else RatPoly.zero() for j in range(3)] for i in range(3)]
        assert poly_det(M) == RatPoly.one()

    def test_0x0(self):
        assert poly_det([]) == RatPoly.one()

    def test_non_square_rejected(self):
        with pytest.raises(DomainError):
            poly_det([[RatPoly.one(), RatPoly.one()]])

    def test_against_cofactor_oracle(self):
        rng = random.Random(21)
        for _ in range(20):
            M = [
                [RatPoly([rng.randrange(-3, 4), rng.randrange(-3, 4)]) for _ in range(3)]
                for _ in range(3)
            ]
            assert poly_det(M) == cofactor_det(M)
            assert poly_det_interp(M) == cofactor_det(M)

    def test_multiplicative(self):
        rng = random.Random(5)
        for _ in range(12):
            def rmat():
                return [
                    [RatPoly([rng.randrange(-2, 3), rng.randrange(-2, 3)]) for _ in range(3)]
                    for _ in range(3)
                ]

            M, N = rmat(), rmat()
            MN = [
                [sum((M[i][k] * N[k][j] for k in range(3)), RatPoly.zero()) for j in range(3)]
                for i in range(3)
            ]
            assert poly_det(MN) == poly_det(M) * poly_det(N)


class TestFactorPoly:
    def test_fig8_doubled(self):
        f = RatPoly([-1, 0, 3, 0, -1])
        fac = factor_poly(f)
        assert fac.unit == -1
        assert [(g, m) for g, m in fac.factors] == [
            (RatPoly([-1, -1, 1]), 1),
            (RatPoly([-1, 1, 1]), 1),
        ]
        assert fac.product() == f

    def test_repeated_linear(self):
        fac = factor_poly(RatPoly([1, -2, 1]))
        assert fac.factors == ((RatPoly([-1, 1]), 2),)

    def test_kernel_family_a5(self):
        f = RatPoly([-25, 0, 51, 0, -25])
        fac = factor_poly(f)
        assert fac.unit == -1
        assert set(fac.factors) == {(RatPoly([-5, 1, 5]), 1), (RatPoly([-5, -1, 5]), 1)}
        assert fac.product() == f

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            factor_poly(RatPoly.zero())

    def test_reconstruction_200_random(self):
        rng = random.Random(1234)
        for _ in range(200):
            deg = rng.randrange(0, 9)
            coeffs = [Fraction(rng.randrange(-9, 10)) for _ in range(deg)] + [
                Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
            ]
            f = RatPoly(coeffs)
            fac = factor_poly(f)
            assert fac.product() == f

    def test_factors_are_irreducible_vs_sympy(self):
        sympy = pytest.importorskip("sympy")
        t = sympy.symbols("t")
        rng = random.Random(99)
        for _ in range(40):
            deg = rng.randrange(1, 9)
            coeffs = [rng.randrange(-9, 10) for _ in range(deg)] + [rng.choice([1, 2, -1, 5])]
            f = RatPoly(coeffs)
            ours = factor_poly(f)
            theirs = sympy.factor_list(sympy.Poly(list(reversed(coeffs)), t))
            n_theirs = sum(m for q, m in theirs[1] if sympy.Poly(q, t).degree() > 0)
            assert sum(m for _, m in ours.factors) == n_theirs


class TestIsSquareRat:
    def test_examples(self):
        assert is_square_rat(Fraction(4, 9))
        assert not is_square_rat(-5)
        assert is_square_rat(25)
        assert is_square_rat(0)
        assert not is_square_rat(Fraction(2, 3))


class TestDiagonalizeSym:
    def test_hand_example(self):
        Q = MatQ.from_rows([[2, 3], [3, 2]])
        D, Tm = diagonalize_sym(Q)
        assert Tm * Q * Tm.transpose() == D
        pos, neg, zero = signature_counts(D)
        assert (pos, neg, zero) == (1, 1, 0)
        # determinant class: product of the diagonal is -5 modulo squares
        prod = D[0, 0] * D[1, 1]
        assert is_square_rat(prod * Fraction(-1, 5))

    def test_identity(self):
        D, Tm = diagonalize_sym(MatQ.identity(3))
        assert D == MatQ.identity(3) and Tm == MatQ.identity(3)

    def test_hyperbolic(self):
        Q = MatQ.from_rows([[0, 1], [1, 0]])
        D, Tm = diagonalize_sym(Q)
        assert Tm * Q * Tm.transpose() == D
        assert signature_counts(D) == (1, 1, 0)

    def test_non_symmetric_rejected(self):
        with pytest.raises(DomainError):
            diagonalize_sym(MatQ.from_rows([[0, 1], [0, 0]]))

    def test_random_congruence_invariance(self, rng):
        from conftest import random_congruence

        for _ in range(15):
            n = rng.randrange(1, 5)
            entries = [[Fraction(rng.randrange(-3, 4)) for _ in range(n)] for _ in range(n)]
            Q = MatQ.from_rows([[entries[i][j] + entries[j][i] for j in range(n)] for i in range(n)])
            D, Tm = diagonalize_sym(Q)
            assert Tm * Q * Tm.transpose() == D
            P = random_congruence(rng, n)
            D2, _ = diagonalize_sym(P * Q * P.transpose())
            assert signature_counts(D)[:2] == signature_counts(D2)[:2]


class TestIsolateRealRoots:
    def test_linear_inside(self):
        ivs = isolate_real_roots(RatPoly([-1, 1]), -2, 2)
        assert len(ivs) == 1
        lo, hi = ivs[0].lo, ivs[0].hi
        assert lo <= 1 <= hi

    def test_linear_outside(self):
        assert isolate_real_roots(RatPoly([-3, 1]), -2, 2) == []

    def test_constant(self):
        assert isolate_real_roots(RatPoly([7]), -2, 2) == []

    def test_count_matches_sturm_variations(self):
        rng = random.Random(77)
        for _ in range(30):
            deg = rng.randrange(1, 7)
            f = RatPoly([rng.randrange(-5, 6) for _ in range(deg)] + [rng.choice([1, -1, 2])])
            sf = f.squarefree_part()
            ivs = isolate_real_roots(f, -10, 10)
            chain = sturm_chain(sf)
            expected = count_roots(sf, Fraction(-10), Fraction(10))
            exact_at_lo = 1 if sf(Fraction(-10)) == 0 else 0
            assert len(ivs) == expected + exact_at_lo

    def test_squarefree_taken_internally(self):
        f = RatPoly([-1, 1]) * RatPoly([-1, 1]) * RatPoly([-2, 1])
        ivs = isolate_real_roots(f, 0, 3)
        assert len(ivs) == 2

    def test_refinable(self):
        f = RatPoly([-2, 0, 1])  # sqrt(2)
        (iv_,) = isolate_real_roots(f, 0, 2)
        small = refine_interval(f, iv_, Fraction(1, 10**12))
        assert small.width <= Fraction(1, 10**12)
        assert small.lo <= Fraction(1414213562373095, 10**15) + Fraction(1, 10**9)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            isolate_real_roots(RatPoly([1, 1]), 2, -2)


class TestLaurent:
    def test_canonical_shift(self):
        p = LaurentPolyQ(RatPoly([0, 0, 1, 2]))
        assert p.shift == 2 and p.core == RatPoly([1, 2])

    def test_units(self):
        a = LaurentPolyQ(RatPoly([-1, 3, -1]))
        b = LaurentPolyQ(RatPoly([1, -3, 1]), shift=4)
        assert a.eq_up_to_units(b)
        assert not a.eq_up_to_units(LaurentPolyQ(RatPoly([1, -2, 1])))

    def test_conj(self):
        p = LaurentPolyQ(RatPoly([1, -3, 1]))
        q = p.conj()
        assert q.core == RatPoly([1, -3, 1]) and q.shift == -2

    def test_eval_laurent(self):
        p = LaurentPolyQ(RatPoly([1, 1]), shift=-1)  # (1+t)/t
        assert p(Fraction(2)) == Fraction(3, 2)
