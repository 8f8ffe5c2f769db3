"""Seifert-matrix constructions: validity, Alexander polynomials,
cabling, the linking form, realization, and surgery bookkeeping."""

import random
from fractions import Fraction

import pytest

from concordia import (
    DomainError,
    LaurentPolyQ,
    MatQ,
    RatPoly,
    SeifertMatrix,
    alexander,
    alexander_conditions,
    blanchfield_pairing,
    block_sum,
    cable,
    integral_part,
    linking_after_surgery,
    matrix_from_json,
    matrix_to_json,
    negate,
    presentation_order,
    realize,
    ribbon_generator_pairing,
    ribbon_presentation,
    surgery_data,
    validate,
    verify_metabolizer,
)
from concordia.exact import poly_det
from conftest import random_plus_matrix, random_realizable_poly, random_valid_matrix, shuffle_perm

FIG8 = SeifertMatrix.from_rows([[1, 1], [0, -1]], 1)
TREFOIL = SeifertMatrix.from_rows([[-1, 1], [0, -1]], 1)
ORDER2_A5 = SeifertMatrix.from_rows([[-5, 1], [0, 1]], 1)
EPS_MINUS_4X4_A5 = SeifertMatrix.from_rows(
    [[0, 1, 5, 0], [0, 0, 1, 0], [-5, -1, -1, 0], [0, 0, 0, 1]], -1
)


class TestValidate:
    def test_fig8_valid(self):
        rep = validate(FIG8.A, 1)
        assert rep.nonsingular and rep.even_unimodular_congruent

    def test_nonsquare_det_class_invalid(self):
        rep = validate(MatQ.from_rows([[1, 3], [0, 1]]), -1)
        assert rep.nonsingular
        assert not rep.det_class_ok
        assert not rep.even_unimodular_congruent

    def test_empty_matrix_vacuous(self):
        rep = validate(MatQ.zeros(0, 0), -1)
        assert rep.even_unimodular_congruent

    def test_paper_4x4_valid(self):
        rep = validate(EPS_MINUS_4X4_A5.A, -1, check_q2_condition=True)
        assert rep.even_unimodular_congruent
        assert rep.q2_signature_mod16_ok

    def test_singular_skew_invalid(self):
        rep = validate(MatQ.from_rows([[1, 0], [0, 1]]), 1)
        assert not rep.nonsingular and not rep.even_unimodular_congruent

    def test_checked_constructor_rejects(self):
        with pytest.raises(DomainError):
            SeifertMatrix.checked(MatQ.from_rows([[1, 3], [0, 1]]), -1)

    def test_random_minus_matrices_valid(self, rng):
        for _ in range(10):
            S = random_valid_matrix(rng, -1, rng.choice([2, 4]))
            assert validate(S.A, -1).even_unimodular_congruent


class TestAlexander:
    def test_fig8(self):
        assert alexander(FIG8).core == RatPoly([-1, 3, -1])
        assert alexander(FIG8).eq_up_to_units(LaurentPolyQ(RatPoly([1, -3, 1])))

    def test_order2_family(self):
        assert alexander(ORDER2_A5).core == RatPoly([-5, 11, -5])

    def test_empty(self):
        S = SeifertMatrix(MatQ.zeros(0, 0), 1)
        assert alexander(S).core == RatPoly.one()

    def test_value_at_one_matches_intersection_det(self, rng):
        for _ in range(20):
            S = random_plus_matrix(rng, rng.choice([2, 4]))
            d = alexander(S)
            assert d(Fraction(1)) == S.intersection_form().det()

    def test_reciprocity(self, rng):
        for eps in (1, -1):
            for _ in range(10):
                S = random_valid_matrix(rng, eps, rng.choice([2, 4]))
                d = alexander(S)
                assert d.eq_up_to_units(d.conj())

    def test_agrees_with_bareiss(self, rng):
        T = RatPoly([0, 1])
        for _ in range(10):
            S = random_valid_matrix(rng, rng.choice([1, -1]), 2)
            n = S.dim
            M = [
                [T * S.A[i, j] - RatPoly.constant(S.epsilon * S.A[j, i]) for j in range(n)]
                for i in range(n)
            ]
            assert alexander(S).core.shift_mul(alexander(S).shift) == poly_det(M)


class TestCable:
    def test_block_layout(self):
        c2 = cable(FIG8, 2)
        A = FIG8.A
        At = A.transpose()
        expect = MatQ.from_rows(
            [
                list(A.row(0)) + list(A.row(0)),
                list(A.row(1)) + list(A.row(1)),
                list(At.row(0)) + list(A.row(0)),
                list(At.row(1)) + list(A.row(1)),
            ]
        )
        assert c2.A == expect
        assert c2.complexity == 2

    def test_identity(self):
        assert cable(FIG8, 1).A == FIG8.A

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            cable(FIG8, 0)

    def test_reparametrization(self, rng):
        for eps in (1, -1):
            for _ in range(6):
                S = random_valid_matrix(rng, eps, 2)
                d = alexander(S)
                for r in range(1, 5):
                    assert alexander(cable(S, r)).eq_up_to_units(d.compose_power(r))

    def test_composition_up_to_shuffle(self, rng):
        for eps in (1, -1):
            S = random_valid_matrix(rng, eps, 2)
            comp = cable(cable(S, 2), 3)
            direct = cable(S, 6)
            P = shuffle_perm(3, 2, 2)
            assert P * comp.A * P.transpose() == direct.A
            assert comp.complexity == direct.complexity == 6 * S.complexity
            assert alexander(comp).core == alexander(direct).core


class TestBlockSumNegate:
    def test_multiplicativity(self, rng):
        for _ in range(8):
            S1 = random_plus_matrix(rng, 2)
            S2 = random_plus_matrix(rng, 2)
            d = alexander(block_sum(S1, S2))
            assert d.eq_up_to_units(LaurentPolyQ(alexander(S1).core * alexander(S2).core))

    def test_self_plus_negation(self):
        S = block_sum(FIG8, negate(FIG8))
        d = alexander(S)
        want = alexander(FIG8).core * alexander(negate(FIG8)).core
        assert d.eq_up_to_units(LaurentPolyQ(want))

    def test_negate_involution(self):
        assert negate(negate(FIG8)).A == FIG8.A

    def test_epsilon_mismatch(self, rng):
        S1 = random_valid_matrix(rng, 1, 2)
        S2 = random_valid_matrix(rng, -1, 2)
        with pytest.raises(DomainError):
            block_sum(S1, S2)


class TestBlanchfield:
    def test_2x2_closed_form(self):
        # independent oracle: B = (1-t) adj(M)/det(M) for 2x2 by hand
        S = TREFOIL
        B = blanchfield_pairing(S)
        T = RatPoly([0, 1])
        M = [[T * S.A[i, j] - RatPoly.constant(S.A[j, i]) for j in range(2)] for i in range(2)]
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        adj = [[M[1][1], -M[0][1]], [-M[1][0], M[0][0]]]
        one_minus_t = RatPoly([1, -1])
        assert B.den == det
        for i in range(2):
            for j in range(2):
                assert B.num[i][j] == one_minus_t * adj[i][j]

    def test_hermitian_identity_50_random(self, rng):
        for _ in range(50):
            eps = rng.choice([1, -1])
            S = random_valid_matrix(rng, eps, rng.choice([2, 4]))
            assert blanchfield_pairing(S).hermitian_identity_holds()

    def test_ribbon_generator_pairing(self, rng):
        for _ in range(10):
            deg = rng.randrange(0, 4)
            P = RatPoly([rng.randrange(-4, 5) for _ in range(deg)] + [rng.choice([1, 2, -3])])
            num, den = ribbon_generator_pairing(P)
            # equals (P - 1)/P^2 as a rational function
            assert num * (P * P) == den * (P - RatPoly.one())


class TestPresentationOrder:
    def test_ribbon_matrix(self):
        P = RatPoly([1, -3, 1])
        order = presentation_order(ribbon_presentation(P))
        assert order.eq_up_to_units(LaurentPolyQ(P * P))

    def test_identity(self):
        assert presentation_order([[RatPoly.one()]]).core == RatPoly.one()

    def test_fig8_presentation(self):
        T = RatPoly([0, 1])
        M = [
            [T * FIG8.A[i, j] - RatPoly.constant(FIG8.A[j, i]) for j in range(2)]
            for i in range(2)
        ]
        assert presentation_order(M).eq_up_to_units(alexander(FIG8))

    def test_singular_rejected(self):
        with pytest.raises(DomainError):
            presentation_order([[RatPoly.zero()]])


class TestAlexanderConditions:
    def test_fig8_poly(self):
        rep = alexander_conditions(alexander(FIG8), 1)
        assert rep.passed and rep.genus == 1

    def test_order2_integral(self):
        rep = alexander_conditions(LaurentPolyQ(RatPoly([-5, 11, -5])), 1, integral=True)
        assert rep.passed
        assert rep.sign * rep.value_at_one == 1

    def test_delta_one_zero_fails(self):
        rep = alexander_conditions(LaurentPolyQ(RatPoly([1, -2, 1])), 1)
        assert not rep.passed

    def test_odd_degree_fails(self):
        rep = alexander_conditions(LaurentPolyQ(RatPoly([1, 1])), 1)
        assert not rep.passed and not rep.palindromic


class TestRealize:
    def test_order2_base(self):
        S = realize(LaurentPolyQ(RatPoly([-5, 11, -5])), 1)
        assert S.A == MatQ.from_rows([[-5, 1], [0, 1]])

    def test_eps_minus_4x4(self):
        delta = LaurentPolyQ(RatPoly([1, 2, 1]) * RatPoly([-5, 11, -5]))
        S = realize(delta, -1)
        assert S.A == EPS_MINUS_4X4_A5.A
        assert alexander(S).eq_up_to_units(delta)

    def test_round_trip_100_random(self, rng):
        done = 0
        while done < 100:
            eps = rng.choice([1, -1])
            genus = rng.choice([1, 1, 2])
            delta = random_realizable_poly(rng, eps, genus)
            if not alexander_conditions(delta, eps).passed:
                continue
            try:
                S = realize(delta, eps)
            except DomainError:
                continue  # degenerate cofactor split; allowed to refuse
            assert alexander(S).eq_up_to_units(delta)
            done += 1

    def test_round_trip_from_matrices(self, rng):
        for _ in range(20):
            S = random_valid_matrix(rng, rng.choice([1, -1]), 2)
            d = alexander(S)
            if not alexander_conditions(d, S.epsilon).passed:
                continue
            S2 = realize(d, S.epsilon)
            assert alexander(S2).eq_up_to_units(d)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            realize(LaurentPolyQ(RatPoly([1, 1, 2])), 1)


class TestMetabolizer:
    def test_trivially_metabolic(self):
        S = SeifertMatrix.from_rows([[0, 1], [0, 1]], 1)
        assert verify_metabolizer(S, MatQ.identity(2))

    def test_fig8_identity_not(self):
        assert not verify_metabolizer(FIG8, MatQ.identity(2))

    def test_diagonal_metabolizer_of_s_plus_minus_s(self):
        S = block_sum(FIG8, negate(FIG8))
        T = MatQ.from_rows([[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
        assert verify_metabolizer(S, T)

    def test_odd_dimension_rejected(self):
        S = SeifertMatrix.from_rows([[1]], -1)
        with pytest.raises(DomainError):
            verify_metabolizer(S, MatQ.identity(1))

    def test_singular_T_rejected(self):
        with pytest.raises(DomainError):
            verify_metabolizer(FIG8, MatQ.zeros(2, 2))


class TestIntegralPart:
    def test_hyperbolic(self):
        Q = MatQ.from_rows([[0, 1], [-1, 0]])
        assert integral_part(Q, 1) == MatQ.from_rows([[0, 1], [0, 0]])

    def test_zero(self):
        assert integral_part(MatQ.zeros(3, 3), 1) == MatQ.zeros(3, 3)

    def test_random_even_forms(self, rng):
        for eps in (1, -1):
            for _ in range(15):
                n = rng.choice([2, 3, 4])
                raw = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(n)]
                rows = [[0] * n for _ in range(n)]
                for i in range(n):
                    rows[i][i] = 2 * raw[i][i] if eps == -1 else 0
                    for j in range(i + 1, n):
                        rows[i][j] = raw[i][j]
                        rows[j][i] = -eps * raw[i][j]
                Q = MatQ.from_rows(rows)
                B = integral_part(Q, eps)
                assert B - B.transpose() * eps == Q

    def test_odd_diagonal_rejected(self):
        with pytest.raises(DomainError):
            integral_part(MatQ.from_rows([[1, 0], [0, 1]]), -1)


class TestLinkingAfterSurgery:
    def test_paper_block(self, rng):
        for _ in range(50):
            b = Fraction(rng.randrange(-8, 9), rng.randrange(1, 5))
            m = rng.randrange(-9, 10)
            n = rng.randrange(1, 9)
            L = MatQ.from_rows([[0, -n], [-n, 0]])
            x = MatQ.column([1, 0])
            y = MatQ.column([0, m])
            assert linking_after_surgery(b, x, y, L) == b + Fraction(m, n)
            # diagonal variant with linking 2n
            L2 = MatQ.from_rows([[0, -2 * n], [-2 * n, 0]])
            u = MatQ.column([1, m])
            assert linking_after_surgery(b, u, u, L2) == b + Fraction(m, n)

    def test_zero_vector(self):
        L = MatQ.from_rows([[0, -3], [-3, 0]])
        assert linking_after_surgery(Fraction(7), MatQ.column([0, 0]), MatQ.column([1, 2]), L) == 7

    def test_against_adjugate_inverse_oracle(self, rng):
        for _ in range(20):
            while True:
                L = MatQ(4, 4, [Fraction(rng.randrange(-3, 4)) for _ in range(16)])
                if L.det() != 0:
                    break
            x = MatQ.column([Fraction(rng.randrange(-3, 4)) for _ in range(4)])
            y = MatQ.column([Fraction(rng.randrange(-3, 4)) for _ in range(4)])
            lk0 = Fraction(rng.randrange(-5, 6))
            # adjugate-based inverse as an independent oracle
            det = L.det()
            n = 4
            adj = [[None] * n for _ in range(n)]
            for i in range(n):
                for j in range(n):
                    minor = L.submatrix([r for r in range(n) if r != i], [c for c in range(n) if c != j])
                    adj[j][i] = minor.det() * (-1) ** (i + j)
            Linv = MatQ.from_rows([[e / det for e in row] for row in adj])
            expect = lk0 - (x.transpose() * Linv * y)[0, 0]
            assert linking_after_surgery(lk0, x, y, L) == expect

    def test_bilinear(self, rng):
        L = MatQ.from_rows([[0, -2], [-2, 0]])
        x1 = MatQ.column([1, 2])
        x2 = MatQ.column([-1, 3])
        y = MatQ.column([2, 1])
        f = lambda x, yy: linking_after_surgery(0, x, yy, L)
        assert f(x1 + x2, y) == f(x1, y) + f(x2, y)
        assert f(x1, x2 + y) == f(x1, x2) + f(x1, y)

    def test_singular_L_rejected(self):
        with pytest.raises(DomainError):
            linking_after_surgery(0, MatQ.column([1]), MatQ.column([1]), MatQ.zeros(1, 1))


class TestSurgeryData:
    def test_order4_example(self):
        S = SeifertMatrix.from_rows([[Fraction(-5, 3), 1], [0, 1]], 1)
        sd = surgery_data(S)
        # one pair of correction spheres: multiplicity a = 5, pair linking 2p = 6
        assert sd.corrections == ((0, 0, -5, 3),)
        assert sd.linking_matrix == MatQ.from_rows([[0, -6], [-6, 0]])
        assert sd.B == MatQ.from_rows([[0, 1], [0, 1]])
        assert sd.reconstructed_matrix() == S.A

    def test_integral_matrix_trivial(self):
        sd = surgery_data(FIG8)
        assert sd.corrections == ()
        assert sd.linking_matrix.rows == 0
        assert sd.reconstructed_matrix() == FIG8.A

    def test_round_trip_random(self, rng):
        for eps in (1, -1):
            for _ in range(15):
                n = 4
                # base with integral even unimodular intersection form
                if eps == 1:
                    Q = MatQ.from_rows(
                        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
                    )
                else:
                    Q = MatQ.from_rows(
                        [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
                    )
                B = integral_part(Q, eps)
                C = [[Fraction(0)] * n for _ in range(n)]
                for i in range(n):
                    for j in range(i, n):
                        c = Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
                        if i == j:
                            C[i][i] = c if eps == 1 else Fraction(0)
                        else:
                            C[i][j] = c
                            C[j][i] = eps * c
                A = B + MatQ.from_rows(C)
                if (A - A.transpose() * eps).det() == 0:
                    continue
                S = SeifertMatrix(A, eps)
                sd = surgery_data(S)
                assert sd.reconstructed_matrix() == A
                assert sd.B - sd.B.transpose() * eps == S.intersection_form()

    def test_precondition(self):
        S = SeifertMatrix.from_rows([[Fraction(1, 2), 1], [0, 1]], -1)
        with pytest.raises(DomainError):
            surgery_data(S)  # A + A^T not integral


class TestJson:
    def test_round_trip(self):
        S = SeifertMatrix.from_rows([[Fraction(-5, 3), 1], [0, 1]], 1, complexity=3)
        doc = matrix_to_json(S)
        assert doc["entries"][0][0] == "-5/3"
        back = matrix_from_json(doc)
        assert back.A == S.A and back.epsilon == 1 and back.complexity == 3

    def test_malformed(self):
        with pytest.raises(DomainError):
            matrix_from_json({"entries": [[1]]})
