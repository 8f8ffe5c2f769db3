"""Seifert-matrix objects and their matrix-level constructions.

A matrix A with sign convention epsilon = +-1 qualifies when some
rational congruence carries the pairing A - eps*A^T to an integral even
unimodular form.  For eps = +1 that is just nonsingularity of the skew
part; for eps = -1 it is decided by comparing rational invariants
(signature, determinant class, Hasse symbols) against an explicit
E8/hyperbolic reference lattice assembled at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .exact.factor import is_square_rat, sqrt_rat
from .exact.linalg import (
    MatQ,
    diagonalize_sym,
    poly_det,
    poly_det_interp,
    poly_mat_adjugate,
    signature_counts,
)
from .exact.poly import LaurentPolyQ, RatPoly, _rat
from .numtheory import hasse_invariant, odd_prime_divisors

T_POLY = RatPoly([0, 1])


@dataclass(frozen=True)
class SeifertMatrix:
    """Square rational matrix with sign epsilon and a complexity label.

    The complexity is bookkeeping only: it records which copy of the
    matrix cobordism group the class is considered in, and is multiplied
    by cabling.  It never affects matrix arithmetic.
    """

    A: MatQ
    epsilon: int
    complexity: int = 1

    def __post_init__(self):
        if not self.A.is_square:
            raise DomainError("Seifert matrix must be square")
        if self.epsilon not in (1, -1):
            raise DomainError("epsilon must be +1 or -1")
        if self.complexity < 1:
            raise DomainError("complexity must be a positive integer")
        if self.intersection_form().det() == 0:
            raise DomainError("A - eps*A^T is singular")

    @classmethod
    def from_rows(cls, rows, epsilon, complexity=1) -> "SeifertMatrix":
        return cls(MatQ.from_rows(rows), epsilon, complexity)

    @classmethod
    def checked(cls, A: MatQ, epsilon: int, complexity: int = 1) -> "SeifertMatrix":
        """Construct and verify full validity, not just nonsingularity."""
        S = cls(A, epsilon, complexity)
        report = validate(A, epsilon)
        if not report.even_unimodular_congruent:
            raise DomainError("matrix is not a rational Seifert matrix: %r" % (report,))
        return S

    @property
    def dim(self) -> int:
        return self.A.rows

    def intersection_form(self) -> MatQ:
        return self.A - self.A.transpose() * self.epsilon

    def symmetrized(self) -> MatQ:
        return self.A + self.A.transpose()


@dataclass(frozen=True)
class ValidityReport:
    nonsingular: bool
    even_unimodular_congruent: bool
    signature_mod8: int
    det_class_ok: bool
    hasse_mismatch_primes: tuple[int, ...]
    q2_signature_mod16_ok: bool | None = None


def _e8_gram() -> MatQ:
    edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
    rows = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        rows[i][j] = rows[j][i] = -1
    return MatQ.from_rows(rows)


_H_GRAM = MatQ.from_rows([[0, 1], [1, 0]])


def _even_unimodular_reference(dim: int, signature: int) -> MatQ:
    """Gram matrix of (+-E8)^a + H^b with 8a = signature, 8|a|+2b = dim."""
    a, rem = divmod(abs(signature), 8)
    if rem or (dim - abs(signature)) % 2 or dim < abs(signature):
        raise DomainError("no even unimodular lattice with these invariants")
    b = (dim - abs(signature)) // 2
    out = MatQ.zeros(0, 0)
    e8 = _e8_gram() if signature > 0 else -_e8_gram()
    for _ in range(a):
        out = out.block_sum(e8)
    for _ in range(b):
        out = out.block_sum(_H_GRAM)
    return out


def validate(A: MatQ, epsilon: int, check_q2_condition: bool = False) -> ValidityReport:
    """Decide whether A - eps*A^T is rationally congruent to an integral
    even unimodular form.

    eps = +1: a nonsingular skew form is congruent to a sum of standard
    hyperbolic 2x2 blocks, so nonsingularity is the whole condition.

    eps = -1: the symmetric form A + A^T must match an explicit
    (+-E8)^a + H^b reference in dimension, signature (hence = 0 mod 8),
    determinant square class, and Hasse invariants at every relevant
    prime.  The reference invariants are diagonalized at runtime, never
    transcribed by hand.
    """
    if not A.is_square:
        raise DomainError("validate requires a square matrix")
    if epsilon not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    n = A.rows
    q2_ok = None
    if check_q2_condition:
        sym_sig = _signature_sym(A + A.transpose()) if n else 0
        q2_ok = sym_sig % 16 == 0
    if n == 0:
        return ValidityReport(True, True, 0, True, (), q2_ok)
    Q = A - A.transpose() * epsilon
    nonsingular = Q.det() != 0
    if epsilon == 1:
        return ValidityReport(nonsingular, nonsingular, 0, nonsingular, (), q2_ok)

    if not nonsingular:
        return ValidityReport(False, False, 0, False, (), q2_ok)
    D, _ = diagonalize_sym(Q)
    pos, neg, _ = signature_counts(D)
    sig = pos - neg
    sig_ok = sig % 8 == 0 and abs(sig) <= n
    det_ok = False
    mismatches: tuple[int, ...] = ()
    if sig_ok:
        ref = _even_unimodular_reference(n, sig)
        Dref, _ = diagonalize_sym(ref)
        dq = [D[i, i] for i in range(n)]
        dr = [Dref[i, i] for i in range(n)]
        b = (n - abs(sig)) // 2
        det_ok = is_square_rat(Q.det() * Fraction(-1) ** b)
        primes = [2] + odd_prime_divisors(*(dq + dr))
        mismatches = tuple(p for p in primes if hasse_invariant(dq, p) != hasse_invariant(dr, p))
    ok = nonsingular and sig_ok and det_ok and not mismatches
    return ValidityReport(nonsingular, ok, sig % 8, det_ok, mismatches, q2_ok)


def _signature_sym(Q: MatQ) -> int:
    D, _ = diagonalize_sym(Q)
    pos, neg, _ = signature_counts(D)
    return pos - neg


# ---------------------------------------------------------------------------
# basic invariant and the group operations


def alexander(S: SeifertMatrix) -> LaurentPolyQ:
    """det(t*A - eps*A^T), canonicalized as a Laurent polynomial.

    Evaluation-interpolation computes the determinant exactly (it is a
    polynomial of degree <= dim); the fraction-free route poly_det gives
    the same answer and the two are cross-checked in the tests.
    """
    A, eps = S.A, S.epsilon
    n = A.rows
    M = [[T_POLY * A[i, j] - eps * A[j, i] for j in range(n)] for i in range(n)]
    det = poly_det_interp(M, max_entry_degree=1)
    if det(Fraction(1)) != S.intersection_form().det() or det(Fraction(1)) == 0:
        raise DomainError("Alexander polynomial evaluation is inconsistent")
    return LaurentPolyQ(det)


def cable(S: SeifertMatrix, r: int) -> SeifertMatrix:
    """The r-fold parallel construction: r x r blocks with A on and
    above the diagonal and eps*A^T strictly below; complexity scales
    by r, and the Alexander polynomial reparametrizes by t -> t^r."""
    if r < 1:
        raise DomainError("cable index must be >= 1")
    A, eps, n = S.A, S.epsilon, S.A.rows
    At = A.transpose() * eps
    rows = []
    for bi in range(r):
        for i in range(n):
            row = []
            for bj in range(r):
                src = A if bj >= bi else At
                row.extend(src.row(i))
            rows.append(row)
    return SeifertMatrix(MatQ.from_rows(rows), eps, S.complexity * r)


def block_sum(S1: SeifertMatrix, S2: SeifertMatrix) -> SeifertMatrix:
    if S1.epsilon != S2.epsilon:
        raise DomainError("block sum needs matching epsilon")
    if S1.complexity != S2.complexity:
        raise DomainError("block sum needs matching complexity; cable first")
    return SeifertMatrix(S1.A.block_sum(S2.A), S1.epsilon, S1.complexity)


def negate(S: SeifertMatrix) -> SeifertMatrix:
    return SeifertMatrix(-S.A, S.epsilon, S.complexity)


# ---------------------------------------------------------------------------
# the linking form on the torsion module presented by tA - eps*A^T


@dataclass(frozen=True)
class BlanchfieldForm:
    """(1-t)(tA - eps*A^T)^{-1}, stored as numerators over a common
    denominator det(tA - eps*A^T)."""

    num: tuple[tuple[RatPoly, ...], ...]
    den: RatPoly
    epsilon: int

    @property
    def dim(self) -> int:
        return len(self.num)

    def entry(self, i: int, j: int) -> tuple[RatPoly, RatPoly]:
        """Entry (i, j) as a reduced fraction of polynomials."""
        n, d = self.num[i][j], self.den
        if n.is_zero():
            return RatPoly.zero(), RatPoly.one()
        g = n.gcd(d)
        return n.exact_div(g), d.exact_div(g)

    def hermitian_identity_holds(self) -> bool:
        """B(1/t)^T == eps * B(t) as rational functions."""
        d = LaurentPolyQ(self.den)
        d_bar = d.conj()
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = LaurentPolyQ(self.num[j][i]).conj() * d
                rhs = LaurentPolyQ(self.num[i][j]) * self.epsilon * d_bar
                if not (lhs - rhs).is_zero():
                    return False
        return True


def blanchfield_pairing(S: SeifertMatrix) -> BlanchfieldForm:
    A, eps, n = S.A, S.epsilon, S.A.rows
    M = [[T_POLY * A[i, j] - eps * A[j, i] for j in range(n)] for i in range(n)]
    det = poly_det_interp(M, max_entry_degree=1)
    if det.is_zero():
        raise DomainError("presentation matrix is singular")
    adj = poly_mat_adjugate(M)
    one_minus_t = RatPoly([1, -1])
    num = tuple(tuple(one_minus_t * adj[i][j] for j in range(n)) for i in range(n))
    return BlanchfieldForm(num, det, eps)


def presentation_order(M) -> LaurentPolyQ:
    """Order of the torsion module presented by a square matrix over
    Q[t]: the determinant, canonicalized up to units."""
    det = poly_det(M)
    if det.is_zero():
        raise DomainError("presentation matrix has zero determinant")
    return LaurentPolyQ(LaurentPolyQ(det).unit_normal())


def ribbon_presentation(P: RatPoly) -> list[list[RatPoly]]:
    """The 3x3 presentation matrix whose cokernel is the cyclic module
    of order P(t)^2 arising from the doubled surgery description."""
    one = RatPoly.one()
    zero = RatPoly.zero()
    return [[P, zero, one], [zero, -P, one], [one, one, -one]]


def ribbon_generator_pairing(P: RatPoly) -> tuple[RatPoly, RatPoly]:
    """Value of the induced linking pairing on the cyclic generator of
    the ribbon presentation: entry (1,1) of M(t)^{-1}, reduced.  Equals
    (P(t) - 1) / P(t)^2."""
    M = ribbon_presentation(P)
    det = poly_det(M)
    if det.is_zero():
        raise DomainError("degenerate ribbon presentation")
    minor = [row[1:] for row in M[1:]]
    cof = poly_det(minor)
    g = cof.gcd(det)
    if g.is_zero():
        return cof, det
    return cof.exact_div(g), det.exact_div(g)


# ---------------------------------------------------------------------------
# characterization and realization of Alexander polynomials


@dataclass(frozen=True)
class AlexanderConditions:
    palindromic: bool
    genus: int
    sign: int | None  # unit sign making the square conditions pass
    value_at_one: Fraction
    value_at_eps: Fraction
    integral_mode: bool
    passed: bool


def alexander_conditions(delta: LaurentPolyQ, epsilon: int, integral: bool = False) -> AlexanderConditions:
    """Check the realizability conditions for a candidate polynomial:
    palindromic of even degree 2g, delta(eps) a square, and eps^g *
    delta(1) a nonzero square; in integral mode, integer coefficients
    with delta(1) = eps^g and delta(eps) square.

    The square conditions are unit-sensitive, so both signs of the
    canonical representative are tried; the passing sign is reported.
    """
    if isinstance(delta, RatPoly):
        delta = LaurentPolyQ(delta)
    if delta.is_zero():
        raise DomainError("zero polynomial")
    if epsilon not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    core = delta.core
    d = core.degree
    one = core(Fraction(1))
    at_eps = core(Fraction(epsilon))
    if d % 2:
        return AlexanderConditions(False, 0, None, one, at_eps, integral, False)
    palindromic = core.is_palindromic()
    g = d // 2
    sign = None
    if palindromic:
        for s in (1, -1):
            v1 = s * one
            veps = s * at_eps
            if integral:
                try:
                    core.int_coeffs()
                except DomainError:
                    continue
                if v1 == Fraction(epsilon) ** g and is_square_rat(veps):
                    sign = s
                    break
            else:
                if v1 != 0 and is_square_rat(Fraction(epsilon) ** g * v1) and is_square_rat(veps):
                    sign = s
                    break
    return AlexanderConditions(palindromic, g, sign, one, at_eps, integral, palindromic and sign is not None)


def realize(delta: LaurentPolyQ, epsilon: int) -> SeifertMatrix:
    """Build a 2g x 2g Seifert matrix with the given Alexander
    polynomial (up to units).

    Recursive construction: the genus-one bases are [[a, u], [0, 1]]
    (eps = +1, u^2 = delta(1)) and [[(u^2-v^2)/4, u], [0, 1]] (eps = -1,
    u^2 = delta(-1), v^2 = -delta(1)); each inductive step splits off
    a = -(-eps)^(g-1) delta(0) and recurses on the cofactor polynomial,
    asserting at every level that the (1,1)-cofactor of tA - eps*A^T is
    (-eps)^(g-1) (t-1)^(2g-2) (t-eps).  Square roots are taken
    nonnegative, so the output is deterministic.
    """
    if isinstance(delta, RatPoly):
        delta = LaurentPolyQ(delta)
    cond = alexander_conditions(delta, epsilon)
    if not cond.passed:
        raise DomainError("polynomial fails the realizability conditions: %r" % (cond,))
    target = delta.core * cond.sign
    A = _realize_poly(target, epsilon, cond.genus)
    S = SeifertMatrix(A, epsilon) if cond.genus else SeifertMatrix(MatQ.zeros(0, 0), epsilon)
    if not alexander(S).eq_up_to_units(delta):
        raise DomainError("realization post-check failed")
    return S


def _realize_poly(D: RatPoly, eps: int, g: int) -> MatQ:
    # formal degree 2g; trailing coefficients may vanish
    if D.degree > 2 * g:
        raise DomainError("degree exceeds the formal bound")
    if any(D[k] != D[2 * g - k] for k in range(2 * g + 1)):
        raise DomainError("cofactor polynomial is not palindromic of the right degree")
    if g == 0:
        if D.is_zero():
            raise DomainError("zero polynomial in the recursion")
        return MatQ.zeros(0, 0)
    if g == 1:
        a, b = D[0], D[1]
        if eps == 1:
            u = sqrt_rat(2 * a + b)
            A = MatQ.from_rows([[a, u], [0, 1]])
        else:
            u = sqrt_rat(2 * a - b)
            v = sqrt_rat(-(2 * a + b))
            if v == 0:
                raise DomainError("delta(1) must be nonzero")
            A = MatQ.from_rows([[(u * u - v * v) / 4, u], [0, 1]])
    else:
        a = -Fraction(-eps) ** (g - 1) * D(Fraction(0))
        special = RatPoly([-1, 1]) ** (2 * g - 2) * RatPoly([-eps, 1]) ** 2
        numer = D + special * (a * Fraction(-eps) ** (g - 1))
        if numer[0] != 0:
            raise DomainError("cofactor split failed; malformed polynomial")
        delta0 = RatPoly(numer.coeffs[1:]) * eps
        A0 = _realize_poly(delta0, eps, g - 1)
        n = 2 * g
        rows = [[Fraction(0)] * n for _ in range(n)]
        rows[0][1] = Fraction(1)
        rows[0][2] = a
        rows[1][2] = Fraction(1)
        rows[2][0] = eps * a
        rows[2][1] = Fraction(eps)
        for i in range(n - 2):
            for j in range(n - 2):
                rows[2 + i][2 + j] = A0[i, j]
        A = MatQ.from_rows(rows)
    _assert_cofactor_shape(A, eps, g)
    return A


def _assert_cofactor_shape(A: MatQ, eps: int, g: int):
    n = A.rows
    M = [[T_POLY * A[i, j] - eps * A[j, i] for j in range(1, n)] for i in range(1, n)]
    cof = poly_det(M)
    want = RatPoly([-1, 1]) ** (2 * g - 2) * RatPoly([-eps, 1]) * Fraction(-eps) ** (g - 1)
    if cof != want:
        raise DomainError("auxiliary cofactor condition failed at genus %d" % g)


# ---------------------------------------------------------------------------
# metabolizers and surgery bookkeeping


def verify_metabolizer(S: SeifertMatrix, T: MatQ) -> bool:
    """Whether the congruence by T exhibits a half-dimensional zero
    block: (T A T^t) has vanishing top-left g x g corner."""
    n = S.dim
    if n % 2:
        raise DomainError("metabolic matrices have even dimension")
    if not T.is_square or T.rows != n:
        raise DomainError("change of basis has the wrong size")
    if T.det() == 0:
        raise DomainError("change of basis must be invertible")
    g = n // 2
    M = T * S.A * T.transpose()
    return all(M[i, j] == 0 for i in range(g) for j in range(g))


def integral_part(Q: MatQ, epsilon: int) -> MatQ:
    """An integral B with B - eps*B^T = Q, for integral Q with even
    diagonal and the symmetry Q^T = -eps*Q: diagonal q_ii/2, entries
    above the diagonal copied from Q, entries below set to zero."""
    if not Q.is_square:
        raise DomainError("Q must be square")
    if epsilon not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    n = Q.rows
    if any(e.denominator != 1 for e in Q.entries):
        raise DomainError("Q must be integral")
    if any(Q[i, i].numerator % 2 for i in range(n)):
        raise DomainError("Q must have even diagonal")
    if Q.transpose() != -epsilon * Q:
        raise DomainError("Q does not have the required symmetry")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Q[i, i] / 2
        for j in range(i + 1, n):
            rows[i][j] = Q[i, j]
    B = MatQ.from_rows(rows)
    assert B - B.transpose() * epsilon == Q
    return B


def linking_after_surgery(lk0, x: MatQ, y: MatQ, L: MatQ) -> Fraction:
    """Linking number in the surgered sphere: lk0 - x^T L^{-1} y."""
    lk0 = _rat(lk0)
    if not L.is_square:
        raise DomainError("linking matrix must be square")
    if L.rows == 0:
        return lk0
    if L.det() == 0:
        raise DomainError("singular linking matrix: surgery does not give a rational sphere")
    if x.cols != 1 or y.cols != 1 or x.rows != L.rows or y.rows != L.rows:
        raise DomainError("linking vectors have the wrong shape")
    corr = x.transpose() * L.inverse() * y
    return lk0 - corr[0, 0]


@dataclass(frozen=True)
class SurgeryData:
    """Algebraic bookkeeping of the surgery description realizing a
    rational Seifert matrix from an integral one.

    B is the integral part, corrections hold the fractional linking
    defects a_ij - b_ij = m_ij / n_ij (i <= j), and L is the linking
    matrix of the correction sphere pairs: one 2x2 block per recorded
    correction, off-diagonal n_ij for i < j and 2 n_ii on the diagonal
    pairs, signed so that the reconstruction below returns A exactly.
    """

    B: MatQ
    corrections: tuple[tuple[int, int, int, int], ...]
    linking_matrix: MatQ
    epsilon: int

    def linking_vector(self, a: int) -> MatQ:
        """Linking numbers of the basis sphere x_a with the correction
        spheres (c+_ij, c-_ij): delta_ia and delta_ja * m_ij."""
        vals = []
        for (i, j, m, _n) in self.corrections:
            vals.append(1 if i == a else 0)
            vals.append(m if j == a else 0)
        return MatQ.column(vals)

    def reconstructed_matrix(self) -> MatQ:
        n = self.B.rows
        vecs = [self.linking_vector(a) for a in range(n)]
        rows = [
            [linking_after_surgery(self.B[i, j], vecs[i], vecs[j], self.linking_matrix) for j in range(n)]
            for i in range(n)
        ]
        return MatQ.from_rows(rows)


def surgery_data(S: SeifertMatrix) -> SurgeryData:
    """Split A into an integral Seifert part B plus sphere-pair
    corrections, and assemble the block linking matrix; the round trip
    through linking_after_surgery reproduces every entry of A."""
    A, eps = S.A, S.epsilon
    Q = S.intersection_form()
    if any(e.denominator != 1 for e in Q.entries):
        raise DomainError("A - eps*A^T must already be integral (apply a congruence first)")
    if any(Q[i, i].numerator % 2 for i in range(Q.rows)):
        raise DomainError("A - eps*A^T must have even diagonal")
    if abs(Q.det()) != 1:
        raise DomainError("A - eps*A^T must be unimodular")
    B0 = integral_part(Q, eps)
    C = A - B0
    n = A.rows
    rows = B0.to_rows()
    for i in range(n):
        for j in range(n):
            if C[i, j].denominator == 1:
                rows[i][j] += C[i, j]
    B = MatQ.from_rows(rows)
    C = A - B
    corrections = []
    blocks = []
    s = -eps
    for i in range(n):
        for j in range(i, n):
            c = C[i, j]
            if c == 0:
                continue
            m, d = c.numerator, c.denominator
            corrections.append((i, j, m, d))
            nn = d if i < j else 2 * d
            blocks.append(MatQ.from_rows([[0, s * nn], [s * eps * nn, 0]]))
    L = MatQ.zeros(0, 0)
    for blk in blocks:
        L = L.block_sum(blk)
    sd = SurgeryData(B, tuple(corrections), L, eps)
    if sd.reconstructed_matrix() != A:
        raise DomainError("surgery reconstruction failed")
    return sd


# ---------------------------------------------------------------------------
# JSON wire format (shared with the CLI)


def _rat_to_json(x: Fraction):
    return int(x) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def matrix_to_json(S: SeifertMatrix) -> dict:
    return {
        "schema": "concordia/1",
        "epsilon": S.epsilon,
        "complexity": S.complexity,
        "entries": [[_rat_to_json(e) for e in S.A.row(i)] for i in range(S.A.rows)],
    }


def matrix_from_json(doc: dict) -> SeifertMatrix:
    try:
        eps = int(doc["epsilon"])
        entries = doc["entries"]
        complexity = int(doc.get("complexity", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError("malformed matrix document: %s" % exc)
    rows = [[_rat(e) for e in row] for row in entries]
    if rows and any(len(r) != len(rows) for r in rows):
        raise DomainError("matrix entries must form a square array")
    return SeifertMatrix(MatQ.from_rows(rows) if rows else MatQ.zeros(0, 0), eps, complexity)
