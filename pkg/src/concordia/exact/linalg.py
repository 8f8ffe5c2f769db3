"""Exact rational matrices, symmetric diagonalization, polynomial dets.

The polynomial determinant uses fraction-free (Bareiss) elimination over
Q[t]; every intermediate entry is a minor of the original matrix, which
keeps degrees and coefficient sizes under control.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import DomainError
from .poly import RatPoly, _as_poly, _rat

Rat = Fraction


def _bareiss_int_det(a: list[list[int]]) -> int:
    """Fraction-free determinant of an integer matrix (mutates a)."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        ak = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * ak[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


class MatQ:
    """Immutable matrix over Q, row-major storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(_rat(e) for e in entries)
        if len(entries) != rows * cols:
            raise DomainError("entry count %d does not match %dx%d" % (len(entries), rows, cols))
        object.__setattr__(self, "rows", int(rows))
        object.__setattr__(self, "cols", int(cols))
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("MatQ is immutable")

    @classmethod
    def from_rows(cls, rows) -> "MatQ":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DomainError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "MatQ":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int) -> "MatQ":
        return cls(n, m, [0] * (n * m))

    @classmethod
    def column(cls, values) -> "MatQ":
        values = list(values)
        return cls(len(values), 1, values)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, MatQ):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other):
        self._shape_match(other)
        return MatQ(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._shape_match(other)
        return MatQ(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return MatQ(self.rows, self.cols, [-a for a in self.entries])

    def _shape_match(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DomainError("matrix shape mismatch")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _rat(other)
            return MatQ(self.rows, self.cols, [a * c for a in self.entries])
        if self.cols != other.rows:
            raise DomainError("matrix product shape mismatch")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[k] * other[k, j] for k in range(self.cols)), Fraction(0)))
        return MatQ(self.rows, other.cols, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def transpose(self) -> "MatQ":
        return MatQ(self.cols, self.rows, [self[j, i] for i in range(self.cols) for j in range(self.rows)])

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def block_sum(self, other: "MatQ") -> "MatQ":
        n, m = self.rows + other.rows, self.cols + other.cols
        out = [Fraction(0)] * (n * m)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i * m + j] = self[i, j]
        for i in range(other.rows):
            for j in range(other.cols):
                out[(self.rows + i) * m + (self.cols + j)] = other[i, j]
        return MatQ(n, m, out)

    def submatrix(self, row_idx, col_idx) -> "MatQ":
        row_idx, col_idx = list(row_idx), list(col_idx)
        return MatQ(len(row_idx), len(col_idx), [self[i, j] for i in row_idx for j in col_idx])

    def det(self) -> Fraction:
        """Exact determinant: clear row denominators, then fraction-free
        integer Bareiss elimination (much faster than Fraction pivoting)."""
        if not self.is_square:
            raise DomainError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Fraction(1)
        scale = 1
        rows = []
        for i in range(n):
            row = self.row(i)
            d = 1
            for e in row:
                d = d * e.denominator // math.gcd(d, e.denominator)
            scale *= d
            rows.append([int(e * d) for e in row])
        return Fraction(_bareiss_int_det(rows), scale)

    def inverse(self) -> "MatQ":
        if not self.is_square:
            raise DomainError("inverse of a non-square matrix")
        n = self.rows
        a = [row + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(self.to_rows())]
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col] != 0), None)
            if piv is None:
                raise DomainError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    f = a[r][col]
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return MatQ.from_rows([row[n:] for row in a])

    def rank(self) -> int:
        a = self.to_rows()
        rank = 0
        for col in range(self.cols):
            piv = next((r for r in range(rank, self.rows) if a[r][col] != 0), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            inv = 1 / a[rank][col]
            for r in range(rank + 1, self.rows):
                f = a[r][col] * inv
                if f:
                    for c in range(col, self.cols):
                        a[r][c] -= f * a[rank][c]
            rank += 1
        return rank

    def __repr__(self):
        return "MatQ(%s)" % (self.to_rows(),)


def diagonalize_sym(Q: MatQ) -> tuple[MatQ, MatQ]:
    """Congruence-diagonalize a symmetric matrix: returns (D, T) with
    T*Q*T^t = D diagonal.

    Zero diagonal pivots are repaired by swapping in a nonzero diagonal
    entry, or (if the remaining diagonal vanishes) by adding a row and
    column, which works since char Q != 2.
    """
    if not Q.is_symmetric():
        raise DomainError("diagonalize_sym requires a symmetric matrix")
    n = Q.rows
    a = Q.to_rows()
    t = MatQ.identity(n).to_rows()

    def row_op(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        for r in range(n):
            a[r][dst] = a[r][dst] + c * a[r][src]
        t[dst] = [x + c * y for x, y in zip(t[dst], t[src])]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        t[i], t[j] = t[j], t[i]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    continue  # row k is zero on and after the diagonal
                row_op(k, j, Fraction(1))
        piv = a[k][k]
        for r in range(k + 1, n):
            if a[r][k]:
                row_op(r, k, -a[r][k] / piv)
    D = MatQ.from_rows(a)
    T = MatQ.from_rows(t)
    return D, T


def signature_counts(D: MatQ) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a diagonal matrix."""
    pos = neg = zero = 0
    for i in range(D.rows):
        d = D[i, i]
        if d > 0:
            pos += 1
        elif d < 0:
            neg += 1
        else:
            zero += 1
    return pos, neg, zero


def sym_signature(Q: MatQ) -> int:
    """Signature of a symmetric rational matrix, by exact congruence."""
    D, _ = diagonalize_sym(Q)
    pos, neg, _ = signature_counts(D)
    return pos - neg


def poly_det(M) -> RatPoly:
    """Exact determinant of a square matrix over Q[t].

    Fraction-free Bareiss elimination: at every step the division by the
    previous pivot is exact in Q[t], so entries stay minors of M instead
    of blowing up into rational functions.  The 0x0 matrix has det 1.
    """
    rows = [[_as_poly(e) for e in row] for row in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("poly_det requires a square matrix")
    if n == 0:
        return RatPoly.one()
    a = rows
    sign = 1
    prev = RatPoly.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if piv is None:
                return RatPoly.zero()
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def poly_det_interp(M, max_entry_degree: int | None = None) -> RatPoly:
    """Determinant of a matrix over Q[t] by evaluation and interpolation.

    Gives the same result as poly_det; used where many large structured
    determinants are needed (the Bareiss route is kept as the reference
    path and the two are cross-checked in the test suite).
    """
    rows = [[_as_poly(e) for e in row] for row in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("poly_det requires a square matrix")
    if n == 0:
        return RatPoly.one()
    if max_entry_degree is None:
        max_entry_degree = max((e.degree for row in rows for e in row if not e.is_zero()), default=0)
    npts = n * max(max_entry_degree, 0) + 1
    xs = []
    k = 0
    while len(xs) < npts:
        xs.append(Fraction(k))
        if k > 0 and len(xs) < npts:
            xs.append(Fraction(-k))
        k += 1
    ys = []
    for x in xs:
        ys.append(MatQ(n, n, [e(x) for row in rows for e in row]).det())
    return _lagrange(xs, ys)


def _lagrange(xs, ys) -> RatPoly:
    # Newton's divided differences, then expand.
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = RatPoly.zero()
    basis = RatPoly.one()
    for i in range(n):
        poly = poly + basis * coef[i]
        basis = basis * RatPoly([-xs[i], 1])
    return poly


def poly_mat_adjugate(M) -> list[list[RatPoly]]:
    """Adjugate (transposed cofactor matrix) of a square matrix over Q[t]."""
    rows = [[_as_poly(e) for e in row] for row in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("adjugate requires a square matrix")
    if n == 0:
        return []
    adj = [[RatPoly.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = poly_det(minor)
            if (i + j) % 2:
                cof = -cof
            adj[j][i] = cof
    return adj
