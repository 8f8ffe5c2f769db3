"""Dense univariate polynomials and Laurent polynomials over Q.

Coefficients are stored lowest degree first as `fractions.Fraction`
values.  All operations are exact and all values are immutable, so
everything here is safe to share between threads.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import DomainError

Rat = Fraction


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise DomainError("expected an exact rational, got %r" % (x,))


class ComplexRat:
    """Gaussian rational x + y*i, used for evaluating polynomials on the
    unit circle at points with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        object.__setattr__(self, "re", _rat(re))
        object.__setattr__(self, "im", _rat(im))

    def __setattr__(self, *a):
        raise AttributeError("ComplexRat is immutable")

    def conj(self) -> "ComplexRat":
        return ComplexRat(self.re, -self.im)

    def __add__(self, other):
        other = _as_complex(other)
        return ComplexRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_complex(other)
        return ComplexRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_complex(other) - self

    def __mul__(self, other):
        other = _as_complex(other)
        return ComplexRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_complex(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero ComplexRat")
        return self * ComplexRat(other.re / n, -other.im / n)

    def __neg__(self):
        return ComplexRat(-self.re, -self.im)

    def __eq__(self, other):
        try:
            other = _as_complex(other)
        except DomainError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return "ComplexRat(%s, %s)" % (self.re, self.im)


def _as_complex(x) -> ComplexRat:
    if isinstance(x, ComplexRat):
        return x
    return ComplexRat(_rat(x), 0)


class RatPoly:
    """A polynomial in Q[t], dense, lowest degree first.

    The zero polynomial is represented by an empty coefficient tuple and
    has degree -1; the leading coefficient of a nonzero polynomial is
    always nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("RatPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls(())

    @classmethod
    def one(cls) -> "RatPoly":
        return cls((1,))

    @classmethod
    def constant(cls, c) -> "RatPoly":
        return cls((_rat(c),))

    @classmethod
    def monomial(cls, c, n: int) -> "RatPoly":
        return cls((0,) * n + (_rat(c),))

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == RatPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPoly([self[k] - other[k] for k in range(n)])

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __neg__(self):
        return RatPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _rat(other)
            return RatPoly([a * c for a in self.coeffs])
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        out = RatPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "RatPoly"):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        rem = list(self.coeffs)
        d = other.degree
        lc = other.leading
        while len(rem) - 1 >= d and any(rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            c = rem[-1] / lc
            q[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
            rem.pop()
        return RatPoly(q), RatPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "RatPoly") -> "RatPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DomainError("polynomial division is not exact")
        return q

    def derivative(self) -> "RatPoly":
        return RatPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation; works for Fraction, int, ComplexRat, float."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return Fraction(0)
        return acc

    # -- number-theoretic normal forms ---------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive over Z (0 for zero)."""
        if not self.coeffs:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.coeffs:
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple[Fraction, "RatPoly"]:
        """Return (c, P) with self = c*P, P integral primitive, lc(P) > 0."""
        if not self.coeffs:
            return Fraction(0), RatPoly.zero()
        c = self.content()
        if self.leading < 0:
            c = -c
        return c, RatPoly([a / c for a in self.coeffs])

    def int_coeffs(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise DomainError("polynomial does not have integer coefficients")
        return [c.numerator for c in self.coeffs]

    def reverse(self) -> "RatPoly":
        """t^deg * self(1/t)."""
        return RatPoly(tuple(reversed(self.coeffs)))

    def is_palindromic(self) -> bool:
        return bool(self.coeffs) and self.coeffs == tuple(reversed(self.coeffs))

    def compose_power(self, r: int) -> "RatPoly":
        """self(t^r)."""
        if r < 1:
            raise DomainError("power substitution needs r >= 1")
        if not self.coeffs:
            return self
        out = [Fraction(0)] * ((len(self.coeffs) - 1) * r + 1)
        for k, c in enumerate(self.coeffs):
            out[k * r] = c
        return RatPoly(out)

    def shift_mul(self, n: int) -> "RatPoly":
        """self * t^n (n >= 0)."""
        return RatPoly((0,) * n + self.coeffs)

    def monic(self) -> "RatPoly":
        if self.is_zero():
            return self
        return self * (1 / self.leading)

    def gcd(self, other: "RatPoly") -> "RatPoly":
        """Monic gcd in Q[t]."""
        a, b = self, _as_poly(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree_part(self) -> "RatPoly":
        if self.is_zero():
            raise DomainError("zero polynomial has no squarefree part")
        g = self.gcd(self.derivative())
        return self.exact_div(g)

    def __repr__(self):
        return "RatPoly(%s)" % (format_poly(self),)


def _as_poly(x) -> RatPoly:
    if isinstance(x, RatPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return RatPoly.constant(x)
    raise DomainError("expected a RatPoly, got %r" % (x,))


def format_poly(p: RatPoly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            tpow = var if k == 1 else "%s^%d" % (var, k)
            body = tpow if mag == 1 else "%s*%s" % (mag, tpow)
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += " %s %s" % (sign, body)
    return out


class LaurentPolyQ:
    """An element of Q[t, t^-1], stored as core * t^shift.

    Canonical form: the core polynomial has nonzero constant term (so
    the shift is the lowest exponent appearing), or the element is zero
    with shift 0.
    """

    __slots__ = ("core", "shift")

    def __init__(self, core, shift: int = 0):
        core = _as_poly(core)
        if core.is_zero():
            shift = 0
        else:
            while core[0] == 0:
                core = RatPoly(core.coeffs[1:])
                shift += 1
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "shift", int(shift))

    def __setattr__(self, *a):
        raise AttributeError("LaurentPolyQ is immutable")

    @classmethod
    def one(cls) -> "LaurentPolyQ":
        return cls(RatPoly.one(), 0)

    def is_zero(self) -> bool:
        return self.core.is_zero()

    def is_unit(self) -> bool:
        return self.core.degree == 0

    @property
    def lowest_exp(self) -> int:
        return self.shift

    @property
    def highest_exp(self) -> int:
        return self.shift + self.core.degree

    def __eq__(self, other):
        if not isinstance(other, LaurentPolyQ):
            return NotImplemented
        return self.core == other.core and self.shift == other.shift

    def __hash__(self):
        return hash((self.core, self.shift))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPolyQ(self.core * other, self.shift)
        if isinstance(other, RatPoly):
            other = LaurentPolyQ(other)
        return LaurentPolyQ(self.core * other.core, self.shift + other.shift)

    __rmul__ = __mul__

    def __neg__(self):
        return LaurentPolyQ(-self.core, self.shift)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RatPoly)):
            other = LaurentPolyQ(other)
        lo = min(self.shift, other.shift)
        a = self.core.shift_mul(self.shift - lo)
        b = other.core.shift_mul(other.shift - lo)
        return LaurentPolyQ(a + b, lo)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RatPoly)):
            other = LaurentPolyQ(other)
        return self + (-other)

    def __call__(self, x):
        """Evaluate at a nonzero point."""
        v = self.core(x)
        if self.shift == 0:
            return v
        if self.shift > 0:
            return v * x ** self.shift
        inv = 1 / x if not isinstance(x, ComplexRat) else ComplexRat(1) / x
        return v * inv ** (-self.shift)

    def conj(self) -> "LaurentPolyQ":
        """The substitution t -> 1/t."""
        return LaurentPolyQ(self.core.reverse(), -(self.shift + self.core.degree))

    def compose_power(self, r: int) -> "LaurentPolyQ":
        """The substitution t -> t^r."""
        return LaurentPolyQ(self.core.compose_power(r), self.shift * r)

    def unit_normal(self) -> RatPoly:
        """The canonical representative modulo units of Q[t, t^-1]:
        primitive integer coefficients, nonzero constant term, positive
        leading coefficient.  Zero maps to zero."""
        if self.is_zero():
            return RatPoly.zero()
        _, prim = self.core.primitive()
        return prim

    def eq_up_to_units(self, other) -> bool:
        if isinstance(other, RatPoly):
            other = LaurentPolyQ(other)
        return self.unit_normal() == other.unit_normal()

    def __repr__(self):
        if self.shift == 0:
            return "LaurentPolyQ(%s)" % format_poly(self.core)
        return "LaurentPolyQ((%s) * t^%d)" % (format_poly(self.core), self.shift)
