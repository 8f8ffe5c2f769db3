"""Complete factorization of univariate polynomials over Q.

The pipeline is the classical one: clear denominators to a primitive
integer polynomial, take the squarefree decomposition (Yun), factor each
squarefree part modulo a well-chosen odd prime by Cantor-Zassenhaus,
Hensel-lift the modular factors past a Landau-Mignotte coefficient
bound, and recombine subsets of lifted factors into true integer
factors.  Degrees in this package stay small (<= ~50), so naive subset
recombination with cheap divisibility filters is entirely adequate.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError
from .poly import RatPoly, Rat, _rat


def is_square_rat(x) -> bool:
    """True iff x is the square of a rational number."""
    x = _rat(x)
    if x < 0:
        return False
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    return rn * rn == x.numerator and rd * rd == x.denominator


def sqrt_rat(x) -> Fraction:
    """Exact nonnegative square root of a rational square."""
    x = _rat(x)
    if not is_square_rat(x):
        raise DomainError("%s is not a rational square" % (x,))
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


@dataclass(frozen=True)
class Factorization:
    """unit * prod(poly_i ^ mult_i) == the factored polynomial.

    Each factor is irreducible over Q, primitive with integer
    coefficients and positive leading coefficient.
    """

    unit: Fraction
    factors: tuple[tuple[RatPoly, int], ...]

    def product(self) -> RatPoly:
        out = RatPoly.constant(self.unit)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def multiplicity_of(self, poly: RatPoly) -> int:
        _, want = poly.primitive()
        for f, m in self.factors:
            if f == want:
                return m
        return 0


def factor_poly(f: RatPoly) -> Factorization:
    """Factor f in Q[t] into irreducibles."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    unit, prim = f.primitive()
    if prim.degree == 0:
        return Factorization(unit, ())
    factors: dict[RatPoly, int] = {}
    # pull out the content-free power of t first; t is irreducible
    tpow = 0
    while prim[0] == 0:
        prim = RatPoly(prim.coeffs[1:])
        tpow += 1
    if tpow:
        factors[RatPoly([0, 1])] = tpow
    for part, mult in _yun_squarefree(prim):
        if part.degree == 0:
            continue
        for irr in _factor_squarefree(part):
            factors[irr] = factors.get(irr, 0) + mult
    ordered = tuple(sorted(factors.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs)))
    # fix the unit so that the reconstruction is exact
    prod = RatPoly.one()
    for g, m in ordered:
        prod = prod * g ** m
    unit = f.leading / prod.leading
    return Factorization(unit, ordered)


def _yun_squarefree(f: RatPoly) -> list[tuple[RatPoly, int]]:
    """Yun's algorithm over Q: f = prod a_i^i with a_i squarefree."""
    out = []
    g = f.gcd(f.derivative())
    c = f.exact_div(g)
    d = f.derivative().exact_div(g) - c.derivative()
    i = 1
    while c.degree > 0:
        a = c.gcd(d)
        if a.degree > 0:
            out.append((a, i))
        c = c.exact_div(a)
        d = d.exact_div(a) - c.derivative()
        i += 1
    return out


# ---------------------------------------------------------------------------
# arithmetic in F_p[x]; polynomials are tuples of ints in [0, p)


def _pnorm(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _pnorm([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _psub(a, b, p):
    n = max(len(a), len(b))
    return _pnorm([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pnorm(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        c = (a[-1] * inv) % p
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = (a[k + j] - c * y) % p
        a.pop()
    return _pnorm(q), _pnorm(a)


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple((x * inv) % p for x in a)
    return a


def _pmonic(a, p):
    if not a or a[-1] == 1:
        return a
    inv = pow(a[-1], p - 2, p)
    return tuple((x * inv) % p for x in a)


def _ppowmod(base, e, mod, p):
    result = (1,)
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _factor_mod_p(f, p, rng) -> list[tuple]:
    """Factor a squarefree monic polynomial over F_p (Cantor-Zassenhaus)."""
    factors = []
    # distinct-degree split
    todo = []
    h = (0, 1)  # x
    v = f
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppowmod(h, p, v, p)
        g = _pgcd(_psub(h, (0, 1), p), v, p)
        if len(g) > 1:
            todo.append((g, d))
            v, _ = _pdivmod(v, g, p)
            h = _pdivmod(h, v, p)[1]
    if len(v) > 1:
        todo.append((v, len(v) - 1))
    # equal-degree split
    for poly, d in todo:
        stack = [poly]
        while stack:
            g = stack.pop()
            if len(g) - 1 == d:
                factors.append(_pmonic(g, p))
                continue
            while True:
                r = tuple(rng.randrange(p) for _ in range(len(g) - 1)) + (1,)
                w = _ppowmod(r, (p ** d - 1) // 2, g, p)
                w = _psub(w, (1,), p)
                h2 = _pgcd(w, g, p)
                if 0 < len(h2) - 1 < len(g) - 1:
                    stack.append(h2)
                    stack.append(_pdivmod(g, h2, p)[0])
                    break
    return factors


# ---------------------------------------------------------------------------
# Hensel lifting


def _xgcd_poly(a, b, p):
    """s*a + t*b = g (monic gcd) over F_p."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    inv = pow(r0[-1], p - 2, p)
    scale = lambda u: tuple((x * inv) % p for x in u)
    return scale(s0), scale(t0), scale(r0)


def _centered(x, m):
    x %= m
    return x - m if 2 * x > m else x


def _zmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _mq_norm(a, q):
    a = [x % q for x in a]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _mq_add(a, b, q):
    n = max(len(a), len(b))
    return _mq_norm([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], q)


def _mq_sub(a, b, q):
    n = max(len(a), len(b))
    return _mq_norm([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], q)


def _mq_mul(a, b, q):
    return _mq_norm(_zmul(a, b), q)


def _mq_divmod_monic(a, b, q):
    """divmod in (Z/q)[x] for monic b."""
    a = list(_mq_norm(a, q))
    qo = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1]
        qo[k] = c
        for j, y in enumerate(b):
            a[k + j] = (a[k + j] - c * y) % q
        while a and a[-1] == 0:
            a.pop()
    return _mq_norm(qo, q), _mq_norm(a, q)


def _hensel_pair(f, g, h, s, t, p, target):
    """Quadratic Hensel: given monic f = g*h mod p with s*g + t*h = 1
    mod p, lift to f = g*h mod p^(2^j) >= target.  Returns (g, h, m)."""
    m = p
    g, h, s, t = (_mq_norm(u, m) for u in (g, h, s, t))
    while m < target:
        m2 = m * m
        e = _mq_sub(_mq_norm(f, m2), _mq_mul(g, h, m2), m2)
        qq, rr = _mq_divmod_monic(_mq_mul(s, e, m2), h, m2)
        g = _mq_add(g, _mq_add(_mq_mul(t, e, m2), _mq_mul(qq, g, m2), m2), m2)
        h = _mq_add(h, rr, m2)
        b = _mq_sub(_mq_add(_mq_mul(s, g, m2), _mq_mul(t, h, m2), m2), (1,), m2)
        cq, cr = _mq_divmod_monic(_mq_mul(s, b, m2), h, m2)
        s = _mq_sub(s, cr, m2)
        t = _mq_sub(t, _mq_add(_mq_mul(t, b, m2), _mq_mul(cq, g, m2), m2), m2)
        m = m2
    return g, h, m


def _hensel_multilift(f, modular_factors, p, target):
    """Lift the monic factorization of f (monic, squarefree mod p) from
    mod p to mod p^k >= target.  Returns (lifted factors, modulus)."""
    if len(modular_factors) == 1:
        m = p
        while m < target:
            m *= m
        return [tuple(x % m for x in f)], m
    half = len(modular_factors) // 2
    left, right = modular_factors[:half], modular_factors[half:]
    g0 = (1,)
    for u in left:
        g0 = _pmul(g0, u, p)
    h0 = (1,)
    for u in right:
        h0 = _pmul(h0, u, p)
    s, t, g = _xgcd_poly(g0, h0, p)
    if len(g) != 1:
        raise DomainError("modular factors are not coprime")
    gl, hl, m = _hensel_pair(f, g0, h0, s, t, p, target)
    lg, m1 = _hensel_multilift(gl, left, p, target)
    lh, m2 = _hensel_multilift(hl, right, p, target)
    return lg + lh, m


def _factor_squarefree(g: RatPoly) -> list[RatPoly]:
    """Factor a primitive squarefree integer polynomial (lc > 0, nonzero
    constant term) into irreducible primitive integer polynomials."""
    _, g = g.primitive()
    if g.degree <= 1:
        return [g]
    coeffs = g.int_coeffs()
    lc = coeffs[-1]
    n = g.degree
    # monicize: F(x) = lc^(n-1) * g(x/lc) is monic with integer coefficients
    F = [coeffs[i] * lc ** (n - 1 - i) for i in range(n)] + [1]
    monic_factors = _factor_monic_squarefree(F)
    out = []
    for Fi in monic_factors:
        # undo the substitution: x -> lc * x, then take the primitive part
        gi = RatPoly([Fraction(c) * Fraction(lc) ** k for k, c in enumerate(Fi)])
        _, prim = gi.primitive()
        out.append(prim)
    return sorted(out, key=lambda q: (q.degree, q.coeffs))


def _factor_monic_squarefree(F: list[int]) -> list[tuple[int, ...]]:
    """Zassenhaus for a monic squarefree integer polynomial, coefficients
    lowest-first, returned as integer coefficient tuples (monic)."""
    n = len(F) - 1
    if n == 1:
        return [tuple(F)]
    rng = random.Random(0xC0FFEE ^ n ^ (F[0] & 0xFFFF))
    # choose an odd prime keeping f squarefree mod p with few factors
    best = None
    tried = 0
    p = 2
    while tried < 12 or best is None:
        p = _next_prime(p)
        fp = _pnorm([c % p for c in F])
        if len(fp) - 1 != n:
            continue
        d = _pgcd(fp, _pnorm([(k * c) % p for k, c in enumerate(F)][1:]), p)
        if len(d) != 1:
            continue
        tried += 1
        facs = _factor_mod_p(_pmonic(fp, p), p, rng)
        if len(facs) == 1:
            return [tuple(F)]  # irreducible over F_p, hence over Q
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(best[1]) == 2:
            break
    p, facs = best
    # Landau-Mignotte style bound on factor coefficients
    norm = math.isqrt(sum(c * c for c in F)) + 1
    bound = 2 ** (n + 1) * norm
    lifted, modulus = _hensel_multilift(tuple(F), sorted(facs), p, 2 * bound + 1)
    lifted = [tuple(x % modulus for x in u) for u in lifted]

    remaining = list(range(len(lifted)))
    current = list(F)
    out = []

    def centered_product(idx):
        prod = (1,)
        for i in idx:
            prod = _zmul(prod, lifted[i])
            prod = tuple(x % modulus for x in prod)
        return [_centered(x, modulus) for x in prod]

    k = 1
    while 2 * k <= len(remaining):
        found = False
        for subset in itertools.combinations(remaining, k):
            cand = centered_product(subset)
            if cand[0] == 0 or current[0] % cand[0] != 0:
                continue
            q, ok = _zdivmod_exact(current, cand)
            if ok:
                out.append(tuple(cand))
                current = q
                remaining = [i for i in remaining if i not in subset]
                found = True
                break
        if not found:
            k += 1
    if len(current) > 1:
        out.append(tuple(current))
    return out


def _zdivmod_exact(a: list[int], b):
    """Exact division of integer polynomials (b monic); returns (q, ok)."""
    a = list(a)
    if len(a) < len(b):
        return a, False
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = a[k + len(b) - 1]
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    if any(a[: len(b) - 1]):
        return a, False
    return q, True


_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _next_prime(n: int) -> int:
    n += 2 if n % 2 else 1
    while not is_prime(n):
        n += 2
    return n
