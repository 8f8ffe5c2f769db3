"""Real-root isolation with exact Sturm sequences.

Intervals are rational and either degenerate (an exact rational root)
or open with the polynomial nonzero at both endpoints and exactly one
root inside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError
from .poly import RatPoly, _rat


@dataclass(frozen=True)
class RootInterval:
    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def sturm_chain(f: RatPoly) -> list[RatPoly]:
    chain = [f, f.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        chain.append(-(chain[-2] % chain[-1]))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _variations(chain, x) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(f: RatPoly, lo, hi) -> int:
    """Number of distinct real roots of f in (lo, hi]; f squarefree."""
    lo, hi = _rat(lo), _rat(hi)
    chain = sturm_chain(f)
    return _variations(chain, lo) - _variations(chain, hi)


def isolate_real_roots(f: RatPoly, lo, hi) -> list[RootInterval]:
    """Disjoint isolating intervals for the real roots of f in [lo, hi].

    The squarefree part of f is taken internally.  Exact rational roots
    come back as degenerate intervals; every other interval is open,
    contains exactly one root and has endpoints where f is nonzero.
    """
    lo, hi = _rat(lo), _rat(hi)
    if lo > hi:
        raise DomainError("empty interval: lo > hi")
    if f.is_zero():
        raise DomainError("cannot isolate roots of the zero polynomial")
    f = f.squarefree_part()
    if f.degree < 1:
        return []
    chain = sturm_chain(f)
    out: list[RootInterval] = []
    if f(lo) == 0:
        out.append(RootInterval(lo, lo))
    if f(hi) == 0 and hi != lo:
        out.append(RootInterval(hi, hi))
    if lo == hi:
        return out

    def interior_roots(a, b) -> int:
        # roots strictly inside (a, b), assuming f(b) != 0
        return _variations(chain, a) - _variations(chain, b)

    def go(a, b):
        # invariant: f(a) != 0 and f(b) != 0
        n = interior_roots(a, b)
        if n == 0:
            return
        if n == 1:
            out.append(RootInterval(a, b))
            return
        m = (a + b) / 2
        if f(m) == 0:
            out.append(RootInterval(m, m))
            w = (b - a) / 4
            while count_roots(f, m - w, m + w) > 1 or f(m - w) == 0 or f(m + w) == 0:
                w /= 2
            go(a, m - w)
            go(m + w, b)
        else:
            go(a, m)
            go(m, b)

    # move the working endpoints inside [lo, hi] past any endpoint roots
    eps = (hi - lo) / 1024
    a = lo + eps
    while f(a) == 0 or count_roots(f, lo, a) - (1 if f(a) == 0 else 0) > 0:
        eps /= 2
        a = lo + eps
    eps = (hi - lo) / 1024
    b = hi - eps
    while f(b) == 0 or count_roots(f, b, hi) - (1 if f(hi) == 0 else 0) > 0:
        eps /= 2
        b = hi - eps
    if a < b:
        go(a, b)
    return sorted(set(out), key=lambda iv: (iv.lo, iv.hi))


def refine_interval(f: RatPoly, interval: RootInterval, max_width) -> RootInterval:
    """Bisect an isolating interval until its width is <= max_width."""
    max_width = _rat(max_width)
    if interval.is_exact:
        return interval
    f = f.squarefree_part()
    lo, hi = interval.lo, interval.hi
    neg_at_lo = f(lo) < 0
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        v = f(mid)
        if v == 0:
            return RootInterval(mid, mid)
        if (v < 0) == neg_at_lo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)
