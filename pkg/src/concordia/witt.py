"""Primary-part invariants on the unit circle and the torsion-order
classifier.

Signatures are evaluated only at rational points of the circle, via the
tangent half-angle parametrization w = ((1-s^2) + 2si)/(1+s^2): the
hermitian matrix (wA - eps*A^T)/(w - 1) (times (w - wbar) when
eps = -1) then has rational real and imaginary parts, and its signature
is half the signature of the doubled real symmetric matrix
[[Re, -Im], [Im, Re]], computed by exact congruence.  Circle roots of
the Alexander polynomial are located through the trace substitution
x = t + 1/t and Sturm isolation, so every sample point is certified to
sit strictly inside a root-free arc.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv, mp
from mpmath.libmp import mpf_pi, to_rational

from .errors import DomainError
from .exact.factor import Factorization, factor_poly, is_prime
from .exact.linalg import MatQ, diagonalize_sym, signature_counts
from .exact.poly import LaurentPolyQ, RatPoly, _rat
from .exact.roots import RootInterval, isolate_real_roots, refine_interval
from .numtheory import Order2Certificate, Order4Tower, order2_certificate, order4_tower
from .seifert import SeifertMatrix, alexander

DEFAULT_R_MAX = 12
DEFAULT_TOWER_DEPTH = 8

T_PLUS_ONE = RatPoly([1, 1])
T_MINUS_ONE = RatPoly([-1, 1])


# ---------------------------------------------------------------------------
# factors and circle roots


@dataclass(frozen=True)
class CircleRoot:
    """A root of unit modulus, described by bounds on its trace
    x = z + 1/z in [-2, 2] and the sign of its imaginary part
    (0 only for z = -1, where x = -2 exactly)."""

    x_lo: Fraction
    x_hi: Fraction
    imag_sign: int

    @property
    def is_minus_one(self) -> bool:
        return self.imag_sign == 0 and self.x_lo == -2


@dataclass(frozen=True)
class ReciprocalFactor:
    poly: RatPoly
    multiplicity: int
    reciprocal: bool
    circle_roots: tuple[CircleRoot, ...]

    @property
    def e_mod2(self) -> int:
        return self.multiplicity % 2


def is_reciprocal_poly(p: RatPoly) -> bool:
    """p(t) = u * t^deg * p(1/t) for a rational unit u; for a primitive
    polynomial that means the reversal is +-p."""
    _, prim = p.primitive()
    rev = prim.reverse()
    return rev == prim or rev == -prim


def compact_form(p: RatPoly) -> RatPoly:
    """For palindromic p of even degree 2m, the g with p = t^m g(t+1/t)."""
    if not p.is_palindromic() or p.degree % 2:
        raise DomainError("compact form needs a palindromic polynomial of even degree")
    f = p
    g = RatPoly.zero()
    x2_plus_1 = RatPoly([1, 0, 1])
    while not f.is_zero():
        d = f.degree
        if d % 2:
            raise DomainError("degree parity broke during compact-form reduction")
        c = f.leading
        g = g + RatPoly.monomial(c, d // 2)
        f = f - x2_plus_1 ** (d // 2) * c
        if not f.is_zero():
            k = next(i for i, a in enumerate(f.coeffs) if a != 0)
            f = RatPoly(f.coeffs[k:])
    return g


def half_angle_poly(g: RatPoly) -> RatPoly:
    """(1+s^2)^deg(g) * g(2(1-s^2)/(1+s^2)) as a polynomial in s."""
    m = g.degree
    one_minus = RatPoly([1, 0, -1])
    one_plus = RatPoly([1, 0, 1])
    out = RatPoly.zero()
    for k in range(m + 1):
        if g[k]:
            out = out + one_minus ** k * one_plus ** (m - k) * (g[k] * Fraction(2) ** k)
    return out


def _trace_from_s(s: Fraction) -> Fraction:
    return 2 * (1 - s * s) / (1 + s * s)


def circle_roots_of_factor(lam: RatPoly) -> tuple[CircleRoot, ...]:
    """Unit-circle roots of an irreducible polynomial, as conjugate
    pairs of CircleRoot descriptors (plus the special z = +-1)."""
    if lam == T_PLUS_ONE:
        return (CircleRoot(Fraction(-2), Fraction(-2), 0),)
    if lam == T_MINUS_ONE:
        return (CircleRoot(Fraction(2), Fraction(2), 0),)
    if lam.degree % 2 or not is_reciprocal_poly(lam):
        return ()
    _, prim = lam.primitive()
    if not prim.is_palindromic():
        # anti-palindromic reciprocal factors vanish at t = 1
        return ()
    g = compact_form(prim)
    out = []
    for interval in isolate_real_roots(g, Fraction(-2), Fraction(2)):
        interval = refine_interval(g, interval, Fraction(1, 16))
        out.append(CircleRoot(interval.lo, interval.hi, 1))
        out.append(CircleRoot(interval.lo, interval.hi, -1))
    return tuple(out)


def reciprocal_split(delta: LaurentPolyQ) -> list[ReciprocalFactor]:
    """Irreducible factors of delta with reciprocal flags and isolated
    unit-circle roots."""
    if isinstance(delta, RatPoly):
        delta = LaurentPolyQ(delta)
    if delta.is_zero():
        raise DomainError("zero polynomial")
    out = []
    for poly, mult in factor_poly(delta.core).factors:
        rec = is_reciprocal_poly(poly)
        roots = circle_roots_of_factor(poly) if rec else ()
        out.append(ReciprocalFactor(poly, mult, rec, roots))
    return out


def exponent_mod2(S: SeifertMatrix, lam: RatPoly) -> int:
    """Multiplicity mod 2 of the irreducible lam in the Alexander
    polynomial; zero when lam does not divide it."""
    fac = factor_poly(lam)
    if len(fac.factors) != 1 or fac.factors[0][1] != 1 or fac.factors[0][0].degree < 1:
        raise DomainError("lambda must be irreducible")
    delta = alexander(S)
    return factor_poly(delta.core).multiplicity_of(lam) % 2


# ---------------------------------------------------------------------------
# exact signatures on the circle


def circle_signature(S: SeifertMatrix, s: Fraction | None) -> int:
    """Signature of the unit-circle hermitian form at the rational
    point w(s); s = None denotes w = -1 (the parameter at infinity)."""
    A, eps, n = S.A, S.epsilon, S.A.rows
    if n == 0:
        return 0
    if s is None:
        if eps == -1:
            return 0  # the (w - wbar) factor vanishes at w = -1
        D, _ = diagonalize_sym(A + A.transpose())
        pos, neg, _ = signature_counts(D)
        return pos - neg
    s = _rat(s)
    if s == 0:
        raise DomainError("w = 1 is excluded")
    den = 1 + s * s
    w_re, w_im = (1 - s * s) / den, 2 * s / den
    # c1 * A + c2 * A^T with c1 = w/(w-1), c2 = -eps/(w-1), all exact
    dre, dim_ = w_re - 1, w_im
    nrm = dre * dre + dim_ * dim_
    c1 = ((w_re * dre + w_im * dim_) / nrm, (w_im * dre - w_re * dim_) / nrm)
    c2 = (-Fraction(eps) * dre / nrm, Fraction(eps) * dim_ / nrm)
    if eps == -1:
        # multiply by (w - wbar) = 2i*im
        f = 2 * w_im
        c1 = (-f * c1[1], f * c1[0])
        c2 = (-f * c2[1], f * c2[0])
    X = MatQ(n, n, [c1[0] * A[i, j] + c2[0] * A[j, i] for i in range(n) for j in range(n)])
    Y = MatQ(n, n, [c1[1] * A[i, j] + c2[1] * A[j, i] for i in range(n) for j in range(n)])
    rows = []
    for i in range(n):
        rows.append(list(X.row(i)) + [-y for y in Y.row(i)])
    for i in range(n):
        rows.append(list(Y.row(i)) + list(X.row(i)))
    R = MatQ.from_rows(rows)
    if not R.is_symmetric():
        raise DomainError("hermitian assembly failed")
    D, _ = diagonalize_sym(R)
    pos, neg, zero = signature_counts(D)
    if zero:
        raise DomainError("w is a root of the Alexander polynomial")
    sig2 = pos - neg
    if sig2 % 2:
        raise DomainError("doubled signature must be even")
    return sig2 // 2


@dataclass(frozen=True)
class _UpperRoot:
    s_lo: Fraction
    s_hi: Fraction
    x_lo: Fraction
    x_hi: Fraction
    factor_index: int

    @property
    def exact(self) -> bool:
        return self.s_lo == self.s_hi


def _upper_circle_data(delta_core: RatPoly):
    """Upper-half-circle roots of the reciprocal factors, as disjoint
    s-parameter intervals sorted counterclockwise (increasing s),
    together with the factor list and the multiplicity of t + 1."""
    factors = factor_poly(delta_core).factors
    roots: list[_UpperRoot] = []
    minus_one_mult = 0
    for idx, (poly, _mult) in enumerate(factors):
        if poly == T_PLUS_ONE:
            minus_one_mult = _mult
            continue
        if poly.degree % 2 or not is_reciprocal_poly(poly):
            continue
        _, prim = poly.primitive()
        if not prim.is_palindromic():
            continue
        g = compact_form(prim)
        h = half_angle_poly(g)
        if h.is_zero():
            continue
        bound = 1 + max(abs(c / h.leading) for c in h.coeffs)
        for interval in isolate_real_roots(h, Fraction(0), bound):
            if interval.lo <= 0:
                raise DomainError("circle root collided with w = 1")
            roots.append(
                _UpperRoot(interval.lo, interval.hi, _trace_from_s(interval.hi), _trace_from_s(interval.lo), idx)
            )
    # refine across factors until the s-intervals are pairwise disjoint
    changed = True
    while changed:
        changed = False
        roots.sort(key=lambda r: (r.s_lo, r.s_hi))
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if a.s_hi >= b.s_lo and not (a.exact and b.exact):
                ha = _refine_upper(factors, a)
                hb = _refine_upper(factors, b)
                roots[i], roots[i + 1] = ha, hb
                changed = True
    return factors, roots, minus_one_mult


def _refine_upper(factors, r: _UpperRoot) -> _UpperRoot:
    if r.exact:
        return r
    poly = factors[r.factor_index][0]
    _, prim = poly.primitive()
    h = half_angle_poly(compact_form(prim))
    newiv = refine_interval(h, RootInterval(r.s_lo, r.s_hi), (r.s_hi - r.s_lo) / 4)
    return _UpperRoot(newiv.lo, newiv.hi, _trace_from_s(newiv.hi), _trace_from_s(newiv.lo), r.factor_index)


def _arc_samples(roots: list[_UpperRoot]) -> list[Fraction]:
    """Rational s values strictly inside the root-free arcs between
    consecutive upper roots (and before the first / after the last)."""
    samples = []
    if not roots:
        return [Fraction(1)]
    samples.append(roots[0].s_lo / 2 if roots[0].s_lo > 0 else roots[0].s_hi / 2)
    for a, b in zip(roots, roots[1:]):
        samples.append((a.s_hi + b.s_lo) / 2)
    samples.append(roots[-1].s_hi + 1)
    return samples


@dataclass(frozen=True)
class SignatureJump:
    root: CircleRoot
    jump: int


def signature_jumps(S: SeifertMatrix) -> tuple[SignatureJump, ...]:
    """Jumps of the circle signature function at the roots of the
    Alexander polynomial, counterclockwise: jump = (value just after) -
    (value just before), with sample points certified root-free by the
    Sturm isolation.  Conjugate roots carry opposite jumps; at z = -1
    the one-sided limits agree by conjugation symmetry."""
    delta = alexander(S)
    factors, roots, minus_one_mult = _upper_circle_data(delta.core)
    samples = _arc_samples(roots)
    sigs = [circle_signature(S, s) for s in samples]
    upper = []
    for i, r in enumerate(roots):
        upper.append(SignatureJump(CircleRoot(r.x_lo, r.x_hi, 1), sigs[i + 1] - sigs[i]))
    out = list(upper)
    if minus_one_mult:
        out.append(SignatureJump(CircleRoot(Fraction(-2), Fraction(-2), 0), 0))
    out.extend(SignatureJump(CircleRoot(j.root.x_lo, j.root.x_hi, -1), -j.jump) for j in reversed(upper))
    return tuple(out)


# ---------------------------------------------------------------------------
# the normalized signature integral


@dataclass(frozen=True)
class RhoInterval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, value) -> bool:
        value = _rat(value)
        return self.lo <= value <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def _mpf_to_fraction(x) -> Fraction:
    p, q = to_rational(x._mpf_)
    return Fraction(int(p), int(q))


def _pi_bounds() -> tuple[Fraction, Fraction]:
    lo, hi = iv.pi._mpi_
    return Fraction(*(int(v) for v in to_rational(lo))), Fraction(*(int(v) for v in to_rational(hi)))


def _acos_enclosure(y: Fraction, target_width: float):
    """Certified enclosure of acos(y) by bisection against the interval
    cosine; returns (lo, hi) as mpf endpoints with hi - lo <= target
    (or as tight as the working precision allows)."""
    y_iv = iv.mpf(y.numerator) / y.denominator
    a = mp.mpf(0)
    b = mp.make_mpf(mpf_pi(mp.prec, "u"))
    for _ in range(300):
        if float(b - a) <= target_width:
            break
        m = (a + b) / 2
        c = iv.cos(iv.mpf(m))
        if c > y_iv:
            a = m
        elif c < y_iv:
            b = m
        else:
            break
    return a, b


def rho_abelian(S: SeifertMatrix, tol) -> RhoInterval:
    """The signature function integrated over the circle, normalized to
    total length one: sum of sigma * (arc length) / (2 pi).

    The signature is piecewise constant between the circle roots, so
    the only approximation is in the arc endpoints; their arguments are
    enclosed by certified interval arccos and the isolating intervals
    are refined until the output width is at most tol."""
    tol = _rat(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    delta = alexander(S)
    factors, roots, _ = _upper_circle_data(delta.core)
    samples = _arc_samples(roots)
    sigs = [circle_signature(S, s) for s in samples]
    if not roots:
        v = Fraction(sigs[0])
        return RhoInterval(v, v)
    old_prec = iv.prec
    old_mp = mp.prec
    try:
        iv.prec = 160
        mp.prec = 160
        width_target = tol / (8 * max(1, len(roots)) * max(1, max(abs(s) for s in sigs)))
        for _attempt in range(60):
            encl = []
            ok = True
            for r in roots:
                lo_a, _ = _acos_enclosure(r.x_hi / 2, float(width_target) / 4)
                _, hi_b = _acos_enclosure(r.x_lo / 2, float(width_target) / 4)
                lo_f, hi_f = _mpf_to_fraction(lo_a), _mpf_to_fraction(hi_b)
                if hi_f - lo_f > width_target:
                    ok = False
                    break
                encl.append((lo_f, hi_f))
            if not ok:
                roots = [_refine_upper(factors, r) for r in roots]
                continue
            pi_lo, pi_hi = _pi_bounds()
            # integral over the upper half circle, divided by pi
            lo_sum = Fraction(0)
            hi_sum = Fraction(0)
            bounds = [(Fraction(0), Fraction(0))] + encl + [(pi_lo, pi_hi)]
            for j, sig in enumerate(sigs):
                a_lo, a_hi = bounds[j]
                b_lo, b_hi = bounds[j + 1]
                len_lo, len_hi = max(b_lo - a_hi, Fraction(0)), max(b_hi - a_lo, Fraction(0))
                if sig >= 0:
                    lo_sum += sig * len_lo
                    hi_sum += sig * len_hi
                else:
                    lo_sum += sig * len_hi
                    hi_sum += sig * len_lo
            lo = min(lo_sum / pi_hi, lo_sum / pi_lo)
            hi = max(hi_sum / pi_hi, hi_sum / pi_lo)
            if hi - lo <= tol:
                return RhoInterval(lo, hi)
            width_target /= 4
            roots = [_refine_upper(factors, r) for r in roots]
        raise DomainError("failed to reach the requested tolerance")
    finally:
        iv.prec = old_prec
        mp.prec = old_mp


# ---------------------------------------------------------------------------
# the per-factor report


@dataclass(frozen=True)
class WittFactor:
    poly: RatPoly
    multiplicity: int
    reciprocal: bool
    circle_roots: tuple[CircleRoot, ...]
    e_mod2: int


@dataclass(frozen=True)
class WittReport:
    factors: tuple[WittFactor, ...]
    jumps: tuple[SignatureJump, ...]
    epsilon_convention_note: str = ""


def witt_report(S: SeifertMatrix) -> WittReport:
    """Factor-by-factor invariants of the class: rank parities, circle
    roots, and signature jumps.  For eps = -1 the invariants at z = +-1
    are reported trivial by convention (those primary parts are
    skew forms over Q, hence Witt trivial)."""
    delta = alexander(S)
    entries = []
    note = ""
    for f in reciprocal_split(delta):
        e = f.e_mod2
        if S.epsilon == -1 and f.poly in (T_PLUS_ONE, T_MINUS_ONE):
            e = 0
            note = "invariants at z = +-1 are trivial by convention for eps = -1"
        entries.append(WittFactor(f.poly, f.multiplicity, f.reciprocal, f.circle_roots, e))
    return WittReport(tuple(entries), signature_jumps(S), note)


# ---------------------------------------------------------------------------
# stability certificates and the order classifier


@dataclass(frozen=True)
class StableCertificate:
    kind: str  # "stably_irreducible" | "trivially_split" | "undetermined"
    a: int | None = None
    p: int | None = None
    r: int | None = None
    searched_up_to: int | None = None


@dataclass(frozen=True)
class StableFamilyResult:
    a: int
    p: int
    stable: bool
    a_prime: bool
    p_nonzero_mod_a: bool
    p_avoids_critical_residues: bool
    mirror_pair: tuple[int, int]


def stable_irreducible_family(a: int, p: int) -> StableFamilyResult:
    """Whether a*t^2 - (2a+p)*t + a stays irreducible under every
    substitution t -> t^r: true iff a is prime, p != 0 mod a, and
    p != -2a +- 1 mod a^2.  The mirrored polynomial in -t corresponds
    to the parameter swap (a, p) -> (a, -4a-p), which satisfies the
    hypotheses iff (a, p) does."""
    a_prime = is_prime(a)
    nz = a_prime and p % a != 0
    avoid = (p + 2 * a - 1) % (a * a) != 0 and (p + 2 * a + 1) % (a * a) != 0
    return StableFamilyResult(a, p, a_prime and nz and avoid, a_prime, nz, avoid, (a, -4 * a - p))


def stably_nonreciprocal_search(delta: LaurentPolyQ, r_max: int) -> int | None:
    """Smallest r <= r_max such that delta(t^r) has no reciprocal
    irreducible factor; None when every tested substitution keeps one.

    Any reciprocal irreducible factor of f divides gcd(f, reverse(f)),
    so the gcd is checked first and only it is factored."""
    if isinstance(delta, RatPoly):
        delta = LaurentPolyQ(delta)
    if delta.is_zero():
        raise DomainError("zero polynomial")
    if r_max < 1:
        raise DomainError("r_max must be >= 1")
    _, base = delta.core.primitive()
    for r in range(1, r_max + 1):
        f = base.compose_power(r)
        if not _has_reciprocal_factor(f):
            return r
    return None


def _has_reciprocal_factor(f: RatPoly) -> bool:
    g = f.gcd(f.reverse())
    if g.degree < 1:
        return False
    return any(is_reciprocal_poly(q) for q, _ in factor_poly(g).factors)


@dataclass(frozen=True)
class OrderClassification:
    verdict: str  # "infinite" | "trivial" | "order2" | "order4" | "torsion_unknown" | "unknown"
    r: int | None = None
    witness_jump: SignatureJump | None = None
    witness_factor: RatPoly | None = None
    family: tuple[int, int, int] | None = None  # (a, p, substitution exponent)
    certificate: object | None = None
    stability: StableCertificate | None = None
    verified_depth: int | None = None
    note: str = ""


def _match_torsion_family(factors, epsilon: int):
    """Detect delta = a t^{2r} - (2a+p) t^r + a (times (t^r + 1)^2 when
    eps = -1) up to units; returns (a, p, r, trinomial factor) or None."""
    for idx, (poly, mult) in enumerate(factors):
        if mult != 1 or poly.degree < 2 or poly.degree % 2:
            continue
        d = poly.degree
        r = d // 2
        a = poly[0]
        if a <= 0 or poly[d] != a:
            continue
        mid = poly[r]
        if any(poly[k] != 0 for k in range(d + 1) if k not in (0, r, d)):
            continue
        p = -mid - 2 * a
        if p <= 0 or a.denominator != 1 or p.denominator != 1:
            continue
        a, p = int(a), int(p)
        rest = RatPoly.one()
        for jdx, (q, m) in enumerate(factors):
            if jdx != idx:
                rest = rest * q ** m
        _, rest = rest.primitive()
        if epsilon == 1:
            if rest.degree != 0:
                continue
        else:
            want = RatPoly([1] + [0] * (r - 1) + [1]) ** 2  # (t^r + 1)^2
            _, want = want.primitive()
            if rest != want:
                continue
        return a, p, r, poly
    return None


def order_classify(
    S: SeifertMatrix,
    r_max: int = DEFAULT_R_MAX,
    tower_depth: int = DEFAULT_TOWER_DEPTH,
    tower_precision: int = 2,
) -> OrderClassification:
    """Order of the class in the limit group: decision tree.

    (i) a nonzero signature jump at a unit-circle root forces infinite
    order (unit-length roots always admit compatible root systems);
    (ii) if some delta(t^r) is free of reciprocal factors the class
    dies at complexity r; (iii)/(iv) the quadratic torsion families are
    recognized and certified through the norm-residue certificates;
    (v) an odd rank parity on a factor that stays reciprocal within
    the search budget pins the order to 2 or 4 without deciding which;
    (vi) anything else is honestly unknown.

    When a family matches with a valid stability certificate the
    trivially-split search is skipped: the certificate already proves
    every substitution keeps the factor irreducible and reciprocal.
    """
    delta = alexander(S)
    jumps = signature_jumps(S)
    for j in jumps:
        if j.jump != 0:
            return OrderClassification("infinite", witness_jump=j)

    factors = factor_poly(delta.core).factors
    fam = _match_torsion_family(factors, S.epsilon)
    if fam is not None:
        a, p, r, poly = fam
        stability = stable_irreducible_family(a, p)
        if stability.stable:
            cert_stab = StableCertificate("stably_irreducible", a=a, p=p)
            if p == 1 and a % 4 == 1:
                cert = order2_certificate(a)
                if cert.verdict == "discriminant_vanishes":
                    return OrderClassification(
                        "order2", family=(a, p, r), certificate=cert, stability=cert_stab
                    )
            elif p != a and is_prime(p) and p % 4 == 3:
                tower = order4_tower(a, p, tower_depth, tower_precision)
                if tower.verdict == "nontrivial_discriminant":
                    return OrderClassification(
                        "order4",
                        family=(a, p, r),
                        certificate=tower,
                        stability=cert_stab,
                        verified_depth=tower_depth,
                        note="discriminant certified to 2-power depth %d; odd cofactors "
                        "follow by the parity argument" % tower_depth,
                    )

    r = stably_nonreciprocal_search(delta, r_max)
    if r is not None:
        return OrderClassification("trivial", r=r, stability=StableCertificate("trivially_split", r=r))

    for poly, mult in factors:
        if mult % 2 == 0 or not is_reciprocal_poly(poly):
            continue
        if S.epsilon == -1 and poly in (T_PLUS_ONE, T_MINUS_ONE):
            continue  # invariants trivial by convention
        lam = LaurentPolyQ(poly)
        if stably_nonreciprocal_search(lam, r_max) is None:
            return OrderClassification(
                "torsion_unknown",
                witness_factor=poly,
                stability=StableCertificate("undetermined", searched_up_to=r_max),
                note="odd rank parity on a factor that stays reciprocal up to r_max",
            )
    return OrderClassification("unknown", stability=StableCertificate("undetermined", searched_up_to=r_max))
