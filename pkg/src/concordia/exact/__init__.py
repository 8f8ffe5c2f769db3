"""Exact arithmetic substrate: rationals, polynomials, matrices,
factorization over Q, congruence diagonalization, and real-root
isolation."""

from .poly import ComplexRat, LaurentPolyQ, Rat, RatPoly, format_poly
from .linalg import (
    MatQ,
    diagonalize_sym,
    poly_det,
    poly_det_interp,
    poly_mat_adjugate,
    signature_counts,
    sym_signature,
)
from .factor import Factorization, factor_poly, is_prime, is_square_rat, sqrt_rat
from .roots import RootInterval, count_roots, isolate_real_roots, refine_interval, sturm_chain

__all__ = [
    "ComplexRat",
    "Factorization",
    "LaurentPolyQ",
    "MatQ",
    "Rat",
    "RatPoly",
    "RootInterval",
    "count_roots",
    "diagonalize_sym",
    "factor_poly",
    "format_poly",
    "is_prime",
    "is_square_rat",
    "isolate_real_roots",
    "poly_det",
    "poly_det_interp",
    "poly_mat_adjugate",
    "refine_interval",
    "signature_counts",
    "sqrt_rat",
    "sturm_chain",
    "sym_signature",
]
