"""Exact-arithmetic invariants of rational Seifert matrices.

The package computes the algebraic concordance data of square rational
matrices carrying a sign convention epsilon = +-1: Alexander
polynomials and their factorizations, cabling, unit-circle signature
functions and their jumps, the normalized signature integral, Hilbert
symbol certificates over real quadratic fields, and a classifier for
the order (1, 2, 4, or infinite) of the class in the limit of the
matrix cobordism groups under cabling.
"""

from .errors import DomainError
from .exact import (
    ComplexRat,
    Factorization,
    LaurentPolyQ,
    MatQ,
    Rat,
    RatPoly,
    diagonalize_sym,
    factor_poly,
    is_square_rat,
    isolate_real_roots,
    poly_det,
)
from .seifert import (
    BlanchfieldForm,
    SeifertMatrix,
    SurgeryData,
    ValidityReport,
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
from .witt import (
    CircleRoot,
    OrderClassification,
    ReciprocalFactor,
    RhoInterval,
    SignatureJump,
    StableCertificate,
    WittReport,
    circle_signature,
    exponent_mod2,
    order_classify,
    reciprocal_split,
    rho_abelian,
    signature_jumps,
    stable_irreducible_family,
    stably_nonreciprocal_search,
    witt_report,
)
from .numtheory import (
    INF,
    Order2Certificate,
    Order4Tower,
    PadicInt,
    QuadElt,
    QuadField,
    QuadPrime,
    TowerState,
    hilbert_product_check,
    hilbert_q,
    hilbert_quadfield_odd,
    minus_one_norm_test,
    order2_certificate,
    order4_tower,
    padic_sqrt,
    quad_prime_data,
    quad_valuation,
)

__version__ = "0.1.0"
