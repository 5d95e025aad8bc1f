"""Exact pseudodifferential and fractional operator calculus.

Scalars are exact rationals; series carry explicit truncation windows and
every decision procedure answers yes, no (with a witness) or unknown at the
working precision.
"""

from .errors import *  # noqa: F401,F403
from .series import (
    INF,
    Certificate,
    Q,
    Verdict,
    XSeries,
    ZSeries,
    series_derive,
    series_invert,
    series_mul,
)
from .linalg import bareiss_echelon, kernel_basis, rank as matrix_rank, solve
from .polys import RatPoly2
from .psdo import (
    PsDO,
    commutator,
    diff_part,
    int_part,
    is_normalized,
    lax_bracket,
    psdo_adjoint,
    psdo_invert,
    psdo_mul,
    schur_dress,
)
from .grassmannian import (
    Plane,
    as_differential,
    certify_differential,
    clear_tails,
    conjugate_spectral,
    dressing_from_plane,
    example_4_5,
    field_membership,
    frac_certify,
    plane_from_dressing,
    quotient_dim,
    rank,
    right_act,
    spectral_algebra,
    spectral_membership,
    spectral_polynomials,
    standard_plane,
)
from .fractional import (
    FracOp,
    common_denominators,
    dord,
    frac_make,
    is_differential,
    ore_solve,
    ore_solve_left,
    right_divide,
    right_gcd,
)
from .relations import BCReport, bc_relation, order_bounds, span_dim
from .krichever import (
    CurveData,
    EllipticPlane,
    ZOperator,
    conjugated_pair,
    elliptic_plane,
    elliptic_relation,
    op_rational_section,
    rank1_verify,
    section_check,
    weierstrass_p,
    weierstrass_residual,
    z_apply,
)
from .textio import (
    format_frac,
    format_psdo,
    format_ratpoly2,
    format_xseries,
    format_zseries,
    parse_frac,
    parse_psdo,
    parse_ratpoly2,
    parse_xseries,
    parse_zseries,
)

__version__ = "0.1.0"
