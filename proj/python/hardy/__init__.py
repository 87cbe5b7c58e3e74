"""Kernels, dual data and duality checks for Hardy spaces with a Hankel metric and point masses."""

from ._core import (
    Dual,
    HardyError,
    IdentityReport,
    InvalidArgument,
    Masses,
    MassConvention,
    NotPositiveDefinite,
    OrderViolation,
    Outer,
    SandwichReport,
    Space,
    Symbol,
    SzegoReport,
    SzegoViolation,
    TheoremReport,
    Tolerances,
    asymptotic_sweep,
    build_dual,
    build_outer,
    duality_identity,
    gram_analytic,
    gram_laurent,
    kernel_at_point,
    kernel_value_at_origin,
    orthonormal_gram,
    sandwich_check,
    tau_residuals,
    theorem_check,
    validate_szego,
)

__version__ = "1.0.0"
