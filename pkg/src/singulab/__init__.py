"""Exact Milnor numbers of polynomial germs and sampled tests of their invariance."""

from .base import (
    INFINITE,
    DomainError,
    PreconditionError,
    ResourceLimitError,
    SingulabError,
    VariableCountError,
    is_infinite,
)
from .germ import alpha_derivative, alpha_directional_derivative, initial_part, order_at
from .homogeneous import (
    determinacy_bound,
    gradient_nonvanishing_scan,
    homogeneity_report,
    homogeneous_milnor_formula,
    jet,
    rescaled_member,
    RescaledFamily,
    verify_milnor_equals_formula,
)
from .local_algebra import (
    Ideal,
    jacobian_ideal,
    milnor_number,
    milnor_number_oracle,
    mora_normal_form,
    standard_basis,
    truncated_quotient_dimension,
)
from .parser import ParseError, parse_map, parse_polynomial
from .poly import ANTI_GRADED_LEX, LocalOrder, Polynomial, evaluate, mono_cmp

__version__ = "0.1.0"

__all__ = [
    "ANTI_GRADED_LEX", "INFINITE", "DomainError", "Ideal", "LocalOrder", "ParseError", "Polynomial",
    "PreconditionError", "RescaledFamily", "ResourceLimitError", "SingulabError", "VariableCountError",
    "alpha_derivative", "alpha_directional_derivative", "determinacy_bound", "evaluate",
    "gradient_nonvanishing_scan", "homogeneity_report", "homogeneous_milnor_formula", "initial_part",
    "is_infinite", "jacobian_ideal", "jet", "milnor_number", "milnor_number_oracle", "mono_cmp",
    "mora_normal_form", "order_at", "parse_map", "parse_polynomial", "rescaled_member", "standard_basis",
    "truncated_quotient_dimension", "verify_milnor_equals_formula",
]
