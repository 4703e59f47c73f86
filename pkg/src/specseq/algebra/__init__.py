"""Exact scalars, variable tables, polynomials and their text form."""

from .parsing import format_polynomial, parse_polynomial, parse_scalar
from .polynomial import (
    PARAM,
    STATE,
    Polynomial,
    VariableKind,
    VariableTable,
    monomial_basis,
    monomial_key,
)
from .scalars import GaussianRational, ParamSpace, Scalar, rational_sqrt, to_fraction

__all__ = [
    "GaussianRational",
    "ParamSpace",
    "Scalar",
    "rational_sqrt",
    "to_fraction",
    "VariableKind",
    "VariableTable",
    "Polynomial",
    "monomial_basis",
    "monomial_key",
    "STATE",
    "PARAM",
    "parse_polynomial",
    "parse_scalar",
    "format_polynomial",
]
