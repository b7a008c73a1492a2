"""Exact scalars, matrices, subspaces and polynomials."""

from .fields import (
    DEFAULT_PRIME,
    GF,
    QQ,
    FieldMismatchError,
    PrimeField,
    RationalField,
    parse_field,
    parse_rational,
    random_prime,
)
from .groebner import BudgetExceededError, buchberger, in_ideal, is_groebner, reduce
from .matrix import Matrix, bareiss_rank, kernel_basis, rank
from .poly import MissingAssignmentError, MultiPoly, poly_eval
from .subspace import (
    DimensionMismatchError,
    contains,
    equal,
    intersect,
    quotient_dim,
    span_basis,
    subspace_ops,
    subspace_sum,
)

__all__ = [
    "DEFAULT_PRIME", "GF", "QQ", "FieldMismatchError", "PrimeField", "RationalField",
    "parse_field", "parse_rational", "random_prime",
    "BudgetExceededError", "buchberger", "in_ideal", "is_groebner", "reduce",
    "Matrix", "bareiss_rank", "kernel_basis", "rank",
    "MissingAssignmentError", "MultiPoly", "poly_eval",
    "DimensionMismatchError", "contains", "equal", "intersect", "quotient_dim",
    "span_basis", "subspace_ops", "subspace_sum",
]
