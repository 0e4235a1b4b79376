"""Exact arithmetic over the rationals."""

from fractions import Fraction

from .hompoly import X0, X1, X2, HomPoly3, PlaneOpen, ProjFunc, strip_factors
from .linalg import Mat2, SingularMatrixError, nullspace, rank, rat_mat, row_reduce
from .poly import (
    UniPoly,
    format_rational,
    poly_ext_gcd,
    poly_gcd,
    poly_gcd_many,
    poly_lcm,
    rational_sqrt,
    sqrt_poly,
    squarefree_part,
)
from .ratfunc import INF, DistinguishedOpen, RatFunc, lcd_x, separate, valuation_at_zero

Rational = Fraction


def restrict_to_line(h: HomPoly3, P, Q) -> UniPoly:
    """h(P + t*Q) as a polynomial in t."""
    return h.restrict_to_line(P, Q)


__all__ = [
    "Rational", "UniPoly", "RatFunc", "HomPoly3", "ProjFunc", "PlaneOpen", "Mat2", "SingularMatrixError",
    "DistinguishedOpen", "INF", "X0", "X1", "X2",
    "format_rational", "poly_ext_gcd", "poly_gcd", "poly_gcd_many", "poly_lcm",
    "rational_sqrt", "sqrt_poly", "squarefree_part", "lcd_x", "separate",
    "valuation_at_zero", "nullspace", "rank", "rat_mat", "row_reduce",
    "restrict_to_line", "strip_factors",
]
