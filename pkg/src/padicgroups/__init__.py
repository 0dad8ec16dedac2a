"""Exact p-adic quadratic spaces and the group algebra built on them."""

from .padic import (
    PadicNumber,
    Phase,
    SquareClass,
    arith,
    get_precision,
    hilbert_symbol,
    is_square,
    psi,
    set_precision,
    sqrt,
    square_class,
    square_class_ball,
)

__all__ = [
    "PadicNumber",
    "Phase",
    "SquareClass",
    "arith",
    "get_precision",
    "hilbert_symbol",
    "is_square",
    "psi",
    "set_precision",
    "sqrt",
    "square_class",
    "square_class_ball",
]
