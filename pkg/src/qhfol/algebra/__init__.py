"""Exact-arithmetic kernel."""

from fractions import Fraction as Rat

from .algnum import AlgPoint, NFElement, alg_refine, isolate_roots, rational_point
from .bipoly import X, Y, BiPoly, divexact, divides, divmod_bipoly, gcd_bipoly, normalize, poly_arith
from .jet import Jet1

__all__ = [
    "Rat",
    "AlgPoint",
    "NFElement",
    "alg_refine",
    "isolate_roots",
    "rational_point",
    "BiPoly",
    "X",
    "Y",
    "divexact",
    "divides",
    "divmod_bipoly",
    "gcd_bipoly",
    "normalize",
    "poly_arith",
    "Jet1",
]
