"""Exact computations on piecewise-linear directed spaces.

The package decides directedness of PL paths against presented directed
spaces, computes saturations, and builds products, gluings, cylinders and
reversors, all over the exact field Q(sqrt 2).
"""

from .exactnum import ONE, SQRT2, ZERO, Rational, Scalar, compare, parse_scalar

__all__ = [
    "Rational",
    "Scalar",
    "compare",
    "parse_scalar",
    "ZERO",
    "ONE",
    "SQRT2",
]
