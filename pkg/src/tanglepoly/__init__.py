"""tanglepoly: exact invariant of oriented colored classical and singular links.

The invariant takes values in Q(x, t, w) and is computed either by a
state-sum over colored 4-valent planar graphs or by a descending-diagram
skein recursion; on single-colored links it specializes the HOMFLY-PT
polynomial under l = i/(w*sqrt(t)), m = i*(1/sqrt(t) - sqrt(t)).
"""

from .algebra import (
    GaussianRational,
    Polynomial,
    RationalFunction,
    named_constant,
    parse_rational_function,
    rf,
    rf_arith,
    rf_equals,
    rf_is_t_expressible,
    rf_substitute,
)

__all__ = [
    "GaussianRational",
    "Polynomial",
    "RationalFunction",
    "named_constant",
    "parse_rational_function",
    "rf",
    "rf_arith",
    "rf_equals",
    "rf_is_t_expressible",
    "rf_substitute",
]

__version__ = "0.1.0"
