"""Exact epsilon-multiplicity engine for monomial graded pairs."""

from .monomials import MonomialIdeal, parse_ideal, parse_monomial
from .pairs import GradedPair, make_pair

__version__ = "0.1.0"

__all__ = [
    "GradedPair",
    "MonomialIdeal",
    "make_pair",
    "parse_ideal",
    "parse_monomial",
    "__version__",
]
