"""Totally positive bases, corner-cutting factorizations and extremal spectral bounds."""

from .bases import (DP, Bernstein, BSpline, CosineEven, RationalBasis, SaidBall, TrigPoly,
                    evaluate, rationalize)
from .collocation import collocation_matrix, is_stochastic, uniform_interior_nodes
from .conversion import all_positive, convert_weights
from .matrix import Matrix
from .numerics import PrecisionConfig
from .spectral import eigenvalues, singular_values, summarize
from .tpcore import (BidiagonalFactorization, ElementaryFactor, compose, elementary_matrix,
                     factorize, is_tp)

__version__ = "0.1.0"

__all__ = [
    "Bernstein", "SaidBall", "DP", "BSpline", "CosineEven", "TrigPoly", "RationalBasis",
    "evaluate", "rationalize", "collocation_matrix", "is_stochastic", "uniform_interior_nodes",
    "convert_weights", "all_positive", "Matrix", "PrecisionConfig", "eigenvalues",
    "singular_values", "summarize", "BidiagonalFactorization", "ElementaryFactor", "compose",
    "elementary_matrix", "factorize", "is_tp",
]
