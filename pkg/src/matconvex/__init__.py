"""Divided differences, Pick/Kraus criteria and witnesses for matrix convexity of fixed order.

Modules
-------
funcmodel   closed-form function models with exact Taylor coefficients
divdiff     confluent divided differences, Hermite quadrature, mean bounds
specmat     Pick, Kraus and derivative matrices with definiteness verdicts
classify    seeded sampling of the matrix criteria and the 2-convex audit
gaps        gap polynomials between consecutive orders
transforms  the T, S and difference-quotient transforms and their inverses
oracle      Hermitian-pair witness search for the defining inequalities
verify      acceptance suites shared by the CLI and the tests
"""
from .classify import ClassificationReport, HypothesisError, SamplerConfig, classify
from .divdiff import divided_difference, precision
from .funcmodel import DomainError, FunctionModel, Interval, parse_function, parse_interval
from .gaps import build_gap_polynomial
from .oracle import witness_search
from .specmat import kraus_matrix, pick_matrix

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport", "DomainError", "FunctionModel", "HypothesisError", "Interval",
    "SamplerConfig", "build_gap_polynomial", "classify", "divided_difference", "kraus_matrix",
    "parse_function", "parse_interval", "pick_matrix", "precision", "witness_search", "__version__",
]
