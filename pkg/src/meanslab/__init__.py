"""Bivariate means, their stable evaluation, and numerical checks of inequalities between them."""

from __future__ import annotations

from .errors import (
    DegenerateInputError,
    DomainError,
    InvalidArgumentError,
    MeansError,
    NumericFailure,
    ParseError,
)
from .expr import eval_expression, parse_expression, render
from .kinds import A, G, H, I, L, P, X, Y, Heronian, MeanKind, MeanTag, MeanValue, PositivePair, Power  # noqa: E741
from .means import compose_mean, eval_mean, heronian_mean, mean, power_mean

__version__ = "0.1.0"

__all__ = [
    "A",
    "G",
    "H",
    "I",
    "L",
    "P",
    "X",
    "Y",
    "Heronian",
    "MeanKind",
    "MeanTag",
    "MeanValue",
    "PositivePair",
    "Power",
    "compose_mean",
    "eval_expression",
    "eval_mean",
    "heronian_mean",
    "mean",
    "parse_expression",
    "power_mean",
    "render",
    "DegenerateInputError",
    "DomainError",
    "InvalidArgumentError",
    "MeansError",
    "NumericFailure",
    "ParseError",
    "__version__",
]
