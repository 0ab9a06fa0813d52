"""Potentials V(x) with exact derivatives.

Force evaluation on particle ensembles happens every RK4 stage, so each
variant exposes vectorized ``value`` and ``gradient`` callables instead of
going through a generic expression tree when a closed form is available.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .expressions import FunctionExpr, parse_expression

__all__ = ["Potential", "Zero", "Linear", "Quadratic", "Expr", "potential_from_text"]


class Potential:
    """Base class; concrete variants implement value/gradient."""

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def max_abs_gradient(self, x_min: float, x_max: float, samples: int = 10_000) -> float:
        xs = np.linspace(x_min, x_max, samples)
        return float(np.max(np.abs(self.gradient(xs))))

    def max_abs_value(self, x_min: float, x_max: float, samples: int = 10_000) -> float:
        xs = np.linspace(x_min, x_max, samples)
        return float(np.max(np.abs(self.value(xs))))

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Zero(Potential):
    def value(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def gradient(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def describe(self) -> str:
        return "0"


@dataclass(frozen=True)
class Linear(Potential):
    """V(x) = a*x."""

    a: float = 1.0

    def value(self, x):
        return self.a * np.asarray(x, dtype=float)

    def gradient(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.a)

    def describe(self) -> str:
        return f"{self.a}*x" if self.a != 1.0 else "x"


@dataclass(frozen=True)
class Quadratic(Potential):
    """V(x) = c*x^2/2."""

    c: float = 1.0

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.c * x * x

    def gradient(self, x):
        return self.c * np.asarray(x, dtype=float)

    def describe(self) -> str:
        return f"{self.c}*x^2/2"


class Expr(Potential):
    """V given as a closed-form expression; V' is its symbolic derivative."""

    def __init__(self, expr: FunctionExpr):
        self.expr = expr
        self._deriv = expr.derivative()

    def value(self, x):
        return self.expr(x)

    def gradient(self, x):
        return self._deriv(x)

    def describe(self) -> str:
        return str(self.expr)

    def __eq__(self, other):
        return isinstance(other, Expr) and self.expr == other.expr

    def __hash__(self):
        return hash(("Expr", self.expr))


def potential_from_text(text: str) -> Potential:
    """Build a Potential from expression text, preferring typed variants.

    "0" maps to Zero and "x" to Linear so the fast paths stay in use for
    the common cases; anything else becomes an Expr potential.
    """
    stripped = text.strip()
    if stripped in ("0", "0.0"):
        return Zero()
    if stripped == "x":
        return Linear(1.0)
    try:
        return Expr(parse_expression(stripped))
    except UsageError:
        raise
