"""Two-parameter (relative) complexity measures, (alpha, beta) maps and
derivative curves of Rényi entropy and divergence in the order."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, MeasureError
from .info_measures import (
    _divergence_terms,
    _entropy_terms,
    _scaled_cgf_slope,
    as_dist,
    renyi_divergence,
    renyi_entropy,
)


@dataclass(frozen=True, eq=False)
class ComplexityMap:
    """Values on an (alpha, beta) grid; ``values[i, j]`` belongs to
    ``(alpha_grid[i], beta_grid[j])``. Undefined cells hold NaN."""

    alpha_grid: np.ndarray
    beta_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha_grid, dtype=float)
        b = np.asarray(self.beta_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (a.size, b.size):
            raise DomainError(
                f"values shape {v.shape} does not match grids ({a.size}, {b.size})"
            )
        object.__setattr__(self, "alpha_grid", a)
        object.__setattr__(self, "beta_grid", b)
        object.__setattr__(self, "values", v)

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)


def default_order_grid() -> np.ndarray:
    """alpha, beta in [0, 10] with step 0.1."""
    return np.round(np.arange(0, 101) * 0.1, 10)


def c_lmc(p) -> float:
    """LMC complexity: Shannon entropy times quadratic disequilibrium."""
    p = as_dist(p)
    w = p.weights
    diseq = float(np.sum((w - 1.0 / p.n) ** 2))
    return renyi_entropy(p, 1.0) * diseq


def generalized_complexity(p, alpha: float, beta: float) -> float:
    """``exp(H_alpha(p) - H_beta(p))``, i.e. the ratio DI_alpha / DI_beta.

    ``C_{1,2}`` is the exponential LMC complexity.
    """
    if alpha == beta:
        # still validate the order against the support
        renyi_entropy(p, alpha)
        return 1.0
    return math.exp(renyi_entropy(p, alpha) - renyi_entropy(p, beta))


def generalized_relative_complexity(p1, p2, alpha: float, beta: float) -> float:
    if alpha == beta:
        renyi_divergence(p1, p2, alpha)
        return 1.0
    return math.exp(renyi_divergence(p1, p2, alpha) - renyi_divergence(p1, p2, beta))


def relative_increment(p, alpha: float, beta: float) -> float:
    """Slope ``(H_alpha - H_beta)/(alpha - beta)``; never positive.

    The diagonal ``alpha == beta`` is the entropy derivative and is
    rejected here.
    """
    if alpha == beta:
        raise DomainError("alpha == beta: use entropy_derivative for the diagonal")
    return (renyi_entropy(p, alpha) - renyi_entropy(p, beta)) / (alpha - beta)


def relative_divergence_increment(p1, p2, alpha: float, beta: float) -> float:
    if alpha == beta:
        raise DomainError("alpha == beta: use divergence_derivative for the diagonal")
    return (renyi_divergence(p1, p2, alpha) - renyi_divergence(p1, p2, beta)) / (
        alpha - beta
    )


def entropy_derivative(p, q: float) -> float:
    """Analytic derivative of ``H_q(p)`` with respect to ``q``.

    With ``S(q) = sum p_i^q`` this is ``ln S/(1-q)^2 + S'/((1-q) S)``; close to
    ``q = 1`` a cumulant expansion of ``ln p`` replaces the cancelling form
    (at ``q = 1`` it equals ``-Var_p(ln p)/2``).
    """
    w, L, t = _entropy_terms(as_dist(p), q)
    return -_scaled_cgf_slope(w, L, t)


def divergence_derivative(p1, p2, q: float) -> float:
    """Analytic derivative of the Rényi divergence in ``q``; never negative."""
    w, L, t = _divergence_terms(as_dist(p1), as_dist(p2), q)
    return _scaled_cgf_slope(w, L, t)


def _fill_map(cell: Callable[[float, float], float], alpha_grid, beta_grid):
    a = np.asarray(alpha_grid, dtype=float).reshape(-1)
    b = np.asarray(beta_grid, dtype=float).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise DomainError("order grids must be non-empty")
    values = np.full((a.size, b.size), np.nan)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            try:
                values[i, j] = cell(float(x), float(y))
            except MeasureError:
                pass
    return ComplexityMap(a, b, values)


def complexity_map(p, alpha_grid: Sequence[float], beta_grid: Sequence[float]) -> ComplexityMap:
    """``C_{alpha,beta}(p)`` over a grid. Cells where an order is undefined
    for ``p`` are NaN rather than aborting the map."""
    p = as_dist(p)
    return _fill_map(lambda a, b: generalized_complexity(p, a, b), alpha_grid, beta_grid)


def relative_complexity_map(p1, p2, alpha_grid, beta_grid) -> ComplexityMap:
    p1, p2 = as_dist(p1), as_dist(p2)
    return _fill_map(
        lambda a, b: generalized_relative_complexity(p1, p2, a, b), alpha_grid, beta_grid
    )


def increment_map(p, alpha_grid, beta_grid, negate: bool = False) -> ComplexityMap:
    """Relative increments of ``H_q(p)`` with the derivative on the diagonal.

    ``negate`` flips the sign for display, so the (non-positive) entropy
    slopes read as positive numbers.
    """
    p = as_dist(p)
    sign = -1.0 if negate else 1.0

    def cell(a, b):
        if a == b:
            return sign * entropy_derivative(p, a)
        return sign * relative_increment(p, a, b)

    return _fill_map(cell, alpha_grid, beta_grid)


def derivative_curve(p, q_grid, negate: bool = False) -> np.ndarray:
    """``H'_q(p)`` over ``q_grid``; NaN where the order is undefined."""
    p = as_dist(p)
    out = np.full(len(q_grid), np.nan)
    for i, q in enumerate(q_grid):
        try:
            out[i] = entropy_derivative(p, float(q))
        except MeasureError:
            pass
    return -out if negate else out
