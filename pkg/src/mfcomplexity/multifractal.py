"""Box-counting estimates of generalized (relative) Rényi dimensions.

The limit ``eps -> 0`` is estimated as an OLS slope over a window of scales:

* ordinary:  ``(1/(q-1)) ln sum m^q`` (``sum m ln m`` at q = 1) against ``ln eps``;
* relative:  ``(1/(q-1)) ln sum m1^q m2^(1-q)`` (KL at q = 1) against ``ln(1/eps)``.

With that orientation ordinary curves are non-increasing in q and relative
curves non-decreasing, and the relative D_1 is the (non-negative) q -> 1
limit of the general formula.

Binomial (more generally b-ary) multiplicative cascades have closed-form
dimensions and serve as estimator oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .complexity import ComplexityMap
from .errors import (
    DegenerateSupportError,
    DomainError,
    FitError,
    InfiniteDivergenceError,
    PartitionMismatchError,
)
from .info_measures import QTOL, ProbDist, renyi_divergence, renyi_entropy

MONOTONE_SLACK = 1e-3
EPS_RTOL = 1e-12


def default_q_grid() -> np.ndarray:
    """-10 to 10 in steps of 0.25."""
    return np.arange(-40, 41) * 0.25


def dyadic_levels(j_min: int = 3, j_max: int = 11) -> List[int]:
    if j_max - j_min < 2:
        raise DomainError("a scale window needs at least 3 levels")
    return list(range(j_min, j_max + 1))


@dataclass(frozen=True, eq=False)
class PartitionDistribution:
    """Masses of the occupied boxes of width ``epsilon``.

    ``boxes`` holds the integer lattice index of each mass (default
    ``0..len-1``); relative statistics align two partitions on it.
    """

    epsilon: float
    masses: np.ndarray
    boxes: Optional[np.ndarray] = None

    def __post_init__(self):
        eps = float(self.epsilon)
        if not (eps > 0 and math.isfinite(eps)):
            raise DomainError(f"box width must be positive, got {self.epsilon!r}")
        ProbDist(self.masses)  # validation only: re-dividing would move exact ratios by an ulp
        m = np.array(self.masses, dtype=float).reshape(-1)
        m.flags.writeable = False
        if np.any(m <= 0):
            raise DomainError("only occupied (positive-mass) boxes belong in a partition")
        if self.boxes is None:
            boxes = np.arange(m.size, dtype=np.int64)
        else:
            boxes = np.asarray(self.boxes, dtype=np.int64).reshape(-1)
            if boxes.size != m.size:
                raise DomainError("boxes and masses differ in length")
            if np.any(np.diff(boxes) <= 0):
                raise DomainError("box indices must be strictly increasing")
        boxes.flags.writeable = False
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "boxes", boxes)

    def __len__(self):
        return self.masses.size


@dataclass(frozen=True, eq=False)
class ScaleSeries:
    """(ln eps, statistic) pairs, coarse to fine."""

    ln_epsilon: np.ndarray
    statistic: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.ln_epsilon, dtype=float).reshape(-1)
        y = np.asarray(self.statistic, dtype=float).reshape(-1)
        if x.size != y.size:
            raise FitError("abscissa and statistic lengths differ")
        if x.size < 3:
            raise FitError(f"need at least 3 scales, got {x.size}")
        if np.any(np.diff(x) >= 0):
            raise FitError("ln(epsilon) must be strictly decreasing (finer scales later)")
        object.__setattr__(self, "ln_epsilon", x)
        object.__setattr__(self, "statistic", y)


@dataclass(frozen=True, eq=False)
class DimensionCurve:
    q_grid: np.ndarray
    values: np.ndarray
    r_squared: np.ndarray
    relative: bool = False

    def __post_init__(self):
        q = np.asarray(self.q_grid, dtype=float).reshape(-1)
        v = np.asarray(self.values, dtype=float).reshape(-1)
        r = np.asarray(self.r_squared, dtype=float).reshape(-1)
        if not (q.size == v.size == r.size):
            raise DomainError("q grid, values and r_squared must align")
        object.__setattr__(self, "q_grid", q)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "r_squared", r)

    def is_monotone(self, slack: float = MONOTONE_SLACK) -> bool:
        """Non-increasing (ordinary) or non-decreasing (relative) in q."""
        order = np.argsort(self.q_grid)
        steps = np.diff(self.values[order])
        if self.relative:
            return bool(np.all(steps >= -slack))
        return bool(np.all(steps <= slack))

    def value_at(self, q: float) -> float:
        hit = np.flatnonzero(np.isclose(self.q_grid, q, rtol=0, atol=1e-12))
        if hit.size == 0:
            raise DomainError(f"order {q} is not on the curve's grid")
        return float(self.values[hit[0]])


@dataclass(frozen=True)
class CascadeSpec:
    """Deterministic multiplicative cascade: at every level each box splits
    into ``len(weights)`` children carrying the given mass fractions."""

    weights: Tuple[float, ...]
    depth: int

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) < 2 or any(x <= 0 for x in w):
            raise DomainError("cascade weights must be >= 2 strictly positive numbers")
        if abs(sum(w) - 1.0) > 1e-12:
            raise DomainError("cascade weights must sum to 1")
        if int(self.depth) < 1:
            raise DomainError("cascade depth must be >= 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "depth", int(self.depth))

    @property
    def branching(self) -> int:
        return len(self.weights)


# ---------------------------------------------------------------------------
# partition statistics and regression


def partition_sum_log(pd: PartitionDistribution, q: float) -> float:
    """``(1/(q-1)) ln sum m^q``, or ``sum m ln m`` at q = 1 (= -H_q)."""
    return -renyi_entropy(pd.masses, q)


def _aligned_masses(pd1: PartitionDistribution, pd2: PartitionDistribution):
    if abs(pd1.epsilon - pd2.epsilon) > EPS_RTOL * max(pd1.epsilon, pd2.epsilon):
        raise PartitionMismatchError(
            f"box widths differ: {pd1.epsilon!r} vs {pd2.epsilon!r}"
        )
    pos = np.searchsorted(pd2.boxes, pd1.boxes)
    pos_c = np.minimum(pos, pd2.boxes.size - 1)
    if np.any(pd2.boxes[pos_c] != pd1.boxes):
        raise InfiniteDivergenceError(
            "first measure charges boxes that are null for the reference"
        )
    m1 = np.zeros(pd2.boxes.size)
    m1[pos_c] = pd1.masses
    return m1, pd2.masses


def relative_partition_sum_log(
    pd1: PartitionDistribution, pd2: PartitionDistribution, q: float
) -> float:
    """``(1/(q-1)) ln sum m1^q m2^(1-q)`` over the reference's occupied boxes.

    At q = 1 this is ``sum m1 ln(m1/m2)``. For q <= 0 the first measure must
    charge every reference box, since ``m1^q`` diverges on empty ones.
    """
    m1, m2 = _aligned_masses(pd1, pd2)
    if q <= 0 and np.any(m1 == 0):
        raise DegenerateSupportError(
            f"order q={q} <= 0 needs the first measure on every reference box"
        )
    return renyi_divergence(m1, m2, q)


def fit_dimension(series: ScaleSeries, reciprocal: bool = False) -> Tuple[float, float]:
    """OLS slope of the statistic against ``ln eps`` (or ``ln(1/eps)`` when
    ``reciprocal``) and the coefficient of determination."""
    x = -series.ln_epsilon if reciprocal else series.ln_epsilon
    y = series.statistic
    if not np.all(np.isfinite(y)):
        raise FitError("non-finite statistic in scale series")
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    if sxx == 0:
        raise FitError("degenerate abscissa: all scales equal")
    yc = y - y.mean()
    slope = float(np.dot(xc, yc)) / sxx
    ss_tot = float(np.dot(yc, yc))
    resid = yc - slope * xc
    ss_res = float(np.dot(resid, resid))
    if ss_tot == 0 or ss_res <= 1e-30 * max(ss_tot, 1.0):
        r2 = 1.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return slope, r2


def _coarse_to_fine(pds: Sequence[PartitionDistribution]) -> List[PartitionDistribution]:
    pds = list(pds)
    if len(pds) < 3:
        raise FitError(f"need at least 3 scales, got {len(pds)}")
    return sorted(pds, key=lambda pd: -pd.epsilon)


def _as_q_grid(q_grid) -> np.ndarray:
    q = np.asarray(q_grid, dtype=float).reshape(-1)
    if q.size == 0 or not np.all(np.isfinite(q)):
        raise DomainError("q grid must be a non-empty set of finite orders")
    return q


def generalized_dimensions(pds: Sequence[PartitionDistribution], q_grid) -> DimensionCurve:
    """D_q for every order in ``q_grid`` from partitions at >= 3 scales."""
    pds = _coarse_to_fine(pds)
    q_grid = _as_q_grid(q_grid)
    x = np.log([pd.epsilon for pd in pds])
    values, r2 = np.empty(q_grid.size), np.empty(q_grid.size)
    for i, q in enumerate(q_grid):
        series = ScaleSeries(x, [partition_sum_log(pd, q) for pd in pds])
        values[i], r2[i] = fit_dimension(series)
    return DimensionCurve(q_grid, values, r2)


def _paired(pds1, pds2):
    pds1, pds2 = _coarse_to_fine(pds1), _coarse_to_fine(pds2)
    if len(pds1) != len(pds2):
        raise PartitionMismatchError("scale lists differ in length")
    return pds1, pds2


def generalized_relative_dimensions(pds1, pds2, q_grid) -> DimensionCurve:
    """D_q(mu1 || mu2) from scale-matched partitions of both measures."""
    pds1, pds2 = _paired(pds1, pds2)
    q_grid = _as_q_grid(q_grid)
    x = np.log([pd.epsilon for pd in pds2])
    values, r2 = np.empty(q_grid.size), np.empty(q_grid.size)
    for i, q in enumerate(q_grid):
        stat = [relative_partition_sum_log(a, b, q) for a, b in zip(pds1, pds2)]
        values[i], r2[i] = fit_dimension(ScaleSeries(x, stat), reciprocal=True)
    return DimensionCurve(q_grid, values, r2, relative=True)


def symmetrized_relative_dimensions(
    curve_pq: DimensionCurve, curve_qp: DimensionCurve
) -> DimensionCurve:
    """Pointwise arithmetic mean of the two directed curves."""
    if curve_pq.q_grid.shape != curve_qp.q_grid.shape or np.any(
        curve_pq.q_grid != curve_qp.q_grid
    ):
        raise PartitionMismatchError("curves are on different q grids")
    return DimensionCurve(
        curve_pq.q_grid,
        0.5 * (curve_pq.values + curve_qp.values),
        np.minimum(curve_pq.r_squared, curve_qp.r_squared),
        relative=curve_pq.relative and curve_qp.relative,
    )


# ---------------------------------------------------------------------------
# derivative curves and increment maps


def _uniform_step(q: np.ndarray) -> float:
    if q.size < 3:
        raise DomainError("derivatives need at least 3 orders")
    steps = np.diff(q)
    h = float(steps[0])
    if h <= 0 or np.any(np.abs(steps - h) > 1e-9 * abs(h)):
        raise DomainError("derivatives need an increasing, uniformly spaced q grid")
    return h


def dimension_derivative(curve: DimensionCurve) -> DimensionCurve:
    """Central differences inside the grid, one-sided at both ends."""
    h = _uniform_step(curve.q_grid)
    d = np.gradient(curve.values, h, edge_order=1)
    return DimensionCurve(curve.q_grid, d, curve.r_squared.copy(), curve.relative)


def dimension_increment_map(
    curve: DimensionCurve, alpha_grid, beta_grid, mode: str = "relative"
) -> ComplexityMap:
    """(alpha, beta) map of ``D_a - D_b`` (``mode='raw'``) or of
    ``(D_a - D_b)/(a - b)`` (``mode='relative'``, derivative on the diagonal).

    Orders off the curve's grid are linearly interpolated; orders outside
    its range give NaN cells.
    """
    if mode not in ("raw", "relative"):
        raise DomainError(f"mode must be 'raw' or 'relative', got {mode!r}")
    a = _as_q_grid(alpha_grid)
    b = _as_q_grid(beta_grid)
    q = curve.q_grid
    order = np.argsort(q)
    lo, hi = q[order[0]], q[order[-1]]

    def interp(values, x):
        out = np.interp(x, q[order], values[order])
        out[(x < lo) | (x > hi)] = np.nan
        return out

    da, db = interp(curve.values, a), interp(curve.values, b)
    diff = da[:, None] - db[None, :]
    if mode == "raw":
        return ComplexityMap(a, b, diff)
    gap = a[:, None] - b[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        values = diff / gap
    diag = gap == 0
    if np.any(diag):
        deriv = interp(dimension_derivative(curve).values, a)
        values[diag] = np.broadcast_to(deriv[:, None], values.shape)[diag]
    return ComplexityMap(a, b, values)


# ---------------------------------------------------------------------------
# limiting relation with the (relative) complexity measures


def complexity_dimension_link_check(
    pds: Sequence[PartitionDistribution], alpha: float, beta: float
) -> Tuple[float, float]:
    """Regress ``ln C_{a,b}(P_eps) = H_a - H_b`` on ``ln eps``.

    Returns ``(fitted exponent, D_b - D_a)``; both agree in the scaling limit.
    """
    pds = _coarse_to_fine(pds)
    x = np.log([pd.epsilon for pd in pds])
    y = [renyi_entropy(pd.masses, alpha) - renyi_entropy(pd.masses, beta) for pd in pds]
    exponent, _ = fit_dimension(ScaleSeries(x, y))
    curve = generalized_dimensions(pds, [alpha, beta])
    return exponent, float(curve.values[1] - curve.values[0])


def relative_complexity_dimension_link_check(pds1, pds2, alpha: float, beta: float):
    """Relative analogue: ``ln C_{a,b}(P1 || P2)`` against ``ln eps``."""
    pds1, pds2 = _paired(pds1, pds2)
    x = np.log([pd.epsilon for pd in pds2])
    y = [
        relative_partition_sum_log(a, b, alpha) - relative_partition_sum_log(a, b, beta)
        for a, b in zip(pds1, pds2)
    ]
    exponent, _ = fit_dimension(ScaleSeries(x, y))
    curve = generalized_relative_dimensions(pds1, pds2, [alpha, beta])
    return exponent, float(curve.values[1] - curve.values[0])


# ---------------------------------------------------------------------------
# box counting and cascade oracles


def box_counting(
    coords,
    epsilon: float,
    origin: float,
    weights=None,
    n_boxes: Optional[int] = None,
    min_count: int = 1,
) -> PartitionDistribution:
    """Partition of 1-D points into width-``epsilon`` boxes from ``origin``.

    Box masses are per-box sums of ``weights`` (unit weights: counts).
    Boxes holding fewer than ``min_count`` points are dropped before
    normalizing. Points at or beyond the last box edge fall in box
    ``n_boxes - 1`` when ``n_boxes`` is given.
    """
    x = np.asarray(coords, dtype=float).reshape(-1)
    if not epsilon > 0:
        raise DomainError("box width must be positive")
    if np.any(x < origin):
        raise DomainError("points lie before the lattice origin")
    idx = np.floor((x - origin) / epsilon).astype(np.int64)
    if n_boxes is not None:
        np.minimum(idx, n_boxes - 1, out=idx)
    w = np.ones(x.size) if weights is None else np.asarray(weights, dtype=float)
    boxes, inverse, counts = np.unique(idx, return_inverse=True, return_counts=True)
    mass = np.bincount(inverse, weights=w, minlength=boxes.size)
    keep = (counts >= min_count) & (mass > 0)
    if not np.any(keep):
        raise DomainError("no box passes the occupancy filter")
    mass = mass[keep]
    return PartitionDistribution(epsilon, mass / mass.sum(), boxes[keep])


def cascade_partition(spec: CascadeSpec, level: int) -> PartitionDistribution:
    """All ``b**level`` box masses of the cascade at ``level``, left to right."""
    if not 0 <= level <= spec.depth:
        raise DomainError(f"level {level} outside 0..{spec.depth}")
    w = np.asarray(spec.weights)
    masses = np.ones(1)
    for _ in range(level):
        masses = np.outer(masses, w).ravel()
    return PartitionDistribution(float(spec.branching) ** -level, masses)


def cascade_dimension_closed_form(spec: CascadeSpec, q: float) -> float:
    """``log_b(sum w^q)/(1-q)``, and ``-sum w log_b w`` at q = 1."""
    w = np.asarray(spec.weights)
    lb = math.log(spec.branching)
    if abs(q - 1.0) <= QTOL:
        return float(-np.dot(w, np.log(w))) / lb
    return math.log(float(np.sum(w ** q))) / lb / (1.0 - q)


def cascade_relative_dimension_closed_form(
    spec1: CascadeSpec, spec2: CascadeSpec, q: float
) -> float:
    """``log_b(sum w1^q w2^(1-q))/(q-1)``, and the KL rate at q = 1."""
    if spec1.branching != spec2.branching:
        raise PartitionMismatchError("cascades with different branching")
    w1, w2 = np.asarray(spec1.weights), np.asarray(spec2.weights)
    lb = math.log(spec1.branching)
    if abs(q - 1.0) <= QTOL:
        return float(np.dot(w1, np.log(w1 / w2))) / lb
    return math.log(float(np.sum(w1 ** q * w2 ** (1.0 - q)))) / lb / (q - 1.0)


def sample_cascade(spec: CascadeSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. points in [0, 1) drawn from the cascade measure.

    Each point descends ``depth`` levels choosing children with the cascade
    weights, then lands uniformly inside its leaf box.
    """
    b = spec.branching
    digits = rng.choice(b, size=(n, spec.depth), p=np.asarray(spec.weights))
    scale = float(b) ** -np.arange(1, spec.depth + 1)
    left = digits @ scale
    return left + rng.random(n) * float(b) ** -spec.depth
