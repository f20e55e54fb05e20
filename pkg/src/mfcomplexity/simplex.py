"""Measure fields on a regular grid of the ternary simplex, and escort
(power-distortion) paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

import numpy as np

from . import complexity as cx
from . import info_measures as im
from .errors import DegenerateSupportError, DomainError, MeasureError
from .info_measures import ProbDist, as_dist


@dataclass(frozen=True, eq=False)
class SimplexGrid:
    """All barycentric points ``(i, j, k) / R`` with ``i + j + k = R``,
    in lexicographic order of ``(i, j, k)``."""

    resolution: int
    counts: np.ndarray  # (npoints, 3) integer numerators

    @property
    def points(self) -> np.ndarray:
        return self.counts / float(self.resolution)

    def __len__(self) -> int:
        return len(self.counts)


def simplex_grid(resolution: int) -> SimplexGrid:
    R = int(resolution)
    if R < 1 or R != resolution:
        raise DomainError(f"resolution must be a positive integer, got {resolution!r}")
    rows = [(i, j, R - i - j) for i in range(R + 1) for j in range(R - i + 1)]
    counts = np.array(rows, dtype=np.int64)
    counts.flags.writeable = False
    return SimplexGrid(R, counts)


@dataclass(frozen=True, eq=False)
class FieldResult:
    grid: SimplexGrid
    values: np.ndarray  # NaN marks points where the measure is undefined
    measure: str = ""


# name -> (parameter names, needs reference, evaluator)
_MEASURES: Dict[str, tuple] = {
    "renyi_entropy": (("q",), False, lambda p, r, k: im.renyi_entropy(p, k["q"])),
    "diversity_index": (("q",), False, lambda p, r, k: im.diversity_index(p, k["q"])),
    "information_difference": (
        ("q",),
        False,
        lambda p, r, k: im.information_difference(p, k["q"]),
    ),
    "c_lmc": ((), False, lambda p, r, k: cx.c_lmc(p)),
    "generalized_complexity": (
        ("alpha", "beta"),
        False,
        lambda p, r, k: cx.generalized_complexity(p, k["alpha"], k["beta"]),
    ),
    "generalized_relative_complexity": (
        ("alpha", "beta"),
        True,
        lambda p, r, k: cx.generalized_relative_complexity(p, r, k["alpha"], k["beta"]),
    ),
    "entropy_derivative": (("q",), False, lambda p, r, k: cx.entropy_derivative(p, k["q"])),
}

MEASURE_NAMES = tuple(sorted(_MEASURES)) + ("shannon",)
RELATIVE_MEASURES = frozenset(n for n, spec in _MEASURES.items() if spec[1])


def measure_parameters(measure: str) -> tuple:
    if measure == "shannon":
        return ()
    try:
        return _MEASURES[measure][0]
    except KeyError:
        raise DomainError(
            f"unknown measure {measure!r}; valid names: {', '.join(MEASURE_NAMES)}"
        ) from None


def _resolve(measure: str, params: Optional[dict], reference):
    params = dict(params or {})
    if measure == "shannon":
        measure, params = "renyi_entropy", {"q": 1.0}
    names = measure_parameters(measure)
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError(f"measure {measure!r} needs parameters {missing}")
    _, needs_ref, fn = _MEASURES[measure]
    if needs_ref and reference is None:
        raise DomainError(f"measure {measure!r} needs a reference distribution")
    kw = {n: float(params[n]) for n in names}
    return fn, kw, (as_dist(reference) if needs_ref else None)


def evaluate_point(p, measure: str, params: Optional[dict] = None, reference=None) -> float:
    """Value of a named measure at a single distribution."""
    fn, kw, ref = _resolve(measure, params, reference)
    return fn(as_dist(p), ref, kw)


def evaluate_field(
    grid: SimplexGrid, measure: str, params: Optional[dict] = None, reference=None
) -> FieldResult:
    """Evaluate ``measure`` at every grid point.

    Points where the measure is undefined (an order <= 0 on a boundary
    point, or a divergence without absolute continuity) are NaN.
    """
    fn, kw, ref = _resolve(measure, params, reference)
    values = np.empty(len(grid))
    for i, p in enumerate(grid.points):
        try:
            values[i] = fn(ProbDist(p), ref, kw)
        except MeasureError:
            values[i] = np.nan
    values.flags.writeable = False
    return FieldResult(grid, values, measure)


def distortion_path(p0, q_schedule: Iterable[float]) -> List[ProbDist]:
    """Escort distributions of ``p0`` along a monotone order schedule that
    starts at 1 (the undistorted distribution)."""
    p0 = as_dist(p0)
    qs = [float(q) for q in q_schedule]
    if not qs or qs[0] != 1.0:
        raise DomainError("the order schedule must start at 1")
    steps = np.diff(qs)
    if not (np.all(steps >= 0) or np.all(steps <= 0)):
        raise DomainError("the order schedule must be monotone")
    if min(qs) <= 0 and not np.all(p0.support):
        raise DegenerateSupportError("orders <= 0 need a distribution without zeros")
    return [im.escort_distribution(p0, q) for q in qs]
