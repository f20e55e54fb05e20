"""Continuous-distribution measures from already-binned densities.

A binned density carries bin probabilities and widths. For equal widths
``delta`` the continuous Rényi entropy at unit-scale resolution is the
discrete entropy plus ``ln delta``; variable widths are handled only by the
Shannon-case spatial-entropy split ``H = S + Z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError, PartitionMismatchError
from .info_measures import ProbDist, as_dist, renyi_divergence, renyi_entropy

WIDTH_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class BinnedDensity:
    probs: ProbDist
    widths: np.ndarray
    support_measure: Optional[float] = None

    def __post_init__(self):
        probs = as_dist(self.probs)
        widths = np.asarray(self.widths, dtype=float).reshape(-1)
        if widths.size != probs.n:
            raise DomainError(f"{probs.n} probabilities but {widths.size} widths")
        if np.any(~np.isfinite(widths)) or np.any(widths <= 0):
            raise DomainError("bin widths must be positive and finite")
        widths = widths.copy()
        widths.flags.writeable = False
        measure = float(widths.sum()) if self.support_measure is None else float(self.support_measure)
        if not measure > 0:
            raise DomainError("support measure must be positive")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "support_measure", measure)

    @classmethod
    def uniform_bins(cls, probs, length: float) -> "BinnedDensity":
        """``len(probs)`` equal bins covering an interval of ``length``."""
        probs = as_dist(probs)
        return cls(probs, np.full(probs.n, length / probs.n), length)

    @classmethod
    def from_edges(cls, edges, probs) -> "BinnedDensity":
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise DomainError("bin edges must be strictly increasing")
        return cls(as_dist(probs), np.diff(edges), float(edges[-1] - edges[0]))

    @property
    def is_equal_width(self) -> bool:
        w = self.widths
        return bool(np.all(np.abs(w - w[0]) <= WIDTH_RTOL * w[0]))


class BattyTerms(NamedTuple):
    spatial_entropy: float  # S
    size_information: float  # Z
    entropy: float  # H(p) = S + Z


def binned_renyi_entropy(b: BinnedDensity, q: float) -> float:
    """``H_q(p) + ln(delta)`` for an equal-width partition; may be negative."""
    if not b.is_equal_width:
        raise DomainError(
            "ln(delta) correction needs equal widths; use batty_decomposition"
        )
    return renyi_entropy(b.probs, q) + math.log(float(b.widths[0]))


def batty_decomposition(b: BinnedDensity) -> BattyTerms:
    """Split discrete Shannon entropy into spatial entropy and size term.

    ``S = -sum p ln(p/dx)`` and ``Z = -sum p ln dx``; ``-Z`` is the mean
    spatial information content of the cells.
    """
    p = b.probs.weights
    pos = p > 0
    lp = np.log(p[pos])
    ldx = np.log(b.widths[pos])
    s = float(-np.dot(p[pos], lp - ldx))
    z = float(-np.dot(p[pos], ldx))
    return BattyTerms(s, z, renyi_entropy(b.probs, 1.0))


def _same_partition(b1: BinnedDensity, b2: BinnedDensity) -> bool:
    if b1.widths.size != b2.widths.size:
        return False
    return bool(np.allclose(b1.widths, b2.widths, rtol=WIDTH_RTOL, atol=0.0))


def binned_renyi_divergence(b1: BinnedDensity, b2: BinnedDensity, q: float) -> float:
    """Rényi divergence of two densities binned on the same partition.

    Bin widths cancel in the density ratio, so this is the discrete
    divergence of the bin probabilities.
    """
    if not _same_partition(b1, b2):
        raise PartitionMismatchError("densities are binned on different partitions")
    return renyi_divergence(b1.probs, b2.probs, q)


def uniform_reference(b: BinnedDensity) -> BinnedDensity:
    """Uniform density on the support of ``b``, binned like ``b``."""
    return BinnedDensity(
        ProbDist.from_weights(b.widths / b.support_measure), b.widths, b.support_measure
    )


def continuous_information_difference(b: BinnedDensity, q: float) -> float:
    """``ln(lambda(I)) - H_q(f)``: entropy defect against the uniform law on I."""
    return math.log(b.support_measure) - binned_renyi_entropy(b, q)
