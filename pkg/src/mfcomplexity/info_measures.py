"""Discrete entropy, divergence and diversity primitives.

All logarithms are natural. Zero-probability states are dropped from the
power sums (``0 ln 0 = 0``), which keeps orders in ``(0, 1)`` well defined;
non-positive orders on a distribution with zero entries raise
:class:`DegenerateSupportError` instead of returning ``inf``.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .errors import (
    DegenerateSupportError,
    DomainError,
    InfiniteDivergenceError,
    PartitionMismatchError,
)

# Radius around q = 1 inside which the Shannon / KL branch is used.
QTOL = 1e-9
# Radius around q = 1 inside which derivatives switch to a cumulant series.
SERIES_RADIUS = 1e-4
# Unit-sum slack tolerated (and renormalized away) by ProbDist.
SUM_TOL = 1e-9


class ProbDist:
    """Immutable probability vector.

    Weights within ``SUM_TOL`` of unit sum are renormalized; anything further
    off is rejected. Use :meth:`from_weights` to normalize raw counts.
    """

    __slots__ = ("_w",)

    def __init__(self, weights: Union["ProbDist", Sequence[float], np.ndarray]):
        if isinstance(weights, ProbDist):
            self._w = weights._w
            return
        w = np.array(weights, dtype=float).reshape(-1) if np.ndim(weights) else None
        if w is None or w.size == 0:
            raise DomainError("a distribution needs at least one state")
        if not np.all(np.isfinite(w)):
            raise DomainError("distribution weights must be finite")
        if np.any(w < 0):
            raise DomainError("distribution weights must be non-negative")
        total = w.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise DomainError(f"weights sum to {total!r}, not 1")
        w = w / total
        w.flags.writeable = False
        self._w = w

    @classmethod
    def from_weights(cls, weights) -> "ProbDist":
        """Normalize arbitrary non-negative weights (e.g. counts)."""
        w = np.asarray(weights, dtype=float).reshape(-1)
        total = w.sum()
        if w.size == 0 or not np.isfinite(total) or total <= 0:
            raise DomainError("weights must have a positive finite sum")
        return cls(w / total)

    @classmethod
    def uniform(cls, n: int) -> "ProbDist":
        if n < 1:
            raise DomainError("n must be >= 1")
        return cls(np.full(n, 1.0 / n))

    @property
    def weights(self) -> np.ndarray:
        return self._w

    @property
    def n(self) -> int:
        return self._w.size

    @property
    def support(self) -> np.ndarray:
        """Boolean mask of states with positive probability."""
        return self._w > 0

    def __len__(self) -> int:
        return self._w.size

    def __iter__(self):
        return iter(self._w.tolist())

    def __array__(self, dtype=None, copy=None):
        return self._w if dtype is None else self._w.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, ProbDist):
            return NotImplemented
        return self._w.shape == other._w.shape and bool(np.all(self._w == other._w))

    def __hash__(self):
        return hash(self._w.tobytes())

    def __repr__(self):
        return f"ProbDist({self._w.tolist()!r})"


def as_dist(p) -> ProbDist:
    return p if isinstance(p, ProbDist) else ProbDist(p)


def _logsumexp(a, b=None):
    """``ln sum b_i exp(a_i)`` for positive weights ``b``."""
    m = float(np.max(a))
    if not math.isfinite(m):
        return m
    e = np.exp(a - m)
    return m + math.log(float(e.sum() if b is None else np.dot(b, e)))


# ---------------------------------------------------------------------------
# Shared machinery: both H_q and the Rényi divergence are, up to sign,
# K(t)/t with K the cumulant generating function of a log-ratio L under
# weights w, evaluated at t = q - 1.


def _cumulants(w, L):
    mean = float(np.dot(w, L))
    d = L - mean
    m2 = float(np.dot(w, d * d))
    m3 = float(np.dot(w, d ** 3))
    m4 = float(np.dot(w, d ** 4))
    return mean, m2, m3, m4 - 3.0 * m2 * m2


def _centered_cgf(w, d, t):
    """K(t) for a zero-mean log-ratio ``d``.

    For small ``|t d|`` the log1p/expm1 form keeps full relative precision,
    which the plain log-sum-exp loses as t -> 0.
    """
    if abs(t) * float(np.max(np.abs(d))) < 1.0:
        return math.log1p(float(np.dot(w, np.expm1(t * d))))
    return float(_logsumexp(t * d, w))


def _scaled_cgf(w, L, t):
    """Return K(t)/t, continuously extended to t = 0 by the mean of L."""
    mean = float(np.dot(w, L))
    if abs(t) <= QTOL:
        return mean
    return mean + _centered_cgf(w, L - mean, t) / t


def _scaled_cgf_slope(w, L, t):
    """Derivative of K(t)/t in t."""
    if abs(t) < SERIES_RADIUS:
        _, k2, k3, k4 = _cumulants(w, L)
        return k2 / 2.0 + k3 * t / 3.0 + k4 * t * t / 8.0
    d = L - float(np.dot(w, L))
    R = _centered_cgf(w, d, t)
    escort = w * np.exp(t * d - R)
    dR = float(np.dot(escort, d)) / float(escort.sum())
    return (t * dR - R) / (t * t)


def _entropy_terms(p: ProbDist, q: float):
    q = float(q)
    if not math.isfinite(q):
        raise DomainError(f"order must be finite, got {q!r}")
    w = p.weights
    pos = w > 0
    if q <= 0 and not np.all(pos):
        raise DegenerateSupportError(
            f"order q={q} <= 0 is undefined for distributions with zero entries"
        )
    w = w[pos]
    return w, np.log(w), q - 1.0


def _divergence_terms(p1: ProbDist, p2: ProbDist, q: float):
    q = float(q)
    if not math.isfinite(q):
        raise DomainError(f"order must be finite, got {q!r}")
    if p1.n != p2.n:
        raise PartitionMismatchError(f"length mismatch: {p1.n} vs {p2.n}")
    a, b = p1.weights, p2.weights
    pos = a > 0
    if np.any(b[pos] == 0):
        raise InfiniteDivergenceError(
            "first distribution puts mass where the reference has none"
        )
    w = a[pos]
    return w, np.log(w) - np.log(b[pos]), q - 1.0


# ---------------------------------------------------------------------------


def hartley_info(p: float) -> float:
    """Information content ``-ln p`` of an event with probability ``p``."""
    if not (0.0 < p <= 1.0):
        raise DomainError(f"probability must lie in (0, 1], got {p!r}")
    return -math.log(p)


def shannon_entropy(p) -> float:
    return renyi_entropy(p, 1.0)


def renyi_entropy(p, q: float) -> float:
    """Rényi entropy of order ``q``; the Shannon entropy when ``|q-1| <= QTOL``.

    Examples
    --------
    >>> round(renyi_entropy([0.2, 0.3, 0.5], 2), 6)
    0.967584
    """
    w, L, t = _entropy_terms(as_dist(p), q)
    return 0.0 - _scaled_cgf(w, L, t)  # no -0.0 for point masses


def diversity_index(p, q: float) -> float:
    """Effective number of states, ``exp(H_q(p))``."""
    return math.exp(renyi_entropy(p, q))


def renyi_divergence(p1, p2, q: float) -> float:
    """Rényi divergence of order ``q`` of ``p1`` from ``p2``.

    The sum runs over states where ``p1 > 0``; a state with ``p1 > 0`` and
    ``p2 = 0`` raises :class:`InfiniteDivergenceError`. At ``q = 1`` this is
    the Kullback-Leibler divergence.
    """
    w, L, t = _divergence_terms(as_dist(p1), as_dist(p2), q)
    return _scaled_cgf(w, L, t)


def kl_divergence(p1, p2) -> float:
    return renyi_divergence(p1, p2, 1.0)


def relative_diversity_index(p1, p2, q: float) -> float:
    return math.exp(renyi_divergence(p1, p2, q))


def information_difference(p, q: float = 1.0) -> float:
    """Entropy defect ``ln n - H_q(p)`` relative to equiprobability."""
    p = as_dist(p)
    return math.log(p.n) - renyi_entropy(p, q)


def redundancy(p) -> float:
    """Shannon redundancy ``1 - H(p)/ln n``."""
    p = as_dist(p)
    if p.n < 2:
        raise DomainError("redundancy needs at least two states")
    return information_difference(p, 1.0) / math.log(p.n)


def escort_distribution(p, q: float) -> ProbDist:
    """Power-distorted distribution ``p_i^q / sum_j p_j^q``.

    Zero entries stay zero for ``q > 0``; ``q <= 0`` requires full support.
    """
    p = as_dist(p)
    w, L, _ = _entropy_terms(p, q)
    log_terms = float(q) * L
    norm = _logsumexp(log_terms)
    if not np.isfinite(norm):
        raise DegenerateSupportError("power sum is not finite")
    out = np.zeros(p.n)
    out[p.weights > 0] = np.exp(log_terms - norm)
    return ProbDist(out / out.sum())
