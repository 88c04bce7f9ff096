"""
Information measures on finite alphabets.

Everything here is reported in bits. Terms of the form ``0 * log 0`` are
taken as zero, and a relative entropy that diverges (the first argument
puts mass where the second has none) is returned as ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SUM_TOL = 1e-12
LN2 = math.log(2.0)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """A probability mass function over ``range(d)`` with its sample count.

    Attributes
    ----------
    probs : numpy.ndarray
        Probabilities, one per outcome. Stored as a read-only float array.
    m : int
        Number of samples the distribution was built from. ``0`` marks an
        idealized (infinite-sample) distribution; when ``m > 0`` every entry
        must be a multiple of ``1/m``, i.e. the distribution is a type.
    """

    probs: np.ndarray
    m: int = 0

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size < 1:
            raise ValueError("probs must be a non-empty 1-D vector")
        if np.any(~np.isfinite(probs)) or np.any(probs < 0):
            raise ValueError("probs must be finite and non-negative")
        if abs(math.fsum(probs) - 1.0) > SUM_TOL:
            raise ValueError(f"probs must sum to 1, got {math.fsum(probs)!r}")
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if self.m > 0:
            counts = probs * self.m
            if np.max(np.abs(counts - np.round(counts))) / self.m > SUM_TOL:
                raise ValueError("probs must be integer multiples of 1/m")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_counts(cls, counts) -> "EmpiricalDistribution":
        """Build the type of a sample from per-outcome counts."""
        counts = np.asarray(counts)
        if np.any(counts < 0) or not np.all(np.equal(np.mod(counts, 1), 0)):
            raise ValueError("counts must be non-negative integers")
        m = int(counts.sum())
        if m == 0:
            raise ValueError("at least one sample is required")
        return cls(counts / m, m)

    @property
    def d(self) -> int:
        return self.probs.size

    def __len__(self) -> int:
        return self.probs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmpiricalDistribution):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash((self.m, self.probs.tobytes()))


def _as_probs(P) -> np.ndarray:
    if isinstance(P, EmpiricalDistribution):
        return P.probs
    return np.asarray(P, dtype=float)


def _check_pair(P, Q) -> tuple[np.ndarray, np.ndarray]:
    p, q = _as_probs(P), _as_probs(Q)
    if p.shape != q.shape:
        raise ValueError(f"alphabet mismatch: {p.shape} vs {q.shape}")
    return p, q


def binary_entropy(p: float) -> float:
    """Binary entropy ``h(p)`` in bits.

    >>> binary_entropy(0.5)
    1.0
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log(p) + (1.0 - p) * math.log1p(-p)) / LN2


def binary_relative_entropy(a: float, b: float) -> float:
    """``D(a || b)`` between Bernoulli(a) and Bernoulli(b), in bits."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError(f"arguments must lie in [0, 1], got {a!r}, {b!r}")
    total = 0.0
    if a > 0.0:
        if b == 0.0:
            return math.inf
        total += a * math.log(a / b)
    if a < 1.0:
        if b == 1.0:
            return math.inf
        total += (1.0 - a) * (math.log1p(-a) - math.log1p(-b))
    return max(total, 0.0) / LN2


def shannon_entropy(P) -> float:
    """Shannon entropy of a distribution, in bits."""
    p = _as_probs(P)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)) / LN2)


def relative_entropy(P, Q) -> float:
    """Relative entropy ``D(P || Q)`` in bits; ``math.inf`` if P is not
    absolutely continuous with respect to Q."""
    p, q = _check_pair(P, Q)
    support = p > 0
    if np.any(q[support] <= 0):
        return math.inf
    ps, qs = p[support], q[support]
    return max(float(np.sum(ps * np.log(ps / qs)) / LN2), 0.0)


def variational_distance(P, Q) -> float:
    """Sum of absolute differences, ``sum_x |P(x) - Q(x)|`` (range [0, 2])."""
    p, q = _check_pair(P, Q)
    return float(np.sum(np.abs(p - q)))
