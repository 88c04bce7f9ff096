"""
Confidence-region radii and worst-case phase-error estimates for
conventional (x-basis only) channel estimation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .binomialbounds import BISECT_TOL, TailBoundKind, invert_bound
from .infomeasures import binary_entropy, binary_relative_entropy


class Construction(enum.Enum):
    """The five conservative confidence constructions for the phase error."""

    VARIATIONAL = "variational"
    RELATIVE_ENTROPY = "relative"
    CHERNOFF = "chernoff"
    FACTORIAL_MOMENT = "moment"
    KLAR = "klar"

    @classmethod
    def parse(cls, name: str) -> "Construction":
        key = name.strip().lower().replace("-", "_")
        aliases = {
            "variational": cls.VARIATIONAL,
            "relative": cls.RELATIVE_ENTROPY,
            "relative_entropy": cls.RELATIVE_ENTROPY,
            "chernoff": cls.CHERNOFF,
            "moment": cls.FACTORIAL_MOMENT,
            "factorial_moment": cls.FACTORIAL_MOMENT,
            "klar": cls.KLAR,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown estimation method {name!r}") from None


_TAIL_KIND = {
    Construction.CHERNOFF: TailBoundKind.CHERNOFF,
    Construction.FACTORIAL_MOMENT: TailBoundKind.FACTORIAL_MOMENT,
    Construction.KLAR: TailBoundKind.KLAR,
}


class RegionKind(enum.Enum):
    VARIATIONAL = "variational"
    RELATIVE_ENTROPY = "relative"


@dataclass(frozen=True)
class RegionSpec:
    """Confidence region around an observed type: a variational-distance ball
    of radius ``xi`` or a relative-entropy ball of radius ``xi'``."""

    kind: RegionKind
    radius: float
    eps: float
    m: int
    d: int

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if self.d < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.d}")

    @classmethod
    def build(cls, kind: RegionKind, m: int, d: int, eps: float) -> "RegionSpec":
        kind = RegionKind(kind)
        radius = (xi_variational if kind is RegionKind.VARIATIONAL else xi_relative)(m, d, eps)
        return cls(kind, radius, eps, m, d)


def _check(m: int, d: int, eps: float) -> None:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if d < 2:
        raise ValueError(f"alphabet size must be >= 2, got {d}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def xi_variational(m: int, d: int, eps: float) -> float:
    """``sqrt((2 ln(1/eps) + 2 d ln(m + 1)) / m)``."""
    _check(m, d, eps)
    return math.sqrt((2.0 * math.log(1.0 / eps) + 2.0 * d * math.log1p(m)) / m)


def xi_relative(m: int, d: int, eps: float) -> float:
    """``(log2(1/eps) + d log2(m + 1)) / m``, in bits."""
    _check(m, d, eps)
    return (math.log2(1.0 / eps) + d * math.log1p(m) / math.log(2.0)) / m


def variational_offset(m: int, eps: float) -> float:
    """Half-width added to the observed phase error for the variational ball.

    For a binary statistic the sum-convention distance between
    ``(p, 1-p)`` and ``(p', 1-p')`` is ``2|p - p'|``, which puts the
    factor 2 inside the square root here.
    """
    _check(m, 2, eps)
    return math.sqrt((math.log(1.0 / eps) + 2.0 * math.log1p(m)) / (2.0 * m))


def relative_entropy_upper(observed: float, radius: float) -> float:
    """Largest ``C`` in ``[observed, 1]`` with ``D(observed || C) <= radius``."""
    if not 0.0 <= observed <= 1.0:
        raise ValueError(f"observed must lie in [0, 1], got {observed}")
    if observed >= 1.0 or binary_relative_entropy(observed, 1.0) <= radius:
        return 1.0
    lo, hi = observed, 1.0
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if binary_relative_entropy(observed, mid) <= radius:
            lo = mid
        else:
            hi = mid
    # the ball is closed; report the outer end so the estimate stays conservative
    return hi


def worst_case_phase_error(kind: Construction, m: int, observed: float,
                           eps: float) -> float:
    """Worst-case phase error rate at confidence ``1 - eps``."""
    kind = Construction(kind)
    if not 0.0 <= observed <= 1.0:
        raise ValueError(f"observed must lie in [0, 1], got {observed}")
    if kind is Construction.VARIATIONAL:
        return min(1.0, observed + variational_offset(m, eps))
    if kind is Construction.RELATIVE_ENTROPY:
        return relative_entropy_upper(observed, xi_relative(m, 2, eps))
    return invert_bound(_TAIL_KIND[kind], m, observed, eps).upper


def ambiguity_from_phase_error(p_tilde: float) -> float:
    """``1 - h(p)`` with ``p`` clamped to 0.5."""
    return 1.0 - binary_entropy(min(p_tilde, 0.5))


def conventional_ambiguity(kind: Construction, m: int, observed: float,
                           eps: float) -> float:
    """Eve's worst-case ambiguity ``1 - h(p~)`` under conventional estimation."""
    return ambiguity_from_phase_error(worst_case_phase_error(kind, m, observed, eps))
