"""
Lower-tail bounds for the binomial distribution and their inversion into
conservative one-sided confidence limits.

Throughout, ``X ~ B(m, p)`` and ``Xbar = X / m``. A tail bound is a function
``u(m, p, delta) >= P[Xbar <= p - delta]``. Given an observed ``Xbar`` and a
failure probability ``eps``, the smallest ``C`` in ``[Xbar, 1]`` with
``u(m, C, C - Xbar) <= eps`` is an upper confidence limit for ``p`` at level
``1 - eps``.

All bounds are evaluated in log space so that ``m`` in the tens of millions
is fine.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from .infomeasures import LN2, binary_relative_entropy

EXACT_MAX_M = 100_000
BISECT_TOL = 1e-10
_DIRECT_PRODUCT_MAX = 100_000


def _slack(x: float) -> float:
    # absorbs rounding in m * (p - delta) so integer counts survive floor/ceil
    return 1e-9 + 1e-12 * abs(x)


class TailBoundKind(enum.Enum):
    CHERNOFF = "chernoff"
    FACTORIAL_MOMENT = "factorial_moment"
    KLAR = "klar"
    EXACT = "exact"


@dataclass(frozen=True)
class OneSidedInterval:
    """Upper confidence limit ``upper`` on a binomial proportion."""

    upper: float
    level: float
    method: str
    m: int
    observed: float

    def __post_init__(self) -> None:
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        if not self.observed <= self.upper <= 1.0:
            raise ValueError(
                f"need observed <= upper <= 1, got {self.observed} and {self.upper}")


def _check_args(m: int, p: float, delta: float) -> None:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if delta < 0.0 or delta > p:
        raise ValueError(f"delta must lie in [0, p], got delta={delta}, p={p}")


def log_binomial(m: int, n: int) -> float:
    """``log2`` of the binomial coefficient ``C(m, n)`` via log-gamma."""
    if n < 0 or n > m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
    if n == 0 or n == m:
        return 0.0
    return float(gammaln(m + 1) - gammaln(n + 1) - gammaln(m - n + 1)) / LN2


def chernoff_tail(m: int, p: float, delta: float) -> float:
    """``2 ** (-m * D(p - delta || p))``."""
    _check_args(m, p, delta)
    if delta == 0.0:
        return 1.0
    d = binary_relative_entropy(max(p - delta, 0.0), p)
    return 2.0 ** (-m * d)


def factorial_moment_tail(m: int, p: float, delta: float) -> float:
    """Factorial moment bound on ``P[Xbar <= p - delta]``, ``delta > 0``.

    The number of failures ``Y = m - X`` has factorial moments
    ``E[(Y)_n] = (m)_n (1-p)^n``; Markov's inequality on ``(Y)_n`` with the
    optimal order ``n* + 1`` gives the running product below.
    """
    _check_args(m, p, delta)
    if delta == 0.0:
        raise ValueError("the factorial moment bound needs delta > 0")
    q = 1.0 - p
    t = m * (q + delta)
    mu = m * q
    n_star = math.floor(m * delta / p)
    # Markov on (Y)_n needs t - k > 0 for every factor; fewer factors only loosen
    n_star = min(n_star, math.ceil(t) - 1)
    if mu - n_star * q <= 0:
        return 0.0
    if n_star <= _DIRECT_PRODUCT_MAX:
        k = np.arange(n_star + 1, dtype=float)
        log_u = float(np.sum(np.log(mu - k * q) - np.log(t - k)))
    else:
        # prod (m - k) q / (t - k) over k = 0..n* as a ratio of gamma functions
        log_u = float((n_star + 1) * math.log(q)
                      + gammaln(m + 1) - gammaln(m - n_star)
                      - gammaln(t + 1) + gammaln(t - n_star))
    return min(1.0, math.exp(log_u))


def klar_tail(m: int, p: float, delta: float) -> float:
    """Klar's bound on ``P[Xbar <= p - delta]``.

    With ``n = ceil(m(1 - p + delta))`` failures,
    ``(n + 1) p / (n + 1 - (m + 1)(1 - p)) * f_n`` where
    ``f_n = C(m, n) (1-p)^n p^(m-n)``. Returns 1.0 where the denominator is
    not positive (the bound does not apply there).
    """
    _check_args(m, p, delta)
    q = 1.0 - p
    x = m * (q + delta)
    n = math.ceil(x - _slack(x))
    if n > m:
        return 0.0
    denom = n + 1 - (m + 1) * q
    if denom <= 0.0:
        return 1.0
    if p == 0.0:
        return 1.0
    if q == 0.0:
        # all mass at n = 0 failures
        return 1.0 if n == 0 else 0.0
    log_f = log_binomial(m, n) * LN2 + n * math.log(q) + (m - n) * math.log(p)
    log_u = math.log((n + 1) * p / denom) + log_f
    return min(1.0, math.exp(log_u))


def exact_tail(m: int, p: float, delta: float) -> float:
    """``P[Xbar <= p - delta]`` summed directly from the binomial pmf."""
    _check_args(m, p, delta)
    if m > EXACT_MAX_M:
        raise ValueError(f"exact tail limited to m <= {EXACT_MAX_M}, got {m}")
    x = m * (p - delta)
    k_max = math.floor(x + _slack(x))
    if k_max < 0:
        return 0.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 1.0 if k_max >= m else 0.0
    k = np.arange(k_max + 1, dtype=float)
    log_pmf = (gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
               + k * math.log(p) + (m - k) * math.log1p(-p))
    return min(1.0, math.fsum(np.exp(log_pmf)))


_TAILS: dict[TailBoundKind, Callable[[int, float, float], float]] = {
    TailBoundKind.CHERNOFF: chernoff_tail,
    TailBoundKind.FACTORIAL_MOMENT: factorial_moment_tail,
    TailBoundKind.KLAR: klar_tail,
    TailBoundKind.EXACT: exact_tail,
}


def tail_bound(kind: TailBoundKind, m: int, p: float, delta: float) -> float:
    """Dispatch to the tail bound for ``kind``."""
    return _TAILS[TailBoundKind(kind)](m, p, delta)


def _u(kind: TailBoundKind, m: int, observed: float, c: float) -> float:
    delta = c - observed
    if delta <= 0.0:
        # infimum over admissible delta; no bound beats the trivial one here
        return 1.0
    return _TAILS[kind](m, c, min(delta, c))


def invert_bound(kind: TailBoundKind, m: int, observed: float,
                 eps: float) -> OneSidedInterval:
    """Smallest ``C`` in ``[observed, 1]`` with ``u(m, C, C - observed) <= eps``.

    Found by bisection to an absolute width of ``1e-10``; the returned limit
    is the upper end of the final bracket so it never undershoots. If no
    ``C <= 1`` reaches the level the vacuous limit 1.0 is returned.
    """
    kind = TailBoundKind(kind)
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if not 0.0 <= observed <= 1.0:
        raise ValueError(f"observed must lie in [0, 1], got {observed}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if kind is TailBoundKind.EXACT and m > EXACT_MAX_M:
        raise ValueError(f"exact tail limited to m <= {EXACT_MAX_M}, got {m}")

    level = 1.0 - eps
    if observed >= 1.0 or _u(kind, m, observed, 1.0) > eps:
        return OneSidedInterval(1.0, level, kind.value, m, observed)
    lo, hi = observed, 1.0
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if _u(kind, m, observed, mid) <= eps:
            hi = mid
        else:
            lo = mid
    return OneSidedInterval(hi, level, kind.value, m, observed)
