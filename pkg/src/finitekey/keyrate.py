"""
Secure key length from Eve's worst-case ambiguity.

    l = N (ambiguity - delta_bar) - leak_EC - 2 log2(1 / eps_PA)

floored to an integer and clamped at zero (zero means: abort).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .infomeasures import binary_entropy


@dataclass(frozen=True)
class KeyRateParams:
    """Protocol parameters entering the key-length formula.

    Attributes
    ----------
    n_raw : int
        Number ``N`` of raw key symbols going into privacy amplification.
    eps_pe : float
        Parameter-estimation failure probability (the confidence level of the
        channel estimate is ``1 - eps_pe``).
    eps_pa : float
        Privacy-amplification failure probability. ``1.0`` switches the
        ``2 log2(1/eps_pa)`` penalty off.
    delta_bar : float
        Smoothing correction ``delta(eps_bar)`` in bits per symbol.
    leak_ec : float
        Total bits disclosed by information reconciliation.
    """

    n_raw: int
    eps_pe: float = 1e-5
    eps_pa: float = 1e-10
    delta_bar: float = 0.0
    leak_ec: float = 0.0

    def __post_init__(self) -> None:
        if self.n_raw < 1:
            raise ValueError(f"n_raw must be >= 1, got {self.n_raw}")
        if not 0.0 < self.eps_pe < 1.0:
            raise ValueError(f"eps_pe must lie in (0, 1), got {self.eps_pe}")
        if not 0.0 < self.eps_pa <= 1.0:
            raise ValueError(f"eps_pa must lie in (0, 1], got {self.eps_pa}")
        if self.delta_bar < 0:
            raise ValueError(f"delta_bar must be >= 0, got {self.delta_bar}")
        if self.leak_ec < 0:
            raise ValueError(f"leak_ec must be >= 0, got {self.leak_ec}")


def key_length(params: KeyRateParams, min_ambiguity: float) -> int:
    """Length in bits of an eps-secure final key (0 if none can be extracted)."""
    if not 0.0 <= min_ambiguity <= 1.0:
        raise ValueError(f"min_ambiguity must lie in [0, 1], got {min_ambiguity}")
    pa_cost = 2.0 * math.log2(1.0 / params.eps_pa)
    raw = params.n_raw * (min_ambiguity - params.delta_bar) - params.leak_ec - pa_cost
    return max(0, math.floor(raw))


def leak_model(n_raw: int, qber: float, efficiency: float = 1.0) -> float:
    """Reconciliation leakage ``efficiency * N * h(qber)``."""
    if not 0.0 <= qber <= 0.5:
        raise ValueError(f"qber must lie in [0, 0.5], got {qber}")
    if efficiency < 1.0:
        raise ValueError(f"efficiency must be >= 1, got {efficiency}")
    return efficiency * n_raw * binary_entropy(qber)


def default_delta_bar(n_raw: int, eps_bar: float) -> float:
    """``7 sqrt(log2(2/eps_bar) / N)``, the smoothing term commonly used for
    BB84 finite-key rates. Offered as a convenience; it is not derived here.
    """
    if n_raw < 1 or not 0.0 < eps_bar < 1.0:
        raise ValueError("need n_raw >= 1 and eps_bar in (0, 1)")
    return 7.0 * math.sqrt(math.log2(2.0 / eps_bar) / n_raw)
