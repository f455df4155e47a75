"""Repeaterless secret-key-capacity bounds for the thermal-loss channel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .channel import ThermalLossChannel
from .dv import KeyRateResult
from .entropy import bosonic_entropy
from .errors import NormalizationUnavailableError


@dataclass(frozen=True)
class CapacityBounds:
    """Lower/upper bounds in bits per channel use.

    ``upper`` is None when the channel is entanglement breaking (no key is
    possible, so no finite upper bound is reported).
    """

    lower: float
    upper: Optional[float]
    eb_breaking: bool


def plob_bounds(channel: ThermalLossChannel) -> CapacityBounds:
    """Thermal-loss capacity bounds.

    lower = -log2(1 - eta) - G(n_th)
    upper = lower - n_th * log2(eta)

    eta = 1 gives infinite capacity (+inf sentinel in both slots) so sweeps
    can keep their lossless column.
    """
    eta, n_th = channel.eta, channel.n_th
    if eta >= 1.0:
        return CapacityBounds(lower=math.inf, upper=math.inf, eb_breaking=False)
    eb = channel.is_entanglement_breaking
    lower = -math.log2(1.0 - eta) - bosonic_entropy(n_th)
    if eb:
        return CapacityBounds(lower=lower, upper=None, eb_breaking=True)
    if eta == 0.0:
        upper = lower
    else:
        upper = lower - n_th * math.log2(eta)
    return CapacityBounds(lower=lower, upper=upper, eb_breaking=eb)


def normalize_rate(result: KeyRateResult, bounds: CapacityBounds) -> float:
    """Clamped rate divided by the upper bound.

    Raises when the channel is entanglement breaking (no upper bound) or the
    upper bound is not positive.
    """
    if bounds.upper is None:
        raise NormalizationUnavailableError(
            "no upper bound: channel is entanglement breaking"
        )
    if not bounds.upper > 0.0:
        raise NormalizationUnavailableError(
            f"upper bound {bounds.upper!r} is not positive"
        )
    return result.rate / bounds.upper
