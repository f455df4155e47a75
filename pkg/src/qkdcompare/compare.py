"""Protocol comparisons: relative advantage, tolerance frontiers, maps.

Comparison maps pit the modulation-optimized squeezed-state homodyne
protocol (source capped at 15 dB) against the six-state protocol; cells
where neither side produces anything are reported as None and serialized
as the `none` sentinel downstream.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .channel import PhaseNoise, ThermalLossChannel
from .cv import MU_CAP
from .dv import KeyRateResult, Protocol
from .errors import DomainError, UndefinedComparisonError
from .link import DEFAULT_ATTENUATION_DB_PER_KM, eta_from_distance
from .optim import bisect_decreasing
from .protocols import evaluate_rate

FRONTIER_RTOL = 1e-4

COMPARE_CV = Protocol.SQZ_HOM
COMPARE_DV = Protocol.SIX_STATE


def relative_rate_advantage(k_cv: KeyRateResult, k_dv: KeyRateResult) -> float:
    """(K_cv - K_dv) / max(K_cv, K_dv) on clamped rates, in [-1, 1]."""
    cv, dv = k_cv.rate, k_dv.rate
    if cv == 0.0 and dv == 0.0:
        raise UndefinedComparisonError("both rates are zero")
    return (cv - dv) / max(cv, dv)


def _relative_gap(x: float, y: float) -> Optional[float]:
    """Normalized difference for frontier pairs; None when neither side has one."""
    if x == 0.0 and y == 0.0:
        return None
    if math.isinf(x) and math.isinf(y):
        return 0.0
    if math.isinf(x):
        return 1.0
    if math.isinf(y):
        return -1.0
    return (x - y) / max(x, y)


def max_tolerable_thermal_noise(
    protocol: Protocol,
    sigma2: float,
    distance_km: float,
    k0: float,
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
    **options,
) -> float:
    """Largest thermal occupation at which the rate still reaches k0.

    Zero when the noiseless rate is already below k0. The root is bracketed
    by the entanglement-breaking occupation (where every rate is zero) and
    bisected on the clamped rate to relative residual 1e-4. A lossless link
    never couples the environment, so the answer there is 0 or +inf.
    """
    if k0 <= 0.0:
        raise DomainError(f"rate floor {k0!r} must be positive")
    eta = eta_from_distance(distance_km, attenuation_db_per_km)
    phase = PhaseNoise(sigma2)

    def rate(n_th: float) -> float:
        if eta == 0.0:
            return 0.0
        return evaluate_rate(
            protocol, ThermalLossChannel(eta, n_th), phase, **options
        ).rate

    r0 = rate(0.0)
    if r0 < k0:
        return 0.0
    if eta >= 1.0:
        return math.inf
    hi = eta / (1.0 - eta)
    return bisect_decreasing(
        rate, k0, 0.0, hi, f_lo=r0, f_hi=rate(hi), residual_rtol=FRONTIER_RTOL
    )


def max_distance(
    protocol: Protocol,
    sigma2: float,
    n_th: float,
    k0: float,
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
    **options,
) -> float:
    """Largest link distance (km) at which the rate still reaches k0.

    Geometric bracket expansion followed by the same residual-controlled
    bisection as the noise frontier.
    """
    if k0 <= 0.0:
        raise DomainError(f"rate floor {k0!r} must be positive")
    phase = PhaseNoise(sigma2)

    def rate(distance: float) -> float:
        eta = eta_from_distance(distance, attenuation_db_per_km)
        if eta == 0.0:
            return 0.0
        return evaluate_rate(
            protocol, ThermalLossChannel(eta, n_th), phase, **options
        ).rate

    lo, f_lo = 0.0, rate(0.0)
    if f_lo < k0:
        return 0.0
    hi, f_hi = 10.0, rate(10.0)
    while f_hi >= k0:
        lo, f_lo = hi, f_hi
        hi *= 2.0
        f_hi = rate(hi)
        if hi > 1e5:
            raise DomainError(
                f"no finite distance frontier below 1e5 km for k0 = {k0!r}"
            )
    return bisect_decreasing(
        rate, k0, lo, hi, f_lo=f_lo, f_hi=f_hi, residual_rtol=FRONTIER_RTOL
    )


def _comparison_options(mu_max: float) -> tuple[dict, dict]:
    cv = dict(optimize_va=True, mu_max=mu_max)
    dv: dict = {}
    return cv, dv


def advantage_map(
    sigma2: float,
    distance_grid: Sequence[float],
    nth_grid: Sequence[float],
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
    mu_max: float = MU_CAP,
) -> list[dict]:
    """Relative rate advantage of Sqz-Hom over 6S on a (distance, N_Th) grid."""
    cv_opt, dv_opt = _comparison_options(mu_max)
    phase = PhaseNoise(sigma2)
    records = []
    for distance in distance_grid:
        eta = eta_from_distance(distance, attenuation_db_per_km)
        for n_th in nth_grid:
            channel = ThermalLossChannel(eta, n_th)
            k_cv = evaluate_rate(COMPARE_CV, channel, phase, **cv_opt)
            k_dv = evaluate_rate(COMPARE_DV, channel, phase, **dv_opt)
            try:
                k_tilde: Optional[float] = relative_rate_advantage(k_cv, k_dv)
            except UndefinedComparisonError:
                k_tilde = None
            records.append(
                {
                    "distance_km": distance,
                    "nth": n_th,
                    "eta": eta,
                    "sigma2": sigma2,
                    "rate_cv": k_cv.rate,
                    "rate_dv": k_dv.rate,
                    "k_tilde": k_tilde,
                }
            )
    return records


def noise_frontier_map(
    sigma2_grid: Sequence[float],
    distance_grid: Sequence[float],
    k0: float,
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
    mu_max: float = MU_CAP,
) -> list[dict]:
    """Normalized gap between the CV and DV maximum tolerable thermal noise."""
    cv_opt, dv_opt = _comparison_options(mu_max)
    records = []
    for sigma2 in sigma2_grid:
        for distance in distance_grid:
            n_cv = max_tolerable_thermal_noise(
                COMPARE_CV, sigma2, distance, k0,
                attenuation_db_per_km, **cv_opt,
            )
            n_dv = max_tolerable_thermal_noise(
                COMPARE_DV, sigma2, distance, k0,
                attenuation_db_per_km, **dv_opt,
            )
            records.append(
                {
                    "sigma2": sigma2,
                    "distance_km": distance,
                    "n_max_cv": n_cv,
                    "n_max_dv": n_dv,
                    "n_tilde": _relative_gap(n_cv, n_dv),
                }
            )
    return records


def loss_frontier_map(
    sigma2_grid: Sequence[float],
    nth_grid: Sequence[float],
    k0: float,
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
    mu_max: float = MU_CAP,
) -> list[dict]:
    """Normalized gap between the CV and DV maximum distance."""
    cv_opt, dv_opt = _comparison_options(mu_max)
    records = []
    for sigma2 in sigma2_grid:
        for n_th in nth_grid:
            d_cv = max_distance(
                COMPARE_CV, sigma2, n_th, k0, attenuation_db_per_km, **cv_opt
            )
            d_dv = max_distance(
                COMPARE_DV, sigma2, n_th, k0, attenuation_db_per_km, **dv_opt
            )
            records.append(
                {
                    "sigma2": sigma2,
                    "nth": n_th,
                    "d_max_cv": d_cv,
                    "d_max_dv": d_dv,
                    "l_tilde": _relative_gap(d_cv, d_dv),
                }
            )
    return records
