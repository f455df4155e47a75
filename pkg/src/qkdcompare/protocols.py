"""Uniform protocol dispatch: one entry point for every implemented rate."""

from __future__ import annotations

from typing import Optional

from .channel import NO_PHASE_NOISE, PhaseNoise, ThermalLossChannel, combined_channel_stats
from .cv import (
    MU_CAP,
    CvSource,
    build_covariance,
    gg02_heterodyne_rate,
    optimize_modulation,
    optimize_trusted_noise,
    phase_excess_noise,
    sqz_hom_rate,
    sqz_hom_trusted_noise_rate,
)
from .dv import (
    KeyRateResult,
    Protocol,
    bb84_noisy_rate,
    bb84_rate,
    six_state_noisy_rate,
    six_state_rate,
)
from .errors import ConfigError

DV_PROTOCOLS = (Protocol.BB84, Protocol.SIX_STATE, Protocol.NOISY_BB84, Protocol.NOISY_SIX_STATE)
CV_PROTOCOLS = (Protocol.SQZ_HOM, Protocol.NSQZ_HOM, Protocol.GG02)
NOISY_DV = (Protocol.NOISY_BB84, Protocol.NOISY_SIX_STATE)


def _reject(options: dict, protocol: Protocol) -> None:
    stale = [name for name, value in options.items() if value not in (None, False)]
    if stale:
        raise ConfigError(f"{', '.join(stale)} not applicable to {protocol.value}")


def evaluate_rate(
    protocol: Protocol,
    channel: ThermalLossChannel,
    phase: PhaseNoise = NO_PHASE_NOISE,
    *,
    mu: Optional[float] = None,
    squeezing_db: Optional[float] = None,
    optimize_va: bool = False,
    mu_max: float = MU_CAP,
    xi_b: Optional[float] = None,
    optimize_xi: bool = False,
    q: Optional[float] = None,
    optimize_q: bool = False,
    excess_placement: str = "at_output",
) -> KeyRateResult:
    """Evaluate any protocol on a thermal-loss channel with phase noise.

    DV protocols take the channel and phase noise as-is; the noisy variants
    accept either a fixed flip rate ``q`` or ``optimize_q`` (the default when
    neither is given). CV protocols need exactly one source policy out of
    ``mu``, ``squeezing_db``, ``optimize_va`` (default: optimize up to
    ``mu_max``); NSqz-Hom additionally takes ``xi_b`` or ``optimize_xi``
    (default: optimize). Inapplicable options raise ConfigError.
    """
    if protocol in DV_PROTOCOLS:
        _reject(
            dict(mu=mu, squeezing_db=squeezing_db, optimize_va=optimize_va,
                 xi_b=xi_b, optimize_xi=optimize_xi),
            protocol,
        )
        stats = combined_channel_stats(channel, phase)
        if protocol in NOISY_DV:
            if q is not None and optimize_q:
                raise ConfigError("pass either q or optimize_q, not both")
            fixed_q = q if q is not None else None
            if protocol is Protocol.NOISY_BB84:
                return bb84_noisy_rate(stats, q=fixed_q)
            return six_state_noisy_rate(stats, q=fixed_q)
        _reject(dict(q=q, optimize_q=optimize_q), protocol)
        if protocol is Protocol.BB84:
            return bb84_rate(stats)
        return six_state_rate(stats)

    if protocol not in CV_PROTOCOLS:
        raise ConfigError(f"unknown protocol {protocol!r}")
    _reject(dict(q=q, optimize_q=optimize_q), protocol)
    if protocol is not Protocol.NSQZ_HOM:
        _reject(dict(xi_b=xi_b, optimize_xi=optimize_xi), protocol)

    source_policies = sum(
        [mu is not None, squeezing_db is not None, bool(optimize_va)]
    )
    if source_policies > 1:
        raise ConfigError("pass at most one of mu, squeezing_db, optimize_va")
    if source_policies == 0:
        optimize_va = True

    if optimize_va:
        return optimize_modulation(
            protocol, channel, phase, mu_max=mu_max,
            excess_placement=excess_placement,
        )

    source = CvSource(mu=mu) if mu is not None else CvSource.from_squeezing_db(squeezing_db)
    excess = phase_excess_noise(source, phase, placement=excess_placement)
    if protocol is Protocol.GG02:
        return gg02_heterodyne_rate(source, channel, excess)
    cov = build_covariance(source, channel, excess)
    if protocol is Protocol.SQZ_HOM:
        return sqz_hom_rate(cov)
    if xi_b is not None and optimize_xi:
        raise ConfigError("pass either xi_b or optimize_xi, not both")
    if xi_b is not None:
        return sqz_hom_trusted_noise_rate(cov, xi_b)
    return optimize_trusted_noise(cov)
