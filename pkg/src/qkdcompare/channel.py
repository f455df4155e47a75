"""Thermal-loss channel model and the qubit statistics it induces on a
dual-rail (two-mode, single-photon) encoding.

The physical channel mixes each rail with a thermal environment of mean
occupation ``n_th`` on a beamsplitter of transmissivity ``eta``. Conditioned
on exactly one photon surviving across the two rails, the logical qubit sees
a depolarizing channel; an additional wrapped-normal phase diffusion between
the rails turns it into a depolarizing plus dephasing channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .entropy import circular_mean_wrapped_normal
from .errors import DegenerateChannelError, DomainError


@dataclass(frozen=True)
class ThermalLossChannel:
    """Single-mode thermal-loss channel.

    Attributes
    ----------
    eta : float
        Transmissivity in [0, 1].
    n_th : float
        Mean thermal occupation of the environment mode, >= 0.
    """

    eta: float
    n_th: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"transmissivity {self.eta!r} outside [0, 1]")
        if self.n_th < 0.0:
            raise DomainError(f"thermal occupation {self.n_th!r} is negative")

    @property
    def gamma(self) -> float:
        """Normalization factor 1 + n_th (1 - eta) of the single-rail output."""
        return 1.0 + self.n_th * (1.0 - self.eta)

    @property
    def is_degenerate(self) -> bool:
        """True when the channel neither transmits nor injects photons."""
        return self.eta == 0.0 and self.n_th == 0.0

    @property
    def is_entanglement_breaking(self) -> bool:
        """Thermal-loss channel breaks entanglement iff n_th >= eta/(1-eta).

        Compared multiplicatively with a 1e-12 relative slack so exact
        boundary inputs like (eta=0.8, n_th=4) classify as breaking despite
        rounding in 1 - eta.
        """
        if self.eta >= 1.0:
            return False
        return self.n_th * (1.0 - self.eta) >= self.eta * (1.0 - 1e-12)


@dataclass(frozen=True)
class PhaseNoise:
    """Wrapped-normal phase diffusion of a given variance (rad^2)."""

    variance: float = 0.0

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise DomainError(f"phase variance {self.variance!r} is negative")

    @property
    def coherence(self) -> float:
        """Mean resultant length exp(-variance/2)."""
        return circular_mean_wrapped_normal(self.variance)


NO_PHASE_NOISE = PhaseNoise(0.0)


@dataclass(frozen=True)
class DvChannelStats:
    """Effective qubit-channel statistics for the dual-rail protocols.

    ``lam`` is the depolarizing weight, ``p_success`` the probability that
    exactly one photon arrives across both rails (post-selection weight),
    and q_x, q_y, q_z the sifted error rates in the three bases.
    """

    lam: float
    p_success: float
    q_x: float
    q_y: float
    q_z: float
    gamma: float = field(default=1.0)


def depolarizing_parameter(channel: ThermalLossChannel) -> float:
    """Depolarizing weight of the post-selected dual-rail qubit channel.

    lam = 2 n (1+n) (1-eta)^2 / (eta + 2 n (1+n) (1-eta)^2). Undefined for
    the degenerate channel (eta = 0, n_th = 0), which never succeeds.
    """
    if channel.is_degenerate:
        raise DegenerateChannelError(
            "depolarizing parameter undefined at eta = 0 with n_th = 0"
        )
    noise = 2.0 * channel.n_th * (1.0 + channel.n_th) * (1.0 - channel.eta) ** 2
    return noise / (channel.eta + noise)


def success_probability(channel: ThermalLossChannel) -> float:
    """Probability that exactly one photon survives across the two rails.

    P_S = (eta + 2 n (1+n) (1-eta)^2) / gamma^4.
    """
    noise = 2.0 * channel.n_th * (1.0 + channel.n_th) * (1.0 - channel.eta) ** 2
    return (channel.eta + noise) / channel.gamma**4


def thermal_qber(channel: ThermalLossChannel) -> float:
    """Sifted error rate lam/2 of the thermal-loss dual-rail channel (any basis)."""
    return 0.5 * depolarizing_parameter(channel)


def combined_channel_stats(
    channel: ThermalLossChannel, phase: PhaseNoise = NO_PHASE_NOISE
) -> DvChannelStats:
    """Qubit statistics of thermal loss followed by phase diffusion.

    The phase noise acts independently on each rail after the loss, leaving
    Z-basis populations (and the success probability) untouched while
    damping rail coherence by r = exp(-variance/2) per rail:

        q_z = lam / 2
        q_x = q_y = ((1 - lam)(1 - r^2) + lam) / 2
    """
    lam = depolarizing_parameter(channel)
    r_sq = phase.coherence**2
    q_z = 0.5 * lam
    q_x = 0.5 * ((1.0 - lam) * (1.0 - r_sq) + lam)
    return DvChannelStats(
        lam=lam,
        p_success=success_probability(channel),
        q_x=q_x,
        q_y=q_x,
        q_z=q_z,
        gamma=channel.gamma,
    )
