"""Fibre-link loss model and timing-jitter conversion."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .channel import PhaseNoise
from .errors import DomainError

DEFAULT_ATTENUATION_DB_PER_KM = 0.2


@dataclass(frozen=True)
class LinkModel:
    """Exponential fibre loss: eta = 10^(-attenuation * distance / 10)."""

    distance_km: float = 0.0
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM

    def __post_init__(self) -> None:
        if self.distance_km < 0.0:
            raise DomainError(f"distance {self.distance_km!r} km is negative")
        if self.attenuation_db_per_km <= 0.0:
            raise DomainError(
                f"attenuation {self.attenuation_db_per_km!r} dB/km must be positive"
            )

    @property
    def eta(self) -> float:
        return 10.0 ** (-self.attenuation_db_per_km * self.distance_km / 10.0)

    @classmethod
    def from_eta(
        cls, eta: float, attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM
    ) -> "LinkModel":
        if not 0.0 < eta <= 1.0:
            raise DomainError(f"transmissivity {eta!r} outside (0, 1]")
        distance = -10.0 * math.log10(eta) / attenuation_db_per_km
        return cls(distance_km=distance, attenuation_db_per_km=attenuation_db_per_km)


def eta_from_distance(
    distance_km: float,
    attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM,
) -> float:
    return LinkModel(distance_km, attenuation_db_per_km).eta


def distance_from_eta(
    eta: float, attenuation_db_per_km: float = DEFAULT_ATTENUATION_DB_PER_KM
) -> float:
    return LinkModel.from_eta(eta, attenuation_db_per_km).distance_km


@dataclass(frozen=True)
class JitterSpec:
    """Detector/source timing jitter against the pulse period.

    fwhm_s is the full width at half maximum of the timing distribution in
    seconds; rep_rate_hz the pulse repetition rate.
    """

    fwhm_s: float
    rep_rate_hz: float

    def __post_init__(self) -> None:
        if self.fwhm_s < 0.0:
            raise DomainError(f"jitter FWHM {self.fwhm_s!r} s is negative")
        if self.rep_rate_hz <= 0.0:
            raise DomainError(f"repetition rate {self.rep_rate_hz!r} Hz must be positive")
        if self.fwhm_s >= self.dt:
            warnings.warn(
                f"jitter FWHM {self.fwhm_s} s is not below the pulse period "
                f"{self.dt} s; the phase-variance formula is outside its "
                "meaningful range",
                stacklevel=2,
            )

    @property
    def dt(self) -> float:
        """Pulse period in seconds."""
        return 1.0 / self.rep_rate_hz


def jitter_to_phase_noise(jitter: JitterSpec) -> PhaseNoise:
    """Phase variance sigma^2 = (2 pi fwhm)^2 / (2 sqrt(2 ln 2) dt)^2."""
    width = 2.0 * math.pi * jitter.fwhm_s
    scale = 2.0 * math.sqrt(2.0 * math.log(2.0)) * jitter.dt
    return PhaseNoise(variance=(width / scale) ** 2)
