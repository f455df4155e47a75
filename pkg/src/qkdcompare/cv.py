"""Asymptotic key rates of the Gaussian continuous-variable protocols.

Covers the entanglement-based squeezed-state protocol with homodyne
detection (Sqz-Hom), its trusted-detector-noise variant (NSqz-Hom) and the
coherent-state heterodyne protocol (GG02), all with reverse reconciliation
at unit efficiency. States are two-mode Gaussian with covariance

    gamma = [[a I2, c Z2], [c Z2, b I2]],   Z2 = diag(1, -1)

in shot-noise units where the vacuum variance is 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import NO_PHASE_NOISE, PhaseNoise, ThermalLossChannel
from .dv import KeyRateResult, Protocol, _result
from .entropy import bosonic_entropy
from .errors import DomainError, UnphysicalStateError
from .optim import golden_section_max

# Uncertainty-relation slack: the smaller symplectic eigenvalue may round
# below 1 by this much before the state is rejected as unphysical.
SYMPLECTIC_TOL = 1e-9

# Trusted-noise optimizer: search domain [0, XI_MAX] shot-noise units with a
# log-spaced coarse grid of XI_COARSE points (plus the exact zero).
XI_MAX = 100.0
XI_COARSE = 128
XI_TOL = 1e-6

# Modulation optimizer: mu in [1, MU_CAP] (15 dB squeezing cap).
MU_CAP = 10.0**1.5
MU_COARSE = 64
MU_TOL = 1e-6


@dataclass(frozen=True)
class CvSource:
    """Two-mode squeezed vacuum source with quadrature variance ``mu``."""

    mu: float

    def __post_init__(self) -> None:
        if self.mu < 1.0:
            raise DomainError(f"source variance {self.mu!r} below vacuum")

    @classmethod
    def from_squeezing_db(cls, squeezing_db: float) -> "CvSource":
        """Source whose squeezed quadrature sits ``squeezing_db`` below shot noise."""
        return cls(mu=10.0 ** (squeezing_db / 10.0))

    @property
    def v_a(self) -> float:
        """Modulation variance mu - 1 of the equivalent prepare-and-measure scheme."""
        return self.mu - 1.0

    @property
    def v_sq(self) -> float:
        """Squeezed quadrature variance 1/mu."""
        return 1.0 / self.mu

    @property
    def v_sig(self) -> float:
        """Variance (mu^2 - 1)/mu of the modulated squeezed quadrature."""
        return (self.mu**2 - 1.0) / self.mu

    @property
    def squeezing_db(self) -> float:
        """Squeezing strength 10 log10(mu) in dB."""
        return 10.0 * math.log10(self.mu)


@dataclass(frozen=True)
class CvExcessNoise:
    """Excess noise epsilon referred to the channel output or input.

    ``at_output`` (default) adds epsilon directly to Bob's variance;
    ``at_input`` scales it by the transmissivity first.
    """

    epsilon: float = 0.0
    placement: str = "at_output"

    def __post_init__(self) -> None:
        if self.epsilon < 0.0:
            raise DomainError(f"excess noise {self.epsilon!r} is negative")
        if self.placement not in ("at_output", "at_input"):
            raise DomainError(f"unknown excess-noise placement {self.placement!r}")

    def at_bob(self, eta: float) -> float:
        """Noise variance added to Bob's quadratures."""
        if self.placement == "at_input":
            return eta * self.epsilon
        return self.epsilon


NO_EXCESS_NOISE = CvExcessNoise(0.0)


def phase_excess_noise(
    source: CvSource, phase: PhaseNoise, placement: str = "at_output"
) -> CvExcessNoise:
    """Excess noise produced by wrapped-normal phase diffusion.

    epsilon = 2 V_A (1 - exp(-variance/2)), quoted per quadrature.
    """
    eps = 2.0 * source.v_a * (1.0 - phase.coherence)
    return CvExcessNoise(epsilon=eps, placement=placement)


def combine_phase_variances(v_phi: float, v_theta: float) -> float:
    """Total phase variance of independent diffusion mechanisms (e.g. laser
    linewidth plus modulator timing jitter)."""
    if v_phi < 0.0 or v_theta < 0.0:
        raise DomainError("phase variances must be nonnegative")
    return v_phi + v_theta


@dataclass(frozen=True)
class CvCovariance:
    """Standard-form two-mode covariance (a, b, c) in shot-noise units."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if self.a < 1.0 - SYMPLECTIC_TOL or self.b < 1.0 - SYMPLECTIC_TOL:
            raise UnphysicalStateError(
                f"mode variances ({self.a}, {self.b}) below vacuum"
            )
        nu_lo = self.symplectic_eigenvalues[1]
        if nu_lo < 1.0 - SYMPLECTIC_TOL:
            raise UnphysicalStateError(
                f"covariance violates the uncertainty relation (nu = {nu_lo})"
            )

    @property
    def delta(self) -> float:
        """Symplectic invariant a^2 + b^2 - 2 c^2."""
        return self.a**2 + self.b**2 - 2.0 * self.c**2

    @property
    def det(self) -> float:
        """Determinant (a b - c^2)^2 of the full 4x4 matrix."""
        return (self.a * self.b - self.c**2) ** 2

    @property
    def symplectic_eigenvalues(self) -> tuple[float, float]:
        """(nu1, nu2) with nu1 >= nu2, from the closed-form invariants."""
        delta = self.delta
        gap = delta**2 - 4.0 * self.det
        root = math.sqrt(max(gap, 0.0))
        nu1_sq = 0.5 * (delta + root)
        nu2_sq = 0.5 * (delta - root)
        return math.sqrt(max(nu1_sq, 0.0)), math.sqrt(max(nu2_sq, 0.0))

    def matrix(self) -> np.ndarray:
        """Explicit 4x4 covariance matrix in xpxp ordering."""
        z2 = np.diag([1.0, -1.0])
        top = np.hstack([self.a * np.eye(2), self.c * z2])
        bot = np.hstack([self.c * z2, self.b * np.eye(2)])
        return np.vstack([top, bot])


def build_covariance(
    source: CvSource,
    channel: ThermalLossChannel,
    excess: CvExcessNoise = NO_EXCESS_NOISE,
) -> CvCovariance:
    """Covariance of Alice's retained mode and Bob's received mode.

    The thermal-loss channel acts on Bob's half of the two-mode squeezed
    vacuum; excess noise (e.g. from phase diffusion) adds to Bob's variance
    only, leaving the correlation ``c`` untouched.
    """
    eta, n_th = channel.eta, channel.n_th
    mu = source.mu
    a = mu
    c = math.sqrt(eta * (mu**2 - 1.0))
    b = eta * mu + (1.0 - eta) * (2.0 * n_th + 1.0) + excess.at_bob(eta)
    return CvCovariance(a=a, b=b, c=c)


def _entanglement_entropy(cov: CvCovariance) -> float:
    nu1, nu2 = cov.symplectic_eigenvalues
    return bosonic_entropy(0.5 * (nu1 - 1.0)) + bosonic_entropy(0.5 * (nu2 - 1.0))


def sqz_hom_rate(cov: CvCovariance) -> KeyRateResult:
    """Squeezed-state homodyne rate K = I_AB - chi_EB.

    I_AB = (1/2) log2(b / V_B|A) with V_B|A = b - c^2/a; the Holevo term
    conditions Eve on Bob's noiseless x-quadrature outcome, with conditional
    symplectic eigenvalue lambda3 = sqrt(a (a - c^2/b)).
    """
    a, b, c = cov.a, cov.b, cov.c
    v_b_given_a = b - c**2 / a
    mutual = 0.5 * math.log2(b / v_b_given_a)
    nu3 = math.sqrt(a * (a - c**2 / b))
    holevo = _entanglement_entropy(cov) - bosonic_entropy(0.5 * (nu3 - 1.0))
    raw = mutual - holevo
    return _result(Protocol.SQZ_HOM, raw, mutual_information=mutual,
                   holevo=holevo, nu=(*cov.symplectic_eigenvalues, nu3))


def sqz_hom_trusted_noise_rate(cov: CvCovariance, xi_b: float) -> KeyRateResult:
    """Squeezed-state homodyne rate with trusted detector noise xi_b.

    The added noise enters both the mutual information and Eve's
    conditioning; her conditional symplectic eigenvalues solve

        t^2 - A t + B = 0,
        A = (b + a D + xi Delta) / (b + xi),
        B = D (a + xi D) / (b + xi),      D = a b - c^2.

    At xi_b = 0 this collapses to the noiseless pair (lambda3, 1).
    """
    if xi_b < 0.0:
        raise DomainError(f"trusted noise {xi_b!r} is negative")
    a, b, c = cov.a, cov.b, cov.c
    d = a * b - c**2
    mutual = 0.5 * math.log2((b + xi_b) / (b - c**2 / a + xi_b))
    big_a = (b + a * d + xi_b * cov.delta) / (b + xi_b)
    big_b = d * (a + xi_b * d) / (b + xi_b)
    gap = big_a**2 - 4.0 * big_b
    root = math.sqrt(max(gap, 0.0))
    nu3 = math.sqrt(max(0.5 * (big_a + root), 0.0))
    nu4 = math.sqrt(max(0.5 * (big_a - root), 0.0))
    conditional = bosonic_entropy(0.5 * (nu3 - 1.0)) + bosonic_entropy(0.5 * (nu4 - 1.0))
    holevo = _entanglement_entropy(cov) - conditional
    raw = mutual - holevo
    return _result(Protocol.NSQZ_HOM, raw, optimal_param=xi_b,
                   mutual_information=mutual, holevo=holevo,
                   nu=(*cov.symplectic_eigenvalues, nu3, nu4))


def optimize_trusted_noise(cov: CvCovariance, xi_max: float = XI_MAX) -> KeyRateResult:
    """Maximize the trusted-noise rate over xi_b in [0, xi_max].

    Scans zero plus a log-spaced coarse grid, then refines by golden
    section. Falls back to xi_b = 0 whenever added noise does not help.
    """
    grid = [0.0] + list(np.geomspace(1e-6, xi_max, XI_COARSE - 1))

    def raw_at(xi: float) -> float:
        return sqz_hom_trusted_noise_rate(cov, xi).raw_rate

    xi_best, _ = golden_section_max(raw_at, 0.0, xi_max, tol=XI_TOL, grid=grid)
    return sqz_hom_trusted_noise_rate(cov, xi_best)


def gg02_heterodyne_rate(
    source: CvSource,
    channel: ThermalLossChannel,
    excess: CvExcessNoise = NO_EXCESS_NOISE,
) -> KeyRateResult:
    """Coherent-state protocol with heterodyne detection (GG02).

    Both quadratures carry key; each heterodyne port adds one vacuum unit,
    so I_AB = log2((b + 1) / (b - c^2/(a+1) + 1)). Eve is conditioned on
    Bob's heterodyne outcome with lambda3 = a - c^2/(b + 1). Dropping the
    measurement vacua would inflate I_AB past the channel's secret-key
    capacity at low transmissivity.
    """
    cov = build_covariance(source, channel, excess)
    a, b, c = cov.a, cov.b, cov.c
    mutual = math.log2((b + 1.0) / (b - c**2 / (a + 1.0) + 1.0))
    nu3 = a - c**2 / (b + 1.0)
    holevo = _entanglement_entropy(cov) - bosonic_entropy(0.5 * (nu3 - 1.0))
    raw = mutual - holevo
    return _result(Protocol.GG02, raw, mutual_information=mutual,
                   holevo=holevo, nu=(*cov.symplectic_eigenvalues, nu3))


def optimize_modulation(
    protocol: Protocol,
    channel: ThermalLossChannel,
    phase: PhaseNoise = NO_PHASE_NOISE,
    mu_max: float = MU_CAP,
    excess_placement: str = "at_output",
) -> KeyRateResult:
    """Maximize a CV protocol rate over the source variance mu in [1, mu_max].

    Phase noise is converted to excess noise at each candidate mu (it scales
    with V_A), so the optimizer sees the full trade-off. For NSqz-Hom the
    trusted noise is re-optimized inside the objective.
    """
    if protocol not in (Protocol.SQZ_HOM, Protocol.NSQZ_HOM, Protocol.GG02):
        raise DomainError(f"{protocol} has no modulation variance to optimize")
    if mu_max < 1.0:
        raise DomainError(f"mu_max {mu_max!r} below vacuum")

    def result_at(mu: float) -> KeyRateResult:
        source = CvSource(mu=mu)
        excess = phase_excess_noise(source, phase, placement=excess_placement)
        if protocol is Protocol.GG02:
            return gg02_heterodyne_rate(source, channel, excess)
        cov = build_covariance(source, channel, excess)
        if protocol is Protocol.NSQZ_HOM:
            return optimize_trusted_noise(cov)
        return sqz_hom_rate(cov)

    mu_best, _ = golden_section_max(
        lambda mu: result_at(mu).raw_rate, 1.0, mu_max,
        tol=MU_TOL, coarse=MU_COARSE,
    )
    inner = result_at(mu_best)
    diagnostics = dict(inner.diagnostics)
    diagnostics["mu"] = mu_best
    if protocol is Protocol.NSQZ_HOM:
        diagnostics["xi_b"] = inner.optimal_param
    return KeyRateResult(
        protocol=protocol,
        raw_rate=inner.raw_rate,
        rate=inner.rate,
        optimal_param=mu_best,
        diagnostics=diagnostics,
    )
