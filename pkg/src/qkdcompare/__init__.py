"""Key-rate analysis for discrete- and continuous-variable QKD over
thermal-loss channels with phase noise.

The package provides closed-form asymptotic key rates for dual-rail
single-photon protocols (BB84, six-state, and their noisy-preprocessing
variants) and Gaussian protocols (squeezed-state homodyne with optional
trusted detector noise, and coherent-state heterodyne), repeaterless
capacity bounds for benchmarking, frontier solvers, comparison maps, a
numeric Fock-space channel representation for cross-checking, and a
deterministic sweep runner with CSV artifacts.
"""

from ._version import __version__
from .bounds import CapacityBounds, normalize_rate, plob_bounds
from .channel import (
    NO_PHASE_NOISE,
    DvChannelStats,
    PhaseNoise,
    ThermalLossChannel,
    combined_channel_stats,
)
from .compare import (
    max_distance,
    max_tolerable_thermal_noise,
    relative_rate_advantage,
)
from .cv import (
    NO_EXCESS_NOISE,
    CvCovariance,
    CvExcessNoise,
    CvSource,
    build_covariance,
    gg02_heterodyne_rate,
    optimize_modulation,
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
from .errors import (
    ConfigError,
    DegenerateChannelError,
    DomainError,
    KeyRateError,
    MonotonicityError,
    NormalizationUnavailableError,
    QuadratureError,
    TruncationError,
    UndefinedComparisonError,
    UnphysicalStateError,
)
from .fock import FockOperatorRep, oracle_rail_probabilities, oracle_x_basis_qber
from .link import JitterSpec, LinkModel, jitter_to_phase_noise
from .protocols import CV_PROTOCOLS, DV_PROTOCOLS, evaluate_rate

__all__ = [
    "__version__",
    "CapacityBounds",
    "normalize_rate",
    "plob_bounds",
    "NO_PHASE_NOISE",
    "DvChannelStats",
    "PhaseNoise",
    "ThermalLossChannel",
    "combined_channel_stats",
    "max_distance",
    "max_tolerable_thermal_noise",
    "relative_rate_advantage",
    "NO_EXCESS_NOISE",
    "CvCovariance",
    "CvExcessNoise",
    "CvSource",
    "build_covariance",
    "gg02_heterodyne_rate",
    "optimize_modulation",
    "phase_excess_noise",
    "sqz_hom_rate",
    "sqz_hom_trusted_noise_rate",
    "KeyRateResult",
    "Protocol",
    "bb84_noisy_rate",
    "bb84_rate",
    "six_state_noisy_rate",
    "six_state_rate",
    "ConfigError",
    "DegenerateChannelError",
    "DomainError",
    "KeyRateError",
    "MonotonicityError",
    "NormalizationUnavailableError",
    "QuadratureError",
    "TruncationError",
    "UndefinedComparisonError",
    "UnphysicalStateError",
    "FockOperatorRep",
    "oracle_rail_probabilities",
    "oracle_x_basis_qber",
    "JitterSpec",
    "LinkModel",
    "jitter_to_phase_noise",
    "CV_PROTOCOLS",
    "DV_PROTOCOLS",
    "evaluate_rate",
]
