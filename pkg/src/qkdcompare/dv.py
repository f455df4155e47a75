"""Asymptotic key rates of the dual-rail discrete-variable protocols.

Implements the plain BB84 and six-state rates from the measured error rates
of the post-selected qubit channel, plus their noisy-preprocessing variants
in which Alice flips each sifted key bit with probability q before error
correction. Rates are per polarization channel, hence the overall factor
P_S / 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

from .channel import DvChannelStats
from .entropy import binary_entropy, entropy_term
from .errors import UnphysicalStateError
from .optim import golden_section_max

# Bell-diagonal weights this far below zero mean the QBER triple is unphysical.
WEIGHT_TOL = 1e-12

# Preprocessing optimizer: coarse grid size on q in [0, 1/2] and bracket tol.
Q_COARSE = 64
Q_TOL = 1e-6

# Inner worst-case search over the free Bell weight for BB84-type protocols.
ADVERSARY_COARSE = 33
ADVERSARY_TOL = 1e-9


class Protocol(enum.Enum):
    """Protocols whose rates this package computes."""

    BB84 = "BB84"
    SIX_STATE = "6S"
    NOISY_BB84 = "NBB84"
    NOISY_SIX_STATE = "N6S"
    SQZ_HOM = "Sqz-Hom"
    NSQZ_HOM = "NSqz-Hom"
    GG02 = "GG02"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class KeyRateResult:
    """Outcome of a rate calculation.

    ``raw_rate`` may be negative; ``rate`` is clamped at zero. When the
    protocol optimizes a free parameter its optimum lands in
    ``optimal_param``; anything else worth keeping goes to ``diagnostics``.
    """

    protocol: Protocol
    raw_rate: float
    rate: float
    optimal_param: float | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)


def _result(protocol, raw, optimal_param=None, **diag) -> KeyRateResult:
    return KeyRateResult(
        protocol=protocol,
        raw_rate=raw,
        rate=max(raw, 0.0),
        optimal_param=optimal_param,
        diagnostics=diag,
    )


@dataclass(frozen=True)
class SixStateDecomposition:
    """Bell-diagonal weights (lam00, lam01, lam10, lam11) of the qubit channel.

    The index pair (i, j) labels the Bell state Z^i X^j applied to phi+, so
    q_z = lam10 + lam11, q_x = lam01 + lam11, q_y = lam01 + lam10.
    """

    lam00: float
    lam01: float
    lam10: float
    lam11: float

    def __post_init__(self) -> None:
        weights = (self.lam00, self.lam01, self.lam10, self.lam11)
        for w in weights:
            if w < -WEIGHT_TOL or w > 1.0 + WEIGHT_TOL:
                raise UnphysicalStateError(
                    f"Bell-diagonal weight {w!r} outside [0, 1]; "
                    "the QBER triple is unphysical"
                )
        total = sum(weights)
        if abs(total - 1.0) > 1e-9:
            raise UnphysicalStateError(f"Bell weights sum to {total!r}, not 1")

    @classmethod
    def from_qbers(cls, q_x: float, q_y: float, q_z: float) -> "SixStateDecomposition":
        """Invert the QBER triple into Bell weights."""
        return cls(
            lam00=1.0 - 0.5 * (q_x + q_y + q_z),
            lam01=0.5 * (q_x + q_y - q_z),
            lam10=0.5 * (-q_x + q_y + q_z),
            lam11=0.5 * (q_x - q_y + q_z),
        )

    def clamped(self) -> tuple[float, float, float, float]:
        return tuple(min(max(w, 0.0), 1.0) for w in
                     (self.lam00, self.lam01, self.lam10, self.lam11))


def bb84_rate(stats: DvChannelStats) -> KeyRateResult:
    """Plain BB84 rate (P_S/2) [1 - h(q_z) - h(q_x)].

    Args:
        stats: post-selected qubit channel statistics.

    Returns:
        KeyRateResult with the Devetak-Winter bracket in diagnostics.
    """
    bracket = 1.0 - binary_entropy(stats.q_z) - binary_entropy(stats.q_x)
    raw = 0.5 * stats.p_success * bracket
    return _result(Protocol.BB84, raw, devetak_winter=bracket)


def six_state_rate(stats: DvChannelStats) -> KeyRateResult:
    """Plain six-state rate (P_S/2) [1 - sum_ij H(lam_ij)].

    Args:
        stats: post-selected qubit channel statistics (all three QBERs used).

    Raises:
        UnphysicalStateError: if the QBER triple has no Bell-diagonal state.
    """
    dec = SixStateDecomposition.from_qbers(stats.q_x, stats.q_y, stats.q_z)
    bracket = 1.0 - sum(entropy_term(w) for w in dec.clamped())
    raw = 0.5 * stats.p_success * bracket
    return _result(Protocol.SIX_STATE, raw, devetak_winter=bracket)


def _two_level_entropy(p: float, r: float, s: float) -> float:
    """Entropy in bits of the 2x2 matrix [[p, s], [s, r]] (p, r >= 0)."""
    root = math.sqrt((p - r) ** 2 + 4.0 * s * s)
    hi = 0.5 * (p + r + root)
    lo = 0.5 * (p + r - root)
    return entropy_term(hi) + entropy_term(max(lo, 0.0))


def _holevo_bell_diagonal(lams, q: float) -> float:
    """Holevo information chi(U;E) after preprocessing with flip rate q.

    Eve's average state is diagonal in the purification basis with weights
    ``lams``; her state conditioned on Alice's preprocessed bit is block
    2x2 with off-diagonal coherences scaled by (1 - 2q). Both conditionals
    share a spectrum, so chi reduces to two two-level entropies.
    """
    l00, l01, l10, l11 = (max(w, 0.0) for w in lams)
    avg = sum(entropy_term(w) for w in (l00, l01, l10, l11))
    damp = 1.0 - 2.0 * q
    cond = _two_level_entropy(l00, l01, damp * math.sqrt(l00 * l01))
    cond += _two_level_entropy(l10, l11, damp * math.sqrt(l10 * l11))
    return avg - cond


def _devetak_winter(lams, q: float) -> float:
    """Preprocessed rate bracket 1 - h(q_z * q) - chi(U;E) for fixed weights."""
    q_z = lams[2] + lams[3]
    q_eff = q_z * (1.0 - q) + (1.0 - q_z) * q
    return 1.0 - binary_entropy(q_eff) - _holevo_bell_diagonal(lams, q)


def _bb84_weights(q_z: float, q_x: float, lam11: float):
    return (
        1.0 - q_z - q_x + lam11,
        q_x - lam11,
        q_z - lam11,
        lam11,
    )


def _bb84_worst_case_bracket(q_z: float, q_x: float, q: float) -> float:
    """Bracket minimized over Eve's unobserved Bell weight.

    BB84 measures only q_z and q_x, leaving lam11 free inside
    [max(0, q_z + q_x - 1), min(q_z, q_x)]. Eve maximizes her Holevo
    information over that interval.
    """
    lo = max(0.0, q_z + q_x - 1.0)
    hi = min(q_z, q_x)
    q_eff = q_z * (1.0 - q) + (1.0 - q_z) * q
    if hi - lo <= WEIGHT_TOL:
        chi = _holevo_bell_diagonal(_bb84_weights(q_z, q_x, lo), q)
        return 1.0 - binary_entropy(q_eff) - chi

    def chi_of(lam11: float) -> float:
        return _holevo_bell_diagonal(_bb84_weights(q_z, q_x, lam11), q)

    _, chi_max = golden_section_max(
        chi_of, lo, hi, tol=ADVERSARY_TOL, coarse=ADVERSARY_COARSE
    )
    return 1.0 - binary_entropy(q_eff) - chi_max


def _optimize_q(objective) -> tuple[float, float]:
    """Maximize the preprocessing objective over q in [0, 1/2].

    The coarse grid always contains q = 0, so the result never falls below
    the plain protocol value.
    """
    return golden_section_max(objective, 0.0, 0.5, tol=Q_TOL, coarse=Q_COARSE)


def bb84_noisy_rate(stats: DvChannelStats, q: float | None = None) -> KeyRateResult:
    """BB84 with noisy preprocessing.

    Args:
        stats: post-selected qubit channel statistics.
        q: fixed flip probability in [0, 1/2]; None optimizes it.

    Returns:
        KeyRateResult with optimal_param = chosen q.
    """
    q_z, q_x = stats.q_z, stats.q_x

    def objective(qq: float) -> float:
        return _bb84_worst_case_bracket(q_z, q_x, qq)

    if q is None:
        q_best, bracket = _optimize_q(objective)
    else:
        q_best, bracket = q, objective(q)
    raw = 0.5 * stats.p_success * bracket
    return _result(Protocol.NOISY_BB84, raw, optimal_param=q_best,
                   devetak_winter=bracket)


def six_state_noisy_rate(stats: DvChannelStats, q: float | None = None) -> KeyRateResult:
    """Six-state protocol with noisy preprocessing.

    All three QBERs are observed, so Eve's Bell-diagonal state is pinned and
    only the flip probability is optimized.
    """
    dec = SixStateDecomposition.from_qbers(stats.q_x, stats.q_y, stats.q_z)
    lams = dec.clamped()

    def objective(qq: float) -> float:
        return _devetak_winter(lams, qq)

    if q is None:
        q_best, bracket = _optimize_q(objective)
    else:
        q_best, bracket = q, objective(q)
    raw = 0.5 * stats.p_success * bracket
    return _result(Protocol.NOISY_SIX_STATE, raw, optimal_param=q_best,
                   devetak_winter=bracket)
