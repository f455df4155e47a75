"""Scalar entropy kernels shared by the DV and CV key-rate formulas.

All entropies are in bits. Each kernel uses the branch-based continuous
extension at the domain edges (x log2 x -> 0 as x -> 0) instead of relying
on floating-point limits.
"""

from __future__ import annotations

import math

from .errors import DomainError

# Arguments this far outside a closed domain are snapped to the edge;
# anything worse raises DomainError.
EDGE_TOL = 1e-12

# Mean occupations above this negative floor are treated as exact zero
# (they arise from symplectic eigenvalues computed as 1 - O(eps)).
OCCUPATION_FLOOR = -1e-9


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy h(x) = -x log2 x - (1-x) log2(1-x).

    Parameters
    ----------
    x : float
        Probability in [0, 1]; values within ``EDGE_TOL`` of the interval
        are clamped to it.

    Returns
    -------
    float
        Entropy in bits, with h(0) = h(1) = 0 exactly.
    """
    if x < -EDGE_TOL or x > 1.0 + EDGE_TOL:
        raise DomainError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -(x * math.log2(x) + (1.0 - x) * math.log2(1.0 - x))


def entropy_term(x: float) -> float:
    """Single entropy summand H(x) = -x log2 x with H(0) = 0.

    Used to accumulate the entropy of an eigenvalue list term by term.
    """
    if x < -EDGE_TOL or x > 1.0 + EDGE_TOL:
        raise DomainError(f"entropy_term argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0:
        return 0.0
    return -x * math.log2(x)


def bosonic_entropy(x: float) -> float:
    """Thermal-state entropy G(x) = (x+1) log2(x+1) - x log2 x.

    Parameters
    ----------
    x : float
        Mean occupation number. Small negative round-off down to
        ``OCCUPATION_FLOOR`` is treated as zero.

    Returns
    -------
    float
        Entropy in bits, G(0) = 0 exactly.
    """
    if x < OCCUPATION_FLOOR:
        raise DomainError(f"bosonic_entropy argument {x!r} is negative")
    if x <= 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def circular_mean_wrapped_normal(variance: float) -> float:
    """Mean resultant length r = exp(-variance/2) of a wrapped normal phase.

    ``variance`` is the phase variance in squared radians; r multiplies any
    coherence that survives one pass of phase diffusion.
    """
    if variance < 0.0:
        raise DomainError(f"phase variance {variance!r} is negative")
    return math.exp(-0.5 * variance)
