"""Truncated-Fock-space oracle for the dual-rail thermal-loss channel.

Everything here is brute force on purpose: beamsplitter amplitudes come from
expanding creation-operator monomials, the thermal environment is an explicit
photon-number mixture, and dephasing factors are obtained by quadrature over
the wrapped-normal phase density. The closed forms elsewhere in the package
are validated against these routines, never the other way around.

Convention: the beamsplitter maps a_sig -> t a_sig - r a_env and
a_env -> r a_sig + t a_env with t = sqrt(eta), r = sqrt(1 - eta), acting on
creation operators. Signs cancel in every probability; coherences carry them
consistently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb

from .channel import NO_PHASE_NOISE, PhaseNoise, ThermalLossChannel
from .errors import QuadratureError, TruncationError

# Thermal tail mass allowed beyond the cutoff.
TAIL_BOUND = 1e-8
# Wrapped-normal quadrature floor (nodes) and wrap range.
MIN_QUADRATURE_NODES = 2048
WRAP_RANGE = 6


def default_cutoff(n_th: float) -> int:
    """Fock cutoff with tail mass (N/(N+1))^(cutoff+1) comfortably below TAIL_BOUND."""
    return math.ceil(40.0 * n_th + 20.0)


def thermal_tail_mass(n_th: float, cutoff: int) -> float:
    if n_th == 0.0:
        return 0.0
    return (n_th / (n_th + 1.0)) ** (cutoff + 1)


def wrapped_normal_coherence(
    variance: float,
    order: int = 1,
    min_nodes: int = MIN_QUADRATURE_NODES,
    wraps: int = WRAP_RANGE,
) -> float:
    """E[exp(i k theta)] for theta wrapped-normal, by trapezoid quadrature.

    Integrates cos(k theta) against the explicitly wrapped density on
    [-pi, pi], summing branches k in [-wraps, wraps]. The node count grows
    as the density narrows so the periodic trapezoid rule stays spectrally
    accurate. The zeroth moment is monitored as a quadrature guard.
    """
    if variance < 0.0:
        raise QuadratureError(f"phase variance {variance!r} is negative")
    if variance == 0.0:
        return 1.0
    sigma = math.sqrt(variance)
    nodes = max(min_nodes, int(math.ceil(16.0 / max(sigma, 1e-5))))
    theta = np.linspace(-math.pi, math.pi, nodes + 1)
    shifts = 2.0 * math.pi * np.arange(-wraps, wraps + 1)
    density = np.exp(-((theta[None, :] + shifts[:, None]) ** 2) / (2.0 * variance)).sum(axis=0)
    density /= math.sqrt(2.0 * math.pi) * sigma
    mass = np.trapezoid(density, theta)
    if abs(mass - 1.0) > 1e-9:
        raise QuadratureError(
            f"wrapped-normal density mass {mass!r} deviates from 1; "
            f"variance {variance!r} outside the supported range"
        )
    return float(np.trapezoid(density * np.cos(order * theta), theta))


def _amplitude_tables(eta: float, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-environment-input beamsplitter amplitudes for 0/1 signal photons.

    Returns (a0, a1), each of shape (cutoff+1, cutoff+2). Row m holds the
    output amplitudes for environment input |m>, indexed by the output
    environment occupation f; the output signal occupation is implicit
    through photon conservation (u = m - f for a0, u = m + 1 - f for a1).
    """
    t = math.sqrt(eta)
    r = math.sqrt(1.0 - eta)
    m = np.arange(cutoff + 1, dtype=float)[:, None]
    f = np.arange(cutoff + 2, dtype=float)[None, :]
    in_range0 = f <= m
    c_mf = comb(m, f) * in_range0
    powers_t = t ** f
    powers_r = r ** np.maximum(m - f, 0.0)
    a0 = np.sqrt(c_mf) * powers_t * powers_r * in_range0

    # |1, m> output: (t a+ - r e+) acting on the expansion above.
    gain = np.sqrt(c_mf * np.maximum(m - f + 1.0, 0.0)) * t * powers_t * powers_r
    in_range1 = (f >= 1.0) & (f <= m + 1.0)
    c_mf1 = comb(m, f - 1.0) * in_range1
    swap = (
        np.sqrt(c_mf1 * f)
        * t ** np.maximum(f - 1.0, 0.0)
        * r ** np.maximum(m - f + 2.0, 0.0)
        * in_range1
    )
    a1 = gain * in_range0 - swap
    return a0, a1


class FockOperatorRep:
    """Dense truncated-Fock representation of one thermal-loss rail."""

    def __init__(self, channel: ThermalLossChannel, cutoff: int | None = None):
        self.channel = channel
        self.cutoff = default_cutoff(channel.n_th) if cutoff is None else int(cutoff)
        tail = thermal_tail_mass(channel.n_th, self.cutoff)
        if tail >= TAIL_BOUND:
            raise TruncationError(
                f"thermal tail mass {tail:.3e} at cutoff {self.cutoff} "
                f"exceeds {TAIL_BOUND:.0e} (n_th = {channel.n_th})"
            )
        self.tail_mass = tail
        n = channel.n_th
        m = np.arange(self.cutoff + 1, dtype=float)
        if n == 0.0:
            weights = np.zeros(self.cutoff + 1)
            weights[0] = 1.0
        else:
            weights = (n / (n + 1.0)) ** m / (n + 1.0)
        self.thermal_weights = weights
        self.a0, self.a1 = _amplitude_tables(channel.eta, self.cutoff)

    def shell_unitary(self, shell: int) -> np.ndarray:
        """Beamsplitter block on the photon-number shell u + f = shell.

        Entry [u, n] is <u, shell-u| U |n, shell-n>, from the binomial
        expansion of (t a+ - r e+)^n (r a+ + t e+)^(shell-n). The sum over
        expansion terms cancels catastrophically at large shells in floating
        point, so it runs in exact integer arithmetic: eta is a binary
        rational p/2^d, every term an integer, one rounding at the end.
        """
        from fractions import Fraction

        # Fraction(float) is exact, with a power-of-two denominator.
        eta_frac = Fraction(self.channel.eta)
        d = eta_frac.denominator.bit_length() - 1
        p = eta_frac.numerator
        q = (1 << d) - p
        t = math.sqrt(self.channel.eta)
        r = math.sqrt(1.0 - self.channel.eta)
        p_pow = [p**i for i in range(shell + 1)]
        q_pow = [q**i for i in range(shell + 1)]
        dim = shell + 1
        block = np.zeros((dim, dim), dtype=complex)
        for n in range(dim):
            mm = shell - n
            for u in range(dim):
                f_out = shell - u
                pt = (mm - u) % 2
                pr = (n + u) % 2
                a0 = (mm - u - pt) // 2  # eta exponent offset, may be negative
                b0 = (n + u - pr) // 2
                total = 0
                lo, hi = max(0, u - mm, -a0), min(n, u, b0)
                for j in range(lo, hi + 1):
                    term = (
                        math.comb(n, j)
                        * math.comb(mm, u - j)
                        * p_pow[a0 + j]
                        * q_pow[b0 - j]
                    )
                    total += term if (n - j) % 2 == 0 else -term
                if total == 0:
                    continue
                value = Fraction(total, 1 << (d * (a0 + b0))) if d else Fraction(total)
                norm = math.sqrt(
                    float(
                        Fraction(
                            math.factorial(u) * math.factorial(f_out),
                            math.factorial(n) * math.factorial(mm),
                        )
                    )
                )
                block[u, n] = norm * float(value) * t**pt * r**pr
        return block

    def unitarity_defect(self, shell: int) -> float:
        """max |B+ B - I| on the given photon-number shell."""
        block = self.shell_unitary(shell)
        gram = block.conj().T @ block
        return float(np.max(np.abs(gram - np.eye(shell + 1))))

    def transfer_block(
        self, x: int, y: int, phase: PhaseNoise = NO_PHASE_NOISE
    ) -> np.ndarray:
        """Output operator of the rail channel applied to |x><y|, x, y in {0, 1}.

        Returns a (cutoff+2, cutoff+2) real array supported on the diagonal
        u - v = x - y. Phase diffusion multiplies the whole block by the
        wrapped-normal coherence of order x - y (quadrature, not closed form).
        """
        if x not in (0, 1) or y not in (0, 1):
            raise ValueError("transfer blocks are defined on the qubit subspace")
        amps = {0: self.a0, 1: self.a1}
        prod = self.thermal_weights[:, None] * amps[x] * amps[y]
        dim = self.cutoff + 2
        block = np.zeros((dim, dim))
        d = x - y
        for u in range(dim):
            v = u - d
            if 0 <= v < dim:
                block[u, v] = np.trace(prod, offset=x - u)
        if phase.variance > 0.0 and d != 0:
            block = block * wrapped_normal_coherence(phase.variance, order=abs(d))
        return block

    def rail_probabilities(self) -> dict[tuple[int, int], float]:
        """P(|i> -> |j>) for i, j in {0, 1}, by explicit trace against projectors."""
        probs = {}
        for i in (0, 1):
            block = self.transfer_block(i, i)
            for j in (0, 1):
                probs[(i, j)] = float(block[j, j])
        return probs


@dataclass(frozen=True)
class OracleRailStats:
    """Single-rail transition probabilities and their dual-rail compositions."""

    p_00: float
    p_01: float
    p_10: float
    p_11: float
    p_z_keep: float
    p_z_flip: float
    p_success: float
    q_z: float


def oracle_rail_probabilities(
    channel: ThermalLossChannel, cutoff: int | None = None
) -> OracleRailStats:
    """Rail transition probabilities and the Z-basis statistics they imply.

    The dual-rail logical states are |0_L> = |1,0> and |1_L> = |0,1>; a kept
    bit requires exactly one photon across the two output rails.
    """
    rep = FockOperatorRep(channel, cutoff)
    p = rep.rail_probabilities()
    keep = p[(1, 1)] * p[(0, 0)]
    flip = p[(1, 0)] * p[(0, 1)]
    p_success = keep + flip
    q_z = flip / p_success if p_success > 0.0 else 0.0
    return OracleRailStats(
        p_00=p[(0, 0)],
        p_01=p[(0, 1)],
        p_10=p[(1, 0)],
        p_11=p[(1, 1)],
        p_z_keep=keep,
        p_z_flip=flip,
        p_success=p_success,
        q_z=q_z,
    )


_PLUS = np.array([[0.5, 0.5], [0.5, 0.5]])
_RECOMBINER = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class QubitChannelAction:
    """Un-normalized action of the dual-rail channel on the qubit subspace.

    ``blocks[(x, y)]`` is the 2x2 single-photon-subspace image of the logical
    input |x><y|. Trace decrease reflects postselection on one total photon.
    """

    blocks: dict[tuple[int, int], np.ndarray]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros((2, 2), dtype=complex)
        for (x, y), block in self.blocks.items():
            out += rho[x, y] * block
        return out

    @property
    def p_success(self) -> float:
        return float(np.trace(self.blocks[(0, 0)]).real)

    def choi(self) -> np.ndarray:
        """Un-normalized Choi matrix sum_xy |x><y| (x) M[|x><y|]."""
        c = np.zeros((4, 4), dtype=complex)
        for (x, y), block in self.blocks.items():
            c[2 * x : 2 * x + 2, 2 * y : 2 * y + 2] = block
        return c

    def x_basis_qber(self) -> float:
        rho = self.apply(_PLUS)
        wrong = 0.5 * (rho[0, 0] - rho[0, 1] - rho[1, 0] + rho[1, 1]).real
        return wrong / float(np.trace(rho).real)


def oracle_qubit_channel(
    channel: ThermalLossChannel,
    phase: PhaseNoise = NO_PHASE_NOISE,
    cutoff: int | None = None,
) -> QubitChannelAction:
    """Dual-rail channel action on the logical qubit, every element simulated.

    Each rail evolves independently through the truncated beamsplitter +
    thermal environment; logical matrix-unit images are products of rail
    transfer-block elements, projected on the single-photon subspace.
    """
    rep = FockOperatorRep(channel, cutoff)
    rail = {
        (x, y): rep.transfer_block(x, y, phase) for x in (0, 1) for y in (0, 1)
    }
    # Logical basis occupancies: |0_L> = (1, 0), |1_L> = (0, 1).
    occ = {0: (1, 0), 1: (0, 1)}
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for x in (0, 1):
        for y in (0, 1):
            x1, x2 = occ[x]
            y1, y2 = occ[y]
            block = np.zeros((2, 2))
            for i in (0, 1):
                for j in (0, 1):
                    i1, i2 = occ[i]
                    j1, j2 = occ[j]
                    block[i, j] = (
                        rail[(x1, y1)][i1, j1] * rail[(x2, y2)][i2, j2]
                    )
            blocks[(x, y)] = block
    return QubitChannelAction(blocks=blocks)


def oracle_x_basis_qber(
    channel: ThermalLossChannel,
    cutoff: int | None = None,
    phase: PhaseNoise = NO_PHASE_NOISE,
) -> float:
    """X-basis QBER via the recombining-beamsplitter route.

    Sends (|10> + |01>)/sqrt(2) through both rails, recombines the output
    single-photon subspace on a 50:50 beamsplitter and reads the two port
    populations; the wrong-port fraction is the QBER.
    """
    action = oracle_qubit_channel(channel, phase, cutoff)
    rho = action.apply(_PLUS)
    ports = _RECOMBINER @ rho @ _RECOMBINER.conj().T
    correct = ports[0, 0].real
    wrong = ports[1, 1].real
    return wrong / (correct + wrong)
