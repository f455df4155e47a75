"""Closed-form qubit statistics of the thermal-loss + dephasing channel."""

import math

import pytest
from hypothesis import given, strategies as st

from qkdcompare.channel import (
    NO_PHASE_NOISE,
    PhaseNoise,
    ThermalLossChannel,
    combined_channel_stats,
    depolarizing_parameter,
    success_probability,
    thermal_qber,
)
from qkdcompare.errors import DegenerateChannelError, DomainError

# 50-digit reference values for eta = 0.8, n_th = 0.1.
LAM_08_01 = 0.01088031651829871414441
PS_08_01 = 0.7472061805702446978294
QZ_08_01 = 0.005440158259149357072206
# eta = 0.6, n_th = 0.2, sigma2 = 0.04.
QX_06_02_004 = 0.07411815640411205255354


def test_depolarizing_parameter_reference_value():
    channel = ThermalLossChannel(eta=0.8, n_th=0.1)
    assert depolarizing_parameter(channel) == pytest.approx(LAM_08_01, abs=1e-15)


def test_success_probability_reference_value():
    channel = ThermalLossChannel(eta=0.8, n_th=0.1)
    assert success_probability(channel) == pytest.approx(PS_08_01, abs=1e-15)


def test_thermal_qber_is_half_lambda():
    channel = ThermalLossChannel(eta=0.8, n_th=0.1)
    assert thermal_qber(channel) == pytest.approx(QZ_08_01, abs=1e-15)


def test_combined_stats_dephased_qx():
    stats = combined_channel_stats(
        ThermalLossChannel(eta=0.6, n_th=0.2), PhaseNoise(0.04)
    )
    assert stats.q_x == pytest.approx(QX_06_02_004, abs=1e-15)
    assert stats.q_y == stats.q_x


def test_no_dephasing_gives_symmetric_qbers():
    stats = combined_channel_stats(ThermalLossChannel(eta=0.4, n_th=0.7))
    assert stats.q_x == pytest.approx(stats.q_z, abs=1e-15)
    assert stats.q_y == pytest.approx(stats.q_z, abs=1e-15)


def test_pure_loss_has_no_errors():
    stats = combined_channel_stats(ThermalLossChannel(eta=0.35, n_th=0.0))
    assert stats.q_z == 0.0
    assert stats.q_x == 0.0
    assert stats.p_success == pytest.approx(0.35, abs=1e-15)


def test_degenerate_channel_rejected():
    with pytest.raises(DegenerateChannelError):
        depolarizing_parameter(ThermalLossChannel(eta=0.0, n_th=0.0))


@pytest.mark.parametrize("eta", [-0.1, 1.2])
def test_transmissivity_domain(eta):
    with pytest.raises(DomainError):
        ThermalLossChannel(eta=eta, n_th=0.1)


def test_negative_occupation_rejected():
    with pytest.raises(DomainError):
        ThermalLossChannel(eta=0.5, n_th=-0.01)


def test_negative_phase_variance_rejected():
    with pytest.raises(DomainError):
        PhaseNoise(-1e-9)


def test_phase_coherence_value():
    assert PhaseNoise(0.04).coherence == pytest.approx(math.exp(-0.02), abs=1e-16)
    assert NO_PHASE_NOISE.coherence == 1.0


@given(
    eta=st.floats(min_value=1e-6, max_value=1.0),
    n_th=st.floats(min_value=0.0, max_value=50.0),
    sigma2=st.floats(min_value=0.0, max_value=10.0),
)
def test_stats_stay_in_range(eta, n_th, sigma2):
    stats = combined_channel_stats(
        ThermalLossChannel(eta=eta, n_th=n_th), PhaseNoise(sigma2)
    )
    assert 0.0 <= stats.lam < 1.0
    assert 0.0 < stats.p_success <= 1.0
    assert 0.0 <= stats.q_z <= 0.5
    # dephasing can only add errors in the X basis
    assert stats.q_z <= stats.q_x <= 0.5 + 1e-12


def test_lambda_increases_with_occupation():
    values = [
        depolarizing_parameter(ThermalLossChannel(eta=0.7, n_th=n))
        for n in (0.05, 0.2, 0.8, 2.0)
    ]
    assert values == sorted(values)
