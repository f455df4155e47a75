"""Repeaterless capacity bounds and rate normalization."""

import math

import pytest

from qkdcompare.bounds import CapacityBounds, normalize_rate, plob_bounds
from qkdcompare.channel import ThermalLossChannel, combined_channel_stats
from qkdcompare.dv import six_state_rate
from qkdcompare.errors import NormalizationUnavailableError

# 50-digit references at eta = 0.8, n_th = 0.1.
LOWER_08_01 = 1.838481409273697713921
UPPER_08_01 = 1.870674218762433948708


def test_thermal_bounds_reference():
    bounds = plob_bounds(ThermalLossChannel(eta=0.8, n_th=0.1))
    assert bounds.lower == pytest.approx(LOWER_08_01, abs=1e-14)
    assert bounds.upper == pytest.approx(UPPER_08_01, abs=1e-14)
    assert not bounds.eb_breaking


def test_pure_loss_bounds_coincide_exactly():
    for eta in (0.1, 0.37, 0.9):
        bounds = plob_bounds(ThermalLossChannel(eta=eta, n_th=0.0))
        expected = -math.log2(1.0 - eta)
        assert abs(bounds.lower - expected) <= 1e-12
        assert abs(bounds.upper - expected) <= 1e-12


def test_entanglement_breaking_threshold():
    # threshold n = eta/(1-eta) = 4 at eta = 0.8
    below = plob_bounds(ThermalLossChannel(eta=0.8, n_th=3.999))
    at = plob_bounds(ThermalLossChannel(eta=0.8, n_th=4.0))
    assert not below.eb_breaking and below.upper is not None
    assert at.eb_breaking and at.upper is None


def test_lossless_channel_bounds_diverge():
    bounds = plob_bounds(ThermalLossChannel(eta=1.0, n_th=0.7))
    assert bounds.lower == math.inf
    assert bounds.upper == math.inf
    assert not bounds.eb_breaking


def test_lower_bound_goes_negative_in_deep_thermal_noise():
    bounds = plob_bounds(ThermalLossChannel(eta=0.5, n_th=1.5))
    assert bounds.lower < 0.0


def test_normalize_rate_basic():
    channel = ThermalLossChannel(eta=0.8, n_th=0.1)
    result = six_state_rate(combined_channel_stats(channel))
    bounds = plob_bounds(channel)
    value = normalize_rate(result, bounds)
    assert value == pytest.approx(result.rate / bounds.upper, abs=1e-15)
    assert 0.0 <= value <= 1.0


def test_normalize_rejects_entanglement_breaking():
    channel = ThermalLossChannel(eta=0.3, n_th=2.0)
    bounds = plob_bounds(channel)
    assert bounds.eb_breaking
    result = six_state_rate(combined_channel_stats(channel))
    with pytest.raises(NormalizationUnavailableError):
        normalize_rate(result, bounds)


def test_normalize_rejects_nonpositive_upper():
    result = six_state_rate(
        combined_channel_stats(ThermalLossChannel(eta=0.5, n_th=0.1))
    )
    with pytest.raises(NormalizationUnavailableError):
        normalize_rate(result, CapacityBounds(lower=-1.0, upper=0.0, eb_breaking=False))
