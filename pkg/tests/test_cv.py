"""Gaussian protocol rates, verified against an independent matrix oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracle_gaussian import (
    chi_heterodyne,
    chi_noisy_homodyne,
    purify,
    symplectic_eigenvalues_numeric,
    vn_entropy,
)
from qkdcompare.channel import PhaseNoise, ThermalLossChannel
from qkdcompare.cv import (
    MU_CAP,
    CvCovariance,
    CvExcessNoise,
    CvSource,
    build_covariance,
    combine_phase_variances,
    gg02_heterodyne_rate,
    optimize_modulation,
    optimize_trusted_noise,
    phase_excess_noise,
    sqz_hom_rate,
    sqz_hom_trusted_noise_rate,
)
from qkdcompare.dv import Protocol
from qkdcompare.errors import DomainError, UnphysicalStateError

# 50-digit closed-form references.
SQZ_ETA1_15DB = 4.982892142331043521805
SQZ_05_15DB = 0.9483123135688518609695
SQZ_06_N005_EPS002 = 0.8718797499176031308924
TRUSTED_06_XI03 = 0.661068050611190666555
TRUSTED_05_N12_XI5 = -0.158177045798117456925
GG02_VA10_07_N008_EPS001 = 0.4546734556976592260051
EPS_15DB_S004 = 1.212743207488380901679


def test_source_conversions():
    source = CvSource.from_squeezing_db(15.0)
    assert source.mu == pytest.approx(10.0**1.5, abs=1e-12)
    assert source.squeezing_db == pytest.approx(15.0, abs=1e-12)
    assert source.v_a == pytest.approx(source.mu - 1.0, abs=1e-15)
    assert source.v_sq * source.mu == pytest.approx(1.0, abs=1e-15)


def test_source_below_vacuum_rejected():
    with pytest.raises(DomainError):
        CvSource(mu=0.99)


def test_unphysical_covariance_rejected():
    with pytest.raises(UnphysicalStateError):
        CvCovariance(a=2.0, b=2.0, c=2.5)


def test_sqz_hom_lossless_reference():
    cov = build_covariance(
        CvSource.from_squeezing_db(15.0), ThermalLossChannel(eta=1.0, n_th=0.0)
    )
    result = sqz_hom_rate(cov)
    assert result.rate == pytest.approx(SQZ_ETA1_15DB, abs=1e-9)
    assert result.diagnostics["holevo"] == pytest.approx(0.0, abs=1e-9)


def test_sqz_hom_half_loss_reference():
    cov = build_covariance(
        CvSource.from_squeezing_db(15.0), ThermalLossChannel(eta=0.5, n_th=0.0)
    )
    assert sqz_hom_rate(cov).rate == pytest.approx(SQZ_05_15DB, abs=1e-12)


def test_sqz_hom_with_excess_noise_reference():
    cov = build_covariance(
        CvSource.from_squeezing_db(15.0),
        ThermalLossChannel(eta=0.6, n_th=0.05),
        CvExcessNoise(0.02),
    )
    assert sqz_hom_rate(cov).rate == pytest.approx(SQZ_06_N005_EPS002, abs=1e-12)


def test_trusted_noise_references():
    cov = build_covariance(
        CvSource.from_squeezing_db(15.0),
        ThermalLossChannel(eta=0.6, n_th=0.05),
        CvExcessNoise(0.02),
    )
    assert sqz_hom_trusted_noise_rate(cov, 0.3).rate == pytest.approx(
        TRUSTED_06_XI03, abs=1e-12
    )
    cov2 = build_covariance(
        CvSource.from_squeezing_db(15.0), ThermalLossChannel(eta=0.5, n_th=1.2)
    )
    deep = sqz_hom_trusted_noise_rate(cov2, 5.0)
    assert deep.raw_rate == pytest.approx(TRUSTED_05_N12_XI5, abs=1e-12)
    assert deep.rate == 0.0


def test_trusted_noise_collapses_at_zero():
    cov = build_covariance(
        CvSource.from_squeezing_db(12.0), ThermalLossChannel(eta=0.7, n_th=0.3)
    )
    plain = sqz_hom_rate(cov)
    trusted = sqz_hom_trusted_noise_rate(cov, 0.0)
    assert trusted.raw_rate == pytest.approx(plain.raw_rate, abs=1e-12)


def test_trusted_noise_negative_rejected():
    cov = build_covariance(CvSource(mu=5.0), ThermalLossChannel(eta=0.7, n_th=0.0))
    with pytest.raises(DomainError):
        sqz_hom_trusted_noise_rate(cov, -0.1)


def test_trusted_noise_helps_in_deep_thermal_noise():
    cov = build_covariance(
        CvSource.from_squeezing_db(15.0), ThermalLossChannel(eta=0.5, n_th=1.2)
    )
    result = optimize_trusted_noise(cov)
    assert result.raw_rate > sqz_hom_rate(cov).raw_rate
    assert result.optimal_param > 0.0


def test_gg02_lossless_reference():
    # each heterodyne port adds a vacuum unit: I = log2((mu+1)/2) at eta=1
    result = gg02_heterodyne_rate(CvSource(mu=4.0), ThermalLossChannel(eta=1.0, n_th=0.0))
    assert result.rate == pytest.approx(math.log2(2.5), abs=1e-12)
    assert result.diagnostics["holevo"] == pytest.approx(0.0, abs=1e-9)


def test_gg02_never_exceeds_capacity_upper_bound():
    # dropping the measurement vacua from I_AB would break this at low eta
    from qkdcompare.bounds import plob_bounds

    for eta in (0.1, 0.3, 0.5, 0.7, 0.9):
        channel = ThermalLossChannel(eta=eta, n_th=0.01)
        rate = gg02_heterodyne_rate(CvSource(mu=10.0**1.5), channel).rate
        assert rate <= plob_bounds(channel).upper + 1e-12


def test_gg02_below_sqz_hom_at_matched_source():
    channel = ThermalLossChannel(eta=0.5, n_th=0.0)
    source = CvSource(mu=10.0**1.5)
    gg02 = gg02_heterodyne_rate(source, channel).rate
    sqz = sqz_hom_rate(build_covariance(source, channel)).rate
    assert gg02 < sqz


def test_gg02_noisy_reference():
    result = gg02_heterodyne_rate(
        CvSource(mu=11.0),
        ThermalLossChannel(eta=0.7, n_th=0.08),
        CvExcessNoise(0.01),
    )
    assert result.rate == pytest.approx(GG02_VA10_07_N008_EPS001, abs=1e-12)


def test_phase_excess_noise_closed_form():
    eps = phase_excess_noise(CvSource.from_squeezing_db(15.0), PhaseNoise(0.04))
    assert eps.epsilon == pytest.approx(EPS_15DB_S004, abs=1e-12)
    assert eps.placement == "at_output"


def test_excess_noise_placement():
    eps = CvExcessNoise(0.1, placement="at_input")
    assert eps.at_bob(0.4) == pytest.approx(0.04, abs=1e-15)
    assert CvExcessNoise(0.1).at_bob(0.4) == pytest.approx(0.1, abs=1e-15)


def test_combine_phase_variances_adds():
    assert combine_phase_variances(0.01, 0.02) == pytest.approx(0.03, abs=1e-15)
    with pytest.raises(DomainError):
        combine_phase_variances(-0.01, 0.02)


# --- independent matrix oracle ------------------------------------------

ORACLE_GRID = [
    (0.3, 0.0), (0.3, 0.6), (0.7, 0.0), (0.7, 0.4), (0.95, 1.1),
]


@pytest.mark.parametrize("eta,n_th", ORACLE_GRID)
def test_sqz_hom_holevo_matches_matrix_oracle(eta, n_th):
    cov = build_covariance(
        CvSource.from_squeezing_db(12.0), ThermalLossChannel(eta=eta, n_th=n_th)
    )
    closed = sqz_hom_rate(cov).diagnostics["holevo"]
    assert closed == pytest.approx(chi_noisy_homodyne(cov.matrix(), 0.0), abs=1e-9)


@pytest.mark.parametrize("eta,n_th", ORACLE_GRID)
@pytest.mark.parametrize("xi_b", [0.3, 1.0, 7.0])
def test_trusted_holevo_matches_matrix_oracle(eta, n_th, xi_b):
    cov = build_covariance(
        CvSource.from_squeezing_db(12.0), ThermalLossChannel(eta=eta, n_th=n_th)
    )
    closed = sqz_hom_trusted_noise_rate(cov, xi_b).diagnostics["holevo"]
    assert closed == pytest.approx(chi_noisy_homodyne(cov.matrix(), xi_b), abs=1e-9)


@pytest.mark.parametrize("eta,n_th", ORACLE_GRID)
def test_gg02_holevo_matches_matrix_oracle(eta, n_th):
    source = CvSource(mu=9.0)
    channel = ThermalLossChannel(eta=eta, n_th=n_th)
    closed = gg02_heterodyne_rate(source, channel).diagnostics["holevo"]
    gamma = build_covariance(source, channel).matrix()
    assert closed == pytest.approx(chi_heterodyne(gamma), abs=1e-9)


def test_purification_is_pure():
    cov = build_covariance(CvSource(mu=6.0), ThermalLossChannel(eta=0.6, n_th=0.8))
    nus = symplectic_eigenvalues_numeric(purify(cov.matrix()))
    assert np.allclose(nus, 1.0, atol=1e-9)
    assert vn_entropy(purify(cov.matrix())) == pytest.approx(0.0, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(
    mu=st.floats(min_value=1.01, max_value=60.0),
    eta=st.floats(min_value=0.05, max_value=1.0),
    n_th=st.floats(min_value=0.0, max_value=3.0),
    eps=st.floats(min_value=0.0, max_value=0.5),
)
def test_closed_form_symplectic_spectrum_matches_numeric(mu, eta, n_th, eps):
    cov = build_covariance(
        CvSource(mu=mu), ThermalLossChannel(eta=eta, n_th=n_th), CvExcessNoise(eps)
    )
    closed = sorted(cov.symplectic_eigenvalues)
    numeric = symplectic_eigenvalues_numeric(cov.matrix())
    assert closed == pytest.approx(list(numeric), abs=1e-8)


# --- modulation optimization ---------------------------------------------

def test_optimizer_saturates_cap_without_phase_noise():
    result = optimize_modulation(
        Protocol.SQZ_HOM, ThermalLossChannel(eta=0.6, n_th=0.05)
    )
    assert result.optimal_param == pytest.approx(MU_CAP, rel=1e-6)


def test_optimizer_finds_interior_maximum_under_phase_noise():
    result = optimize_modulation(
        Protocol.SQZ_HOM, ThermalLossChannel(eta=0.6, n_th=0.05), PhaseNoise(0.04)
    )
    mu_star = result.optimal_param
    assert 1.0 < mu_star < MU_CAP * 0.99
    # local optimality against nearby fixed-mu evaluations
    channel = ThermalLossChannel(eta=0.6, n_th=0.05)
    for mu in (mu_star * 0.9, mu_star * 1.1):
        src = CvSource(mu=mu)
        eps = phase_excess_noise(src, PhaseNoise(0.04))
        other = sqz_hom_rate(build_covariance(src, channel, eps)).raw_rate
        assert result.raw_rate >= other - 1e-9


def test_optimizer_rejects_dv_protocols():
    with pytest.raises(DomainError):
        optimize_modulation(Protocol.BB84, ThermalLossChannel(eta=0.6, n_th=0.0))


def test_nsqz_optimizer_reports_xi():
    result = optimize_modulation(
        Protocol.NSQZ_HOM, ThermalLossChannel(eta=0.5, n_th=1.0)
    )
    assert "xi_b" in result.diagnostics
    assert result.raw_rate >= optimize_modulation(
        Protocol.SQZ_HOM, ThermalLossChannel(eta=0.5, n_th=1.0)
    ).raw_rate - 1e-9
