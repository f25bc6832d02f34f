import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from easc.model import (
    Flat,
    NegativeDensity,
    OutOfBand,
    PowerLaw,
    SystemConfig,
    Tabulated,
    load_tabulated_csv,
    rate_at,
    relative_density,
)


def test_flat_is_constant():
    assert relative_density(Flat(), 1.37) == 1.0
    assert relative_density(Flat(), 0.2) == 1.0


def test_power_law_value():
    assert relative_density(PowerLaw(2), 1.08) == pytest.approx(1.1664, abs=1e-15)


def test_tabulated_normalized_at_reference():
    spec = Tabulated((0.9, 1.0, 1.1), (2.0, 4.0, 6.0))
    assert relative_density(spec, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_tabulated_reproduces_samples():
    freqs = (0.8, 0.9, 1.0, 1.1, 1.25)
    dens = (1.0, 3.0, 2.0, 5.0, 4.0)
    spec = Tabulated(freqs, dens)
    for f, d in zip(freqs, dens):
        assert relative_density(spec, f) == pytest.approx(d / 2.0, rel=1e-12)


def test_tabulated_out_of_band():
    spec = Tabulated((0.9, 1.0, 1.1), (1.0, 1.0, 1.0))
    with pytest.raises(OutOfBand):
        spec.relative_density(1.2)


def test_tabulated_negative_density_rejected():
    with pytest.raises(NegativeDensity):
        Tabulated((0.9, 1.0, 1.1), (1.0, -0.5, 1.0))


def test_tabulated_requires_increasing_frequencies():
    with pytest.raises(ValueError):
        Tabulated((0.9, 0.9, 1.1), (1.0, 1.0, 1.0))


def test_tabulated_stays_nonnegative_between_samples():
    spec = Tabulated((0.8, 0.9, 1.0, 1.1), (0.0, 0.0, 1.0, 5.0))
    grid = np.linspace(0.8, 1.1, 500)
    assert min(spec.relative_density(w) for w in grid) >= 0.0


def test_rate_at_examples():
    assert rate_at(0.001, PowerLaw(2), 1.08) == pytest.approx(0.0011664)
    assert rate_at(0.02, Flat(), 0.5) == 0.02
    assert rate_at(0.0, PowerLaw(3), 1.2) == 0.0


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=0.2, max_value=3.0),
)
def test_rate_nonnegative_and_anchored(gamma, exponent, omega):
    spec = PowerLaw(exponent)
    assert rate_at(gamma, spec, omega) >= 0.0
    assert rate_at(gamma, spec, 1.0) == pytest.approx(gamma, abs=1e-300)


@given(st.floats(min_value=0.1, max_value=5.0))
def test_power_law_zero_matches_flat(omega):
    assert relative_density(PowerLaw(0.0), omega) == relative_density(Flat(), omega)


def test_csv_round_trip(tmp_path):
    path = tmp_path / "spectrum.csv"
    path.write_text("omega,rho\n0.9,2.0\n1.0,4.0\n1.1,6.0\n", encoding="utf-8")
    spec = load_tabulated_csv(path)
    assert relative_density(spec, 1.0) == pytest.approx(1.0)
    assert relative_density(spec, 1.1) == pytest.approx(1.5)


def test_csv_bad_header(tmp_path):
    path = tmp_path / "spectrum.csv"
    path.write_text("freq,dos\n0.9,2.0\n1.1,6.0\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_tabulated_csv(path)


def test_system_config_validation():
    with pytest.raises(ValueError):
        SystemConfig(coupling=1.5, gamma1=0.01, gamma2=0.01)
    with pytest.raises(ValueError):
        SystemConfig(coupling=0.05, gamma1=-0.01, gamma2=0.01)
    with pytest.raises(ValueError):
        SystemConfig(coupling=0.05, gamma1=0.01, gamma2=0.01, omega0=0.0)


def test_system_config_accessors():
    cfg = SystemConfig(coupling=0.05, gamma1=0.02, gamma2=0.01)
    assert cfg.gammas == (0.02, 0.01)
    assert cfg.spectra == (Flat(), Flat())
