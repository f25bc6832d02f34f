"""Domain types shared by all modules.

Reservoir spectra describe the relative density of states r(omega) seen
by each oscillator, normalized so that r(omega0) = 1; the physical
relaxation rate at any frequency is then gamma_ref * r(omega).  All
frequencies and rates are expressed in units of the oscillator frequency
omega0 (omega0 = 1 internally unless stated otherwise).
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator


class OutOfBand(ValueError):
    """Tabulated spectrum queried outside the covered frequency band."""


class NegativeDensity(ValueError):
    """Tabulated spectrum input contains a negative density sample."""


class EiMode(enum.Enum):
    """How the environment-induced off-diagonal coupling is computed."""

    OFF = "off"
    EXACT_DIFFERENCE = "exact_difference"
    GRADIENT_APPROX = "gradient_approx"


class DiagonalMode(enum.Enum):
    """Convention for the diagonal relaxation rates of the generator."""

    AVERAGED_RATES = "averaged_rates"
    RATE_AT_OMEGA0 = "rate_at_omega0"


@dataclass(frozen=True)
class ReservoirSpectrum:
    """Base class for relative density-of-states profiles."""

    def relative_density(self, omega: float) -> float:
        raise NotImplementedError

    @property
    def band(self) -> tuple[float, float]:
        """Frequency band over which the spectrum may be queried."""
        return (0.0, math.inf)


@dataclass(frozen=True)
class Flat(ReservoirSpectrum):
    """Frequency-independent density of states: r(omega) = 1."""

    def relative_density(self, omega: float) -> float:
        if omega <= 0.0:
            raise ValueError("frequency must be positive")
        return 1.0


@dataclass(frozen=True)
class PowerLaw(ReservoirSpectrum):
    """Power-law density of states r(omega) = (omega/omega0)**exponent."""

    exponent: float
    omega0: float = 1.0

    def relative_density(self, omega: float) -> float:
        if omega <= 0.0:
            raise ValueError("frequency must be positive")
        return (omega / self.omega0) ** self.exponent


@dataclass(frozen=True)
class Tabulated(ReservoirSpectrum):
    """Sampled density of states, interpolated with a monotone cubic.

    Samples are rescaled on construction so the interpolated value at
    omega0 is exactly 1.  Monotone (PCHIP) interpolation is used so the
    interpolant cannot overshoot below zero between non-negative samples.
    """

    frequencies: tuple[float, ...]
    densities: tuple[float, ...]
    omega0: float = 1.0
    _interp: PchipInterpolator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        freq = np.asarray(self.frequencies, dtype=float)
        dens = np.asarray(self.densities, dtype=float)
        if freq.ndim != 1 or freq.shape != dens.shape or freq.size < 2:
            raise ValueError("need two equal-length 1-d sample arrays")
        if np.any(np.diff(freq) <= 0.0):
            raise ValueError("sample frequencies must be strictly increasing")
        if np.any(dens < 0.0):
            raise NegativeDensity("density samples must be non-negative")
        if not (freq[0] <= self.omega0 <= freq[-1]):
            raise OutOfBand("samples must cover the reference frequency")
        interp = PchipInterpolator(freq, dens, extrapolate=False)
        ref = float(interp(self.omega0))
        if ref <= 0.0:
            raise ValueError("density at the reference frequency must be positive")
        object.__setattr__(
            self, "_interp", PchipInterpolator(freq, dens / ref, extrapolate=False)
        )

    @property
    def band(self) -> tuple[float, float]:
        return (self.frequencies[0], self.frequencies[-1])

    def relative_density(self, omega: float) -> float:
        if omega <= 0.0:
            raise ValueError("frequency must be positive")
        lo, hi = self.band
        if not (lo <= omega <= hi):
            raise OutOfBand(f"frequency {omega} outside tabulated band [{lo}, {hi}]")
        return float(self._interp(omega))


def load_tabulated_csv(path, omega0: float = 1.0) -> Tabulated:
    """Read a two-column CSV (header ``omega,rho``) into a Tabulated spectrum."""
    freqs, dens = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["omega", "rho"]:
            raise ValueError("expected CSV header 'omega,rho'")
        for row in reader:
            if not row:
                continue
            freqs.append(float(row[0]))
            dens.append(float(row[1]))
    return Tabulated(tuple(freqs), tuple(dens), omega0=omega0)


def relative_density(spectrum: ReservoirSpectrum, omega: float) -> float:
    """Relative density of states r(omega), with r(omega0) = 1."""
    return spectrum.relative_density(omega)


def rate_at(gamma_ref: float, spectrum: ReservoirSpectrum, omega: float) -> float:
    """Relaxation rate gamma(omega) = gamma_ref * r(omega)."""
    if gamma_ref < 0.0:
        raise ValueError("reference rate must be non-negative")
    return gamma_ref * spectrum.relative_density(omega)


@dataclass(frozen=True)
class SystemConfig:
    """Full specification of one two-oscillator instance.

    coupling is the Rabi coupling Omega between the oscillators;
    gamma1/gamma2 are the relaxation rates at omega0.
    """

    coupling: float
    gamma1: float
    gamma2: float
    spectrum1: ReservoirSpectrum = Flat()
    spectrum2: ReservoirSpectrum = Flat()
    omega0: float = 1.0
    ei_mode: EiMode = EiMode.EXACT_DIFFERENCE
    diagonal_mode: DiagonalMode = DiagonalMode.AVERAGED_RATES

    def __post_init__(self):
        if self.omega0 <= 0.0:
            raise ValueError("omega0 must be positive")
        if not 0.0 <= self.coupling < self.omega0:
            raise ValueError("coupling must satisfy 0 <= Omega < omega0")
        if self.gamma1 < 0.0 or self.gamma2 < 0.0:
            raise ValueError("relaxation rates must be non-negative")

    @property
    def gammas(self) -> tuple[float, float]:
        return (self.gamma1, self.gamma2)

    @property
    def spectra(self) -> tuple[ReservoirSpectrum, ReservoirSpectrum]:
        return (self.spectrum1, self.spectrum2)


@dataclass(frozen=True)
class ComplexFrequency:
    """Eigenfrequency: re is the oscillation frequency, -im the decay rate."""

    re: float
    im: float

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexFrequency":
        return cls(float(z.real), float(z.imag))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)
