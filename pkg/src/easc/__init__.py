"""Spectra, coupling regimes, and dynamics of two coupled lossy
oscillators with frequency-dependent reservoir densities of states."""

from .model import (
    ComplexFrequency,
    DiagonalMode,
    EiMode,
    Flat,
    PowerLaw,
    ReservoirSpectrum,
    SystemConfig,
    Tabulated,
    load_tabulated_csv,
    rate_at,
    relative_density,
)
from .spectral import (
    EffectiveGenerator,
    EigenDecomposition,
    build_generator,
    closed_form_eigenfrequencies,
    ei_coupling,
    eigendecompose,
    interaction_energy,
    trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "ComplexFrequency",
    "DiagonalMode",
    "EiMode",
    "EffectiveGenerator",
    "EigenDecomposition",
    "Flat",
    "PowerLaw",
    "ReservoirSpectrum",
    "SystemConfig",
    "Tabulated",
    "build_generator",
    "closed_form_eigenfrequencies",
    "ei_coupling",
    "eigendecompose",
    "interaction_energy",
    "load_tabulated_csv",
    "rate_at",
    "relative_density",
    "trajectory",
    "__version__",
]
