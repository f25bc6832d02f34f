"""Effective two-mode generator and its spectral analysis.

The amplitude equations da/dt = M a are governed by a 2x2 complex
matrix whose off-diagonals carry, on top of the Hermitian coupling
-i*Omega, a real environment-induced (EI) contribution K_j set by the
difference of the relaxation rates at the hybridized-mode frequencies
omega0 +/- Omega.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .model import (
    ComplexFrequency,
    DiagonalMode,
    EiMode,
    PowerLaw,
    SystemConfig,
    rate_at,
)


class GradientUnsupported(ValueError):
    """Gradient-form EI coupling requested for a non-power-law spectrum."""


class ModeMismatch(ValueError):
    """Closed-form eigenfrequencies requested for an incompatible config."""


@dataclass(frozen=True)
class EffectiveGenerator:
    """2x2 generator of the amplitude equations plus its EI strengths."""

    m: np.ndarray
    k1: float
    k2: float


@dataclass(frozen=True)
class EigenDecomposition:
    """Ordered eigenfrequencies, eigenvectors and per-state interaction energy.

    Eigenfrequencies are sorted by descending real part (ties broken by
    descending imaginary part); each pair satisfies M v = -i w v.  The
    defective flag marks a numerically collinear (exceptional-point)
    eigenvector pair.
    """

    eigenfrequencies: tuple[ComplexFrequency, ComplexFrequency]
    eigenvectors: tuple[np.ndarray, np.ndarray]
    interaction_energies: tuple[float, float]
    delta: float
    defective: bool = False


def ei_coupling(config: SystemConfig, which: int) -> float:
    """EI coupling strength K(Omega, gamma_j) for oscillator `which` (1 or 2)."""
    if config.ei_mode is EiMode.OFF:
        raise ModeMismatch("EI coupling is disabled in this configuration")
    if which not in (1, 2):
        raise ValueError("oscillator index must be 1 or 2")
    gamma = config.gammas[which - 1]
    spectrum = config.spectra[which - 1]
    w0, om = config.omega0, config.coupling
    if config.ei_mode is EiMode.EXACT_DIFFERENCE:
        return 0.5 * (
            rate_at(gamma, spectrum, w0 + om) - rate_at(gamma, spectrum, w0 - om)
        )
    if not isinstance(spectrum, PowerLaw):
        raise GradientUnsupported(
            "gradient-form EI coupling is defined only for power-law spectra"
        )
    return spectrum.exponent * om * gamma / w0


def build_generator(config: SystemConfig) -> EffectiveGenerator:
    """Assemble the 2x2 amplitude-equation generator for a configuration."""
    w0, om = config.omega0, config.coupling
    if config.ei_mode is EiMode.OFF:
        k1 = k2 = 0.0
    else:
        k1 = ei_coupling(config, 1)
        k2 = ei_coupling(config, 2)
    diag = []
    for gamma, spectrum in zip(config.gammas, config.spectra):
        if config.diagonal_mode is DiagonalMode.AVERAGED_RATES and config.ei_mode is not EiMode.OFF:
            gbar = 0.5 * (
                rate_at(gamma, spectrum, w0 + om) + rate_at(gamma, spectrum, w0 - om)
            )
        else:
            gbar = gamma
        diag.append(-1j * w0 - gbar)
    m = np.array(
        [
            [diag[0], -1j * om - k1],
            [-1j * om - k2, diag[1]],
        ],
        dtype=complex,
    )
    return EffectiveGenerator(m=m, k1=k1, k2=k2)


def interaction_energy(eigenvector: np.ndarray, coupling: float) -> float:
    """Interaction energy Omega * 2 Re(a1* a2) of a unit-norm state."""
    v = np.asarray(eigenvector, dtype=complex)
    return float(coupling * 2.0 * (np.conj(v[0]) * v[1]).real)


def _eigenpairs(m: np.ndarray) -> list[tuple[complex, np.ndarray]]:
    """Closed-form eigenpairs of a 2x2 matrix (eigenvalues of m itself)."""
    a, b = complex(m[0, 0]), complex(m[0, 1])
    c, d = complex(m[1, 0]), complex(m[1, 1])
    tr, det = a + d, a * d - b * c
    disc = cmath.sqrt(tr * tr - 4.0 * det)
    lams = (0.5 * (tr + disc), 0.5 * (tr - disc))
    pairs = []
    for lam in lams:
        # Null space of (m - lam I): pick the numerically larger row.
        r1 = (a - lam, b)
        r2 = (c, d - lam)
        row = r1 if abs(r1[0]) + abs(r1[1]) >= abs(r2[0]) + abs(r2[1]) else r2
        if abs(row[0]) + abs(row[1]) == 0.0:
            v = np.array([1.0, 0.0], dtype=complex)
        else:
            v = np.array([-row[1], row[0]], dtype=complex)
        v /= np.linalg.norm(v)
        # Phase convention: largest-magnitude component real and non-negative.
        lead = 0 if abs(v[0]) >= abs(v[1]) else 1
        phase = v[lead] / abs(v[lead]) if abs(v[lead]) > 0 else 1.0
        v = v / phase
        pairs.append((lam, v))
    return pairs


def eigendecompose(gen: EffectiveGenerator, coupling: float | None = None) -> EigenDecomposition:
    """Eigenfrequencies w = i*lambda and phase-fixed eigenvectors of the generator.

    If `coupling` is given, the per-state interaction energies use it;
    otherwise they are inferred from -Im of the off-diagonal average.
    """
    m = np.asarray(gen.m, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError("generator entries must be finite")
    if coupling is None:
        coupling = float(-(m[0, 1] + m[1, 0]).imag / 2.0)
    pairs = _eigenpairs(m)
    freqs = [1j * lam for lam, _ in pairs]
    order = sorted(
        range(2), key=lambda i: (-freqs[i].real, -freqs[i].imag)
    )
    freqs = [freqs[i] for i in order]
    vecs = [pairs[i][1] for i in order]
    cosang = abs(np.vdot(vecs[0], vecs[1]))
    defective = math.acos(min(1.0, cosang)) < 1e-8
    return EigenDecomposition(
        eigenfrequencies=(
            ComplexFrequency.from_complex(freqs[0]),
            ComplexFrequency.from_complex(freqs[1]),
        ),
        eigenvectors=(vecs[0], vecs[1]),
        interaction_energies=(
            interaction_energy(vecs[0], coupling),
            interaction_energy(vecs[1], coupling),
        ),
        delta=abs(freqs[0] - freqs[1]),
        defective=defective,
    )


def closed_form_eigenfrequencies(config: SystemConfig) -> tuple[ComplexFrequency, ComplexFrequency]:
    """Analytic eigenfrequencies for power-law spectra in gradient form.

    Valid only for the gradient EI coupling with diagonal rates taken at
    omega0; serves as the cross-check for the numeric eigensolver.
    """
    if (
        config.ei_mode is not EiMode.GRADIENT_APPROX
        or config.diagonal_mode is not DiagonalMode.RATE_AT_OMEGA0
        or not isinstance(config.spectrum1, PowerLaw)
        or not isinstance(config.spectrum2, PowerLaw)
        or config.spectrum1.exponent != config.spectrum2.exponent
    ):
        raise ModeMismatch(
            "closed form requires gradient EI coupling, rates at omega0, "
            "and a shared power-law exponent"
        )
    w0, om = config.omega0, config.coupling
    g1, g2 = config.gamma1, config.gamma2
    n = config.spectrum1.exponent
    rad = cmath.sqrt(
        om * om * (1.0 - n * n * g1 * g2 / w0**2 - 1j * n * (g1 + g2) / w0)
        - 0.25 * (g1 - g2) ** 2
    )
    base = w0 - 0.5j * (g1 + g2)
    w_pair = sorted((base + rad, base - rad), key=lambda z: (-z.real, -z.imag))
    return (
        ComplexFrequency.from_complex(w_pair[0]),
        ComplexFrequency.from_complex(w_pair[1]),
    )


def trajectory(
    config: SystemConfig, omega_range: tuple[float, float], steps: int
) -> list[tuple[float, ComplexFrequency, ComplexFrequency]]:
    """Eigenfrequency branches along a sweep of the coupling strength.

    Successive points are paired by minimal total complex distance so
    each branch stays continuous through quasi-degeneracies, instead of
    following the global ordering convention.
    """
    if steps < 2:
        raise ValueError("need at least two sweep points")
    lo, hi = omega_range
    if not (0.0 <= lo <= hi < config.omega0):
        raise ValueError("sweep range must lie in [0, omega0)")
    couplings = np.linspace(lo, hi, steps)
    out: list[tuple[float, ComplexFrequency, ComplexFrequency]] = []
    prev: tuple[complex, complex] | None = None
    for om in couplings:
        dec = eigendecompose(build_generator(replace(config, coupling=float(om))))
        w = (dec.eigenfrequencies[0].value, dec.eigenfrequencies[1].value)
        if prev is not None:
            straight = abs(w[0] - prev[0]) + abs(w[1] - prev[1])
            swapped = abs(w[1] - prev[0]) + abs(w[0] - prev[1])
            if swapped < straight:
                w = (w[1], w[0])
        prev = w
        out.append(
            (
                float(om),
                ComplexFrequency.from_complex(w[0]),
                ComplexFrequency.from_complex(w[1]),
            )
        )
    return out
