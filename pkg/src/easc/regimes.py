"""Coupling-regime classification: transition points, phase diagrams,
critical coupling, and real-part splitting curves.

The weak-to-strong coupling transition is located at the coupling
strength where the complex-plane distance between the two
eigenfrequencies reaches its minimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import EiMode, Flat, ReservoirSpectrum, SystemConfig
from .spectral import build_generator, eigendecompose, trajectory

GOLDEN = 2.0 / (1.0 + math.sqrt(5.0))
COARSE_POINTS = 401
LADDER_RATIO = 1.5


class NoInteriorMinimum(RuntimeError):
    """The eigendistance is monotone over the search band."""


class NotConverged(RuntimeError):
    """The transition-boundary supremum was still rising at gamma1_max."""


class Unbounded(RuntimeError):
    """No finite critical coupling exists (flat spectrum)."""


@dataclass(frozen=True)
class PhaseDiagram:
    """Grid of WC/SC classifications with the per-row transition boundary.

    boundary holds one transition coupling per gamma1 row (NaN for rows
    where the eigendistance had no interior minimum, listed in
    flagged_rows).  regime contains "WC"/"SC" strings.
    """

    gamma1_grid: np.ndarray
    omega_grid: np.ndarray
    ratio: float
    regime: np.ndarray
    delta: np.ndarray
    interaction_energy_state1: np.ndarray
    interaction_energy_state2: np.ndarray
    boundary: np.ndarray
    flagged_rows: tuple[int, ...]
    omega_cp: float | None
    converged: bool


def eigendistance(config: SystemConfig, coupling: float) -> float:
    """Distance between the two eigenfrequencies at a given coupling."""
    return eigendecompose(
        build_generator(replace(config, coupling=coupling))
    ).delta


def _golden_min(f, lo: float, hi: float, rel_tol: float = 1e-8) -> float:
    """Golden-section argmin of a unimodal function on [lo, hi]."""
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    scale = max(abs(lo), abs(hi), 1e-300)
    while hi - lo > rel_tol * scale:
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return 0.5 * (lo + hi)


def transition_coupling(
    gamma1: float,
    gamma2: float,
    spectrum1: ReservoirSpectrum,
    spectrum2: ReservoirSpectrum,
    band: tuple[float, float],
    *,
    omega0: float = 1.0,
    ei_mode: EiMode = EiMode.EXACT_DIFFERENCE,
    rel_tol: float = 1e-8,
) -> float:
    """Coupling strength at which the eigendistance is minimal.

    A 401-point coarse scan brackets the minimum, then golden-section
    search refines it.  A minimum on the left band edge is returned
    as-is (the degenerate gamma1 == gamma2 case); a minimum on the right
    edge means the distance is still falling and raises
    NoInteriorMinimum.
    """
    lo, hi = band
    if not (0.0 < lo < hi < omega0):
        raise ValueError("search band must lie in (0, omega0)")
    config = SystemConfig(
        coupling=lo,
        gamma1=gamma1,
        gamma2=gamma2,
        spectrum1=spectrum1,
        spectrum2=spectrum2,
        omega0=omega0,
        ei_mode=ei_mode,
    )
    grid = np.linspace(lo, hi, COARSE_POINTS)
    vals = [eigendistance(config, float(om)) for om in grid]
    imin = int(np.argmin(vals))
    if imin == 0:
        return float(grid[0])
    if imin == COARSE_POINTS - 1:
        raise NoInteriorMinimum(
            "eigendistance decreases monotonically up to the band edge"
        )
    return _golden_min(
        lambda om: eigendistance(config, om),
        float(grid[imin - 1]),
        float(grid[imin + 1]),
        rel_tol=rel_tol,
    )


def _search_band(
    gamma1: float, gamma2: float, omega0: float, band_cap: float
) -> tuple[float, float]:
    """Search band for the transition, scaled to the loss-rate splitting."""
    ep = 0.5 * abs(gamma1 - gamma2)
    hi = min(4.0 * max(ep, 1e-9 * omega0), band_cap)
    return (1e-6 * hi, hi)


def _spectrum_band_cap(
    spectrum1: ReservoirSpectrum, spectrum2: ReservoirSpectrum, omega0: float
) -> float:
    """Largest coupling for which both spectra cover omega0 +/- Omega."""
    cap = 0.9 * omega0
    for s in (spectrum1, spectrum2):
        lo, hi = s.band
        cap = min(cap, 0.999 * (hi - omega0), 0.999 * (omega0 - lo))
    if cap <= 0.0:
        raise ValueError("spectra do not cover a band around omega0")
    return cap


def critical_coupling(
    ratio: float,
    spectrum: ReservoirSpectrum,
    gamma1_max: float = 10.0,
    tol: float = 1e-3,
    *,
    gamma1_min: float = 1e-4,
    omega0: float = 1.0,
    strict: bool = False,
) -> tuple[float, bool]:
    """Supremum of the transition coupling over a geometric loss-rate ladder.

    Walks gamma1 from gamma1_min up to gamma1_max with ratio 1.5,
    tracking the running supremum of the transition coupling; the
    supremum converges once it stops changing (relative change < tol)
    over a full ladder decade.  Returns (omega_cp, converged); with
    strict=True an unconverged supremum raises NotConverged.
    """
    if isinstance(spectrum, Flat):
        raise Unbounded("a flat spectrum has no finite critical coupling")
    band_cap = _spectrum_band_cap(spectrum, spectrum, omega0)
    per_decade = max(1, round(math.log(10.0) / math.log(LADDER_RATIO)))
    sup = 0.0
    history: list[float] = []
    gamma1 = gamma1_min
    while gamma1 <= gamma1_max * (1.0 + 1e-12):
        gamma2 = ratio * gamma1
        try:
            om_star = transition_coupling(
                gamma1,
                gamma2,
                spectrum,
                spectrum,
                _search_band(gamma1, gamma2, omega0, band_cap),
                omega0=omega0,
            )
        except NoInteriorMinimum:
            om_star = 0.0  # boundary already saturated below this rate
        sup = max(sup, om_star)
        history.append(sup)
        gamma1 *= LADDER_RATIO
    converged = (
        len(history) > per_decade
        and history[-1] > 0.0
        and (history[-1] - history[-1 - per_decade]) <= tol * history[-1]
    )
    if strict and not converged:
        raise NotConverged("transition boundary still rising at gamma1_max")
    return sup, converged


def phase_diagram(
    gamma1_grid,
    ratio: float,
    omega_grid,
    spectrum1: ReservoirSpectrum,
    spectrum2: ReservoirSpectrum,
    *,
    omega0: float = 1.0,
    ei_mode: EiMode = EiMode.EXACT_DIFFERENCE,
) -> PhaseDiagram:
    """Classify every (gamma1, Omega) grid cell as WC or SC.

    Each row's transition coupling splits the row; cells also record the
    eigendistance and the two per-state interaction energies.
    """
    g_grid = np.asarray(gamma1_grid, dtype=float)
    o_grid = np.asarray(omega_grid, dtype=float)
    if g_grid.size == 0 or o_grid.size == 0:
        raise ValueError("grids must be non-empty")
    if np.any(np.diff(g_grid) <= 0) or np.any(np.diff(o_grid) <= 0):
        raise ValueError("grids must be strictly increasing")
    band_cap = _spectrum_band_cap(spectrum1, spectrum2, omega0)
    n_g, n_o = g_grid.size, o_grid.size
    regime = np.empty((n_g, n_o), dtype=object)
    delta = np.empty((n_g, n_o))
    e1 = np.empty((n_g, n_o))
    e2 = np.empty((n_g, n_o))
    boundary = np.empty(n_g)
    flagged: list[int] = []
    sup = 0.0
    for i, g1 in enumerate(g_grid):
        g2 = ratio * g1
        band = _search_band(g1, g2, omega0, band_cap)
        try:
            om_star = transition_coupling(
                g1, g2, spectrum1, spectrum2, band, omega0=omega0, ei_mode=ei_mode
            )
            boundary[i] = om_star
            sup = max(sup, om_star)
        except NoInteriorMinimum:
            # The distance minimum left the band: the whole row is SC.
            boundary[i] = math.nan
            om_star = 0.0
            flagged.append(i)
        config = SystemConfig(
            coupling=0.0,
            gamma1=g1,
            gamma2=g2,
            spectrum1=spectrum1,
            spectrum2=spectrum2,
            omega0=omega0,
            ei_mode=ei_mode,
        )
        for j, om in enumerate(o_grid):
            dec = eigendecompose(
                build_generator(replace(config, coupling=float(om)))
            )
            regime[i, j] = "WC" if om < om_star else "SC"
            delta[i, j] = dec.delta
            e1[i, j] = dec.interaction_energies[0]
            e2[i, j] = dec.interaction_energies[1]
    finite = boundary[np.isfinite(boundary)]
    omega_cp = float(np.max(finite)) if finite.size else None
    running = np.maximum.accumulate(np.nan_to_num(boundary, nan=0.0))
    decade_start = int(np.searchsorted(g_grid, g_grid[-1] / 10.0))
    converged = bool(
        decade_start < n_g - 1
        and running[-1] > 0.0
        and (running[-1] - running[decade_start]) <= 1e-2 * running[-1]
    )
    return PhaseDiagram(
        gamma1_grid=g_grid,
        omega_grid=o_grid,
        ratio=ratio,
        regime=regime,
        delta=delta,
        interaction_energy_state1=e1,
        interaction_energy_state2=e2,
        boundary=boundary,
        flagged_rows=tuple(flagged),
        omega_cp=omega_cp,
        converged=converged,
    )


def real_splitting_curve(
    config: SystemConfig, omega_range: tuple[float, float], steps: int
) -> list[tuple[float, float]]:
    """Difference of the real eigenfrequency parts along a coupling sweep."""
    return [
        (om, w1.re - w2.re)
        for om, w1, w2 in trajectory(config, omega_range, steps)
    ]
