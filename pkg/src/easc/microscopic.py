"""Brute-force oracle: explicit reservoir-mode simulation.

Each reservoir is discretized into evenly spaced modes whose couplings
encode the density-of-states shape; the coupled second-order system is
integrated with velocity-Verlet and the effective 2x2 amplitude
generator is recovered by demodulating the oscillator coordinates at
the carrier frequency and fitting a linear propagator.

A compiled integration kernel is used when available, with a
numpy fallback selected at import time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.signal
from scipy.linalg import logm

from .model import ReservoirSpectrum, rate_at

try:  # pragma: no cover - depends on build environment
    from ._verlet import verlet_two_baths

    KERNEL = "compiled"
except ImportError:  # pragma: no cover
    from ._verlet_np import verlet_two_baths

    KERNEL = "numpy"


class BandTooNarrow(ValueError):
    """Discretization band does not enclose the carrier with enough margin."""


class RecurrenceHorizonExceeded(ValueError):
    """Requested integration time exceeds half the bath recurrence time."""


class PoorFit(RuntimeError):
    """Generator fit residual exceeds 5% of the signal norm."""


@dataclass(frozen=True)
class DiscretizedReservoir:
    """Evenly spaced bath modes calibrated to a target relaxation rate.

    The calibration pi * g(omega)**2 / dw = gamma * r(omega) holds at
    every mode, so the decay rate seen by an oscillator at frequency
    omega equals gamma * r(omega).  t_rec = 2*pi/dw is the Poincare
    recurrence horizon of the finite bath.
    """

    mode_frequencies: np.ndarray
    mode_couplings: np.ndarray
    target_gamma: float
    band: tuple[float, float]

    @property
    def spacing(self) -> float:
        return (self.band[1] - self.band[0]) / self.mode_frequencies.size

    @property
    def t_rec(self) -> float:
        return 2.0 * math.pi / self.spacing


@dataclass(frozen=True)
class MicroSeries:
    """Recorded oscillator coordinates plus the final full state."""

    times: np.ndarray
    positions: np.ndarray  # shape (n_samples, 2)
    omega0: float
    final_state: dict


@dataclass(frozen=True)
class GeneratorFit:
    """Fitted effective generator and the fit residual."""

    matrix: np.ndarray
    residual: float


def discretize_reservoir(
    spectrum: ReservoirSpectrum,
    target_gamma: float,
    band: tuple[float, float],
    mode_count: int,
    *,
    omega0: float = 1.0,
    coupling_max: float = 0.0,
) -> DiscretizedReservoir:
    """Sample a reservoir into `mode_count` evenly spaced modes.

    The band must enclose [omega0 - coupling_max, omega0 + coupling_max]
    with margin at least 10*max(gamma, coupling_max) so the fitted rates
    are not distorted by band truncation.
    """
    lo, hi = band
    if mode_count < 500:
        raise ValueError("need at least 500 bath modes")
    if target_gamma < 0.0:
        raise ValueError("target rate must be non-negative")
    margin = 10.0 * max(target_gamma, coupling_max)
    if lo > omega0 - coupling_max - margin or hi < omega0 + coupling_max + margin:
        raise BandTooNarrow(
            f"band {band} must enclose omega0 +/- {coupling_max + margin:.4g}"
        )
    dw = (hi - lo) / mode_count
    freqs = lo + (np.arange(mode_count) + 0.5) * dw
    rates = np.array([rate_at(target_gamma, spectrum, w) for w in freqs])
    couplings = np.sqrt(rates * dw / math.pi)
    return DiscretizedReservoir(
        mode_frequencies=freqs,
        mode_couplings=couplings,
        target_gamma=target_gamma,
        band=(lo, hi),
    )


def evolve_microscopic(
    omega0: float,
    coupling: float,
    reservoir1: DiscretizedReservoir,
    reservoir2: DiscretizedReservoir,
    initial: tuple[float, float, float, float],
    t_end: float,
    dt: float,
    *,
    record_every: int = 1,
) -> MicroSeries:
    """Velocity-Verlet integration of the oscillators-plus-baths system.

    `initial` is (x1, x2, v1, v2); bath modes start at rest.  The
    oscillator-oscillator spring is kappa**2 = 2*Omega*omega0 and each
    bath mode couples with strength 2*sqrt(omega0*omega_k)*g_k, which
    reproduces the target decay rate at every bath frequency.
    """
    t_rec = min(reservoir1.t_rec, reservoir2.t_rec)
    if t_end > 0.5 * t_rec:
        raise RecurrenceHorizonExceeded(
            f"t_end {t_end:.4g} exceeds half the recurrence time {t_rec:.4g}"
        )
    w_hi = max(reservoir1.band[1], reservoir2.band[1], omega0)
    if dt > 0.02 / w_hi:
        raise ValueError("dt must not exceed 0.02/omega_hi")
    kappa2 = 2.0 * coupling * omega0
    s1 = 2.0 * np.sqrt(omega0 * reservoir1.mode_frequencies) * reservoir1.mode_couplings
    s2 = 2.0 * np.sqrt(omega0 * reservoir2.mode_frequencies) * reservoir2.mode_couplings
    x = np.array([initial[0], initial[1]], dtype=float)
    v = np.array([initial[2], initial[3]], dtype=float)
    y1 = np.zeros(reservoir1.mode_frequencies.size)
    u1 = np.zeros_like(y1)
    y2 = np.zeros(reservoir2.mode_frequencies.size)
    u2 = np.zeros_like(y2)
    n_steps = int(round(t_end / dt))
    ts, xs = verlet_two_baths(
        omega0,
        kappa2,
        reservoir1.mode_frequencies**2,
        s1,
        reservoir2.mode_frequencies**2,
        s2,
        x,
        v,
        y1,
        u1,
        y2,
        u2,
        dt,
        n_steps,
        record_every,
    )
    return MicroSeries(
        times=ts,
        positions=xs,
        omega0=omega0,
        final_state={"x": x, "v": v, "y1": y1, "u1": u1, "y2": y2, "u2": u2},
    )


def demodulate(
    times: np.ndarray,
    positions: np.ndarray,
    omega0: float,
    cutoff: float | None = None,
) -> tuple[np.ndarray, int]:
    """Complex envelopes of real signals oscillating near omega0.

    Multiplies by exp(+i*omega0*t) and low-passes (default cutoff
    omega0/10).  A boxcar of duration pi/omega0 runs first: its response
    has an exact zero at 2*omega0, suppressing the counter-rotating
    image before the windowed-sinc filter removes broadband residue.
    Returns (envelopes, edge) where the first/last `edge` samples carry
    filter transients and should be excluded from fits.
    """
    if cutoff is None:
        cutoff = omega0 / 10.0
    dt = times[1] - times[0]
    z = positions * np.exp(1j * omega0 * times)[:, None]
    n_box = max(1, int(round(math.pi / omega0 / dt)))
    box = np.ones(n_box) / n_box
    n_taps = int(round(10.0 * 2.0 * math.pi / omega0 / dt)) | 1
    if n_taps + n_box >= times.size:
        raise PoorFit(
            "series shorter than the demodulation filter; extend the run"
        )
    taps = scipy.signal.firwin(n_taps, cutoff / (math.pi / dt), window="blackman")
    env = np.empty(z.shape, dtype=complex)
    for j in range(z.shape[1]):
        smooth = np.convolve(z[:, j], box, mode="same")
        env[:, j] = np.convolve(smooth, taps, mode="same")
    edge = (n_taps + n_box) // 2 + 2
    return env, edge


def extract_effective_generator(
    series: MicroSeries,
    omega0: float | None = None,
    *,
    cutoff: float | None = None,
    fit_lag: float = 10.0,
    residual_limit: float = 0.05,
) -> GeneratorFit:
    """Least-squares fit of the effective 2x2 amplitude generator.

    The demodulated envelopes a(t) are fitted with a fixed-lag linear
    propagator a(t + L) = Q a(t) (amplitude-weighted least squares);
    the generator is log(Q)/L shifted back to the lab frame.  Raises
    PoorFit when the propagator residual exceeds `residual_limit` of
    the signal norm.
    """
    if omega0 is None:
        omega0 = series.omega0
    env, edge = demodulate(series.times, series.positions, omega0, cutoff)
    dt = series.times[1] - series.times[0]
    lag = max(1, int(round(fit_lag / dt)))
    if env.shape[0] <= 2 * edge + lag + 4:
        raise PoorFit("series too short for the demodulation window")
    x = env[edge : -edge - lag]
    y = env[edge + lag : -edge]
    weight = np.linalg.norm(x, axis=1)
    q, *_ = np.linalg.lstsq(x * weight[:, None], y * weight[:, None], rcond=None)
    residual = float(np.linalg.norm(x @ q - y) / np.linalg.norm(y))
    if residual > residual_limit or not np.all(np.isfinite(q)):
        raise PoorFit(f"propagator fit residual {residual:.3g}")
    m_rot = logm(q.T) / (lag * dt)
    return GeneratorFit(
        matrix=m_rot - 1j * omega0 * np.eye(2), residual=residual
    )


def fit_decay_rate(series: MicroSeries, which: int = 0) -> float:
    """Exponential decay rate of one oscillator's envelope.

    Weighted linear fit of log|a(t)| over the demodulated series; the
    slope is -gamma for a single damped oscillator.
    """
    env, edge = demodulate(series.times, series.positions, series.omega0)
    t = series.times[edge:-edge]
    amp = np.abs(env[edge:-edge, which])
    keep = amp > amp.max() * 1e-3
    t, amp = t[keep], amp[keep]
    coeffs = np.polyfit(t, np.log(amp), 1, w=amp)
    return -float(coeffs[0])
