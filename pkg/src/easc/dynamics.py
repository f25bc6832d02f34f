"""Time evolution: semiclassical amplitude equations and the
zero-temperature partial-secular master equation restricted to the
subspace spanned by |1,0>, |0,1>, |0,0>.

Both integrators use classical RK4 at a fixed step.  For a linear
system that is equivalent to applying the degree-4 Taylor polynomial of
exp(h*L) once per step, so the step matrix is precomputed and the
integration reduces to repeated matrix-vector products.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DiagonalMode, EiMode, SystemConfig, rate_at
from .spectral import build_generator


class StepTooLarge(ValueError):
    """Integration step too coarse to resolve the carrier frequency."""


class InvariantViolation(RuntimeError):
    """A density-matrix invariant (trace, Hermiticity) drifted out of tolerance."""


# Ladder operators on the ordered basis (|1,0>, |0,1>, |0,0>).
A1 = np.zeros((3, 3), dtype=complex)
A1[2, 0] = 1.0
A2 = np.zeros((3, 3), dtype=complex)
A2[2, 1] = 1.0
_B = (A1 + A2) / np.sqrt(2.0)
_C = (A1 - A2) / np.sqrt(2.0)
_I3 = np.eye(3, dtype=complex)

EXCITED_FIRST = np.zeros((3, 3), dtype=complex)
EXCITED_FIRST[0, 0] = 1.0  # |1,0><1,0|


@dataclass(frozen=True)
class AmplitudeState:
    """Oscillator amplitudes at one instant."""

    a1: complex
    a2: complex
    t: float


@dataclass(frozen=True)
class ObservableSeries:
    """Per-time occupation numbers and interaction-term expectation."""

    times: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    x: np.ndarray
    re_rho_1001: np.ndarray


def _sandwich(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> x @ rho @ y under row-major vectorization."""
    return np.kron(x, y.T)


def _left(x: np.ndarray) -> np.ndarray:
    return np.kron(x, _I3)


def _right(x: np.ndarray) -> np.ndarray:
    return np.kron(_I3, x.T)


def _dissipator(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> 2 x rho y - rho y x - y x rho."""
    yx = y @ x
    return 2.0 * _sandwich(x, y) - _right(yx) - _left(yx)


def _commutator(a: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> [a, rho]."""
    return _left(a) - _right(a)


def _coherent(h: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> -i [h, rho]."""
    return -1j * _commutator(h)


def validate_density_matrix(rho: np.ndarray) -> None:
    """Check Hermiticity, unit trace, and positivity of a 3x3 state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError("density matrix must be 3x3")
    if np.linalg.norm(rho - rho.conj().T) > 1e-10:
        raise InvariantViolation("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-9 or abs(np.trace(rho).imag) > 1e-9:
        raise InvariantViolation("density matrix trace differs from 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -1e-9:
        raise InvariantViolation("density matrix has a negative eigenvalue")


def build_liouvillian(config: SystemConfig, frame: str = "lab") -> np.ndarray:
    """Zero-temperature partial-secular generator as a 9x9 matrix.

    Dissipation acts through the hybridized modes b = (a1+a2)/sqrt(2)
    and c = (a1-a2)/sqrt(2) at the rates evaluated on their respective
    frequencies omega0 +/- Omega; cross terms between the two modes are
    retained (only the principal-value frequency shifts are dropped).
    In the rotating frame the free precession at omega0 is removed from
    the coherent part.
    """
    w0, om = config.omega0, config.coupling
    h_s = np.array(
        [[w0, om, 0.0], [om, w0, 0.0], [0.0, 0.0, 0.0]], dtype=complex
    )
    if frame == "rotating":
        h_s = h_s - w0 * np.diag([1.0, 1.0, 0.0]).astype(complex)
    elif frame != "lab":
        raise ValueError("frame must be 'lab' or 'rotating'")
    lv = _coherent(h_s)
    bd, cd = _B.conj().T, _C.conj().T
    for sign, gamma, spectrum in (
        (1.0, config.gamma1, config.spectrum1),
        (-1.0, config.gamma2, config.spectrum2),
    ):
        if config.ei_mode is EiMode.OFF:
            gs = ga = gamma
        else:
            gs = rate_at(gamma, spectrum, w0 + om)
            ga = rate_at(gamma, spectrum, w0 - om)
            if config.diagonal_mode is DiagonalMode.RATE_AT_OMEGA0:
                # Keep the exact cross couplings but pin the per-mode
                # decay to its value at omega0.
                mean = 0.5 * (gs + ga)
                gs, ga = gs - mean + gamma, ga - mean + gamma
        lv += 0.5 * gs * _dissipator(_B, bd)
        lv += 0.5 * ga * _dissipator(_C, cd)
        lv += sign * 0.25 * (gs + ga) * (
            _dissipator(_B, cd) + _dissipator(_C, bd)
        )
        lv += sign * 0.25 * (ga - gs) * _commutator(cd @ _B)
        lv += sign * 0.25 * (gs - ga) * _commutator(bd @ _C)
    return lv


def induced_amplitude_map(lv: np.ndarray) -> np.ndarray:
    """2x2 generator of (<a1>, <a2>) implied by a Liouvillian.

    The amplitude expectations are the (0,2) and (1,2) elements of rho;
    applying the Liouvillian to the matrix units |j><00| reads off the
    columns of their closed equation of motion.
    """
    m = np.empty((2, 2), dtype=complex)
    for j in range(2):
        unit = np.zeros((3, 3), dtype=complex)
        unit[j, 2] = 1.0
        out = (lv @ unit.reshape(-1)).reshape(3, 3)
        m[0, j] = out[0, 2]
        m[1, j] = out[1, 2]
    return m


def _rk4_step_matrix(gen: np.ndarray, dt: float) -> np.ndarray:
    """One-step RK4 propagator: degree-4 Taylor polynomial of exp(dt*gen)."""
    n = gen.shape[0]
    step = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 5):
        term = term @ (dt * gen) / k
        step = step + term
    return step


def evolve_amplitudes(
    config: SystemConfig,
    initial: AmplitudeState,
    t_end: float,
    dt: float = 0.01,
    *,
    store_every: int = 10,
    frame: str = "lab",
    method: str = "rk4",
) -> list[AmplitudeState]:
    """Integrate the amplitude equations da/dt = M a.

    method='rk4' uses the fixed-step polynomial propagator; method='expm'
    uses the exact matrix exponential of the 2x2 generator as a
    self-check path.  frame='rotating' removes the carrier at omega0.
    """
    if dt > 0.05 / config.omega0:
        raise StepTooLarge("dt must not exceed 0.05/omega0")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    m = build_generator(config).m.copy()
    if frame == "rotating":
        m += 1j * config.omega0 * np.eye(2)
    elif frame != "lab":
        raise ValueError("frame must be 'lab' or 'rotating'")
    n_steps = int(round(t_end / dt))
    store_every = max(1, min(store_every, n_steps))
    if method == "rk4":
        stride = np.linalg.matrix_power(_rk4_step_matrix(m, dt), store_every)
    elif method == "expm":
        from scipy.linalg import expm

        stride = expm(m * dt * store_every)
    else:
        raise ValueError("method must be 'rk4' or 'expm'")
    a = np.array([initial.a1, initial.a2], dtype=complex)
    out = [AmplitudeState(complex(a[0]), complex(a[1]), initial.t)]
    for k in range(n_steps // store_every):
        a = stride @ a
        out.append(
            AmplitudeState(complex(a[0]), complex(a[1]), initial.t + (k + 1) * store_every * dt)
        )
    return out


def evolve_density_matrix(
    config: SystemConfig,
    rho0: np.ndarray | None = None,
    t_end: float = 100.0,
    dt: float = 0.01,
    *,
    store_every: int = 10,
    frame: str = "lab",
) -> tuple[np.ndarray, np.ndarray, ObservableSeries]:
    """Integrate the master equation from rho0 (default |1,0><1,0|).

    Returns (times, states, observables) where states[k] is the 3x3
    density matrix at times[k].
    """
    if dt > 0.05 / config.omega0:
        raise StepTooLarge("dt must not exceed 0.05/omega0")
    if rho0 is None:
        rho0 = EXCITED_FIRST
    validate_density_matrix(rho0)
    lv = build_liouvillian(config, frame=frame)
    n_steps = int(round(t_end / dt))
    store_every = max(1, min(store_every, n_steps))
    stride = np.linalg.matrix_power(_rk4_step_matrix(lv, dt), store_every)
    n_out = n_steps // store_every + 1
    times = np.arange(n_out) * (store_every * dt)
    states = np.empty((n_out, 3, 3), dtype=complex)
    vec = np.asarray(rho0, dtype=complex).reshape(-1)
    states[0] = rho0
    for k in range(1, n_out):
        vec = stride @ vec
        states[k] = vec.reshape(3, 3)
    traces = np.einsum("kii->k", states)
    if np.max(np.abs(traces - 1.0)) > 1e-7:
        raise InvariantViolation(
            "trace drifted beyond 1e-7; decrease the integration step"
        )
    obs = ObservableSeries(
        times=times,
        e1=states[:, 0, 0].real.copy(),
        e2=states[:, 1, 1].real.copy(),
        x=2.0 * states[:, 0, 1].real.copy(),
        re_rho_1001=states[:, 0, 1].real.copy(),
    )
    return times, states, obs


def compare_amplitude_vs_master(
    config: SystemConfig, t_end: float, dt: float = 0.01, *, store_every: int = 10
) -> dict[str, float]:
    """Deviation between semiclassical and master-equation observables.

    Both start from the first oscillator excited: rho0 = |1,0><1,0| and
    a(0) = (1, 0).  The semiclassical occupations are |a_j|^2 and the
    interaction term is 2 Re(a1* a2).  Integration is carried out in the
    rotating frame (the compared observables are frame-invariant) so
    fast-carrier truncation error does not contaminate the comparison.
    """
    _, _, obs = evolve_density_matrix(
        config, None, t_end, dt, store_every=store_every, frame="rotating"
    )
    amps = evolve_amplitudes(
        config,
        AmplitudeState(1.0 + 0.0j, 0.0j, 0.0),
        t_end,
        dt,
        store_every=store_every,
        frame="rotating",
    )
    a1 = np.array([s.a1 for s in amps])
    a2 = np.array([s.a2 for s in amps])
    n = min(a1.size, obs.times.size)
    e1_dev = np.abs(np.abs(a1[:n]) ** 2 - obs.e1[:n])
    e2_dev = np.abs(np.abs(a2[:n]) ** 2 - obs.e2[:n])
    x_amp = 2.0 * (np.conj(a1[:n]) * a2[:n]).real
    x_dev = np.abs(x_amp - obs.x[:n])
    return {
        "max_e_deviation": float(max(e1_dev.max(), e2_dev.max())),
        "max_x_deviation": float(x_dev.max()),
        "max_x_master": float(np.abs(obs.x[:n]).max()),
        "max_x_amplitude": float(np.abs(x_amp).max()),
    }
