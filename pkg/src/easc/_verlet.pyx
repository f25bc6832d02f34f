# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled velocity-Verlet kernel for two oscillators coupled to
discretized reservoirs."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def verlet_two_baths(
    double omega0,
    double kappa2,
    double[::1] w1sq,
    double[::1] s1,
    double[::1] w2sq,
    double[::1] s2,
    double[::1] x,
    double[::1] v,
    double[::1] y1,
    double[::1] u1,
    double[::1] y2,
    double[::1] u2,
    double dt,
    Py_ssize_t n_steps,
    Py_ssize_t record_every,
):
    """Integrate the coupled system in place; return (times, positions).

    x, v hold the two oscillator coordinates/velocities; (y, u) the bath
    mode coordinates/velocities for each reservoir.  Positions of the
    oscillators are recorded every `record_every` steps.
    """
    cdef Py_ssize_t n1 = w1sq.shape[0]
    cdef Py_ssize_t n2 = w2sq.shape[0]
    cdef Py_ssize_t n_rec = n_steps // record_every
    cdef cnp.ndarray[cnp.float64_t, ndim=2] xs = np.empty((n_rec, 2))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ts = np.empty(n_rec)
    cdef double[:, ::1] xs_v = xs
    cdef double[::1] ts_v = ts
    cdef double o2 = omega0 * omega0
    cdef double half = 0.5 * dt
    cdef double a0, a1, f1, f2
    cdef Py_ssize_t k, i, m = 0

    f1 = 0.0
    for i in range(n1):
        f1 += s1[i] * y1[i]
    f2 = 0.0
    for i in range(n2):
        f2 += s2[i] * y2[i]
    a0 = -o2 * x[0] - kappa2 * x[1] + f1
    a1 = -o2 * x[1] - kappa2 * x[0] + f2

    for k in range(n_steps):
        v[0] += half * a0
        v[1] += half * a1
        for i in range(n1):
            u1[i] += half * (-w1sq[i] * y1[i] + s1[i] * x[0])
        for i in range(n2):
            u2[i] += half * (-w2sq[i] * y2[i] + s2[i] * x[1])
        x[0] += dt * v[0]
        x[1] += dt * v[1]
        for i in range(n1):
            y1[i] += dt * u1[i]
        for i in range(n2):
            y2[i] += dt * u2[i]
        f1 = 0.0
        for i in range(n1):
            u1[i] += half * (-w1sq[i] * y1[i] + s1[i] * x[0])
            f1 += s1[i] * y1[i]
        f2 = 0.0
        for i in range(n2):
            u2[i] += half * (-w2sq[i] * y2[i] + s2[i] * x[1])
            f2 += s2[i] * y2[i]
        a0 = -o2 * x[0] - kappa2 * x[1] + f1
        a1 = -o2 * x[1] - kappa2 * x[0] + f2
        v[0] += half * a0
        v[1] += half * a1
        if (k + 1) % record_every == 0:
            xs_v[m, 0] = x[0]
            xs_v[m, 1] = x[1]
            ts_v[m] = (k + 1) * dt
            m += 1
    return ts, xs
