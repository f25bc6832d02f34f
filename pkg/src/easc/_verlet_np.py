"""Pure-numpy fallback for the velocity-Verlet kernel.

Same contract as the compiled version in ``_verlet.pyx``; used when the
extension is unavailable.  Bath updates are vectorized so the Python
overhead is one loop iteration per time step.
"""
import numpy as np


def verlet_two_baths(
    omega0,
    kappa2,
    w1sq,
    s1,
    w2sq,
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
):
    """Integrate the coupled system in place; return (times, positions)."""
    w1sq = np.asarray(w1sq)
    w2sq = np.asarray(w2sq)
    s1 = np.asarray(s1)
    s2 = np.asarray(s2)
    o2 = omega0 * omega0
    half = 0.5 * dt
    n_rec = n_steps // record_every
    xs = np.empty((n_rec, 2))
    ts = np.empty(n_rec)
    m = 0
    a = np.array(
        [
            -o2 * x[0] - kappa2 * x[1] + s1 @ y1,
            -o2 * x[1] - kappa2 * x[0] + s2 @ y2,
        ]
    )
    b1 = -w1sq * y1 + s1 * x[0]
    b2 = -w2sq * y2 + s2 * x[1]
    for k in range(n_steps):
        v += half * a
        u1 += half * b1
        u2 += half * b2
        x += dt * v
        y1 += dt * u1
        y2 += dt * u2
        a[0] = -o2 * x[0] - kappa2 * x[1] + s1 @ y1
        a[1] = -o2 * x[1] - kappa2 * x[0] + s2 @ y2
        b1 = -w1sq * y1 + s1 * x[0]
        b2 = -w2sq * y2 + s2 * x[1]
        v += half * a
        u1 += half * b1
        u2 += half * b2
        if (k + 1) % record_every == 0:
            xs[m] = x
            ts[m] = (k + 1) * dt
            m += 1
    return ts, xs
