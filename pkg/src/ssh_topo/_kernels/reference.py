"""Pure-numpy implementations of the hot kernels.

These are the fallback twins of the jitted kernels in ``accel``; both
modules expose the same functions with identical signatures and must stay
numerically interchangeable (covered by the backend-equivalence tests).
"""

from __future__ import annotations

import numpy as np


def winding_phase_scan(J: float, phi: float, v: float, z: float, n_k: int):
    """Accumulate the phase of h(k) around the Brillouin zone.

    Samples h(k) = J*exp(i*phi) + v*exp(-i*k) + z*exp(i*k) at n_k points
    uniform on [-pi, pi) and sums the wrapped phase increments of
    consecutive samples, closing the loop back to the first point.

    Returns (total_phase, min_abs_h, max_abs_step).
    """
    k = -np.pi + 2.0 * np.pi * np.arange(n_k) / n_k
    h = J * np.exp(1j * phi) + v * np.exp(-1j * k) + z * np.exp(1j * k)
    steps = np.angle(np.roll(h, -1) * np.conj(h))
    return float(steps.sum()), float(np.abs(h).min()), float(np.abs(steps).max())


def winding_grid(
    j_values: np.ndarray,
    z_values: np.ndarray,
    phi: float,
    v: float,
    n_k: int,
):
    """Winding number on a (J, z) parameter grid at fixed phi and v.

    Returns (w, ok, min_h): integer winding estimates, a validity mask
    (False where the gap closes on the sampled grid or the accumulated
    phase is not an integer multiple of 2*pi), and the smallest sampled
    |h(k)| per point.
    """
    j_values = np.asarray(j_values, dtype=np.float64)
    z_values = np.asarray(z_values, dtype=np.float64)
    n_j, n_z = j_values.size, z_values.size

    k = -np.pi + 2.0 * np.pi * np.arange(n_k) / n_k
    inter = v * np.exp(-1j * k) + z_values[:, None] * np.exp(1j * k)  # (n_z, n_k)
    phase = np.exp(1j * phi)

    w = np.zeros((n_j, n_z), dtype=np.int64)
    ok = np.zeros((n_j, n_z), dtype=np.bool_)
    min_h = np.zeros((n_j, n_z), dtype=np.float64)
    for i in range(n_j):
        h = j_values[i] * phase + inter  # (n_z, n_k)
        steps = np.angle(np.roll(h, -1, axis=1) * np.conj(h))
        total = steps.sum(axis=1) / (2.0 * np.pi)
        w[i] = np.rint(total).astype(np.int64)
        min_h[i] = np.abs(h).min(axis=1)
        gap_ok = min_h[i] > 1e-9 * (j_values[i] + v + z_values)
        integer_ok = np.abs(total - w[i]) <= 0.01
        step_ok = np.abs(steps).max(axis=1) < np.pi * (1.0 - 1e-9)
        ok[i] = gap_ok & integer_ok & step_ok
    return w, ok, min_h


def propagate_piecewise(
    coeffs: np.ndarray,
    phi: float,
    dts: np.ndarray,
    psi0: np.ndarray,
):
    """Step a state through a sequence of piecewise-constant Hamiltonians.

    coeffs holds one (u, J, v, z) row per step, evaluated at the step
    midpoint; each step applies the exact unitary exp(-i*H*dt) of the
    open-chain Hamiltonian built from that row.  Returns the (n_steps+1,
    2N) array of states including the initial one.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    dts = np.asarray(dts, dtype=np.float64)
    psi = np.asarray(psi0, dtype=np.complex128).copy()
    n = psi.size
    n_cells = n // 2
    n_steps = coeffs.shape[0]

    states = np.empty((n_steps + 1, n), dtype=np.complex128)
    states[0] = psi
    jphase = np.exp(1j * phi)
    H = np.zeros((n, n), dtype=np.complex128)
    cav = np.arange(0, n, 2)
    for s in range(n_steps):
        u, J, v, z = coeffs[s]
        jc = J * jphase
        H[cav, cav] = u
        H[cav, cav + 1] = jc
        H[cav + 1, cav] = np.conj(jc)
        if n_cells > 1:
            H[cav[1:], cav[:-1] + 1] = v
            H[cav[:-1] + 1, cav[1:]] = v
            H[cav[1:] + 1, cav[:-1]] = z
            H[cav[:-1], cav[1:] + 1] = z
        w, V = np.linalg.eigh(H)
        amp = V.conj().T @ psi
        amp *= np.exp(-1j * w * dts[s])
        psi = V @ amp
        states[s + 1] = psi
    return states
