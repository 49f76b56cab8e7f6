"""Numba-jitted twins of the kernels in ``reference``.

Same functions, same signatures, loop-based so the compiler can keep
everything in registers.  Selected at import time by the SSH_TOPO_NUMBA
environment flag (see the package ``__init__``).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _phase_scan(J, phi, v, z, n_k):
    # h(k) = (J cos phi + (v+z) cos k) + i (J sin phi + (z-v) sin k);
    # e^{ik} advanced by incremental rotation instead of exp per sample.
    jr = J * math.cos(phi)
    ji = J * math.sin(phi)
    cx = v + z
    cy = z - v
    dth = 2.0 * np.pi / n_k
    rot_r = math.cos(dth)
    rot_i = math.sin(dth)

    er = -1.0  # e^{ik} at k = -pi
    ei = 0.0
    hr0 = jr + cx * er
    hi0 = ji + cy * ei
    pr, pi_ = hr0, hi0
    total = 0.0
    min_h2 = hr0 * hr0 + hi0 * hi0
    max_step = 0.0
    for m in range(1, n_k + 1):
        if m == n_k:
            hr, hi = hr0, hi0  # close the loop exactly
        else:
            er, ei = er * rot_r - ei * rot_i, er * rot_i + ei * rot_r
            hr = jr + cx * er
            hi = ji + cy * ei
            h2 = hr * hr + hi * hi
            if h2 < min_h2:
                min_h2 = h2
        step = math.atan2(hi * pr - hr * pi_, hr * pr + hi * pi_)
        total += step
        if abs(step) > max_step:
            max_step = abs(step)
        pr, pi_ = hr, hi
    return total, math.sqrt(min_h2), max_step


@njit(cache=True)
def winding_phase_scan(J, phi, v, z, n_k):
    return _phase_scan(J, phi, v, z, n_k)


@njit(cache=True, parallel=True)
def winding_grid(j_values, z_values, phi, v, n_k):
    n_j = j_values.size
    n_z = z_values.size
    w = np.zeros((n_j, n_z), dtype=np.int64)
    ok = np.zeros((n_j, n_z), dtype=np.bool_)
    min_h = np.zeros((n_j, n_z), dtype=np.float64)
    two_pi = 2.0 * np.pi
    for flat in prange(n_j * n_z):
        i = flat // n_z
        j = flat % n_z
        total, mh, max_step = _phase_scan(j_values[i], phi, v, z_values[j], n_k)
        frac = total / two_pi
        wij = round(frac)
        w[i, j] = wij
        min_h[i, j] = mh
        gap_ok = mh > 1e-9 * (j_values[i] + v + z_values[j])
        integer_ok = abs(frac - wij) <= 0.01
        step_ok = max_step < np.pi * (1.0 - 1e-9)
        ok[i, j] = gap_ok and integer_ok and step_ok
    return w, ok, min_h


@njit(cache=True)
def propagate_piecewise(coeffs, phi, dts, psi0):
    n = psi0.size
    n_cells = n // 2
    n_steps = coeffs.shape[0]
    states = np.empty((n_steps + 1, n), dtype=np.complex128)
    psi = psi0.astype(np.complex128)
    states[0] = psi
    jphase = np.exp(1j * phi)
    H = np.zeros((n, n), dtype=np.complex128)
    for s in range(n_steps):
        u = coeffs[s, 0]
        J = coeffs[s, 1]
        v = coeffs[s, 2]
        z = coeffs[s, 3]
        jc = J * jphase
        for c in range(n_cells):
            a = 2 * c
            H[a, a] = u
            H[a, a + 1] = jc
            H[a + 1, a] = np.conj(jc)
        for c in range(n_cells - 1):
            a = 2 * c
            H[a + 2, a + 1] = v
            H[a + 1, a + 2] = v
            H[a + 3, a] = z
            H[a, a + 3] = z
        w, V = np.linalg.eigh(H)
        amp = np.conj(V.T) @ psi
        amp = amp * np.exp(-1j * w * dts[s])
        psi = V @ amp
        states[s + 1] = psi
    return states
