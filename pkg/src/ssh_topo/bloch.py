"""Momentum-space properties of the chain: bands, d-vector, gaps, critical phases."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoCriticalPhase
from .params import CouplingParams

_TWO_PI = 2.0 * math.pi


def bloch_h(k, p: CouplingParams):
    """Off-diagonal Bloch amplitude h(k) = J e^{i phi} + v e^{-ik} + z e^{ik}.

    Accepts a scalar or array wavenumber; 2*pi-periodic.
    """
    k = np.asarray(k, dtype=np.float64)
    return p.intracell + p.v * np.exp(-1j * k) + p.z * np.exp(1j * k)


def dispersion(k, p: CouplingParams):
    """Band energies (E_minus, E_plus) = (-|h(k)|, +|h(k)|)."""
    e = np.abs(bloch_h(k, p))
    return -e, e


def d_vector(k, p: CouplingParams):
    """Pauli decomposition (d_x, d_y, d_z) of the Bloch Hamiltonian.

    d_x + i*d_y equals h(k); d_z is identically zero for this chirally
    symmetric model.  As k sweeps the zone the endpoint traces an
    axis-aligned ellipse centered at (J cos phi, J sin phi) with
    semi-axes (v + z, |z - v|).
    """
    k = np.asarray(k, dtype=np.float64)
    dx = p.J * math.cos(p.phi) + (p.v + p.z) * np.cos(k)
    dy = p.J * math.sin(p.phi) + (p.z - p.v) * np.sin(k)
    return dx, dy, np.zeros_like(dx)


@dataclass(frozen=True)
class BlochSample:
    """Bloch data at a single wavenumber, with k folded into [-pi, pi)."""

    k: float
    h: complex
    energy_plus: float
    energy_minus: float
    d: tuple[float, float, float]


def bloch_sample(k: float, p: CouplingParams) -> BlochSample:
    """Evaluate h, band energies, and the d-vector at one wavenumber."""
    k = float(k)
    k_folded = math.remainder(k, _TWO_PI)
    if k_folded >= math.pi:  # remainder returns (-pi, pi]; fold the right edge
        k_folded -= _TWO_PI
    h = complex(bloch_h(k_folded, p))
    dx, dy, dz = d_vector(k_folded, p)
    e = abs(h)
    return BlochSample(
        k=k_folded,
        h=h,
        energy_plus=e,
        energy_minus=-e,
        d=(float(dx), float(dy), float(dz)),
    )


def _golden_refine(f, lo: float, hi: float, iterations: int = 90) -> float:
    """Golden-section minimization of f on [lo, hi]; returns the minimizer."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def band_gap(p: CouplingParams, n_k: int = 512) -> float:
    """Direct band gap 2 * min_k |h(k)|.

    Scans n_k uniformly spaced wavenumbers, then refines the minimum by
    golden-section search on |h|^2 between the neighbors of the grid
    minimum.  n_k must be at least 64.
    """
    if n_k < 64:
        raise ValueError(f"n_k must be >= 64, got {n_k}")
    k = -np.pi + _TWO_PI * np.arange(n_k) / n_k
    mag2 = np.abs(bloch_h(k, p)) ** 2
    i = int(np.argmin(mag2))
    dk = _TWO_PI / n_k

    def f(kk: float) -> float:
        h = p.intracell + p.v * np.exp(-1j * kk) + p.z * np.exp(1j * kk)
        return abs(h) ** 2

    k_min = _golden_refine(f, k[i] - dk, k[i] + dk)
    best = min(f(k_min), float(mag2[i]))
    return 2.0 * math.sqrt(best)


def critical_phase(p: CouplingParams) -> tuple[float, ...]:
    """Intracell phases at which the bulk gap closes, ignoring p.phi.

    The gap closes when J e^{i phi} cancels -(v e^{-ik} + z e^{ik}) for
    some wavenumber, which pins cos(2k) = (J^2 - v^2 - z^2) / (2 v z).
    All branches of k consistent with that equation are enumerated and
    the matching phases returned, sorted, folded to (-pi, pi].

    Raises NoCriticalPhase when no phase closes the gap (origin inside or
    outside the d-vector path for every phi) or when every phase is
    gapless at once (J = 0 with z = v, or the z = 0 degenerate circle).
    """
    J, v, z = p.J, p.v, p.z
    scale = max(p.scale, 1.0)
    if J <= 1e-15 * scale:
        # J = 0: the path is centered on the origin; either gapped for all
        # phi (z != v) or gapless for all phi (z = v).
        raise NoCriticalPhase("J = 0: no isolated phase closes the gap")
    if z <= 1e-15 * scale:
        # Degenerate circle of radius v: gap closes for every phi when
        # J = v, otherwise never.
        raise NoCriticalPhase("z = 0: no isolated phase closes the gap")

    cos_2k = (J * J - v * v - z * z) / (2.0 * v * z)
    if cos_2k < -1.0 or cos_2k > 1.0:
        raise NoCriticalPhase(
            f"model gapped for every phase: cos(2k) = {cos_2k:.6g} outside [-1, 1]"
        )
    k0 = 0.5 * math.acos(cos_2k)

    phases: list[float] = []
    for k in (k0, -k0, math.pi - k0, k0 - math.pi):
        target = -(v * np.exp(-1j * k) + z * np.exp(1j * k))
        if abs(abs(target) - J) > 1e-10 * scale:
            continue
        phases.append(float(np.angle(target)))

    phases.sort()
    unique: list[float] = []
    for value in phases:
        if not unique or abs(value - unique[-1]) > 1e-9:
            unique.append(value)
    if not unique:
        raise NoCriticalPhase("no branch satisfies the cancellation condition")
    return tuple(unique)
