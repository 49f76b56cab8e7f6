"""Finite chains: Hamiltonian construction, spectra, and zero-mode sweeps.

Site basis is interleaved as (a_1, b_1, a_2, b_2, ..., a_N, b_N) where the
a's are cavity sites and the b's mechanical sites; with the 1-based
position index i of the wavefunction, odd i is a cavity site.  The
detuning u acts on cavity sites only, so for u = 0 the Hamiltonian
anticommutes with Gamma = diag(+1 on cavity, -1 on mechanical).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceFailure, InvalidSize
from .params import CouplingParams

MAX_DENSE_CELLS = 4096  # dense eigensolver cap


class Boundary(enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


def chain_matrix(
    n_cells: int,
    J: float,
    phi: float,
    v: float,
    z: float,
    u: float = 0.0,
    boundary: Boundary = Boundary.OPEN,
) -> np.ndarray:
    """Dense 2N x 2N Hermitian matrix from raw coupling values.

    Unlike build_chain this performs no sign validation, so it can serve
    time-dependent protocols where v or z pass through zero.  Couplings:
    <a_j|H|b_j> = J e^{i phi}, <a_{j+1}|H|b_j> = v, <b_{j+1}|H|a_j> = z,
    <a_j|H|a_j> = u, plus Hermitian conjugates; periodic boundaries wrap
    the j = N intercell bonds onto cell 1 (additively, so the doubled
    bonds of a 2-cell ring accumulate).
    """
    n = 2 * n_cells
    H = np.zeros((n, n), dtype=np.complex128)
    a = np.arange(0, n, 2)
    b = a + 1
    jc = J * np.exp(1j * phi)

    H[a, a] = u
    H[a, b] = jc
    H[b, a] = np.conj(jc)
    if n_cells > 1:
        H[a[1:], b[:-1]] = v
        H[b[:-1], a[1:]] = v
        H[b[1:], a[:-1]] = z
        H[a[:-1], b[1:]] = z
    if boundary is Boundary.PERIODIC:
        H[a[0], b[-1]] += v
        H[b[-1], a[0]] += v
        H[b[0], a[-1]] += z
        H[a[-1], b[0]] += z
    return H


@dataclass(frozen=True)
class ChainHamiltonian:
    """Finite-chain Hamiltonian with its construction parameters."""

    n_cells: int
    boundary: Boundary
    detuning: float
    params: CouplingParams
    matrix: np.ndarray

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells


def build_chain(
    n_cells: int,
    boundary: Boundary,
    p: CouplingParams,
    u: float = 0.0,
) -> ChainHamiltonian:
    """Validated chain Hamiltonian for N cells.

    Open chains need N >= 1 (a single cell is the bare intracell dimer);
    periodic chains need N >= 2 so the wrap bonds are distinct sites.
    """
    if boundary is Boundary.PERIODIC:
        if n_cells < 2:
            raise InvalidSize(f"periodic chain needs n_cells >= 2, got {n_cells}")
    elif n_cells < 1:
        raise InvalidSize(f"open chain needs n_cells >= 1, got {n_cells}")
    if n_cells > MAX_DENSE_CELLS:
        raise InvalidSize(f"n_cells capped at {MAX_DENSE_CELLS} for dense solvers")
    if not math.isfinite(u):
        raise ValueError(f"u must be finite, got {u!r}")

    matrix = chain_matrix(n_cells, p.J, p.phi, p.v, p.z, u=u, boundary=boundary)
    matrix.setflags(write=False)
    return ChainHamiltonian(
        n_cells=n_cells, boundary=boundary, detuning=float(u), params=p, matrix=matrix
    )


@dataclass(frozen=True)
class EigenSystem:
    """Full spectral decomposition: ascending energies, matching columns."""

    energies: np.ndarray
    states: np.ndarray

    def state(self, i: int) -> np.ndarray:
        return self.states[:, i]


def _fix_degenerate_gauge(states: np.ndarray, energies: np.ndarray) -> np.ndarray:
    """Deterministic basis within degenerate clusters, fixed global phases.

    Within each cluster of energies closer than 1e-9 * ||H||, rebuild the
    basis by greedy pivoted projection of canonical basis vectors onto the
    degenerate subspace (the subspace itself is well defined even though
    the solver's basis inside it is not).  Every column then gets its
    largest-magnitude component rotated to the positive real axis.
    """
    states = states.copy()
    n = energies.size
    hnorm = float(np.max(np.abs(energies))) if n else 0.0
    cluster_tol = 1e-9 * hnorm

    start = 0
    while start < n:
        stop = start + 1
        while stop < n and energies[stop] - energies[stop - 1] <= cluster_tol:
            stop += 1
        m = stop - start
        if m > 1:
            block = states[:, start:stop]
            weights = np.sum(np.abs(block) ** 2, axis=1)  # diag of the projector
            basis = []
            for _ in range(m):
                r = int(np.argmax(weights))
                vec = block @ np.conj(block[r, :])
                for prev in basis:
                    vec -= prev * np.vdot(prev, vec)
                norm = np.linalg.norm(vec)
                if norm < 1e-12:  # pivot row nearly outside the remaining span
                    weights[r] = -np.inf
                    continue
                vec /= norm
                basis.append(vec)
                weights = weights - np.abs(vec) ** 2
                weights[r] = -np.inf
            if len(basis) == m:
                states[:, start:stop] = np.column_stack(basis)
        start = stop

    for i in range(n):
        col = states[:, i]
        r = int(np.argmax(np.abs(col)))
        pivot = col[r]
        if abs(pivot) > 0.0:
            states[:, i] = col * (np.conj(pivot) / abs(pivot))
    return states


def eigensystem(chain: ChainHamiltonian) -> EigenSystem:
    """Eigen-decomposition with a deterministic gauge.

    Raises ConvergenceFailure if the residual max_i ||H psi_i - E_i psi_i||
    exceeds 1e-9 * ||H||.
    """
    H = chain.matrix
    energies, states = np.linalg.eigh(H)
    states = _fix_degenerate_gauge(states, energies)

    hnorm = float(np.max(np.abs(energies)))
    residual = float(np.max(np.linalg.norm(H @ states - states * energies, axis=0)))
    if hnorm > 0.0 and residual > 1e-9 * hnorm:
        raise ConvergenceFailure(
            f"eigensolver residual {residual:.3e} exceeds 1e-9 * ||H|| = {1e-9 * hnorm:.3e}"
        )
    energies.setflags(write=False)
    states.setflags(write=False)
    return EigenSystem(energies=energies, states=states)


@dataclass(frozen=True)
class SpectrumSweep:
    """Open-chain spectra on a grid of intracell hopping values."""

    n_cells: int
    params: CouplingParams  # J field is the sweep placeholder, not a sample
    detuning: float
    boundary: Boundary
    j_values: np.ndarray
    energies: np.ndarray  # (steps, 2N), each row ascending


def spectrum_sweep(
    n_cells: int,
    p: CouplingParams,
    j_min: float,
    j_max: float,
    steps: int,
    u: float = 0.0,
    boundary: Boundary = Boundary.OPEN,
) -> SpectrumSweep:
    """Eigenvalues of the chain for each J on a uniform grid.

    phi, v, z are taken from p; its J field is ignored.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if j_min < 0 or j_max < j_min:
        raise ValueError(f"need 0 <= j_min <= j_max, got [{j_min}, {j_max}]")
    j_values = np.linspace(j_min, j_max, steps)
    energies = np.empty((steps, 2 * n_cells), dtype=np.float64)
    for i, j in enumerate(j_values):
        H = chain_matrix(n_cells, j, p.phi, p.v, p.z, u=u, boundary=boundary)
        energies[i] = np.linalg.eigvalsh(H)
    j_values.setflags(write=False)
    energies.setflags(write=False)
    return SpectrumSweep(
        n_cells=n_cells,
        params=p,
        detuning=float(u),
        boundary=boundary,
        j_values=j_values,
        energies=energies,
    )


def _zero_mode_discriminant(j: float, phi: float, v: float, z: float, n_cells: int) -> float:
    """Scaled determinant of the cavity-to-mechanical coupling block.

    The open chain with u = 0 is chiral, so its zero-energy degeneracies
    sit exactly at the real zeros of this tridiagonal determinant
    (diagonal J e^{i phi}, sub/super diagonals v and z).  Only the sign
    matters; the recurrence is rescaled each step to avoid overflow.
    Requires phi = 0 mod pi so the determinant stays real.
    """
    jc = j * math.cos(phi)
    d_prev, d_cur = 1.0, jc
    for _ in range(n_cells - 1):
        d_prev, d_cur = d_cur, jc * d_cur - v * z * d_prev
        m = max(abs(d_prev), abs(d_cur))
        if m > 1e100:
            d_prev /= m
            d_cur /= m
    return d_cur


def find_zero_mode_crossings(sweep: SpectrumSweep, tol: float = 1e-10) -> list[float]:
    """J values inside the sweep range where the zero-energy pair crosses.

    The sorted mid-spectrum gap only touches zero at a crossing, so the
    sign tracking uses the chiral block determinant, whose simple real
    zeros coincide with the degeneracies; each sign change is then
    refined by bisection to tol in J (at most 60 halvings).

    For phases away from 0 mod pi the determinant has no real zeros and
    the chain has no exact crossings; an empty list is returned.
    """
    if sweep.detuning != 0.0:
        raise ValueError("zero-mode crossings are defined for u = 0 sweeps")
    if sweep.boundary is not Boundary.OPEN:
        raise ValueError("zero-mode crossings are defined for open chains")
    phi, v, z = sweep.params.phi, sweep.params.v, sweep.params.z
    if abs(math.sin(phi)) > 1e-12:
        return []
    if v * z == 0.0:
        return []

    n_cells = sweep.n_cells

    def disc(j: float) -> float:
        return _zero_mode_discriminant(j, phi, v, z, n_cells)

    j_values = np.asarray(sweep.j_values)
    values = np.array([disc(j) for j in j_values])
    crossings: list[float] = []
    for i in range(len(j_values) - 1):
        lo, hi = float(j_values[i]), float(j_values[i + 1])
        f_lo, f_hi = values[i], values[i + 1]
        if f_lo == 0.0:
            crossings.append(lo)
            continue
        if f_lo * f_hi >= 0.0:
            continue
        for _ in range(60):
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            f_mid = disc(mid)
            if f_mid == 0.0:
                lo = hi = mid
                break
            if f_lo * f_mid < 0.0:
                hi = mid
            else:
                lo, f_lo = mid, f_mid
        crossings.append(0.5 * (lo + hi))
    if values[-1] == 0.0:
        crossings.append(float(j_values[-1]))
    return crossings


def bloch_spectrum(n_cells: int, p: CouplingParams) -> np.ndarray:
    """Sorted periodic-chain spectrum {±|h(2 pi m / N)|} from the Bloch form.

    Fourier-diagonalization shortcut used as an independent check of the
    dense periodic builder.
    """
    from .bloch import bloch_h

    k = 2.0 * np.pi * np.arange(n_cells) / n_cells
    mags = np.abs(bloch_h(k, p))
    return np.sort(np.concatenate([-mags, mags]))
