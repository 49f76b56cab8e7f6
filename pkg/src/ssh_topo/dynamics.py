"""Single-excitation dynamics: quenches, pump protocols, instantaneous spectra.

All evolution is unitary (dissipation is outside the model's regime).
Constant Hamiltonians are propagated exactly through their eigensystem;
time-dependent protocols use a midpoint piecewise-constant propagator,
exp(-i H(t + dt/2) dt) per step, which is exactly unitary step by step.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import _kernels
from .edge import (
    _SUBLATTICE,
    EdgeKind,
    EdgeStateLabel,
    best_profile_fit,
    classify_edge_state,
    edge_ansatz,
    profile_capture,
)
from .errors import DimensionMismatch, ConvergenceFailure, StepTooLarge
from .lattice import Boundary, ChainHamiltonian, chain_matrix, eigensystem
from .params import CouplingParams

_TWO_PI = 2.0 * math.pi
_SITE_LABEL = re.compile(r"^([ab])(\d+)$")


@dataclass(frozen=True)
class StateVector:
    """Unit-norm single-excitation amplitudes on the interleaved basis."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size < 2 or amps.size % 2:
            raise ValueError(f"amplitudes must be a 1-d array of even length, got shape {amps.shape}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > 1e-8:
            raise ValueError(f"state norm^2 = {norm2!r} deviates from 1 beyond 1e-8")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "time", float(self.time))

    @property
    def n_cells(self) -> int:
        return self.amplitudes.size // 2

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def site_index(label: str) -> int:
    """0-based site index from a label like 'a1' or 'b8' (1-based cells)."""
    m = _SITE_LABEL.match(label.strip().lower())
    if not m:
        raise ValueError(f"site label must look like 'a3' or 'b7', got {label!r}")
    sub, cell = m.group(1), int(m.group(2))
    if cell < 1:
        raise ValueError(f"cell index must be >= 1, got {label!r}")
    return 2 * (cell - 1) + (0 if sub == "a" else 1)


def site_excitation(n_cells: int, site: int | str, time: float = 0.0) -> StateVector:
    """State with the whole excitation on one site (index or 'a3'-style label)."""
    idx = site_index(site) if isinstance(site, str) else int(site)
    if not 0 <= idx < 2 * n_cells:
        raise ValueError(f"site {site!r} outside a chain of {n_cells} cells")
    amps = np.zeros(2 * n_cells, dtype=np.complex128)
    amps[idx] = 1.0
    return StateVector(amps, time=time)


class ScheduleKind(enum.Enum):
    INTRACELL = "intracell"  # modulates detuning and the intracell hopping
    INTERCELL = "intercell"  # modulates detuning and both intercell hoppings
    CUSTOM = "custom"


@dataclass(frozen=True)
class PumpSchedule:
    """Periodic modulation of (u, J, v, z) with amplitude A and frequency omega.

    kind INTRACELL:  u = (A/2) sin(wt), J = A (1 - cos(wt)), v and z fixed
    at their baseline values.
    kind INTERCELL:  u = (A/2) sin(wt), J fixed at baseline,
    v = A (1 + cos(wt)), z = A (1 - cos(wt)).
    kind CUSTOM: `custom(t)` returns (u, J, v, z); the caller promises
    periodicity with 2*pi/omega.

    The baseline CouplingParams carries the constant members (and phi);
    by convention it holds the t = 0 values of the modulated ones.
    """

    kind: ScheduleKind
    amplitude: float
    omega: float
    baseline: CouplingParams
    custom: Callable[[float], tuple[float, float, float, float]] | None = None

    def __post_init__(self):
        if self.omega <= 0.0 or not math.isfinite(self.omega):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if self.kind is ScheduleKind.CUSTOM and self.custom is None:
            raise ValueError("custom schedules need an evaluator")

    @property
    def period(self) -> float:
        return _TWO_PI / self.omega

    def _theta(self, t):
        # Reduce by the period first so t and t + period give the same
        # angle whenever t / period is exactly representable.
        return _TWO_PI * np.mod(np.asarray(t, dtype=np.float64) / self.period, 1.0)

    def couplings_at(self, t: float) -> tuple[float, float, float, float]:
        """(u, J, v, z) at time t."""
        if self.kind is ScheduleKind.CUSTOM:
            return self.custom(t)
        theta = float(self._theta(t))
        A = self.amplitude
        u = 0.5 * A * math.sin(theta)
        if self.kind is ScheduleKind.INTRACELL:
            return u, A * (1.0 - math.cos(theta)), self.baseline.v, self.baseline.z
        return u, self.baseline.J, A * (1.0 + math.cos(theta)), A * (1.0 - math.cos(theta))

    def coupling_table(self, times: np.ndarray) -> np.ndarray:
        """(len(times), 4) array of (u, J, v, z) rows."""
        times = np.asarray(times, dtype=np.float64)
        if self.kind is ScheduleKind.CUSTOM:
            return np.array([self.custom(float(t)) for t in times], dtype=np.float64)
        theta = self._theta(times)
        A = self.amplitude
        out = np.empty((times.size, 4), dtype=np.float64)
        out[:, 0] = 0.5 * A * np.sin(theta)
        if self.kind is ScheduleKind.INTRACELL:
            out[:, 1] = A * (1.0 - np.cos(theta))
            out[:, 2] = self.baseline.v
            out[:, 3] = self.baseline.z
        else:
            out[:, 1] = self.baseline.J
            out[:, 2] = A * (1.0 + np.cos(theta))
            out[:, 3] = A * (1.0 - np.cos(theta))
        return out

    def hamiltonian(self, t: float, n_cells: int) -> np.ndarray:
        """Open-chain matrix at time t."""
        u, J, v, z = self.couplings_at(t)
        return chain_matrix(n_cells, J, self.baseline.phi, v, z, u=u, boundary=Boundary.OPEN)


def intracell_schedule(amplitude: float, omega: float, v: float, z: float, phi: float = 0.0) -> PumpSchedule:
    """Protocol modulating the detuning and the intracell hopping."""
    baseline = CouplingParams(J=0.0, phi=phi, v=v, z=z)
    return PumpSchedule(ScheduleKind.INTRACELL, float(amplitude), float(omega), baseline)


def intercell_schedule(amplitude: float, omega: float, J: float, phi: float = 0.0) -> PumpSchedule:
    """Protocol modulating the detuning and both intercell hoppings."""
    baseline = CouplingParams(J=J, phi=phi, v=2.0 * float(amplitude), z=0.0)
    return PumpSchedule(ScheduleKind.INTERCELL, float(amplitude), float(omega), baseline)


@dataclass(frozen=True)
class Trajectory:
    """Recorded states of one evolution run.

    times and states include the initial condition; probabilities are the
    per-site occupations |c_i|^2 row by row.
    """

    times: np.ndarray
    states: np.ndarray
    final_state: StateVector
    n_cells: int
    schedule: PumpSchedule | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        states = np.asarray(self.states, dtype=np.complex128)
        if states.shape != (times.size, 2 * self.n_cells):
            raise ValueError("states must be (len(times), 2*n_cells)")
        norms = np.sum(np.abs(states) ** 2, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-8:
            raise ValueError("a recorded state deviates from unit norm beyond 1e-8")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @cached_property
    def probabilities(self) -> np.ndarray:
        p = np.abs(self.states) ** 2
        p.setflags(write=False)
        return p

    def state_at(self, t: float) -> tuple[int, StateVector]:
        """(index, state) of the recorded sample closest to time t."""
        idx = int(np.argmin(np.abs(self.times - t)))
        return idx, StateVector(self.states[idx], time=float(self.times[idx]))


def evolve_constant(chain: ChainHamiltonian, psi0: StateVector, t: float) -> StateVector:
    """Exact evolution exp(-i H t) |psi0> through the eigensystem."""
    if psi0.amplitudes.size != chain.n_sites:
        raise DimensionMismatch(
            f"state has {psi0.amplitudes.size} sites, chain has {chain.n_sites}"
        )
    es = eigensystem(chain)
    amp = es.states.conj().T @ psi0.amplitudes
    amp *= np.exp(-1j * es.energies * t)
    return StateVector(es.states @ amp, time=psi0.time + t)


def constant_trajectory(chain: ChainHamiltonian, psi0: StateVector, times: np.ndarray) -> Trajectory:
    """Exact trajectory under a fixed Hamiltonian at the given times."""
    if psi0.amplitudes.size != chain.n_sites:
        raise DimensionMismatch(
            f"state has {psi0.amplitudes.size} sites, chain has {chain.n_sites}"
        )
    times = np.asarray(times, dtype=np.float64)
    es = eigensystem(chain)
    amp0 = es.states.conj().T @ psi0.amplitudes
    phases = np.exp(-1j * np.outer(times, es.energies))
    states = (phases * amp0) @ es.states.T
    return Trajectory(
        times=times,
        states=states,
        final_state=StateVector(states[-1], time=float(times[-1])),
        n_cells=chain.n_cells,
    )


def evolve_schedule(
    schedule: PumpSchedule,
    n_cells: int,
    psi0: StateVector,
    t_end: float,
    dt: float | None = None,
    check: bool = True,
) -> Trajectory:
    """Propagate under the time-dependent chain with midpoint steps.

    The run covers [psi0.time, psi0.time + t_end]; the schedule is
    evaluated at absolute times, so a state injected mid-cycle sees the
    corresponding phase of the modulation.  dt defaults to period/2000.
    With check=True the run is repeated at dt/2 and StepTooLarge is
    raised if any final-state probability moves by more than 1e-4; the
    accuracy of everything reported in between is of the same order as
    that check.
    """
    if psi0.amplitudes.size != 2 * n_cells:
        raise DimensionMismatch(
            f"state has {psi0.amplitudes.size} sites, chain has {2 * n_cells}"
        )
    if t_end <= 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if dt is None:
        dt = schedule.period / 2000.0
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")

    n_full = int(math.floor(t_end / dt + 1e-9))
    times = psi0.time + np.arange(n_full + 1, dtype=np.float64) * dt
    if psi0.time + t_end - times[-1] > 1e-12 * max(dt, 1.0):
        times = np.append(times, psi0.time + t_end)
    dts = np.diff(times)
    midpoints = 0.5 * (times[:-1] + times[1:])
    coeffs = schedule.coupling_table(midpoints)

    states = _kernels.propagate_piecewise(coeffs, schedule.baseline.phi, dts, psi0.amplitudes)
    norm_drift = float(np.max(np.abs(np.sum(np.abs(states) ** 2, axis=1) - 1.0)))
    if norm_drift > 1e-8:
        raise ConvergenceFailure(f"norm drift {norm_drift:.3e} exceeds 1e-8")

    if check:
        finer = evolve_schedule(schedule, n_cells, psi0, t_end, dt=0.5 * dt, check=False)
        diff = float(
            np.max(np.abs(finer.final_state.probabilities - np.abs(states[-1]) ** 2))
        )
        if diff > 1e-4:
            raise StepTooLarge(
                f"halving dt moved final probabilities by {diff:.3e} (> 1e-4); reduce dt"
            )

    return Trajectory(
        times=times,
        states=states,
        final_state=StateVector(states[-1], time=float(times[-1])),
        n_cells=n_cells,
        schedule=schedule,
    )


@dataclass(frozen=True)
class InstantaneousSpectrum:
    """Spectra along one schedule period with band lineage bookkeeping.

    energies is sorted ascending per time sample.  band_order[i, b] maps
    band b (ordered at t = 0) to its sorted index at times[i], following
    maximal eigenvector overlap between consecutive samples; broken[i, b]
    marks where that overlap fell below 0.5 (expected at near
    degeneracies).  mid_labels carries edge classifications of the two
    mid-spectrum states.
    """

    times: np.ndarray
    energies: np.ndarray
    band_order: np.ndarray
    broken: np.ndarray
    mid_labels: tuple[tuple[EdgeStateLabel, EdgeStateLabel], ...]

    @property
    def bands(self) -> np.ndarray:
        return np.take_along_axis(self.energies, self.band_order, axis=1)


def instantaneous_spectrum(
    schedule: PumpSchedule, n_cells: int, n_times: int
) -> InstantaneousSpectrum:
    """Eigen-decompositions of H(t) over one period.

    n_times must be at least 8; samples are uniform on [0, period].
    """
    if n_times < 8:
        raise ValueError(f"n_times must be >= 8, got {n_times}")
    times = np.linspace(0.0, schedule.period, n_times)
    n = 2 * n_cells
    energies = np.empty((n_times, n))
    band_order = np.empty((n_times, n), dtype=np.int64)
    broken = np.zeros((n_times, n), dtype=bool)
    mid_labels = []

    prev_states = None
    prev_order = np.arange(n)
    for i, t in enumerate(times):
        chain = ChainHamiltonian(
            n_cells=n_cells,
            boundary=Boundary.OPEN,
            detuning=schedule.couplings_at(float(t))[0],
            params=schedule.baseline,
            matrix=schedule.hamiltonian(float(t), n_cells),
        )
        es = eigensystem(chain)
        energies[i] = es.energies
        if prev_states is None:
            order = np.arange(n)
        else:
            overlap = np.abs(prev_states.conj().T @ es.states)  # (prev, cur)
            order = np.full(n, -1, dtype=np.int64)
            taken = np.zeros(n, dtype=bool)
            pairs = np.dstack(np.unravel_index(np.argsort(-overlap, axis=None), overlap.shape))[0]
            assigned = 0
            band_of_prev = np.empty(n, dtype=np.int64)
            band_of_prev[prev_order] = np.arange(n)
            for r, c in pairs:
                band = band_of_prev[r]
                if order[band] >= 0 or taken[c]:
                    continue
                order[band] = c
                taken[c] = True
                if overlap[r, c] < 0.5:
                    broken[i, band] = True
                assigned += 1
                if assigned == n:
                    break
        band_order[i] = order
        prev_states = es.states
        prev_order = order
        lo = StateVector(es.states[:, n_cells - 1])
        hi = StateVector(es.states[:, n_cells])
        mid_labels.append((classify_edge_state(lo), classify_edge_state(hi)))

    return InstantaneousSpectrum(
        times=times,
        energies=energies,
        band_order=band_order,
        broken=broken,
        mid_labels=tuple(mid_labels),
    )


def edge_eigenstate(chain: ChainHamiltonian, kind: EdgeKind) -> StateVector:
    """The instantaneous eigenstate matching one edge corner.

    Picks the eigenstate with the largest weight under the corner's
    template profile.  When that state is one of the two mid-spectrum
    levels, the pair is recombined to extremize the corner weight within
    their span: at chirally symmetric instants the exact eigenstates
    hybridize left with right, and the corner state is only defined as
    the limit of the split branches, which this recombination recovers.
    """
    es = eigensystem(chain)
    n_cells = chain.n_cells
    w = np.abs(edge_ansatz(kind, n_cells, xi=1.0)) ** 2
    scores = w @ (np.abs(es.states) ** 2)
    i_best = int(np.argmax(scores))
    mid = (n_cells - 1, n_cells)
    if i_best in mid:
        sub = es.states[:, list(mid)]
        m = sub.conj().T @ (w[:, None] * sub)
        _, vecs = np.linalg.eigh(m)
        phi = sub @ vecs[:, -1]
    else:
        phi = es.states[:, i_best]
    return StateVector(phi / np.linalg.norm(phi))


def _instantaneous_chain(schedule: PumpSchedule, n_cells: int, t: float) -> ChainHamiltonian:
    return ChainHamiltonian(
        n_cells=n_cells,
        boundary=Boundary.OPEN,
        detuning=schedule.couplings_at(t)[0],
        params=schedule.baseline,
        matrix=schedule.hamiltonian(t, n_cells),
    )


def _fit_xi_from_eigenstate(schedule: PumpSchedule, n_cells: int, kind: EdgeKind, t: float) -> float:
    """Localization length of the instantaneous eigenstate closest to `kind`."""
    state = edge_eigenstate(_instantaneous_chain(schedule, n_cells, t), kind)
    xi, _ = best_profile_fit(kind, n_cells, state.amplitudes)
    return xi


def edge_state_fidelity(traj: Trajectory, kind: EdgeKind, at_time: float) -> float:
    """Squared overlap with the instantaneous edge eigenstate near at_time.

    Unlike pump_fidelity this measures against the exact eigenstate
    (including its full tail), extracted by edge_eigenstate from the
    schedule Hamiltonian at the nearest recorded time.
    """
    if traj.schedule is None:
        raise ValueError("trajectory has no schedule; edge_state_fidelity needs one")
    idx, state = traj.state_at(at_time)
    target = edge_eigenstate(
        _instantaneous_chain(traj.schedule, traj.n_cells, float(traj.times[idx])), kind
    )
    return float(min(1.0, abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2))


def pump_fidelity(
    traj: Trajectory,
    kind: EdgeKind,
    at_time: float,
    xi: float | None = None,
) -> float:
    """Squared overlap of the trajectory state nearest at_time with a corner profile.

    The overlap is taken modulo the site phases the positive envelope
    leaves free (see edge.profile_capture).  With xi=None the
    localization length is fitted from the matching edge eigenstate of
    the instantaneous Hamiltonian (the trajectory must then carry its
    schedule); passing xi uses that profile directly.
    """
    if kind not in _SUBLATTICE:
        raise ValueError(f"fidelity target must be a corner kind, got {kind}")
    t_min, t_max = float(traj.times[0]), float(traj.times[-1])
    if not (t_min - 1e-9 <= at_time <= t_max + 1e-9):
        raise ValueError(f"at_time {at_time} outside trajectory range [{t_min}, {t_max}]")
    idx, state = traj.state_at(at_time)
    if xi is None:
        if traj.schedule is None:
            raise ValueError("trajectory has no schedule; pass xi explicitly")
        xi = _fit_xi_from_eigenstate(traj.schedule, traj.n_cells, kind, float(traj.times[idx]))
    ansatz = edge_ansatz(kind, traj.n_cells, xi)
    return float(min(1.0, profile_capture(ansatz, state.amplitudes)))
