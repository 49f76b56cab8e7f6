"""Generalized two-band chain toolkit.

Momentum-space invariants, open-chain spectra and edge states, and
unitary single-excitation dynamics for a cavity/mechanical chain with
three hoppings (J e^{i phi}, v, z).  See the README for conventions.
"""

from ._kernels import backend
from .bloch import (
    BlochSample,
    band_gap,
    bloch_h,
    bloch_sample,
    critical_phase,
    d_vector,
    dispersion,
)
from .dynamics import (
    InstantaneousSpectrum,
    PumpSchedule,
    ScheduleKind,
    StateVector,
    Trajectory,
    constant_trajectory,
    edge_eigenstate,
    edge_state_fidelity,
    evolve_constant,
    evolve_schedule,
    instantaneous_spectrum,
    intercell_schedule,
    intracell_schedule,
    pump_fidelity,
    site_excitation,
    site_index,
)
from .edge import (
    EdgeKind,
    EdgeStateLabel,
    best_profile_fit,
    classify_edge_state,
    edge_ansatz,
    fit_localization_length,
    profile_capture,
)
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    GaplessModel,
    InvalidSize,
    NoCriticalPhase,
    SSHTopoError,
    StepTooLarge,
    ZeroCoupling,
)
from .lattice import (
    Boundary,
    ChainHamiltonian,
    EigenSystem,
    SpectrumSweep,
    bloch_spectrum,
    build_chain,
    chain_matrix,
    eigensystem,
    find_zero_mode_crossings,
    spectrum_sweep,
)
from .params import CouplingParams, effective_couplings
from .winding import WindingResult, winding_analytic, winding_numeric

__version__ = "0.1.0"

__all__ = [
    "BlochSample",
    "Boundary",
    "ChainHamiltonian",
    "ConvergenceFailure",
    "CouplingParams",
    "DimensionMismatch",
    "EdgeKind",
    "EdgeStateLabel",
    "EigenSystem",
    "GaplessModel",
    "InstantaneousSpectrum",
    "InvalidSize",
    "NoCriticalPhase",
    "PumpSchedule",
    "SSHTopoError",
    "ScheduleKind",
    "SpectrumSweep",
    "StateVector",
    "StepTooLarge",
    "Trajectory",
    "WindingResult",
    "ZeroCoupling",
    "backend",
    "band_gap",
    "bloch_h",
    "bloch_sample",
    "bloch_spectrum",
    "build_chain",
    "chain_matrix",
    "best_profile_fit",
    "classify_edge_state",
    "constant_trajectory",
    "edge_eigenstate",
    "edge_state_fidelity",
    "critical_phase",
    "d_vector",
    "dispersion",
    "edge_ansatz",
    "profile_capture",
    "effective_couplings",
    "eigensystem",
    "evolve_constant",
    "evolve_schedule",
    "find_zero_mode_crossings",
    "fit_localization_length",
    "instantaneous_spectrum",
    "intercell_schedule",
    "intracell_schedule",
    "pump_fidelity",
    "site_excitation",
    "site_index",
    "spectrum_sweep",
    "winding_analytic",
    "winding_numeric",
]
