"""Command-line front end: named experiments with CSV/JSON datasets.

Every experiment writes `<out>.csv` (or `.json`) plus a `<out>.meta.json`
sidecar holding the fully resolved configuration, so a run can be
reproduced bit-for-bit with `ssh-topo <experiment> --config <out>.meta.json`
(or `ssh-topo run --config ...`).  Exit codes: 0 success, 2 configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .bloch import band_gap, bloch_h, critical_phase, d_vector
from .dynamics import (
    ScheduleKind,
    constant_trajectory,
    evolve_schedule,
    instantaneous_spectrum,
    intercell_schedule,
    intracell_schedule,
    pump_fidelity,
    site_excitation,
)
from .edge import EdgeKind, classify_edge_state
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    GaplessModel,
    InvalidSize,
    NoCriticalPhase,
    StepTooLarge,
    ZeroCoupling,
)
from .lattice import Boundary, build_chain, eigensystem, find_zero_mode_crossings, spectrum_sweep
from .params import CouplingParams
from .winding import winding_analytic, winding_numeric

CONFIG_ERRORS = (ValueError, KeyError, InvalidSize, ZeroCoupling, DimensionMismatch)
NUMERICAL_ERRORS = (GaplessModel, NoCriticalPhase, ConvergenceFailure, StepTooLarge)

EXPERIMENTS = (
    "dispersion",
    "dvector",
    "phase-diagram",
    "winding",
    "critical-phase",
    "spectrum-sweep",
    "edge-states",
    "quench",
    "pump",
    "instantaneous-spectrum",
)

BASIS_NOTE = (
    "interleaved site basis (a_1, b_1, ..., a_N, b_N); "
    "odd 1-based positions are cavity sites, even are mechanical"
)


@dataclass
class ExperimentConfig:
    """Flat configuration; unused fields are ignored by each experiment."""

    experiment: str = ""
    J: float = 1.0
    phi: float = 0.0
    v: float = 1.0
    z: float = 0.0
    N: int = 8
    u: float = 0.0
    nk: int = 1024
    J_range: str = "0:2:201"
    z_range: str = "0:3:151"
    schedule: str = "intracell"
    A: float = 1.0
    omega_frac: float = 0.01
    cycles: float = 1.0
    dt_frac: float = 0.0005
    init: str = "a1"
    init_phase: float = 0.0  # injection time, fraction of a period
    t_end: float = 50.0
    n_times: int = 501
    out: str = ""
    format: str = "csv"
    pi_units: bool = False
    note: str = ""

    def phase_rad(self) -> float:
        return self.phi * math.pi if self.pi_units else self.phi

    def couplings(self) -> CouplingParams:
        return CouplingParams(J=self.J, phi=self.phase_rad(), v=self.v, z=self.z)


def parse_range(text: str, field: str) -> np.ndarray:
    """Parse 'min:max:steps' into a uniform grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"{field} must look like 'min:max:steps', got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ValueError(f"{field}: {exc}") from exc
    if steps < 2:
        raise ValueError(f"{field}: steps must be >= 2, got {steps}")
    if hi < lo:
        raise ValueError(f"{field}: max must be >= min, got {text!r}")
    return np.linspace(lo, hi, steps)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_dataset(path: Path, columns: list[str], rows, fmt: str) -> None:
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif fmt == "json":
        payload = {
            "columns": columns,
            "rows": [[cell if isinstance(cell, str) else float(cell) for cell in row] for row in rows],
        }
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def write_metadata(path: Path, config: ExperimentConfig, dataset: Path, extra: dict) -> None:
    meta = {
        "tool": "ssh-topo",
        "version": __version__,
        "kernel_backend": _kernels.backend(),
        "experiment": config.experiment,
        "config": dataclasses.asdict(config),
        "dataset": dataset.name,
        "basis": BASIS_NOTE,
        "phase_units": "pi" if config.pi_units else "rad",
        "note": config.note,
    }
    meta.update(extra)
    path.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _k_grid(n: int, start: float = -math.pi) -> np.ndarray:
    return start + 2.0 * math.pi * np.arange(n) / n


def run_dispersion(config: ExperimentConfig):
    if config.nk < 2:
        raise ValueError(f"nk must be >= 2, got {config.nk}")
    p = config.couplings()
    k = _k_grid(config.nk)
    h = bloch_h(k, p)
    dx, dy, _ = d_vector(k, p)
    e = np.abs(h)
    rows = np.column_stack([k, -e, e, dx, dy])
    return ["k", "E_minus", "E_plus", "d_x", "d_y"], rows, {"band_gap": band_gap(p)}


def run_dvector(config: ExperimentConfig):
    if config.nk < 2:
        raise ValueError(f"nk must be >= 2, got {config.nk}")
    p = config.couplings()
    k = _k_grid(config.nk, start=0.0)
    dx, dy, dz = d_vector(k, p)
    rows = np.column_stack([k, dx, dy, dz])
    extra = {
        "ellipse_center": [p.J * math.cos(p.phi), p.J * math.sin(p.phi)],
        "semi_axes": [p.v + p.z, abs(p.z - p.v)],
    }
    return ["k", "d_x", "d_y", "d_z"], rows, extra


def run_phase_diagram(config: ExperimentConfig):
    j_values = parse_range(config.J_range, "J-range")
    z_values = parse_range(config.z_range, "z-range")
    if config.nk < 16:
        raise ValueError(f"nk must be >= 16, got {config.nk}")
    if config.v <= 0:
        raise ValueError(f"v must be positive, got {config.v}")
    w, ok, min_h = _kernels.winding_grid(
        j_values, z_values, config.phase_rad(), config.v, config.nk
    )
    rows = []
    for i, J in enumerate(j_values):
        for j, z in enumerate(z_values):
            rows.append((J, z, int(w[i, j]), bool(ok[i, j]), float(min_h[i, j])))
    return ["J", "z", "winding", "well_defined", "min_abs_h"], rows, {}


def run_winding(config: ExperimentConfig):
    p = config.couplings()
    numeric = winding_numeric(p, config.nk)
    analytic = winding_analytic(p)
    rows = [
        (
            "numeric",
            numeric.value,
            numeric.well_defined,
            numeric.boundary_distance,
        ),
        (
            "analytic",
            analytic.value,
            analytic.well_defined,
            analytic.boundary_distance,
        ),
    ]
    return ["method", "winding", "well_defined", "boundary_distance"], rows, {}


def run_critical_phase(config: ExperimentConfig):
    p = config.couplings()
    phases = critical_phase(p)
    rows = []
    for phi_c in phases:
        out_phi = phi_c / math.pi if config.pi_units else phi_c
        gap = band_gap(CouplingParams(p.J, phi_c, p.v, p.z))
        rows.append((out_phi, gap))
    unit = "pi" if config.pi_units else "rad"
    extra = {
        "critical_phases_rad": list(phases),
        "critical_phases_pi_units": [x / math.pi for x in phases],
    }
    return [f"phi_c_{unit}", "band_gap_at_phi_c"], rows, extra


def run_spectrum_sweep(config: ExperimentConfig):
    j_values = parse_range(config.J_range, "J-range")
    p = CouplingParams(J=0.0, phi=config.phase_rad(), v=config.v, z=config.z)
    sweep = spectrum_sweep(
        config.N, p, float(j_values[0]), float(j_values[-1]), j_values.size, u=config.u
    )
    columns = ["J"] + [f"E_{i + 1}" for i in range(2 * config.N)]
    rows = np.column_stack([sweep.j_values, sweep.energies])
    extra = {}
    if config.u == 0.0:
        extra["zero_mode_crossings"] = find_zero_mode_crossings(sweep)
    return columns, rows, extra


def run_edge_states(config: ExperimentConfig):
    p = config.couplings()
    chain = build_chain(config.N, Boundary.OPEN, p, u=config.u)
    es = eigensystem(chain)
    columns = ["index", "energy", "kind", "xi", "fit_quality"] + [
        f"P_{i + 1}" for i in range(2 * config.N)
    ]
    rows = []
    for i in range(2 * config.N):
        label = classify_edge_state(es.states[:, i])
        rows.append(
            (
                i,
                float(es.energies[i]),
                label.kind.value,
                label.xi if label.xi is not None else math.nan,
                label.fit_quality,
                *np.abs(es.states[:, i]) ** 2,
            )
        )
    return columns, rows, {}


def _trajectory_rows(traj):
    columns = ["t"] + [f"P_{i + 1}" for i in range(traj.states.shape[1])]
    rows = np.column_stack([traj.times, traj.probabilities])
    return columns, rows


def run_quench(config: ExperimentConfig):
    if config.t_end <= 0:
        raise ValueError(f"t_end must be positive, got {config.t_end}")
    if config.n_times < 2:
        raise ValueError(f"n_times must be >= 2, got {config.n_times}")
    p = config.couplings()
    chain = build_chain(config.N, Boundary.OPEN, p, u=config.u)
    psi0 = site_excitation(config.N, config.init)
    times = np.linspace(0.0, config.t_end, config.n_times)
    traj = constant_trajectory(chain, psi0, times)
    columns, rows = _trajectory_rows(traj)
    return columns, rows, {}


def _build_schedule(config: ExperimentConfig):
    omega = 2.0 * math.pi * config.omega_frac
    if config.schedule == ScheduleKind.INTRACELL.value:
        return intracell_schedule(config.A, omega, v=config.v, z=config.z, phi=config.phase_rad())
    if config.schedule == ScheduleKind.INTERCELL.value:
        return intercell_schedule(config.A, omega, J=config.J, phi=config.phase_rad())
    raise ValueError(
        f"schedule must be '{ScheduleKind.INTRACELL.value}' or "
        f"'{ScheduleKind.INTERCELL.value}', got {config.schedule!r}"
    )


def run_pump(config: ExperimentConfig):
    if config.cycles <= 0:
        raise ValueError(f"cycles must be positive, got {config.cycles}")
    if not 0.0 < config.dt_frac <= 0.1:
        raise ValueError(f"dt-frac must be in (0, 0.1], got {config.dt_frac}")
    schedule = _build_schedule(config)
    period = schedule.period
    psi0 = site_excitation(config.N, config.init, time=config.init_phase * period)
    traj = evolve_schedule(
        schedule,
        config.N,
        psi0,
        t_end=config.cycles * period,
        dt=config.dt_frac * period,
    )
    columns, rows = _trajectory_rows(traj)
    t_final = float(traj.times[-1])
    fidelities = {
        kind.value: pump_fidelity(traj, kind, t_final)
        for kind in (EdgeKind.LC, EdgeKind.LM, EdgeKind.RC, EdgeKind.RM)
    }
    extra = {"period": period, "final_time": t_final, "final_fidelities": fidelities}
    return columns, rows, extra


def run_instantaneous_spectrum(config: ExperimentConfig):
    if config.n_times < 8:
        raise ValueError(f"n_times must be >= 8, got {config.n_times}")
    schedule = _build_schedule(config)
    spec = instantaneous_spectrum(schedule, config.N, config.n_times)
    columns = (
        ["t"]
        + [f"E_{i + 1}" for i in range(2 * config.N)]
        + ["mid_lower_kind", "mid_lower_xi", "mid_upper_kind", "mid_upper_xi"]
    )
    rows = []
    for i, t in enumerate(spec.times):
        lo, hi = spec.mid_labels[i]
        rows.append(
            (
                float(t),
                *spec.energies[i],
                lo.kind.value,
                lo.xi if lo.xi is not None else math.nan,
                hi.kind.value,
                hi.xi if hi.xi is not None else math.nan,
            )
        )
    return columns, rows, {"period": schedule.period}


RUNNERS = {
    "dispersion": run_dispersion,
    "dvector": run_dvector,
    "phase-diagram": run_phase_diagram,
    "winding": run_winding,
    "critical-phase": run_critical_phase,
    "spectrum-sweep": run_spectrum_sweep,
    "edge-states": run_edge_states,
    "quench": run_quench,
    "pump": run_pump,
    "instantaneous-spectrum": run_instantaneous_spectrum,
}


def load_config_file(path: str) -> dict:
    """Read a config JSON; a metadata sidecar is accepted and unwrapped."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def resolve_config(experiment: str, args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then config file, then explicit CLI flags."""
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for field in dataclasses.fields(ExperimentConfig):
        cli_value = getattr(args, field.name, None)
        if cli_value is not None:
            values[field.name] = cli_value
    if experiment == "run":
        if not values.get("experiment"):
            raise ValueError("config file must name an experiment for 'ssh-topo run'")
    else:
        file_experiment = values.get("experiment")
        if file_experiment and file_experiment != experiment:
            raise ValueError(
                f"config file is for experiment {file_experiment!r}, not {experiment!r}"
            )
        values["experiment"] = experiment
    config = ExperimentConfig(**values)
    if config.experiment not in RUNNERS:
        raise ValueError(f"unknown experiment {config.experiment!r}")
    if config.format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {config.format!r}")
    if not config.out:
        config.out = config.experiment
    return config


def execute(config: ExperimentConfig) -> Path:
    """Run the experiment and write dataset plus metadata sidecar."""
    columns, rows, extra = RUNNERS[config.experiment](config)
    out = Path(config.out)
    if out.parent != Path("."):
        out.parent.mkdir(parents=True, exist_ok=True)
    suffix = ".csv" if config.format == "csv" else ".json"
    dataset = out.with_name(out.name + suffix)
    write_dataset(dataset, columns, rows, config.format)
    write_metadata(out.with_name(out.name + ".meta.json"), config, dataset, extra)
    return dataset


def _add_experiment_parser(sub, name: str, help_text: str, flags: dict) -> None:
    parser = sub.add_parser(name, help=help_text)
    parser.add_argument("--config", help="JSON config file or a .meta.json sidecar")
    parser.add_argument("--out", help="output basename (writes <out>.csv and <out>.meta.json)")
    parser.add_argument("--format", choices=["csv", "json"], help="dataset format (default csv)")
    parser.add_argument(
        "--pi-units",
        dest="pi_units",
        action="store_const",
        const=True,
        help="read/write phases as fractions of pi instead of radians",
    )
    parser.add_argument("--note", help="free-text note recorded in the metadata sidecar")
    for flag, (kind, help_str) in flags.items():
        dest = flag.lstrip("-").replace("-", "_")
        parser.add_argument(flag, dest=dest, type=kind, help=help_str)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssh-topo",
        description="Phase diagram, spectra, edge states, and pumping of the three-hopping chain.",
    )
    parser.add_argument("--version", action="version", version=f"ssh-topo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    model = {
        "--J": (float, "intracell hopping magnitude"),
        "--phi": (float, "intracell hopping phase (radians unless --pi-units)"),
        "--v": (float, "backward intercell hopping (energy unit)"),
        "--z": (float, "forward intercell hopping"),
    }
    chain = {**model, "--N": (int, "number of unit cells"), "--u": (float, "cavity detuning")}
    schedule = {
        "--schedule": (str, "modulation protocol: intracell or intercell"),
        "--A": (float, "modulation amplitude"),
        "--omega-frac": (float, "drive frequency as a fraction: omega = 2*pi*omega_frac"),
        "--phi": (float, "intracell hopping phase"),
        "--N": (int, "number of unit cells"),
        "--v": (float, "baseline v (intracell protocol)"),
        "--z": (float, "baseline z (intracell protocol)"),
        "--J": (float, "baseline J (intercell protocol)"),
    }

    _add_experiment_parser(sub, "dispersion", "band energies and d-vector over the zone", {**model, "--nk": (int, "number of wavenumbers")})
    _add_experiment_parser(sub, "dvector", "trace of the d-vector path", {**model, "--nk": (int, "number of wavenumbers")})
    _add_experiment_parser(
        sub,
        "phase-diagram",
        "winding number over a (J, z) grid",
        {
            "--v": model["--v"],
            "--phi": model["--phi"],
            "--J-range": (str, "J grid as min:max:steps"),
            "--z-range": (str, "z grid as min:max:steps"),
            "--nk": (int, "wavenumbers per point"),
        },
    )
    _add_experiment_parser(sub, "winding", "winding number at one parameter point", {**model, "--nk": (int, "number of wavenumbers")})
    _add_experiment_parser(sub, "critical-phase", "phases closing the bulk gap", model)
    _add_experiment_parser(
        sub,
        "spectrum-sweep",
        "open-chain spectrum versus intracell hopping",
        {
            "--phi": model["--phi"],
            "--v": model["--v"],
            "--z": model["--z"],
            "--N": (int, "number of unit cells"),
            "--u": (float, "cavity detuning"),
            "--J-range": (str, "J grid as min:max:steps"),
        },
    )
    _add_experiment_parser(sub, "edge-states", "classify all eigenstates of one chain", chain)
    _add_experiment_parser(
        sub,
        "quench",
        "free evolution of a single-site excitation",
        {
            **chain,
            "--init": (str, "initial site label, e.g. a1 or b8"),
            "--t-end": (float, "evolution time"),
            "--n-times": (int, "number of samples"),
        },
    )
    _add_experiment_parser(
        sub,
        "pump",
        "driven evolution under a modulation protocol",
        {
            **schedule,
            "--cycles": (float, "number of periods to evolve"),
            "--dt-frac": (float, "integrator step as a fraction of the period"),
            "--init": (str, "initial site label"),
            "--init-phase": (float, "injection time as a fraction of the period"),
        },
    )
    _add_experiment_parser(
        sub,
        "instantaneous-spectrum",
        "eigenvalues of H(t) over one period with edge labels",
        {**schedule, "--n-times": (int, "number of time samples")},
    )

    runner = sub.add_parser("run", help="run the experiment named in a config file")
    runner.add_argument("--config", required=True, help="JSON config or .meta.json sidecar")
    runner.add_argument("--out", help="output basename override")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = resolve_config(args.command, args)
    except CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        dataset = execute(config)
    except CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    print(dataset)
    return 0


if __name__ == "__main__":
    sys.exit(main())
