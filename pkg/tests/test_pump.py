import math

import numpy as np
import pytest

from ssh_topo import (
    Boundary,
    CouplingParams,
    EdgeKind,
    build_chain,
    constant_trajectory,
    edge_eigenstate,
    edge_state_fidelity,
    instantaneous_spectrum,
    intercell_schedule,
    intracell_schedule,
    pump_fidelity,
    site_excitation,
)


@pytest.fixture(scope="module")
def intracell_narrow():
    return intracell_schedule(1.1, 2 * math.pi / 100, v=1.0, z=0.1)


@pytest.fixture(scope="module")
def intracell_wide():
    return intracell_schedule(11.0, 2 * math.pi / 10, v=1.0, z=10.0)


def mid_kinds(spec, i):
    lo, hi = spec.mid_labels[i]
    return {lo.kind, hi.kind}


def test_spectrum_shape_and_sorting(intracell_narrow):
    spec = instantaneous_spectrum(intracell_narrow, 8, 41)
    assert spec.energies.shape == (41, 16)
    assert np.all(np.diff(spec.energies, axis=1) >= -1e-12)
    assert spec.times[0] == 0.0
    assert spec.times[-1] == pytest.approx(intracell_narrow.period)
    assert spec.bands.shape == (41, 16)


def test_minimum_time_samples(intracell_narrow):
    with pytest.raises(ValueError):
        instantaneous_spectrum(intracell_narrow, 8, 4)


def test_intracell_in_gap_branch_runs_lc_to_rm(intracell_narrow):
    spec = instantaneous_spectrum(intracell_narrow, 8, 81)
    early = mid_kinds(spec, 4)   # small positive time, detuning has split the pair
    late = mid_kinds(spec, 76)
    assert EdgeKind.LC in early
    assert EdgeKind.RM in early
    assert EdgeKind.RM in late
    assert EdgeKind.LC in late


def test_intracell_wide_branch_runs_rc_to_lm(intracell_wide):
    spec = instantaneous_spectrum(intracell_wide, 8, 81)
    assert {EdgeKind.RC, EdgeKind.LM} <= mid_kinds(spec, 4)
    assert {EdgeKind.RC, EdgeKind.LM} <= mid_kinds(spec, 76)


def test_intercell_edge_states_swap_corners():
    sched = intercell_schedule(1.0, 2 * math.pi / 600, J=0.1)
    spec = instantaneous_spectrum(sched, 8, 81)
    assert {EdgeKind.LC, EdgeKind.RM} <= mid_kinds(spec, 4)    # v-dominant
    assert {EdgeKind.LM, EdgeKind.RC} <= mid_kinds(spec, 40)   # z-dominant at T/2


def test_band_lineage_breaks_only_near_degeneracies(intracell_narrow):
    spec = instantaneous_spectrum(intracell_narrow, 8, 81)
    broken_rows = np.where(spec.broken.any(axis=1))[0]
    # breaks may happen where the chiral pair degenerates (cycle ends) but
    # never in the middle of the cycle where everything is split
    mid = (spec.times > 0.2 * intracell_narrow.period) & (spec.times < 0.8 * intracell_narrow.period)
    assert not spec.broken[mid].any()


def test_edge_eigenstate_extracts_pure_corners():
    chain = build_chain(8, Boundary.OPEN, CouplingParams(0.1, 0.0, 1.0, 0.1))
    lc = edge_eigenstate(chain, EdgeKind.LC)
    rm = edge_eigenstate(chain, EdgeKind.RM)
    # recombination undoes the left/right hybridization of the chiral pair
    assert lc.probabilities[0] > 0.9
    assert rm.probabilities[15] > 0.9
    assert abs(np.vdot(lc.amplitudes, rm.amplitudes)) < 1e-8


def test_pump_fidelity_single_site_limit():
    chain = build_chain(8, Boundary.OPEN, CouplingParams(0.1, 0.0, 1.0, 0.1))
    traj = constant_trajectory(chain, site_excitation(8, "a1"), np.linspace(0.0, 1.0, 5))
    # a tight profile reduces to the first-site occupancy, here exactly 1 at t=0
    assert pump_fidelity(traj, EdgeKind.LC, 0.0, xi=1e-6) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        pump_fidelity(traj, EdgeKind.LC, 0.0)  # no schedule, no xi
    with pytest.raises(ValueError):
        pump_fidelity(traj, EdgeKind.BULK, 0.0, xi=1.0)
    with pytest.raises(ValueError):
        pump_fidelity(traj, EdgeKind.LC, 99.0, xi=1.0)
    with pytest.raises(ValueError):
        edge_state_fidelity(traj, EdgeKind.LC, 0.0)
