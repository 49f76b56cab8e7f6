import numpy as np
import pytest

from ssh_topo import (
    Boundary,
    CouplingParams,
    EdgeKind,
    build_chain,
    classify_edge_state,
    edge_ansatz,
    eigensystem,
    fit_localization_length,
    profile_capture,
)


def near_zero_states(J, z, n_cells=8):
    p = CouplingParams(J, 0.0, 1.0, z)
    es = eigensystem(build_chain(n_cells, Boundary.OPEN, p))
    order = np.argsort(np.abs(es.energies))
    return es.states[:, order[0]], es.states[:, order[1]]


def test_ansatz_normalized_single_sublattice():
    for kind in (EdgeKind.LC, EdgeKind.LM, EdgeKind.RC, EdgeKind.RM):
        vec = edge_ansatz(kind, 8, xi=1.3)
        assert np.linalg.norm(vec) == pytest.approx(1.0)
        sub = 0 if kind in (EdgeKind.LC, EdgeKind.RC) else 1
        assert np.max(np.abs(vec[1 - sub :: 2])) == 0.0
    tight = edge_ansatz(EdgeKind.LC, 8, xi=1e-3)
    assert abs(tight[0]) == pytest.approx(1.0)


def test_ansatz_rejects_bad_arguments():
    with pytest.raises(ValueError):
        edge_ansatz(EdgeKind.BULK, 8, 1.0)
    with pytest.raises(ValueError):
        edge_ansatz(EdgeKind.LC, 8, 0.0)


def test_fit_recovers_exact_exponential():
    xi_true = 1.7
    j = np.arange(8, dtype=float)
    profile = np.exp(-4.0 * j / xi_true)
    xi, r2 = fit_localization_length(profile, "left")
    assert xi == pytest.approx(xi_true, rel=1e-12)
    assert r2 == pytest.approx(1.0)
    xi, r2 = fit_localization_length(profile[::-1], "right")
    assert xi == pytest.approx(xi_true, rel=1e-12)


def test_fit_flat_profile_reports_no_decay():
    xi, _ = fit_localization_length(np.full(8, 0.125), "left")
    assert xi == np.inf


def test_capture_of_ansatz_with_itself_is_one():
    vec = edge_ansatz(EdgeKind.RM, 8, xi=2.0)
    assert profile_capture(vec, vec) == pytest.approx(1.0)
    # insensitive to per-site phases
    phases = np.exp(1j * np.linspace(0, 3, 16))
    assert profile_capture(vec, vec * phases) == pytest.approx(1.0)


def test_hybrid_left_cavity_right_mechanical():
    for psi in near_zero_states(J=0.1, z=0.1):
        label = classify_edge_state(psi)
        assert label.kind is EdgeKind.HYBRID_LC_RM
        assert label.fit_quality >= 0.95
        assert 0 < label.xi < 8


def test_hybrid_left_mechanical_right_cavity():
    for psi in near_zero_states(J=1.0, z=10.0):
        label = classify_edge_state(psi)
        assert label.kind is EdgeKind.HYBRID_LM_RC
        assert label.fit_quality >= 0.95


def test_uniform_state_is_bulk():
    psi = np.full(16, 0.25, complex)
    label = classify_edge_state(psi)
    assert label.kind is EdgeKind.BULK
    assert label.xi is None


def test_single_site_deltas():
    a1 = np.zeros(16, complex)
    a1[0] = 1.0
    assert classify_edge_state(a1).kind is EdgeKind.LC
    b8 = np.zeros(16, complex)
    b8[15] = 1.0
    assert classify_edge_state(b8).kind is EdgeKind.RM
    a8 = np.zeros(16, complex)
    a8[14] = 1.0
    assert classify_edge_state(a8).kind is EdgeKind.RC
    b1 = np.zeros(16, complex)
    b1[1] = 1.0
    assert classify_edge_state(b1).kind is EdgeKind.LM


def test_pure_edge_states_in_dimerized_limit():
    # z = 0, small J: the standard dimerized chain with LC and RM zero modes,
    # split enough that the solver returns them unhybridized
    lo, hi = near_zero_states(J=0.05, z=0.0)
    kinds = {classify_edge_state(lo).kind, classify_edge_state(hi).kind}
    assert kinds == {EdgeKind.LC, EdgeKind.RM}


def test_bulk_eigenstate_is_bulk():
    p = CouplingParams(2.5, 0.0, 1.0, 0.8)  # trivial gapped phase, no edge states
    es = eigensystem(build_chain(8, Boundary.OPEN, p))
    labels = {classify_edge_state(es.states[:, i]).kind for i in range(16)}
    assert labels == {EdgeKind.BULK}


def test_chiral_partners_share_a_label():
    p = CouplingParams(0.1, 0.0, 1.0, 0.1)
    es = eigensystem(build_chain(8, Boundary.OPEN, p))
    for i in range(8):
        a = classify_edge_state(es.states[:, i]).kind
        b = classify_edge_state(es.states[:, 15 - i]).kind
        assert a == b
