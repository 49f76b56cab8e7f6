import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st_

from ssh_topo import (
    CouplingParams,
    NoCriticalPhase,
    band_gap,
    bloch_h,
    bloch_sample,
    critical_phase,
    d_vector,
    dispersion,
)

P_REF = CouplingParams(1.2, 0.0, 1.0, 0.8)

finite_params = st_.builds(
    CouplingParams,
    J=st_.floats(0.0, 3.0),
    phi=st_.floats(-math.pi, math.pi),
    v=st_.floats(0.1, 2.0),
    z=st_.floats(0.0, 3.0),
)


def test_bloch_h_all_phases_aligned_at_k0():
    assert bloch_h(0.0, P_REF) == pytest.approx(3.0 + 0.0j, abs=1e-15)


def test_bloch_h_cancels_at_transition():
    p = CouplingParams(1.8, 0.0, 1.0, 0.8)
    assert abs(bloch_h(math.pi, p)) < 1e-15


def test_bloch_h_quarter_zone():
    # v e^{-i pi/2} + z e^{i pi/2} = -i (v - z)
    expect = 1.2 - 0.2j
    assert bloch_h(math.pi / 2, P_REF) == pytest.approx(expect, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(finite_params, st_.floats(-10.0, 10.0))
def test_bloch_h_periodic(p, k):
    assert bloch_h(k + 2 * math.pi, p) == pytest.approx(bloch_h(k, p), abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(finite_params, st_.floats(-10.0, 10.0))
def test_d_vector_matches_bloch_h(p, k):
    dx, dy, dz = d_vector(k, p)
    assert dz == 0.0
    assert complex(dx + 1j * dy) == pytest.approx(complex(bloch_h(k, p)), abs=1e-13)


def test_d_vector_reference_points():
    assert d_vector(0.0, P_REF)[0] == pytest.approx(3.0)
    dx, dy, _ = d_vector(math.pi / 2, P_REF)
    assert (dx, dy) == (pytest.approx(1.2), pytest.approx(-0.2))


def test_d_vector_traces_axis_aligned_ellipse():
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = CouplingParams(rng.uniform(0, 3), rng.uniform(-np.pi, np.pi), rng.uniform(0.1, 2), rng.uniform(0, 3))
        if abs(p.z - p.v) < 1e-6:
            continue
        k = np.linspace(-np.pi, np.pi, 101)
        dx, dy, _ = d_vector(k, p)
        lhs = ((dx - p.J * np.cos(p.phi)) / (p.v + p.z)) ** 2 + (
            (dy - p.J * np.sin(p.phi)) / (p.z - p.v)
        ) ** 2
        assert np.max(np.abs(lhs - 1.0)) < 1e-12


def test_dispersion_symmetric_pair():
    lo, hi = dispersion(0.0, P_REF)
    assert (lo, hi) == (pytest.approx(-3.0), pytest.approx(3.0))
    lo, hi = dispersion(math.pi, CouplingParams(1.8, 0.0, 1.0, 0.8))
    assert hi == pytest.approx(0.0, abs=1e-14)
    assert lo == -hi


def test_min_band_energy_no_intracell_hopping():
    # J = 0, z/v = 0.8: |v e^{-ik} + z e^{ik}| minimized at k = pi/2, value v - z
    p = CouplingParams(0.0, 0.0, 1.0, 0.8)
    k = np.linspace(-np.pi, np.pi, 200001)
    scan_min = np.abs(bloch_h(k, p)).min()
    assert scan_min == pytest.approx(0.2, abs=1e-8)
    assert band_gap(p) == pytest.approx(2 * scan_min, abs=1e-9)


@pytest.mark.parametrize(
    "p,expected",
    [
        (CouplingParams(1.8, 0.0, 1.0, 0.8), 0.0),
        (CouplingParams(0.0, 0.0, 1.0, 0.8), 0.4),
        (CouplingParams(2.5, 0.0, 1.0, 0.8), 1.4),
    ],
)
def test_band_gap_reference_values(p, expected):
    assert band_gap(p) == pytest.approx(expected, abs=1e-10)


def test_band_gap_matches_dense_scan_on_random_points():
    rng = np.random.default_rng(5)
    k = np.linspace(-np.pi, np.pi, 400001)
    for _ in range(20):
        p = CouplingParams(rng.uniform(0, 3), rng.uniform(-np.pi, np.pi), rng.uniform(0.1, 2), rng.uniform(0, 3))
        dense = 2 * np.abs(bloch_h(k, p)).min()
        assert band_gap(p) <= dense + 1e-12
        assert band_gap(p) == pytest.approx(dense, abs=1e-8)


def test_band_gap_rejects_coarse_grid():
    with pytest.raises(ValueError):
        band_gap(P_REF, n_k=32)


def test_bloch_sample_folds_k():
    s = bloch_sample(3 * math.pi, P_REF)
    assert -math.pi <= s.k < math.pi
    assert s.h == pytest.approx(complex(bloch_h(3 * math.pi, P_REF)), abs=1e-12)
    assert s.energy_plus == -s.energy_minus == abs(s.h)
    assert s.d[0] + 1j * s.d[1] == pytest.approx(s.h, abs=1e-13)
    assert s.d[2] == 0.0


# -- critical phase ---------------------------------------------------------

def test_critical_phase_reference_values():
    got = critical_phase(P_REF)
    # principal pair and its pi-shifted partners
    assert got == pytest.approx(
        (-3.0162648224217277, -0.12532783116806545, 0.12532783116806545, 3.0162648224217277),
        abs=1e-12,
    )
    small = min(x for x in got if x > 0)
    assert small / math.pi == pytest.approx(0.0399, abs=5e-4)


def test_critical_phase_wider_forward_hopping():
    got = critical_phase(CouplingParams(1.2, 0.0, 1.0, 1.5))
    small = min(x for x in got if x > 0)
    assert small == pytest.approx(0.3824, abs=5e-4)
    assert small / math.pi == pytest.approx(0.1217, abs=5e-4)


def test_critical_phase_satisfies_tangent_relation():
    for p in (P_REF, CouplingParams(1.2, 0.0, 1.0, 1.5)):
        cos2k = (p.J**2 - p.v**2 - p.z**2) / (2 * p.v * p.z)
        cos_sq_k = 0.5 * (1 + cos2k)
        # same as (J^2-(z-v)^2)/((z+v)^2-(z-v)^2)
        alt = (p.J**2 - (p.z - p.v) ** 2) / ((p.z + p.v) ** 2 - (p.z - p.v) ** 2)
        assert cos_sq_k == pytest.approx(alt, abs=1e-12)
        k = math.acos(math.sqrt(cos_sq_k))
        expect = math.atan(((p.z - p.v) / (p.z + p.v)) * math.tan(k))
        assert min(abs(x) for x in critical_phase(p)) == pytest.approx(abs(expect), abs=1e-10)


def test_each_critical_phase_closes_the_gap():
    for p in (P_REF, CouplingParams(1.2, 0.0, 1.0, 1.5), CouplingParams(0.9, 0.0, 0.7, 1.1)):
        for phi_c in critical_phase(p):
            assert band_gap(CouplingParams(p.J, phi_c, p.v, p.z)) < 1e-8


def test_no_critical_phase_when_gapped_for_all_phases():
    with pytest.raises(NoCriticalPhase):
        critical_phase(CouplingParams(2.5, 0.0, 1.0, 0.8))  # J > z + v
    with pytest.raises(NoCriticalPhase):
        critical_phase(CouplingParams(0.1, 0.0, 1.0, 0.8))  # J < v - z
    with pytest.raises(NoCriticalPhase):
        critical_phase(CouplingParams(0.0, 0.0, 1.0, 1.0))  # J = 0, z = v
    with pytest.raises(NoCriticalPhase):
        critical_phase(CouplingParams(1.0, 0.0, 1.0, 0.0))  # degenerate circle
