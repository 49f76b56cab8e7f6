import os
import subprocess
import sys

import numpy as np
import pytest

from ssh_topo._kernels import accel, reference


def random_params(rng):
    return (
        float(rng.uniform(0, 3)),
        float(rng.uniform(-np.pi, np.pi)),
        float(rng.uniform(0.2, 2)),
        float(rng.uniform(0, 3)),
    )


def test_phase_scan_backends_agree():
    rng = np.random.default_rng(13)
    for _ in range(300):
        J, phi, v, z = random_params(rng)
        ref = reference.winding_phase_scan(J, phi, v, z, 512)
        acc = accel.winding_phase_scan(J, phi, v, z, 512)
        assert ref == pytest.approx(acc, abs=1e-10)


def test_winding_grid_backends_agree():
    j_values = np.linspace(0.0, 3.0, 31)
    z_values = np.linspace(0.0, 3.0, 29)
    ref = reference.winding_grid(j_values, z_values, 0.1, 1.0, 256)
    acc = accel.winding_grid(j_values, z_values, 0.1, 1.0, 256)
    both_ok = ref[1] & acc[1]
    assert np.array_equal(ref[1], acc[1])
    assert np.array_equal(ref[0][both_ok], acc[0][both_ok])
    assert np.max(np.abs(ref[2] - acc[2])) < 1e-10


def test_propagation_backends_agree():
    rng = np.random.default_rng(4)
    steps = 200
    theta = np.linspace(0.0, 2 * np.pi, steps)
    coeffs = np.column_stack(
        [
            0.5 * np.sin(theta),
            1.1 * (1 - np.cos(theta)),
            np.full(steps, 1.0),
            np.full(steps, 0.1),
        ]
    )
    dts = np.full(steps, 0.05)
    psi0 = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi0 = psi0 / np.linalg.norm(psi0)
    s_ref = reference.propagate_piecewise(coeffs, 0.3, dts, psi0)
    s_acc = accel.propagate_piecewise(coeffs, 0.3, dts, psi0)
    assert s_ref.shape == s_acc.shape == (steps + 1, 16)
    assert np.max(np.abs(np.abs(s_ref) ** 2 - np.abs(s_acc) ** 2)) < 1e-12


def test_propagation_is_unitary_per_step():
    coeffs = np.array([[0.3, 1.0, 1.0, 0.2]] * 50)
    dts = np.full(50, 0.7)
    psi0 = np.zeros(12, complex)
    psi0[0] = 1.0
    for impl in (reference, accel):
        states = impl.propagate_piecewise(coeffs, 0.0, dts, psi0)
        norms = np.sum(np.abs(states) ** 2, axis=1)
        assert np.max(np.abs(norms - 1.0)) < 1e-12


def _backend_in_subprocess(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("SSH_TOPO_NUMBA", None)
    else:
        env["SSH_TOPO_NUMBA"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "import ssh_topo; print(ssh_topo.backend())"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_backend():
    assert _backend_in_subprocess("0") == "numpy"
    assert _backend_in_subprocess("off") == "numpy"
    assert _backend_in_subprocess("1") == "numba"
    assert _backend_in_subprocess(None) == "numba"
