import cmath
import math

import pytest

from ssh_topo import CouplingParams, ZeroCoupling, effective_couplings


def test_identity_products():
    p = effective_couplings(1, 1, 1, 1, 1, 1)
    assert (p.J, p.phi, p.v, p.z) == (1.0, 0.0, 1.0, 1.0)


def test_polar_decomposition():
    p = effective_couplings(1j, 1, 0.8, 1, 1, 1)
    assert p.J == pytest.approx(1.0, abs=1e-15)
    assert p.phi == pytest.approx(math.pi / 2, abs=1e-15)
    assert p.v == pytest.approx(1.0)
    assert p.z == pytest.approx(0.8)


def test_complex_products_against_direct_arithmetic():
    g0, a0 = 0.5, 2.0 * cmath.exp(0.1j)
    g_m, a_m = 1.0, 1.0
    g_p, a_p = 1.0, 0.8
    p = effective_couplings(g0, g_m, g_p, a0, a_m, a_p)
    # independent recomputation of the same products
    on_cell = complex(g0) * complex(a0)
    assert p.J == pytest.approx(abs(on_cell), abs=1e-15)
    assert p.phi == pytest.approx(cmath.phase(on_cell), abs=1e-15)
    assert p.J == pytest.approx(1.0, abs=1e-15)
    assert p.phi == pytest.approx(0.1, abs=1e-15)
    assert p.v == pytest.approx(abs(complex(g_m) * complex(a_m)), abs=1e-15)
    assert p.z == pytest.approx(0.8, abs=1e-15)


def test_zero_backward_hopping_rejected():
    with pytest.raises(ZeroCoupling):
        effective_couplings(1, 0.0, 1, 1, 1, 1)
    with pytest.raises(ZeroCoupling):
        effective_couplings(1, 1, 1, 1, 0.0, 1)


def test_zero_on_cell_product_gives_zero_j():
    p = effective_couplings(0.0, 1, 1, 1, 1, 1)
    assert p.J == 0.0 and p.phi == 0.0


@pytest.mark.parametrize(
    "kwargs,field",
    [
        (dict(J=-0.1, phi=0, v=1, z=0), "J"),
        (dict(J=1, phi=0, v=0.0, z=0), "v"),
        (dict(J=1, phi=0, v=-1, z=0), "v"),
        (dict(J=1, phi=0, v=1, z=-0.2), "z"),
        (dict(J=math.nan, phi=0, v=1, z=0), "J"),
        (dict(J=1, phi=math.inf, v=1, z=0), "phi"),
    ],
)
def test_invalid_couplings_name_the_field(kwargs, field):
    with pytest.raises(ValueError, match=field):
        CouplingParams(**kwargs)


def test_params_frozen_and_scaled():
    p = CouplingParams(1.2, 0.3, 1.0, 0.8)
    with pytest.raises(Exception):
        p.J = 2.0
    assert p.scale == pytest.approx(3.0)
    assert p.intracell == pytest.approx(1.2 * cmath.exp(0.3j))


def test_nonfinite_inputs_rejected():
    with pytest.raises(ValueError):
        effective_couplings(math.inf, 1, 1, 1, 1, 1)
