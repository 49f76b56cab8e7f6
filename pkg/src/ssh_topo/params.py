"""Coupling parameters of the generalized two-band chain.

The model has three hoppings per unit cell: a complex intracell hopping
J*exp(i*phi) between the cavity and mechanical site of the same cell, and
two real intercell hoppings v (cavity of cell j+1 to mechanical of cell j)
and z (mechanical of cell j+1 to cavity of cell j).  v sets the energy
unit and must be positive; J and z are non-negative magnitudes with any
sign information carried by phi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ZeroCoupling


@dataclass(frozen=True)
class CouplingParams:
    """Immutable hopping amplitudes (J, phi, v, z)."""

    J: float
    phi: float
    v: float
    z: float

    def __post_init__(self):
        for name in ("J", "phi", "v", "z"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.J < 0.0:
            raise ValueError(f"J must be non-negative, got {self.J}")
        if self.v <= 0.0:
            raise ValueError(f"v must be positive, got {self.v}")
        if self.z < 0.0:
            raise ValueError(f"z must be non-negative, got {self.z}")

    @property
    def intracell(self) -> complex:
        """Complex intracell hopping J*exp(i*phi)."""
        return self.J * cmath.exp(1j * self.phi)

    @property
    def scale(self) -> float:
        """J + v + z, the natural magnitude for relative tolerances."""
        return self.J + self.v + self.z


def effective_couplings(
    g0: complex,
    g_minus: complex,
    g_plus: complex,
    alpha0: complex,
    alpha_minus: complex,
    alpha_plus: complex,
) -> CouplingParams:
    """Hopping amplitudes from bare couplings and classical drive amplitudes.

    Each effective hopping is the product of a bare coupling strength and
    the drive amplitude addressing it: the on-cell product g0*alpha0 sets
    (J, phi) through its polar form, while the magnitudes of the two
    sideband products set v and z.

    Raises ZeroCoupling when |g_minus*alpha_minus| vanishes, since v is
    the unit of the model and must stay positive.
    """
    values = {
        "g0": complex(g0),
        "g_minus": complex(g_minus),
        "g_plus": complex(g_plus),
        "alpha0": complex(alpha0),
        "alpha_minus": complex(alpha_minus),
        "alpha_plus": complex(alpha_plus),
    }
    for name, value in values.items():
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError(f"{name} must be finite, got {value!r}")

    J, phi = cmath.polar(values["g0"] * values["alpha0"])
    v = abs(values["g_minus"] * values["alpha_minus"])
    z = abs(values["g_plus"] * values["alpha_plus"])
    if v == 0.0:
        raise ZeroCoupling("g_minus*alpha_minus vanishes; v must be positive")
    return CouplingParams(J=J, phi=phi, v=v, z=z)
