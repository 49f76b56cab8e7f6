"""Winding number of the Bloch amplitude, analytic and sampled."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .bloch import band_gap
from .errors import GaplessModel
from .params import CouplingParams

GAP_RTOL = 1e-9


@dataclass(frozen=True)
class WindingResult:
    """Winding value with a validity flag and a gap diagnostic.

    boundary_distance is the distance from the origin of the (d_x, d_y)
    plane to the closed path traced by the d-vector, i.e. min_k |h(k)|.
    well_defined is False when that distance is within tolerance of zero
    (the path passes through the origin) or, for the sampled variant,
    when the accumulated phase fails its integrality check.
    """

    value: int
    well_defined: bool
    boundary_distance: float


def winding_analytic(p: CouplingParams) -> WindingResult:
    """Winding number from the ellipse geometry of the d-vector path.

    The origin lies inside the ellipse iff
    (J cos phi / (v+z))^2 + (J sin phi / (z-v))^2 < 1, giving winding
    sign(z - v); outside gives 0.  For z = v the path degenerates to a
    segment on the line d_y = J sin phi: winding 0 off the segment,
    undefined on it.
    """
    J, phi, v, z = p.J, p.phi, p.v, p.z
    distance = 0.5 * band_gap(p, 256)
    well_defined = distance > 0.5 * GAP_RTOL * p.scale

    value = 0
    if well_defined and z != v:
        q = (J * math.cos(phi) / (v + z)) ** 2 + (J * math.sin(phi) / (z - v)) ** 2
        if q < 1.0:
            value = 1 if z > v else -1
    return WindingResult(value=value, well_defined=well_defined, boundary_distance=distance)


def winding_numeric(p: CouplingParams, n_k: int = 1024) -> WindingResult:
    """Winding number by accumulating the phase of h(k) around the zone.

    Sums the wrapped phase increments of h over n_k uniform wavenumbers;
    the total must come out an integer multiple of 2*pi.  The result is
    flagged not well defined if it misses an integer by more than 1% of a
    turn or any single increment reaches pi (sampling too coarse).

    Raises GaplessModel when any sampled |h(k)| drops below
    1e-9 * (J + v + z).
    """
    if n_k < 16:
        raise ValueError(f"n_k must be >= 16, got {n_k}")
    total, min_h, max_step = _kernels.winding_phase_scan(p.J, p.phi, p.v, p.z, n_k)
    if min_h < GAP_RTOL * p.scale:
        raise GaplessModel(
            f"|h(k)| = {min_h:.3e} below tolerance at a sampled wavenumber"
        )
    turns = total / (2.0 * math.pi)
    value = int(round(turns))
    well_defined = (
        abs(turns - value) <= 0.01
        and max_step < math.pi * (1.0 - 1e-9)
        and -1 <= value <= 1
    )
    return WindingResult(value=value, well_defined=well_defined, boundary_distance=min_h)
