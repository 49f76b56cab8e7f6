"""Edge-state taxonomy of the open chain.

Four exponentially localized profiles can appear, one per corner of the
(left/right) x (cavity/mechanical) grid, abbreviated LC, LM, RC, RM.  In
the chirally symmetric chain, near-zero eigenstates typically come as
even/odd superpositions of two opposite corners (LC with RM, or LM with
RC); classify_edge_state recognizes the pure profiles, those two hybrid
families, and everything else as bulk.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class EdgeKind(enum.Enum):
    LC = "LC"  # left cavity
    LM = "LM"  # left mechanical
    RC = "RC"  # right cavity
    RM = "RM"  # right mechanical
    HYBRID_LC_RM = "LC+RM"
    HYBRID_LM_RC = "LM+RC"
    BULK = "bulk"


_SUBLATTICE = {EdgeKind.LC: 0, EdgeKind.RC: 0, EdgeKind.LM: 1, EdgeKind.RM: 1}
_SIDE = {EdgeKind.LC: "left", EdgeKind.LM: "left", EdgeKind.RC: "right", EdgeKind.RM: "right"}

# Profiles flatter than this (per-cell amplitude ratio) do not count as
# edge-localized: xi must not exceed the cell count.
_XI_MAX_CELLS = 1.0


@dataclass(frozen=True)
class EdgeStateLabel:
    """Classification of one eigenstate.

    xi is the localization length in unit cells (absent for bulk);
    fit_quality is the coefficient of determination of the exponential
    profile fit, in [0, 1].
    """

    kind: EdgeKind
    xi: float | None
    fit_quality: float


def edge_ansatz(kind: EdgeKind, n_cells: int, xi: float) -> np.ndarray:
    """Normalized single-corner profile on the interleaved site basis.

    Amplitude exp(-2(j-1)/xi) from the left or exp(2(j-N)/xi) from the
    right, supported on one sublattice only.
    """
    if kind not in _SUBLATTICE:
        raise ValueError(f"no ansatz for {kind}")
    if not (xi > 0.0):
        raise ValueError(f"xi must be positive, got {xi}")
    j = np.arange(1, n_cells + 1, dtype=np.float64)
    if _SIDE[kind] == "left":
        profile = np.exp(-2.0 * (j - 1.0) / xi)
    else:
        profile = np.exp(2.0 * (j - n_cells) / xi)
    vec = np.zeros(2 * n_cells, dtype=np.complex128)
    vec[_SUBLATTICE[kind]:: 2] = profile
    return vec / np.linalg.norm(vec)


def profile_capture(ansatz: np.ndarray, amplitudes: np.ndarray) -> float:
    """Squared overlap of a positive envelope with a state, modulo site phases.

    The corner profiles fix only magnitudes, so the meaningful figure is
    the overlap maximized over the phases the envelope leaves free:
    (sum_j a_j |psi_j|)^2.  Coincides with |<a|psi>|^2 when the state has
    constant phase on the envelope's support.
    """
    return float(np.sum(np.abs(ansatz) * np.abs(amplitudes))) ** 2


def best_profile_fit(
    kind: EdgeKind,
    n_cells: int,
    amplitudes: np.ndarray,
    xi_lo: float = 0.05,
    xi_hi: float | None = None,
) -> tuple[float, float]:
    """(xi, capture) of the corner profile best approximating a state.

    Maximizes profile_capture over the localization length by
    golden-section search; this is the family-membership test, as opposed
    to fit_localization_length which measures the envelope decay.
    """
    if xi_hi is None:
        xi_hi = 2.0 * n_cells
    mags = np.abs(np.asarray(amplitudes))

    def capture(xi: float) -> float:
        return profile_capture(edge_ansatz(kind, n_cells, xi), mags)

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = xi_lo, xi_hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = capture(c), capture(d)
    for _ in range(70):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = capture(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = capture(d)
    xi = 0.5 * (a + b)
    return xi, capture(xi)


def fit_localization_length(profile: np.ndarray, side: str) -> tuple[float, float]:
    """Exponential fit of a per-cell probability profile.

    Fits log p_j against the cell offset from the chosen edge (j - 1 from
    the left, N - j from the right), i.e. the model p_j ~ exp(-4 d / xi).
    Cells below 1e-24 of the peak are dropped as numerical noise.

    Returns (xi, r_squared); xi is inf when the profile does not decay.
    """
    p = np.asarray(profile, dtype=np.float64)
    n = p.size
    peak = float(p.max(initial=0.0))
    if peak <= 0.0:
        return math.inf, 0.0
    if side == "left":
        offsets = np.arange(n, dtype=np.float64)
    elif side == "right":
        offsets = np.arange(n - 1, -1.0, -1.0)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    keep = p > peak * 1e-24
    x = offsets[keep]
    y = np.log(p[keep])
    if x.size < 2:
        # Single usable cell: maximally localized within resolution.
        return 4.0 / math.log(1e24), 1.0
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    xi = math.inf if slope >= -1e-12 else -4.0 / float(slope)
    return xi, r2


def _single_label(kind: EdgeKind, profile: np.ndarray, n_cells: int) -> EdgeStateLabel:
    xi, r2 = fit_localization_length(profile, _SIDE[kind])
    if not (0.0 < xi <= _XI_MAX_CELLS * n_cells):
        return EdgeStateLabel(EdgeKind.BULK, None, 0.0)
    return EdgeStateLabel(kind, xi, r2)


def classify_edge_state(
    psi,
    tol_sublattice: float = 0.9,
    tol_fit: float = 0.95,
) -> EdgeStateLabel:
    """Label a unit-norm state as a pure edge state, a hybrid, or bulk.

    A pure corner label requires one sublattice to carry at least
    tol_sublattice of the weight with the same fraction on one half of
    the chain.  Otherwise, when the cavity and mechanical components
    concentrate on opposite halves, the state is projected onto the span
    of the two matching corner profiles (localization lengths fitted from
    the state itself, capture measured modulo site phases since exact
    zero modes alternate in sign under the positive envelope); capturing
    at least tol_fit of the norm makes it a hybrid, unless a single
    profile already captures that much on its own.  Everything else is
    bulk, including profiles flatter than one localization length per
    chain (xi > N).
    """
    amps = np.asarray(getattr(psi, "amplitudes", psi), dtype=np.complex128)
    n_cells = amps.size // 2
    p = np.abs(amps) ** 2
    total = float(p.sum())
    if total <= 0.0:
        return EdgeStateLabel(EdgeKind.BULK, None, 0.0)
    p = p / total
    cav, mech = p[0::2], p[1::2]
    w_cav, w_mech = float(cav.sum()), float(mech.sum())
    half = n_cells // 2

    def left_fraction(profile: np.ndarray, weight: float) -> float:
        return float(profile[:half].sum()) / weight if weight > 0.0 else 0.0

    if w_cav >= tol_sublattice:
        frac = left_fraction(cav, w_cav)
        if frac >= tol_sublattice:
            return _single_label(EdgeKind.LC, cav, n_cells)
        if 1.0 - frac >= tol_sublattice:
            return _single_label(EdgeKind.RC, cav, n_cells)
        return EdgeStateLabel(EdgeKind.BULK, None, 0.0)
    if w_mech >= tol_sublattice:
        frac = left_fraction(mech, w_mech)
        if frac >= tol_sublattice:
            return _single_label(EdgeKind.LM, mech, n_cells)
        if 1.0 - frac >= tol_sublattice:
            return _single_label(EdgeKind.RM, mech, n_cells)
        return EdgeStateLabel(EdgeKind.BULK, None, 0.0)

    # Mixed sublattices: candidate hybrid.
    cav_left = left_fraction(cav, w_cav) >= 0.5
    mech_left = left_fraction(mech, w_mech) >= 0.5
    if cav_left and not mech_left:
        kind = EdgeKind.HYBRID_LC_RM
        parts = (EdgeKind.LC, EdgeKind.RM)
    elif mech_left and not cav_left:
        kind = EdgeKind.HYBRID_LM_RC
        parts = (EdgeKind.LM, EdgeKind.RC)
    else:
        return EdgeStateLabel(EdgeKind.BULK, None, 0.0)

    profiles = {0: cav, 1: mech}
    fits = {}
    for part in parts:
        xi, r2 = fit_localization_length(profiles[_SUBLATTICE[part]], _SIDE[part])
        if not (0.0 < xi <= _XI_MAX_CELLS * n_cells):
            return EdgeStateLabel(EdgeKind.BULK, None, 0.0)
        fits[part] = (xi, r2)

    overlaps = {
        part: best_profile_fit(part, n_cells, amps, xi_hi=float(n_cells))[1] / total
        for part in parts
    }
    for part, o in overlaps.items():
        if o >= tol_fit:
            xi, r2 = fits[part]
            return EdgeStateLabel(part, xi, r2)
    captured = sum(overlaps.values())  # the two profiles live on disjoint sublattices
    if captured < tol_fit:
        return EdgeStateLabel(EdgeKind.BULK, None, 0.0)

    weights = {EdgeKind.LC: w_cav, EdgeKind.RC: w_cav, EdgeKind.LM: w_mech, EdgeKind.RM: w_mech}
    wsum = sum(weights[part] for part in parts)
    xi = sum(weights[part] * fits[part][0] for part in parts) / wsum
    r2 = sum(weights[part] * fits[part][1] for part in parts) / wsum
    return EdgeStateLabel(kind, xi, r2)
