"""Modular-variable subsystem decomposition: (qubit) x (gauge mode).

Splitting the fundamental patch down the middle assigns the left square
to logical 0 and the right to logical 1; a pure state becomes

    psi  =  sum_l |l>_L (x) |gamma_l>_G,

with the gauge wavefunctions living on the stretched half-width patch
(a, b) = (alpha, 2 alpha), i.e. u in [-alpha/2, alpha/2), v in
[-pi/2alpha, pi/2alpha).  The unphased split carries no phases, so the
change of basis is a pure re-indexing of samples and exactly unitary.
Gauge u-wraps cost ``exp(-i 2 alpha v)`` on kets.

Tracing out the gauge mode yields the same logical qubit as the overlap
map in :mod:`zakgkp.gkp`; preceding the trace with the entangling
counter-rotation (gamma_l -> exp(-i alpha l v) gamma_l) yields the
error-correction logical state instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import gridio, modular, operators
from .core import IdealZakState, ModularWavefunction, ZakGrid
from .errors import GridMismatchError
from .gkp import GKPCode, LogicalQubit, _as_mixture, _pair_ideal, _sector_split

__all__ = [
    "SSDState",
    "IdealSSDState",
    "to_ssd",
    "from_ssd",
    "gauge_trace",
    "ec_gauge_trace",
    "apply_Z_ssd",
    "apply_X_ssd",
    "PPGaugeModes",
    "pp_bridge",
    "pp_bridge_inverse",
    "save_ssd",
    "load_ssd",
]


class SSDState:
    """Pure state as a pair of gauge wavefunctions labeled by the logical index."""

    __slots__ = ("code", "gamma")

    def __init__(self, code: GKPCode, gamma0: ModularWavefunction, gamma1: ModularWavefunction):
        if not gamma0.grid.compatible(gamma1.grid):
            raise GridMismatchError("gauge components live on different grids")
        if not gamma0.grid.patch.approx_equal(code.gauge_patch()):
            raise GridMismatchError("gauge grid does not match the code's gauge patch")
        self.code = code
        self.gamma = (gamma0, gamma1)

    @property
    def gauge_grid(self) -> ZakGrid:
        return self.gamma[0].grid

    def norm_squared(self):
        return self.gamma[0].norm_squared() + self.gamma[1].norm_squared()

    def norm(self):
        return math.sqrt(self.norm_squared())


class IdealSSDState:
    """Ideal variant: per-logical-index lists of gauge point masses.

    Gauge coordinates are canonicalized into the gauge patch on
    construction, wrapping with the gauge quasi-periodicity phase
    ``exp(-i 2 alpha n v)``.
    """

    __slots__ = ("code", "points")

    def __init__(self, code: GKPCode, points0, points1, canonicalize=True):
        patch = code.gauge_patch()
        sectors = []
        for pts in (points0, points1):
            items = pts.items() if isinstance(pts, dict) else pts
            merged = {}
            for (x, y), w in items:
                w = complex(w)
                if canonicalize:
                    u, v, n = patch.reduce(x, y)
                    w *= cmath.exp(-1j * patch.b * n * v)
                else:
                    u, v = float(x), float(y)
                key = (u, v)
                merged[key] = merged.get(key, 0j) + w
            sectors.append(merged)
        self.code = code
        self.points = tuple(sectors)

    def norm_squared(self):
        return float(
            sum(abs(w) ** 2 for sector in self.points for w in sector.values())
        )

    def norm(self):
        return math.sqrt(self.norm_squared())


def to_ssd(state, code: GKPCode | None = None):
    """Change of basis from the full mode to (qubit) x (gauge mode).

    Grid states split into left/right half columns re-indexed onto the
    gauge patch (no phases; the unphased form of the change of basis).
    Ideal states split their point masses by sector.
    """
    if isinstance(state, IdealZakState):
        if code is None:
            code = GKPCode(alpha=state.patch.a / 2)
        if not state.patch.approx_equal(code.full_patch()):
            raise GridMismatchError("state patch does not match the code's fundamental patch")
        sectors = _sector_split(state, code)
        return IdealSSDState(code, sectors[0], sectors[1], canonicalize=False)

    grid = state.grid
    if code is None:
        code = GKPCode(alpha=grid.patch.a / 2)
    if not grid.patch.approx_equal(code.full_patch()):
        raise GridMismatchError("state patch does not match the code's fundamental patch")
    half = grid.nu // 2
    gauge_grid = code.gauge_grid(half, grid.nv)
    gamma0 = ModularWavefunction(gauge_grid, state.samples[:half, :])
    gamma1 = ModularWavefunction(gauge_grid, state.samples[half:, :])
    return SSDState(code, gamma0, gamma1)


def from_ssd(state):
    """Inverse change of basis back to the full mode.

    For ideal states whose gauge points were supplied outside the gauge
    patch, canonicalization at construction already folded in the
    ``exp(-i 2 alpha n v)`` wrap phases, so this composition realizes the
    phased alternate form of the change of basis as well.
    """
    code = state.code
    if isinstance(state, IdealSSDState):
        points = []
        for ell, sector in enumerate(state.points):
            for (gu, gv), w in sector.items():
                points.append(((gu + code.alpha * ell, gv), w))
        return IdealZakState(code.full_patch(), points, canonicalize=True)

    gauge_grid = state.gauge_grid
    full_grid = code.grid(2 * gauge_grid.nu, gauge_grid.nv)
    samples = np.vstack([state.gamma[0].samples, state.gamma[1].samples])
    return ModularWavefunction(full_grid, samples)


def _trace_matrix(state, ec_phase: bool):
    """Unnormalized 2x2 gauge-contraction matrix of one pure SSD component."""
    alpha = state.code.alpha
    if isinstance(state, IdealSSDState):
        return _pair_ideal(state.points, alpha, ec_phase)
    grid = state.gauge_grid
    v = grid.v_values()
    comps = []
    for ell in (0, 1):
        samples = state.gamma[ell].samples
        if ec_phase:
            samples = samples * np.exp(-1j * alpha * ell * v)[None, :]
        comps.append(samples)
    mat = np.zeros((2, 2), dtype=np.complex128)
    for ell in (0, 1):
        for ellp in (0, 1):
            mat[ell, ellp] = np.sum(comps[ell] * comps[ellp].conj()) * grid.cell_area
    return mat


def gauge_trace(rho) -> LogicalQubit:
    """Partial trace over the gauge mode, trace-normalized with raw trace kept."""
    mat = np.zeros((2, 2), dtype=np.complex128)
    for p, component in _as_mixture(rho):
        mat += p * _trace_matrix(component, ec_phase=False)
    return LogicalQubit.from_unnormalized(mat)


def ec_gauge_trace(rho) -> LogicalQubit:
    """Error-correction-based partial trace.

    Each gauge wavefunction is pre-multiplied by ``exp(-i alpha l v)``
    (the logical-gauge counter-rotation) before tracing; on ideal
    small-shifted codewords this undoes the shift-induced logical rotation
    exactly.
    """
    mat = np.zeros((2, 2), dtype=np.complex128)
    for p, component in _as_mixture(rho):
        mat += p * _trace_matrix(component, ec_phase=True)
    return LogicalQubit.from_unnormalized(mat)


def apply_Z_ssd(state, t):
    """Momentum kick in SSD form: ``exp(i alpha l t)`` on the logical index,
    gauge phase ``exp(i u t)`` and a gauge v-translation."""
    code = state.code
    if isinstance(state, IdealSSDState):
        patch = code.gauge_patch()
        sectors = []
        for ell, sector in enumerate(state.points):
            logical_phase = cmath.exp(1j * code.alpha * ell * t)
            moved = {}
            for (gu, gv), w in sector.items():
                v_new, _ = modular.split(gv + t, patch.height, -patch.v_min)
                moved[(gu, v_new)] = (
                    moved.get((gu, v_new), 0j) + w * logical_phase * cmath.exp(1j * gu * t)
                )
            sectors.append(moved)
        return IdealSSDState(code, sectors[0], sectors[1], canonicalize=False)

    new_gamma = []
    for ell in (0, 1):
        g = operators.apply_translate_v(operators.apply_phase_u(state.gamma[ell], t), t)
        phase = cmath.exp(1j * code.alpha * ell * t)
        new_gamma.append(g.with_samples(phase * g.samples))
    return SSDState(code, new_gamma[0], new_gamma[1])


def _x_wrap_phase(ell_sum: int, alpha, v):
    """Phase for a logical-sector transition: ``exp(-i 2 alpha v floor(m/2))``.

    ``m`` is the pre-reduction logical index (old index plus wrap count);
    leaving the two-sector range in either direction is a full-period
    translation of the original mode and costs one quasi-periodicity phase.
    """
    count = ell_sum // 2
    if count == 0:
        return np.ones_like(v, dtype=np.complex128) if isinstance(v, np.ndarray) else 1.0 + 0j
    if isinstance(v, np.ndarray):
        return np.exp(-2j * alpha * count * v)
    return cmath.exp(-2j * alpha * count * v)


def apply_X_ssd(state, t):
    """Position shift in SSD form.

    The fractional part translates the gauge mode; gauge points pushed
    past the half-patch boundary flip the logical index (the entangling
    factor), and the integer part applies logical flips, with all
    quasi-periodicity phases assigned analytically.
    """
    code = state.code
    alpha = code.alpha
    frac, n_alpha = modular.split(t, alpha, alpha / 2)

    if isinstance(state, IdealSSDState):
        sectors = ({}, {})
        for ell, sector in enumerate(state.points):
            for (gu, gv), w in sector.items():
                g_new, wrap = modular.split(gu + frac, alpha, alpha / 2)
                m = ell + wrap
                w = w * _x_wrap_phase(m, alpha, gv)
                m2 = (m % 2) + n_alpha
                w = w * _x_wrap_phase(m2, alpha, gv)
                ell_new = m2 % 2
                key = (g_new, gv)
                sectors[ell_new][key] = sectors[ell_new].get(key, 0j) + w
        return IdealSSDState(code, sectors[0], sectors[1], canonicalize=False)

    grid = state.gauge_grid
    cols = grid.u_steps(frac)
    v = grid.v_values()
    nu = grid.nu
    shifted = [np.roll(state.gamma[ell].samples, cols, axis=0) for ell in (0, 1)]
    if cols >= 0:
        wrapped = slice(0, cols)
        wrap_sign = 1
    else:
        wrapped = slice(nu + cols, nu)
        wrap_sign = -1
    frac_parts = []
    for ell_new in (0, 1):
        ell_old = 1 - ell_new
        part = shifted[ell_new].copy()
        # wrapped columns arrive from the other sector with the transition phase
        part[wrapped, :] = (
            shifted[ell_old][wrapped, :]
            * _x_wrap_phase(ell_old + wrap_sign, alpha, v)[None, :]
        )
        frac_parts.append(part)
    new_gamma = []
    for ell_new in (0, 1):
        ell_mid = (ell_new - n_alpha) % 2
        phase = _x_wrap_phase(ell_mid + n_alpha, alpha, v)
        new_gamma.append(
            ModularWavefunction(grid, frac_parts[ell_mid] * phase[None, :])
        )
    return SSDState(code, new_gamma[0], new_gamma[1])


@dataclass(frozen=True)
class PPGaugeModes:
    """Partitioned-position gauge coefficients psi_l(m, u).

    ``coeffs[l][i, j]`` pairs frequency ``m_values[i]`` with the gauge
    column ``u_j``.  Synthesis direction: gamma_l(u, v) =
    sqrt(alpha/pi) sum_m exp(+i 2 alpha m v) psi_l(m, u); the analysis
    direction therefore carries ``exp(-i 2 alpha m v)``.
    """

    code: GKPCode
    gauge_grid: ZakGrid
    m_values: np.ndarray
    coeffs: tuple


def pp_bridge(state: SSDState) -> PPGaugeModes:
    """Fourier series of the gauge wavefunctions in v with frequencies 2 alpha m."""
    code = state.code
    grid = state.gauge_grid
    alpha = code.alpha
    v = grid.v_values()
    m = np.arange(-grid.nv // 2, grid.nv // 2)
    analysis = np.exp(-2j * alpha * np.outer(m, v))
    scale = math.sqrt(alpha / math.pi) * grid.dv
    coeffs = tuple(
        scale * (analysis @ state.gamma[ell].samples.T) for ell in (0, 1)
    )
    return PPGaugeModes(code=code, gauge_grid=grid, m_values=m, coeffs=coeffs)


def pp_bridge_inverse(modes: PPGaugeModes) -> SSDState:
    """Resynthesize the gauge wavefunctions from partitioned-position coefficients."""
    code = modes.code
    grid = modes.gauge_grid
    alpha = code.alpha
    v = grid.v_values()
    synthesis = np.exp(2j * alpha * np.outer(modes.m_values, v))
    scale = math.sqrt(alpha / math.pi)
    gammas = [
        ModularWavefunction(grid, scale * (coeff.T @ synthesis)) for coeff in modes.coeffs
    ]
    return SSDState(code, gammas[0], gammas[1])


def save_ssd(state: SSDState, base_path):
    """Write both gauge grids in the binary grid format plus a one-line manifest."""
    paths = [f"{base_path}.g{ell}.bin" for ell in (0, 1)]
    for ell, path in enumerate(paths):
        gridio.save_grid_binary(state.gamma[ell], path)
    line = (
        f"alpha={gridio.format_float(state.code.alpha)} "
        f"gamma0={paths[0]} gamma1={paths[1]}\n"
    )
    gridio.atomic_write_text(f"{base_path}.manifest", line)


def load_ssd(base_path) -> SSDState:
    with open(f"{base_path}.manifest", encoding="ascii") as fh:
        fields = dict(item.split("=", 1) for item in fh.read().split())
    code = GKPCode(alpha=float(fields["alpha"]))
    gamma0 = gridio.load_grid_binary(fields["gamma0"])
    gamma1 = gridio.load_grid_binary(fields["gamma1"])
    return SSDState(code, gamma0, gamma1)
