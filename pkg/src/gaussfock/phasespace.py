"""Weyl and Wigner functions on phase space, and the Gaussian noise profile.

The channel studied here displaces by alpha with probability density
G(alpha) = (2 / pi gamma) exp(-2 |alpha|^2 / gamma), a zero-mean isotropic
Gaussian of total phase-space variance gamma / 2.  Its action multiplies
the Weyl function by exp(-gamma |alpha|^2 / 2) and convolves the Wigner
function with G.

Grids live on the (q, p) plane with alpha = (q + i p)/sqrt(2); the area
element is d^2alpha = dq dp / 2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import fftconvolve

from . import _kernels
from .fock import DensityMatrix, TruncatedPureState, mean_photon

DEFAULT_HALF_WIDTH = 6.0
DEFAULT_POINTS = 128
GRID_TOL = 1e-6


@dataclass(frozen=True)
class ChannelNoise:
    """Strength of the Gaussian displacement noise.

    gamma >= 0; the phase-space variance of the displacement is gamma / 2.
    gamma = 0 is the identity channel.
    """

    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not math.isfinite(g) or g < 0.0:
            raise ValueError(f"gamma must be finite and >= 0, got {self.gamma}")
        object.__setattr__(self, "gamma", g)

    @property
    def sigma_squared(self) -> float:
        return self.gamma / 2.0

    def __float__(self) -> float:
        return self.gamma


def as_gamma(noise: ChannelNoise | float) -> float:
    """Accept a ChannelNoise or a bare nonnegative float."""
    if isinstance(noise, ChannelNoise):
        return noise.gamma
    return ChannelNoise(float(noise)).gamma


def gaussian_profile(alpha: complex | np.ndarray, noise: ChannelNoise | float) -> np.ndarray:
    """Displacement density G(alpha) = (2/pi gamma) exp(-2|alpha|^2/gamma)."""
    gamma = as_gamma(noise)
    if gamma == 0.0:
        raise ValueError("gamma = 0 has no density (point mass at the origin)")
    a2 = np.abs(np.asarray(alpha)) ** 2
    return (2.0 / (math.pi * gamma)) * np.exp(-2.0 * a2 / gamma)


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Square (q, p) lattice, symmetric about the origin.

    values[i, j] holds the grid function at (q_i, p_j); it is None for a
    bare lattice with no samples yet.  `cell_area` is the alpha-plane
    measure of one cell, dq dp / 2.
    """

    half_width: float = DEFAULT_HALF_WIDTH
    points_per_axis: int = DEFAULT_POINTS
    values: np.ndarray | None = None

    def __post_init__(self):
        if not (self.half_width > 0 and math.isfinite(self.half_width)):
            raise ValueError("half_width must be positive and finite")
        if self.points_per_axis < 2:
            raise ValueError("points_per_axis must be at least 2")
        if self.values is not None:
            v = np.asarray(self.values)
            n = self.points_per_axis
            if v.shape != (n, n):
                raise ValueError(f"values must have shape ({n}, {n})")
            v.setflags(write=False)
            object.__setattr__(self, "values", v)

    def axis(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.points_per_axis)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.points_per_axis - 1)

    @property
    def cell_area(self) -> float:
        return self.spacing**2 / 2.0

    def alphas(self) -> np.ndarray:
        q = self.axis()
        return (q[:, None] + 1j * q[None, :]) / math.sqrt(2.0)

    def mass(self) -> float:
        if self.values is None:
            raise ValueError("grid has no values")
        return float(np.sum(self.values).real * self.cell_area)

    def with_values(self, values: np.ndarray) -> "PhaseGrid":
        return PhaseGrid(self.half_width, self.points_per_axis, values)


def _as_dm(state: DensityMatrix | TruncatedPureState) -> DensityMatrix:
    if isinstance(state, TruncatedPureState):
        return state.density_matrix()
    return state


def weyl_function(state: DensityMatrix | TruncatedPureState, point: complex) -> complex:
    """Weyl (characteristic) function C(alpha) = Tr[rho D(alpha)].

    C(0) = 1 exactly up to any truncation trace deficit, and
    C(-alpha) = conj(C(alpha)).
    """
    rho = _as_dm(state)
    return complex(_kernels.char_values(rho.mat, np.array([complex(point)]))[0])


def _displaced_parity(rho: DensityMatrix, alphas: np.ndarray) -> np.ndarray:
    # W(alpha) = (2/pi) Tr[rho D(alpha) P D'(alpha)] with P = diag((-1)^n).
    # P D'(alpha) P = D(alpha), so the sandwich collapses to D(2 alpha) P and
    # one characteristic contraction per point suffices; the closed-form
    # matrix elements make this exact for any rho supported on the truncation.
    signs = (-1.0) ** np.arange(rho.dim)
    weighted = signs[:, None] * rho.mat
    vals = _kernels.char_values(weighted, 2.0 * alphas)
    return (2.0 / math.pi) * vals


def wigner_function(state: DensityMatrix | TruncatedPureState, point: complex) -> float:
    """Wigner function at one point, (2/pi) * displaced-parity expectation."""
    rho = _as_dm(state)
    val = _displaced_parity(rho, np.array([complex(point)]))[0]
    return float(val.real)


def wigner_grid(state: DensityMatrix | TruncatedPureState, spec: PhaseGrid | None = None) -> PhaseGrid:
    """Evaluate the Wigner function on a (q, p) lattice.

    Warns when the grid looks too small for the state (radius heuristic
    from <a'a>) or when the boundary ring carries more than GRID_TOL mass.
    """
    rho = _as_dm(state)
    if spec is None:
        spec = PhaseGrid()
    radius = 2.5 * math.sqrt(2.0 * mean_photon(rho) + 1.0)
    if spec.half_width < radius:
        warnings.warn(
            f"half_width {spec.half_width} may not cover the state "
            f"(support radius heuristic {radius:.2f})",
            stacklevel=2,
        )
    vals = _displaced_parity(rho, spec.alphas().ravel()).real
    vals = vals.reshape(spec.points_per_axis, spec.points_per_axis)
    out = spec.with_values(vals)
    _warn_boundary_mass(out)
    return out


def weyl_grid(state: DensityMatrix | TruncatedPureState, spec: PhaseGrid | None = None) -> PhaseGrid:
    """Weyl function C(alpha) on a (q, p) lattice (complex values)."""
    rho = _as_dm(state)
    if spec is None:
        spec = PhaseGrid()
    vals = _kernels.char_values(rho.mat, spec.alphas().ravel())
    return spec.with_values(vals.reshape(spec.points_per_axis, spec.points_per_axis))


def _warn_boundary_mass(grid: PhaseGrid) -> None:
    v = grid.values
    ring = np.concatenate([v[0, :], v[-1, :], v[1:-1, 0], v[1:-1, -1]])
    ring_mass = float(np.sum(np.abs(ring)) * grid.cell_area)
    if ring_mass > GRID_TOL:
        warnings.warn(
            f"boundary cells carry mass {ring_mass:.2e} > {GRID_TOL:.0e}; "
            "increase half_width",
            stacklevel=3,
        )


def weyl_damp(
    weyl: Callable[[complex], complex], noise: ChannelNoise | float
) -> Callable[[complex], complex]:
    """Channel action on a Weyl function: multiply by exp(-gamma |a|^2 / 2)."""
    gamma = as_gamma(noise)

    def damped(alpha: complex) -> complex:
        return math.exp(-0.5 * gamma * abs(alpha) ** 2) * weyl(alpha)

    return damped


def wigner_convolve(grid: PhaseGrid, noise: ChannelNoise | float) -> PhaseGrid:
    """Channel action on a Wigner grid: convolve with the noise profile G.

    Zero-padded FFT convolution on the native lattice; gamma = 0 returns
    the input grid unchanged.  The grid should cover the state's support
    plus a ~4 sigma margin, where sigma per (q, p) axis is sqrt(gamma/2);
    a boundary-mass warning fires otherwise.
    """
    gamma = as_gamma(noise)
    if grid.values is None:
        raise ValueError("grid has no values")
    if gamma == 0.0:
        return grid
    h = grid.spacing
    if gamma < 8.0 * h * h:
        warnings.warn(
            f"noise kernel width sqrt(gamma/2)={math.sqrt(gamma / 2):.3f} is under-resolved "
            f"by grid spacing {h:.3f}",
            stacklevel=2,
        )
    # fftconvolve "same" keeps indices [(N-1)//2, (N-1)//2 + N) of the full
    # output, so the kernel must be sampled on that offset lattice; a
    # symmetric axis would misalign by half a cell for even N.
    n = grid.points_per_axis
    offsets = (np.arange(n) - (n - 1) // 2) * h
    kernel = gaussian_profile(
        (offsets[:, None] + 1j * offsets[None, :]) / math.sqrt(2.0), gamma
    )
    out = fftconvolve(grid.values, kernel, mode="same") * grid.cell_area
    result = grid.with_values(out)
    _warn_boundary_mass(result)
    return result


def grid_to_csv(grid: PhaseGrid, path) -> None:
    """Write a real-valued grid as CSV columns q,p,value.

    Rows run row-major over (p, q): p outer, q inner (q varies fastest).
    """
    if grid.values is None:
        raise ValueError("grid has no values")
    if np.iscomplexobj(grid.values) and np.max(np.abs(grid.values.imag)) > 1e-12:
        raise ValueError("CSV export is for real-valued grids")
    vals = grid.values.real
    q = grid.axis()
    lines = ["q,p,value"]
    for j in range(grid.points_per_axis):
        for i in range(grid.points_per_axis):
            lines.append(f"{q[i]:.12g},{q[j]:.12g},{vals[i, j]:.12g}")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)
