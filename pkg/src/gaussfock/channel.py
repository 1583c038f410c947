"""Gaussian displacement channel on truncated density matrices.

The channel is a continuous mixture of displacements with an isotropic
Gaussian weight of total second moment gamma/2 (variance gamma/4 per
(q, p) axis).  Two independent realizations are provided:

* `apply_channel`: deterministic product Gauss-Hermite quadrature over
  the weight.  The integrand's matrix elements are entire functions of
  alpha, so convergence is spectral in the order.
* `apply_channel_mc`: plain Monte-Carlo average over seeded Gaussian
  draws.  Kept deliberately independent of the quadrature path so the
  two can be compared as an oracle pair.

Both conjugate on an internally padded space (truncating D(alpha) before
conjugation leaks probability; padding by ceil(4 sqrt(gamma dim)) pushes
the leak below the trace tolerance) and then crop back.  The result is
assembled as a Gram matrix of displaced eigenvector rows, so it is
positive semidefinite by construction; the raw trace deficit of the crop
is recorded on the returned DensityMatrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from . import _kernels
from .exceptions import AccuracyError
from .fock import DensityMatrix
from .phasespace import ChannelNoise, as_gamma

DEFAULT_QUAD_ORDER = 40

# complex128 elements allowed per displaced-vector chunk, ~64 MB
_CHUNK_BUDGET = 1 << 22

# raw trace drift above this aborts; below, it is recorded as trace_deficit
_DRIFT_LIMIT = 1e-6

_EIG_KEEP = 1e-14


@dataclass(frozen=True)
class QuadratureSpec:
    """Product Gauss-Hermite rule: `order_per_axis` nodes per (q, p) axis.

    `scale` widens (or narrows) the variable change relative to the
    noise-matched width sqrt(gamma/4) per axis; off-unit scales are
    importance-reweighted, so the rule still targets the same integral.
    """

    order_per_axis: int = DEFAULT_QUAD_ORDER
    scale: float = 1.0

    def __post_init__(self):
        if int(self.order_per_axis) != self.order_per_axis or self.order_per_axis < 1:
            raise ValueError("order_per_axis must be a positive integer")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be a positive finite real")


@dataclass(frozen=True)
class McSpec:
    samples: int
    seed: int

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError("samples must be a positive integer")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit an unsigned 64-bit integer")


def _nodes(noise: ChannelNoise | float, quad: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Flat (weights, alphas) of the 2-d rule matched to the noise weight."""
    gamma = as_gamma(noise)
    if gamma <= 0.0:
        raise ValueError("quadrature nodes need gamma > 0 (gamma = 0 is the identity)")
    t, w = hermgauss(quad.order_per_axis)
    s = quad.scale
    w1 = w / math.sqrt(math.pi)
    if s != 1.0:
        # u = s * sqrt(gamma/2) * t reweights the Gauss-Hermite rule
        w1 = w1 * s * np.exp((1.0 - s * s) * t * t)
    axis = math.sqrt(gamma / 2.0) * s * t
    weights = np.outer(w1, w1).ravel()
    alphas = (axis[:, None] + 1j * axis[None, :]).ravel()
    return weights, alphas


def kraus_weights(
    noise: ChannelNoise | float, quad: QuadratureSpec = QuadratureSpec()
) -> list[tuple[float, complex]]:
    """Discrete Kraus decomposition: sqrt(w_j) D(alpha_j) with sum w_j = 1.

    Weights are normalized to unit sum so the set is trace preserving
    exactly; coarse scaled rules would otherwise miss by more than the
    rounding level.
    """
    weights, alphas = _nodes(noise, quad)
    weights = weights / weights.sum()
    return [(float(w), complex(a)) for w, a in zip(weights, alphas)]


def _pad_dim(gamma: float, dim: int) -> int:
    return dim + math.ceil(4.0 * math.sqrt(gamma * dim))


def _eig_factors(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    lam, vecs = np.linalg.eigh(rho.mat)
    keep = lam > _EIG_KEEP
    return lam[keep], vecs[:, keep]


def _gram_average(
    lam: np.ndarray,
    vecs: np.ndarray,
    weights: np.ndarray,
    alphas: np.ndarray,
    dpad: int,
) -> np.ndarray:
    """sum_j w_j D(a_j) rho D(a_j)' on the padded space, rho = vecs lam vecs'."""
    dim, r = vecs.shape
    vpad = np.zeros((dpad, r), dtype=np.complex128)
    vpad[:dim, :] = vecs * np.sqrt(lam)[None, :]
    out = np.zeros((dpad, dpad), dtype=np.complex128)
    chunk = max(1, _CHUNK_BUDGET // (dpad * r))
    for lo in range(0, alphas.size, chunk):
        hi = min(lo + chunk, alphas.size)
        dv = _kernels.displace_vectors(vpad, alphas[lo:hi])  # (nc, dpad, r)
        dv *= np.sqrt(weights[lo:hi])[:, None, None]
        rows = dv.transpose(0, 2, 1).reshape(-1, dpad)
        out += rows.T @ rows.conj()
    return out


def _finish(padded: np.ndarray, dim: int) -> DensityMatrix:
    crop = np.array(padded[:dim, :dim])
    crop = 0.5 * (crop + crop.conj().T)
    tr = float(np.trace(crop).real)
    drift = abs(1.0 - tr)
    if drift > _DRIFT_LIMIT:
        raise AccuracyError(
            f"channel application lost trace {drift:.3e} (> {_DRIFT_LIMIT:g}); "
            "increase the quadrature order or the truncation dim"
        )
    return DensityMatrix(crop / tr, trace_deficit=1.0 - tr)


def _padded_channel(
    rho: DensityMatrix, gamma: float, quad: QuadratureSpec
) -> np.ndarray:
    """Channel output on the padded space, before cropping.

    Trace equals 1 up to quadrature completeness; callers that only
    need matrix elements against low-lying states (overlaps) can use
    this without paying the crop loss.
    """
    weights, alphas = _nodes(gamma, quad)
    lam, vecs = _eig_factors(rho)
    dpad = _pad_dim(gamma, rho.dim)
    return _gram_average(lam, vecs, weights, alphas, dpad)


def apply_channel(
    rho: DensityMatrix,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> DensityMatrix:
    """Deterministic quadrature evaluation of the channel.

    gamma = 0 returns `rho` unchanged.  Raises AccuracyError when the
    cropped result drifts in trace by more than 1e-6.
    """
    gamma = as_gamma(noise)
    if gamma == 0.0:
        return rho
    padded = _padded_channel(rho, gamma, quad)
    return _finish(padded, rho.dim)


def mc_alphas(gamma: float, mc: McSpec) -> np.ndarray:
    """The seeded displacement draws used by apply_channel_mc, in order."""
    rng = np.random.default_rng(mc.seed)
    qp = rng.normal(0.0, math.sqrt(gamma / 4.0), size=(mc.samples, 2))
    return qp[:, 0] + 1j * qp[:, 1]


def apply_channel_mc(
    rho: DensityMatrix, noise: ChannelNoise | float, mc: McSpec
) -> DensityMatrix:
    """Monte-Carlo average of displacement conjugations, seeded and exact
    in distribution: alpha draws are complex Gaussian with variance
    gamma/4 per (q, p) axis.  Same seed, same result, bitwise.
    """
    gamma = as_gamma(noise)
    if gamma == 0.0:
        raise ValueError(
            "gamma = 0 makes the sampling distribution degenerate; use apply_channel"
        )
    alphas = mc_alphas(gamma, mc)
    weights = np.full(mc.samples, 1.0 / mc.samples)
    lam, vecs = _eig_factors(rho)
    dpad = _pad_dim(gamma, rho.dim)
    padded = _gram_average(lam, vecs, weights, alphas, dpad)
    return _finish(padded, rho.dim)
