"""Fidelity functionals for the Gaussian displacement channel.

Four numerically independent routes to the same pure-state fidelity:

* `fidelity_pure`: Gauss-Hermite quadrature of the noise-weighted
  squared Weyl function (phase-space integral form).
* `fidelity_pure_direct`: input-output overlap through the density
  matrix channel of `apply_channel`.
* `fidelity_wigner`: Riemann overlap of Wigner grids, channel applied
  by grid convolution.
* `fidelity_a_gamma`: two-copy beamsplitter construction, fidelity as
  a thermal-weighted expectation on the difference mode.

Plus entanglement fidelity (with an independent purification route),
ensemble averages, a Monte-Carlo estimator, and the scaling-law and
maximum-bound checkers.  Every route returns a FidelityValue tagging
the method and an error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import _kernels
from .channel import (
    McSpec,
    QuadratureSpec,
    _nodes,
    _pad_dim,
    _padded_channel,
    mc_alphas,
)
from .closedform import max_fidelity
from .exceptions import AccuracyError
from .fock import DEFAULT_DIM, DensityMatrix, TruncatedPureState, number_state
from .phasespace import (
    DEFAULT_HALF_WIDTH,
    DEFAULT_POINTS,
    ChannelNoise,
    PhaseGrid,
    as_gamma,
    wigner_convolve,
    wigner_grid,
)

METHODS = frozenset(
    {"weyl_quadrature", "wigner_overlap", "direct_overlap", "a_gamma", "closed_form", "monte_carlo"}
)

_CLAMP = 1e-9

# two-mode constructions scale as dim^2; keep them desk-sized
_TWO_MODE_DIM_MAX = 32


@dataclass(frozen=True)
class FidelityValue:
    """A fidelity in [0, 1] with its computation route and error estimate.

    `raw` keeps the unclamped number; quadrature noise within 1e-9
    outside [0, 1] is clamped into range, anything worse raises.
    """

    value: float
    method: str
    error_estimate: float = 0.0
    raw: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.raw is None:
            object.__setattr__(self, "raw", float(self.value))
        if not (0.0 <= self.value <= 1.0):
            raise ValueError("value must lie in [0, 1] after clamping")
        if self.error_estimate < 0.0:
            raise ValueError("error_estimate must be nonnegative")

    def __float__(self) -> float:
        return self.value


def _make(raw: float, method: str, err: float) -> FidelityValue:
    raw = float(raw)
    if raw < -_CLAMP or raw > 1.0 + _CLAMP:
        raise AccuracyError(
            f"{method} produced {raw}, outside [0, 1] by more than {_CLAMP:g}"
        )
    value = min(max(raw, 0.0), 1.0)
    return FidelityValue(value, method, max(float(err), abs(raw - value)), raw)


def _weyl_weighted_sum(rho_mat: np.ndarray, gamma: float, quad: QuadratureSpec) -> float:
    weights, alphas = _nodes(gamma, quad)
    c = _kernels.char_values(rho_mat, alphas)
    return float(np.real(weights @ (c.real**2 + c.imag**2)))


def _nested_orders(quad: QuadratureSpec) -> QuadratureSpec:
    # coarser companion rule used only for the error estimate
    return QuadratureSpec(max(4, quad.order_per_axis - 8), quad.scale)


def fidelity_pure(
    psi: TruncatedPureState,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> FidelityValue:
    """Channel fidelity of a pure input by quadrature of the squared Weyl
    function against the noise weight.  gamma = 0 gives exactly 1.
    """
    gamma = as_gamma(noise)
    if gamma == 0.0:
        return FidelityValue(1.0, "weyl_quadrature", 0.0)
    rho = np.outer(psi.amps, np.conj(psi.amps))
    val = _weyl_weighted_sum(rho, gamma, quad)
    coarse = _weyl_weighted_sum(rho, gamma, _nested_orders(quad))
    return _make(val, "weyl_quadrature", abs(val - coarse))


def fidelity_pure_direct(
    psi: TruncatedPureState,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> FidelityValue:
    """<psi| Phi(|psi><psi|) |psi> through the density-matrix channel.

    The overlap is taken against the channel output on its internal
    padded space, so mass pushed above psi.dim (which the overlap never
    touches) costs nothing; only quadrature completeness enters the
    error estimate.
    """
    gamma = as_gamma(noise)
    if gamma == 0.0:
        return FidelityValue(1.0, "direct_overlap", 0.0)
    rho = DensityMatrix(np.outer(psi.amps, np.conj(psi.amps)))
    padded = _padded_channel(rho, gamma, quad)
    val = float(np.real(np.conj(psi.amps) @ padded[: psi.dim, : psi.dim] @ psi.amps))
    completeness = abs(1.0 - float(np.trace(padded).real))
    return _make(val, "direct_overlap", completeness + 1e-14)


def fidelity_wigner(
    psi: TruncatedPureState,
    noise: ChannelNoise | float,
    grid: PhaseGrid | None = None,
) -> FidelityValue:
    """pi * integral of W_out W_in, with the channel applied by Wigner-grid
    convolution.  The grid must cover the state plus the noise spread.
    """
    if grid is None:
        grid = PhaseGrid(DEFAULT_HALF_WIDTH, DEFAULT_POINTS)
    win = wigner_grid(psi, grid)
    wout = wigner_convolve(win, noise)
    val = math.pi * float(np.sum(wout.values * win.values)) * grid.cell_area
    err = abs(win.mass() - 1.0) + abs(wout.mass() - 1.0)
    return _make(val, "wigner_overlap", err)


def entanglement_fidelity(
    rho: DensityMatrix,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> FidelityValue:
    """Quadrature of the noise-weighted squared Weyl function of rho;
    coincides with fidelity_pure on rank-1 inputs.
    """
    gamma = as_gamma(noise)
    if gamma == 0.0:
        return FidelityValue(1.0, "weyl_quadrature", 0.0)
    val = _weyl_weighted_sum(rho.mat, gamma, quad)
    coarse = _weyl_weighted_sum(rho.mat, gamma, _nested_orders(quad))
    return _make(val, "weyl_quadrature", abs(val - coarse))


def entanglement_fidelity_via_purification(
    rho: DensityMatrix,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> FidelityValue:
    """Independent entanglement-fidelity route through the canonical
    purification: build the two-mode pure state with amplitude matrix
    sqrt(rho), push mode one through the channel by quadrature, and take
    the overlap with the input purification.
    """
    gamma = as_gamma(noise)
    d = rho.dim
    if d > _TWO_MODE_DIM_MAX:
        raise ValueError(
            f"purification route needs dim <= {_TWO_MODE_DIM_MAX} (got {d}); "
            "the two-mode state is dim^2-sized"
        )
    if gamma == 0.0:
        return FidelityValue(1.0, "direct_overlap", 0.0)
    lam, v = np.linalg.eigh(rho.mat)
    psi_mat = (v * np.sqrt(np.clip(lam, 0.0, None))) @ v.conj().T  # sqrt(rho)
    dpad = _pad_dim(gamma, d)
    vecs = np.zeros((dpad, d), dtype=np.complex128)
    vecs[:d, :] = psi_mat
    weights, alphas = _nodes(gamma, quad)
    two = dpad * d
    rho_out = np.zeros((two, two), dtype=np.complex128)
    chunk = max(1, (1 << 22) // two)
    for lo in range(0, alphas.size, chunk):
        hi = min(lo + chunk, alphas.size)
        dv = _kernels.displace_vectors(vecs, alphas[lo:hi])  # (nc, dpad, d)
        rows = dv.reshape(hi - lo, two) * np.sqrt(weights[lo:hi])[:, None]
        rho_out += rows.T @ rows.conj()
    drift = abs(1.0 - float(np.trace(rho_out).real))
    if drift > 1e-6:
        raise AccuracyError(
            f"purification channel lost trace {drift:.3e}; increase dim or order"
        )
    flat = vecs.reshape(two)
    val = float(np.real(np.conj(flat) @ rho_out @ flat))
    return _make(val, "direct_overlap", drift + 1e-14)


@dataclass(frozen=True)
class Ensemble:
    """Weighted family of pure states; probabilities sum to 1.

    `truncation_tail` reports probability mass dropped when the family
    was cut to finitely many members (renormalized away, kept for error
    accounting).
    """

    members: tuple
    truncation_tail: float = 0.0

    def __post_init__(self):
        members = tuple((float(p), state) for p, state in self.members)
        if not members:
            raise ValueError("ensemble needs at least one member")
        total = 0.0
        for p, state in members:
            if not (0.0 <= p <= 1.0):
                raise ValueError("probabilities must lie in [0, 1]")
            if not isinstance(state, TruncatedPureState):
                raise ValueError("members must be TruncatedPureState instances")
            total += p
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "members", members)


def bose_einstein_ensemble(nbar: float, n_max: int = 40, dim: int = DEFAULT_DIM) -> Ensemble:
    """Number states weighted by the Bose-Einstein distribution of mean
    nbar, truncated at n_max and renormalized; the dropped geometric
    tail is recorded on the ensemble.
    """
    if nbar < 0:
        raise ValueError("nbar must be nonnegative")
    if dim <= n_max:
        raise ValueError("dim must exceed n_max so every member is exact")
    s = nbar / (1.0 + nbar)
    raw = np.array([(1.0 - s) * s**n for n in range(n_max + 1)])
    tail = s ** (n_max + 1)
    probs = raw / raw.sum()
    members = tuple((float(p), number_state(n, dim)) for n, p in enumerate(probs))
    return Ensemble(members, truncation_tail=float(tail))


def ensemble_fidelity(
    ens: Ensemble,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> FidelityValue:
    """Probability-weighted mean of the members' pure-state fidelities."""
    val = 0.0
    err = 0.0
    for p, state in ens.members:
        f = fidelity_pure(state, noise, quad)
        val += p * f.value
        err = max(err, f.error_estimate)
    return _make(val, "weyl_quadrature", err + ens.truncation_tail)


def _beamsplitter_photon_dist(psi: TruncatedPureState) -> np.ndarray:
    """Photon distribution of the difference mode after interfering two
    copies of psi on a balanced beamsplitter.

    The generator conserves total photon number, so the unitary is
    exponentiated sector by sector (sizes 1 .. 2 dim - 1): exact at the
    truncation, no leakage.
    """
    d = psi.dim
    amp2 = np.outer(psi.amps, psi.amps)  # two-mode product amplitudes
    theta = -math.pi / 4.0
    dist = np.zeros(2 * d - 1)
    for s in range(2 * d - 1):
        size = s + 1
        vec = np.zeros(size, dtype=np.complex128)
        for k in range(max(0, s - d + 1), min(s, d - 1) + 1):
            vec[k] = amp2[k, s - k]
        if not np.any(vec):
            continue
        gen = np.zeros((size, size))
        for k in range(s):
            g = math.sqrt((k + 1) * (s - k))
            gen[k + 1, k] = theta * g
            gen[k, k + 1] = -theta * g
        out = expm(gen) @ vec
        prob = out.real**2 + out.imag**2
        # the difference mode is the first tensor slot: its annihilator
        # pulls back to (a - b)/sqrt(2), which kills identical coherent
        # inputs, so its occupation is the first index k
        for k in range(size):
            dist[k] += prob[k]
    return dist


def fidelity_a_gamma(psi: TruncatedPureState, noise: ChannelNoise | float) -> FidelityValue:
    """Two-copy route: interfere psi with itself on a 50:50 beamsplitter
    and weight the difference-mode photon distribution geometrically,

        F = (1 + gamma/2)^-1 sum_n q^n P(n),  q = (1-gamma/2)/(1+gamma/2).

    At gamma = 2 only the vacuum term survives (0^0 = 1), and coherent
    inputs, whose difference mode is exactly vacuum, saturate the
    maximum fidelity at every gamma.
    """
    gamma = as_gamma(noise)
    if psi.dim > _TWO_MODE_DIM_MAX:
        raise ValueError(
            f"two-copy route needs dim <= {_TWO_MODE_DIM_MAX} (got {psi.dim})"
        )
    if gamma == 0.0:
        return FidelityValue(1.0, "a_gamma", 0.0)
    dist = _beamsplitter_photon_dist(psi)
    half = 1.0 + gamma / 2.0
    q = (1.0 - gamma / 2.0) / half
    powers = np.power(q, np.arange(dist.size))
    val = float(powers @ dist) / half
    return _make(val, "a_gamma", abs(1.0 - dist.sum()) + 1e-15)


def fidelity_pure_mc(
    psi: TruncatedPureState, noise: ChannelNoise | float, mc: McSpec
) -> FidelityValue:
    """Monte-Carlo estimate of the Weyl-overlap integral: average the
    squared Weyl function over seeded noise draws.  error_estimate is
    the standard error of the sample mean.
    """
    gamma = as_gamma(noise)
    if gamma == 0.0:
        raise ValueError("gamma = 0 makes the sampling degenerate; the fidelity is 1")
    alphas = mc_alphas(gamma, mc)
    rho = np.outer(psi.amps, np.conj(psi.amps))
    c = _kernels.char_values(rho, alphas)
    v = c.real**2 + c.imag**2
    se = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return _make(float(v.mean()), "monte_carlo", se)


def check_scaling_law(
    psi: TruncatedPureState,
    noise: ChannelNoise | float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> float:
    """|F(psi, gamma) - (2/gamma) F(psi, 4/gamma)|, quadrature route."""
    gamma = as_gamma(noise)
    if gamma == 0.0:
        raise ValueError("the scaling law needs gamma > 0")
    f1 = fidelity_pure(psi, gamma, quad)
    f2 = fidelity_pure(psi, 4.0 / gamma, quad)
    return abs(f1.value - (2.0 / gamma) * f2.value)


def check_max_bound(value: FidelityValue, noise: ChannelNoise | float) -> bool:
    """True when the fidelity respects the coherent-state ceiling."""
    return value.value <= max_fidelity(noise) + 1e-9
