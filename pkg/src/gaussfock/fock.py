"""Truncated Fock-space states and operators.

Conventions: a single bosonic mode, annihilator a, number basis |n> for
n = 0 .. dim-1.  Phase-space points are complex alpha = (q + i p)/sqrt(2),
and the displacement operator is D(alpha) = exp(alpha a' - conj(alpha) a).

State constructors renormalize after truncation and report the lost tail;
a tail above `tail_tol` raises TruncationError instead of silently
degrading downstream numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exceptions import TruncationError

DEFAULT_DIM = 64
DEFAULT_TAIL_TOL = 1e-8

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-9
_EIG_FLOOR = -1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TruncatedPureState:
    """Normalized state vector in the truncated number basis.

    `lost_tail` is the probability mass removed by truncation before
    renormalization (zero for exact finite states).
    """

    amps: np.ndarray
    lost_tail: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amps must be a nonempty 1-d array")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state vector not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        if not (0.0 <= self.lost_tail < 1.0):
            raise ValueError("lost_tail must lie in [0, 1)")
        object.__setattr__(self, "amps", _readonly(amps))

    @property
    def dim(self) -> int:
        return self.amps.size

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amps, np.conj(self.amps)))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive (to -1e-9) matrix in the number basis.

    `trace_deficit` records the probability mass lost to truncation before
    the stored matrix was renormalized.
    """

    mat: np.ndarray
    trace_deficit: float = 0.0

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
            raise ValueError("mat must be a square 2-d array")
        if np.max(np.abs(mat - mat.conj().T)) > _HERM_TOL:
            raise ValueError("density matrix not Hermitian within 1e-12")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > _TRACE_TOL:
            raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
        if float(np.linalg.eigvalsh(mat)[0]) < _EIG_FLOOR:
            raise ValueError("density matrix has an eigenvalue below -1e-9")
        object.__setattr__(self, "mat", _readonly(mat))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezed-vacuum parameterization.

    Stored as the complex squeeze parameter mu with |mu| = tanh r < 1;
    the mean photon number is nbar = |mu|^2 / (1 - |mu|^2).  The plain
    constructor takes nbar and picks mu real nonnegative.
    """

    nbar: float
    mu: complex = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.nbar < 0 or not math.isfinite(self.nbar):
            raise ValueError("nbar must be finite and nonnegative")
        if self.mu is None:
            object.__setattr__(self, "mu", complex(math.sqrt(self.nbar / (1.0 + self.nbar))))
        elif abs(self.mu) >= 1.0:
            raise ValueError("|mu| must be < 1")

    @classmethod
    def from_mu(cls, mu: complex) -> "SqueezeSpec":
        mu = complex(mu)
        if abs(mu) >= 1.0:
            raise ValueError("|mu| must be < 1")
        nbar = abs(mu) ** 2 / (1.0 - abs(mu) ** 2)
        return cls(nbar, mu)


@dataclass(frozen=True)
class ThermalSpec:
    """Thermal (Bose-Einstein) occupation with mean photon number nbar."""

    nbar: float

    def __post_init__(self):
        if self.nbar < 0 or not math.isfinite(self.nbar):
            raise ValueError("nbar must be finite and nonnegative")


def number_state(n: int, dim: int = DEFAULT_DIM) -> TruncatedPureState:
    """|n> in a dim-dimensional truncation."""
    if not 0 <= n < dim:
        raise ValueError(f"need 0 <= n < dim, got n={n}, dim={dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[n] = 1.0
    return TruncatedPureState(amps)


def coherent_state(
    alpha: complex, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> TruncatedPureState:
    """Coherent state |alpha>, amplitudes exp(-|a|^2/2) a^n / sqrt(n!).

    The amplitudes are accumulated multiplicatively, so no factorial is
    ever formed.  Raises TruncationError if the Poisson tail beyond the
    truncation exceeds tail_tol.
    """
    alpha = complex(alpha)
    amps = np.empty(dim, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return _finish_pure(amps, tail_tol, f"coherent state alpha={alpha}")


def squeezed_state(
    spec: SqueezeSpec | float, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> TruncatedPureState:
    """Squeezed vacuum (1-|mu|^2)^(1/4) exp(-mu a'^2 / 2) |0>.

    Only even levels are occupied: amps[2k] carries (-mu/2)^k sqrt((2k)!)/k!
    times the normalization prefactor.
    """
    if not isinstance(spec, SqueezeSpec):
        spec = SqueezeSpec(float(spec))
    mu = spec.mu
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = (1.0 - abs(mu) ** 2) ** 0.25
    k = 1
    while 2 * k < dim:
        # ratio of successive even amplitudes: (-mu/2) * sqrt(2k (2k-1)) / k
        amps[2 * k] = amps[2 * k - 2] * (-mu / 2.0) * math.sqrt(2 * k * (2 * k - 1)) / k
        k += 1
    return _finish_pure(amps, tail_tol, f"squeezed state nbar={spec.nbar}")


def superposition01(dim: int = DEFAULT_DIM) -> TruncatedPureState:
    """(|0> + |1>)/sqrt(2)."""
    if dim < 2:
        raise ValueError("dim must be at least 2")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = amps[1] = 1.0 / math.sqrt(2.0)
    return TruncatedPureState(amps)


def thermal_state(
    spec: ThermalSpec | float, dim: int = DEFAULT_DIM, tail_tol: float = DEFAULT_TAIL_TOL
) -> DensityMatrix:
    """Thermal state, diagonal weights nbar^n / (1+nbar)^(n+1).

    The geometric tail beyond the truncation, (nbar/(1+nbar))^dim, is the
    reported trace deficit; the stored diagonal is renormalized.
    """
    if not isinstance(spec, ThermalSpec):
        spec = ThermalSpec(float(spec))
    nbar = spec.nbar
    if nbar == 0.0:
        return DensityMatrix(np.diag(_one_hot(dim)))
    ratio = nbar / (1.0 + nbar)
    diag = (1.0 / (1.0 + nbar)) * ratio ** np.arange(dim)
    tail = ratio**dim
    if tail > tail_tol:
        raise TruncationError(
            f"thermal state nbar={nbar}: truncation tail {tail:.3e} exceeds tail_tol={tail_tol:.1e}",
            lost=tail,
        )
    return DensityMatrix(np.diag(diag / (1.0 - tail)).astype(np.complex128), trace_deficit=tail)


def _one_hot(dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=np.complex128)
    v[0] = 1.0
    return v


def _finish_pure(amps: np.ndarray, tail_tol: float, what: str) -> TruncatedPureState:
    norm_sq = float(np.vdot(amps, amps).real)
    lost = max(0.0, 1.0 - norm_sq)
    if lost > tail_tol:
        raise TruncationError(
            f"{what}: truncation tail {lost:.3e} exceeds tail_tol={tail_tol:.1e}", lost=lost
        )
    return TruncatedPureState(amps / math.sqrt(norm_sq), lost_tail=lost)


def displacement_matrix(alpha: complex, dim: int = DEFAULT_DIM) -> np.ndarray:
    """<m| D(alpha) |n> for m, n < dim.

    Elements follow the associated-Laguerre closed form
    sqrt(n!/m!) alpha^(m-n) exp(-|a|^2/2) L_n^(m-n)(|a|^2) (m >= n; swap
    with alpha -> -conj(alpha) otherwise), generated by a stable column
    recurrence in the polynomial order.  Column 0 is exactly the coherent
    amplitude vector, and the diagonal is exp(-|a|^2/2) L_n(|a|^2).
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    return _kernels.disp_matrix(complex(alpha), dim)


def annihilation_matrix(dim: int = DEFAULT_DIM) -> np.ndarray:
    """<m| a |n> = sqrt(n) on the superdiagonal."""
    if dim < 1:
        raise ValueError("dim must be positive")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1).astype(np.complex128)


def mean_photon(state: TruncatedPureState | DensityMatrix) -> float:
    """<a'a> of a state vector or density matrix."""
    n = np.arange(_dim_of(state), dtype=np.float64)
    if isinstance(state, TruncatedPureState):
        return float(np.sum(n * np.abs(state.amps) ** 2))
    return float(np.sum(n * np.diag(state.mat).real))


def _dim_of(state: TruncatedPureState | DensityMatrix) -> int:
    return state.dim
