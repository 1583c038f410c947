"""Analytic fidelity formulas used as oracles for the numeric routes.

All functions take the noise strength as a ChannelNoise or a bare gamma
float and return plain floats.  The number-state formula is evaluated
through a rescaled Legendre recurrence that is smooth through gamma = 2,
where the textbook Legendre argument blows up; see `fidelity_number`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .phasespace import ChannelNoise, as_gamma


def max_fidelity(noise: ChannelNoise | float) -> float:
    """Largest channel fidelity any input reaches: 1/(1 + gamma/2).

    Coherent states saturate it; everything else sits strictly below for
    gamma > 0.
    """
    return 1.0 / (1.0 + as_gamma(noise) / 2.0)


def fidelity_number(n: int, noise: ChannelNoise | float) -> float:
    """Channel fidelity of the number state |n>.

    Mathematically (1 - g/2)^n / (1 + g/2)^(n+1) * P_n(z) with Legendre
    P_n at z = (1 + g^2/4)/(1 - g^2/4).  The argument z diverges at
    g = 2, so we walk the recurrence in Q_k = (1 - g/2)^k P_k(z)
    instead:

        Q_{k+1} = ((2k+1) w Q_k - k u^2 Q_{k-1}) / (k+1),
        w = (1 + g^2/4)/(1 + g/2),  u = 1 - g/2,

    which stays finite and cancellation-free for every g >= 0 and
    reproduces the g = 2 value (2n)!/(2^{2n+1} (n!)^2) exactly (u = 0,
    w = 1 collapse it to the double-factorial product).
    """
    if int(n) != n or n < 0:
        raise ValueError("n must be a nonnegative integer")
    n = int(n)
    gamma = as_gamma(noise)
    half = 1.0 + gamma / 2.0
    u = 1.0 - gamma / 2.0
    w = (1.0 + gamma * gamma / 4.0) / half
    q_prev = 1.0  # Q_0
    if n == 0:
        return 1.0 / half
    q = w  # Q_1 = u z = w
    for k in range(1, n):
        q, q_prev = ((2 * k + 1) * w * q - k * u * u * q_prev) / (k + 1), q
    return q / half ** (n + 1)


def generating_function(noise: ChannelNoise | float, lam: float) -> float:
    """sum_n lambda^n F(|n>, gamma) in closed form, |lambda| < 1."""
    gamma = as_gamma(noise)
    if not abs(lam) < 1.0:
        raise ValueError("the series converges only for |lambda| < 1")
    base = (1.0 - lam) + (1.0 + lam) * gamma / 2.0
    radicand = base * base - lam * gamma * gamma
    if radicand <= 0.0:
        raise ValueError("nonpositive radicand; parameters outside the valid domain")
    return 1.0 / math.sqrt(radicand)


def fidelity_superposition01(noise: ChannelNoise | float) -> float:
    """Channel fidelity of (|0> + |1>)/sqrt(2)."""
    gamma = as_gamma(noise)
    return (1.0 + 0.75 * gamma + 0.25 * gamma * gamma) / (1.0 + gamma / 2.0) ** 3


def fidelity_squeezed(nbar: float, noise: ChannelNoise | float) -> float:
    """Channel fidelity of squeezed vacuum with mean photon number nbar."""
    if nbar < 0:
        raise ValueError("nbar must be nonnegative")
    gamma = as_gamma(noise)
    return 1.0 / math.sqrt(1.0 + (2.0 * nbar + 1.0) * gamma + gamma * gamma / 4.0)


def thermal_ensemble_fidelity(nbar: float, noise: ChannelNoise | float) -> float:
    """Mean fidelity of the Bose-Einstein coherent-state ensemble with
    mean photon number nbar.  Coincides with the squeezed-vacuum formula.
    """
    return fidelity_squeezed(nbar, noise)


def thermal_entanglement_fidelity(nbar: float, noise: ChannelNoise | float) -> float:
    """Entanglement fidelity of the thermal state: 1/(1 + (2 nbar + 1) gamma/2)."""
    if nbar < 0:
        raise ValueError("nbar must be nonnegative")
    gamma = as_gamma(noise)
    return 1.0 / (1.0 + (2.0 * nbar + 1.0) * gamma / 2.0)


def cloning_gamma() -> ChannelNoise:
    """Noise strength of the optimal symmetric 1 -> 2 Gaussian cloner.

    Cloning by a phase-insensitive amplifier of gain 2 followed by a
    50:50 beamsplitter adds one unit of vacuum noise from the amplifier
    idler and half a unit from the open beamsplitter port on each
    output, for a total displacement noise gamma = 1 per clone.  The
    clone fidelity of any input is therefore bounded by
    max_fidelity(1) = 2/3.
    """
    return ChannelNoise(1.0)


# moment-inequality slack: sqrt(n(n+1)) is itself rounded, and the
# interesting boundary (EPR-limit resources) sits exactly on it
_MOMENT_SLACK = 1e-9


@dataclass(frozen=True)
class ResourceMoments:
    """Second moments (n, m) of the two-mode resource used for
    continuous-variable teleportation: <b'b> = <c'c> = n, <bc> = m in
    the conventions where a physical (PSD) Wigner function requires
    |m| <= sqrt(n(n+1)).
    """

    n: float
    m: float

    def __post_init__(self):
        if not (self.n >= 0.0 and math.isfinite(self.n)):
            raise ValueError("n must be finite and nonnegative")
        if not math.isfinite(self.m):
            raise ValueError("m must be finite")
        bound = math.sqrt(self.n * (self.n + 1.0))
        if abs(self.m) > bound + _MOMENT_SLACK * max(1.0, self.n):
            raise ValueError(
                f"|m| = {abs(self.m)} exceeds sqrt(n(n+1)) = {bound}; "
                "no quantum state has these moments"
            )


def teleport_gamma(res: ResourceMoments) -> ChannelNoise:
    """Displacement noise of standard teleportation with the given
    resource moments: gamma = 2 (1 + 2 (n + m)).

    Valid moments keep n + m >= -1/2, so gamma >= 0; the EPR limit
    n + m -> -1/2 gives the identity channel, and any separable
    resource (n >= |m|) gives gamma >= 2.
    """
    gamma = 2.0 * (1.0 + 2.0 * (res.n + res.m))
    if -1e-8 < gamma < 0.0:
        gamma = 0.0  # roundoff from the moment slack at the EPR corner
    return ChannelNoise(gamma)
