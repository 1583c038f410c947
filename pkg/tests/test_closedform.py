"""Closed-form oracles, checked against exact rational arithmetic."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_legendre

from gaussfock import (
    ChannelNoise,
    QuadratureSpec,
    ResourceMoments,
    cloning_gamma,
    fidelity_number,
    fidelity_pure,
    fidelity_squeezed,
    fidelity_superposition01,
    generating_function,
    max_fidelity,
    number_state,
    squeezed_state,
    superposition01,
    teleport_gamma,
    thermal_ensemble_fidelity,
    thermal_entanglement_fidelity,
)


def exact_number_fidelity(n: int, gamma: Fraction) -> Fraction:
    """Number-state fidelity in exact rationals.

    Rearranging the Legendre form over the common denominator
    s = 1 + 2/gamma removes the pole of the polynomial argument at
    gamma = 2, so this is regular for every positive rational gamma:

        F = (2/gamma) (1/s) sum_m C(2n-m, m) C(2n-2m, n-m)
            (-b)^m a^(2n-2m) / s^(2n-m),

    with a = 2/gamma and b = (2-gamma)/gamma.
    """
    s = 1 + 2 / gamma
    a = 2 / gamma
    b = (2 - gamma) / gamma
    total = Fraction(0)
    for m in range(n + 1):
        total += (
            math.comb(2 * n - m, m)
            * math.comb(2 * n - 2 * m, n - m)
            * (-b) ** m
            * a ** (2 * n - 2 * m)
            / s ** (2 * n - m)
        )
    return (2 / gamma) * total / s


EXACT_GAMMAS = [
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(1),
    Fraction(199, 100),
    Fraction(2),
    Fraction(201, 100),
    Fraction(3),
    Fraction(4),
]


def test_number_fidelity_against_rational_oracle():
    for n in range(11):
        for g in EXACT_GAMMAS:
            want = float(exact_number_fidelity(n, g))
            got = fidelity_number(n, float(g))
            assert abs(got - want) < 1e-15


def test_number_fidelity_against_legendre_away_from_two():
    # the textbook form: prefactor * P_n((1 + g^2/4)/(1 - g^2/4))
    for n in range(11):
        for g in (0.5, 1.0, 3.0, 4.0):
            z = (1.0 + g * g / 4.0) / (1.0 - g * g / 4.0)
            want = (1.0 - g / 2.0) ** n / (1.0 + g / 2.0) ** (n + 1) * eval_legendre(n, z)
            assert abs(fidelity_number(n, g) - want) < 1e-12


def test_number_fidelity_at_gamma_two():
    for n in range(9):
        want = float(Fraction(math.factorial(2 * n),
                              2 ** (2 * n + 1) * math.factorial(n) ** 2))
        assert abs(fidelity_number(n, 2.0) - want) < 1e-15


def test_number_fidelity_anchors():
    for g in (0.25, 1.0, 2.5):
        assert abs(fidelity_number(0, g) - 1.0 / (1.0 + g / 2.0)) < 1e-15
        assert abs(fidelity_number(1, g) - 2.0 * (4.0 + g * g) / (2.0 + g) ** 3) < 1e-15
    assert abs(fidelity_number(1, 1.0) - 10.0 / 27.0) < 1e-16
    assert abs(fidelity_number(2, 2.0) - 3.0 / 16.0) < 1e-16


def test_number_fidelity_rejects_bad_n():
    with pytest.raises(ValueError):
        fidelity_number(-1, 1.0)
    with pytest.raises(ValueError):
        fidelity_number(1.5, 1.0)


def test_max_fidelity_anchors():
    assert max_fidelity(0.0) == 1.0
    assert max_fidelity(1.0) == 2.0 / 3.0
    assert max_fidelity(2.0) == 0.5
    with pytest.raises(ValueError):
        max_fidelity(-1.0)


def test_superposition01_form():
    assert fidelity_superposition01(0.0) == 1.0
    assert abs(fidelity_superposition01(1.0) - 2.0 / 3.375) < 1e-15
    got = fidelity_pure(superposition01(64), 1.0).value
    assert abs(got - fidelity_superposition01(1.0)) < 1e-7


def test_squeezed_form():
    for g in (0.5, 1.0, 2.0):
        assert abs(fidelity_squeezed(0.0, g) - 1.0 / (1.0 + g / 2.0)) < 1e-15
    assert abs(fidelity_squeezed(1.0, 1.0) - 1.0 / math.sqrt(4.25)) < 1e-15
    got = fidelity_pure(squeezed_state(1.0, 64), 1.0).value
    assert abs(got - fidelity_squeezed(1.0, 1.0)) < 1e-6
    with pytest.raises(ValueError):
        fidelity_squeezed(-0.5, 1.0)


def test_thermal_pair():
    assert thermal_ensemble_fidelity(1.3, 0.8) == fidelity_squeezed(1.3, 0.8)
    for g in (0.5, 1.0, 2.0):
        assert abs(thermal_entanglement_fidelity(0.0, g) - 1.0 / (1.0 + g / 2.0)) < 1e-15
    assert abs(thermal_entanglement_fidelity(1.0, 1.0) - 0.4) < 1e-15
    for nbar in (0.5, 1.0, 2.0):
        for g in (0.5, 1.0, 2.0):
            low = thermal_entanglement_fidelity(nbar, g)
            high = thermal_ensemble_fidelity(nbar, g)
            assert low < high
    # equality only at the edges
    assert thermal_entanglement_fidelity(0.0, 1.0) == thermal_ensemble_fidelity(0.0, 1.0)
    assert thermal_entanglement_fidelity(1.0, 0.0) == thermal_ensemble_fidelity(1.0, 0.0) == 1.0
    with pytest.raises(ValueError):
        thermal_entanglement_fidelity(-0.5, 1.0)


def test_generating_function_anchors():
    for g in (0.5, 1.0, 3.0):
        assert abs(generating_function(g, 0.0) - 1.0 / (1.0 + g / 2.0)) < 1e-15
    for lam in (0.2, 0.5, -0.7):
        assert abs(generating_function(0.0, lam) - 1.0 / (1.0 - lam)) < 1e-15
    for bad in (1.0, -1.0, 2.5):
        with pytest.raises(ValueError):
            generating_function(1.0, bad)


def test_generating_function_sums_the_series():
    for g in (0.5, 1.0, 2.0, 3.0):
        for lam in (0.2, 0.5):
            partial = sum(lam**n * fidelity_number(n, g) for n in range(41))
            tail = lam**41 / (1.0 - lam)
            assert abs(partial - generating_function(g, lam)) <= 1e-8 + tail


def test_scaling_law_exact_in_closed_forms():
    for g in (0.25, 0.5, 1.0, 2.0, 3.0, 4.0):
        dual = 4.0 / g
        scale = 2.0 / g
        assert abs(max_fidelity(g) - scale * max_fidelity(dual)) < 1e-12
        assert abs(fidelity_superposition01(g)
                   - scale * fidelity_superposition01(dual)) < 1e-12
        for n in range(7):
            assert abs(fidelity_number(n, g) - scale * fidelity_number(n, dual)) < 1e-12
        for nbar in (0.5, 1.0, 2.0):
            assert abs(fidelity_squeezed(nbar, g)
                       - scale * fidelity_squeezed(nbar, dual)) < 1e-12


def test_closed_forms_stay_in_unit_interval():
    for g in np.arange(0.0, 10.01, 0.1):
        vals = [max_fidelity(g), fidelity_superposition01(g)]
        vals += [fidelity_number(n, g) for n in range(11)]
        vals += [fidelity_squeezed(nb, g) for nb in (0.5, 1.0, 2.0)]
        vals += [thermal_entanglement_fidelity(nb, g) for nb in (0.5, 1.0, 2.0)]
        assert all(0.0 <= v <= 1.0 for v in vals)


def test_number_fidelities_stack_downward():
    for g in np.arange(0.25, 4.01, 0.25):
        for n in range(1, 11):
            assert fidelity_number(n, g) < fidelity_number(n - 1, g)


# ---------------------------------------------------------------------------
# derived channel parameters
# ---------------------------------------------------------------------------


def test_cloning_gamma():
    g = cloning_gamma()
    assert isinstance(g, ChannelNoise)
    assert float(g) == 1.0
    assert max_fidelity(g) == 2.0 / 3.0
    assert abs(fidelity_number(1, g) - 10.0 / 27.0) < 1e-15


def test_cloning_identity_numerically():
    quad = QuadratureSpec(96, 0.35)
    for psi in (number_state(1, 64), squeezed_state(1.0, 64), superposition01(64)):
        clone = fidelity_pure(psi, cloning_gamma(), quad).value
        assert abs(clone - 2.0 * fidelity_pure(psi, 4.0, quad).value) < 1e-7


def test_teleport_gamma_anchors():
    assert float(teleport_gamma(ResourceMoments(0.0, 0.0))) == 2.0
    # EPR limit: m -> -sqrt(n(n+1)) with n huge pushes n + m to -1/2
    n = 1e8
    g = teleport_gamma(ResourceMoments(n, -(n + 0.5)))
    assert float(g) == 0.0


def test_teleport_gamma_affine_in_moment_sum():
    a = teleport_gamma(ResourceMoments(1.25, 0.25))
    b = teleport_gamma(ResourceMoments(1.0, 0.5))
    assert float(a) == float(b) == 8.0


def test_separable_resources_cannot_beat_one_half():
    for n in (0.0, 0.5, 1.0, 2.0):
        for frac in (-1.0, -0.5, 0.0, 0.5, 1.0):
            g = teleport_gamma(ResourceMoments(n, frac * n))
            assert float(g) >= 2.0
            assert max_fidelity(g) <= 0.5 + 1e-12
    # entangled but wrongly signed moments also stay classical
    n = 1.0
    for m in (1.0, 1.2, math.sqrt(2.0)):
        g = teleport_gamma(ResourceMoments(n, m))
        assert float(g) >= 2.0


def test_resource_moment_validation():
    ResourceMoments(1.0, -math.sqrt(2.0))  # exactly on the boundary
    with pytest.raises(ValueError):
        ResourceMoments(-0.1, 0.0)
    with pytest.raises(ValueError):
        ResourceMoments(1.0, 1.5)
    with pytest.raises(ValueError):
        ResourceMoments(1.0, -1.5)
    with pytest.raises(ValueError):
        ResourceMoments(1.0, math.nan)
