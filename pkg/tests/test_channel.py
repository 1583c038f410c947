"""Quadrature channel application and its Monte-Carlo oracle."""

import math

import numpy as np
import pytest

from gaussfock import (
    AccuracyError,
    DensityMatrix,
    McSpec,
    QuadratureSpec,
    annihilation_matrix,
    apply_channel,
    apply_channel_mc,
    coherent_state,
    displacement_matrix,
    kraus_weights,
    mc_alphas,
    number_state,
    squeezed_state,
    superposition01,
    thermal_state,
)

BATTERY = [
    number_state(0, 64),
    number_state(1, 64),
    number_state(2, 64),
    coherent_state(1.0, 64),
    squeezed_state(1.0, 64),
    superposition01(64),
]


# ---------------------------------------------------------------------------
# specs and weights
# ---------------------------------------------------------------------------


def test_quadrature_spec_validation():
    assert QuadratureSpec().order_per_axis == 40
    assert QuadratureSpec().scale == 1.0
    assert QuadratureSpec(1).order_per_axis == 1  # degenerate midpoint rule
    for bad in (0, -3):
        with pytest.raises(ValueError):
            QuadratureSpec(bad)
    for bad_scale in (0.0, -1.0, math.inf):
        with pytest.raises(ValueError):
            QuadratureSpec(16, bad_scale)


def test_mc_spec_validation():
    assert McSpec(10, 3).samples == 10
    with pytest.raises(ValueError):
        McSpec(0, 1)
    with pytest.raises(ValueError):
        McSpec(10, -1)


def test_kraus_weights_complete():
    for order in (4, 16, 40, 96):
        for scale in (1.0, 0.5):
            pairs = kraus_weights(1.3, QuadratureSpec(order, scale))
            assert abs(sum(w for w, _ in pairs) - 1.0) < 1e-12


def test_kraus_weights_symmetric_nodes():
    pairs = kraus_weights(0.7, QuadratureSpec(8))
    table = {complex(round(a.real, 12), round(a.imag, 12)): w for w, a in pairs}
    for w, a in pairs:
        mirror = complex(round(-a.real, 12), round(-a.imag, 12))
        assert mirror in table
        assert abs(table[mirror] - w) < 1e-15


def test_kraus_weights_order_one_degenerates_to_identity():
    assert kraus_weights(2.0, QuadratureSpec(1)) == [(1.0, 0j)]


def test_kraus_weights_rejects_zero_noise():
    with pytest.raises(ValueError):
        kraus_weights(0.0, QuadratureSpec(8))


# ---------------------------------------------------------------------------
# quadrature route
# ---------------------------------------------------------------------------


def test_apply_channel_zero_noise_is_identity():
    rho = thermal_state(0.5, 24)
    assert apply_channel(rho, 0.0) is rho


def test_apply_channel_rejects_negative_noise():
    rho = thermal_state(0.5, 24)
    with pytest.raises(ValueError):
        apply_channel(rho, -0.5)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_vacuum_becomes_thermal(gamma):
    out = apply_channel(number_state(0, 64).density_matrix(), gamma)
    want = thermal_state(gamma / 2.0, 64)
    assert np.max(np.abs(out.mat - want.mat)) < 1e-7


def test_thermal_shifts_by_half_gamma():
    out = apply_channel(thermal_state(0.5, 64), 1.0)
    want = thermal_state(1.0, 64)
    assert np.max(np.abs(out.mat - want.mat)) < 1e-9


def test_output_is_unit_trace_hermitian_positive():
    for psi in BATTERY:
        out = apply_channel(psi.density_matrix(), 1.0)
        assert abs(np.trace(out.mat).real - 1.0) < 1e-9
        assert np.max(np.abs(out.mat - out.mat.conj().T)) == 0.0
        assert np.linalg.eigvalsh(out.mat)[0] >= -1e-9


def test_mean_amplitude_preserved():
    a = annihilation_matrix(64)
    for psi in BATTERY:
        rho = psi.density_matrix()
        before = np.trace(a @ rho.mat)
        after = np.trace(a @ apply_channel(rho, 1.0).mat)
        assert abs(before - after) < 1e-8


def test_semigroup_composition():
    rho = coherent_state(1.0, 48).density_matrix()
    g1, g2 = 0.6, 0.9
    once = apply_channel(rho, g1 + g2)
    twice = apply_channel(apply_channel(rho, g2), g1)
    assert np.max(np.abs(once.mat - twice.mat)) < 1e-7


def test_unitality_on_embedded_maximally_mixed_block():
    # I/32 on the lowest 32 of 64 levels: the interior of the output
    # stays uniform; only the block edge (not tested) smears
    dim, k, blk = 64, 32, 8
    mat = np.zeros((dim, dim), dtype=complex)
    mat[:k, :k] = np.eye(k) / k
    for gamma in (0.5, 1.0):
        out = apply_channel(DensityMatrix(mat), gamma)
        assert np.max(np.abs(out.mat[:blk, :blk] - np.eye(blk) / k)) < 1e-7


def test_apply_channel_raises_when_truncation_cannot_hold_output():
    with pytest.raises(AccuracyError):
        apply_channel(number_state(1, 4).density_matrix(), 1.0)


def test_trace_deficit_reported():
    out = apply_channel(number_state(1, 64).density_matrix(), 1.0)
    assert 0.0 <= abs(out.trace_deficit) < 1e-9


# ---------------------------------------------------------------------------
# Monte-Carlo route
# ---------------------------------------------------------------------------


def test_mc_rejects_zero_noise():
    rho = thermal_state(0.5, 24)
    with pytest.raises(ValueError):
        apply_channel_mc(rho, 0.0, McSpec(100, 1))


def test_mc_alphas_deterministic_and_distributed():
    mc = McSpec(100000, 42)
    a = mc_alphas(1.0, mc)
    b = mc_alphas(1.0, mc)
    assert np.array_equal(a, b)
    # <|alpha|^2> = gamma/2, per-axis variance gamma/4
    mean_sq = np.mean(np.abs(a) ** 2)
    assert abs(mean_sq - 0.5) < 5.0 * 0.5 / math.sqrt(mc.samples)


def test_mc_same_seed_bitwise_identical():
    rho = number_state(1, 32).density_matrix()
    out1 = apply_channel_mc(rho, 1.0, McSpec(500, 9))
    out2 = apply_channel_mc(rho, 1.0, McSpec(500, 9))
    assert np.array_equal(out1.mat, out2.mat)
    out3 = apply_channel_mc(rho, 1.0, McSpec(500, 10))
    assert not np.array_equal(out1.mat, out3.mat)


def test_mc_single_sample_is_one_conjugation():
    rho = superposition01(24).density_matrix()
    gamma = 0.8
    alpha = mc_alphas(gamma, McSpec(1, 123))[0]
    out = apply_channel_mc(rho, gamma, McSpec(1, 123))
    dpad = displacement_matrix(alpha, out.dim + math.ceil(4 * math.sqrt(gamma * out.dim)))
    big = np.zeros((dpad.shape[0],) * 2, dtype=complex)
    big[:24, :24] = rho.mat
    conj = dpad @ big @ dpad.conj().T
    want = conj[:24, :24]
    want = want / np.trace(want).real
    assert np.max(np.abs(out.mat - want)) < 1e-12


def _batched_mc(rho, gamma, batches, per_batch, seed0):
    """Mean of seeded batches plus the elementwise standard error of that mean."""
    stack = np.stack([
        apply_channel_mc(rho, gamma, McSpec(per_batch, seed0 + i)).mat
        for i in range(batches)
    ])
    mean = stack.mean(axis=0)
    se = stack.std(axis=0, ddof=1) / math.sqrt(batches)
    return mean, se


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("make", [lambda: number_state(1, 48), lambda: coherent_state(1.0, 48)],
                         ids=["n1", "coh1"])
def test_mc_agrees_with_quadrature_elementwise(gamma, make):
    rho = make().density_matrix()
    quad_out = apply_channel(rho, gamma).mat
    # 10^5 samples in 100 batches; the floor absorbs the reference's own
    # truncation-level error on elements whose sampling error vanishes
    mean, se = _batched_mc(rho, gamma, 100, 1000, 2024)
    gap = np.abs(mean - quad_out)
    assert np.all(gap <= 4.0 * se + 1e-8)


def test_mc_vacuum_diagonal_matches_thermal():
    rho = number_state(0, 32).density_matrix()
    mean, se = _batched_mc(rho, 1.0, 100, 1000, 77)
    want = thermal_state(0.5, 32).mat
    gap = np.abs(np.diag(mean - want).real)
    assert np.all(gap <= 3.0 * np.diag(se) + 1e-8)
