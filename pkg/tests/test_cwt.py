import math

import mpmath
import numpy as np
import pytest

from framecal import sampling
from framecal.cwt import (
    AffineGrid,
    CwtConfig,
    WaveletSpec,
    admissibility_constant,
    band_limited_probes,
    build_cwt_frame,
    covered_fraction,
    default_xi_grid,
    log_affine_grid,
    mexican_hat,
    resolved_band,
    run_cwt_experiment,
    signed_frequencies,
    tightness_report,
)
from framecal.errors import DimensionMismatch, GridTooCoarse, InputError, NonPositiveGrid
from framecal.frame import frame_operator

# 4 sqrt(pi) / 3 in closed form; cross-checked against mpmath below
MEXICAN_HAT_C_PSI = 2.3632718012073544


def _box(xi):
    return ((xi >= 1.0) & (xi <= math.e)).astype(float)


def test_c_psi_closed_form_matches_mpmath():
    amp = 2 / (mpmath.sqrt(3) * mpmath.pi**0.25)
    val = mpmath.quad(lambda x: 2 * mpmath.pi * amp**2 * x**3 * mpmath.exp(-x * x), [0, mpmath.inf])
    assert float(val) == pytest.approx(MEXICAN_HAT_C_PSI, rel=1e-15)
    assert 4 * math.sqrt(math.pi) / 3 == pytest.approx(MEXICAN_HAT_C_PSI, rel=1e-15)


def test_admissibility_zero_profile():
    assert admissibility_constant(lambda xi: np.zeros_like(xi)) == 0.0


def test_admissibility_box_profile():
    assert admissibility_constant(_box) == pytest.approx(1.0, abs=1e-3)


def test_admissibility_mexican_hat():
    assert admissibility_constant(mexican_hat()) == pytest.approx(MEXICAN_HAT_C_PSI, rel=1e-6)


def test_admissibility_refinement_stable():
    spec = mexican_hat()
    coarse = admissibility_constant(spec, default_xi_grid(2**12))
    fine = admissibility_constant(spec, default_xi_grid(2**13))
    assert abs(coarse - fine) <= 0.005 * fine


def test_admissibility_error_shrinks_on_refinement():
    spec = mexican_hat()
    c = [admissibility_constant(spec, default_xi_grid(n)) for n in (2**8, 2**9, 2**10)]
    assert abs(c[0] - c[1]) >= abs(c[1] - c[2]) - 1e-12


@pytest.mark.parametrize(
    "grid", [[1.0], [0.0, 1.0], [-1.0, 1.0], [1.0, 1.0, 2.0], [2.0, 1.0]]
)
def test_admissibility_bad_grid(grid):
    with pytest.raises(NonPositiveGrid):
        admissibility_constant(mexican_hat(), np.array(grid))


def test_mexican_hat_normalized_zero_mean():
    spec = mexican_hat()
    spec.validate()
    assert spec.l2_norm() == pytest.approx(1.0, abs=1e-6)
    assert abs(spec.mean()) <= 1e-8
    assert spec.profile(np.array([0.0]))[0] == 0.0


def test_wavelet_without_zero_mean_rejected():
    gauss = WaveletSpec(
        "gauss",
        lambda t: np.exp(-0.5 * np.asarray(t) ** 2) / math.pi**0.25,
        lambda xi: 2 * math.sqrt(math.pi) * np.exp(-np.asarray(xi) ** 2),
    )
    with pytest.raises(InputError):
        gauss.validate()


def test_grid_weights_are_exact_cell_measures():
    grid = log_affine_grid(4.0, 32.0, 32, 64, 256.0)
    assert np.all(grid.a_values > 0) and np.all(grid.weights > 0)
    per_scale = 1.0 / grid.a_edges[:-1] - 1.0 / grid.a_edges[1:]
    np.testing.assert_allclose(grid.weights.reshape(32, 64)[:, 0], per_scale * grid.delta_b, rtol=1e-12)
    assert grid.weights.sum() == pytest.approx(grid.covered_measure, rel=1e-12)
    assert grid.covered_measure == pytest.approx(256.0 * (1 / 4 - 1 / 32))


@pytest.mark.parametrize("args", [(0.0, 32.0, 4, 4), (-1.0, 2.0, 4, 4), (8.0, 4.0, 4, 4), (4.0, 8.0, 0, 4)])
def test_grid_rejects_bad_parameters(args):
    with pytest.raises(NonPositiveGrid):
        log_affine_grid(*args, 256.0)


def test_single_node_atom():
    # dt = 1/4 so the unit scale spans four samples
    spec = mexican_hat(dim=128, dt=0.25)
    grid = AffineGrid(np.array([1.0, 1.0 + 1e-12]), np.array([1.0]), 32.0)
    f = build_cwt_frame(spec, grid, 128)
    assert len(f) == 1
    t = np.arange(128) * 0.25
    a = grid.a_values[0]
    expected = math.sqrt(0.25 / a) * sum(spec.psi((t - 1.0 - r * 32.0) / a) for r in (-1, 0, 1))
    np.testing.assert_allclose(f.vectors[0].real, expected, atol=1e-12)


def test_translated_atoms_are_circular_shifts():
    spec = mexican_hat(dim=64)
    grid = AffineGrid(np.array([4.0, 4.5]), np.array([0.0, 5.0]), 64.0)
    f = build_cwt_frame(spec, grid, 64)
    np.testing.assert_allclose(np.roll(f.vectors[0], 5), f.vectors[1], atol=1e-13)


def test_atoms_have_unit_norm_approximately():
    spec = mexican_hat()
    f = build_cwt_frame(spec, log_affine_grid(4.0, 32.0, 4, 8, 256.0), 256)
    np.testing.assert_allclose(np.linalg.norm(f.vectors, axis=1), 1.0, atol=1e-3)


def test_row_major_order():
    grid = log_affine_grid(4.0, 32.0, 3, 5, 256.0)
    f = build_cwt_frame(mexican_hat(), grid, 256)
    nodes = [dict(p.split("=") for p in label.split(",")) for label in f.space.labels]
    scales = np.array([float(n["a"]) for n in nodes]).reshape(3, 5)
    shifts = np.array([float(n["b"]) for n in nodes]).reshape(3, 5)
    np.testing.assert_allclose(scales[:, 0], grid.a_values)
    assert np.all(scales == scales[:, :1])
    np.testing.assert_allclose(shifts[0], grid.b_values)


def test_grid_too_coarse():
    with pytest.raises(GridTooCoarse):
        build_cwt_frame(mexican_hat(), log_affine_grid(3.0, 32.0, 4, 8, 256.0), 256)


def test_signal_dim_checked():
    with pytest.raises(DimensionMismatch):
        build_cwt_frame(mexican_hat(), log_affine_grid(4.0, 32.0, 4, 8, 256.0), 128)


def test_trivial_tightness_on_scaled_basis():
    c = MEXICAN_HAT_C_PSI
    f = sampling.orthonormal_basis(16, scale=math.sqrt(c))
    rep = tightness_report(f, c, probes=10)
    assert abs(rep.min_ratio - 1) <= 1e-10 and abs(rep.max_ratio - 1) <= 1e-10
    rep = tightness_report(f, c, probes=10, band=[1, 2, 15])
    assert abs(rep.min_ratio - 1) <= 1e-10 and abs(rep.max_ratio - 1) <= 1e-10


def test_resolved_band_default():
    band = resolved_band(mexican_hat(), 4.0, 32.0)
    assert list(band) == [3, 4, 5, 6, 250, 251, 252, 253]
    omegas = signed_frequencies(256)
    for k in band:
        assert covered_fraction(mexican_hat(), omegas[k], 4.0, 32.0) >= 0.95


def test_probes_are_band_limited_unit_vectors():
    probes = band_limited_probes(64, [2, 3, 61, 62], 5, seed=1)
    np.testing.assert_allclose(np.linalg.norm(probes, axis=1), 1.0)
    spectrum = np.abs(np.fft.fft(probes, axis=1))
    outside = np.delete(spectrum, [2, 3, 61, 62], axis=1)
    assert outside.max() <= 1e-12


def test_default_grid_is_tight_on_band():
    out = run_cwt_experiment(CwtConfig())
    assert out["c_psi"] == pytest.approx(MEXICAN_HAT_C_PSI, rel=1e-6)
    assert 0.9 <= out["min_ratio"] <= out["max_ratio"] <= 1.1
    assert out["within_band"]


def test_coarse_scale_grid_leaves_band():
    out = run_cwt_experiment(CwtConfig(na=2))
    assert not out["within_band"]
    assert out["min_ratio"] < 0.9 or out["max_ratio"] > 1.1


def test_out_of_band_probe_leaks():
    spec = mexican_hat()
    grid = log_affine_grid(4.0, 32.0, 32, 64, 256.0)
    f = build_cwt_frame(spec, grid, 256)
    c_psi = admissibility_constant(spec)
    high = tightness_report(f, c_psi, probes=5, band=[40, 216])
    assert high.max_ratio < 0.9


def test_frame_operator_commutes_with_shift():
    spec = mexican_hat()
    f = build_cwt_frame(spec, log_affine_grid(4.0, 32.0, 32, 64, 256.0), 256)
    s = frame_operator(f)
    band = resolved_band(spec, 4.0, 32.0)
    for x in band_limited_probes(256, band, 5, seed=7):
        sx = s @ x
        commutator = s @ np.roll(x, 3) - np.roll(sx, 3)
        assert np.linalg.norm(commutator) <= 0.05 * np.linalg.norm(sx)
