"""Tests for the empirical convergence-rate harness."""

import numpy as np
import pytest

import tikrates as tk
from tikrates.rates import (DegenerateGridError, NoiseModel,
                            infimum_rate, noise_free_rate, noisy_rate,
                            noisy_sweep_rows, q_projection_equivalence)


def test_noise_free_geometric_order_one_quarter():
    inst = tk.build("counter26", 60)
    fit = noise_free_rate(inst.op, inst.y, np.logspace(-10, -4, 25))
    assert fit.slope == pytest.approx(0.25, abs=0.03)
    assert not fit.clipped


def test_noise_free_single_mode_saturates_at_order_one():
    op = tk.SpectralOperator.diagonal([0.5] + [2.0] * 9, truncated=False)
    d = np.zeros(10)
    d[0] = 1.0
    y = op.vector(op.sigma * d)
    fit = noise_free_rate(op, y, np.logspace(-7, -3, 20))
    assert fit.slope == pytest.approx(1.0, abs=0.05)
    # closed-form error of a single filtered mode
    for alpha, err in fit.grid:
        expected = alpha / (alpha + 0.25)
        assert err == pytest.approx(expected, rel=1e-12)


def test_noise_free_zero_data_is_degenerate():
    inst = tk.build("counter26", 30)
    zero = inst.op.data_vector(np.zeros(30))
    with pytest.raises(DegenerateGridError):
        noise_free_rate(inst.op, zero, np.logspace(-8, -2, 12))


def test_noise_free_requires_four_decades():
    inst = tk.build("counter26", 30)
    with pytest.raises(DegenerateGridError):
        noise_free_rate(inst.op, inst.y, np.logspace(-4, -2, 10))


def test_noise_free_clips_below_truncation_floor():
    inst = tk.build("harmonic4", 60)  # smallest squared sigma is 1/60
    fit = noise_free_rate(inst.op, inst.y, np.logspace(-6, 1, 30))
    assert fit.clipped
    assert fit.window[0] >= 10.0 / 60.0 - 1e-12


def test_noisy_geometric_order_one_third():
    inst = tk.build("counter26", 60)
    fit = noisy_rate(inst.op, inst.y, np.logspace(-8, -2, 25), 2.0 / 3.0,
                     NoiseModel(kind=tk.WORST_CASE_BASIS))
    assert fit.slope == pytest.approx(1.0 / 3.0, abs=0.04)


def test_noisy_harmonic_order_one_half_at_deep_truncation():
    inst = tk.build("harmonic4", 100_000)
    fit = noisy_rate(inst.op, inst.y, np.logspace(-4, -1, 16), 1.0,
                     NoiseModel(kind=tk.WORST_CASE_BASIS))
    assert fit.slope == pytest.approx(0.5, abs=0.05)


def test_noisy_errors_shrink_with_delta():
    inst = tk.build("counter26", 60)
    rows = noisy_sweep_rows(inst.op, inst.y, np.logspace(-6, -2, 15),
                            2.0 / 3.0, NoiseModel(kind=tk.WORST_CASE_BASIS))
    errors = [r[1] for r in rows]
    assert np.all(np.diff(errors) > 0.0)  # rows are ordered by delta


def test_noisy_random_sphere_below_worst_case():
    inst = tk.build("counter26", 60)
    deltas = np.logspace(-6, -2, 10)
    worst = noisy_sweep_rows(inst.op, inst.y, deltas, 2.0 / 3.0,
                             NoiseModel(kind=tk.WORST_CASE_BASIS))
    rand = noisy_sweep_rows(inst.op, inst.y, deltas, 2.0 / 3.0,
                            NoiseModel(kind=tk.RANDOM_SPHERE, seed=1), 32)
    for (_, ew, _, _), (_, er, _, _) in zip(worst, rand):
        assert er <= ew * (1.0 + 1e-12)


def test_noise_directions_have_exact_unit_norm():
    inst = tk.build("counter26", 40)
    for kind in (tk.WORST_CASE_BASIS, tk.RANDOM_SPHERE, tk.IN_RANGE):
        dirs = NoiseModel(kind=kind, seed=3).directions(inst.op, 16)
        np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0,
                                   rtol=1e-14)


def test_infimum_rate_never_exceeds_power_rule_choice():
    inst = tk.build("counter26", 60)
    noise = NoiseModel(kind=tk.WORST_CASE_BASIS)
    mu = 2.0 / 3.0
    for delta in (1e-6, 1e-4, 1e-2):
        alpha_star = delta ** (2.0 - mu)
        grid = np.logspace(np.log10(alpha_star) - 3,
                           np.log10(alpha_star) + 3, 25)
        grid = np.append(grid, alpha_star)
        inf_val = infimum_rate(inst.op, inst.y, delta, noise, grid)
        row_err, _ = tk.rates._noisy_errors(inst.op, inst.y, delta,
                                            alpha_star, noise, 1)
        assert inf_val <= row_err * (1.0 + 1e-12)


def test_infimum_rate_consistent_with_fit_constant():
    inst = tk.build("counter26", 60)
    noise = NoiseModel(kind=tk.WORST_CASE_BASIS)
    fit = noisy_rate(inst.op, inst.y, np.logspace(-8, -2, 25), 2.0 / 3.0,
                     noise)
    delta = 1e-4
    val = infimum_rate(inst.op, inst.y, delta, noise,
                       np.logspace(-9, -2, 40))
    predicted = 10.0 ** fit.intercept * delta ** fit.slope
    assert predicted / 2.0 <= val <= 2.0 * predicted


def test_infimum_rate_zero_delta_reduces_to_noise_free_minimum():
    inst = tk.build("counter26", 60)
    grid = np.logspace(-9, -1, 30)
    val = infimum_rate(inst.op, inst.y, 0.0,
                       NoiseModel(kind=tk.WORST_CASE_BASIS), grid)
    lam = inst.op.lambdas
    errs = [np.linalg.norm(a / (a + lam) * inst.u_dagger.coeffs)
            for a in grid]
    assert val == pytest.approx(min(errs), rel=1e-12)


def test_infimum_rate_non_increasing_under_grid_refinement():
    inst = tk.build("counter26", 60)
    noise = NoiseModel(kind=tk.WORST_CASE_BASIS)
    coarse = np.logspace(-8, -2, 7)
    fine = np.logspace(-8, -2, 25)  # constructed as a refinement in spirit
    v_coarse = infimum_rate(inst.op, inst.y, 1e-4, noise, coarse)
    v_fine = infimum_rate(inst.op, inst.y, 1e-4, noise,
                          np.concatenate([coarse, fine]))
    assert v_fine <= v_coarse * (1.0 + 1e-12)


def rank_deficient_op(seed, rows=8, rank=4):
    rng = np.random.default_rng(seed)
    mat = rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, rows))
    return tk.SpectralOperator.from_matrix(mat), rng


def test_q_projection_off_range_noise_is_invisible():
    op, rng = rank_deficient_op(0)
    y = op.matrix @ rng.standard_normal(8)
    null = op.null_data_directions()
    e = null @ rng.standard_normal(null.shape[1])
    res = q_projection_equivalence(op, y, e)
    assert res.equivalent
    assert res.max_difference <= 1e-10
    assert res.in_range_norm <= 1e-10 * np.linalg.norm(e)


def test_q_projection_zero_perturbation():
    op, rng = rank_deficient_op(1)
    y = op.matrix @ rng.standard_normal(8)
    res = q_projection_equivalence(op, y, np.zeros(8))
    assert res.equivalent


def test_q_projection_in_range_component_reports_false():
    op, rng = rank_deficient_op(2)
    y = op.matrix @ rng.standard_normal(8)
    e_in = op.ambient_from_data(op.data_vector(np.eye(op.n)[0]))
    res = q_projection_equivalence(op, y, e_in)
    assert not res.equivalent
    assert res.max_difference > 1e-6
    assert res.in_range_norm == pytest.approx(1.0, rel=1e-12)


def test_q_projection_requires_dense_operator():
    inst = tk.build("counter26", 20)
    with pytest.raises(ValueError):
        q_projection_equivalence(inst.op, np.zeros(20), np.zeros(20))


def test_fit_window_excludes_bent_region():
    rng = np.random.default_rng(5)
    xs = np.logspace(-6, 0, 25)
    ys = xs ** 0.5
    ys[:4] *= np.exp(rng.uniform(1.0, 2.0, 4))  # bend the low end upward
    from tikrates._fitting import best_loglog_window
    slope, _, resid, i, j = best_loglog_window(xs, ys, 0.1)
    assert i >= 4
    assert slope == pytest.approx(0.5, abs=0.02)
    assert resid <= 0.1


def test_rate_fit_serialization():
    inst = tk.build("counter26", 60)
    fit = noise_free_rate(inst.op, inst.y, np.logspace(-9, -4, 12))
    payload = fit.to_json()
    assert set(payload) == {"grid", "slope", "intercept", "max_residual",
                            "window", "clipped"}


def test_noisy_rate_is_deterministic_for_fixed_seed():
    inst = tk.build("counter26", 40)
    deltas = np.logspace(-6, -2, 12)
    noise = NoiseModel(kind=tk.RANDOM_SPHERE, seed=11)
    a = noisy_rate(inst.op, inst.y, deltas, 0.5, noise, 8)
    b = noisy_rate(inst.op, inst.y, deltas, 0.5, noise, 8)
    assert a.to_json() == b.to_json()
