import math

import numpy as np
import pytest

from pairchsh import (
    ANGLE_PRESETS,
    BracketingError,
    CoherentSuperposition,
    FockSpace,
    GenericPair,
    Noon,
    TSIRELSON_BOUND,
    TwoModeSqueezed,
    Werner,
    chsh,
    coherent_damping,
    find_threshold,
    optimal_chsh,
    optimize_angles,
    parameter_sweep,
)

PRESET = ANGLE_PRESETS["paper-choice"]
PRESET_SQ = ANGLE_PRESETS["paper-choice-sq"]


def bisect(fn, lo, hi, iters=200):
    f_lo = fn(lo)
    assert f_lo * fn(hi) < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fn(mid) * f_lo > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_optimizer_recovers_tsirelson_for_generic_pair():
    for method, space in [("closed_form", None), ("matrix", FockSpace(8, 8))]:
        result = optimize_angles(GenericPair((0, 1), (0, 1)), method, space=space)
        assert result.converged
        assert result.best_abs_chsh == pytest.approx(TSIRELSON_BOUND, abs=1e-9)


def test_optimizer_noon_with_generalized_pair():
    result = optimize_angles(Noon(5), "matrix", space=FockSpace(8, 8))
    assert result.best_abs_chsh == pytest.approx(TSIRELSON_BOUND, abs=1e-9)


def test_squeezed_peak_matches_stationary_point_oracle():
    # stationary point of the optimal curve: root of 2p^3 - 3 sqrt(2) p^2 + sqrt(2)
    cubic = lambda p: 2 * p**3 - 3 * math.sqrt(2) * p**2 + math.sqrt(2)
    eta_star = bisect(cubic, 0.5, 0.9)
    assert eta_star == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    result = optimize_angles(TwoModeSqueezed(eta_star), "closed_form")
    assert result.best_abs_chsh == pytest.approx(2.5, abs=1e-10)

    via_matrix = optimize_angles(
        TwoModeSqueezed(eta_star), "matrix", space=FockSpace(32, 32)
    )
    assert via_matrix.best_abs_chsh == pytest.approx(2.5, abs=1e-8)


def test_optimizer_matches_canonical_preset_for_squeezed():
    for eta in (0.3, 0.55, 0.8):
        best = optimize_angles(TwoModeSqueezed(eta), "closed_form").best_abs_chsh
        canonical = abs(chsh(TwoModeSqueezed(eta), PRESET_SQ, "closed_form").chsh_value)
        assert best >= canonical - 1e-10
        assert best == pytest.approx(canonical, abs=1e-9)  # preset is already optimal
        assert best == pytest.approx(optimal_chsh("two_mode_squeezed", eta), abs=1e-9)


def test_optimizer_werner_scales_linearly():
    for w in (0.2, 0.5, 0.9):
        result = optimize_angles(Werner(w), "closed_form")
        assert result.best_abs_chsh == pytest.approx(w * TSIRELSON_BOUND, abs=1e-9)
    matrix_result = optimize_angles(Werner(0.9), "matrix")
    assert matrix_result.best_abs_chsh == pytest.approx(0.9 * TSIRELSON_BOUND, abs=1e-9)


def test_optimizer_coherent_damped_maximum():
    x = 0.36
    result = optimize_angles(CoherentSuperposition(math.sqrt(x)), "closed_form")
    assert result.best_abs_chsh == pytest.approx(
        coherent_damping(x) * TSIRELSON_BOUND, abs=1e-9
    )


def test_optimizer_invariants():
    result = optimize_angles(TwoModeSqueezed(0.6), "closed_form")
    assert result.best_abs_chsh <= TSIRELSON_BOUND + 1e-9
    # re-evaluation through the public engine reproduces the stored optimum
    report = chsh(TwoModeSqueezed(0.6), result.best_angles, "closed_form")
    assert abs(report.chsh_value) == pytest.approx(result.best_abs_chsh, abs=1e-10)
    # ascent never worsens the objective
    history = np.array(result.objective_history)
    assert np.all(np.diff(history) >= -1e-15)


def test_optimizer_angle_translation_consistency():
    result = optimize_angles(Noon(2), "closed_form")
    base = result.best_abs_chsh
    for delta in (0.2, 1.1, -0.8):
        a = result.best_angles
        shifted = type(a)(a.alpha1 + delta, a.alpha2 + delta, a.beta1 + delta, a.beta2 + delta)
        value = abs(chsh(Noon(2), shifted, "closed_form").chsh_value)
        assert value == pytest.approx(base, abs=1e-10)


def test_optimizer_grid_validation():
    with pytest.raises(ValueError):
        optimize_angles(Noon(1), "closed_form", seed_grid_resolution=3)
    with pytest.raises(ValueError):
        optimize_angles(Noon(1), "bogus")


def test_optimal_chsh_closed_forms():
    assert optimal_chsh("werner", 0.5) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert optimal_chsh("two_mode_squeezed", 1 / math.sqrt(2)) == pytest.approx(2.5, abs=1e-12)
    assert optimal_chsh("coherent_superposition", 0.0) == pytest.approx(
        TSIRELSON_BOUND, abs=1e-15
    )
    with pytest.raises(ValueError):
        optimal_chsh("noon", 1)


def test_find_threshold_squeezed():
    value = find_threshold("two_mode_squeezed", 0.1, 0.6)
    assert value == pytest.approx(math.sqrt(2) - 1, abs=1e-9)


def test_find_threshold_werner():
    value = find_threshold("werner", 0.5, 0.9)
    assert value == pytest.approx(1 / math.sqrt(2), abs=1e-9)


def test_find_threshold_coherent_matches_prefactor_root():
    # independent oracle: root of exp(-x) (sqrt(2) - x) = 1 in x = |z|^2
    root = bisect(lambda x: math.exp(-x) * (math.sqrt(2) - x) - 1.0, 0.05, 0.4)
    assert root == pytest.approx(0.1967607870152318, abs=1e-12)
    value = find_threshold("coherent_superposition", 0.05, 0.4)
    assert value == pytest.approx(root, abs=1e-9)


def test_find_threshold_bracketing_error():
    with pytest.raises(BracketingError):
        find_threshold("werner", 0.8, 0.9)
    with pytest.raises(ValueError):
        find_threshold("werner", 0.9, 0.5)


def test_sweep_squeezed_canonical_matches_formula():
    rows = parameter_sweep("two_mode_squeezed", 0.05, 0.95, 19, angles=PRESET_SQ)
    assert len(rows) == 19
    for row in rows:
        eta = row.parameter
        expected = 2 + 2 * (1 - eta**2) * (2 * math.sqrt(2) * eta - 1 - eta**2)
        assert row.report.chsh_value == pytest.approx(expected, abs=1e-10)
        assert row.violation == (abs(expected) > 2)


def test_sweep_coherent_monotone_decreasing():
    rows = parameter_sweep("coherent_superposition", 0.0, 2.0, 21, per_point_optimize=True)
    values = [row.best_abs_chsh for row in rows]
    assert values[0] == pytest.approx(TSIRELSON_BOUND, abs=1e-9)
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_sweep_werner_linear_slope():
    rows = parameter_sweep("werner", 0.1, 0.9, 17, per_point_optimize=True)
    values = np.array([row.best_abs_chsh for row in rows])
    params = np.array([row.parameter for row in rows])
    slopes = np.diff(values) / np.diff(params)
    assert np.abs(slopes - TSIRELSON_BOUND).max() <= 1e-9


def test_sweep_optimized_beats_fixed_angles():
    fixed = parameter_sweep("two_mode_squeezed", 0.2, 0.9, 8, angles=PRESET)  # wrong preset
    tuned = parameter_sweep("two_mode_squeezed", 0.2, 0.9, 8, per_point_optimize=True)
    for f_row, t_row in zip(fixed, tuned):
        assert t_row.best_abs_chsh >= f_row.best_abs_chsh - 1e-10


def test_sweep_validation():
    with pytest.raises(ValueError):
        parameter_sweep("two_mode_squeezed", 0.0, 0.9, 5)  # 0 outside the open domain
    with pytest.raises(ValueError):
        parameter_sweep("two_mode_squeezed", 0.1, 1.0, 5)
    with pytest.raises(ValueError):
        parameter_sweep("werner", 0.2, 0.8, 1)
    with pytest.raises(ValueError):
        parameter_sweep("noon", 1, 4, 4)
    rows = parameter_sweep("werner", 0.5, 1.0, 3)  # w = 1 boundary is usable
    assert rows[-1].parameter == 1.0


def test_sweep_matrix_method_squeezed():
    rows = parameter_sweep(
        "two_mode_squeezed", 0.3, 0.7, 5, method="matrix", space=FockSpace(16, 16),
        angles=PRESET_SQ,
    )
    for row in rows:
        eta = row.parameter
        expected = 2 + 2 * (1 - eta**2) * (2 * math.sqrt(2) * eta - 1 - eta**2)
        assert row.report.chsh_value == pytest.approx(expected, abs=8 * eta**32 + 1e-9)
