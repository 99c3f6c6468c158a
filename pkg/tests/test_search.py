import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from qutrit_lgi.core import InvalidInputError
from qutrit_lgi.lgi import EvolutionConfig, joint_unambiguous, lgi_report, marginal_distribution, report_record
from qutrit_lgi.presets import SET2_CHI, SET2_PHI, get_preset
from qutrit_lgi.search import (
    SearchSpec,
    SweepSpec,
    canonical_final_angles,
    find_violation_window,
    objective_value,
    search_max_violation,
    solve_nsit_angles,
    sweep,
)

PI = math.pi


def test_sweep_spec_validation(set1):
    with pytest.raises(InvalidInputError):
        SweepSpec(set1, "theta2", 1.0, 1.0, 2)
    with pytest.raises(InvalidInputError):
        SweepSpec(set1, "theta2", 0.0, PI, 1)
    with pytest.raises(InvalidInputError):
        SweepSpec(set1, "omega", 0.0, PI, 5)


def test_sweep_endpoints_only(set1):
    rows = sweep(SweepSpec(set1, "theta2", 0.0, PI, 2))
    assert [v for v, _ in rows] == [0.0, PI]


def test_sweep_set1_analytic(set1):
    rows = sweep(SweepSpec(set1, steps=101))
    assert len(rows) == 101
    for theta2, rep in rows:
        assert rep.K == pytest.approx((3 - math.cos(2 * theta2)) / 2, abs=1e-12)


def test_sweep_set2_qp_aa_constant(set2):
    values = [rep.quasi.entries[0, 0] for _, rep in sweep(SweepSpec(set2, steps=101))]
    assert np.ptp(values) < 1e-10
    assert values[0] == pytest.approx(-0.109, abs=1e-3)


def test_sweep_is_deterministic(set2):
    spec = SweepSpec(set2, steps=11)
    a = [report_record(r) for _, r in sweep(spec)]
    b = [report_record(r) for _, r in sweep(spec)]
    assert a == b


def test_window_set2(set2):
    window = find_violation_window(SweepSpec(set2, steps=101), refine_tol=1e-4 * PI)
    assert len(window.intervals) == 1
    lo, hi = window.intervals[0]
    assert lo / PI == pytest.approx(0.677, abs=0.02)
    assert hi / PI == pytest.approx(0.983, abs=0.02)


def test_window_endpoints_bracket_sign_change(set2):
    tol = 1e-6
    spec = SweepSpec(set2, steps=41)
    (lo, hi), = find_violation_window(spec, refine_tol=tol).intervals
    for x, sign_inside_after in ((lo, True), (hi, False)):
        g_before = lgi_report(set2.with_angle("theta2", x - tol)).violation
        g_after = lgi_report(set2.with_angle("theta2", x + tol)).violation
        assert (g_after > 0) == sign_inside_after
        assert (g_before > 0) != sign_inside_after


def test_window_set1_empty(set1):
    window = find_violation_window(SweepSpec(set1, steps=101))
    assert not window and window.intervals == ()


def test_window_full_range_when_always_violated(set2):
    # phi1 does not act on the initial |C>, so g is constant and positive
    window = find_violation_window(SweepSpec(set2, "phi1", 0.0, PI, 11))
    assert window.intervals == ((0.0, PI),)


def test_window_reversed_range(set2):
    fwd = find_violation_window(SweepSpec(set2, steps=51))
    rev = find_violation_window(SweepSpec(set2, "theta2", PI, 0.0, 51))
    np.testing.assert_allclose(rev.intervals, fwd.intervals, atol=2e-4)


def test_window_rejects_bad_tolerance(set2):
    with pytest.raises(InvalidInputError):
        find_violation_window(SweepSpec(set2, steps=5), refine_tol=0.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"bounds": ((0, 1),) * 5},
        {"bounds": ((1, 0),) * 6},
        {"objective": "min-k"},
        {"penalty": -1},
        {"resolution": 1},
        {"tol": 0},
        {"max_evals": 0},
    ],
)
def test_search_spec_validation(kwargs):
    with pytest.raises(InvalidInputError):
        SearchSpec(**kwargs)


def test_search_ambiguous_violation_without_signalling():
    res = search_max_violation(SearchSpec(objective="max-violation", penalty=10.0, resolution=8))
    rep = res.report
    assert res.converged
    assert rep.violation >= 0.3
    assert rep.Delta + rep.Delta_A <= 1e-3
    assert res.objective >= res.grid_best
    # re-evaluation reproduces the objective
    fresh = lgi_report(EvolutionConfig.from_angles(res.config.angles()))
    assert objective_value(fresh, "max-violation", 10.0) == pytest.approx(res.objective, abs=1e-12)


def test_search_max_k_reaches_two():
    res = search_max_violation(SearchSpec(objective="max-k", penalty=0.0, resolution=8))
    assert res.converged
    assert res.report.K >= 2 - 1e-6
    assert res.objective >= res.grid_best


def test_search_degenerate_bounds(set2):
    angles = set2.angles()
    res = search_max_violation(SearchSpec(bounds=tuple((a, a) for a in angles), penalty=10.0))
    assert res.config.angles() == angles
    assert res.report.K_A == lgi_report(set2).K_A
    assert res.converged


def test_search_max_evals_one():
    res = search_max_violation(SearchSpec(max_evals=1))
    assert res.evaluations == 1 and not res.converged
    assert res.config.angles() == (0.0,) * 6


def test_search_budget_exhausted_during_descent():
    res = search_max_violation(SearchSpec(resolution=3, max_evals=3**6 + 5))
    assert not res.converged
    assert res.evaluations <= 3**6 + 5


def test_search_is_deterministic():
    spec = SearchSpec(objective="max-violation", penalty=10.0, resolution=5)
    a, b = search_max_violation(spec), search_max_violation(spec)
    assert a.config == b.config and a.objective == b.objective and a.evaluations == b.evaluations


def test_grid_tie_break_is_lexicographic():
    # R12(phi1)|C> = |C> exactly, so grid points differing only in phi1 tie;
    # a budget equal to the grid size stops right after the scan
    res = search_max_violation(SearchSpec(resolution=4, penalty=10.0, max_evals=4**6))
    assert not res.converged
    assert res.config.angles1.phi == 0.0
    assert res.objective == res.grid_best


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-3 * PI, 3 * PI, allow_nan=False), min_size=6, max_size=6))
@example([0.0, 0.0, 0.0, 0.0, 0.0, -5e-324])
@example([0.0, 0.0, 0.0, -1e-17, -1e-17, -1e-17])
def test_canonical_final_angles_preserve_report(angles):
    canon = canonical_final_angles(*angles[3:])
    assert all(0 <= a < PI for a in canon)
    a = lgi_report(EvolutionConfig.from_angles(angles))
    b = lgi_report(EvolutionConfig.from_angles(list(angles[:3]) + list(canon)))
    np.testing.assert_allclose(b.joint_a.entries, a.joint_a.entries, atol=1e-12)
    np.testing.assert_allclose(b.joint_u.entries, a.joint_u.entries, atol=1e-12)
    np.testing.assert_allclose(b.marginals, a.marginals, atol=1e-12)


def test_solve_nsit_angles_reproduces_preset():
    angles = solve_nsit_angles(0.831 * PI, 0.688 * PI, 0.423 * PI)
    assert angles.chi / PI == pytest.approx(SET2_CHI, abs=1e-12)
    assert angles.phi / PI == pytest.approx(SET2_PHI, abs=1e-12)
    # refined digits agree with the quoted three-digit values
    assert math.floor(SET2_CHI * 1000) == 687 and round(SET2_CHI, 3) == 0.688
    assert math.floor(SET2_PHI * 1000) == 423


def test_preset_fig3_has_zero_signalling():
    cfg = get_preset("fig3").config()
    delta = marginal_distribution(cfg) - joint_unambiguous(cfg).entries.sum(axis=1)
    assert np.max(np.abs(delta)) < 1e-12


def test_printed_set2_angles_signal_slightly():
    rep = lgi_report(get_preset("fig3-printed").config())
    assert 1e-3 < rep.Delta < 5e-3
    assert rep.K_A == pytest.approx(1.464, abs=1e-3)


def test_solve_nsit_angles_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        solve_nsit_angles(float("nan"), 0.1, 0.1)


def test_closed_form_residual_matches_report():
    from qutrit_lgi.search import _signalling_residual

    rng = np.random.default_rng(4)
    for x in rng.uniform(-PI, 2 * PI, size=(200, 6)):
        expected = lgi_report(EvolutionConfig.from_angles(x)).delta[:2]
        np.testing.assert_allclose(_signalling_residual(x[[4, 5]], x), expected, atol=1e-14)
