import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp import phase as qtsp_phase


def test_costs_to_phases_endpoints():
    phases = qtsp_phase.costs_to_phases([3.0, 10.5, 18.0], n=3, c1=1.0, c2=6.0)

    assert_allclose(phases, [0.0, math.pi, 2 * math.pi])


def test_costs_to_phases_rejects_out_of_range_and_equal_bounds():
    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.costs_to_phases([2.0], n=3, c1=1.0, c2=6.0)

    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.cost_to_phase(3.0, n=3, c1=1.0, c2=1.0)


def test_three_city_phase_map(three_city_instance):
    pm = qtsp_phase.build_phase_map(three_city_instance)

    assert_allclose(pm.phases, [0.4 * math.pi, 1.6 * math.pi])
    assert_array_equal(qtsp_phase.discretize_phases(pm.phases, 2), [1, 3])


@pytest.mark.parametrize(
    "phi, M, expected",
    [
        (0.0, 8, 0),
        (2 * math.pi, 8, 0),
        (math.pi, 1, 1),
        (0.49 * math.pi, 1, 0),
        (1.51 * math.pi, 1, 0),
        (math.pi / 8 - 1e-9, 8, 1),
        (2 * math.pi - 1e-3, 8, 0),
    ],
)
def test_discretize_phase(phi, M, expected):
    assert qtsp_phase.discretize_phase(phi, M) == expected


def test_discretize_phases_rejects_bad_input():
    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.discretize_phases([0.1], 0)

    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.discretize_phases([7.0], 2)


def test_phase_window_mask_wraps():
    phases = [0.0, 0.05, 0.2, math.pi, 2 * math.pi - 0.05, 2 * math.pi]

    assert_array_equal(
        qtsp_phase.phase_window_mask(phases, 0.1), [True, True, False, False, True, True]
    )


def test_eta_for_quantile_selects_cheapest(instance_n7):
    pm = qtsp_phase.build_phase_map(instance_n7)
    eta = qtsp_phase.eta_for_quantile(pm, 0.01)
    k = math.ceil(0.01 * pm.N)
    low_half = np.count_nonzero(pm.phases <= eta / 2)

    assert low_half == k
    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.eta_for_quantile(pm, 0.0)


def test_build_group_spec_counts(instance_n7):
    pm = qtsp_phase.build_phase_map(instance_n7)
    gs = qtsp_phase.build_group_spec(pm, 4, 0.1)

    assert gs.counts.sum() == pm.N
    assert_allclose(gs.fractions.sum(), 1.0)
    assert_array_equal(np.bincount(gs.labels, minlength=8), gs.counts)
    assert_allclose(gs.nominal_phases, np.arange(8) * math.pi / 4)
    assert gs.f0 == gs.fractions[0]
    assert len(gs.rows()) == 8
    assert gs.rows()[1][:3] == [1, math.pi / 4, int(gs.counts[1])]


def test_build_group_spec_rejects_wide_eta(instance_n6):
    pm = qtsp_phase.build_phase_map(instance_n6)

    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.build_group_spec(pm, 4, math.pi / 2)


def test_group_spec_from_fractions_and_synthetic_map():
    gs = qtsp_phase.group_spec_from_fractions([0.01, 0.02, 0.95, 0.02], N=1000)
    pm = qtsp_phase.synthetic_phase_map(gs)

    assert_array_equal(gs.counts, [10, 20, 950, 20])
    assert pm.N == 1000
    assert_array_equal(qtsp_phase.discretize_phases(pm.phases, 2), gs.labels)

    with pytest.raises(qtsp_exception.QTSPValueError):
        qtsp_phase.group_spec_from_fractions([0.5, 0.3, 0.2], N=10)


def test_phase_stats(instance_n6):
    pm = qtsp_phase.build_phase_map(instance_n6)
    ps = qtsp_phase.phase_stats(pm)

    assert_allclose(ps.mean_phase, pm.phases.mean())
    assert_allclose(ps.std_phase, pm.phases.std())
    assert_allclose(
        ps.std_phase, 2 * math.pi * ps.std_cost / (6 * (1.0 - 0.0)), rtol=1e-10
    )


def test_overlap_residual_two_groups():
    # <psi0|(C + 1)|psi0> = 2 f0 when M = 1
    assert_allclose(qtsp_phase.overlap_residual(np.array([0.1, 0.9]), 1), 0.2)
    assert_allclose(qtsp_phase.overlap_residual(np.array([0.0, 1.0]), 1), 0.0, atol=1e-15)


def test_check_conditions_verdicts():
    gs = qtsp_phase.group_spec_from_fractions([0.001, 0.0, 0.998, 0.001], N=1000, eta=0.05)
    ps = qtsp_phase.PhaseStats(mean_phase=math.pi, std_phase=0.01)
    report = qtsp_phase.check_conditions(gs, ps, n=1000)

    assert report.overlap_ok
    assert report.leakage_ok
    assert report.window_ok
    assert report.all_ok

    narrow = qtsp_phase.check_conditions(gs, qtsp_phase.PhaseStats(math.pi, 0.05), n=1000)
    assert not narrow.window_ok
    assert narrow.verdicts == {"overlap": True, "leakage": True, "window": False}
    assert str(narrow) == "<ConditionReport-violated>"


def test_cost_to_phase_reference_values():
    assert qtsp_phase.cost_to_phase(3.0, n=3, c1=1.0, c2=6.0) == 0.0
    assert_allclose(qtsp_phase.cost_to_phase(10.5, n=3, c1=1.0, c2=6.0), math.pi)
    assert_allclose(qtsp_phase.cost_to_phase(2.5, n=5, c1=0.0, c2=2.0), math.pi / 2)


@pytest.mark.parametrize(
    "phi, M, expected",
    [(math.pi, 3, 3), (0.49 * math.pi / 8, 8, 0), (0.51 * math.pi / 8, 8, 1)],
)
def test_discretize_phase_rounding_boundary(phi, M, expected):
    assert qtsp_phase.discretize_phase(phi, M) == expected


def test_midpoint_costs_land_in_group_m():
    costs = np.full((5, 5), 0.5)
    costs[0, 1] = 0.5 + 1e-9
    inst = qtsp_instance.TspInstance.from_costs(costs, c1=0.0, c2=1.0)
    pm = qtsp_phase.build_phase_map(inst)
    gs = qtsp_phase.build_group_spec(pm, 4, 0.1)
    ps = qtsp_phase.phase_stats(pm)

    assert gs.counts[4] == pm.N
    assert_allclose(ps.mean_phase, math.pi, atol=1e-6)
    assert ps.std_phase < 1e-6


def test_random_instance_phase_width():
    inst = qtsp_instance.generate_instance(9, 0.0, 1.0, seed=0)
    ps = qtsp_phase.phase_stats(qtsp_phase.build_phase_map(inst))

    assert abs(ps.std_phase / (math.pi / math.sqrt(27)) - 1) < 0.25


def test_overlap_and_leakage_reference_values():
    assert_allclose(
        qtsp_phase.overlap_residual(np.array([0.0, 0.0, 1.0, 0.0]), 2), 0.0, atol=1e-15
    )
    assert_allclose(qtsp_phase.overlap_residual(np.array([0.5, 0.0, 0.5, 0.0]), 2), 1.0)

    gs = qtsp_phase.group_spec_from_fractions([0.0, 0.0, 1.0, 0.0], N=10, eta=0.1)
    report = qtsp_phase.check_conditions(gs, qtsp_phase.PhaseStats(math.pi, 0.01), n=1000)
    assert_allclose(report.leakage, 8.333e-4, rtol=1e-3)


@pytest.mark.slow
def test_mean_phase_is_centered():
    mean_phases = [
        qtsp_phase.phase_stats(
            qtsp_phase.build_phase_map(qtsp_instance.generate_instance(9, 0.0, 1.0, seed))
        ).mean_phase
        for seed in qtsp_instance.spawn_seeds(0, 100)
    ]

    assert abs(np.mean(mean_phases) / math.pi - 1) < 0.05


@pytest.mark.slow
@pytest.mark.parametrize("n", [8, 9, 10])
def test_cost_variance_per_city(n):
    # pooled over instances; the within-instance variance alone is short by 1/(n-1)
    moments = np.array(
        [
            (costs.mean(), np.mean(costs * costs))
            for costs in (
                qtsp_instance.enumerate_costs(qtsp_instance.generate_instance(n, 0.0, 1.0, seed))
                for seed in qtsp_instance.spawn_seeds(n, 100)
            )
        ]
    )
    pooled_variance = moments[:, 1].mean() - moments[:, 0].mean() ** 2

    assert abs(pooled_variance / n / (1 / 12) - 1) < 0.1


@pytest.mark.slow
@pytest.mark.parametrize("n", [6, 7, 8, 9, 10])
def test_median_phase_width_scales_with_cities(n):
    widths = [
        qtsp_phase.phase_stats(
            qtsp_phase.build_phase_map(qtsp_instance.generate_instance(n, 0.0, 1.0, seed))
        ).std_phase
        for seed in qtsp_instance.spawn_seeds(100 + n, 50)
    ]

    assert abs(np.median(widths) / (math.pi / math.sqrt(3 * n)) - 1) < 0.15
