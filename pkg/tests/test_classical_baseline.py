import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qtsp import classical_baseline
from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance


@pytest.fixture
def instance_n8():
    return qtsp_instance.generate_instance(8, 0.0, 1.0, seed=2)


def test_random_search_is_deterministic(instance_n8):
    target = [0, 1, 2]
    first = classical_baseline.random_search(instance_n8, target, 100_000, seed=4)
    second = classical_baseline.random_search(instance_n8, target, 100_000, seed=4)

    assert first.to_dict() == second.to_dict()
    assert first.found


def test_random_search_stops_at_first_hit(instance_n8):
    target = np.zeros(instance_n8.N, dtype=bool)
    target[:2520] = True
    query_log = classical_baseline.random_search(instance_n8, target, 1000, seed=0)
    costs = qtsp_instance.enumerate_costs(instance_n8)

    assert query_log.found
    assert 1 <= query_log.queries <= 1000
    assert_allclose(query_log.best_cost, costs[query_log.best_tour])


def test_random_search_cap(instance_n8):
    query_log = classical_baseline.random_search(instance_n8, [7], 50, seed=1)

    assert query_log.queries <= 50
    if not query_log.found:
        assert query_log.queries == 50


def test_random_search_rejects_empty_target(instance_n8):
    with pytest.raises(qtsp_exception.QTSPValueError):
        classical_baseline.random_search(instance_n8, [], 100, seed=0)

    with pytest.raises(qtsp_exception.QTSPValueError):
        classical_baseline.random_search(instance_n8, [0], 0, seed=0)


@pytest.mark.parametrize("target_size", [2520, 504, 50])
def test_random_search_query_count_is_geometric(instance_n8, target_size):
    target = np.zeros(instance_n8.N, dtype=bool)
    target[:target_size] = True
    logs = classical_baseline.run_trials(instance_n8, target, 1000, 10**6, seed=target_size)
    summary = classical_baseline.TrialSummary(logs)
    f = target_size / instance_n8.N

    assert summary.found == 1000
    assert summary.success_rate == 1.0
    assert 0.9 <= summary.mean_queries * f <= 1.1


def test_best_of_k_counts_exactly_k(instance_n8):
    query_log = classical_baseline.best_of_k(instance_n8, 300, seed=3)
    costs = qtsp_instance.enumerate_costs(instance_n8)

    assert query_log.queries == 300
    assert query_log.found
    assert_allclose(costs[query_log.best_tour], query_log.best_cost)

    with pytest.raises(qtsp_exception.QTSPValueError):
        classical_baseline.best_of_k(instance_n8, 0, seed=3)


def test_best_of_k_hit_rate(m1_case):
    inst, _, gs = m1_case
    target = gs.group_mask(0)
    k = math.ceil(1 / gs.f0)

    hits = sum(
        classical_baseline.best_of_k(inst, k, trial_seed, target=target).found
        for trial_seed in qtsp_instance.spawn_seeds(0, 200)
    )

    # 1 - (1 - f0)^k >= 1 - 1/e
    assert hits / 200 >= 0.632 - 3 * math.sqrt(0.632 * 0.368 / 200)


def test_run_trials_rows_and_summary(instance_n8):
    logs = classical_baseline.run_trials(instance_n8, [0, 5, 9], 5, 200, seed=0)
    summary = classical_baseline.TrialSummary(logs)

    assert len(logs) == 5
    assert [len(query_log.row()) for query_log in logs] == [4] * 5
    assert summary.trials == 5
    assert summary.mean_queries == np.mean([query_log.queries for query_log in logs])
    assert [query_log.to_dict() for query_log in logs] == [
        query_log.to_dict()
        for query_log in classical_baseline.run_trials(instance_n8, [0, 5, 9], 5, 200, seed=0)
    ]


def test_trial_summary_empty():
    summary = classical_baseline.TrialSummary([])

    assert summary.trials == 0
    assert math.isnan(summary.mean_queries)
    assert math.isnan(summary.success_rate)


def test_random_search_with_every_tour_as_target(instance_n8):
    query_log = classical_baseline.random_search(
        instance_n8, np.ones(instance_n8.N, dtype=bool), 100, seed=3
    )

    assert query_log.found
    assert query_log.queries == 1


def test_random_search_single_query_budget(instance_n8):
    query_log = classical_baseline.random_search(instance_n8, [11], 1, seed=6)

    assert query_log.queries == 1
    assert query_log.found == (query_log.best_tour == 11)
