"""
Classical heuristic: query uniformly random tours until one lands in the solution set
"""

from __future__ import annotations
import logging
import math
from typing import AnyStr, Iterable, List, Optional, Union

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp import quantum_sim
from qtsp import qtsp_abc


log = logging.getLogger(__name__)

BLOCK_SIZE = 4096

TRIAL_HEADERS = ["seed", "queries", "found", "best_cost"]


class QueryLog(qtsp_abc._QTSPABC):

    __slots__ = ["queries", "best_cost", "best_tour", "found", "seed"]

    def __init__(
        self,
        queries: int,
        best_cost: float,
        best_tour: qtsp_instance.TourIndex,
        found: bool,
        seed: int,
    ) -> QueryLog:
        self.queries = queries
        self.best_cost = best_cost
        self.best_tour = best_tour
        self.found = found
        self.seed = seed

    @property
    def label(self) -> AnyStr:
        return f"seed{self.seed}-queries{self.queries}"

    def row(self) -> List:
        return [self.seed, self.queries, self.found, self.best_cost]


class _Tracker:

    __slots__ = ["queries", "best_cost", "best_tour"]

    def __init__(self):
        self.queries = 0
        self.best_cost = math.inf
        self.best_tour = -1

    def observe(self, indices: np.ndarray, costs: np.ndarray) -> None:
        self.queries += len(indices)
        cheapest = int(np.argmin(costs))
        if costs[cheapest] < self.best_cost:
            self.best_cost = float(costs[cheapest])
            self.best_tour = int(indices[cheapest])


def random_search(
    inst: qtsp_instance.TspInstance,
    target: Union[Iterable[int], np.ndarray],
    max_queries: int,
    seed: int,
    block_size: int = BLOCK_SIZE,
) -> QueryLog:
    """
    Sampling is with replacement; every sampled tour is one query.
    """
    mask = quantum_sim.target_mask(target, inst.N)
    if not mask.any():
        raise qtsp_exception.QTSPValueError(f"random search on {inst} needs a nonempty target")

    if max_queries < 1:
        raise qtsp_exception.QTSPValueError(f"max_queries must be >= 1, got {max_queries}")

    rng = np.random.default_rng(seed)
    tracker = _Tracker()
    found = False
    while not found and tracker.queries < max_queries:
        indices = rng.integers(0, inst.N, size=min(block_size, max_queries - tracker.queries))
        hits = np.flatnonzero(mask[indices])
        if hits.size:
            indices = indices[: hits[0] + 1]
            found = True

        tracker.observe(indices, qtsp_instance.tour_costs(inst, indices))

    query_log = QueryLog(tracker.queries, tracker.best_cost, tracker.best_tour, found, seed)
    log.debug(f"random search on {inst} finished {query_log} found={found}")

    return query_log


def best_of_k(
    inst: qtsp_instance.TspInstance,
    k: int,
    seed: int,
    target: Optional[Union[Iterable[int], np.ndarray]] = None,
    block_size: int = BLOCK_SIZE,
) -> QueryLog:
    """
    Exactly k queries; found reports whether any sampled tour hit the target, and is True
    when no target is given.
    """
    if k < 1:
        raise qtsp_exception.QTSPValueError(f"k must be >= 1, got {k}")

    mask = None if target is None else quantum_sim.target_mask(target, inst.N)
    rng = np.random.default_rng(seed)
    tracker = _Tracker()
    found = mask is None
    while tracker.queries < k:
        indices = rng.integers(0, inst.N, size=min(block_size, k - tracker.queries))
        if mask is not None and mask[indices].any():
            found = True

        tracker.observe(indices, qtsp_instance.tour_costs(inst, indices))

    return QueryLog(tracker.queries, tracker.best_cost, tracker.best_tour, found, seed)


class TrialSummary(qtsp_abc._QTSPABC):

    __slots__ = ["trials", "found", "mean_queries", "success_rate"]

    def __init__(self, logs: List[QueryLog]) -> TrialSummary:
        self.trials = len(logs)
        self.found = sum(1 for query_log in logs if query_log.found)
        self.mean_queries = (
            float(np.mean([query_log.queries for query_log in logs])) if logs else math.nan
        )
        self.success_rate = self.found / self.trials if logs else math.nan

    @property
    def label(self) -> AnyStr:
        return f"trials{self.trials}"


def run_trials(
    inst: qtsp_instance.TspInstance,
    target: Union[Iterable[int], np.ndarray],
    trials: int,
    max_queries: int,
    seed: int,
) -> List[QueryLog]:
    if trials < 1:
        raise qtsp_exception.QTSPValueError(f"trials must be >= 1, got {trials}")

    mask = quantum_sim.target_mask(target, inst.N)
    logs = [
        random_search(inst, mask, max_queries, trial_seed)
        for trial_seed in qtsp_instance.spawn_seeds(seed, trials)
    ]
    log.info(f"{inst}: {TrialSummary(logs).found}/{trials} random searches found the target")

    return logs
