"""
TSP instances, tour ranking and exact per-instance cost statistics
"""

from __future__ import annotations
import functools
import logging
import math
from typing import AnyStr, List, Optional, Sequence, Union

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp import qtsp_abc


log = logging.getLogger(__name__)

TourIndex = int

DEFAULT_MAX_CITIES_COSTS = 11
DEFAULT_MAX_CITIES_STATEVECTOR = 10


def tour_count(n: int) -> int:
    return math.factorial(n - 1)


def check_cities_budget(n: int, max_cities: int, limit_name: AnyStr) -> None:
    if n > max_cities:
        raise qtsp_exception.QTSPResourceError(
            f"n={n} needs {tour_count(n)} tours which exceeds {limit_name}={max_cities}",
            limit_name=limit_name,
            limit=max_cities,
        )


def _validate_city_count(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise qtsp_exception.QTSPValueError(f"n must be an integer, got {n!r}")

    if n < 3:
        raise qtsp_exception.QTSPValueError(f"n must be >= 3, got {n}")

    return int(n)


class TspInstance(qtsp_abc._QTSPABC):
    """
    Directed city-pair cost matrix. The diagonal is unused and stored as 0.
    """

    __slots__ = ["n", "costs", "c1", "c2", "seed"]

    def __init__(
        self,
        costs: Union[Sequence[Sequence[float]], np.ndarray],
        c1: float,
        c2: float,
        seed: int = 0,
    ) -> TspInstance:
        costs = np.array(costs, dtype=np.float64)
        if costs.ndim != 2 or costs.shape[0] != costs.shape[1]:
            raise qtsp_exception.QTSPValueError(
                f"costs must be a square matrix, got shape {costs.shape}"
            )

        n = _validate_city_count(costs.shape[0])
        c1 = float(c1)
        c2 = float(c2)
        if c1 < 0 or c2 < c1:
            raise qtsp_exception.QTSPValueError(
                f"cost bounds must satisfy 0 <= c1 <= c2, got c1={c1} c2={c2}"
            )

        np.fill_diagonal(costs, 0.0)
        off_diagonal = costs[~np.eye(n, dtype=bool)]
        if off_diagonal.min() < c1 or off_diagonal.max() > c2:
            raise qtsp_exception.QTSPValueError(
                f"city-pair costs must lie in [{c1}, {c2}], "
                f"got [{off_diagonal.min()}, {off_diagonal.max()}]"
            )

        costs.flags.writeable = False

        self.n = n
        self.costs = costs
        self.c1 = c1
        self.c2 = c2
        self.seed = int(seed)

    @property
    def label(self) -> AnyStr:
        return f"n{self.n}-seed{self.seed}"

    @property
    def N(self) -> int:
        return tour_count(self.n)

    @property
    def pair_costs(self) -> np.ndarray:
        return self.costs[~np.eye(self.n, dtype=bool)]

    @classmethod
    def from_costs(
        cls,
        costs: Union[Sequence[Sequence[float]], np.ndarray],
        c1: Optional[float] = None,
        c2: Optional[float] = None,
        seed: int = 0,
    ) -> TspInstance:
        matrix = np.array(costs, dtype=np.float64)
        off_diagonal = matrix[~np.eye(matrix.shape[0], dtype=bool)]
        if c1 is None:
            c1 = float(off_diagonal.min())

        if c2 is None:
            c2 = float(off_diagonal.max())

        return cls(matrix, c1=c1, c2=c2, seed=seed)


class Tour(qtsp_abc._QTSPABC):
    """
    Hamiltonian cycle with city 0 as the fixed start.
    """

    __slots__ = ["visits"]

    def __init__(self, visits: Sequence[int]) -> Tour:
        visits = tuple(int(city) for city in visits)
        if len(visits) < 3:
            raise qtsp_exception.QTSPValueError(
                f"a tour visits at least 3 cities, got {visits}"
            )

        if visits[0] != 0 or sorted(visits) != list(range(len(visits))):
            raise qtsp_exception.QTSPValueError(
                f"a tour must be a permutation of 0..n-1 starting at 0, got {visits}"
            )

        self.visits = visits

    @property
    def label(self) -> AnyStr:
        return "-".join(str(city) for city in self.visits)

    @property
    def n(self) -> int:
        return len(self.visits)

    def __len__(self) -> int:
        return len(self.visits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tour) and self.visits == other.visits

    def __hash__(self) -> int:
        return hash(self.visits)


def generate_instance(n: int, c1: float, c2: float, seed: int) -> TspInstance:
    n = _validate_city_count(n)
    if c1 < 0 or c2 < c1:
        raise qtsp_exception.QTSPValueError(
            f"cost bounds must satisfy 0 <= c1 <= c2, got c1={c1} c2={c2}"
        )

    if seed < 0:
        raise qtsp_exception.QTSPValueError(f"seed must be non-negative, got {seed}")

    rng = np.random.default_rng(seed)
    costs = np.clip(rng.uniform(c1, c2, size=(n, n)), c1, c2)
    instance = TspInstance(costs, c1=c1, c2=c2, seed=seed)
    log.debug(f"generated {instance} with costs in [{c1}, {c2}]")

    return instance


def spawn_seeds(seed: int, count: int) -> List[int]:
    """
    Independent child seeds derived from one root seed.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def tour_from_index(idx: TourIndex, n: int) -> Tour:
    n = _validate_city_count(n)
    idx = int(idx)
    if not 0 <= idx < tour_count(n):
        raise qtsp_exception.QTSPValueError(
            f"tour index must lie in [0, {tour_count(n)}) for n={n}, got {idx}"
        )

    remaining = list(range(1, n))
    visits = [0]
    for position in range(n - 1):
        digit, idx = divmod(idx, math.factorial(n - 2 - position))
        visits.append(remaining.pop(digit))

    return Tour(visits)


def index_from_tour(t: Tour) -> TourIndex:
    n = t.n
    remaining = list(range(1, n))
    idx = 0
    for position, city in enumerate(t.visits[1:]):
        digit = remaining.index(city)
        idx += digit * math.factorial(n - 2 - position)
        remaining.pop(digit)

    return idx


def tour_cost(inst: TspInstance, t: Tour) -> float:
    if t.n != inst.n:
        raise qtsp_exception.QTSPValueError(f"{t} does not match {inst}")

    visits = t.visits
    return float(
        sum(inst.costs[visits[k], visits[(k + 1) % inst.n]] for k in range(inst.n))
    )


@functools.lru_cache(maxsize=4)
def lexicographic_permutations(m: int) -> np.ndarray:
    """
    All permutations of 0..m-1 as rows, in lexicographic order. The returned array is
    shared between callers and read-only.
    """
    perms = np.zeros((1, 0), dtype=np.int8)
    for size in range(1, m + 1):
        blocks = list()
        for first in range(size):
            rest = perms + (perms >= first)
            head = np.full((len(perms), 1), first, dtype=np.int8)
            blocks.append(np.hstack([head, rest]))

        perms = np.vstack(blocks)

    perms.flags.writeable = False

    return perms


def _suffix_costs(costs: np.ndarray, suffixes: np.ndarray) -> np.ndarray:
    # suffixes hold city labels 1..n-1 in visiting order after city 0
    total = costs[0, suffixes[:, 0]].copy()
    for position in range(suffixes.shape[1] - 1):
        total += costs[suffixes[:, position], suffixes[:, position + 1]]

    total += costs[suffixes[:, -1], 0]

    return total


def tour_costs(
    inst: TspInstance,
    indices: Union[Sequence[int], np.ndarray],
    max_cities: int = DEFAULT_MAX_CITIES_COSTS,
) -> np.ndarray:
    """
    Costs of a batch of tours given by index.
    """
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= inst.N):
        raise qtsp_exception.QTSPValueError(
            f"tour indices must lie in [0, {inst.N}) for {inst}"
        )

    if inst.n <= max_cities:
        suffixes = lexicographic_permutations(inst.n - 1)[indices] + 1
        return _suffix_costs(inst.costs, suffixes)

    return np.array(
        [tour_cost(inst, tour_from_index(idx, inst.n)) for idx in indices],
        dtype=np.float64,
    )


def enumerate_costs(
    inst: TspInstance, max_cities: int = DEFAULT_MAX_CITIES_COSTS
) -> np.ndarray:
    check_cities_budget(inst.n, max_cities, "max_cities_costs")
    suffixes = lexicographic_permutations(inst.n - 1) + 1
    costs = _suffix_costs(inst.costs, suffixes)
    log.debug(f"enumerated {len(costs)} tour costs of {inst}")

    return costs


def exact_mean_pairsum(inst: TspInstance) -> float:
    """
    Every directed pair cost appears in (n-2)! of the (n-1)! tours.
    """
    return float(inst.costs.sum() / (inst.n - 1))


class SecondMomentTerms(qtsp_abc._QTSPABC):

    __slots__ = ["n", "same_edge", "adjacent_edge", "disjoint_edge"]

    def __init__(
        self, n: int, same_edge: float, adjacent_edge: float, disjoint_edge: float
    ) -> SecondMomentTerms:
        self.n = n
        self.same_edge = same_edge
        self.adjacent_edge = adjacent_edge
        self.disjoint_edge = disjoint_edge

    @property
    def label(self) -> AnyStr:
        return f"n{self.n}"

    @property
    def second_moment(self) -> float:
        n = self.n
        same_weight = math.factorial(n - 2) / math.factorial(n - 1)
        adjacent_weight = 2 * math.factorial(n - 3) / math.factorial(n - 1)
        disjoint_weight = math.factorial(n - 3) / math.factorial(n - 1)

        return (
            same_weight * self.same_edge
            + adjacent_weight * self.adjacent_edge
            + disjoint_weight * self.disjoint_edge
        )


def second_moment_terms(inst: TspInstance) -> SecondMomentTerms:
    """
    Sums over directed edge pairs: identical edges, head-to-tail adjacent edges
    (j1->j2->j3, all distinct) and vertex-disjoint edges, each over ordered pairs.
    """
    if inst.n < 4:
        raise qtsp_exception.QTSPValueError(
            f"the disjoint-edge sum needs n >= 4, got n={inst.n}"
        )

    c = np.array(inst.costs)
    inflow = c.sum(axis=0)
    outflow = c.sum(axis=1)
    total = c.sum()

    same_edge = float((c * c).sum())
    reverse_pairs = float((c * c.T).sum())
    adjacent_edge = float(inflow @ outflow) - reverse_pairs
    # all ordered edge pairs minus the ones sharing a vertex
    disjoint_edge = (
        total * total
        - 2 * adjacent_edge
        - reverse_pairs
        - float(outflow @ outflow)
        - float(inflow @ inflow)
        + same_edge
    )

    return SecondMomentTerms(inst.n, same_edge, adjacent_edge, float(disjoint_edge))


def exact_second_moment_decomposition(
    inst: TspInstance,
    verify: bool = True,
    rtol: float = 1e-10,
    max_cities: int = DEFAULT_MAX_CITIES_COSTS,
    costs: Optional[np.ndarray] = None,
) -> float:
    """
    Verification checks against `costs` when given, else enumerates within max_cities.
    """
    second_moment = second_moment_terms(inst).second_moment

    if verify and (costs is not None or inst.n <= max_cities):
        if costs is None:
            costs = enumerate_costs(inst, max_cities=max_cities)
        costs = np.asarray(costs, dtype=np.float64)
        enumerated = float(np.mean(costs * costs))
        if not math.isclose(second_moment, enumerated, rel_tol=rtol):
            raise qtsp_exception.QTSPDiscrepancyError(
                f"{inst} second moment decomposition {second_moment!r} disagrees with "
                f"enumeration {enumerated!r} beyond rtol={rtol}",
                expected=enumerated,
                actual=second_moment,
            )
    elif verify:
        log.debug(f"{inst} too large to verify the second moment by enumeration")

    return second_moment
