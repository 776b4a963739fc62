"""
Cost phases, cost-phase groups and the validity conditions of the phase oracle
"""

from __future__ import annotations
import logging
import math
from typing import AnyStr, Dict, List, Optional, Sequence, Union

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp import qtsp_abc


log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# Relative slack allowed when a summed tour cost lands a rounding error outside
# [n*c1, n*c2].
BOUND_RTOL = 1e-12

DEFAULT_THRESHOLDS = {
    "overlap_residual_max": 0.1,
    "leakage_max": 0.01,
    "eta_over_dphi_min": 3.0,
    "eta_over_dphi_sqrt_n_divisor": 3.0,
}


def _validate_bounds(n: int, c1: float, c2: float) -> None:
    if not c2 > c1:
        raise qtsp_exception.QTSPValueError(
            f"the phase map needs c2 > c1, got c1={c1} c2={c2}"
        )

    if n < 1:
        raise qtsp_exception.QTSPValueError(f"n must be positive, got {n}")


def _validate_group_count(M: int) -> int:
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 1:
        raise qtsp_exception.QTSPValueError(f"M must be an integer >= 1, got {M!r}")

    return int(M)


def costs_to_phases(
    costs: Union[Sequence[float], np.ndarray], n: int, c1: float, c2: float
) -> np.ndarray:
    """
    Affine map of tour costs onto [0, 2pi]: n*c1 -> 0, n*c2 -> 2pi.
    """
    _validate_bounds(n, c1, c2)
    costs = np.asarray(costs, dtype=np.float64)
    lower = n * c1
    upper = n * c2
    slack = BOUND_RTOL * max(1.0, abs(upper))
    if costs.size and (costs.min() < lower - slack or costs.max() > upper + slack):
        raise qtsp_exception.QTSPValueError(
            f"tour costs must lie in [{lower}, {upper}], "
            f"got [{costs.min()}, {costs.max()}]"
        )

    phases = TWO_PI * (costs - lower) / (upper - lower)

    return np.clip(phases, 0.0, TWO_PI)


def cost_to_phase(c: float, n: int, c1: float, c2: float) -> float:
    return float(costs_to_phases(np.array([c]), n, c1, c2)[0])


def discretize_phases(
    phases: Union[Sequence[float], np.ndarray], M: int
) -> np.ndarray:
    """
    Nearest nominal phase j*pi/M, wrapped modulo 2M. Half-bin ties go to the even
    index (np.rint).
    """
    M = _validate_group_count(M)
    phases = np.asarray(phases, dtype=np.float64)
    if phases.size and (phases.min() < 0.0 or phases.max() > TWO_PI):
        raise qtsp_exception.QTSPValueError("phases must lie in [0, 2pi]")

    return np.rint(phases * M / math.pi).astype(np.int64) % (2 * M)


def discretize_phase(phi: float, M: int) -> int:
    return int(discretize_phases(np.array([phi]), M)[0])


def phase_window_mask(
    phases: Union[Sequence[float], np.ndarray], eta: float
) -> np.ndarray:
    """
    Tours whose phase lies in [0, eta/2] or [2pi - eta/2, 2pi].
    """
    phases = np.asarray(phases, dtype=np.float64)
    half_width = eta / 2.0

    return (phases <= half_width) | (phases >= TWO_PI - half_width)


class PhaseMap(qtsp_abc._QTSPABC):

    __slots__ = ["phases", "costs", "n", "c1", "c2"]
    unserialized_slots = ("phases", "costs")

    def __init__(
        self,
        phases: Union[Sequence[float], np.ndarray],
        costs: Optional[np.ndarray] = None,
        n: Optional[int] = None,
        c1: Optional[float] = None,
        c2: Optional[float] = None,
    ) -> PhaseMap:
        phases = np.array(phases, dtype=np.float64)
        if phases.ndim != 1 or phases.size == 0:
            raise qtsp_exception.QTSPValueError("phases must be a non-empty vector")

        if phases.min() < 0.0 or phases.max() > TWO_PI:
            raise qtsp_exception.QTSPValueError("phases must lie in [0, 2pi]")

        phases.flags.writeable = False
        if costs is not None:
            costs = np.array(costs, dtype=np.float64)
            costs.flags.writeable = False

        self.phases = phases
        self.costs = costs
        self.n = n
        self.c1 = c1
        self.c2 = c2

    @property
    def label(self) -> AnyStr:
        return f"N{self.N}" if self.n is None else f"n{self.n}-N{self.N}"

    @property
    def N(self) -> int:
        return len(self.phases)

    @classmethod
    def from_phases(cls, phases: Union[Sequence[float], np.ndarray]) -> PhaseMap:
        return cls(phases)

    def window_mask(self, eta: float) -> np.ndarray:
        return phase_window_mask(self.phases, eta)

    def window_fraction(self, eta: float) -> float:
        return float(np.count_nonzero(self.window_mask(eta)) / self.N)


def build_phase_map(
    inst: qtsp_instance.TspInstance,
    costs: Optional[np.ndarray] = None,
    max_cities: int = qtsp_instance.DEFAULT_MAX_CITIES_COSTS,
) -> PhaseMap:
    if costs is None:
        costs = qtsp_instance.enumerate_costs(inst, max_cities=max_cities)

    phases = costs_to_phases(costs, inst.n, inst.c1, inst.c2)
    phase_map = PhaseMap(phases, costs=costs, n=inst.n, c1=inst.c1, c2=inst.c2)
    log.debug(f"built {phase_map} for {inst}")

    return phase_map


def eta_for_quantile(pm: PhaseMap, q: float) -> float:
    """
    Window width whose low-cost half holds the ceil(q*N) cheapest tours.
    """
    if not 0.0 < q <= 1.0:
        raise qtsp_exception.QTSPValueError(f"quantile must lie in (0, 1], got {q}")

    k = max(1, math.ceil(q * pm.N))
    kth_phase = float(np.partition(pm.phases, k - 1)[k - 1])

    return min(2.0 * kth_phase, TWO_PI)


class GroupSpec(qtsp_abc._QTSPABC):

    __slots__ = ["M", "counts", "fractions", "eta", "labels"]
    unserialized_slots = ("labels",)

    def __init__(
        self, M: int, counts: np.ndarray, eta: float, labels: np.ndarray
    ) -> GroupSpec:
        self.M = M
        self.counts = counts
        self.fractions = counts / counts.sum()
        self.eta = eta
        self.labels = labels

    @property
    def label(self) -> AnyStr:
        return f"M{self.M}"

    @property
    def N(self) -> int:
        return int(self.counts.sum())

    @property
    def nominal_phases(self) -> np.ndarray:
        return np.arange(2 * self.M) * math.pi / self.M

    @property
    def f0(self) -> float:
        return float(self.fractions[0])

    def group_mask(self, j: int) -> np.ndarray:
        return self.labels == j

    def rows(self) -> List[List]:
        return [
            [j, float(phi_j), int(count), float(fraction)]
            for j, (phi_j, count, fraction) in enumerate(
                zip(self.nominal_phases, self.counts, self.fractions)
            )
        ]


GROUP_SPEC_HEADERS = ["j", "phi_j", "N_j", "f_j"]


def group_spec_from_fractions(
    fractions: Union[Sequence[float], np.ndarray], N: int, eta: float = 0.0
) -> GroupSpec:
    """
    Synthetic grouping with round(f_j * N) tours per group, labels sorted by group.
    """
    fractions = np.asarray(fractions, dtype=np.float64)
    if fractions.size % 2:
        raise qtsp_exception.QTSPValueError("a group spec has an even number 2M of groups")

    counts = np.rint(fractions * N).astype(np.int64)
    if counts.sum() != N:
        raise qtsp_exception.QTSPValueError(
            f"fractions {fractions.tolist()} do not split N={N} into whole groups"
        )

    labels = np.repeat(np.arange(fractions.size), counts)

    return GroupSpec(fractions.size // 2, counts, eta, labels)


def synthetic_phase_map(gs: GroupSpec) -> PhaseMap:
    """
    Phase map whose tours sit exactly on the nominal phase of their group.
    """
    return PhaseMap.from_phases(gs.nominal_phases[gs.labels])


def build_group_spec(pm: PhaseMap, M: int, eta: float) -> GroupSpec:
    M = _validate_group_count(M)
    if eta < 0.0 or eta > math.pi / M * (1.0 + BOUND_RTOL):
        raise qtsp_exception.QTSPValueError(
            f"eta must lie in [0, pi/M] = [0, {math.pi / M}] for M={M}, got {eta}"
        )

    labels = discretize_phases(pm.phases, M)
    counts = np.bincount(labels, minlength=2 * M).astype(np.int64)
    group_spec = GroupSpec(M, counts, float(eta), labels)
    log.debug(f"built {group_spec} for {pm} with counts {counts.tolist()}")

    return group_spec


class PhaseStats(qtsp_abc._QTSPABC):

    __slots__ = ["mean_phase", "std_phase", "mean_cost", "std_cost"]

    def __init__(
        self,
        mean_phase: float,
        std_phase: float,
        mean_cost: Optional[float] = None,
        std_cost: Optional[float] = None,
    ) -> PhaseStats:
        self.mean_phase = mean_phase
        self.std_phase = std_phase
        self.mean_cost = mean_cost
        self.std_cost = std_cost

    @property
    def label(self) -> AnyStr:
        return f"dphi{self.std_phase:.4g}"


def phase_stats(pm: PhaseMap) -> PhaseStats:
    mean_cost = None
    std_cost = None
    if pm.costs is not None:
        mean_cost = float(np.mean(pm.costs))
        std_cost = float(np.std(pm.costs))

    return PhaseStats(
        mean_phase=float(np.mean(pm.phases)),
        std_phase=float(np.std(pm.phases)),
        mean_cost=mean_cost,
        std_cost=std_cost,
    )


class ConditionReport(qtsp_abc._QTSPABC):

    __slots__ = [
        "overlap_residual",
        "leakage",
        "eta_over_dphi",
        "sqrt_n",
        "overlap_ok",
        "leakage_ok",
        "window_ok",
        "thresholds",
    ]

    def __init__(
        self,
        overlap_residual: float,
        leakage: float,
        eta_over_dphi: float,
        sqrt_n: float,
        thresholds: Dict[str, float],
    ) -> ConditionReport:
        self.overlap_residual = overlap_residual
        self.leakage = leakage
        self.eta_over_dphi = eta_over_dphi
        self.sqrt_n = sqrt_n
        self.thresholds = dict(thresholds)
        self.overlap_ok = overlap_residual < thresholds["overlap_residual_max"]
        self.leakage_ok = leakage < thresholds["leakage_max"]
        self.window_ok = (
            thresholds["eta_over_dphi_min"]
            <= eta_over_dphi
            <= sqrt_n / thresholds["eta_over_dphi_sqrt_n_divisor"]
        )

    @property
    def label(self) -> AnyStr:
        return "ok" if self.all_ok else "violated"

    @property
    def verdicts(self) -> Dict[str, bool]:
        return {
            "overlap": self.overlap_ok,
            "leakage": self.leakage_ok,
            "window": self.window_ok,
        }

    @property
    def all_ok(self) -> bool:
        return all(self.verdicts.values())


def overlap_residual(fractions: np.ndarray, M: int) -> float:
    """
    |<psi0|(C + 1)|psi0>| over the group basis.
    """
    nominal_phases = np.arange(2 * M) * math.pi / M
    return float(abs(np.sum(np.asarray(fractions) * (1.0 + np.exp(1j * nominal_phases)))))


def check_conditions(
    gs: GroupSpec,
    ps: PhaseStats,
    n: int,
    thresholds: Optional[Dict[str, float]] = None,
) -> ConditionReport:
    thresholds = dict(DEFAULT_THRESHOLDS, **(thresholds or {}))
    eta_over_dphi = gs.eta / ps.std_phase if ps.std_phase > 0 else math.inf

    report = ConditionReport(
        overlap_residual=overlap_residual(gs.fractions, gs.M),
        leakage=gs.eta ** 2 / 12.0,
        eta_over_dphi=eta_over_dphi,
        sqrt_n=math.sqrt(n),
        thresholds=thresholds,
    )
    if not report.all_ok:
        log.warning(f"{gs} conditions violated: {report.verdicts}")

    return report
