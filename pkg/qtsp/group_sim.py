"""
Exact Grover dynamics in the 2M-dimensional subspace spanned by the cost-phase group states
"""

from __future__ import annotations
import logging
import math
from typing import AnyStr, List, Optional, Sequence, Union

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp import phase as qtsp_phase
from qtsp import quantum_sim
from qtsp import qtsp_abc


log = logging.getLogger(__name__)

FRACTION_SUM_ATOL = 1e-9


class GroupState(qtsp_abc._QTSPABC):
    """
    Amplitudes over |phi_j>, j = 0..2M-1. Groups with f_j = 0 stay in the basis.
    """

    __slots__ = ["amps", "fractions"]

    def __init__(
        self,
        amps: Union[Sequence[complex], np.ndarray],
        fractions: Union[Sequence[float], np.ndarray],
    ) -> GroupState:
        amps = np.array(amps, dtype=np.complex128)
        fractions = np.array(fractions, dtype=np.float64)
        if fractions.ndim != 1 or fractions.size == 0 or fractions.size % 2:
            raise qtsp_exception.QTSPValueError(
                f"fractions must be a vector of even length 2M, got {fractions.shape}"
            )

        if amps.shape != fractions.shape:
            raise qtsp_exception.QTSPValueError(
                f"{amps.size} amplitudes do not match {fractions.size} groups"
            )

        if fractions.min() < 0.0 or not math.isclose(
            fractions.sum(), 1.0, abs_tol=FRACTION_SUM_ATOL
        ):
            raise qtsp_exception.QTSPValueError(
                f"fractions must be non-negative and sum to 1, got {fractions.tolist()}"
            )

        fractions.flags.writeable = False

        self.amps = amps
        self.fractions = fractions

    @property
    def label(self) -> AnyStr:
        return f"M{self.M}"

    @property
    def M(self) -> int:
        return len(self.fractions) // 2

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def populations(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def with_amps(self, amps: np.ndarray) -> GroupState:
        return GroupState(amps, self.fractions)


def initial_group_state(fractions: Union[Sequence[float], np.ndarray]) -> GroupState:
    fractions = np.asarray(fractions, dtype=np.float64)
    return GroupState(np.sqrt(fractions), fractions)


def group_oracle(gs: GroupState) -> GroupState:
    nominal_phases = np.arange(2 * gs.M) * math.pi / gs.M
    return gs.with_amps(gs.amps * np.exp(1j * nominal_phases))


def group_reflection(gs: GroupState) -> GroupState:
    """
    I_psi0 = 1 - 2|psi0><psi0| with |psi0> = sum_j sqrt(f_j)|phi_j>.
    """
    root_fractions = np.sqrt(gs.fractions)
    overlap = np.dot(root_fractions, gs.amps)

    return gs.with_amps(gs.amps - 2.0 * overlap * root_fractions)


def group_grover(gs: GroupState) -> GroupState:
    reflected = group_reflection(group_oracle(gs))
    return reflected.with_amps(-reflected.amps)


class GroupRun(qtsp_abc._QTSPABC):

    __slots__ = ["state", "populations", "norm_drift"]
    unserialized_slots = ("populations", "norm_drift")

    def __init__(
        self, state: GroupState, populations: np.ndarray, norm_drift: np.ndarray
    ) -> GroupRun:
        self.state = state
        self.populations = populations
        self.norm_drift = norm_drift

    @property
    def label(self) -> AnyStr:
        return f"M{self.state.M}-R{self.R}"

    @property
    def R(self) -> int:
        return len(self.populations) - 1

    @property
    def success(self) -> float:
        return float(self.populations[-1, 0])

    def trace_rows(self) -> List[quantum_sim.TraceRow]:
        return [
            quantum_sim.TraceRow(
                step, step, float(row[0]), float(row[0]), float(self.norm_drift[step])
            )
            for step, row in enumerate(self.populations)
        ]


def group_run(gs: GroupState, R: int) -> GroupRun:
    if R < 0:
        raise qtsp_exception.QTSPValueError(f"R must be >= 0, got {R}")

    populations = np.empty((R + 1, len(gs.amps)), dtype=np.float64)
    norm_drift = np.empty(R + 1, dtype=np.float64)
    populations[0] = gs.populations()
    norm_drift[0] = abs(gs.norm - 1.0)
    for step in range(1, R + 1):
        gs = group_grover(gs)
        populations[step] = gs.populations()
        norm_drift[step] = abs(gs.norm - 1.0)

    return GroupRun(gs, populations, norm_drift)


def full_group_populations(
    pm: qtsp_phase.PhaseMap, M: int, R: int, sv0: Optional[quantum_sim.StateVector] = None
) -> np.ndarray:
    """
    Per-step group populations of the full discretized statevector run, shape (R+1, 2M).
    """
    labels = qtsp_phase.discretize_phases(pm.phases, M)
    oracle = quantum_sim.CostOracle(pm, quantum_sim.OracleMode.DISCRETIZED, M)
    if sv0 is None:
        sv0 = quantum_sim.init_uniform(pm.N, max_amplitudes=pm.N)

    amps = np.array(sv0.amps)

    populations = np.empty((R + 1, 2 * M), dtype=np.float64)
    populations[0] = np.bincount(labels, weights=np.abs(amps) ** 2, minlength=2 * M)
    for step in range(1, R + 1):
        quantum_sim.grover_step(amps, oracle)
        populations[step] = np.bincount(
            labels, weights=np.abs(amps) ** 2, minlength=2 * M
        )

    return populations


def compare_phase_map_vs_group(pm: qtsp_phase.PhaseMap, M: int, R: int) -> float:
    group_spec = qtsp_phase.build_group_spec(pm, M, eta=0.0)
    full = full_group_populations(pm, M, R)
    reduced = group_run(initial_group_state(group_spec.fractions), R).populations
    deviation = float(np.max(np.abs(full - reduced)))
    log.debug(f"{pm} M={M} R={R}: full vs group deviation {deviation:.3e}")

    return deviation


def compare_full_vs_group(
    inst: qtsp_instance.TspInstance,
    M: int,
    R: int,
    max_cities: int = qtsp_instance.DEFAULT_MAX_CITIES_STATEVECTOR,
) -> float:
    qtsp_instance.check_cities_budget(inst.n, max_cities, "max_cities_statevector")
    pm = qtsp_phase.build_phase_map(inst)

    return compare_phase_map_vs_group(pm, M, R)
