"""
Statevector simulation of the generalized Grover iteration G = -I_psi0 C over all tours
"""

from __future__ import annotations
import enum
import logging
import math
from typing import AnyStr, Iterable, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp import phase as qtsp_phase
from qtsp import qtsp_abc


log = logging.getLogger(__name__)

DEFAULT_MAX_AMPLITUDES = qtsp_instance.tour_count(
    qtsp_instance.DEFAULT_MAX_CITIES_STATEVECTOR
)
RENORMALIZE_EVERY = 100
RENORMALIZE_WARN_ABOVE = 1e-12

TRACE_HEADERS = ["step", "query_count", "p_group0", "p_target", "norm_drift"]


class OracleMode(enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETIZED = "discretized"


class MeasurementClass(enum.Enum):
    LOW_COST = "low-cost solution"
    HIGH_COST_IMPOSTOR = "high-cost impostor"
    NON_SOLUTION = "non-solution"


class StateVector(qtsp_abc._QTSPABC):

    __slots__ = ["amps"]
    unserialized_slots = ("amps",)

    def __init__(self, amps: Union[Sequence[complex], np.ndarray]) -> StateVector:
        amps = np.array(amps, dtype=np.complex128)
        if amps.ndim != 1 or amps.size == 0:
            raise qtsp_exception.QTSPValueError("amplitudes must be a non-empty vector")

        self.amps = amps

    @property
    def label(self) -> AnyStr:
        return f"N{self.N}"

    @property
    def N(self) -> int:
        return len(self.amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def init_uniform(N: int, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    if N < 1:
        raise qtsp_exception.QTSPValueError(f"N must be >= 1, got {N}")

    if N > max_amplitudes:
        raise qtsp_exception.QTSPResourceError(
            f"a statevector of {N} amplitudes exceeds max_amplitudes={max_amplitudes}",
            limit_name="max_amplitudes",
            limit=max_amplitudes,
        )

    return StateVector(np.full(N, 1.0 / math.sqrt(N), dtype=np.complex128))


def _resolve_mode(mode: Optional[OracleMode], M: Optional[int]) -> OracleMode:
    if mode is None:
        mode = OracleMode.DISCRETIZED if M else OracleMode.CONTINUOUS

    return OracleMode(mode)


class CostOracle(qtsp_abc._QTSPABC):
    """
    Diagonal phase oracle with a query counter; one apply() is one query.
    """

    __slots__ = ["mode", "M", "phases", "diagonal", "queries"]
    unserialized_slots = ("phases", "diagonal")

    def __init__(
        self,
        pm: qtsp_phase.PhaseMap,
        mode: Optional[OracleMode] = None,
        M: Optional[int] = None,
    ) -> CostOracle:
        mode = _resolve_mode(mode, M)
        if mode is OracleMode.DISCRETIZED:
            if not M:
                raise qtsp_exception.QTSPValueError("discretized mode needs M >= 1")

            labels = qtsp_phase.discretize_phases(pm.phases, M)
            phases = labels * math.pi / M
        else:
            phases = np.array(pm.phases)

        self.mode = mode
        self.M = M
        self.phases = phases
        self.diagonal = np.exp(1j * phases)
        self.queries = 0

    @property
    def label(self) -> AnyStr:
        return f"{self.mode.value}-queries{self.queries}"

    def apply(self, amps: np.ndarray, out: Optional[np.ndarray] = None) -> np.ndarray:
        if len(amps) != len(self.diagonal):
            raise qtsp_exception.QTSPValueError(
                f"state of length {len(amps)} does not match {len(self.diagonal)} phases"
            )

        self.queries += 1

        return np.multiply(amps, self.diagonal, out=out)


def apply_cost_oracle(
    sv: StateVector,
    pm: qtsp_phase.PhaseMap,
    mode: Optional[OracleMode] = None,
    M: Optional[int] = None,
) -> StateVector:
    return StateVector(CostOracle(pm, mode, M).apply(sv.amps))


def grover_step(amps: np.ndarray, oracle: CostOracle) -> None:
    oracle.apply(amps, out=amps)
    # I_psi0 a = a - 2 <psi0|a> psi0 = a - 2 mean(a) for the uniform psi0
    amps -= 2.0 * amps.mean()
    np.negative(amps, out=amps)


def apply_grover(
    sv: StateVector,
    pm: qtsp_phase.PhaseMap,
    mode: Optional[OracleMode] = None,
    M: Optional[int] = None,
) -> StateVector:
    amps = np.array(sv.amps)
    grover_step(amps, CostOracle(pm, mode, M))

    return StateVector(amps)


def _iteration_count(
    f0: float, M: Optional[int] = None, mode: Optional[OracleMode] = None
):
    if not 0.0 < f0 < 1.0:
        raise qtsp_exception.QTSPValueError(f"f0 must lie in (0, 1), got {f0}")

    mode = _resolve_mode(mode, M)
    root_f0 = math.sqrt(f0)
    if mode is OracleMode.DISCRETIZED:
        if not M or M < 1:
            raise qtsp_exception.QTSPValueError("discretized mode needs M >= 1")

        inner = round((math.pi / 2 - root_f0) / (4 * M * root_f0))
        return 2 * M * max(1, inner), inner < 1

    inner = round((math.pi / 2 - root_f0) / (2 * root_f0))
    return max(1, inner), inner < 1


def iteration_count(
    f0: float, M: Optional[int] = None, mode: Optional[OracleMode] = None
) -> int:
    R, clamped = _iteration_count(f0, M, mode)
    if clamped:
        log.warning(f"iteration count for f0={f0} rounds below one step, clamped to R={R}")

    return R


def target_mask(target: Union[Iterable[int], np.ndarray], N: int) -> np.ndarray:
    target = np.asarray(
        target if isinstance(target, np.ndarray) else list(target)
    )
    if target.dtype == bool:
        if len(target) != N:
            raise qtsp_exception.QTSPValueError(
                f"target mask of length {len(target)} does not match N={N}"
            )
        return target

    mask = np.zeros(N, dtype=bool)
    if target.size:
        target = target.astype(np.int64)
        if target.min() < 0 or target.max() >= N:
            raise qtsp_exception.QTSPValueError(f"target indices must lie in [0, {N})")

        mask[target] = True

    return mask


class GroverConfig(qtsp_abc._QTSPABC):

    __slots__ = [
        "mode",
        "M",
        "R",
        "predicted_error",
        "target",
        "target_description",
        "group_labels",
        "iteration_count_clamped",
        "renormalize_every",
    ]
    unserialized_slots = ("target", "group_labels")

    def __init__(
        self,
        mode: OracleMode,
        R: int,
        target: np.ndarray,
        M: Optional[int] = None,
        predicted_error: Optional[float] = None,
        target_description: AnyStr = "",
        group_labels: Optional[np.ndarray] = None,
        iteration_count_clamped: bool = False,
        renormalize_every: int = RENORMALIZE_EVERY,
    ) -> GroverConfig:
        mode = _resolve_mode(mode, M)
        if R < 0:
            raise qtsp_exception.QTSPValueError(f"R must be >= 0, got {R}")

        if mode is OracleMode.DISCRETIZED and (not M or R % (2 * M)):
            raise qtsp_exception.QTSPValueError(
                f"discretized mode needs R to be a multiple of 2M, got R={R} M={M}"
            )

        self.mode = mode
        self.M = M
        self.R = int(R)
        self.predicted_error = predicted_error
        self.target = target
        self.target_description = target_description
        self.group_labels = group_labels
        self.iteration_count_clamped = iteration_count_clamped
        self.renormalize_every = renormalize_every

    @property
    def label(self) -> AnyStr:
        return f"{self.mode.value}-R{self.R}"

    @classmethod
    def for_population(
        cls,
        f0: float,
        target: np.ndarray,
        mode: Optional[OracleMode] = None,
        M: Optional[int] = None,
        **kwargs,
    ) -> GroverConfig:
        mode = _resolve_mode(mode, M)
        R, clamped = _iteration_count(f0, M, mode)
        if clamped:
            log.warning(f"iteration count for f0={f0} clamped to R={R}")

        return cls(
            mode,
            R,
            target,
            M=M,
            predicted_error=math.sqrt(f0),
            iteration_count_clamped=clamped,
            **kwargs,
        )


class TraceRow(NamedTuple):
    step: int
    query_count: int
    p_group0: float
    p_target: float
    norm_drift: float


class GroverRun(qtsp_abc._QTSPABC):

    __slots__ = ["config", "state", "trace", "queries", "group_populations"]
    unserialized_slots = ("state", "trace")

    def __init__(
        self,
        config: GroverConfig,
        state: StateVector,
        trace: List[TraceRow],
        queries: int,
        group_populations: Optional[np.ndarray] = None,
    ) -> GroverRun:
        self.config = config
        self.state = state
        self.trace = trace
        self.queries = queries
        self.group_populations = group_populations

    @property
    def label(self) -> AnyStr:
        return f"{self.config.mode.value}-queries{self.queries}"

    @property
    def success(self) -> float:
        return self.trace[-1].p_target

    @property
    def group0_success(self) -> float:
        return self.trace[-1].p_group0


def _trace_row(
    step: int,
    queries: int,
    amps: np.ndarray,
    target: np.ndarray,
    group0: np.ndarray,
    norm_drift: float,
) -> TraceRow:
    probabilities = np.abs(amps) ** 2
    return TraceRow(
        step,
        queries,
        float(probabilities[group0].sum()),
        float(probabilities[target].sum()),
        norm_drift,
    )


def run(
    sv0: StateVector, pm: qtsp_phase.PhaseMap, cfg: GroverConfig
) -> GroverRun:
    oracle = CostOracle(pm, cfg.mode, cfg.M)
    target = target_mask(cfg.target, sv0.N)
    group0 = target if cfg.group_labels is None else cfg.group_labels == 0
    amps = np.array(sv0.amps)

    log.info(f"running {cfg} on {pm}")
    trace = [_trace_row(0, 0, amps, target, group0, abs(np.linalg.norm(amps) - 1.0))]
    for step in range(1, cfg.R + 1):
        grover_step(amps, oracle)
        norm = float(np.linalg.norm(amps))
        norm_drift = abs(norm - 1.0)
        if step % cfg.renormalize_every == 0:
            amps /= norm
            message = f"renormalized at step {step}, correction {norm_drift:.3e}"
            if norm_drift > RENORMALIZE_WARN_ABOVE:
                log.warning(message)
            else:
                log.debug(message)

        trace.append(_trace_row(step, oracle.queries, amps, target, group0, norm_drift))

    group_populations = None
    if cfg.group_labels is not None and cfg.M:
        group_populations = np.bincount(
            cfg.group_labels, weights=np.abs(amps) ** 2, minlength=2 * cfg.M
        )

    grover_run = GroverRun(cfg, StateVector(amps), trace, oracle.queries, group_populations)
    log.info(f"finished {grover_run} with success {grover_run.success:.6f}")

    return grover_run


def success_probability(
    sv: StateVector, target: Union[Iterable[int], np.ndarray]
) -> float:
    return float(sv.probabilities()[target_mask(target, sv.N)].sum())


def measure(sv: StateVector, shots: int, seed: int) -> List[qtsp_instance.TourIndex]:
    if shots < 1:
        raise qtsp_exception.QTSPValueError(f"shots must be >= 1, got {shots}")

    probabilities = sv.probabilities()
    probabilities = probabilities / probabilities.sum()
    rng = np.random.default_rng(seed)

    return [int(idx) for idx in rng.choice(sv.N, size=shots, p=probabilities)]


def classify_phase(phi: float, eta: float) -> MeasurementClass:
    if phi <= eta / 2.0:
        return MeasurementClass.LOW_COST

    if phi >= qtsp_phase.TWO_PI - eta / 2.0:
        return MeasurementClass.HIGH_COST_IMPOSTOR

    return MeasurementClass.NON_SOLUTION


def classify_measured(
    inst: qtsp_instance.TspInstance, t: qtsp_instance.TourIndex, eta: float
) -> MeasurementClass:
    """
    Classical cost lookup on a measured tour in place of phase estimation.
    """
    cost = qtsp_instance.tour_cost(inst, qtsp_instance.tour_from_index(t, inst.n))
    return classify_phase(qtsp_phase.cost_to_phase(cost, inst.n, inst.c1, inst.c2), eta)
