"""
Closed-form predictions: ensemble statistics, Gaussian tour density, tail population,
Grover success and query counts
"""

from __future__ import annotations
import logging
import math
from typing import AnyStr, Dict, Optional

import numpy as np
from scipy import integrate, special, stats

from qtsp import exception as qtsp_exception
from qtsp import instance as qtsp_instance
from qtsp import phase as qtsp_phase
from qtsp import quantum_sim
from qtsp import qtsp_abc


log = logging.getLogger(__name__)

CORRECTED = "corrected"
PRINTED = "printed"
VARIANCE_VARIANTS = (CORRECTED, PRINTED)

QUAD_EPSREL = 1e-8
QUAD_LIMIT = 200
# Beyond this many standard deviations a window is integrated with ndtr instead of quad.
TAIL_SIGMA = 6.0


class EnsembleStats(qtsp_abc._QTSPABC):

    __slots__ = [
        "n",
        "c1",
        "c2",
        "variant",
        "mean_est",
        "second_moment_est",
        "variance_est",
        "ratio",
    ]

    def __init__(
        self,
        n: int,
        c1: float,
        c2: float,
        variant: AnyStr,
        mean_est: float,
        variance_est: float,
    ) -> EnsembleStats:
        self.n = n
        self.c1 = c1
        self.c2 = c2
        self.variant = variant
        self.mean_est = mean_est
        self.variance_est = variance_est
        self.second_moment_est = variance_est + mean_est ** 2
        self.ratio = math.sqrt(variance_est) / mean_est if mean_est else math.inf

    @property
    def label(self) -> AnyStr:
        return f"n{self.n}-{self.variant}"

    @property
    def std_est(self) -> float:
        return math.sqrt(self.variance_est)

    @property
    def std_phase_est(self) -> float:
        return qtsp_phase.TWO_PI * self.std_est / (self.n * (self.c2 - self.c1))


def ensemble_stats(
    n: int, c1: float, c2: float, variant: AnyStr = CORRECTED
) -> EnsembleStats:
    """
    Expected tour-cost statistics over instances with i.i.d. uniform pair costs on
    [c1, c2]. The printed variant keeps the (c2 - c1) substitution in the mean.
    """
    if n < 3:
        raise qtsp_exception.QTSPValueError(f"n must be >= 3, got {n}")

    if not c2 > c1 >= 0:
        raise qtsp_exception.QTSPValueError(
            f"cost bounds must satisfy 0 <= c1 < c2, got c1={c1} c2={c2}"
        )

    if variant == CORRECTED:
        mean_est = n * (c1 + c2) / 2.0
        variance_est = n * (c2 - c1) ** 2 / 12.0
    elif variant == PRINTED:
        mean_est = n * (c2 - c1) / 2.0
        variance_est = n * (c2 ** 2 + 10.0 * c2 * c1 + c1 ** 2) / 12.0
    else:
        raise qtsp_exception.QTSPValueError(
            f"variant must be one of {VARIANCE_VARIANTS}, got {variant!r}"
        )

    return EnsembleStats(n, c1, c2, variant, mean_est, variance_est)


class VarianceResolution(qtsp_abc._QTSPABC):

    __slots__ = [
        "n",
        "c1",
        "c2",
        "instances",
        "confidence",
        "measured",
        "ci_low",
        "ci_high",
        "predictions",
        "matches",
    ]

    def __init__(
        self,
        n: int,
        c1: float,
        c2: float,
        instances: int,
        confidence: float,
        measured: float,
        half_width: float,
    ) -> VarianceResolution:
        self.n = n
        self.c1 = c1
        self.c2 = c2
        self.instances = instances
        self.confidence = confidence
        self.measured = measured
        self.ci_low = measured - half_width
        self.ci_high = measured + half_width
        self.predictions = {
            variant: ensemble_stats(n, c1, c2, variant).variance_est
            for variant in VARIANCE_VARIANTS
        }
        self.matches = {
            variant: bool(self.ci_low <= prediction <= self.ci_high)
            for variant, prediction in self.predictions.items()
        }

    @property
    def label(self) -> AnyStr:
        return f"n{self.n}-{self.winner}"

    @property
    def winner(self) -> AnyStr:
        matching = [variant for variant in VARIANCE_VARIANTS if self.matches[variant]]
        if len(matching) == 1:
            return matching[0]

        return "both" if matching else "neither"


def resolve_variance_variant(
    n: int = 7,
    c1: float = 1.0,
    c2: float = 3.0,
    instances: int = 2000,
    seed: int = 0,
    confidence: float = 0.99,
    max_cities: int = qtsp_instance.DEFAULT_MAX_CITIES_COSTS,
) -> VarianceResolution:
    """
    Pooled variance of all enumerated tour costs over random instances, with a
    delta-method interval over per-instance first and second moments.
    """
    if instances < 2:
        raise qtsp_exception.QTSPValueError(f"instances must be >= 2, got {instances}")

    moments = np.empty((instances, 2), dtype=np.float64)
    for row, instance_seed in enumerate(qtsp_instance.spawn_seeds(seed, instances)):
        inst = qtsp_instance.generate_instance(n, c1, c2, instance_seed)
        costs = qtsp_instance.enumerate_costs(inst, max_cities=max_cities)
        moments[row] = (costs.mean(), np.mean(costs * costs))

    mean, second_moment = moments.mean(axis=0)
    measured = float(second_moment - mean ** 2)
    gradient = np.array([-2.0 * mean, 1.0])
    standard_error = math.sqrt(gradient @ np.cov(moments, rowvar=False) @ gradient / instances)
    z = float(stats.norm.ppf(0.5 + confidence / 2.0))

    resolution = VarianceResolution(
        n, c1, c2, instances, confidence, measured, z * standard_error
    )
    log.info(
        f"{resolution}: measured variance {measured:.6g} in "
        f"[{resolution.ci_low:.6g}, {resolution.ci_high:.6g}], "
        f"predictions {resolution.predictions}"
    )

    return resolution


class GaussianModel(qtsp_abc._QTSPABC):
    """
    nu(c) = nu0 exp(-(c - mean)^2 / (2 std^2)) on [lower, upper], normalized to N tours.
    """

    __slots__ = ["mean", "std", "N", "lower", "upper", "norm"]

    def __init__(
        self, mean: float, std: float, N: int, lower: float, upper: float
    ) -> GaussianModel:
        if not std > 0.0:
            raise qtsp_exception.QTSPValueError(f"std must be positive, got {std}")

        if not upper > lower:
            raise qtsp_exception.QTSPValueError(
                f"cost range must be nonempty, got [{lower}, {upper}]"
            )

        self.mean = float(mean)
        self.std = float(std)
        self.N = N
        self.lower = float(lower)
        self.upper = float(upper)
        mass = special.ndtr(self.z(upper)) - special.ndtr(self.z(lower))
        self.norm = N / (self.std * math.sqrt(2.0 * math.pi) * mass)

    @property
    def label(self) -> AnyStr:
        return f"mean{self.mean:.4g}-std{self.std:.4g}"

    def z(self, c: float) -> float:
        return (c - self.mean) / self.std

    def density(self, c: float) -> float:
        if c < self.lower or c > self.upper:
            return 0.0

        return self.norm * math.exp(-0.5 * self.z(c) ** 2)

    def count(self, a: float, b: float) -> float:
        """
        Number of tours with cost in [a, b].
        """
        a = max(a, self.lower)
        b = min(b, self.upper)
        if b <= a:
            return 0.0

        za = self.z(a)
        zb = self.z(b)
        scale = self.norm * self.std * math.sqrt(2.0 * math.pi)
        if za > TAIL_SIGMA:
            return scale * float(special.ndtr(-za) - special.ndtr(-zb))

        if zb < -TAIL_SIGMA:
            return scale * float(special.ndtr(zb) - special.ndtr(za))

        value, _ = integrate.quad(
            self.density,
            a,
            b,
            epsabs=0.0,
            epsrel=QUAD_EPSREL,
            limit=QUAD_LIMIT,
            points=[self.mean] if a < self.mean < b else None,
        )

        return value

    def total(self) -> float:
        return self.count(self.lower, self.upper)

    @classmethod
    def from_instance(cls, inst: qtsp_instance.TspInstance) -> GaussianModel:
        mean = qtsp_instance.exact_mean_pairsum(inst)
        second_moment = qtsp_instance.exact_second_moment_decomposition(inst, verify=False)
        std = math.sqrt(max(second_moment - mean ** 2, 0.0))

        return cls(mean, std, inst.N, inst.n * inst.c1, inst.n * inst.c2)

    @classmethod
    def from_ensemble(
        cls, n: int, c1: float, c2: float, variant: AnyStr = CORRECTED
    ) -> GaussianModel:
        es = ensemble_stats(n, c1, c2, variant)
        return cls(es.mean_est, es.std_est, qtsp_instance.tour_count(n), n * c1, n * c2)


def gaussian_f0(eta: float, model: GaussianModel, n: int, c1: float, c2: float) -> float:
    """
    Fraction of model tours whose phase lies in [0, eta/2] or [2pi - eta/2, 2pi].
    """
    if not 0.0 <= eta <= qtsp_phase.TWO_PI:
        raise qtsp_exception.QTSPValueError(f"eta must lie in [0, 2pi], got {eta}")

    lower = n * c1
    upper = n * c2
    half_width = (eta / 2.0) * (upper - lower) / qtsp_phase.TWO_PI
    low_tail = model.count(lower, lower + half_width)
    high_tail = model.count(upper - half_width, upper)

    return min((low_tail + high_tail) / model.N, 1.0)


def gaussian_tail(z: float) -> float:
    return float(special.ndtr(-z))


def asymptotic_f(n: int) -> float:
    """
    exp(-(3/2) n - (1/2) ln n); compares with gaussian_tail(sqrt(3n)) for c1 = 0 up to a
    factor near sqrt(6 pi).
    """
    if n < 3:
        raise qtsp_exception.QTSPValueError(f"n must be >= 3, got {n}")

    return math.exp(-1.5 * n - 0.5 * math.log(n))


def grover_success(f: float, r: int) -> float:
    return math.sin((2 * r + 1) * math.asin(math.sqrt(f))) ** 2


def small_angle_rotation_success(
    f0: float, M: int, k: int, f_pi: Optional[float] = None
) -> float:
    """
    Group-0 probability after k applications of G^2M, each a rotation by 4M sqrt(f0)
    inside the span of |0> and |pi>.
    """
    if f_pi is None:
        f_pi = 1.0 - f0

    weight = f0 + f_pi
    angle = math.asin(math.sqrt(f0 / weight)) + k * 4 * M * math.sqrt(f0)

    return weight * math.sin(angle) ** 2


class SpeedupReport(qtsp_abc._QTSPABC):

    __slots__ = ["f0", "M", "classical_queries", "quantum_queries", "ratio"]

    def __init__(self, f0: float, M: Optional[int], quantum_queries: int) -> SpeedupReport:
        self.f0 = f0
        self.M = M
        self.classical_queries = 1.0 / f0
        self.quantum_queries = quantum_queries
        self.ratio = self.classical_queries / quantum_queries

    @property
    def label(self) -> AnyStr:
        return f"f0{self.f0:.3g}-ratio{self.ratio:.4g}"

    def as_dict(self) -> Dict[str, float]:
        return {
            "classical_queries": self.classical_queries,
            "quantum_queries": self.quantum_queries,
            "ratio": self.ratio,
        }


def speedup_report(f0: float, M: Optional[int] = None) -> SpeedupReport:
    mode = quantum_sim.OracleMode.DISCRETIZED if M else quantum_sim.OracleMode.CONTINUOUS
    return SpeedupReport(f0, M, quantum_sim.iteration_count(f0, M, mode))
