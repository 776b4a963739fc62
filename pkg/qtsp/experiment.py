"""
Experiment configuration, run reports and the pipelines behind each command
"""

from __future__ import annotations
import concurrent.futures
import itertools
import logging
import math
import time
from typing import Any, AnyStr, Dict, List, Mapping, Optional, Tuple

import numpy as np

from qtsp import classical_baseline
from qtsp import directory as qtsp_directory
from qtsp import exception as qtsp_exception
from qtsp import group_sim
from qtsp import instance as qtsp_instance
from qtsp import phase as qtsp_phase
from qtsp import quantum_sim
from qtsp import qtsp_abc
from qtsp import theory
from qtsp.files import csv_file

try:
    import resource
except ImportError:  # pragma: no cover - not available on Windows
    resource = None


log = logging.getLogger(__name__)

KINDS = ("gen", "stats", "run-quantum", "run-classical", "compare", "sweep")
MODES = ("discretized", "continuous")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

# (attribute, section, key, type, default)
CONFIG_FIELDS = (
    ("kind", "experiment", "kind", str, "compare"),
    ("n", "instance", "n", int, 8),
    ("c1", "instance", "c1", float, 0.0),
    ("c2", "instance", "c2", float, 1.0),
    ("seed", "instance", "seed", int, 0),
    ("M", "grover", "M", int, 8),
    ("quantile", "grover", "quantile", float, 0.002),
    ("eta", "grover", "eta", float, None),
    ("shots", "grover", "shots", int, 1000),
    ("mode", "grover", "mode", str, "discretized"),
    ("trials", "classical", "trials", int, 200),
    ("max_queries", "classical", "max_queries", int, 1_000_000),
    ("n_values", "sweep", "n_values", list, ()),
    ("seeds", "sweep", "seeds", list, (0,)),
    ("workers", "sweep", "workers", int, 1),
    ("max_cities_costs", "limits", "max_cities_costs", int, 11),
    ("max_cities_statevector", "limits", "max_cities_statevector", int, 10),
    ("output_directory", "output", "directory", str, "qtsp-out"),
    ("xlsx", "output", "xlsx", bool, False),
    ("log_level", "logging", "level", str, "INFO"),
)

AGGREGATE_HEADERS = [
    "n",
    "seed",
    "f0",
    "R",
    "quantum_success",
    "classical_mean_queries",
    "ratio",
    "dphi",
    "eta",
    "overlap_residual",
    "error",
]

FLAG_ITERATION_COUNT_CLAMPED = "iteration_count_clamped"
FLAG_ETA_CLAMPED = "eta_clamped"
FLAG_EMPTY_TARGET = "empty_target"
FLAG_CONDITIONS_VIOLATED = "conditions_violated"


def _coerce(field_path: AnyStr, value: Any, field_type: type) -> Any:
    if value is None:
        return None

    if field_type is int:
        if isinstance(value, bool) or not isinstance(value, (int, float, np.integer)):
            raise qtsp_exception.QTSPConfigError(f"{field_path} must be an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise qtsp_exception.QTSPConfigError(f"{field_path} must be an integer, got {value!r}")
        return int(value)

    if field_type is float:
        if isinstance(value, bool) or not isinstance(value, (int, float, np.number)):
            raise qtsp_exception.QTSPConfigError(f"{field_path} must be a number, got {value!r}")
        return float(value)

    if field_type is bool:
        if not isinstance(value, bool):
            raise qtsp_exception.QTSPConfigError(f"{field_path} must be true or false, got {value!r}")
        return value

    if field_type is list:
        if isinstance(value, (int, str)) and not isinstance(value, bool):
            value = [value]
        if not isinstance(value, (list, tuple)):
            raise qtsp_exception.QTSPConfigError(f"{field_path} must be a list, got {value!r}")
        return [_coerce(f"{field_path}[{index}]", item, int) for index, item in enumerate(value)]

    return str(value)


class ExperimentConfig(qtsp_abc._QTSPABC):

    __slots__ = [field[0] for field in CONFIG_FIELDS]

    def __init__(self, **kwargs) -> ExperimentConfig:
        for attribute, section, key, field_type, default in CONFIG_FIELDS:
            value = kwargs.pop(attribute, default)
            if isinstance(value, tuple):
                value = list(value)
            setattr(self, attribute, _coerce(f"{section}.{key}", value, field_type))

        if kwargs:
            raise qtsp_exception.QTSPConfigError(f"unknown config field {sorted(kwargs)[0]}")

        self.validate()

    @property
    def label(self) -> AnyStr:
        return f"{self.kind}-n{self.n}-seed{self.seed}"

    @classmethod
    def from_mapping(
        cls, mapping: Optional[Mapping] = None, overrides: Optional[Mapping] = None
    ) -> ExperimentConfig:
        """
        Nested config document plus flat overrides; overrides set to None are ignored.
        """
        by_section_key = {(section, key): attribute for attribute, section, key, _, _ in CONFIG_FIELDS}
        sections = {section for _, section, _, _, _ in CONFIG_FIELDS}

        kwargs = dict()
        for section, values in (mapping or dict()).items():
            if section not in sections:
                raise qtsp_exception.QTSPConfigError(f"unknown config section {section}")
            if values is None:
                continue
            if not isinstance(values, Mapping):
                raise qtsp_exception.QTSPConfigError(f"config section {section} must be a mapping")
            for key, value in values.items():
                if (section, key) not in by_section_key:
                    raise qtsp_exception.QTSPConfigError(f"unknown config key {section}.{key}")
                kwargs[by_section_key[(section, key)]] = value

        for attribute, value in (overrides or dict()).items():
            if value is not None:
                kwargs[attribute] = value

        return cls(**kwargs)

    def field_path(self, attribute: AnyStr) -> AnyStr:
        for field_attribute, section, key, _, _ in CONFIG_FIELDS:
            if field_attribute == attribute:
                return f"{section}.{key}"

        return attribute

    def _require(self, condition: bool, attribute: AnyStr, requirement: AnyStr) -> None:
        if not condition:
            raise qtsp_exception.QTSPConfigError(
                f"{self.field_path(attribute)} {requirement}, got {getattr(self, attribute)!r}"
            )

    def validate(self) -> None:
        self._require(self.kind in KINDS, "kind", f"must be one of {', '.join(KINDS)}")
        self._require(self.n is not None and self.n >= 3, "n", "must be >= 3")
        self._require(self.c1 is not None and self.c1 >= 0, "c1", "must be >= 0")
        self._require(self.c2 is not None and self.c2 >= self.c1, "c2", "must be >= c1")
        if self.kind != "gen":
            self._require(self.c2 > self.c1, "c2", "must be > c1 for the phase map")
        self._require(self.seed is not None and self.seed >= 0, "seed", "must be >= 0")
        self._require(self.M is not None and self.M >= 1, "M", "must be an integer >= 1")
        self._require(
            self.quantile is not None and 0.0 < self.quantile <= 1.0, "quantile", "must lie in (0, 1]"
        )
        self._require(
            self.eta is None or 0.0 < self.eta <= qtsp_phase.TWO_PI, "eta", "must lie in (0, 2pi]"
        )
        self._require(self.shots is not None and self.shots >= 1, "shots", "must be >= 1")
        self._require(self.mode in MODES, "mode", f"must be one of {', '.join(MODES)}")
        self._require(self.trials is not None and self.trials >= 1, "trials", "must be >= 1")
        self._require(
            self.max_queries is not None and self.max_queries >= 1, "max_queries", "must be >= 1"
        )
        self._require(self.workers is not None and self.workers >= 1, "workers", "must be >= 1")
        self._require(all(seed >= 0 for seed in self.seeds), "seeds", "must all be >= 0")
        self._require(all(n >= 3 for n in self.n_values), "n_values", "must all be >= 3")
        if self.kind == "sweep":
            self._require(len(self.n_values) > 0, "n_values", "must not be empty")
            self._require(len(self.seeds) > 0, "seeds", "must not be empty")
        self._require(self.max_cities_costs >= 3, "max_cities_costs", "must be >= 3")
        self._require(self.max_cities_statevector >= 3, "max_cities_statevector", "must be >= 3")
        self._require(
            str(self.log_level).upper() in LOG_LEVELS, "log_level", f"must be one of {', '.join(LOG_LEVELS)}"
        )

    def replace(self, **changes) -> ExperimentConfig:
        values = {attribute: getattr(self, attribute) for attribute in self.slot_names()}
        values.update(changes)

        return ExperimentConfig(**values)


def config_echo(cfg: ExperimentConfig) -> Dict[str, Any]:
    return {
        key: value
        for key, value in cfg.to_dict().items()
        if key not in ("output_directory", "log_level")
    }


def _clip_probability(p: float) -> float:
    return min(max(float(p), 0.0), 1.0)


class RunReport(qtsp_abc._QTSPABC):
    """
    Flat dotted key=value record of one experiment. Only timing.* keys vary between
    identical runs.
    """

    __slots__ = ["kind", "values", "flags"]

    def __init__(self, kind: AnyStr) -> RunReport:
        self.kind = kind
        self.values: Dict[str, Any] = dict()
        self.flags: List[str] = list()

    @property
    def label(self) -> AnyStr:
        return self.kind

    def __getitem__(self, key: AnyStr) -> Any:
        return self.values[key]

    def __contains__(self, key: AnyStr) -> bool:
        return key in self.values

    def set(self, key: AnyStr, value: Any) -> None:
        self.values[key] = value

    def update(self, prefix: AnyStr, mapping: Mapping[str, Any]) -> None:
        for key, value in mapping.items():
            if isinstance(value, Mapping):
                self.update(f"{prefix}.{key}", value)
            else:
                self.set(f"{prefix}.{key}", value)

    def add_flag(self, flag: AnyStr) -> None:
        if flag not in self.flags:
            self.flags.append(flag)
            log.warning(f"{self} flagged {flag}")

    def lines(self) -> List[AnyStr]:
        lines = [f"kind={self.kind}", f"flags={','.join(self.flags)}"]
        for key, value in self.values.items():
            if isinstance(value, (list, tuple)):
                value = ",".join(csv_file.format_field(item) for item in value)
            else:
                value = csv_file.format_field(value)
            lines.append(f"{key}={value}")

        return lines

    def render(self) -> AnyStr:
        return "\n".join(self.lines()) + "\n"


class Experiment(object):
    """
    One (instance, config) pipeline; each step fills its section of the report.
    """

    def __init__(
        self,
        cfg: ExperimentConfig,
        directory: Optional[qtsp_directory.ExperimentDirectory] = None,
    ) -> Experiment:
        self.cfg = cfg
        self.directory = directory
        self.report = RunReport(cfg.kind)
        self.started = time.perf_counter()
        self.inst: Optional[qtsp_instance.TspInstance] = None
        self.pm: Optional[qtsp_phase.PhaseMap] = None
        self.ps: Optional[qtsp_phase.PhaseStats] = None
        self.gs: Optional[qtsp_phase.GroupSpec] = None
        self.conditions: Optional[qtsp_phase.ConditionReport] = None
        self.grover_runs: Dict[str, quantum_sim.GroverRun] = dict()
        self.classical_logs: List[classical_baseline.QueryLog] = list()

        self.report.update("config", config_echo(cfg))

    def __repr__(self) -> AnyStr:
        return f"<{type(self).__name__}-{self.cfg.label}>"

    def build_instance(self) -> qtsp_instance.TspInstance:
        cfg = self.cfg
        self.inst = qtsp_instance.generate_instance(cfg.n, cfg.c1, cfg.c2, cfg.seed)
        self.report.update(
            "instance",
            {"n": self.inst.n, "N": self.inst.N, "c1": cfg.c1, "c2": cfg.c2, "seed": cfg.seed},
        )
        if self.directory is not None:
            self.directory.write_instance(self.inst)

        return self.inst

    def build_phases(self) -> None:
        cfg = self.cfg
        inst = self.inst
        self.pm = qtsp_phase.build_phase_map(inst, max_cities=cfg.max_cities_costs)
        self.ps = qtsp_phase.phase_stats(self.pm)
        instance_values = {
            "mean_cost": self.ps.mean_cost,
            "std_cost": self.ps.std_cost,
            "min_cost": float(self.pm.costs.min()),
            "max_cost": float(self.pm.costs.max()),
            "mean_phase": self.ps.mean_phase,
            "std_phase": self.ps.std_phase,
            "exact_mean_pairsum": qtsp_instance.exact_mean_pairsum(inst),
        }
        if inst.n >= 4:
            instance_values["exact_second_moment"] = qtsp_instance.exact_second_moment_decomposition(
                inst, costs=self.pm.costs
            )
        self.report.update("instance", instance_values)

        if cfg.eta is not None:
            eta, eta_source = cfg.eta, "explicit"
        else:
            eta, eta_source = qtsp_phase.eta_for_quantile(self.pm, cfg.quantile), "quantile"

        eta_max = math.pi / cfg.M
        if eta > eta_max:
            log.warning(f"{self} eta={eta:.6g} exceeds pi/M={eta_max:.6g}, clamped")
            self.report.add_flag(FLAG_ETA_CLAMPED)
            eta = eta_max

        self.gs = qtsp_phase.build_group_spec(self.pm, cfg.M, eta)
        self.conditions = qtsp_phase.check_conditions(self.gs, self.ps, inst.n)
        if not self.conditions.all_ok:
            self.report.add_flag(FLAG_CONDITIONS_VIOLATED)

        groups = {
            "M": self.gs.M,
            "eta": self.gs.eta,
            "eta_source": eta_source,
            "f0": self.gs.f0,
            "window_fraction": self.pm.window_fraction(self.gs.eta),
        }
        for j, (count, fraction) in enumerate(zip(self.gs.counts, self.gs.fractions)):
            groups[f"count.{j}"] = int(count)
            groups[f"fraction.{j}"] = float(fraction)
        self.report.update("groups", groups)
        self.report.update("conditions", self.conditions.to_dict())

        if self.directory is not None:
            self.directory.write_csv("group_spec.csv", qtsp_phase.GROUP_SPEC_HEADERS, self.gs.rows())

    def target(self, mode: AnyStr) -> Tuple[np.ndarray, AnyStr]:
        if mode == "discretized":
            return self.gs.group_mask(0), "group 0"

        return self.pm.window_mask(self.gs.eta), f"phase window eta={self.gs.eta!r}"

    def grover_config(self, mode: AnyStr) -> quantum_sim.GroverConfig:
        target, description = self.target(mode)
        oracle_mode = quantum_sim.OracleMode(mode)
        M = self.cfg.M if oracle_mode is quantum_sim.OracleMode.DISCRETIZED else None
        f0 = float(np.count_nonzero(target) / len(target))
        kwargs = dict(target_description=description, group_labels=self.gs.labels)
        if 0.0 < f0 < 1.0:
            grover_config = quantum_sim.GroverConfig.for_population(
                f0, target, oracle_mode, M, **kwargs
            )
            if grover_config.iteration_count_clamped:
                self.report.add_flag(FLAG_ITERATION_COUNT_CLAMPED)
            return grover_config

        if f0 == 0.0:
            log.warning(f"{self} {mode} target {description} is empty, no iterations run")
            self.report.add_flag(FLAG_EMPTY_TARGET)

        return quantum_sim.GroverConfig(oracle_mode, 0, target, M=M, **kwargs)

    def run_quantum(self, mode: AnyStr, measure: bool = True) -> quantum_sim.GroverRun:
        cfg = self.cfg
        qtsp_instance.check_cities_budget(
            self.inst.n, cfg.max_cities_statevector, "max_cities_statevector"
        )
        sv0 = quantum_sim.init_uniform(
            self.pm.N, max_amplitudes=qtsp_instance.tour_count(cfg.max_cities_statevector)
        )
        grover_config = self.grover_config(mode)
        grover_run = quantum_sim.run(sv0, self.pm, grover_config)
        self.grover_runs[mode] = grover_run

        target = quantum_sim.target_mask(grover_config.target, self.pm.N)
        values = {
            "target": grover_config.target_description,
            "target_size": int(np.count_nonzero(target)),
            "f0": float(np.count_nonzero(target) / len(target)),
            "R": grover_config.R,
            "queries": grover_run.queries,
            "predicted_error": grover_config.predicted_error,
            "iteration_count_clamped": grover_config.iteration_count_clamped,
            "success": _clip_probability(grover_run.success),
            "group0_success": _clip_probability(grover_run.group0_success),
            "max_norm_drift": max(row.norm_drift for row in grover_run.trace),
        }
        if grover_run.group_populations is not None:
            for j, population in enumerate(grover_run.group_populations):
                values[f"population.{j}"] = _clip_probability(population)

        if measure:
            counts = {measurement_class.name.lower(): 0 for measurement_class in quantum_sim.MeasurementClass}
            shots = quantum_sim.measure(grover_run.state, cfg.shots, cfg.seed)
            for t in shots:
                counts[quantum_sim.classify_measured(self.inst, t, self.gs.eta).name.lower()] += 1
            values["measure"] = dict(shots=cfg.shots, **counts)

        self.report.update(f"quantum.{mode}", values)
        if self.directory is not None:
            self.directory.write_csv(
                f"trace_{mode}.csv", quantum_sim.TRACE_HEADERS, grover_run.trace
            )

        return grover_run

    def run_group(self) -> group_sim.GroupRun:
        grover_config = self.grover_config("discretized")
        group_run = group_sim.group_run(
            group_sim.initial_group_state(self.gs.fractions), grover_config.R
        )
        values = {"R": group_run.R, "success": _clip_probability(group_run.success)}
        for j, population in enumerate(group_run.populations[-1]):
            values[f"population.{j}"] = _clip_probability(population)

        discretized_run = self.grover_runs.get("discretized")
        if discretized_run is not None and discretized_run.group_populations is not None:
            values["max_deviation_from_full"] = float(
                np.max(np.abs(discretized_run.group_populations - group_run.populations[-1]))
            )

        self.report.update("quantum.group", values)
        if self.directory is not None:
            self.directory.write_csv("trace_group.csv", quantum_sim.TRACE_HEADERS, group_run.trace_rows())

        return group_run

    def run_classical(self, mode: AnyStr) -> Optional[classical_baseline.TrialSummary]:
        cfg = self.cfg
        target, description = self.target(mode)
        values = {"target": description, "trials": cfg.trials, "max_queries": cfg.max_queries}
        summary = None
        if target.any():
            self.classical_logs = classical_baseline.run_trials(
                self.inst, target, cfg.trials, cfg.max_queries, cfg.seed
            )
            summary = classical_baseline.TrialSummary(self.classical_logs)
            values.update(
                found=summary.found,
                mean_queries=summary.mean_queries,
                success_rate=summary.success_rate,
                best_cost=min(query_log.best_cost for query_log in self.classical_logs),
            )
        else:
            log.warning(f"{self} classical target {description} is empty, no trials run")
            self.report.add_flag(FLAG_EMPTY_TARGET)
            values.update(found=0, mean_queries=math.nan, success_rate=math.nan)

        self.report.update("classical", values)
        if self.directory is not None:
            self.directory.write_csv(
                "classical_trials.csv",
                classical_baseline.TRIAL_HEADERS,
                [query_log.row() for query_log in self.classical_logs],
            )

        return summary

    def add_theory(self, mode: AnyStr = "discretized") -> None:
        cfg = self.cfg
        inst = self.inst
        ensemble = theory.ensemble_stats(inst.n, cfg.c1, cfg.c2)
        printed = theory.ensemble_stats(inst.n, cfg.c1, cfg.c2, theory.PRINTED)
        values = {
            "ensemble_mean": ensemble.mean_est,
            "ensemble_variance": ensemble.variance_est,
            "ensemble_std_phase": ensemble.std_phase_est,
            "printed_mean": printed.mean_est,
            "printed_variance": printed.variance_est,
            "asymptotic_f": theory.asymptotic_f(inst.n),
            "gaussian_tail": theory.gaussian_tail(math.sqrt(3 * inst.n)),
        }
        if self.ps.std_cost and self.ps.std_cost > 0:
            model = theory.GaussianModel(
                self.ps.mean_cost, self.ps.std_cost, inst.N, inst.n * cfg.c1, inst.n * cfg.c2
            )
            values["gaussian_f0"] = theory.gaussian_f0(self.gs.eta, model, inst.n, cfg.c1, cfg.c2)

        target, _ = self.target(mode)
        f0 = float(np.count_nonzero(target) / len(target))
        if 0.0 < f0 < 1.0:
            M = cfg.M if mode == "discretized" else None
            speedup = theory.speedup_report(f0, M)
            values.update(speedup.as_dict())
            values["continuous_R"] = (math.pi / 2.0) / (2.0 * math.sqrt(f0))
            values["grover_success"] = theory.grover_success(f0, speedup.quantum_queries)
            if mode == "discretized":
                values["rotation_success"] = theory.small_angle_rotation_success(
                    f0, cfg.M, speedup.quantum_queries // (2 * cfg.M), float(self.gs.fractions[cfg.M])
                )

        self.report.update("theory", values)

    def finish(self, write_report: bool = True) -> RunReport:
        """
        Stamps timing and writes report.txt; `files` lists only what reached the disk.
        """
        write_report = write_report and self.directory is not None
        files = list() if self.directory is None else list(self.directory.written_files_names)
        # report.txt names itself; a failed write raises before the report is returned
        self.report.set("files", files + ["report.txt"] if write_report else files)

        self.report.set("timing.wall_seconds", time.perf_counter() - self.started)
        if resource is not None:
            self.report.set(
                "timing.peak_rss_kb", int(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss)
            )

        if write_report:
            self.directory.write_text("report.txt", self.report.lines())
            self.report.set("files", list(self.directory.written_files_names))

        log.info(f"{self} finished with flags {self.report.flags}")

        return self.report


def _directory(cfg: ExperimentConfig) -> qtsp_directory.ExperimentDirectory:
    return qtsp_directory.ExperimentDirectory(cfg.output_directory)


def cmd_gen(cfg: ExperimentConfig) -> RunReport:
    experiment = Experiment(cfg, _directory(cfg))
    experiment.build_instance()

    return experiment.finish(write_report=False)


def cmd_stats(cfg: ExperimentConfig) -> RunReport:
    experiment = Experiment(cfg, _directory(cfg))
    experiment.build_instance()
    experiment.build_phases()
    experiment.add_theory(cfg.mode)

    return experiment.finish()


def cmd_run_quantum(cfg: ExperimentConfig) -> RunReport:
    experiment = Experiment(cfg, _directory(cfg))
    experiment.build_instance()
    experiment.build_phases()
    experiment.run_quantum(cfg.mode)
    experiment.add_theory(cfg.mode)

    return experiment.finish()


def cmd_run_classical(cfg: ExperimentConfig) -> RunReport:
    experiment = Experiment(cfg, _directory(cfg))
    experiment.build_instance()
    experiment.build_phases()
    experiment.run_classical(cfg.mode)
    experiment.add_theory(cfg.mode)

    return experiment.finish()


def _compare(experiment: Experiment) -> Experiment:
    experiment.build_instance()
    experiment.build_phases()
    experiment.run_quantum("discretized")
    experiment.run_quantum("continuous", measure=False)
    experiment.run_group()
    experiment.run_classical("discretized")
    experiment.add_theory("discretized")

    quantum = experiment.grover_runs["discretized"]
    classical_mean = experiment.report["classical.mean_queries"]
    ratio = classical_mean / quantum.queries if quantum.queries else math.nan
    experiment.report.set("compare.quantum_queries", quantum.queries)
    experiment.report.set("compare.classical_mean_queries", classical_mean)
    experiment.report.set("compare.ratio", ratio)

    return experiment


def cmd_compare(cfg: ExperimentConfig) -> RunReport:
    return _compare(Experiment(cfg, _directory(cfg))).finish()


def _sweep_cell(cfg: ExperimentConfig, n: int, seed: int) -> Tuple[List, Optional[RunReport]]:
    # cell reports do not depend on the pool size
    experiment = Experiment(cfg.replace(kind="compare", n=n, seed=seed, workers=1))
    try:
        _compare(experiment)
        report = experiment.finish()
        report.set("files", ["report.txt"])
        directory = _directory(cfg).subdirectory(f"n{n}_seed{seed}")
        directory.write_text("report.txt", report.lines())
    except (qtsp_exception.QTSPException, ValueError) as e:
        log.error(f"sweep cell n={n} seed={seed} failed with {e}")
        return [n, seed] + [None] * (len(AGGREGATE_HEADERS) - 3) + [str(e)], None

    values = report.values
    row = [
        n,
        seed,
        values.get("quantum.discretized.f0"),
        values.get("quantum.discretized.R"),
        values.get("quantum.discretized.success"),
        values.get("classical.mean_queries"),
        values.get("compare.ratio"),
        values.get("instance.std_phase"),
        values.get("groups.eta"),
        values.get("conditions.overlap_residual"),
        None,
    ]

    return row, report


def cmd_sweep(cfg: ExperimentConfig) -> RunReport:
    """
    One compare run per (n, seed) cell; a failing cell is recorded in its aggregate row.
    """
    started = time.perf_counter()
    directory = _directory(cfg)
    cells = sorted(itertools.product(sorted(set(cfg.n_values)), sorted(set(cfg.seeds))))
    log.info(f"sweeping {len(cells)} cells with {cfg.workers} workers")

    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            results = list(
                executor.map(
                    _sweep_cell,
                    [cfg] * len(cells),
                    [n for n, _ in cells],
                    [seed for _, seed in cells],
                )
            )
    else:
        results = [_sweep_cell(cfg, n, seed) for n, seed in cells]

    rows = [row for row, _ in results]
    directory.write_csv("aggregate.csv", AGGREGATE_HEADERS, rows)
    if cfg.xlsx:
        directory.write_xlsx("aggregate.xlsx", AGGREGATE_HEADERS, rows)

    report = RunReport(cfg.kind)
    report.update("config", config_echo(cfg))
    report.set("sweep.cells", len(rows))
    report.set("sweep.failed", sum(1 for row in rows if row[-1]))
    for row, cell_report in results:
        cell = f"sweep.n{row[0]}_seed{row[1]}"
        if cell_report is None:
            report.add_flag("cell_failed")
            report.set(f"{cell}.error", row[-1])
        else:
            report.set(f"{cell}.flags", list(cell_report.flags))
    report.set("files", directory.written_files_names)
    report.set("timing.wall_seconds", time.perf_counter() - started)

    return report


COMMANDS = {
    "gen": cmd_gen,
    "stats": cmd_stats,
    "run-quantum": cmd_run_quantum,
    "run-classical": cmd_run_classical,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}
