"""
Command line
"""

from __future__ import annotations
import functools
import logging
import logging.config
from typing import AnyStr, Callable, List, Optional

import click

from qtsp import exception as qtsp_exception
from qtsp import experiment
from qtsp.files import yml_file


log = logging.getLogger(__name__)

EXIT_CONFIG_ERROR = 2
EXIT_RESOURCE_ERROR = 3
EXIT_RUNTIME_ERROR = 1

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def configure_logging(level: AnyStr) -> None:
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"default": {"format": LOG_FORMAT}},
            "handlers": {
                "stderr": {
                    "class": "logging.StreamHandler",
                    "formatter": "default",
                    "stream": "ext://sys.stderr",
                }
            },
            "loggers": {"qtsp": {"handlers": ["stderr"], "level": level.upper(), "propagate": False}},
        }
    )


def _int_list(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None

    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got {value!r}")


EXPERIMENT_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML config file."),
    click.option("--n", "n", type=int, help="City count."),
    click.option("--c1", "c1", type=float, help="Lower city-pair cost bound."),
    click.option("--c2", "c2", type=float, help="Upper city-pair cost bound."),
    click.option("--seed", "seed", type=int, help="Instance seed."),
    click.option("--M", "M", type=int, help="Half the number of cost-phase groups."),
    click.option("--quantile", "quantile", type=float, help="Fraction of cheapest tours in the phase window."),
    click.option("--eta", "eta", type=float, help="Phase window width; overrides --quantile."),
    click.option("--shots", "shots", type=int, help="Measurements of the final state."),
    click.option("--mode", "mode", type=click.Choice(experiment.MODES), help="Oracle mode."),
    click.option("--trials", "trials", type=int, help="Classical random search trials."),
    click.option("--max-queries", "max_queries", type=int, help="Query cap per classical trial."),
    click.option("--n-values", "n_values", callback=_int_list, help="Sweep city counts, e.g. 6,7,8."),
    click.option("--seeds", "seeds", callback=_int_list, help="Sweep seeds, e.g. 0,1,2."),
    click.option("--workers", "workers", type=int, help="Sweep worker processes."),
    click.option("--max-cities-costs", "max_cities_costs", type=int, help="Largest n for cost enumeration."),
    click.option(
        "--max-cities-statevector", "max_cities_statevector", type=int, help="Largest n for statevectors."
    ),
    click.option("--out", "output_directory", type=click.Path(file_okay=False), help="Output directory."),
    click.option("--xlsx/--no-xlsx", "xlsx", default=None, help="Also write the sweep aggregate as XLSX."),
    click.option(
        "--log-level",
        "log_level",
        type=click.Choice(experiment.LOG_LEVELS, case_sensitive=False),
        help="Logging level.",
    ),
]


def experiment_command(kind: AnyStr) -> Callable:
    """
    Registers a command that loads the config, applies flag overrides and runs `kind`.
    """

    def decorator(function: Callable) -> Callable:
        @functools.wraps(function)
        def command(config_path: Optional[AnyStr], **overrides) -> None:
            run_experiment(kind, config_path, overrides)

        for option in reversed(EXPERIMENT_OPTIONS):
            command = option(command)

        return cli.command(name=kind)(command)

    return decorator


def load_config(kind: AnyStr, config_path: Optional[AnyStr], overrides: dict) -> experiment.ExperimentConfig:
    document = dict()
    if config_path:
        document = yml_file.YMLFile(config_path).disk_self

    return experiment.ExperimentConfig.from_mapping(document, dict(overrides, kind=kind))


def run_experiment(kind: AnyStr, config_path: Optional[AnyStr], overrides: dict) -> None:
    try:
        cfg = load_config(kind, config_path, overrides)
    except (qtsp_exception.QTSPConfigError, qtsp_exception.QTSPFileError) as e:
        click.echo(f"config error: {e}", err=True)
        raise SystemExit(EXIT_CONFIG_ERROR)

    configure_logging(cfg.log_level)
    log.info(f"running {cfg}")
    try:
        report = experiment.COMMANDS[kind](cfg)
    except qtsp_exception.QTSPResourceError as e:
        click.echo(f"resource limit {e.limit_name}={e.limit} exceeded: {e}", err=True)
        raise SystemExit(EXIT_RESOURCE_ERROR)
    except (qtsp_exception.QTSPConfigError, qtsp_exception.QTSPValueError) as e:
        click.echo(f"config error: {e}", err=True)
        raise SystemExit(EXIT_CONFIG_ERROR)
    except qtsp_exception.QTSPException as e:
        click.echo(f"error: {e}", err=True)
        raise SystemExit(EXIT_RUNTIME_ERROR)

    click.echo(report.render(), nl=False)


@click.group()
def cli() -> None:
    """Quantum heuristic TSP simulator."""


@experiment_command("gen")
def gen() -> None:
    """Generate an instance and write instance.txt."""


@experiment_command("stats")
def stats() -> None:
    """Tour-cost statistics, cost-phase groups and validity conditions."""


@experiment_command("run-quantum")
def run_quantum() -> None:
    """Statevector run of the generalized Grover iteration."""


@experiment_command("run-classical")
def run_classical() -> None:
    """Classical random search trials."""


@experiment_command("compare")
def compare() -> None:
    """Quantum against classical query counts on one instance."""


@experiment_command("sweep")
def sweep() -> None:
    """Compare over a grid of city counts and seeds."""
