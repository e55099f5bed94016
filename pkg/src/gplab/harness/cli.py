# src/gplab/harness/cli.py
"""Command line: ``gplab run <experiment>`` and ``gplab config``."""
from __future__ import annotations

import logging
from collections.abc import Callable
from typing import Any

import click

from ..errors import AcceptanceError, GplabError
from .config import EXPERIMENTS, ExperimentConfig, build, parse_text, serialize

LOG_FORMAT = "%(asctime)s.%(msecs)03d|%(name)s|%(levelname)s| %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

EXIT_ASSERT = 3


def configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=LOG_DATEFMT))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level)


def _config_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False), help="key=value file"),
        click.option("--set", "assignments", multiple=True, metavar="KEY=VALUE", help="Override any config key"),
        click.option("--d", type=int, default=None, help="Lattice dimension"),
        click.option("--cutoffs", default=None, help="Comma list of cutoffs K"),
        click.option("--alpha", "alphas", default=None, help="Regularity exponent(s), comma list"),
        click.option("--k", type=int, default=None),
        click.option("--j", type=int, default=None),
        click.option("--n-max", "n_max", type=int, default=None),
        click.option("--T", "T", type=float, default=None, help="Time horizon"),
        click.option("--samples", type=int, default=None),
        click.option("--seed", default=None, help="Master seed, decimal or 0x hex"),
        click.option("--mode", type=click.Choice(["deterministic", "dependent", "independent"]), default=None),
        click.option("--omega", type=click.Choice(["exact", "enumerate", "montecarlo"]), default=None),
        click.option("--output-dir", "output_dir", default=None, help="Report directory"),
        click.option("--threads", type=int, default=None, help="Worker pool cap"),
        click.option("--dump-term", "dump_term", default=None, help="Write the top decay term here"),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def _effective_config(experiment: str | None, config_file: str | None, assignments: tuple[str, ...], **flags: Any) -> ExperimentConfig:
    try:
        values: dict[str, Any] = {}
        if config_file:
            with open(config_file, encoding="utf-8") as f:
                values.update(parse_text(f.read()))
        for a in assignments:
            if "=" not in a:
                raise ValueError(f"--set expects KEY=VALUE, got {a!r}")
            key, value = a.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
        if experiment:
            flags["experiment"] = experiment
        return build(values, flags)
    except (GplabError, ValueError) as e:
        raise click.UsageError(str(e)) from e


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="DEBUG logging")
@click.option("--quiet", "-q", is_flag=True, help="Warnings only")
def main(verbose: bool, quiet: bool) -> None:
    """Numerical experiments on the randomized Gross-Pitaevskii hierarchy."""
    configure_logging(verbose, quiet)


@main.command()
@click.argument("experiment", type=click.Choice(EXPERIMENTS))
@click.option("--assert", "check", is_flag=True, help="Exit 3 when an acceptance check fails")
@_config_options
@click.pass_context
def run(ctx: click.Context, experiment: str, check: bool, config_file: str | None, assignments: tuple[str, ...], **flags: Any) -> None:
    """Run EXPERIMENT and write <output-dir>/<experiment>.csv plus .meta.json."""
    from .runner import run as run_experiment

    config = _effective_config(experiment, config_file, assignments, **flags)
    try:
        report = run_experiment(config, check=check)
    except AcceptanceError as e:
        click.echo(f"acceptance failed: {e}", err=True)
        ctx.exit(EXIT_ASSERT)
    except (GplabError, ValueError) as e:
        raise click.UsageError(str(e)) from e
    verdict = report.verdict or {}
    click.echo(f"{config.experiment}: {len(report.rows)} rows, passed={verdict.get('passed')}")


@main.command("config")
@click.option("--experiment", type=click.Choice(EXPERIMENTS), default=None)
@_config_options
def show_config(experiment: str | None, config_file: str | None, assignments: tuple[str, ...], **flags: Any) -> None:
    """Print the effective configuration as key=value lines."""
    click.echo(serialize(_effective_config(experiment, config_file, assignments, **flags)), nl=False)


if __name__ == "__main__":  # pragma: no cover
    main()
