from contextlib import contextmanager
import logging
import time
from typing import Any, Iterator, List

import click

from kl_emulator.dependencies import resolve_run_config, seed_overrides
from kl_emulator.schemas.run import RunConfig


logger = logging.getLogger(__name__)


def run_config(ctx: click.Context, **overrides: Any) -> RunConfig:
    """RunConfig for a command: group flags and command flags over the config file."""
    obj = ctx.obj or {}
    values = {
        **seed_overrides(obj.get("seed")),
        "output_dir": obj.get("output_dir"),
        "threads": obj.get("threads"),
        **overrides,
    }
    return resolve_run_config(obj.get("config_path"), **values)


@contextmanager
def timed(command: str) -> Iterator[List[str]]:
    """Log one line with the command's wall time and the files it wrote."""
    outputs: List[str] = []
    start = time.perf_counter()
    yield outputs
    logger.info(
        "%s finished in %.3fs, wrote %s",
        command, time.perf_counter() - start, ", ".join(str(p) for p in outputs) or "nothing",
    )


def emulator_options(command):
    """Flags shared by the commands that fit emulators."""
    options = [
        click.option("--pathway", type=click.Choice(["eigvec_interp", "cov_surrogate"]), default=None),
        click.option("--surrogate", "surrogate_kind", type=click.Choice(["rbf_linear", "kriging"]), default=None,
                     help="Eigenvector and mean surrogate."),
        click.option("--kernel", type=click.Choice(["gaussian", "exponential", "matern32", "matern52"]),
                     default=None),
        click.option("--pce-degree", default=None, help="Total PCE degree or 'auto'."),
        click.option("--cov-surrogate", "cov_surrogate_kind", type=click.Choice(["pce", "kriging", "rbf_linear"]),
                     default=None),
        click.option("--truncation-energy", type=float, default=None),
    ]
    for option in reversed(options):
        command = option(command)
    return command
