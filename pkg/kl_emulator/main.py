import json
import logging
import sys
import click
import numpy as np
from pydantic import ValidationError

from kl_emulator import __version__
from kl_emulator.config import settings
from kl_emulator.exceptions import (
    ConfigurationError,
    DataError,
    EmulatorError,
    StorageError,
)
from kl_emulator.cli.router import register_commands


# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


def classify(exc: BaseException) -> int:
    """Exit code of an exception escaping a command."""
    if isinstance(exc, (click.UsageError, click.Abort, ConfigurationError)):
        return EXIT_USAGE
    # covers NumericalError; LinAlgError derives from ValueError
    if isinstance(exc, (ArithmeticError, np.linalg.LinAlgError)):
        return EXIT_NUMERICAL
    if isinstance(exc, (DataError, StorageError, ValidationError)):
        return EXIT_DATA
    return EXIT_USAGE


def error_line(exc: BaseException) -> str:
    """One machine-parsable line: error=<type> exit=<code> reason="<message>"."""
    if isinstance(exc, click.ClickException):
        message = exc.format_message()
    elif isinstance(exc, ValidationError):
        message = "; ".join(err["msg"] for err in exc.errors())
    else:
        message = str(exc) or type(exc).__name__
    return f"error={type(exc).__name__} exit={classify(exc)} reason={json.dumps(' '.join(message.split()))}"


class EmulatorCLI(click.Group):
    """Click group that maps package exceptions onto the documented exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            return super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except (
            click.ClickException,
            click.Abort,
            EmulatorError,
            ValidationError,
            ArithmeticError,
            np.linalg.LinAlgError,
        ) as exc:
            logger.debug("Command failed", exc_info=True)
            click.echo(error_line(exc), err=True)
            sys.exit(classify(exc))


@click.group(cls=EmulatorCLI)
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="YAML or JSON run configuration.")
@click.option("--out", "output_dir", default=None,
              help="Output directory (default: $KLEMU_OUTPUT_DIR or 'runs').")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None,
              help="Base seed for the design, fold splits and test points.")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker thread cap.")
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.version_option(__version__, prog_name=settings.APP_NAME)
@click.pass_context
def cli(ctx, config_path, output_dir, seed, threads, log_level):
    """Karhunen-Loeve emulation of stochastic simulators."""
    if log_level:
        logging.getLogger().setLevel(log_level.upper())
    ctx.ensure_object(dict)
    ctx.obj.update(config_path=config_path, output_dir=output_dir, seed=seed, threads=threads)


register_commands(cli)


def main():
    cli(prog_name="klemu")


if __name__ == "__main__":
    main()
