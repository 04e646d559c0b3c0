import click

from kl_emulator.cli.context import run_config, timed
from kl_emulator.dependencies import get_repository, get_space
from kl_emulator.exceptions import DataError
from kl_emulator.repositories import table_repository
from kl_emulator.repositories.artifact_repository import DESIGN_FILE
from kl_emulator.services import design_service
from kl_emulator.simulators import SIMULATORS


@click.command("doe")
@click.option("--m", "m", type=int, default=None, help="Number of design points.")
@click.option("--simulator", type=click.Choice(sorted(SIMULATORS)), default=None)
@click.pass_context
def doe(ctx, m, simulator):
    """Draw a Latin hypercube design of experiments."""
    run = run_config(ctx, m=m, simulator=simulator)
    with timed("doe") as outputs:
        design = design_service.lhs_sample(get_space(run), run.m, run.doe_seed)
        violations = design_service.validate_design(design)
        if violations:
            raise DataError("; ".join(violations))

        repo = get_repository(run)
        outputs.append(repo.save(design, DESIGN_FILE, config=run.model_dump(mode="json")))
        outputs.append(table_repository.write_design_csv(design, repo.path("design.csv")))
