import click

from kl_emulator.cli.context import run_config, timed
from kl_emulator.dependencies import get_repository, get_run_simulator, get_seeds
from kl_emulator.repositories import table_repository
from kl_emulator.repositories.artifact_repository import DESIGN_FILE, TRAJECTORIES_FILE
from kl_emulator.services import simulation_service


@click.command("simulate")
@click.option("--n", "n", type=int, default=None, help="Number of frozen-seed trajectories.")
@click.option("--seed-start", type=click.IntRange(min=0), default=None, help="First trajectory seed.")
@click.pass_context
def simulate(ctx, n, seed_start):
    """Evaluate the simulator on the design for N consecutive seeds."""
    run = run_config(ctx, n=n, seed_start=seed_start)
    repo = get_repository(run)
    with timed("simulate") as outputs:
        design = repo.load(DESIGN_FILE, kind="design")
        seeds = get_seeds(run)
        data = simulation_service.sample_trajectories(get_run_simulator(run), design, seeds, threads=run.threads)

        outputs.append(
            repo.save(data, TRAJECTORIES_FILE, config=run.model_dump(mode="json"), inputs=[repo.path(DESIGN_FILE)])
        )
        outputs.append(table_repository.write_seeds_json(seeds, repo.path("seeds.json")))
        outputs.append(table_repository.write_trajectories_csv(data, repo.path("trajectories.csv")))
