import click

from kl_emulator.cli.context import emulator_options, run_config, timed
from kl_emulator.dependencies import get_repository
from kl_emulator.repositories import table_repository
from kl_emulator.repositories.artifact_repository import TRAJECTORIES_FILE, VALIDATION_FILE
from kl_emulator.services import validation_service


@click.command("validate")
@emulator_options
@click.option("--k", "k", type=int, default=None, help="Number of folds.")
@click.option("--repetitions", type=int, default=None, help="Independent fold partitions.")
@click.option("--bins", type=int, default=None)
@click.option("--alpha", type=float, default=None, help="KS test level.")
@click.pass_context
def validate(ctx, k, repetitions, bins, alpha, **emulator_flags):
    """Repeated k-fold cross-validation of the emulator configuration."""
    run = run_config(ctx, k=k, repetitions=repetitions, bins=bins, alpha=alpha, **emulator_flags)
    repo = get_repository(run)
    with timed("validate") as outputs:
        data = repo.load(TRAJECTORIES_FILE, kind="trajectories")
        result = validation_service.k_fold_validate(data, run.validation_plan(), run.split_seed, threads=run.threads)

        outputs.append(
            repo.save(result, VALIDATION_FILE, config=run.model_dump(mode="json"), inputs=[repo.path(TRAJECTORIES_FILE)])
        )
        outputs.append(
            table_repository.write_report_csv([r.report for r in result.records], repo.path("validation_records.csv"))
        )
