import logging
import click
import numpy as np

from kl_emulator.cli.context import emulator_options, run_config, timed
from kl_emulator.dependencies import get_repository, get_test_points
from kl_emulator.repositories.artifact_repository import EMULATOR_FILE, TRAJECTORIES_FILE
from kl_emulator.services import emulator_service


logger = logging.getLogger(__name__)


@click.command("fit")
@emulator_options
@click.option("--test-points", "n_test_points", type=int, default=None,
              help="Covariance-surrogate targets added to the design.")
@click.pass_context
def fit(ctx, n_test_points, **emulator_flags):
    """Fit a KL emulator to the sampled trajectories."""
    run = run_config(ctx, n_test_points=n_test_points, **emulator_flags)
    repo = get_repository(run)
    with timed("fit") as outputs:
        data = repo.load(TRAJECTORIES_FILE, kind="trajectories")
        targets = None
        if run.pathway == "cov_surrogate":
            # the emulator is defined on the design plus the report's test points
            targets = np.vstack([data.coords, get_test_points(run)])
        emu = emulator_service.fit_emulator(data, run.emulator_config(), targets=targets, threads=run.threads)
        logger.info("Retained %d modes (eigenvalues %s)", emu.truncation, np.array2string(emu.basis.eigenvalues[:5], precision=4))

        outputs.append(
            repo.save(emu, EMULATOR_FILE, config=run.model_dump(mode="json"), inputs=[repo.path(TRAJECTORIES_FILE)])
        )
