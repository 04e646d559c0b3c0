import click
import numpy as np

from kl_emulator.cli.context import run_config, timed
from kl_emulator.dependencies import get_repository, get_test_points
from kl_emulator.exceptions import DataError
from kl_emulator.repositories.artifact_repository import EMULATOR_FILE, PREDICTIONS_FILE
from kl_emulator.repositories.files import read_csv
from kl_emulator.services import emulator_service


def _parse_point(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as e:
        raise click.BadParameter(f"'{text}' is not a comma-separated list of numbers") from e


@click.command("predict")
@click.option("--point", "points", multiple=True, help="Query point as 'x1,x2,...'; repeatable.")
@click.option("--points-file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="CSV with an x1..xd header.")
@click.pass_context
def predict(ctx, points, points_file):
    """Emulated output samples at query points (default: the test points)."""
    run = run_config(ctx)
    repo = get_repository(run)
    with timed("predict") as outputs:
        emu = repo.load(EMULATOR_FILE, kind="emulator")
        if points:
            parsed = [_parse_point(p) for p in points]
            if len({len(p) for p in parsed}) != 1:
                raise DataError("query points have different dimensions")
            query = np.array(parsed)
        elif points_file:
            _, query = read_csv(points_file)
        else:
            query = get_test_points(run)

        samples = emulator_service.predict_ensemble(emu, query)
        outputs.append(
            repo.save(
                {"points": query, "samples": samples},
                PREDICTIONS_FILE,
                config=run.model_dump(mode="json"),
                inputs=[repo.path(EMULATOR_FILE)],
            )
        )
