import click

from kl_emulator.cli.context import run_config, timed
from kl_emulator.dependencies import get_fresh_seeds, get_repository, get_run_simulator, get_test_points
from kl_emulator.repositories import ArtifactRepository
from kl_emulator.schemas.design import SeedRegistry
from kl_emulator.services.report_service import ReportService


@click.command("report")
@click.option("--test-points", "n_test_points", type=int, default=None, help="Uniform test points.")
@click.option("--bins", type=int, default=None)
@click.option("--alpha", type=float, default=None, help="KS test level.")
@click.option("--fresh-seeds", is_flag=True, default=False,
              help="Reference samples from seeds disjoint from the training seeds.")
@click.option("--cdf-points", type=click.IntRange(min=0), default=5,
              help="Test points whose CDF pairs and histograms are exported.")
@click.option("--include", "include", multiple=True, type=click.Path(file_okay=False),
              help="Reported run directory whose rows join summary.csv (repeatable).")
@click.pass_context
def report(ctx, n_test_points, bins, alpha, fresh_seeds, cdf_points, include):
    """Score the emulator at uniform test points and emit plot-ready tables."""
    run = run_config(ctx, n_test_points=n_test_points, bins=bins, alpha=alpha)
    service = ReportService(get_repository(run))
    with timed("report") as outputs:
        emu, data = service.load_run()
        sim = get_run_simulator(run)
        training = SeedRegistry(seeds=data.seeds)
        seeds = get_fresh_seeds(training, len(training)) if fresh_seeds else training

        points = get_test_points(run)
        _, written = service.score(
            emu, sim, points, seeds, run.bins, run.alpha,
            threads=run.threads, config=run.model_dump(mode="json"),
        )
        outputs.extend(written)
        outputs.append(service.write_summary([ArtifactRepository(d) for d in include]))
        outputs.extend(service.export_distributions(emu, sim, points[:cdf_points], seeds, run.bins))
