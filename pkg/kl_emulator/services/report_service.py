import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple
import numpy as np

from kl_emulator.models.emulator import KLEmulator
from kl_emulator.repositories import ArtifactRepository, table_repository
from kl_emulator.repositories.artifact_repository import (
    EMULATOR_FILE,
    REPORT_FILE,
    TRAJECTORIES_FILE,
    VALIDATION_FILE,
)
from kl_emulator.schemas.design import SeedRegistry
from kl_emulator.schemas.metrics import MetricReport
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.schemas.validation import ValidationSummary
from kl_emulator.services import emulator_service, metrics_service, validation_service
from kl_emulator.simulators import StochasticSimulator


logger = logging.getLogger(__name__)

REPORT_CSV = "report.csv"
SUMMARY_CSV = "summary.csv"
CDF_PAIRS_CSV = "cdf_pairs.csv"
HISTOGRAMS_CSV = "histograms.csv"

# (method, M, N, summary)
SummaryRow = Tuple[str, int, int, ValidationSummary]


class ReportService:
    """Scores the emulator of one run directory and writes its report tables."""

    def __init__(self, repository: ArtifactRepository):
        self.repository = repository

    def load_run(self) -> Tuple[KLEmulator, TrajectoryMatrix]:
        emu = self.repository.load(EMULATOR_FILE, kind="emulator")
        data = self.repository.load(TRAJECTORIES_FILE, kind="trajectories")
        return emu, data

    def score(
        self,
        emu: KLEmulator,
        sim: StochasticSimulator,
        points: np.ndarray,
        seeds: SeedRegistry,
        bins: int,
        alpha: float,
        threads: int = 1,
        config: Optional[Dict[str, Any]] = None,
    ) -> Tuple[List[MetricReport], List[Path]]:
        """Metric reports at the test points, saved as report.json and report.csv."""
        reports = validation_service.test_point_evaluate(emu, sim, points, seeds, bins, alpha, threads=threads)
        inputs = [self.repository.path(EMULATOR_FILE), self.repository.path(TRAJECTORIES_FILE)]
        written = [
            self.repository.save(reports, REPORT_FILE, config=config, inputs=inputs),
            table_repository.write_report_csv(reports, self.repository.path(REPORT_CSV)),
        ]
        return reports, written

    def summary_rows(self) -> List[SummaryRow]:
        """
        Rows of this run read back from its saved artifacts: the test-point
        summary, then the k-fold summary when the run was validated.
        """
        emu, data = self.load_run()
        reports = self.repository.load(REPORT_FILE, kind="metric_report")
        label = emu.config.label
        rows: List[SummaryRow] = [(label, data.n_points, data.n_seeds, validation_service.summarize(reports, label))]
        if self.repository.exists(VALIDATION_FILE):
            validation = self.repository.load(VALIDATION_FILE, kind="validation_summary")
            rows.append((f"kfold:{validation.summary.method}", data.n_points, data.n_seeds, validation.summary))
        return rows

    def write_summary(self, others: Sequence[ArtifactRepository] = ()) -> Path:
        """summary.csv with one row per (method, M, N) over this run and `others`."""
        rows = self.summary_rows()
        for repository in others:
            rows.extend(ReportService(repository).summary_rows())
        logger.info("Summary table holds %d rows from %d runs", len(rows), 1 + len(others))
        return table_repository.write_summary_table(rows, self.repository.path(SUMMARY_CSV))

    def export_distributions(
        self,
        emu: KLEmulator,
        sim: StochasticSimulator,
        points: np.ndarray,
        seeds: SeedRegistry,
        bins: int,
    ) -> List[Path]:
        """Plot-ready CDF pairs and shared-edge histograms at each point."""
        cdf_blocks, histogram_blocks = [], []
        for a, x in enumerate(points):
            predicted = emulator_service.predict_samples(emu, x)
            reference = sim.evaluate_seeds(x, seeds.seeds)
            cdf_blocks.append(table_repository.cdf_pair_rows(a, predicted, reference))
            p, q = metrics_service.shared_histogram(predicted, reference, bins)
            histogram_blocks.append(table_repository.histogram_rows(a, p, q))
        return [
            table_repository.write_cdf_pairs(cdf_blocks, self.repository.path(CDF_PAIRS_CSV)),
            table_repository.write_histograms(histogram_blocks, self.repository.path(HISTOGRAMS_CSV)),
        ]
