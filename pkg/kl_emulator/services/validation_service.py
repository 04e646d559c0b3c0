from concurrent.futures import ThreadPoolExecutor
import logging
import math
from typing import List, Optional, Sequence, Tuple
import numpy as np

from kl_emulator.exceptions import ConfigurationError, DataError, EmulatorError
from kl_emulator.models.emulator import KLEmulator
from kl_emulator.schemas.design import SeedRegistry
from kl_emulator.schemas.metrics import MetricReport
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.schemas.validation import (
    EmulatorConfig,
    ValidationPlan,
    ValidationRecord,
    ValidationResult,
    ValidationSummary,
)
from kl_emulator.services import emulator_service, metrics_service
from kl_emulator.simulators.base import StochasticSimulator


logger = logging.getLogger(__name__)

METRIC_FIELDS = ("hist_intersection", "hellinger", "js_divergence", "ks_statistic")


def _surrogate_minimum(kind: str, dims: int, degree) -> int:
    """Smallest training set a scalar surrogate of `kind` accepts in `dims` dimensions."""
    if kind == "rbf_linear":
        return dims + 1
    if kind == "pce":
        if degree == "auto":
            return dims + 2
        return math.comb(int(degree) + dims, dims)
    return 3


def minimum_training_size(config: EmulatorConfig, dims: int) -> int:
    """Fewest design points an emulator of this configuration can be fitted on."""
    size = max(2, _surrogate_minimum(config.resolved_mean_kind, dims, config.pce_degree))
    if config.pathway == "eigvec_interp":
        return max(size, _surrogate_minimum(config.surrogate_kind, dims, config.pce_degree))
    # the covariance surrogate trains on all M^2 ordered pairs in 2d dimensions
    pairs = _surrogate_minimum(config.cov_surrogate_kind, 2 * dims, config.pce_degree)
    return max(size, math.isqrt(pairs - 1) + 1)


def fold_partition(n_points: int, k: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Shuffled indices split into k folds; the first n_points mod k folds hold one extra point."""
    return np.array_split(rng.permutation(n_points), k)


def _check_plan(data: TrajectoryMatrix, plan: ValidationPlan):
    if plan.k > data.n_points:
        raise ConfigurationError(f"k={plan.k} folds need at least {plan.k} design points, got {data.n_points}")
    training = data.n_points - math.ceil(data.n_points / plan.k)
    required = minimum_training_size(plan.emulator, data.dims)
    if training < required:
        raise ConfigurationError(
            f"folds leave {training} training points but {plan.emulator.label} needs at least {required}"
        )


def _validate_fold(
    data: TrajectoryMatrix,
    plan: ValidationPlan,
    repetition: int,
    fold: int,
    held_out: np.ndarray,
    training: np.ndarray,
) -> List[ValidationRecord]:
    targets = None
    if plan.emulator.pathway == "cov_surrogate":
        targets = data.coords[np.concatenate([training, held_out])]
    try:
        emu = emulator_service.fit_emulator(data.subset(training), plan.emulator, targets=targets)
    except EmulatorError as e:
        raise type(e)(f"repetition {repetition}, fold {fold}: {e}") from e

    records = []
    for j in held_out:
        predicted = emulator_service.predict_samples(emu, data.coords[j])
        report = metrics_service.compare(predicted, data.values[j], plan.bins, plan.alpha, point=data.coords[j])
        records.append(ValidationRecord(repetition=repetition, fold=fold, point_index=int(j), report=report))
    return records


def k_fold_validate(
    data: TrajectoryMatrix,
    plan: ValidationPlan,
    rng_seed: int,
    threads: int = 1,
) -> ValidationResult:
    """
    Repeated k-fold cross-validation: every design point is held out once per
    repetition and its simulated column is compared with the emulator fitted
    on the other folds.
    """
    _check_plan(data, plan)
    rng = np.random.default_rng(rng_seed)
    jobs: List[Tuple[int, int, np.ndarray, np.ndarray]] = []
    for repetition in range(plan.repetitions):
        folds = fold_partition(data.n_points, plan.k, rng)
        for f, held_out in enumerate(folds):
            training = np.sort(np.concatenate([folds[g] for g in range(plan.k) if g != f]))
            jobs.append((repetition, f, np.sort(held_out), training))

    run = lambda job: _validate_fold(data, plan, *job)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            batches = list(executor.map(run, jobs))
    else:
        batches = [run(job) for job in jobs]
    records = [record for batch in batches for record in batch]

    summary = summarize(
        [r.report for r in records],
        plan.emulator.label,
        repetitions=plan.repetitions,
        k=plan.k,
        bins=plan.bins,
        alpha=plan.alpha,
    )
    logger.info(
        "k-fold validation of %s: k=%d, %d repetitions, %d fits, mean hist_int %.4f, KS rejection %.3f",
        plan.emulator.label, plan.k, plan.repetitions, len(jobs),
        summary.hist_intersection_mean, summary.ks_rejection_rate,
    )
    return ValidationResult(summary=summary, records=records)


def test_point_evaluate(
    emu: KLEmulator,
    sim: StochasticSimulator,
    test_points,
    seeds: SeedRegistry,
    bins: int,
    alpha: float,
    threads: int = 1,
) -> List[MetricReport]:
    """One report per test point: emulated sample vs. simulator sample on `seeds`."""
    points = np.asarray(test_points, dtype=float)
    if points.size == 0:
        return []
    points = np.atleast_2d(points)

    def evaluate_point(job):
        a, x = job
        try:
            reference = sim.evaluate_seeds(x, seeds.seeds)
            predicted = emulator_service.predict_samples(emu, x)
        except EmulatorError as e:
            raise type(e)(f"test point {a}: {e}") from e
        except Exception as e:
            raise DataError(f"test point {a}: simulator '{sim.identifier}' failed: {e}") from e
        return metrics_service.compare(predicted, reference, bins, alpha, point=x)

    jobs = list(enumerate(points))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(evaluate_point, jobs))
    return [evaluate_point(job) for job in jobs]


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(variance)


def summarize(
    reports: Sequence[MetricReport],
    method: str,
    repetitions: int = 1,
    k: Optional[int] = None,
    bins: Optional[int] = None,
    alpha: Optional[float] = None,
) -> ValidationSummary:
    """Mean and population std of every metric, plus the KS rejection rate."""
    if not reports:
        raise DataError("no metric reports to summarize")
    fields = {}
    for name in METRIC_FIELDS:
        mean, std = _mean_std([getattr(r, name) for r in reports])
        # fsum keeps the mean inside the metric range up to a final rounding
        fields[f"{name}_mean"] = min(max(mean, 0.0), 1.0)
        fields[f"{name}_std"] = std
    return ValidationSummary(
        method=method,
        n_reports=len(reports),
        repetitions=repetitions,
        k=k,
        bins=bins if bins is not None else reports[0].bins,
        alpha=alpha if alpha is not None else reports[0].alpha,
        ks_rejection_rate=sum(r.ks_reject for r in reports) / len(reports),
        **fields,
    )
