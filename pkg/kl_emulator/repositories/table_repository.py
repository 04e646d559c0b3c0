"""Human-facing CSV/JSON exports: designs, seeds, trajectories, metric rows and plot data."""
import json
from pathlib import Path
from typing import List, Sequence
import numpy as np

from kl_emulator.exceptions import StorageError
from kl_emulator.repositories.files import PathLike, atomic_write_text, csv_text, read_csv, read_text
from kl_emulator.schemas.design import DesignOfExperiments, ParameterSpace, SeedRegistry
from kl_emulator.schemas.metrics import Histogram, MetricReport
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.schemas.validation import ValidationSummary

REPORT_COLUMNS = ["hist_int", "hellinger", "jsd", "ks_stat", "ks_reject"]
SUMMARY_COLUMNS = ["method", "M", "N", "hist_int", "hellinger", "jsd", "ks_reject_rate"]


def _coordinate_header(dims: int) -> List[str]:
    return [f"x{i}" for i in range(1, dims + 1)]


def write_design_csv(doe: DesignOfExperiments, path: PathLike) -> Path:
    return atomic_write_text(path, csv_text(doe.points, _coordinate_header(doe.space.dims)))


def read_design_csv(path: PathLike, space: ParameterSpace) -> DesignOfExperiments:
    header, rows = read_csv(path)
    if header != _coordinate_header(space.dims):
        raise StorageError(f"{path}: expected columns {_coordinate_header(space.dims)}, got {header}")
    return DesignOfExperiments(points=rows, space=space)


def write_seeds_json(seeds: SeedRegistry, path: PathLike) -> Path:
    return atomic_write_text(path, json.dumps(list(seeds.seeds)) + "\n")


def read_seeds_json(path: PathLike) -> SeedRegistry:
    try:
        seeds = json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise StorageError(f"{path} is not a JSON array of seeds: {e}") from e
    return SeedRegistry(seeds=tuple(int(s) for s in seeds))


def write_trajectories_csv(data: TrajectoryMatrix, path: PathLike) -> Path:
    """One row per design point: coordinates then one `seed_<s>` column per trajectory."""
    path = Path(path)
    header = _coordinate_header(data.dims) + [f"seed_{s}" for s in data.seeds]
    atomic_write_text(path, csv_text(np.hstack([data.coords, data.values]), header))
    sidecar = {
        "simulator": data.simulator,
        "bounds": [list(b) for b in data.space.bounds] if data.space is not None else None,
        "seeds": list(data.seeds),
    }
    atomic_write_text(path.with_suffix(".json"), json.dumps(sidecar, indent=2) + "\n")
    return path


def report_rows(reports: Sequence[MetricReport]) -> np.ndarray:
    return np.array(
        [
            list(r.point or ())
            + [r.hist_intersection, r.hellinger, r.js_divergence, r.ks_statistic, float(r.ks_reject)]
            for r in reports
        ]
    )


def write_report_csv(reports: Sequence[MetricReport], path: PathLike) -> Path:
    """Raw per-point metric rows for external plotting."""
    if not reports:
        return atomic_write_text(path, ",".join(REPORT_COLUMNS) + "\n")
    dims = len(reports[0].point or ())
    return atomic_write_text(path, csv_text(report_rows(reports), _coordinate_header(dims) + REPORT_COLUMNS))


def write_summary_table(rows: Sequence[tuple[str, int, int, ValidationSummary]], path: PathLike) -> Path:
    """One row per (method, M, N): mean metrics and KS rejection rate."""
    lines = [",".join(SUMMARY_COLUMNS)]
    for method, m, n, s in rows:
        lines.append(
            f"{method},{m},{n},{s.hist_intersection_mean:.6f},{s.hellinger_mean:.6f},"
            f"{s.js_divergence_mean:.6f},{s.ks_rejection_rate:.6f}"
        )
    return atomic_write_text(path, "\n".join(lines) + "\n")


def ecdf_steps(sample: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Sorted distinct values and the empirical CDF right after each."""
    values, counts = np.unique(np.asarray(sample, dtype=float), return_counts=True)
    return values, np.cumsum(counts) / counts.sum()


def cdf_pair_rows(point_index: int, predicted: Sequence[float], reference: Sequence[float]) -> np.ndarray:
    """Predicted and reference CDF step functions on the merged sample grid."""
    grid = np.unique(np.concatenate([np.asarray(predicted, float), np.asarray(reference, float)]))
    columns = [np.full(grid.shape, float(point_index)), grid]
    for sample in (predicted, reference):
        values, cdf = ecdf_steps(sample)
        positions = np.searchsorted(values, grid, side="right")
        columns.append(np.where(positions > 0, cdf[np.maximum(positions - 1, 0)], 0.0))
    return np.column_stack(columns)


def histogram_rows(point_index: int, predicted: Histogram, reference: Histogram) -> np.ndarray:
    """Shared-edge histogram masses, one row per bin."""
    return np.column_stack(
        [
            np.full(predicted.masses.shape, float(point_index)),
            predicted.edges[:-1],
            predicted.edges[1:],
            predicted.masses,
            reference.masses,
        ]
    )


def write_cdf_pairs(blocks: Sequence[np.ndarray], path: PathLike) -> Path:
    header = ["point", "value", "cdf_predicted", "cdf_reference"]
    if not blocks:
        return atomic_write_text(path, ",".join(header) + "\n")
    return atomic_write_text(path, csv_text(np.vstack(blocks), header))


def write_histograms(blocks: Sequence[np.ndarray], path: PathLike) -> Path:
    header = ["point", "left", "right", "mass_predicted", "mass_reference"]
    if not blocks:
        return atomic_write_text(path, ",".join(header) + "\n")
    return atomic_write_text(path, csv_text(np.vstack(blocks), header))
