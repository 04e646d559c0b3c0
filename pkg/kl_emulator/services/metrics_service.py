import logging
from typing import Optional, Sequence, Tuple
import numpy as np
from scipy.special import rel_entr

from kl_emulator.config import settings
from kl_emulator.exceptions import MetricError
from kl_emulator.schemas.metrics import Histogram, MetricReport


logger = logging.getLogger(__name__)


def _sample(values: Sequence[float], name: str) -> np.ndarray:
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size == 0:
        raise MetricError(f"{name} sample is empty")
    if not np.isfinite(values).all():
        raise MetricError(f"{name} sample contains non-finite values")
    return values


def shared_histogram(
    sample_a: Sequence[float],
    sample_b: Sequence[float],
    bins: int = settings.DEFAULT_BINS,
) -> Tuple[Histogram, Histogram]:
    """
    Unit-mass histograms of both samples on common equal-width edges spanning
    their joint range; the rightmost edge is inclusive.
    """
    a = _sample(sample_a, "first")
    b = _sample(sample_b, "second")
    if bins < 1:
        raise MetricError(f"bins must be positive, got {bins}")

    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    edges = np.linspace(lo, hi, bins + 1)
    # a range too narrow to split into `bins` distinct floats counts as one point
    if hi <= lo or (np.diff(edges) <= 0).any():
        edges = np.array([lo - 0.5, lo + 0.5])
        return Histogram(edges=edges, masses=np.ones(1)), Histogram(edges=edges, masses=np.ones(1))

    counts_a, _ = np.histogram(a, bins=edges)
    counts_b, _ = np.histogram(b, bins=edges)
    return (
        Histogram(edges=edges, masses=counts_a / a.size),
        Histogram(edges=edges, masses=counts_b / b.size),
    )


def _check_edges(p: Histogram, q: Histogram):
    if p.edges.shape != q.edges.shape or not np.array_equal(p.edges, q.edges):
        raise MetricError("histograms are not on the same bin edges")


def histogram_intersection(p: Histogram, q: Histogram) -> float:
    """sum_i min(p_i, q_i): 1 for equal histograms, 0 for disjoint supports."""
    _check_edges(p, q)
    return float(np.clip(np.minimum(p.masses, q.masses).sum(), 0.0, 1.0))


def hellinger(p: Histogram, q: Histogram) -> float:
    """||sqrt(p) - sqrt(q)||_2 / sqrt(2)."""
    _check_edges(p, q)
    distance = np.linalg.norm(np.sqrt(p.masses) - np.sqrt(q.masses)) / np.sqrt(2.0)
    return float(np.clip(distance, 0.0, 1.0))


def js_divergence(p: Histogram, q: Histogram) -> float:
    """Jensen-Shannon divergence in bits, so it lies in [0, 1]."""
    _check_edges(p, q)
    r = 0.5 * (p.masses + q.masses)
    # rel_entr(0, r) == 0 and r > 0 wherever p > 0
    divergence = 0.5 * (rel_entr(p.masses, r).sum() + rel_entr(q.masses, r).sum()) / np.log(2.0)
    return float(np.clip(divergence, 0.0, 1.0))


def ks_critical_constant(alpha: float) -> float:
    """Asymptotic c(alpha) = sqrt(-ln(alpha / 2) / 2)."""
    if not 0 < alpha < 1:
        raise MetricError(f"alpha must lie in (0, 1), got {alpha}")
    return float(np.sqrt(-np.log(alpha / 2.0) / 2.0))


def ks_two_sample(
    sample_a: Sequence[float],
    sample_b: Sequence[float],
    alpha: float = settings.DEFAULT_ALPHA,
) -> Tuple[float, bool]:
    """
    Exact sup |F_a - F_b| over the merged sample, and whether it exceeds
    c(alpha) * sqrt((n + m) / (n m)).
    """
    a = np.sort(_sample(sample_a, "first"))
    b = np.sort(_sample(sample_b, "second"))
    n, m = a.size, b.size
    merged = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, merged, side="right") / n
    cdf_b = np.searchsorted(b, merged, side="right") / m
    statistic = float(np.clip(np.abs(cdf_a - cdf_b).max(), 0.0, 1.0))
    threshold = ks_critical_constant(alpha) * np.sqrt((n + m) / (n * m))
    return statistic, bool(statistic > threshold)


def compare(
    predicted: Sequence[float],
    reference: Sequence[float],
    bins: int = settings.DEFAULT_BINS,
    alpha: float = settings.DEFAULT_ALPHA,
    point: Optional[Sequence[float]] = None,
) -> MetricReport:
    """All four distribution metrics of a predicted sample against a reference one."""
    p, q = shared_histogram(predicted, reference, bins)
    statistic, reject = ks_two_sample(predicted, reference, alpha)
    return MetricReport(
        hist_intersection=histogram_intersection(p, q),
        hellinger=hellinger(p, q),
        js_divergence=js_divergence(p, q),
        ks_statistic=statistic,
        ks_reject=reject,
        bins=bins,
        alpha=alpha,
        point=tuple(float(v) for v in point) if point is not None else None,
    )
