"""Stationary correlation functions R(h) with anisotropic scaled distance h."""
from typing import Callable, Dict, Sequence
import numpy as np
from scipy.spatial.distance import cdist

from kl_emulator.schemas.surrogate import KernelSpec

SQRT3 = np.sqrt(3.0)
SQRT5 = np.sqrt(5.0)


def _gaussian(h: np.ndarray) -> np.ndarray:
    return np.exp(-h * h)


def _exponential(h: np.ndarray) -> np.ndarray:
    return np.exp(-h)


def _matern32(h: np.ndarray) -> np.ndarray:
    return (1.0 + SQRT3 * h) * np.exp(-SQRT3 * h)


def _matern52(h: np.ndarray) -> np.ndarray:
    return (1.0 + SQRT5 * h + 5.0 * h * h / 3.0) * np.exp(-SQRT5 * h)


CORRELATIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "gaussian": _gaussian,
    "exponential": _exponential,
    "matern32": _matern32,
    "matern52": _matern52,
}


def correlation(family: str, h: np.ndarray) -> np.ndarray:
    if family not in CORRELATIONS:
        raise ValueError(f"Unknown kernel family: '{family}'. Available: {list(CORRELATIONS)}")
    return CORRELATIONS[family](np.asarray(h, dtype=float))


def scaled_distance(x: np.ndarray, y: np.ndarray, lengthscales: Sequence[float]) -> np.ndarray:
    """h[a, b] = sqrt(sum_i ((x[a, i] - y[b, i]) / theta_i)^2)."""
    theta = np.asarray(lengthscales, dtype=float)
    return cdist(np.atleast_2d(x) / theta, np.atleast_2d(y) / theta)


def kernel_eval(spec: KernelSpec, x: Sequence[float], y: Sequence[float]) -> float:
    """Correlation k(x, y) = R(h)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape or x.size != len(spec.lengthscales):
        raise ValueError(
            f"kernel with {len(spec.lengthscales)} lengthscales cannot compare points of sizes {x.size} and {y.size}"
        )
    h = scaled_distance(x, y, spec.lengthscales)
    return float(correlation(spec.family, h)[0, 0])


def gram_matrix(spec: KernelSpec, points: np.ndarray) -> np.ndarray:
    """sigma^2 * R(h) + nugget * I over a point set."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    gram = spec.variance * correlation(spec.family, scaled_distance(points, points, spec.lengthscales))
    return gram + spec.nugget * np.eye(points.shape[0])
