import logging
from typing import List
import numpy as np
from scipy.stats import qmc

from kl_emulator.exceptions import ConfigurationError
from kl_emulator.schemas.design import DesignOfExperiments, ParameterSpace


logger = logging.getLogger(__name__)


def lhs_sample(space: ParameterSpace, m: int, rng_seed: int) -> DesignOfExperiments:
    """
    Plain Latin hypercube design.

    Each axis is cut into m equal strata; a seeded permutation assigns strata to
    points and a uniform offset places each point inside its stratum.
    """
    if m < 1:
        raise ConfigurationError(f"a Latin hypercube needs m >= 1 points, got {m}")

    lower, upper = space.lower, space.upper
    if (upper <= lower).any():
        raise ConfigurationError("degenerate parameter bounds")

    sampler = qmc.LatinHypercube(d=space.dims, scramble=True, seed=rng_seed)
    points = qmc.scale(sampler.random(n=m), lower, upper)
    # keep float rounding from pushing a point onto the next stratum edge
    points = np.minimum(points, np.nextafter(upper, lower))
    return DesignOfExperiments(points=points, space=space)


def stratum_indices(doe: DesignOfExperiments) -> np.ndarray:
    """Per-axis stratum index of every point, shape (M, d)."""
    m = doe.size
    width = (doe.space.upper - doe.space.lower) / m
    idx = np.floor((doe.points - doe.space.lower) / width).astype(int)
    return np.clip(idx, 0, m - 1)


def validate_design(doe: DesignOfExperiments) -> List[str]:
    """Human-readable invariant violations; empty when the design is valid."""
    violations: List[str] = []

    for k, point in enumerate(doe.points):
        for dim in doe.space.outside_dims(point):
            violations.append(f"point {k} outside bounds in dim {dim}")

    order = np.lexsort(doe.points.T[::-1])
    for a, b in zip(order[:-1], order[1:]):
        if np.array_equal(doe.points[a], doe.points[b]):
            i, j = sorted((int(a), int(b)))
            violations.append(f"duplicate point at indices {i},{j}")

    if violations:
        logger.debug("design has %d violations", len(violations))
    return violations


def uniform_points(space: ParameterSpace, n: int, rng_seed: int) -> np.ndarray:
    """i.i.d. uniform test points over the box, shape (n, d)."""
    rng = np.random.default_rng(rng_seed)
    return space.lower + rng.random((n, space.dims)) * (space.upper - space.lower)
