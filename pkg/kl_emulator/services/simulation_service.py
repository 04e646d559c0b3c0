from concurrent.futures import ThreadPoolExecutor
import logging
from typing import Sequence
import numpy as np

from kl_emulator.exceptions import DomainError, SimulationError
from kl_emulator.schemas.design import DesignOfExperiments, SeedRegistry
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.simulators.base import StochasticSimulator


logger = logging.getLogger(__name__)


def evaluate(sim: StochasticSimulator, x: Sequence[float], seed: int) -> float:
    """One frozen-seed simulator output."""
    return sim.evaluate(x, seed)


def _trajectory_column(sim: StochasticSimulator, doe: DesignOfExperiments, seed_index: int, seed: int) -> np.ndarray:
    try:
        column = sim.evaluate_trajectory(doe.points, seed)
    except Exception:
        # fall back to point-by-point calls to locate the failing cell
        column = np.empty(doe.size)
        for j, x in enumerate(doe.points):
            try:
                column[j] = sim.evaluate(x, seed)
            except Exception as e:
                raise SimulationError(
                    f"simulator '{sim.identifier}' failed at design point {j}, seed index {seed_index} "
                    f"(seed {seed}): {e}",
                    point_index=j,
                    seed_index=seed_index,
                ) from e
    return column


def sample_trajectories(
    sim: StochasticSimulator,
    doe: DesignOfExperiments,
    seeds: SeedRegistry,
    threads: int = 1,
) -> TrajectoryMatrix:
    """M x N matrix of outputs, entry (j, k) = evaluate(x_j, seed_k)."""
    for j, x in enumerate(doe.points):
        if not sim.input_space.contains(x):
            raise DomainError(f"design point {j} {x.tolist()} lies outside the simulator input space")

    jobs = list(enumerate(seeds.seeds))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            columns = list(executor.map(lambda job: _trajectory_column(sim, doe, *job), jobs))
    else:
        columns = [_trajectory_column(sim, doe, k, seed) for k, seed in jobs]

    logger.info(
        "Sampled %d trajectories of '%s' on %d design points (%d calls)",
        len(seeds), sim.identifier, doe.size, doe.size * len(seeds),
    )
    return TrajectoryMatrix(
        values=np.column_stack(columns),
        coords=doe.points,
        seeds=seeds.seeds,
        simulator=sim.identifier,
        space=doe.space,
    )
