import numpy as np
import pytest

from kl_emulator.schemas.design import ParameterSpace, SeedRegistry
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.services import design_service, simulation_service
from kl_emulator.simulators import GaussianSineProcess, ToyProcess3D


UNIT_SQUARE = ParameterSpace.cube(0.0, 1.0, 2)


def random_trajectories(m: int, n: int, dims: int = 2, seed: int = 0) -> TrajectoryMatrix:
    """Gaussian trajectory values on a unit-cube Latin hypercube."""
    space = ParameterSpace.cube(0.0, 1.0, dims)
    design = design_service.lhs_sample(space, m, rng_seed=seed)
    rng = np.random.default_rng(seed + 1)
    return TrajectoryMatrix(
        values=rng.normal(size=(m, n)),
        coords=design.points,
        seeds=tuple(range(1, n + 1)),
        space=space,
    )


@pytest.fixture
def toy() -> ToyProcess3D:
    return ToyProcess3D()


@pytest.fixture
def gaussian_sine() -> GaussianSineProcess:
    return GaussianSineProcess()


@pytest.fixture
def toy_design(toy):
    """12-point Latin hypercube on [0, 2]^3."""
    return design_service.lhs_sample(toy.input_space, 12, rng_seed=42)


@pytest.fixture
def toy_seeds() -> SeedRegistry:
    return SeedRegistry.consecutive(20)


@pytest.fixture
def toy_data(toy, toy_design, toy_seeds) -> TrajectoryMatrix:
    return simulation_service.sample_trajectories(toy, toy_design, toy_seeds)


@pytest.fixture
def random_data() -> TrajectoryMatrix:
    return random_trajectories(8, 15)


@pytest.fixture
def spd_matrix() -> np.ndarray:
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6))
    return a @ a.T + 0.1 * np.eye(6)
