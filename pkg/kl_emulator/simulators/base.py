from abc import ABC, abstractmethod
from typing import ClassVar, Sequence
import numpy as np
from scipy.special import ndtri

from kl_emulator.schemas.design import ParameterSpace

# smallest uniform draw fed to the inverse normal CDF
_U_FLOOR = 2.0 ** -54


def seed_stream(seed: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by the seed alone."""
    return np.random.Generator(np.random.Philox(key=int(seed)))


def seed_uniforms(seed: int, count: int) -> np.ndarray:
    """The first `count` uniforms of a seed's stream, in (0, 1)."""
    return np.maximum(seed_stream(seed).random(count), _U_FLOOR)


def seed_normals(seed: int, count: int) -> np.ndarray:
    """Standard normals by inverse CDF, one uniform per draw."""
    return ndtri(seed_uniforms(seed, count))


class StochasticSimulator(ABC):
    """
    Frozen-seed stochastic simulator.

    A seed fixes the internal randomness, so evaluate(x, s) is a deterministic
    trajectory in x and the same seed means the same trajectory at every input.
    """

    identifier: ClassVar[str]

    def __init__(self, input_space: ParameterSpace):
        self._input_space = input_space

    @property
    def input_space(self) -> ParameterSpace:
        return self._input_space

    def evaluate(self, x: Sequence[float], seed: int) -> float:
        x = self._input_space.require(x)
        return float(self._trajectory(x[None, :], int(seed))[0])

    def evaluate_trajectory(self, points: np.ndarray, seed: int) -> np.ndarray:
        """One frozen trajectory at many inputs, shape (n,)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        for x in points:
            self._input_space.require(x)
        return np.asarray(self._trajectory(points, int(seed)), dtype=float)

    def evaluate_seeds(self, x: Sequence[float], seeds: Sequence[int]) -> np.ndarray:
        """Output distribution sample at one input, one value per seed."""
        x = self._input_space.require(x)
        return np.array([self._trajectory(x[None, :], int(s))[0] for s in seeds])

    @abstractmethod
    def _trajectory(self, points: np.ndarray, seed: int) -> np.ndarray:
        """Vectorized trajectory over validated points of shape (n, d)."""
