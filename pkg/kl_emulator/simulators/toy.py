from typing import Sequence, Tuple
import numpy as np
from scipy.special import ndtri

from kl_emulator.schemas.design import ParameterSpace
from kl_emulator.simulators.base import StochasticSimulator, seed_normals, seed_uniforms

TOY_SPACE = ParameterSpace.cube(0.0, 2.0, 3)


class ToyProcess3D(StochasticSimulator):
    """
    H(x, w) = 100 * w1 * (exp(x1 * w2) / 10 + x2 * x3 * w3) on [0, 2]^3

    with w1 ~ N(0, 1), w2 ~ U[1, 2], w3 ~ U[0, 1]. The three variables come
    from the first three uniforms of the seed's Philox stream; w1 by inverse CDF.
    """

    identifier = "toy3d"

    def __init__(self):
        super().__init__(TOY_SPACE)

    @staticmethod
    def omega(seed: int) -> Tuple[float, float, float]:
        u = seed_uniforms(seed, 3)
        return float(ndtri(u[0])), 1.0 + float(u[1]), float(u[2])

    @staticmethod
    def formula(points: np.ndarray, omega: Tuple[float, float, float]) -> np.ndarray:
        w1, w2, w3 = omega
        points = np.atleast_2d(points)
        return 100.0 * w1 * (0.1 * np.exp(points[:, 0] * w2) + points[:, 1] * points[:, 2] * w3)

    def _trajectory(self, points: np.ndarray, seed: int) -> np.ndarray:
        return self.formula(points, self.omega(seed))


def _exp_uniform_mgf(t: float) -> float:
    """E[exp(t * U)] for U ~ U[1, 2]."""
    if abs(t) < 1e-8:
        return 1.0 + 1.5 * t + 7.0 * t * t / 6.0
    return float(np.exp(t) * np.expm1(t) / t)


def toy_covariance_oracle(x: Sequence[float], y: Sequence[float]) -> float:
    """Closed-form E[H(x, w) H(y, w)] of ToyProcess3D."""
    x = TOY_SPACE.require(x)
    y = TOY_SPACE.require(y)
    ax = x[1] * x[2]
    ay = y[1] * y[2]
    return 1e4 * (
        0.01 * _exp_uniform_mgf(x[0] + y[0])
        + 0.05 * (ax * _exp_uniform_mgf(y[0]) + ay * _exp_uniform_mgf(x[0]))
        + ax * ay / 3.0
    )


class GaussianSineProcess(StochasticSimulator):
    """
    Exactly Gaussian toy: H(x, w) = sum_k z_k / k * sin(k * pi * s(x)), k = 1..3,

    s(x) the coordinate mean on [0, 1]^d and z_k independent N(0, 1) per seed.
    """

    identifier = "gaussian_sine"
    n_modes = 3

    def __init__(self, dims: int = 2):
        super().__init__(ParameterSpace.cube(0.0, 1.0, dims))

    def _modes(self, points: np.ndarray) -> np.ndarray:
        s = np.atleast_2d(points).mean(axis=1)
        k = np.arange(1, self.n_modes + 1)
        return np.sin(np.pi * np.outer(s, k)) / k

    def _trajectory(self, points: np.ndarray, seed: int) -> np.ndarray:
        return self._modes(points) @ seed_normals(seed, self.n_modes)

    def variance(self, x: Sequence[float]) -> float:
        x = self.input_space.require(x)
        return float((self._modes(x[None, :]) ** 2).sum())

    def covariance(self, x: Sequence[float], y: Sequence[float]) -> float:
        x = self.input_space.require(x)
        y = self.input_space.require(y)
        return float((self._modes(x[None, :]) * self._modes(y[None, :])).sum())
