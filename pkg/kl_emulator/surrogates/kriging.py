# Ordinary Kriging with maximum-likelihood lengthscales

import logging
from typing import Any, Dict, Optional, Tuple
import numpy as np
from scipy import linalg
from scipy.optimize import minimize

from kl_emulator.config import settings
from kl_emulator.exceptions import FitError
from kl_emulator.schemas.surrogate import KernelSpec
from kl_emulator.surrogates.base import Surrogate
from kl_emulator.surrogates.kernels import correlation, scaled_distance


logger = logging.getLogger(__name__)

# lengthscale search box in the unit-scaled input space
LOG_THETA_BOUNDS = (np.log(1e-2), np.log(1e2))
FAILED_LIKELIHOOD = 1e10
INTERPOLATION_NUGGET = 1e-8


class KrigingSurrogate(Surrogate):
    """
    Ordinary Kriging: unknown constant trend estimated by GLS and a stationary
    correlation R(h) with per-dimension lengthscales.

    Lengthscales maximize the concentrated log-likelihood (sigma^2 profiled out)
    with multi-start Nelder-Mead over log(theta). The nugget starts small and
    grows tenfold on Cholesky failure up to `nugget_max`.
    """

    kind = "kriging"

    def __init__(
        self,
        family: str = settings.DEFAULT_KERNEL,
        starts: int = settings.KRIGING_STARTS,
        max_iter: int = settings.KRIGING_MAX_ITER,
        nugget_start: float = settings.NUGGET_START,
        nugget_max: float = settings.NUGGET_MAX,
    ):
        super().__init__()
        correlation(family, np.zeros(1))
        self.family = family
        self.starts = starts
        self.max_iter = max_iter
        self.nugget_start = nugget_start
        self.nugget_max = nugget_max

        # State containers
        self.theta: Optional[np.ndarray] = None
        self.nugget = nugget_start
        self.beta = 0.0
        self.gamma: Optional[np.ndarray] = None
        self.sigma2 = 1.0
        self.x_lower: Optional[np.ndarray] = None
        self.x_span: Optional[np.ndarray] = None
        self.y_mean = 0.0
        self.y_scale = 1.0

    @property
    def is_interpolating(self) -> bool:
        return self.nugget <= INTERPOLATION_NUGGET

    @property
    def kernel_spec(self) -> KernelSpec:
        """Fitted kernel in original input units."""
        self._require_fitted()
        return KernelSpec(
            family=self.family,
            lengthscales=tuple(float(t) for t in self.theta * self.x_span),
            variance=float(self.sigma2 * self.y_scale ** 2),
            nugget=float(self.nugget),
        )

    def _scale_inputs(self, points: np.ndarray) -> np.ndarray:
        return (points - self.x_lower) / self.x_span

    def _correlation_matrix(self, sq_diffs: np.ndarray, theta: np.ndarray, nugget: float) -> np.ndarray:
        h = np.sqrt(sq_diffs @ (1.0 / theta ** 2))
        return correlation(self.family, h) + nugget * np.eye(h.shape[0])

    @staticmethod
    def _gls(factor, y: np.ndarray) -> Tuple[float, np.ndarray, float]:
        """Trend, weights R^-1 (y - beta) and profiled sigma^2."""
        ones = np.ones_like(y)
        r_inv_y = linalg.cho_solve(factor, y)
        r_inv_1 = linalg.cho_solve(factor, ones)
        beta = float(ones @ r_inv_y / (ones @ r_inv_1))
        gamma = r_inv_y - beta * r_inv_1
        sigma2 = float((y - beta) @ gamma / y.shape[0])
        return beta, gamma, sigma2

    def _neg_log_likelihood(self, log_theta, sq_diffs, y, nugget) -> float:
        theta = np.exp(np.clip(log_theta, *LOG_THETA_BOUNDS))
        try:
            factor = linalg.cho_factor(self._correlation_matrix(sq_diffs, theta, nugget), lower=True)
        except linalg.LinAlgError:
            return FAILED_LIKELIHOOD
        _, _, sigma2 = self._gls(factor, y)
        if not sigma2 > 0:
            return FAILED_LIKELIHOOD
        n = y.shape[0]
        return 0.5 * n * np.log(sigma2) + np.log(np.diag(factor[0])).sum()

    def _optimize(self, sq_diffs: np.ndarray, y: np.ndarray, nugget: float) -> Tuple[np.ndarray, float]:
        d = sq_diffs.shape[-1]
        best_x, best_f = None, np.inf
        for theta0 in np.geomspace(0.05, 5.0, self.starts):
            result = minimize(
                self._neg_log_likelihood,
                x0=np.full(d, np.log(theta0)),
                args=(sq_diffs, y, nugget),
                method="Nelder-Mead",
                options={"maxiter": self.max_iter, "xatol": 1e-2, "fatol": 1e-4},
            )
            if result.fun < best_f:
                best_x, best_f = result.x, float(result.fun)
        return np.exp(np.clip(best_x, *LOG_THETA_BOUNDS)), best_f

    def fit(self, inputs, targets) -> "KrigingSurrogate":
        inputs, targets = self._prepare(inputs, targets)
        n, d = inputs.shape
        if n < 3 or np.unique(inputs, axis=0).shape[0] < n:
            raise FitError(f"Kriging needs at least 3 distinct inputs, got {n}")

        self.x_lower = inputs.min(axis=0)
        span = np.ptp(inputs, axis=0)
        self.x_span = np.where(span > 0, span, 1.0)
        scaled = (inputs - self.x_lower) / self.x_span
        y, self.y_mean, self.y_scale = self._standardize(targets)
        sq_diffs = (scaled[:, None, :] - scaled[None, :, :]) ** 2

        if np.ptp(targets) == 0:
            # the trend carries constant data exactly
            self.theta = np.ones(d)
            self.nugget = self.nugget_start
            self.beta, self.gamma, self.sigma2 = 0.0, np.zeros(n), 1.0
            self._inputs = inputs
            return self

        nugget = self.nugget_start
        while True:
            theta, nll = self._optimize(sq_diffs, y, nugget)
            matrix = self._correlation_matrix(sq_diffs, theta, nugget)
            if nll < FAILED_LIKELIHOOD:
                try:
                    factor = linalg.cho_factor(matrix, lower=True)
                    break
                except linalg.LinAlgError:
                    pass
            if nugget * 10 > self.nugget_max * (1 + 1e-9):
                raise FitError(
                    f"Kriging correlation matrix is ill-conditioned even with nugget {nugget:.1e} "
                    f"(condition number {np.linalg.cond(matrix):.3g})"
                )
            nugget *= 10
            logger.warning("Kriging factorization failed; escalating nugget to %.1e", nugget)

        self.theta = theta
        self.nugget = nugget
        self.beta, self.gamma, self.sigma2 = self._gls(factor, y)
        self._inputs = inputs
        return self

    def predict(self, points) -> np.ndarray:
        self._require_fitted()
        points = self._as_points(points)
        scaled_train = self._scale_inputs(self._inputs)
        h = scaled_distance(self._scale_inputs(points), scaled_train, self.theta)
        # the nugget sits on the diagonal the weights were solved against
        cross = correlation(self.family, h) + self.nugget * (h == 0.0)
        y = self.beta + cross @ self.gamma
        return self.y_mean + self.y_scale * y

    def to_dict(self) -> Dict[str, Any]:
        self._require_fitted()
        return {
            "kind": self.kind,
            "family": self.family,
            "inputs": self._inputs,
            "theta": self.theta,
            "nugget": self.nugget,
            "beta": self.beta,
            "gamma": self.gamma,
            "sigma2": self.sigma2,
            "x_lower": self.x_lower,
            "x_span": self.x_span,
            "y_mean": self.y_mean,
            "y_scale": self.y_scale,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "KrigingSurrogate":
        surrogate = cls(family=data["family"])
        surrogate._inputs = np.asarray(data["inputs"], dtype=float)
        surrogate.theta = np.asarray(data["theta"], dtype=float)
        surrogate.nugget = float(data["nugget"])
        surrogate.beta = float(data["beta"])
        surrogate.gamma = np.asarray(data["gamma"], dtype=float)
        surrogate.sigma2 = float(data["sigma2"])
        surrogate.x_lower = np.asarray(data["x_lower"], dtype=float)
        surrogate.x_span = np.asarray(data["x_span"], dtype=float)
        surrogate.y_mean = float(data["y_mean"])
        surrogate.y_scale = float(data["y_scale"])
        return surrogate
