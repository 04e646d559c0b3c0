from typing import Any, Dict
import numpy as np
from scipy.interpolate import RBFInterpolator

from kl_emulator.exceptions import FitError
from kl_emulator.surrogates.base import Surrogate


class RBFLinearSurrogate(Surrogate):
    """
    Exact scattered-data interpolator s(x) = sum_j w_j ||x - x_j|| + c0 + c.x

    with the side conditions P^T w = 0 closing the augmented system. Built on
    scipy's RBFInterpolator (linear kernel, degree-1 tail, no smoothing).
    """

    kind = "rbf_linear"

    def __init__(self):
        super().__init__()
        self._interpolator: RBFInterpolator | None = None
        self._targets: np.ndarray | None = None
        self.y_mean = 0.0
        self.y_scale = 1.0

    @property
    def is_interpolating(self) -> bool:
        return True

    def _build(self, inputs: np.ndarray, y: np.ndarray):
        n, d = inputs.shape
        if np.unique(inputs, axis=0).shape[0] < n:
            raise FitError(f"singular RBF system for {n} points in {d} dims: duplicated inputs")
        try:
            self._interpolator = RBFInterpolator(inputs, y, kernel="linear", degree=1, smoothing=0.0)
        except (ValueError, np.linalg.LinAlgError) as e:
            raise FitError(
                f"singular RBF system for {n} points in {d} dims ({e}); "
                "check for affinely degenerate inputs"
            ) from e
        self._inputs = inputs
        self._targets = y

    def fit(self, inputs, targets) -> "RBFLinearSurrogate":
        inputs, targets = self._prepare(inputs, targets)
        y, self.y_mean, self.y_scale = self._standardize(targets)
        self._build(inputs, y)
        return self

    def predict(self, points) -> np.ndarray:
        self._require_fitted()
        points = self._as_points(points)
        return self.y_mean + self.y_scale * self._interpolator(points)

    def to_dict(self) -> Dict[str, Any]:
        self._require_fitted()
        return {
            "kind": self.kind,
            "inputs": self._inputs,
            "targets": self._targets,
            "y_mean": self.y_mean,
            "y_scale": self.y_scale,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RBFLinearSurrogate":
        # the solve is deterministic, so rebuilding from the stored data predicts identically
        surrogate = cls()
        surrogate.y_mean = float(data["y_mean"])
        surrogate.y_scale = float(data["y_scale"])
        surrogate._build(np.asarray(data["inputs"], dtype=float), np.asarray(data["targets"], dtype=float))
        return surrogate
