from abc import ABC, abstractmethod
from typing import Any, ClassVar, Dict, Sequence, Tuple
import numpy as np

from kl_emulator.exceptions import FitError


class Surrogate(ABC):
    """
    Deterministic scalar surrogate of a function of the input coordinates.

    fit() returns the fitted instance; predict() accepts one point or an
    (n, d) array and always returns an (n,) array.
    """

    kind: ClassVar[str]

    def __init__(self):
        self._inputs: np.ndarray | None = None

    @property
    def is_fitted(self) -> bool:
        return self._inputs is not None

    @property
    def is_interpolating(self) -> bool:
        return False

    @property
    def dims(self) -> int:
        self._require_fitted()
        return self._inputs.shape[1]

    @abstractmethod
    def fit(self, inputs: Sequence[Sequence[float]], targets: Sequence[float]) -> "Surrogate":
        """Fit to training inputs (n, d) and scalar targets (n,)."""

    @abstractmethod
    def predict(self, points: Sequence[float] | np.ndarray) -> np.ndarray:
        """Predictions at one point or at the rows of an (n, d) array."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Everything needed for bit-exact re-prediction, tagged with `kind`."""

    @classmethod
    @abstractmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Surrogate":
        """Inverse of to_dict."""

    def _require_fitted(self):
        if not self.is_fitted:
            raise FitError(f"{self.kind} surrogate used before fit()")

    def _as_points(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[None, :]
        if points.shape[1] != self.dims:
            raise FitError(f"{self.kind} surrogate expects {self.dims}-dimensional points, got {points.shape[1]}")
        return points

    @staticmethod
    def _prepare(inputs, targets) -> Tuple[np.ndarray, np.ndarray]:
        inputs = np.asarray(inputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs[:, None]
        targets = np.asarray(targets, dtype=float).reshape(-1)
        if inputs.shape[0] != targets.shape[0]:
            raise FitError(f"{inputs.shape[0]} inputs for {targets.shape[0]} targets")
        if inputs.shape[0] == 0:
            raise FitError("cannot fit a surrogate on an empty training set")
        if not (np.isfinite(inputs).all() and np.isfinite(targets).all()):
            raise FitError("training data contain non-finite values")
        return inputs, targets

    @staticmethod
    def _standardize(targets: np.ndarray) -> Tuple[np.ndarray, float, float]:
        """Zero-mean, unit-std targets; constant targets keep scale 1."""
        mean = float(targets.mean())
        scale = float(targets.std())
        if not scale > 0:
            scale = 1.0
        return (targets - mean) / scale, mean, scale
