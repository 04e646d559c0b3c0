from typing import Any, Dict, List, Optional, Tuple
import numpy as np

from kl_emulator.exceptions import DomainError
from kl_emulator.schemas.basis import KLBasis
from kl_emulator.schemas.design import ParameterSpace
from kl_emulator.schemas.validation import EmulatorConfig
from kl_emulator.surrogates import Surrogate, surrogate_from_dict

# coordinate tolerance for matching a query to a pathway-B target
TARGET_MATCH_TOL = 1e-12


class KLEmulator:
    """
    Fitted, immutable KL emulator.

    eigvec_interp: basis lives on the M design points and `mode_surrogates`
    give phi_i off the design.
    cov_surrogate: basis lives on the M* target points (the design among them) and
    predictions are only defined there.
    """

    def __init__(
        self,
        config: EmulatorConfig,
        basis: KLBasis,
        mean_surrogate: Surrogate,
        doe: np.ndarray,
        seeds: Tuple[int, ...],
        mode_surrogates: Optional[List[Surrogate]] = None,
        cov_model: Optional[Surrogate] = None,
        space: Optional[ParameterSpace] = None,
    ):
        self.config = config
        self.basis = basis
        self.mean_surrogate = mean_surrogate
        self.doe = np.asarray(doe, dtype=float)
        self.seeds = tuple(seeds)
        self.mode_surrogates = list(mode_surrogates or [])
        self.cov_model = cov_model
        self.space = space

        if self.pathway == "eigvec_interp" and len(self.mode_surrogates) != basis.truncation:
            raise ValueError(
                f"{len(self.mode_surrogates)} mode surrogates for {basis.truncation} retained modes"
            )

    @property
    def pathway(self) -> str:
        return self.config.pathway

    @property
    def truncation(self) -> int:
        return self.basis.truncation

    @property
    def targets(self) -> np.ndarray:
        return self.basis.coords

    def check_points(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[None, :]
        if points.shape[1] != self.doe.shape[1]:
            raise DomainError(f"expected {self.doe.shape[1]}-dimensional points, got {points.shape[1]}")
        if self.space is not None:
            for x in points:
                self.space.require(x)
        return points

    def target_indices(self, points: np.ndarray) -> np.ndarray:
        """Row of each point among the pathway-B targets."""
        indices = np.empty(points.shape[0], dtype=int)
        for a, x in enumerate(points):
            hits = np.flatnonzero(np.abs(self.targets - x).max(axis=1) <= TARGET_MATCH_TOL)
            if hits.size == 0:
                raise DomainError(
                    f"point {x.tolist()} is not one of the {self.targets.shape[0]} covariance-surrogate targets"
                )
            indices[a] = hits[0]
        return indices

    def mode_values(self, points) -> np.ndarray:
        """Surrogate eigenvector values phi_i(x), shape (n, p)."""
        points = self.check_points(points)
        if self.truncation == 0:
            return np.zeros((points.shape[0], 0))
        if self.pathway == "cov_surrogate":
            return self.basis.eigenvectors[self.target_indices(points)]
        return np.column_stack([s.predict(points) for s in self.mode_surrogates])

    def mean_values(self, points) -> np.ndarray:
        points = self.check_points(points)
        if self.pathway == "cov_surrogate":
            return self.basis.mean[self.target_indices(points)]
        return self.mean_surrogate.predict(points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.model_dump(),
            "basis": {
                "eigenvalues": self.basis.eigenvalues,
                "eigenvectors": self.basis.eigenvectors,
                "xi": self.basis.xi,
                "coords": self.basis.coords,
                "mean": self.basis.mean,
                "cov_norm": self.basis.cov_norm,
            },
            "mean_surrogate": self.mean_surrogate.to_dict(),
            "mode_surrogates": [s.to_dict() for s in self.mode_surrogates],
            "cov_model": self.cov_model.to_dict() if self.cov_model is not None else None,
            "doe": self.doe,
            "seeds": list(self.seeds),
            "space": [list(b) for b in self.space.bounds] if self.space is not None else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "KLEmulator":
        return cls(
            config=EmulatorConfig(**data["config"]),
            basis=KLBasis(**data["basis"]),
            mean_surrogate=surrogate_from_dict(data["mean_surrogate"]),
            doe=data["doe"],
            seeds=tuple(int(s) for s in data["seeds"]),
            mode_surrogates=[surrogate_from_dict(s) for s in data["mode_surrogates"]],
            cov_model=surrogate_from_dict(data["cov_model"]) if data.get("cov_model") else None,
            space=ParameterSpace(bounds=tuple(tuple(b) for b in data["space"])) if data.get("space") else None,
        )
