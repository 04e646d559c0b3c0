from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Sequence, Tuple
import math
import numpy as np

from kl_emulator.exceptions import DomainError
from kl_emulator.schemas.common import FloatArray


class ParameterSpace(BaseModel):
    """Axis-aligned box of admissible simulator inputs."""
    bounds: Tuple[Tuple[float, float], ...] = Field(..., min_length=1)

    model_config = ConfigDict(frozen=True)

    @field_validator("bounds")
    @classmethod
    def check_bounds(cls, bounds):
        for dim, (lower, upper) in enumerate(bounds, start=1):
            if not (math.isfinite(lower) and math.isfinite(upper)):
                raise ValueError(f"bounds in dim {dim} must be finite")
            if not lower < upper:
                raise ValueError(f"degenerate bounds in dim {dim}: lower={lower} upper={upper}")
        return bounds

    @classmethod
    def cube(cls, lower: float, upper: float, dims: int) -> "ParameterSpace":
        return cls(bounds=tuple((lower, upper) for _ in range(dims)))

    @property
    def dims(self) -> int:
        return len(self.bounds)

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds])

    def outside_dims(self, x: Sequence[float]) -> list[int]:
        """1-based dimensions where x leaves the box."""
        x = np.asarray(x, dtype=float)
        mask = (x < self.lower) | (x > self.upper) | ~np.isfinite(x)
        return [int(i) + 1 for i in np.flatnonzero(mask)]

    def contains(self, x: Sequence[float]) -> bool:
        return len(x) == self.dims and not self.outside_dims(x)

    def require(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.dims:
            raise DomainError(f"expected a {self.dims}-dimensional point, got {x.size} coordinates")
        outside = self.outside_dims(x)
        if outside:
            raise DomainError(f"point {x.tolist()} outside bounds in dim {outside[0]}")
        return x


class DesignOfExperiments(BaseModel):
    """M design points in a parameter space; invariants are checked by validate_design."""
    points: FloatArray
    space: ParameterSpace

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_shape(self):
        if self.points.ndim != 2 or self.points.shape[1] != self.space.dims:
            raise ValueError(
                f"points must have shape (M, {self.space.dims}), got {self.points.shape}"
            )
        return self

    @property
    def size(self) -> int:
        return self.points.shape[0]


class SeedRegistry(BaseModel):
    """Ordered, distinct seeds; position k is the trajectory index."""
    seeds: Tuple[int, ...] = Field(..., min_length=1)

    model_config = ConfigDict(frozen=True)

    @field_validator("seeds")
    @classmethod
    def check_seeds(cls, seeds):
        if any(s < 0 or s >= 2**64 for s in seeds):
            raise ValueError("seeds must be unsigned 64-bit integers")
        if len(set(seeds)) != len(seeds):
            raise ValueError("seeds must be distinct")
        return seeds

    @classmethod
    def consecutive(cls, n: int, start: int = 1) -> "SeedRegistry":
        return cls(seeds=tuple(range(start, start + n)))

    def __len__(self) -> int:
        return len(self.seeds)
