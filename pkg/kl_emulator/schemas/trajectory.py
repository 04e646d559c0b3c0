from pydantic import BaseModel, ConfigDict, model_validator
from typing import Optional, Sequence, Tuple
import numpy as np

from kl_emulator.schemas.common import FloatArray
from kl_emulator.schemas.design import ParameterSpace


class TrajectoryMatrix(BaseModel):
    """
    Simulator outputs on a design: values[j, k] = H(coords[j], seeds[k]).

    Shapes are checked here; the M >= 2, N >= 2 and finiteness invariants are
    enforced by center() so that diagnostics can still load bad data.
    """
    values: FloatArray
    coords: FloatArray
    seeds: Tuple[int, ...]
    simulator: Optional[str] = None
    space: Optional[ParameterSpace] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_shapes(self):
        if self.values.ndim != 2:
            raise ValueError(f"values must be a matrix, got shape {self.values.shape}")
        if self.coords.ndim != 2 or self.coords.shape[0] != self.values.shape[0]:
            raise ValueError(
                f"coords shape {self.coords.shape} does not match {self.values.shape[0]} design points"
            )
        if len(self.seeds) != self.values.shape[1]:
            raise ValueError(f"{len(self.seeds)} seeds for {self.values.shape[1]} trajectories")
        if self.space is not None and self.space.dims != self.coords.shape[1]:
            raise ValueError("coords dimension does not match the parameter space")
        return self

    @property
    def n_points(self) -> int:
        return self.values.shape[0]

    @property
    def n_seeds(self) -> int:
        return self.values.shape[1]

    @property
    def dims(self) -> int:
        return self.coords.shape[1]

    def subset(self, rows: Sequence[int]) -> "TrajectoryMatrix":
        rows = np.asarray(rows, dtype=int)
        return TrajectoryMatrix(
            values=self.values[rows],
            coords=self.coords[rows],
            seeds=self.seeds,
            simulator=self.simulator,
            space=self.space,
        )
