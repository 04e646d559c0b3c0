from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Optional, Tuple
import numpy as np

from kl_emulator.schemas.common import FloatArray


class Histogram(BaseModel):
    edges: FloatArray
    masses: FloatArray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_masses(self):
        if self.edges.ndim != 1 or self.masses.shape != (self.edges.shape[0] - 1,):
            raise ValueError("a histogram needs len(masses) == len(edges) - 1")
        if (np.diff(self.edges) <= 0).any():
            raise ValueError("edges must be strictly increasing")
        if (self.masses < 0).any() or abs(self.masses.sum() - 1.0) > 1e-12:
            raise ValueError("masses must be nonnegative and sum to 1")
        return self


class MetricReport(BaseModel):
    """Distribution comparison of a predicted ensemble against a reference sample."""
    hist_intersection: float = Field(..., ge=0, le=1)
    hellinger: float = Field(..., ge=0, le=1)
    js_divergence: float = Field(..., ge=0, le=1)
    ks_statistic: float = Field(..., ge=0, le=1)
    ks_reject: bool
    bins: int = Field(..., gt=0)
    alpha: float = Field(..., gt=0, lt=1)
    point: Optional[Tuple[float, ...]] = None
