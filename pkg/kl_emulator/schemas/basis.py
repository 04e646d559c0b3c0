from pydantic import BaseModel, ConfigDict, model_validator
from typing import Literal

from kl_emulator.schemas.common import FloatArray


class CenteredData(BaseModel):
    centered: FloatArray
    mean: FloatArray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def n_seeds(self) -> int:
        return self.centered.shape[1]


class KLBasis(BaseModel):
    """
    Discrete KL basis of a centered trajectory matrix.

    eigenvectors holds one column per retained mode and xi one row per mode, so
    the truncation p is the number of columns.
    """
    eigenvalues: FloatArray
    eigenvectors: FloatArray
    xi: FloatArray
    coords: FloatArray
    mean: FloatArray
    cov_norm: Literal["1/N"] = "1/N"

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_shapes(self):
        p = self.eigenvalues.shape[0]
        m = self.eigenvectors.shape[0]
        if self.eigenvectors.ndim != 2 or self.eigenvectors.shape[1] != p:
            raise ValueError(f"eigenvectors shape {self.eigenvectors.shape} does not hold {p} modes")
        if self.xi.ndim != 2 or self.xi.shape[0] != p:
            raise ValueError(f"xi shape {self.xi.shape} does not hold {p} modes")
        if self.coords.shape[0] != m or self.mean.shape[0] != m:
            raise ValueError("coords and mean must have one entry per design point")
        if p and (self.eigenvalues.min() < 0 or (self.eigenvalues[1:] > self.eigenvalues[:-1]).any()):
            raise ValueError("eigenvalues must be nonnegative and nonincreasing")
        return self

    @property
    def truncation(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def n_points(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def n_seeds(self) -> int:
        return self.xi.shape[1]
