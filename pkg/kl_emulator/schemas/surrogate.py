from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import Literal, Tuple
from math import comb

from kl_emulator.schemas.common import FloatArray

KernelFamily = Literal["gaussian", "exponential", "matern32", "matern52"]
SurrogateKind = Literal["rbf_linear", "kriging", "pce"]


class KernelSpec(BaseModel):
    family: KernelFamily = "matern52"
    lengthscales: Tuple[float, ...] = Field(..., min_length=1)
    variance: float = Field(default=1.0, gt=0)
    nugget: float = Field(default=0.0, ge=0)

    model_config = ConfigDict(frozen=True)

    @field_validator("lengthscales")
    @classmethod
    def check_lengthscales(cls, lengthscales):
        if any(not theta > 0 for theta in lengthscales):
            raise ValueError("lengthscales must be positive")
        return lengthscales


class PCEModel(BaseModel):
    """Total-degree Legendre chaos expansion on an affinely mapped box."""
    degree: int = Field(..., ge=0)
    dims: int = Field(..., ge=1)
    multi_indices: Tuple[Tuple[int, ...], ...]
    coefficients: FloatArray
    lower: FloatArray
    upper: FloatArray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def check_terms(self):
        expected = comb(self.degree + self.dims, self.dims)
        if len(self.multi_indices) != expected or self.coefficients.shape != (expected,):
            raise ValueError(
                f"degree {self.degree} in {self.dims} dims needs {expected} coefficients, "
                f"got {self.coefficients.shape[0]}"
            )
        if self.lower.shape != (self.dims,) or self.upper.shape != (self.dims,):
            raise ValueError("bounds must have one entry per dimension")
        if (self.upper <= self.lower).any():
            raise ValueError("PCE bounds must satisfy lower < upper")
        return self
