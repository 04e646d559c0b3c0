from pydantic import BaseModel, Field, model_validator
from typing import Literal, Optional, Tuple, Union

from kl_emulator.config import settings
from kl_emulator.schemas.surrogate import KernelFamily, SurrogateKind
from kl_emulator.schemas.validation import EmulatorConfig, Pathway, ValidationPlan


class RunConfig(BaseModel):
    """Effective configuration of a CLI run."""
    simulator: Literal["toy3d", "gaussian_sine"] = "toy3d"
    bounds: Optional[Tuple[Tuple[float, float], ...]] = None
    m: int = Field(default=30, ge=2)
    n: int = Field(default=50, ge=2)
    seed_start: int = Field(default=1, ge=0)
    pathway: Pathway = "eigvec_interp"
    surrogate_kind: Literal["rbf_linear", "kriging"] = "kriging"
    kernel: KernelFamily = settings.DEFAULT_KERNEL
    pce_degree: Union[int, Literal["auto"]] = settings.DEFAULT_PCE_DEGREE
    cov_surrogate_kind: SurrogateKind = "pce"
    truncation_energy: float = Field(default=settings.DEFAULT_TRUNCATION_ENERGY, gt=0, le=1)
    bins: int = Field(default=settings.DEFAULT_BINS, gt=0)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0, lt=1)
    k: int = Field(default=10, ge=2)
    repetitions: int = Field(default=100, ge=1)
    n_test_points: int = Field(default=3000, ge=1)
    doe_seed: int = Field(default=42, ge=0)
    split_seed: int = Field(default=0, ge=0)
    test_seed: int = Field(default=7, ge=0)
    output_dir: str = settings.OUTPUT_DIR
    threads: int = Field(default=settings.THREADS, ge=1)

    @model_validator(mode="after")
    def check_folds(self):
        if self.k > self.m:
            raise ValueError(f"k={self.k} folds need at least {self.k} design points, got m={self.m}")
        return self

    def emulator_config(self) -> EmulatorConfig:
        return EmulatorConfig(
            pathway=self.pathway,
            surrogate_kind=self.surrogate_kind,
            kernel=self.kernel,
            truncation_energy=self.truncation_energy,
            pce_degree=self.pce_degree,
            cov_surrogate_kind=self.cov_surrogate_kind,
        )

    def validation_plan(self) -> ValidationPlan:
        return ValidationPlan(
            k=self.k,
            repetitions=self.repetitions,
            emulator=self.emulator_config(),
            bins=self.bins,
            alpha=self.alpha,
        )
