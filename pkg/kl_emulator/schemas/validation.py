from pydantic import BaseModel, Field
from typing import List, Literal, Optional, Union

from kl_emulator.config import settings
from kl_emulator.schemas.metrics import MetricReport
from kl_emulator.schemas.surrogate import KernelFamily, SurrogateKind

Pathway = Literal["eigvec_interp", "cov_surrogate"]


class EmulatorConfig(BaseModel):
    """Everything needed to rebuild an emulator from a trajectory matrix."""
    pathway: Pathway = "eigvec_interp"
    surrogate_kind: Literal["rbf_linear", "kriging"] = "kriging"
    kernel: KernelFamily = settings.DEFAULT_KERNEL
    truncation_energy: float = Field(default=settings.DEFAULT_TRUNCATION_ENERGY, gt=0, le=1)
    pce_degree: Union[int, Literal["auto"]] = settings.DEFAULT_PCE_DEGREE
    cov_surrogate_kind: SurrogateKind = "pce"
    mean_surrogate_kind: Optional[Literal["rbf_linear", "kriging"]] = None

    @property
    def label(self) -> str:
        if self.pathway == "eigvec_interp":
            return f"eigvec_interp/{self.surrogate_kind}"
        return f"cov_surrogate/{self.cov_surrogate_kind}"

    @property
    def resolved_mean_kind(self) -> str:
        return self.mean_surrogate_kind or self.surrogate_kind


class ValidationPlan(BaseModel):
    k: int = Field(default=10, ge=2)
    repetitions: int = Field(default=1, ge=1)
    emulator: EmulatorConfig = Field(default_factory=EmulatorConfig)
    bins: int = Field(default=settings.DEFAULT_BINS, gt=0)
    alpha: float = Field(default=settings.DEFAULT_ALPHA, gt=0, lt=1)


class ValidationRecord(BaseModel):
    """One held-out comparison."""
    repetition: int
    fold: int
    point_index: int
    report: MetricReport


class ValidationSummary(BaseModel):
    method: str
    n_reports: int = Field(..., ge=0)
    repetitions: int = Field(default=1, ge=1)
    k: Optional[int] = None
    bins: int
    alpha: float
    hist_intersection_mean: float = Field(..., ge=0, le=1)
    hist_intersection_std: float = Field(..., ge=0)
    hellinger_mean: float = Field(..., ge=0, le=1)
    hellinger_std: float = Field(..., ge=0)
    js_divergence_mean: float = Field(..., ge=0, le=1)
    js_divergence_std: float = Field(..., ge=0)
    ks_statistic_mean: float = Field(..., ge=0, le=1)
    ks_statistic_std: float = Field(..., ge=0)
    ks_rejection_rate: float = Field(..., ge=0, le=1)


class ValidationResult(BaseModel):
    summary: ValidationSummary
    records: List[ValidationRecord]
