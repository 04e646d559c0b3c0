from kl_emulator.schemas.design import ParameterSpace, DesignOfExperiments, SeedRegistry
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.schemas.basis import CenteredData, KLBasis
from kl_emulator.schemas.surrogate import KernelSpec, PCEModel
from kl_emulator.schemas.metrics import Histogram, MetricReport
from kl_emulator.schemas.validation import (
    EmulatorConfig,
    ValidationPlan,
    ValidationRecord,
    ValidationResult,
    ValidationSummary,
)
from kl_emulator.schemas.envelope import ArtifactEnvelope, Provenance
from kl_emulator.schemas.run import RunConfig

__all__ = [
    "ParameterSpace",
    "DesignOfExperiments",
    "SeedRegistry",
    "TrajectoryMatrix",
    "CenteredData",
    "KLBasis",
    "KernelSpec",
    "PCEModel",
    "Histogram",
    "MetricReport",
    "EmulatorConfig",
    "ValidationPlan",
    "ValidationRecord",
    "ValidationResult",
    "ValidationSummary",
    "ArtifactEnvelope",
    "Provenance",
    "RunConfig",
]
