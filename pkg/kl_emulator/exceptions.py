"""Error hierarchy shared by services, repositories and the CLI."""


class EmulatorError(Exception):
    """Base class for every error raised by the package."""


class DataError(EmulatorError, ValueError):
    """Input data violates a documented invariant."""


class DomainError(DataError):
    """A coordinate lies outside the parameter space."""


class SimulationError(DataError):
    """A simulator call failed; carries the (design index, seed index) cell."""

    def __init__(self, message: str, point_index: int | None = None, seed_index: int | None = None):
        super().__init__(message)
        self.point_index = point_index
        self.seed_index = seed_index


class MetricError(DataError):
    """Histogram or sample arguments cannot be compared."""


class ConfigurationError(EmulatorError, ValueError):
    """A run configuration or validation plan is unusable for the data."""


class NumericalError(EmulatorError, ArithmeticError):
    """A linear-algebra step failed or produced out-of-tolerance results."""


class FitError(NumericalError):
    """A surrogate could not be fitted."""


class StorageError(EmulatorError, OSError):
    """An artifact could not be written or read."""


class ChecksumError(StorageError):
    """Artifact payload does not match its recorded checksum."""


class VersionMismatchError(StorageError):
    """Artifact was written with an unsupported format version."""

    def __init__(self, found: int, supported: int):
        super().__init__(
            f"artifact format version {found} is not supported (this library reads version {supported})"
        )
        self.found = found
        self.supported = supported
