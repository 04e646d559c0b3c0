from kl_emulator.repositories.artifact_repository import (
    FORMAT_VERSION,
    ArtifactRepository,
    load,
    load_envelope,
    save,
)

__all__ = ["FORMAT_VERSION", "ArtifactRepository", "load", "load_envelope", "save"]
