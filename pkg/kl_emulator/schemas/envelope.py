from pydantic import BaseModel, Field
from typing import Any, Dict
from datetime import datetime, timezone

from kl_emulator import __version__


class Provenance(BaseModel):
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    library_version: str = __version__
    input_hashes: Dict[str, str] = Field(default_factory=dict)
    config: Dict[str, Any] = Field(default_factory=dict)


class ArtifactEnvelope(BaseModel):
    kind: str
    format_version: int
    checksum: str
    provenance: Provenance
    payload: Dict[str, Any]
