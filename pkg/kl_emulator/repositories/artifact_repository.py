import base64
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional
import numpy as np
from pydantic import ValidationError

from kl_emulator.exceptions import ChecksumError, StorageError, VersionMismatchError
from kl_emulator.models.emulator import KLEmulator
from kl_emulator.repositories.files import PathLike, atomic_write_text, read_text
from kl_emulator.schemas.basis import KLBasis
from kl_emulator.schemas.design import DesignOfExperiments, ParameterSpace, SeedRegistry
from kl_emulator.schemas.envelope import ArtifactEnvelope, Provenance
from kl_emulator.schemas.metrics import MetricReport
from kl_emulator.schemas.trajectory import TrajectoryMatrix
from kl_emulator.schemas.validation import ValidationResult
from kl_emulator.surrogates import Surrogate, surrogate_from_dict


logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

# artifact names inside one run directory
DESIGN_FILE = "design.json"
TRAJECTORIES_FILE = "trajectories.json"
EMULATOR_FILE = "emulator.json"
PREDICTIONS_FILE = "predictions.json"
VALIDATION_FILE = "validation.json"
REPORT_FILE = "report.json"


def encode(value: Any) -> Any:
    """JSON-ready copy of `value`; arrays become base64 little-endian buffers."""
    if isinstance(value, np.ndarray):
        dtype = value.dtype.newbyteorder("<") if value.dtype.byteorder not in ("|", "<") else value.dtype
        buffer = np.ascontiguousarray(value, dtype=dtype)
        return {
            "__ndarray__": base64.b64encode(buffer.tobytes()).decode("ascii"),
            "dtype": buffer.dtype.str,
            "shape": list(buffer.shape),
        }
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def decode(value: Any) -> Any:
    if isinstance(value, dict):
        if "__ndarray__" in value:
            raw = base64.b64decode(value["__ndarray__"], validate=True)
            return np.frombuffer(raw, dtype=np.dtype(value["dtype"])).reshape(value["shape"]).copy()
        return {k: decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [decode(v) for v in value]
    return value


def checksum(payload: Dict[str, Any]) -> str:
    """SHA-256 of the canonical (sorted-keys, compact) payload JSON."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _space_payload(space: Optional[ParameterSpace]):
    return [list(b) for b in space.bounds] if space is not None else None


def _space(bounds) -> Optional[ParameterSpace]:
    return ParameterSpace(bounds=tuple(tuple(b) for b in bounds)) if bounds else None


def to_payload(artifact: Any) -> tuple[str, Dict[str, Any]]:
    """Kind tag and raw payload of a storable artifact."""
    if isinstance(artifact, DesignOfExperiments):
        return "design", {"points": artifact.points, "bounds": _space_payload(artifact.space)}
    if isinstance(artifact, SeedRegistry):
        return "seeds", {"seeds": list(artifact.seeds)}
    if isinstance(artifact, TrajectoryMatrix):
        return "trajectories", {
            "values": artifact.values,
            "coords": artifact.coords,
            "seeds": list(artifact.seeds),
            "simulator": artifact.simulator,
            "bounds": _space_payload(artifact.space),
        }
    if isinstance(artifact, KLBasis):
        return "kl_basis", artifact.model_dump()
    if isinstance(artifact, KLEmulator):
        return "emulator", artifact.to_dict()
    if isinstance(artifact, Surrogate):
        return "surrogate", artifact.to_dict()
    if isinstance(artifact, ValidationResult):
        return "validation_summary", artifact.model_dump(mode="json")
    if isinstance(artifact, list) and all(isinstance(r, MetricReport) for r in artifact):
        return "metric_report", {"reports": [r.model_dump(mode="json") for r in artifact]}
    if isinstance(artifact, dict) and "samples" in artifact and "points" in artifact:
        return "predictions", {"points": np.asarray(artifact["points"]), "samples": np.asarray(artifact["samples"])}
    raise StorageError(f"cannot store an artifact of type {type(artifact).__name__}")


def from_payload(kind: str, payload: Dict[str, Any]) -> Any:
    if kind == "design":
        return DesignOfExperiments(points=payload["points"], space=_space(payload["bounds"]))
    if kind == "seeds":
        return SeedRegistry(seeds=tuple(int(s) for s in payload["seeds"]))
    if kind == "trajectories":
        return TrajectoryMatrix(
            values=payload["values"],
            coords=payload["coords"],
            seeds=tuple(int(s) for s in payload["seeds"]),
            simulator=payload.get("simulator"),
            space=_space(payload.get("bounds")),
        )
    if kind == "kl_basis":
        return KLBasis(**payload)
    if kind == "emulator":
        return KLEmulator.from_dict(payload)
    if kind == "surrogate":
        return surrogate_from_dict(payload)
    if kind == "validation_summary":
        return ValidationResult(**payload)
    if kind == "metric_report":
        return [MetricReport(**r) for r in payload["reports"]]
    if kind == "predictions":
        return payload
    raise StorageError(f"unknown artifact kind '{kind}'")


def file_hash(path: PathLike) -> str:
    return hashlib.sha256(read_text(path).encode("utf-8")).hexdigest()


class ArtifactRepository:
    """Envelope-wrapped JSON artifacts under one output directory."""

    def __init__(self, root: PathLike):
        self.root = Path(root)

    def path(self, name: str) -> Path:
        return self.root / name

    def save(
        self,
        artifact: Any,
        name: str,
        config: Optional[Dict[str, Any]] = None,
        inputs: Optional[List[PathLike]] = None,
    ) -> Path:
        return save(artifact, self.path(name), config=config, inputs=inputs)

    def load(self, name: str, kind: Optional[str] = None) -> Any:
        return load(self.path(name), kind=kind)

    def exists(self, name: str) -> bool:
        return self.path(name).is_file()


def save(
    artifact: Any,
    path: PathLike,
    config: Optional[Dict[str, Any]] = None,
    inputs: Optional[List[PathLike]] = None,
) -> Path:
    """Write `artifact` atomically inside an envelope with provenance."""
    kind, payload = to_payload(artifact)
    payload = encode(payload)
    provenance = Provenance(
        input_hashes={str(p): file_hash(p) for p in inputs or []},
        config=config or {},
    )
    envelope = ArtifactEnvelope(
        kind=kind,
        format_version=FORMAT_VERSION,
        checksum=checksum(payload),
        provenance=provenance,
        payload=payload,
    )
    text = json.dumps(envelope.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    path = atomic_write_text(path, text)
    logger.debug("Saved %s artifact to %s", kind, path)
    return path


def load_envelope(path: PathLike) -> ArtifactEnvelope:
    text = read_text(path)
    try:
        envelope = ArtifactEnvelope(**json.loads(text))
    except (json.JSONDecodeError, TypeError, ValidationError) as e:
        raise ChecksumError(f"artifact {path} is truncated or corrupt: {e}") from e
    if envelope.format_version != FORMAT_VERSION:
        raise VersionMismatchError(envelope.format_version, FORMAT_VERSION)
    if checksum(envelope.payload) != envelope.checksum:
        raise ChecksumError(f"checksum mismatch in {path}")
    return envelope


def load(path: PathLike, kind: Optional[str] = None) -> Any:
    """Verified artifact from an envelope file, optionally requiring its kind."""
    envelope = load_envelope(path)
    if kind is not None and envelope.kind != kind:
        raise StorageError(f"{path} holds a '{envelope.kind}' artifact, expected '{kind}'")
    try:
        return from_payload(envelope.kind, decode(envelope.payload))
    except (KeyError, ValueError, TypeError) as e:
        raise StorageError(f"artifact {path} has an unreadable '{envelope.kind}' payload: {e}") from e
