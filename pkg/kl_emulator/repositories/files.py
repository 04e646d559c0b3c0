import io
import os
import tempfile
from pathlib import Path
from typing import Union
import numpy as np

from kl_emulator.exceptions import StorageError


PathLike = Union[str, os.PathLike]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write to a temp file beside `path`, then rename over it."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
    except OSError as e:
        raise StorageError(f"Failed to write {path}: {e}") from e
    return path


def read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise StorageError(f"artifact not found: {path}") from e
    except OSError as e:
        raise StorageError(f"Failed to read {path}: {e}") from e


def csv_text(rows: np.ndarray, header: list[str], fmt="%.17g") -> str:
    """Comma-separated rows under a single header line, full precision."""
    buffer = io.StringIO()
    np.savetxt(buffer, np.atleast_2d(rows), delimiter=",", header=",".join(header), comments="", fmt=fmt)
    return buffer.getvalue()


def read_csv(path: PathLike) -> tuple[list[str], np.ndarray]:
    text = read_text(path)
    lines = text.splitlines()
    if not lines:
        raise StorageError(f"empty CSV file: {path}")
    header = lines[0].split(",")
    try:
        rows = np.loadtxt(io.StringIO(text), delimiter=",", skiprows=1, ndmin=2)
    except ValueError as e:
        raise StorageError(f"malformed CSV file {path}: {e}") from e
    return header, rows
