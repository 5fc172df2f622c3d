"""Atomic, deterministic artifact files stamped with the configuration hash."""
import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from monitoring.logger import ArtifactLogger


def atomic_write(path: Path, data: bytes) -> None:
    """Write to a temporary sibling, then rename over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, temp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def _finite(value: Any) -> Any:
    """Replace non-finite floats by None; JSON has no NaN."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def dumps_json(payload: Any) -> str:
    return json.dumps(_finite(payload), indent=2, ensure_ascii=False) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]], config_hash: str) -> str:
    buffer = io.StringIO()
    buffer.write(f"# config_hash={config_hash}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue()


def format_cell(cell: Any) -> str:
    if isinstance(cell, bool):
        return "true" if cell else "false"
    if isinstance(cell, float):
        return f"{cell:.17g}"
    return str(cell)


class ArtifactWriter:
    """Writes the declared outputs of one run into a directory."""

    def __init__(
        self,
        directory: str,
        config_hash: str,
        artifact_logger: Optional[ArtifactLogger] = None,
        seed: Optional[str] = None,
    ):
        self.directory = Path(directory)
        self.config_hash = config_hash
        self.seed = seed
        self.artifact_logger = artifact_logger
        self.written: List[Path] = []

    def _write(self, name: str, text: str, kind: str) -> Path:
        path = self.directory / name
        data = text.encode("utf-8")
        atomic_write(path, data)
        self.written.append(path)
        if self.artifact_logger is not None:
            self.artifact_logger.log_artifact(str(path), kind, self.config_hash, len(data))
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        stamp: Dict[str, Any] = {"config_hash": self.config_hash}
        if self.seed is not None:
            stamp["seed"] = self.seed
        return self._write(name, dumps_json({**stamp, **payload}), "json")

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        return self._write(name, csv_text(header, rows, self.config_hash), "csv")

    def write_bytes(self, name: str, data: bytes) -> Path:
        path = self.directory / name
        atomic_write(path, data)
        self.written.append(path)
        if self.artifact_logger is not None:
            self.artifact_logger.log_artifact(str(path), "binary", self.config_hash, len(data))
        return path
