"""Batch embedding jobs and the vector file format.

The sidecar communicates with the analytics engine only through files:
JSONL in (``id`` and ``text`` per line), the pinned vector format out.
Reruns are resumable: ids already present in the output are never
re-encoded.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_MODEL = "paraphrase-multilingual-MiniLM-L12-v2"
DEVICES = ("cpu", "gpu")


class InputError(Exception):
    """Unreadable or malformed job input."""


@dataclass(frozen=True)
class EmbedJob:
    input: Path
    output: Path
    model_id: str = DEFAULT_MODEL
    batch_size: int = 64
    device: str = "cpu"

    def __post_init__(self):
        if self.device not in DEVICES:
            raise ValueError(f"device must be one of {DEVICES}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")


@dataclass
class JobStats:
    total: int = 0
    encoded: int = 0
    reused: int = 0
    empty_text: int = 0


def read_input(path) -> list[tuple[str, str]]:
    """(id, text) pairs in file order; id and text are mandatory per line."""
    pairs = []
    seen = set()
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            if not isinstance(raw, dict) or "id" not in raw or "text" not in raw:
                raise InputError(f"{path}:{lineno}: line needs 'id' and 'text'")
            rec_id = str(raw["id"])
            if rec_id in seen:
                continue
            seen.add(rec_id)
            pairs.append((rec_id, str(raw["text"] or "")))
    if not pairs:
        raise InputError(f"{path}: no records")
    return pairs


def read_existing_output(path, dim: int | None = None):
    """Vectors already on disk, read leniently for resume.

    A truncated final line or a stale header count (from an interrupted
    run) is tolerated; rows whose dimension conflicts are dropped so they
    get re-encoded.
    """
    path = Path(path)
    existing: dict[str, np.ndarray] = {}
    if not path.exists():
        return existing, dim
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        parts = header.split()
        if len(parts) == 2 and parts[0].startswith("dim="):
            try:
                file_dim = int(parts[0][4:])
            except ValueError:
                return existing, dim
        else:
            return existing, dim
        if dim is not None and file_dim != dim:
            logger.warning("%s: dimension %d != expected %d; re-encoding all",
                           path, file_dim, dim)
            return existing, dim
        dim = file_dim
        for line in fh:
            fields = line.strip().split()
            if len(fields) != dim + 1:
                continue  # truncated row from an interrupted write
            try:
                vec = np.array([float(x) for x in fields[1:]])
            except ValueError:
                continue
            existing[fields[0]] = vec
    return existing, dim


def write_vector_file(path, rows, dim: int) -> None:
    """Pinned format: header then one ``<id> <floats...>`` row per vector.

    repr() float formatting gives shortest-round-trip decimal strings, so
    consumers recover the exact values.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(f"dim={dim} count={len(rows)}\n")
        for rec_id, vec in rows:
            fh.write(rec_id + " " + " ".join(repr(float(x)) for x in vec) + "\n")
    tmp.replace(path)


def unit_normalize(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("encoder produced a zero vector")
    return matrix / norms


def run_job(job: EmbedJob, encoder) -> JobStats:
    """Encode every input record that is not already in the output.

    ``encoder`` maps a list of texts to a (n, dim) array; see
    :mod:`msgembed.encoders`. The output file is rewritten atomically in
    input order with existing vectors carried over unchanged.
    """
    pairs = read_input(job.input)
    stats = JobStats(total=len(pairs))

    existing, known_dim = read_existing_output(job.output)
    missing = [(rec_id, text) for rec_id, text in pairs
               if rec_id not in existing]

    encoded: dict[str, np.ndarray] = {}
    dim = known_dim
    for start in range(0, len(missing), job.batch_size):
        batch = missing[start:start + job.batch_size]
        texts = [text for _, text in batch]
        n_empty = sum(1 for t in texts if not t.strip())
        if n_empty:
            stats.empty_text += n_empty
            logger.warning("encoding %d empty text(s); model-defined output",
                           n_empty)
        vectors = unit_normalize(np.asarray(encoder(texts), dtype=np.float64))
        if dim is None:
            dim = vectors.shape[1]
        elif vectors.shape[1] != dim:
            raise ValueError(
                f"encoder dim {vectors.shape[1]} != existing output dim {dim}"
            )
        for (rec_id, _), vec in zip(batch, vectors):
            encoded[rec_id] = vec
    stats.encoded = len(encoded)
    stats.reused = len(pairs) - len(encoded)

    if dim is None:
        raise InputError("nothing to write: no vectors encoded or reused")
    rows = []
    for rec_id, _ in pairs:
        vec = encoded.get(rec_id)
        if vec is None:
            vec = existing[rec_id]
        rows.append((rec_id, vec))
    write_vector_file(job.output, rows, dim)
    return stats
