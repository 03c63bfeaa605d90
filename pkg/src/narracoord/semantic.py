"""Semantic homogenization from externally supplied sentence embeddings.

Embeddings arrive in a plain text vector file (see :func:`load_embeddings`)
produced by the batch embedder sidecar or by test fixtures; the engine
never loads an embedding model itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .corpus import SourceSlice

SAMPLE_CAP = 800
DEFAULT_DIM = 384


@dataclass
class EmbeddingStore:
    """Id-addressable unit vectors of one fixed dimension."""

    dim: int
    vectors: dict[str, np.ndarray]
    skipped_zero: int = 0

    def __contains__(self, record_id: str) -> bool:
        return record_id in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class SemanticScore:
    h_score: float
    n_sampled: int
    seed: int


def load_embeddings(path) -> EmbeddingStore:
    """Parse the pinned vector file format into a unit-normalized store.

    Format: header line ``dim=<D> count=<N>`` followed by N lines of
    ``<record_id> <D space-separated floats>``. Vectors are renormalized
    to unit L2 on ingestion; zero vectors are skipped and counted; a
    dimension mismatch anywhere is fatal.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        try:
            dim_part, count_part = header.split()
            dim = int(dim_part.removeprefix("dim="))
            count = int(count_part.removeprefix("count="))
        except ValueError:
            raise ValueError(f"bad vector file header: {header!r}") from None
        vectors: dict[str, np.ndarray] = {}
        skipped = 0
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            fields = line.split()
            record_id = fields[0]
            if len(fields) - 1 != dim:
                raise ValueError(
                    f"{path}:{lineno}: expected dim {dim}, got {len(fields) - 1}"
                )
            vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            norm = float(np.linalg.norm(vec))
            if norm == 0.0:
                skipped += 1
                continue
            vectors[record_id] = vec / norm
        if len(vectors) + skipped != count:
            raise ValueError(
                f"{path}: header count {count} != {len(vectors) + skipped} rows"
            )
    return EmbeddingStore(dim=dim, vectors=vectors, skipped_zero=skipped)


def write_vector_file(vectors, path, dim: int | None = None) -> None:
    """Write id -> vector pairs in the pinned format (repr floats, so
    values round-trip exactly)."""
    items = list(vectors.items())
    if dim is None:
        if not items:
            raise ValueError("cannot infer dim from an empty mapping")
        dim = len(items[0][1])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim={dim} count={len(items)}\n")
        for record_id, vec in items:
            if not record_id or any(c.isspace() for c in record_id):
                raise ValueError(f"record id unusable in vector file: {record_id!r}")
            if len(vec) != dim:
                raise ValueError(f"vector for {record_id} has dim {len(vec)} != {dim}")
            fh.write(record_id + " " + " ".join(repr(float(x)) for x in vec) + "\n")


def sample_ids(slc: SourceSlice, store: EmbeddingStore, seed: int,
               cap: int = SAMPLE_CAP) -> list[str]:
    """Seeded uniform sample (without replacement) of embedded record ids.

    Candidates are ordered by record_id before sampling so the draw is
    independent of slice internals and platform.
    """
    candidates = sorted(r.record_id for r in slc.records if r.record_id in store)
    if len(candidates) <= cap:
        return candidates
    return random.Random(seed).sample(candidates, cap)


def _mean_vector(store: EmbeddingStore, ids) -> np.ndarray:
    return np.mean([store.vectors[i] for i in ids], axis=0)


def mean_pairwise_cosine(vectors: np.ndarray) -> float:
    """Mean dot product over the upper triangle of n unit vectors.

    Uses the mean-vector identity (n^2 ||m||^2 - n) / (n (n-1)), which is
    O(n * dim) instead of O(n^2 * dim).
    """
    n = vectors.shape[0]
    if n < 2:
        raise ValueError("need at least two vectors")
    m = vectors.mean(axis=0)
    return (n * n * float(m @ m) - n) / (n * (n - 1))


def h_score(slc: SourceSlice, store: EmbeddingStore, seed: int,
            cap: int = SAMPLE_CAP) -> SemanticScore | None:
    """Within-source homogenization: mean pairwise cosine over a seeded
    sample of at most ``cap`` embedded records. None with < 2 embedded."""
    ids = sample_ids(slc, store, seed, cap)
    if len(ids) < 2:
        return None
    vectors = np.stack([store.vectors[i] for i in ids])
    return SemanticScore(
        h_score=mean_pairwise_cosine(vectors),
        n_sampled=len(ids),
        seed=seed,
    )


def cross_source_matrix(slices, store: EmbeddingStore, seed: int,
                        cap: int = SAMPLE_CAP):
    """Cross-source mean-cosine matrix over the same per-source samples
    used by :func:`h_score`.

    Off-diagonal (s, s') is the mean cosine over all cross pairs, which
    equals the dot product of the two (non-unit) sample mean vectors.
    Diagonal entries are the within-source scores. Sources with no
    embedded records get NaN rows; a single embedded record leaves only
    the diagonal undefined.

    Returns ``(keys, matrix)`` with keys ordered by (platform, source).
    """
    slices = sorted(slices, key=lambda s: (s.platform, s.source))
    if len(slices) < 2:
        raise ValueError("cross_source_matrix needs at least two slices")
    samples = [sample_ids(slc, store, seed, cap) for slc in slices]
    means = [
        _mean_vector(store, ids) if ids else None
        for ids in samples
    ]
    n = len(slices)
    mat = np.full((n, n), np.nan)
    for i in range(n):
        if means[i] is None:
            continue
        if len(samples[i]) >= 2:
            vectors = np.stack([store.vectors[k] for k in samples[i]])
            mat[i, i] = mean_pairwise_cosine(vectors)
        for j in range(i + 1, n):
            if means[j] is None:
                continue
            mat[i, j] = mat[j, i] = float(means[i] @ means[j])
    keys = tuple((s.platform, s.source) for s in slices)
    return keys, mat
