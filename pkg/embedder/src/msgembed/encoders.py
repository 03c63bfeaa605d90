"""Encoder backends.

The job runner only needs a callable ``texts -> (n, dim) array``; the
production backend wraps a multilingual sentence-transformer. Outputs
are deterministic for a fixed model version and device class; bitwise
equality across device classes is not guaranteed (kernels differ), but
cosine agreement stays above 0.999.
"""

from __future__ import annotations

import numpy as np


class ModelLoadError(Exception):
    """The embedding model could not be loaded."""


class SentenceTransformerEncoder:
    """Lazy wrapper around sentence-transformers."""

    def __init__(self, model_id: str, device: str = "cpu"):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ModelLoadError(f"sentence-transformers missing: {exc}") from exc
        torch_device = "cuda" if device == "gpu" else "cpu"
        try:
            self._model = SentenceTransformer(model_id, device=torch_device)
        except Exception as exc:
            raise ModelLoadError(f"cannot load model {model_id!r}: {exc}") from exc
        self.dim = self._model.get_sentence_embedding_dimension()

    def __call__(self, texts) -> np.ndarray:
        return np.asarray(
            self._model.encode(
                list(texts),
                convert_to_numpy=True,
                normalize_embeddings=True,
                show_progress_bar=False,
            ),
            dtype=np.float64,
        )
