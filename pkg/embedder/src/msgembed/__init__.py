"""Batch sentence-embedding sidecar for the narracoord analytics engine."""

__version__ = "0.1.0"

from .core import EmbedJob, InputError, run_job  # noqa: F401
from .encoders import ModelLoadError, SentenceTransformerEncoder  # noqa: F401
