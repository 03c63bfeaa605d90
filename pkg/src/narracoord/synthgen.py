"""Labeled synthetic corpora: a coordinated stream and an organic twin.

The generator produces files in the exact ingestion formats (raw JSONL
plus the vector file), so an end-to-end run over generated data exercises
the same code paths as a real corpus. Construction guarantees the
ordering of every coordination component between the two modes:

- coordinated text is drawn from a small shared template pool with
  synonym slots (low diversity, high cross-source trigram overlap);
- coordinated timestamps come from a heavy-tailed gap process (bursty),
  organic ones from a near-Poisson process;
- coordinated embeddings cluster tightly around one shared direction on
  the unit sphere, organic ones disperse around per-source directions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .corpus import EventWindow, _day_start
from .semantic import write_vector_file

MODE_COORDINATED = "coordinated"
MODE_ORGANIC = "organic"
MODES = (MODE_COORDINATED, MODE_ORGANIC)

_SYLLABLES = (
    "ba", "do", "ka", "lu", "mi", "na", "po", "ri", "sa", "te",
    "vo", "zu", "che", "gra", "ni", "tor", "mel", "дум", "лог", "не",
)


@dataclass(frozen=True)
class GenSpec:
    """Knobs for one generated stream; see the mode presets below.

    The template fields only apply in coordinated mode (organic text is
    always drawn word-by-word from the full vocabulary), and a zero
    burst_intensity means near-Poisson timing.
    """

    n_sources: int = 4
    n_messages_per_source: int = 150
    vocab_size: int = 3000
    template_pool_size: int = 40
    burst_intensity: float = 0.0
    shared_phrase_rate: float = 0.0
    embedding_cluster_spread: float = 2.0
    seed: int = 0
    event_id: str = "synthetic_event"
    start: date = date(2025, 3, 1)
    end: date = date(2025, 4, 30)
    dim: int = 384


def coordinated_spec(seed: int = 0, **overrides) -> GenSpec:
    """Coordinated preset: small vocabulary, shared templates, bursty
    timing, tight embedding cluster."""
    spec = GenSpec(
        vocab_size=120,
        template_pool_size=10,
        burst_intensity=2.5,
        shared_phrase_rate=0.8,
        embedding_cluster_spread=0.05,
        seed=seed,
    )
    return replace(spec, **overrides) if overrides else spec


def organic_spec(seed: int = 0, **overrides) -> GenSpec:
    """Organic twin: large vocabulary, no shared templates, near-Poisson
    timing, dispersed embeddings."""
    spec = GenSpec(
        vocab_size=6000,
        template_pool_size=0,
        burst_intensity=0.0,
        shared_phrase_rate=0.0,
        embedding_cluster_spread=2.0,
        seed=seed,
    )
    return replace(spec, **overrides) if overrides else spec


def event_window(spec: GenSpec) -> EventWindow:
    """Window covering the generated stream; no keyword filter."""
    return EventWindow(spec.event_id, spec.start, spec.end, None, ())


@dataclass(frozen=True)
class GenResult:
    records_path: Path
    vectors_path: Path
    window: EventWindow
    sources: tuple[str, ...]


def _make_word(rng: np.random.Generator) -> str:
    n = int(rng.integers(2, 5))
    return "".join(_SYLLABLES[int(i)] for i in rng.integers(0, len(_SYLLABLES), n))


def _vocabulary(rng: np.random.Generator, size: int) -> list[str]:
    words = set()
    while len(words) < size:
        words.add(_make_word(rng))
    return sorted(words)


def _templates(rng: np.random.Generator, vocab, pool_size: int):
    """Templates are token sequences; every third slot offers synonyms."""
    templates = []
    for _ in range(pool_size):
        length = int(rng.integers(14, 22))
        slots = []
        for pos in range(length):
            if pos % 3 == 2:
                slots.append(tuple(
                    vocab[int(i)] for i in rng.integers(0, len(vocab), 3)
                ))
            else:
                slots.append((vocab[int(rng.integers(0, len(vocab)))],))
        templates.append(tuple(slots))
    return templates


def _render_template(rng: np.random.Generator, template) -> str:
    return " ".join(
        slot[int(rng.integers(0, len(slot)))] for slot in template
    )


def _organic_message(rng: np.random.Generator, vocab) -> str:
    length = int(rng.integers(15, 40))
    return " ".join(vocab[int(i)] for i in rng.integers(0, len(vocab), length))


def _timestamps(rng: np.random.Generator, spec: GenSpec, n: int):
    """Bursty (lognormal gaps) or near-Poisson (exponential gaps) times,
    rescaled to fill the window span."""
    lo = _day_start(spec.start).timestamp()
    hi = _day_start(spec.end).timestamp() + 86400
    span = hi - lo - 60
    if spec.burst_intensity > 0:
        gaps = rng.lognormal(mean=0.0, sigma=spec.burst_intensity, size=n)
    else:
        gaps = rng.exponential(scale=1.0, size=n)
    offsets = np.cumsum(gaps)
    offsets = offsets / offsets[-1] * span
    return [int(lo + o) for o in offsets]


def _embeddings(rng: np.random.Generator, spec: GenSpec, mode: str, n: int,
                shared_center: np.ndarray):
    """Unit vectors around a center: the shared one for coordinated
    sources, a fresh per-source one for organic."""
    if mode == MODE_COORDINATED:
        center = shared_center
    else:
        center = rng.standard_normal(spec.dim)
        center /= np.linalg.norm(center)
    noise = rng.standard_normal((n, spec.dim)) / np.sqrt(spec.dim)
    vecs = center + spec.embedding_cluster_spread * noise
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return vecs


def generate(spec: GenSpec, mode: str, out_dir) -> GenResult:
    """Write one labeled stream: records JSONL plus its vector file.

    Deterministic per (spec, mode). Source names carry the mode prefix
    ("coordinated_00", "organic_01", ...) so downstream validation can
    recover the ground-truth label from the ranking alone.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode: {mode!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng([spec.seed, MODES.index(mode)])

    vocab = _vocabulary(rng, spec.vocab_size)
    shared_templates = (
        _templates(rng, vocab, spec.template_pool_size)
        if mode == MODE_COORDINATED and spec.template_pool_size > 0 else []
    )
    shared_center = rng.standard_normal(spec.dim)
    shared_center /= np.linalg.norm(shared_center)

    sources = tuple(f"{mode}_{i:02d}" for i in range(spec.n_sources))
    records_path = out_dir / f"{spec.event_id}_{mode}.jsonl"
    vectors_path = out_dir / f"{spec.event_id}_{mode}.vec"

    all_vectors: dict[str, np.ndarray] = {}
    with open(records_path, "w", encoding="utf-8") as fh:
        for source in sources:
            n = spec.n_messages_per_source
            local_templates = (
                _templates(rng, vocab, max(1, spec.template_pool_size // 2))
                if shared_templates else []
            )
            stamps = _timestamps(rng, spec, n)
            vecs = _embeddings(rng, spec, mode, n, shared_center)
            for i in range(n):
                if shared_templates and rng.random() < spec.shared_phrase_rate:
                    text = _render_template(rng, shared_templates[
                        int(rng.integers(0, len(shared_templates)))])
                elif local_templates:
                    text = _render_template(rng, local_templates[
                        int(rng.integers(0, len(local_templates)))])
                else:
                    text = _organic_message(rng, vocab)
                rec_id = f"{source}-{i:05d}"
                line = {
                    "platform": "telegram",
                    "event_id": spec.event_id,
                    "source": source,
                    "id": rec_id,
                    "date": _iso(stamps[i]),
                    "text": text,
                    "views": int(rng.integers(50, 5000)),
                    "forwards": int(rng.integers(0, 120)),
                }
                fh.write(json.dumps(line, ensure_ascii=False) + "\n")
                all_vectors[rec_id] = vecs[i]
    write_vector_file(all_vectors, vectors_path, dim=spec.dim)
    return GenResult(records_path, vectors_path, event_window(spec), sources)


def _iso(epoch: int) -> str:
    from datetime import datetime, timezone

    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ"
    )


def merge_vector_files(paths, out_path) -> None:
    """Concatenate vector files that share one dimension into one file."""
    from .semantic import load_embeddings

    merged: dict[str, np.ndarray] = {}
    dim = None
    for p in paths:
        store = load_embeddings(p)
        if dim is None:
            dim = store.dim
        elif store.dim != dim:
            raise ValueError(f"dimension mismatch while merging: {p}")
        merged.update(store.vectors)
    write_vector_file(merged, out_path, dim=dim)
