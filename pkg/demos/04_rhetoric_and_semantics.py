#!/usr/bin/env python3
"""Walkthrough: shared phrase templates and embedding homogenization.

Two channels amplify the same talking points (plus hashtags and links),
a third covers the same event independently. Trigram overlap and shared
hashtag/domain tables expose the pair; cosine homogenization over unit
vectors shows how tight each channel's semantic footprint is.
"""

import random
from datetime import datetime, timedelta, timezone

import numpy as np

from narracoord import (
    EmbeddingStore,
    h_score,
    r_score,
    shared_domains,
    shared_hashtags,
    trigram_profile,
)
from narracoord.corpus import Record, SourceSlice, detect_language, text_hash
from narracoord.semantic import cross_source_matrix

rng = random.Random(23)
START = datetime(2025, 6, 1, tzinfo=timezone.utc)

TALKING_POINTS = (
    "peace deal collapses after marathon talks #breaking https://t.me/feed/1",
    "sources say missile stocks running low #analysis",
    "leaked memo reveals coordination between agencies https://example.org/memo",
    "officials deny involvement in overnight incident #breaking",
)
FILLER = ("harvest logistics report for the region", "transit prices edge up",
          "weather delays river crossings again", "local elections rescheduled")


def make_slice(source, lines):
    records = []
    for i, text in enumerate(lines):
        records.append(Record(
            platform="telegram", event_id="demo", source=source,
            record_id=f"{source}-{i:04d}",
            timestamp=START + timedelta(minutes=7 * i),
            text=text, lang=detect_language(text), text_hash=text_hash(text),
        ))
    return SourceSlice("demo", "telegram", source, tuple(records))


amp_a = make_slice("amp_a", [rng.choice(TALKING_POINTS) for _ in range(60)])
amp_b = make_slice("amp_b", [rng.choice(TALKING_POINTS) for _ in range(60)])
indie = make_slice("indie", [
    f"{rng.choice(FILLER)} item {i}" for i in range(60)
])

profiles = [trigram_profile(s) for s in (amp_a, amp_b, indie)]
print("mean trigram Jaccard against peers (top-100 sets):")
for source in ("amp_a", "amp_b", "indie"):
    print(f"  {source:<6} R = {r_score(profiles, source):.3f}")

print("\nhashtags shared by >= 2 sources:", shared_hashtags([amp_a, amp_b, indie]))
print("domains shared by >= 2 sources:", shared_domains([amp_a, amp_b, indie]))

# synthetic unit embeddings: the amplifiers share one tight cluster
gen = np.random.default_rng(5)
center = gen.standard_normal(64)
center /= np.linalg.norm(center)
vectors = {}
for slc, spread in ((amp_a, 0.15), (amp_b, 0.15), (indie, 1.5)):
    for r in slc.records:
        v = center + spread * gen.standard_normal(64) / 8
        vectors[r.record_id] = v / np.linalg.norm(v)
store = EmbeddingStore(dim=64, vectors=vectors)

print("\nwithin-source homogenization H (mean pairwise cosine):")
for slc in (amp_a, amp_b, indie):
    print(f"  {slc.source:<6} H = {h_score(slc, store, seed=1).h_score:.3f}")

keys, matrix = cross_source_matrix([amp_a, amp_b, indie], store, seed=1)
print("\ncross-source mean-cosine matrix (diagonal = within-source H):")
for i, (_, source) in enumerate(keys):
    row = "  ".join(f"{matrix[i, j]:6.3f}" for j in range(len(keys)))
    print(f"  {source:<6} {row}")
