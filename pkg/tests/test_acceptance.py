"""Acceptance gate: every criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS line per
criterion. The large-corpus reproduction criterion is conditional on a
locally available released corpus (see NARRACOORD_REPRO_DIR below) and
skips otherwise.
"""

import csv
import json
import math
import os
import random
import time
from pathlib import Path

import numpy as np
import pytest

from narracoord.config import PipelineConfig, load_config
from narracoord.corpus import EventWindow
from narracoord.lexical import mattr, word_entropy, char_trigram_entropy
from narracoord.pipeline import run_pipeline
from narracoord.semantic import mean_pairwise_cosine
from narracoord.snc import ComponentVector, build_snc_rows, snc_score
from narracoord.synthgen import (
    coordinated_spec,
    generate,
    merge_vector_files,
    organic_spec,
)
from narracoord.temporal import burstiness, burstiness_from_gaps
from conftest import FIXTURES, GOLDEN, utc

from datetime import timedelta


def _ok(line):
    print(f"PASS: {line}")


# ----------------------------------------------------------- criterion 1

def test_mattr_rolling_equals_naive_oracle():
    """200 random token streams, N <= 5000, w in {5, 50, 500}, exact."""
    rng = random.Random(101)
    started = time.monotonic()
    for i in range(200):
        n = rng.randint(1, 5000)
        vocab = rng.choice([3, 20, 200, 5000])
        tokens = [f"w{rng.randrange(vocab)}" for _ in range(n)]
        w = (5, 50, 500)[i % 3]
        rolling = mattr(tokens, w)
        if n < w:
            naive = len(set(tokens)) / n
        else:
            k = n - w + 1
            naive = sum(
                len(set(tokens[j:j + w])) for j in range(k)
            ) / (w * k)
        assert rolling == naive, (i, n, w)
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"took {elapsed:.1f}s"
    _ok(f"MATTR rolling == naive recount on 200 streams "
        f"(exact, {elapsed:.1f}s < 10s)")


# ----------------------------------------------------------- criterion 2

def test_entropy_hand_derived_fixtures():
    assert abs(word_entropy(["a", "a", "b", "c"]) - 1.5) <= 1e-12
    assert abs(word_entropy(["a", "b"]) - 1.0) <= 1e-12
    assert word_entropy(["a", "a", "a"]) == 0.0
    assert char_trigram_entropy("aaaa") == 0.0
    assert abs(char_trigram_entropy("abab") - 1.0) <= 1e-12
    # "abcd" holds two uniform trigrams {abc, bcd}: 1 bit
    assert abs(char_trigram_entropy("abcd") - 1.0) <= 1e-12
    _ok("entropy fixtures match hand-derived values to 1e-12")


# ----------------------------------------------------------- criterion 3

def test_burstiness_exactness_and_invariances():
    stamps = [utc(2025, 6, 1) + timedelta(hours=i) for i in range(100)]
    assert burstiness(stamps).burstiness == -1.0

    rng = np.random.default_rng(303)
    for _ in range(100):
        n = int(rng.integers(2, 300))
        gaps = rng.lognormal(mean=2.0, sigma=1.5, size=n)
        base = burstiness_from_gaps(gaps).burstiness

        stamps = [utc(2025, 6, 1)]
        for g in gaps:
            stamps.append(stamps[-1] + timedelta(seconds=float(g)))
        shift = timedelta(seconds=round(float(rng.uniform(-1e6, 1e6))))
        translated = burstiness([t + shift for t in stamps]).burstiness
        assert abs(translated - burstiness(stamps).burstiness) <= 1e-12

        c = float(rng.uniform(1e-3, 1e3))
        scaled = burstiness_from_gaps(gaps * c).burstiness
        assert abs(scaled - base) <= 1e-12
    _ok("burstiness: clock-like == -1 exactly; translation/scaling "
        "invariance on 100 streams to 1e-12")


# ----------------------------------------------------------- criterion 4

def test_h_identity_against_double_loop():
    rng = np.random.default_rng(404)
    for _ in range(50):
        n = int(rng.integers(2, 201))
        vectors = rng.standard_normal((n, 384))
        vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
        fast = mean_pairwise_cosine(vectors)
        total = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                total += float(np.dot(vectors[i], vectors[j]))
        slow = 2 * total / (n * (n - 1))
        assert abs(fast - slow) <= 1e-9
    identical = np.tile(np.array([[0.6, 0.8]]), (7, 1))
    assert abs(mean_pairwise_cosine(identical) - 1.0) <= 1e-12
    orthogonal = np.eye(2)
    assert abs(mean_pairwise_cosine(orthogonal)) <= 1e-12
    _ok("H(C) mean-vector identity == pairwise double loop to 1e-9 on 50 "
        "random sets; identical -> 1.0; orthogonal -> 0.0")


# ----------------------------------------------------------- criterion 5

def test_snc_algebra():
    assert snc_score(ComponentVector(h=1, b=1, r=1, d=0)) == 0.75

    rng = np.random.default_rng(505)
    for _ in range(500):
        value = snc_score(ComponentVector(*rng.random(4)))
        assert -0.25 - 1e-12 <= value <= 0.75 + 1e-12

    # rescaling fixtures, derived by hand
    assert snc_score(ComponentVector(h=1)) == 1.0
    two = snc_score(ComponentVector(h=0.6, d=0.2))
    assert abs(two - 0.2) <= 1e-12  # (0.25*0.6 - 0.25*0.2) / 0.5

    names = ("h", "b", "r", "d")
    for _ in range(50):
        n = int(rng.integers(2, 9))
        table = {
            ("telegram", f"s{i}"): ComponentVector(*rng.random(4))
            for i in range(n)
        }
        base = build_snc_rows("ev", table)
        comp = int(rng.integers(0, 4))
        scale = float(rng.uniform(0.05, 20.0))
        shift = float(rng.uniform(-10.0, 10.0))
        tweaked = {}
        for key, cv in table.items():
            values = dict(zip(names, cv.as_tuple()))
            values[names[comp]] = values[names[comp]] * scale + shift
            tweaked[key] = ComponentVector(**values)
        other = build_snc_rows("ev", tweaked)
        assert [(r.source, r.rank) for r in base] == \
            [(r.source, r.rank) for r in other]
    _ok("SNC algebra: range, exact full-score 0.75, rescaling fixtures, "
        "affine rank invariance on 50 tables")


# ----------------------------------------------------------- criterion 6

def test_end_to_end_separation_battery(tmp_path):
    """20 seeds, 4 coordinated + 4 organic sources per generated event."""
    started = time.monotonic()
    gaps = []
    for seed in range(20):
        gen_dir = tmp_path / f"seed{seed}"
        coord = generate(coordinated_spec(seed), "coordinated", gen_dir)
        org = generate(organic_spec(seed), "organic", gen_dir)
        merged = gen_dir / "merged.vec"
        merge_vector_files([coord.vectors_path, org.vectors_path], merged)
        cfg = PipelineConfig(events=(coord.window,), seed=seed)
        result = run_pipeline(
            cfg,
            [("telegram", coord.records_path), ("telegram", org.records_path)],
            merged,
            gen_dir / "out",
            stages={"metrics", "snc"},
        )
        rows = result.snc_rows
        assert len(rows) == 8, seed
        coord_rows = [r for r in rows if r.source.startswith("coordinated")]
        org_rows = [r for r in rows if r.source.startswith("organic")]
        worst_coord = max(r.rank for r in coord_rows)
        best_org = min(r.rank for r in org_rows)
        assert worst_coord < best_org, f"seed {seed}: ranking overlap"
        gap = (sum(r.snc for r in coord_rows) / 4
               - sum(r.snc for r in org_rows) / 4)
        gaps.append(gap)
    mean_gap = sum(gaps) / len(gaps)
    assert mean_gap >= 0.15, mean_gap
    elapsed = time.monotonic() - started
    assert elapsed < 120.0, f"took {elapsed:.1f}s"
    _ok(f"end-to-end separation: coordinated outrank organic on all 20 "
        f"seeds; mean SNC gap {mean_gap:.3f} >= 0.15 ({elapsed:.1f}s < 2min)")


# ----------------------------------------------------------- criterion 7

def test_pipeline_determinism(tmp_path):
    cfg = load_config(FIXTURES / "config.yaml")
    specs = [("telegram", FIXTURES / "telegram.jsonl"),
             ("reddit", FIXTURES / "reddit.jsonl")]
    outs = []
    for name in ("first", "second"):
        out = tmp_path / name
        run_pipeline(cfg, specs, FIXTURES / "embeddings.vec", out,
                     config_path=FIXTURES / "config.yaml")
        outs.append(out)
    rels = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*")
                  if p.is_file())
    assert rels == sorted(p.relative_to(outs[1]) for p in outs[1].rglob("*")
                          if p.is_file())
    for rel in rels:
        a, b = (outs[0] / rel).read_bytes(), (outs[1] / rel).read_bytes()
        if rel.name == "manifest.json":
            ja, jb = json.loads(a), json.loads(b)
            ja.pop("created_at"), jb.pop("created_at")
            assert ja == jb
        else:
            assert a == b, rel
    _ok("determinism: two runs byte-identical (manifest timestamp excluded)")


# ----------------------------------------------------------- criterion 8

def test_golden_outputs_unchanged(tmp_path):
    cfg = load_config(FIXTURES / "config.yaml")
    result = run_pipeline(
        cfg,
        [("telegram", FIXTURES / "telegram.jsonl"),
         ("reddit", FIXTURES / "reddit.jsonl")],
        FIXTURES / "embeddings.vec",
        tmp_path / "out",
        config_path=FIXTURES / "config.yaml",
    )
    golden = sorted(p.relative_to(GOLDEN) for p in GOLDEN.rglob("*")
                    if p.is_file())
    fresh = sorted(p.relative_to(result.out_dir)
                   for p in Path(result.out_dir).rglob("*") if p.is_file())
    assert fresh == golden
    n_checked = 0
    for rel in golden:
        if rel.name == "manifest.json":
            continue
        assert (result.out_dir / rel).read_bytes() == (GOLDEN / rel).read_bytes(), rel
        n_checked += 1
    # spot oracle checks keep the goldens honest against drift
    with open(GOLDEN / "volume_summary.csv", newline="") as fh:
        vol = {(r["event_id"], r["platform"]): r for r in csv.DictReader(fh)}
    assert int(vol[("alpha_offensive", "telegram")]["records"]) == 720
    assert int(vol[("alpha_offensive", "reddit")]["sources"]) == 1
    _ok(f"golden files: {n_checked} artifacts byte-identical")


# ------------------------------------------------ criterion 9 (conditional)

REPRO_DIR = os.environ.get("NARRACOORD_REPRO_DIR")


@pytest.mark.skipif(
    not REPRO_DIR,
    reason="released corpus not available (set NARRACOORD_REPRO_DIR to the "
    "directory holding telegram.jsonl, reddit.jsonl, embeddings.vec)",
)
def test_reproduce_released_rankings():
    """Conditional reproduction of the published per-window rankings."""
    base = Path(REPRO_DIR)
    cfg = load_config(base / "config.yaml" if (base / "config.yaml").exists()
                      else None)
    specs = [("telegram", base / "telegram.jsonl")]
    if (base / "reddit.jsonl").exists():
        specs.append(("reddit", base / "reddit.jsonl"))
    result = run_pipeline(cfg, specs, base / "embeddings.vec",
                          base / "_repro_out")
    rows = {}
    for row in result.snc_rows:
        rows.setdefault(row.event_id, []).append(row)

    first_windows = ("ukraine_war_general", "israel_gaza_general",
                     "trump_ukraine_diplomacy", "iran_israel_escalation")
    for event_id in first_windows:
        telegram = [r for r in rows[event_id] if r.platform == "telegram"]
        top = min(telegram, key=lambda r: r.rank)
        assert top.source == "IntelSlava", (event_id, top.source)
    for event_id, event_rows in rows.items():
        telegram = [r for r in event_rows if r.platform == "telegram"]
        last = max(telegram, key=lambda r: r.rank)
        assert last.source == "rybar", (event_id, last.source)

    ukraine = {r.source: r.snc for r in rows["ukraine_war_general"]}
    expected = {"IntelSlava": 0.450, "DDGeopolitics": 0.416,
                "wartranslated": 0.407, "rybar": 0.043}
    for source, value in expected.items():
        assert abs(ukraine[source] - value) <= 0.02, (source, ukraine[source])
    _ok("released-corpus reproduction: rankings and Ukraine-window values")
