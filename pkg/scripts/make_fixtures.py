#!/usr/bin/env python3
"""Regenerate the deterministic test fixture corpus and golden outputs.

The fixture corpus is small but exercises every ingestion path: two event
windows (one anchored), two Telegram channels (one mostly Russian), two
Reddit communities, exact duplicates, shared hashtags and URL domains,
sub-10-char and empty records, malformed lines, and an embeddings file
covering most (not all) records.

Usage:
    python scripts/make_fixtures.py            # rewrite tests/fixtures/
    python scripts/make_fixtures.py --golden   # also rewrite tests/golden/
"""

import argparse
import json
import random
import shutil
import sys
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np
import yaml

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"

SEED = 20250601

EN_WORDS = (
    "forces reported advancing near the eastern line overnight with "
    "artillery cover and drone support while officials urged calm and "
    "allies discussed further aid packages sanctions leverage talks "
    "defense systems corridor evacuation strikes counter measures "
    "statement briefing analysts warned escalation risks remain high"
).split()
RU_WORDS = (
    "сводка за сутки противник продолжает попытки наступления на "
    "восточном направлении артиллерия работает по позициям переброска "
    "резервов отмечена в районе обстановка остаётся напряжённой потери "
    "уточняются идут бои местного значения"
).split()
HASHTAGS = ("#breaking", "#frontline", "#сводка", "#analysis")
URLS = (
    "https://www.reuters.com/world/item-{n}",
    "https://t.me/mirror_feed/{n}",
    "https://apnews.com/hub/update-{n}",
    "https://example-local.net/post/{n}",
)

EVENTS = {
    "alpha_offensive": {
        "start": "2025-06-01", "end": "2025-07-15", "t0": "2025-06-10",
        "keywords": ["kharkiv", "offensive", "наступ"],
        "en_kw": ["Kharkiv", "offensive"], "ru_kw": ["наступления"],
    },
    "delta_summit": {
        "start": "2025-08-01", "end": "2025-09-15", "t0": "2025-08-20",
        "keywords": ["summit", "accord", "саммит"],
        "en_kw": ["summit", "accord"], "ru_kw": ["саммит"],
    },
}

SOURCES = (
    # (platform, source, language, records per event)
    ("telegram", "alpha_wire", "en", 260),
    ("telegram", "echo_brief", "en", 220),
    ("telegram", "ru_svodka", "ru", 240),
    ("reddit", "worldcrisis", "en", 280),
)

# stock phrases shared by the English Telegram channels, so their top
# trigram sets genuinely overlap (the Russian channel stays a structural
# zero against them)
STOCK_PHRASES = (
    "air defense systems engaged overnight",
    "officials urged calm while talks continue",
    "sources on the ground report heavy shelling",
    "no independent confirmation was available",
    "the ministry declined to comment further",
)


def iso(dt):
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def sentence(rng, words, kw, n_extra, stock_rate=0.0):
    body = [rng.choice(words) for _ in range(n_extra)]
    body.insert(rng.randrange(len(body) + 1), kw)
    if stock_rate and rng.random() < stock_rate:
        body.append(rng.choice(STOCK_PHRASES))
    if rng.random() < 0.25:
        body.append(rng.choice(HASHTAGS))
    if rng.random() < 0.15:
        body.append(rng.choice(URLS).format(n=rng.randrange(500)))
    return " ".join(body)


def make_records(rng):
    lines = {"telegram": [], "reddit": []}
    ids = []
    counter = 0
    for event_id, ev in EVENTS.items():
        start = datetime.fromisoformat(ev["start"] + "T00:00:00+00:00")
        end = datetime.fromisoformat(ev["end"] + "T00:00:00+00:00")
        span_s = int((end - start).total_seconds()) + 86399
        for platform, source, lang, count in SOURCES:
            dup_stock = []
            for i in range(count):
                counter += 1
                rec_id = f"{source[:2]}{counter:05d}"
                ts = start + timedelta(seconds=rng.randrange(span_s))
                words = RU_WORDS if lang == "ru" else EN_WORDS
                kws = ev["ru_kw"] if lang == "ru" else ev["en_kw"]
                stock = 0.35 if (platform == "telegram" and lang == "en") else 0.0
                text = sentence(rng, words, rng.choice(kws),
                                rng.randrange(8, 26), stock_rate=stock)
                # ~4% exact repeats of an earlier message from this source
                if dup_stock and rng.random() < 0.04:
                    text = rng.choice(dup_stock)
                elif rng.random() < 0.3:
                    dup_stock.append(text)
                if platform == "telegram":
                    line = {
                        "platform": platform, "source": source, "id": rec_id,
                        "date": iso(ts), "text": text,
                        "views": rng.randrange(100, 40000),
                        "forwards": rng.randrange(0, 400),
                    }
                else:
                    line = {
                        "platform": platform, "subreddit": source, "id": rec_id,
                        "created_utc": int(ts.timestamp()),
                        "score": rng.randrange(-5, 300),
                        "num_comments": rng.randrange(0, 60),
                    }
                    if rng.random() < 0.2:
                        line["title"] = text
                        line["selftext"] = sentence(
                            rng, EN_WORDS, rng.choice(ev["en_kw"]),
                            rng.randrange(10, 30))
                    else:
                        line["body"] = text
                lines[platform].append(line)
                ids.append(rec_id)
    # droppable and malformed material (telegram file only)
    lines["telegram"].extend([
        {"platform": "telegram", "source": "alpha_wire", "id": "drop1",
         "date": "2025-06-03T10:00:00Z", "text": ""},
        {"platform": "telegram", "source": "alpha_wire", "id": "drop2",
         "date": "2025-06-03T11:00:00Z", "text": "offensive"},  # 9 chars
        {"platform": "telegram", "source": "alpha_wire",
         "date": "2025-06-03T12:00:00Z", "text": "missing id drops out"},
        "non json garbage line {{{",
    ])
    return lines, ids


def make_embeddings(rng_np, ids, rng):
    """Vectors for ~85% of records; per-group clusters so H varies by source."""
    dim = 48
    centers = {}
    rows = []
    for rec_id in ids:
        if rng.random() < 0.15:
            continue
        group = rec_id[:2]
        if group not in centers:
            c = rng_np.standard_normal(dim)
            centers[group] = c / np.linalg.norm(c)
        spread = 0.4 if group in ("al", "ru") else 1.6
        v = centers[group] + spread * rng_np.standard_normal(dim) / np.sqrt(dim)
        v = v / np.linalg.norm(v)
        rows.append((rec_id, v))
    return dim, rows


def write_fixtures():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    rng_np = np.random.default_rng(SEED)

    lines, ids = make_records(rng)
    for platform, rows in lines.items():
        with open(FIXTURES / f"{platform}.jsonl", "w", encoding="utf-8") as fh:
            for row in rows:
                if isinstance(row, str):
                    fh.write(row + "\n")
                else:
                    fh.write(json.dumps(row, ensure_ascii=False) + "\n")

    dim, vec_rows = make_embeddings(rng_np, ids, rng)
    with open(FIXTURES / "embeddings.vec", "w", encoding="utf-8") as fh:
        fh.write(f"dim={dim} count={len(vec_rows)}\n")
        for rec_id, vec in vec_rows:
            fh.write(rec_id + " " + " ".join(repr(float(x)) for x in vec) + "\n")

    config = {
        "seed": 1234,
        "hash_algorithm": "fnv1a64",
        "mattr_window": 100,   # fixture sources are small
        "sample_cap": 300,
        "normalization_pool": "joint",
        "events": [
            {
                "event_id": event_id,
                "start": ev["start"],
                "end": ev["end"],
                "t0": ev["t0"],
                "keywords": ev["keywords"],
            }
            for event_id, ev in EVENTS.items()
        ],
    }
    with open(FIXTURES / "config.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(config, fh, allow_unicode=True, sort_keys=False)
    total = sum(len(v) for v in lines.values())
    print(f"fixtures: {total} raw lines, {len(vec_rows)} vectors -> {FIXTURES}")


def write_golden():
    sys.path.insert(0, str(ROOT / "src"))
    from narracoord.config import load_config
    from narracoord.pipeline import run_pipeline

    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    cfg = load_config(FIXTURES / "config.yaml")
    result = run_pipeline(
        cfg,
        [("telegram", FIXTURES / "telegram.jsonl"),
         ("reddit", FIXTURES / "reddit.jsonl")],
        FIXTURES / "embeddings.vec",
        GOLDEN,
        config_path=FIXTURES / "config.yaml",
    )
    print(f"golden: {len(result.written)} files -> {GOLDEN}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--golden", action="store_true",
                        help="also regenerate tests/golden/")
    args = parser.parse_args()
    write_fixtures()
    if args.golden:
        write_golden()
