#!/usr/bin/env python3
"""Walkthrough: loading raw exports and slicing them into event windows.

Builds a tiny Telegram-style JSONL file in a temp directory, loads it
through the normalizing ingester, flags within-source duplicates, and
slices the result around an anchored event window.
"""

import json
import tempfile
from datetime import date
from pathlib import Path

from narracoord import EventWindow, flag_duplicates, load_corpus, slice_corpus

RAW_LINES = [
    {"id": 1, "source": "alpha_wire", "date": "2025-06-08T09:00:00Z",
     "text": "Kharkiv: shelling reported on the northern edge", "views": 1200},
    {"id": 2, "source": "alpha_wire", "date": "2025-06-10T07:30:00Z",
     "text": "Offensive operations resume after the overnight pause"},
    {"id": 3, "source": "alpha_wire", "date": "2025-06-11T07:30:00Z",
     "text": "Offensive operations resume after the overnight pause"},  # repeat
    {"id": 4, "source": "ru_svodka", "date": "2025-06-12T10:00:00Z",
     "text": "Сводка: наступление продолжается на двух направлениях"},
    {"id": 5, "source": "ru_svodka", "date": "2025-06-30T10:00:00Z",
     "text": "Обстановка без существенных изменений, наступление замедлилось"},
    {"id": 6, "source": "alpha_wire", "date": "2025-06-12T10:05:00Z",
     "text": "short"},  # below the 10-character floor
    {"id": 7, "source": "alpha_wire", "date": "2025-06-12T10:06:00Z",
     "text": "Unrelated lifestyle segment about cooking"},  # no keyword
]

window = EventWindow(
    event_id="kharkiv_june",
    start=date(2025, 6, 1),
    end=date(2025, 7, 15),
    t0=date(2025, 6, 10),
    keywords=("kharkiv", "offensive", "наступ"),
)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "telegram.jsonl"
    path.write_text(
        "\n".join(json.dumps(l, ensure_ascii=False) for l in RAW_LINES) + "\n"
    )
    records, stats = load_corpus([path], "telegram")

print(f"loaded {stats.records_loaded} of {stats.lines_read} lines "
      f"(dropped: {stats.dropped_short} short)")
records = flag_duplicates(records)
for r in records:
    print(f"  {r.record_id} {r.timestamp:%m-%d %H:%M} lang={r.lang:<14} "
          f"dup={r.dup_flag} {r.text[:44]!r}")

print("\nper-period slices (acute = first 14 days from t0, inclusive):")
for period in ("pre", "acute", "post", "full"):
    slices = slice_corpus(records, window, period)
    counts = {src: len(slc) for (_, src), slc in sorted(slices.items())}
    print(f"  {period:<6} {counts}")
