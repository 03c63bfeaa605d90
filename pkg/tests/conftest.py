import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from narracoord.corpus import (
    Record,
    SourceSlice,
    TELEGRAM,
    detect_language,
    text_hash,
)

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def utc(*args) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


def make_record(text="some message text", ts=None, source="chan_a",
                platform=TELEGRAM, record_id=None, event_id="ev", **kw):
    ts = ts or utc(2025, 6, 1, 12, 0, 0)
    if record_id is None:
        make_record.counter += 1
        record_id = f"r{make_record.counter:06d}"
    return Record(
        platform=platform,
        event_id=event_id,
        source=source,
        record_id=record_id,
        timestamp=ts,
        text=text,
        lang=detect_language(text),
        text_hash=text_hash(text),
        **kw,
    )


make_record.counter = 0


def make_slice(records, event_id="ev"):
    records = sorted(records, key=lambda r: (r.timestamp, r.record_id))
    first = records[0]
    return SourceSlice(
        event_id=event_id,
        platform=first.platform,
        source=first.source,
        records=tuple(records),
    )


def write_jsonl(path, lines):
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            if isinstance(line, str):
                fh.write(line + "\n")
            else:
                fh.write(json.dumps(line, ensure_ascii=False) + "\n")
    return path


@pytest.fixture
def tmp_out(tmp_path):
    return tmp_path / "out"
