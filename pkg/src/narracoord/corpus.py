"""Corpus loading, normalization, and event-window slicing.

Raw platform exports (line-delimited JSON) are normalized into a single
:class:`Record` schema. Downstream metrics never touch raw platform
records; they consume :class:`SourceSlice` objects produced by
:func:`slice_corpus`.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone

TELEGRAM = "telegram"
REDDIT = "reddit"
PLATFORMS = (TELEGRAM, REDDIT)

LANG_RU = "ru"
LANG_EN_OR_UNKNOWN = "en_or_unknown"

PERIOD_PRE = "pre"
PERIOD_ACUTE = "acute"
PERIOD_POST = "post"
PERIOD_FULL = "full"
PERIODS = (PERIOD_PRE, PERIOD_ACUTE, PERIOD_POST, PERIOD_FULL)

ACUTE_DAYS = 14
MIN_TEXT_CHARS = 10
CYRILLIC_RATIO_THRESHOLD = 0.15

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_WS_RE = re.compile(r"\s+")


class CorpusError(Exception):
    """Fatal corpus input problem (unreadable file, unknown platform, ...)."""


@dataclass(frozen=True)
class Record:
    """One normalized message/post/comment."""

    platform: str
    event_id: str
    source: str
    record_id: str
    timestamp: datetime  # tz-aware UTC, second precision
    text: str
    views: int | None = None
    forwards: int | None = None
    score: int | None = None
    num_comments: int | None = None
    reply_to: str | None = None
    lang: str = LANG_EN_OR_UNKNOWN
    dup_flag: bool = False
    text_hash: int = 0

    @property
    def char_len(self) -> int:
        return len(self.text.strip())

    @property
    def word_len(self) -> int:
        return len(self.text.split())


@dataclass(frozen=True)
class EventWindow:
    """Named collection window with optional anchor date and keyword filter."""

    event_id: str
    start: date
    end: date
    t0: date | None = None
    keywords: tuple[str, ...] = ()

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"{self.event_id}: start must precede end")
        if self.t0 is not None and not (self.start <= self.t0 <= self.end):
            raise ValueError(f"{self.event_id}: t0 outside [start, end]")
        object.__setattr__(self, "keywords", tuple(k.lower() for k in self.keywords))


@dataclass(frozen=True)
class SourceSlice:
    """All records for one (source, platform, event window), time-ordered."""

    event_id: str
    platform: str
    source: str
    records: tuple[Record, ...]

    def __len__(self) -> int:
        return len(self.records)

    @property
    def timestamps(self) -> list[datetime]:
        return [r.timestamp for r in self.records]

    @property
    def lang_majority(self) -> str:
        """Strict-majority language tag; ties fall back to en_or_unknown."""
        n_ru = sum(1 for r in self.records if r.lang == LANG_RU)
        return LANG_RU if 2 * n_ru > len(self.records) else LANG_EN_OR_UNKNOWN


@dataclass
class LoadStats:
    """Per-load bookkeeping; malformed input is counted, never fatal."""

    lines_read: int = 0
    records_loaded: int = 0
    dropped_empty: int = 0
    dropped_short: int = 0
    dropped_duplicate_id: int = 0
    skipped_malformed: int = 0


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a. Stable across runs and platforms, unlike hash()."""
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def _sha256_64(data: bytes) -> int:
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


HASH_ALGORITHMS = {
    "fnv1a64": fnv1a64,
    "sha256_64": _sha256_64,
}


def text_hash(text: str, algorithm: str = "fnv1a64") -> int:
    """Hash of the normalized text, using the config-pinned algorithm."""
    try:
        fn = HASH_ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown hash algorithm: {algorithm!r}") from None
    return fn(normalize_for_hash(text).encode("utf-8"))


def detect_language(text: str) -> str:
    """Cyrillic-ratio heuristic over alphabetic characters only.

    Returns ``ru`` iff Cyrillic letters make up more than 15% of all
    alphabetic characters. Text with no alphabetic characters is
    ``en_or_unknown``.
    """
    alpha = 0
    cyr = 0
    for ch in text:
        if ch.isalpha():
            alpha += 1
            if 0x0400 <= ord(ch) <= 0x052F:
                cyr += 1
    if alpha == 0:
        return LANG_EN_OR_UNKNOWN
    return LANG_RU if cyr / alpha > CYRILLIC_RATIO_THRESHOLD else LANG_EN_OR_UNKNOWN


def normalize_for_hash(text: str) -> str:
    """Canonical form used for duplicate detection.

    Lowercase, URLs removed, punctuation stripped (except ``#`` and ``@``
    so hashtag/mention identity survives), whitespace collapsed.
    """
    t = _URL_RE.sub(" ", text.lower())
    t = "".join(c if c.isalnum() or c.isspace() or c in "#@" else " " for c in t)
    return _WS_RE.sub(" ", t).strip()


def _parse_timestamp(value) -> datetime:
    """Parse ISO-8601 (Z or offset) or epoch seconds into UTC, second precision."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, (int, float)):
        dt = datetime.fromtimestamp(int(value), tz=timezone.utc)
    else:
        s = str(value).strip()
        if s.endswith(("Z", "z")):
            s = s[:-1] + "+00:00"
        dt = datetime.fromisoformat(s)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).replace(microsecond=0)


def _first_key(raw: dict, keys) -> object | None:
    for k in keys:
        if k in raw and raw[k] is not None:
            return raw[k]
    return None


def _opt_count(raw: dict, keys) -> int | None:
    """Optional non-negative counter; malformed or negative becomes None."""
    v = _first_key(raw, keys)
    if v is None:
        return None
    try:
        n = int(v)
    except (TypeError, ValueError):
        return None
    return n if n >= 0 else None


def _opt_int(raw: dict, keys) -> int | None:
    v = _first_key(raw, keys)
    if v is None:
        return None
    try:
        return int(v)
    except (TypeError, ValueError):
        return None


# title column first, then exactly one body-ish column
_BODY_KEYS = {
    TELEGRAM: ("text", "message"),
    REDDIT: ("selftext", "body", "text"),
}
_ID_KEYS = {
    TELEGRAM: ("message_id", "id", "record_id"),
    REDDIT: ("id", "name", "record_id"),
}
_TS_KEYS = ("timestamp", "ts", "date", "created_utc")
_SOURCE_KEYS = {
    TELEGRAM: ("source", "channel"),
    REDDIT: ("source", "subreddit"),
}


def _normalize_line(raw: dict, platform: str, hash_algorithm: str) -> Record | None:
    """One raw platform record -> Record, or None when text is droppable.

    Raises ValueError when a mandatory field (timestamp, source, id) is
    missing or unparseable; the loader counts those as malformed.
    """
    ts_raw = _first_key(raw, _TS_KEYS)
    source = _first_key(raw, _SOURCE_KEYS[platform])
    rec_id = _first_key(raw, _ID_KEYS[platform])
    if ts_raw is None or source is None or rec_id is None:
        raise ValueError("missing mandatory field")
    timestamp = _parse_timestamp(ts_raw)

    parts = []
    title = raw.get("title")
    if isinstance(title, str) and title:
        parts.append(title)
    body = _first_key(raw, _BODY_KEYS[platform])
    if isinstance(body, str) and body:
        parts.append(body)
    text = "\n".join(parts)

    if platform == TELEGRAM:
        views = _opt_count(raw, ("views",))
        forwards = _opt_count(raw, ("forwards",))
        score = None
        num_comments = None
    else:
        views = None
        forwards = None
        score = _opt_int(raw, ("score",))
        num_comments = _opt_count(raw, ("num_comments",))

    reply_to = _first_key(raw, ("reply_to", "parent_id"))

    return Record(
        platform=platform,
        event_id=str(raw.get("event_id", "") or ""),
        source=str(source),
        record_id=str(rec_id),
        timestamp=timestamp,
        text=text,
        views=views,
        forwards=forwards,
        score=score,
        num_comments=num_comments,
        reply_to=str(reply_to) if reply_to is not None else None,
        lang=detect_language(text),
        text_hash=text_hash(text, hash_algorithm),
    )


def load_corpus(paths, platform: str, hash_algorithm: str = "fnv1a64"):
    """Load line-delimited JSON exports into normalized Records.

    Returns ``(records, stats)``. Records shorter than 10 characters
    (after stripping) and media-only records are dropped; malformed lines
    are skipped and counted. Duplicate (platform, record_id) lines keep
    the first occurrence, which makes loading idempotent.

    Raises :class:`CorpusError` for an unreadable file or unknown platform.
    """
    if platform not in PLATFORMS:
        raise CorpusError(f"unknown platform: {platform!r}")
    if isinstance(paths, (str, bytes)) or hasattr(paths, "__fspath__"):
        paths = [paths]

    stats = LoadStats()
    records: list[Record] = []
    seen_ids: set[str] = set()
    for path in paths:
        try:
            fh = open(path, "r", encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
        with fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                stats.lines_read += 1
                try:
                    raw = json.loads(line)
                    if not isinstance(raw, dict):
                        raise ValueError("line is not a JSON object")
                    rec = _normalize_line(raw, platform, hash_algorithm)
                except (ValueError, TypeError, OverflowError):
                    stats.skipped_malformed += 1
                    continue
                stripped_len = rec.char_len
                if stripped_len == 0:
                    stats.dropped_empty += 1
                    continue
                if stripped_len < MIN_TEXT_CHARS:
                    stats.dropped_short += 1
                    continue
                if rec.record_id in seen_ids:
                    stats.dropped_duplicate_id += 1
                    continue
                seen_ids.add(rec.record_id)
                records.append(rec)
                stats.records_loaded += 1
    return records, stats


def flag_duplicates(records) -> list[Record]:
    """Flag repeats of (platform, source, text_hash) in timestamp order.

    The first occurrence keeps ``dup_flag=False``; every later record with
    the same key is flagged. Nothing is removed. Ties on timestamp break
    by record_id so the result is independent of input order. Returns a
    new, timestamp-sorted list.
    """
    ordered = sorted(records, key=lambda r: (r.timestamp, r.record_id))
    seen: set[tuple[str, str, int]] = set()
    out = []
    for r in ordered:
        key = (r.platform, r.source, r.text_hash)
        dup = key in seen
        seen.add(key)
        out.append(dataclasses.replace(r, dup_flag=dup) if dup != r.dup_flag else r)
    return out


def _day_start(d: date) -> datetime:
    return datetime(d.year, d.month, d.day, tzinfo=timezone.utc)


def period_bounds(window: EventWindow, period: str) -> tuple[datetime, datetime, bool, bool]:
    """Resolve a period label to (lo, hi, lo_inclusive, hi_inclusive) instants.

    The acute period is closed on both ends: [t0, t0 + 14 d]. The full
    window covers the start date through the whole end date.
    """
    if period not in PERIODS:
        raise ValueError(f"unknown period: {period!r}")
    win_lo = _day_start(window.start)
    win_hi = _day_start(window.end) + timedelta(days=1)  # end date inclusive
    if period == PERIOD_FULL:
        return win_lo, win_hi, True, False
    if window.t0 is None:
        raise ValueError(f"window {window.event_id} has no anchor")
    t0 = _day_start(window.t0)
    acute_hi = t0 + timedelta(days=ACUTE_DAYS)
    if period == PERIOD_PRE:
        return win_lo, t0, True, False
    if period == PERIOD_ACUTE:
        return t0, acute_hi, True, True
    return acute_hi, win_hi, False, False  # post: (t0+14d, end]


def _in_period(ts: datetime, bounds) -> bool:
    lo, hi, lo_inc, hi_inc = bounds
    above = ts >= lo if lo_inc else ts > lo
    below = ts <= hi if hi_inc else ts < hi
    return above and below


def matches_keywords(text: str, window: EventWindow) -> bool:
    """Case-insensitive substring match; an empty keyword list keeps all."""
    if not window.keywords:
        return True
    lowered = text.lower()
    return any(kw in lowered for kw in window.keywords)


def slice_corpus(records, window: EventWindow, period: str = PERIOD_FULL):
    """Filter by keywords then period, group into per-source slices.

    Returns a dict mapping (platform, source) -> :class:`SourceSlice`.
    Raises ValueError when a non-full period is requested on a window
    without a t0 anchor.
    """
    bounds = period_bounds(window, period)
    grouped: dict[tuple[str, str], list[Record]] = {}
    for r in records:
        if not matches_keywords(r.text, window):
            continue
        if not _in_period(r.timestamp, bounds):
            continue
        grouped.setdefault((r.platform, r.source), []).append(r)

    slices = {}
    for (platform, source), recs in grouped.items():
        recs.sort(key=lambda r: (r.timestamp, r.record_id))
        slices[(platform, source)] = SourceSlice(
            event_id=window.event_id,
            platform=platform,
            source=source,
            records=tuple(
                r if r.event_id == window.event_id
                else dataclasses.replace(r, event_id=window.event_id)
                for r in recs
            ),
        )
    return slices
