"""Rhetorical repetition signals: shared trigram templates, duplicates,
hashtags, and URL domains across sources."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from urllib.parse import urlsplit

from .corpus import SourceSlice
from .lexical import tokenize

TOP_TRIGRAMS = 100

_HASHTAG_RE = re.compile(r"#(\w+)")
_URL_FIND_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_TRAILING_PUNCT = ".,;:!?)]}'\"»”’"


@dataclass(frozen=True)
class TrigramProfile:
    """A source's most frequent word trigrams with their counts."""

    source: str
    top_trigrams: tuple[str, ...]
    freq: dict[str, int]


@dataclass(frozen=True)
class RhetoricScore:
    r_score: float | None
    near_dup_rate: float
    peer_count: int


def message_trigrams(tokens) -> list[str]:
    return [" ".join(tokens[i : i + 3]) for i in range(len(tokens) - 2)]


def trigram_profile(slc: SourceSlice, top_n: int = TOP_TRIGRAMS) -> TrigramProfile:
    """Top-N word trigrams of a slice, never spanning message boundaries.

    Ties at the cut break deterministically: count descending, then
    trigram ascending. A slice without any 3-token message yields an
    empty profile, which participates as the empty set in Jaccard.
    """
    counts: Counter = Counter()
    for r in slc.records:
        counts.update(message_trigrams(tokenize(r.text)))
    top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    return TrigramProfile(
        source=slc.source,
        top_trigrams=tuple(t for t, _ in top),
        freq={t: c for t, c in top},
    )


def trigram_jaccard(a: TrigramProfile, b: TrigramProfile) -> float:
    """Jaccard over top-trigram sets; two empty profiles score 0."""
    sa, sb = set(a.top_trigrams), set(b.top_trigrams)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def r_score(profiles, target: str) -> float | None:
    """Mean trigram Jaccard of ``target`` against every peer profile."""
    by_source = {p.source: p for p in profiles}
    if target not in by_source:
        raise ValueError(f"no profile for source {target!r}")
    peers = [p for p in profiles if p.source != target]
    if not peers:
        return None
    mine = by_source[target]
    return sum(trigram_jaccard(mine, p) for p in peers) / len(peers)


def near_dup_rate(slc: SourceSlice) -> float:
    """Fraction of the slice's records flagged as within-source duplicates."""
    if not slc.records:
        raise ValueError("near_dup_rate needs a non-empty slice")
    return sum(1 for r in slc.records if r.dup_flag) / len(slc.records)


def _shared_items(slices, extract) -> list[tuple[str, int, int]]:
    per_source: dict[tuple[str, str], Counter] = {}
    for slc in slices:
        c = per_source.setdefault((slc.platform, slc.source), Counter())
        for r in slc.records:
            c.update(extract(r.text))
    totals: Counter = Counter()
    source_counts: Counter = Counter()
    for c in per_source.values():
        totals.update(c)
        source_counts.update(c.keys())
    shared = [
        (item, source_counts[item], totals[item])
        for item in totals
        if source_counts[item] >= 2
    ]
    shared.sort(key=lambda row: (-row[1], -row[2], row[0]))
    return shared


def extract_hashtags(text: str) -> list[str]:
    """Case-folded hashtag bodies; Unicode letters allowed, so Cyrillic
    hashtags match."""
    return [m.casefold() for m in _HASHTAG_RE.findall(text)]


def extract_domains(text: str) -> list[str]:
    """Registrable hosts from URLs: scheme/path stripped, leading www. too."""
    domains = []
    for m in _URL_FIND_RE.findall(text):
        url = m.rstrip(_TRAILING_PUNCT)
        if url.lower().startswith("www."):
            url = "http://" + url
        host = urlsplit(url).netloc.lower()
        host = host.rsplit("@", 1)[-1].split(":", 1)[0]
        if host.startswith("www."):
            host = host[4:]
        if host:
            domains.append(host)
    return domains


def shared_hashtags(slices) -> list[tuple[str, int, int]]:
    """Hashtags used by >= 2 sources: (hashtag, source_count, occurrences),
    sorted by source count, then total occurrences, descending."""
    return _shared_items(slices, extract_hashtags)


def shared_domains(slices) -> list[tuple[str, int, int]]:
    """URL domains used by >= 2 sources, same shape/order as shared_hashtags."""
    return _shared_items(slices, extract_domains)


def shared_trigrams(profiles) -> list[dict]:
    """Trigrams present in >= 2 sources' top lists, with per-source counts.

    Returns dicts ordered by (source_count desc, total desc, trigram asc);
    mirrors the cross-source phrase tables in the report output.
    """
    holders: dict[str, dict[str, int]] = {}
    for p in profiles:
        for t in p.top_trigrams:
            holders.setdefault(t, {})[p.source] = p.freq[t]
    rows = [
        {
            "trigram": t,
            "source_count": len(per_src),
            "total_occurrences": sum(per_src.values()),
            "sources": dict(sorted(per_src.items())),
        }
        for t, per_src in holders.items()
        if len(per_src) >= 2
    ]
    rows.sort(key=lambda d: (-d["source_count"], -d["total_occurrences"], d["trigram"]))
    return rows
