"""Temporal coordination signals: burstiness, co-activity, hourly overlap.

All bins are aligned to the UTC epoch (for 6-hour bins: 00:00, 06:00,
12:00, 18:00), never to window or data boundaries, so results are
reproducible regardless of how a window was cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .corpus import EventWindow, _day_start

COACTIVITY_BIN_HOURS = 6


@dataclass(frozen=True)
class TemporalScore:
    burstiness: float
    mean_iat_s: float
    n_gaps: int


@dataclass(frozen=True)
class CoActivitySeries:
    """Distinct-source counts per aligned bin, contiguous over the span."""

    bin_width_s: int
    bins: tuple[tuple[datetime, int], ...]
    n_sources: int

    @property
    def mean_active_sources(self) -> float:
        return float(np.mean([c for _, c in self.bins])) if self.bins else 0.0

    @property
    def full_coactivity_fraction(self) -> float:
        if not self.bins:
            return 0.0
        return sum(1 for _, c in self.bins if c == self.n_sources) / len(self.bins)


@dataclass(frozen=True)
class OverlapMatrix:
    """Pairwise Jaccard of active 1-hour bins; NaN rows mark empty sources."""

    sources: tuple[tuple[str, str], ...]  # (platform, source), row order
    jaccard: np.ndarray


def burstiness_from_gaps(gaps) -> TemporalScore | None:
    """Burstiness index (sigma - mu)/(sigma + mu) over inter-event gaps.

    Uses the population standard deviation: the observed gaps are the
    whole population, not a sample. Undefined (None) for fewer than two
    gaps or an all-zero gap sequence.
    """
    gaps = np.asarray(gaps, dtype=float)
    if gaps.size < 2:
        return None
    mu = float(gaps.mean())
    sigma = float(gaps.std())
    if mu == 0.0 and sigma == 0.0:
        return None
    return TemporalScore(
        burstiness=(sigma - mu) / (sigma + mu),
        mean_iat_s=mu,
        n_gaps=int(gaps.size),
    )


def burstiness(timestamps) -> TemporalScore | None:
    """Burstiness over a sorted timestamp sequence; needs >= 3 timestamps.

    Duplicate timestamps contribute zero-length gaps and are kept; they
    legitimately increase burstiness.
    """
    if len(timestamps) < 3:
        return None
    epochs = np.array([t.timestamp() for t in timestamps], dtype=float)
    return burstiness_from_gaps(np.diff(epochs))


def _bin_index(ts: datetime, bin_s: int) -> int:
    return int(ts.timestamp()) // bin_s


def _bin_start(index: int, bin_s: int) -> datetime:
    return datetime.fromtimestamp(index * bin_s, tz=timezone.utc)


def coactivity(slices, bin_hours: int = COACTIVITY_BIN_HOURS,
               window: EventWindow | None = None) -> CoActivitySeries:
    """Count distinct sources posting in each aligned bin.

    ``slices`` is an iterable of SourceSlice (one event, normally the
    Telegram slices). The series covers every bin intersecting the event
    window when one is given, otherwise the span from first to last
    record; empty bins inside the span are reported with count 0.
    """
    slices = list(slices)
    if not slices:
        raise ValueError("coactivity needs at least one slice")
    bin_s = bin_hours * 3600
    active: dict[int, set[tuple[str, str]]] = {}
    for slc in slices:
        key = (slc.platform, slc.source)
        for r in slc.records:
            active.setdefault(_bin_index(r.timestamp, bin_s), set()).add(key)

    if window is not None:
        lo = _bin_index(_day_start(window.start), bin_s)
        hi_instant = _day_start(window.end).timestamp() + 86400 - 1
        hi = int(hi_instant) // bin_s
    elif active:
        lo, hi = min(active), max(active)
    else:
        return CoActivitySeries(bin_s, (), len(slices))

    bins = tuple(
        (_bin_start(i, bin_s), len(active.get(i, ())))
        for i in range(lo, hi + 1)
    )
    return CoActivitySeries(bin_s, bins, len(slices))


def hourly_overlap(slices) -> OverlapMatrix:
    """Pairwise Jaccard similarity of each source's active 1-hour bins.

    A source with no posts gets a NaN row/column; the diagonal is 1 for
    every source with at least one active bin.
    """
    slices = sorted(slices, key=lambda s: (s.platform, s.source))
    if len(slices) < 2:
        raise ValueError("hourly_overlap needs at least two slices")
    bin_s = 3600
    actives = [
        frozenset(_bin_index(r.timestamp, bin_s) for r in slc.records)
        for slc in slices
    ]
    n = len(slices)
    mat = np.full((n, n), np.nan)
    for i in range(n):
        if not actives[i]:
            continue
        mat[i, i] = 1.0
        for j in range(i + 1, n):
            if not actives[j]:
                continue
            inter = len(actives[i] & actives[j])
            union = len(actives[i] | actives[j])
            mat[i, j] = mat[j, i] = inter / union
    return OverlapMatrix(
        sources=tuple((s.platform, s.source) for s in slices),
        jaccard=mat,
    )


def posting_heatmap(slc) -> np.ndarray:
    """7x24 matrix of row-normalized posting shares by UTC weekday and hour.

    Rows are weekdays (Monday = 0); all-zero rows stay zero.
    """
    counts = np.zeros((7, 24))
    for r in slc.records:
        counts[r.timestamp.weekday(), r.timestamp.hour] += 1
    sums = counts.sum(axis=1, keepdims=True)
    shares = np.zeros_like(counts)
    np.divide(counts, sums, out=shares, where=sums > 0)
    return shares
