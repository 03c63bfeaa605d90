"""Descriptive statistics: ECDF tables, volume summaries, language mix.

ECDFs are emitted as raw (value, cumulative fraction) series so any
plotting layer can render them; no binning happens here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import LANG_RU, PERIOD_FULL, slice_corpus

PERCENTILES = (25, 50, 75, 95)


@dataclass(frozen=True)
class EcdfTable:
    metric_name: str
    points: tuple[tuple[float, float], ...]  # (value, cum_fraction), ascending
    percentiles: dict[str, float]
    n: int = 0


@dataclass(frozen=True)
class VolumeSummary:
    event_id: str
    platform: str
    records: int
    sources: int
    span_days: int
    avg_per_day: float


@dataclass(frozen=True)
class LanguageRow:
    event_id: str
    platform: str
    source: str  # "(all)" for the platform aggregate
    records: int
    ru_records: int
    ru_fraction: float


def ecdf_percentile(sorted_values, p: int) -> float:
    """Inverse-ECDF (type-1) percentile: smallest value with F >= p/100."""
    n = len(sorted_values)
    if n == 0:
        raise ValueError("empty value list")
    if not 0 < p <= 100:
        raise ValueError("percentile must be in (0, 100]")
    k = -(-n * p // 100)  # ceil(n * p / 100) in exact integer arithmetic
    return sorted_values[k - 1]


def ecdf(values, metric_name: str = "") -> EcdfTable | None:
    """Empirical CDF with one point per distinct value; None when empty."""
    if values is None:
        return None
    xs = sorted(float(v) for v in values)
    if not xs:
        return None
    n = len(xs)
    points = []
    for i, v in enumerate(xs):
        if i + 1 == n or xs[i + 1] != v:
            points.append((v, (i + 1) / n))
    return EcdfTable(
        metric_name=metric_name,
        points=tuple(points),
        percentiles={f"p{p}": ecdf_percentile(xs, p) for p in PERCENTILES},
        n=n,
    )


def volume_summary(records, windows) -> list[VolumeSummary]:
    """Per (event, platform) record counts, source counts, span, and rate.

    Empty (event, platform) combinations are omitted. The span is the
    whole-day distance between first and last record, floored at one day
    so the daily average stays defined.
    """
    out = []
    for window in windows:
        slices = slice_corpus(records, window, PERIOD_FULL)
        per_platform: dict[str, list] = {}
        for (platform, _), slc in sorted(slices.items()):
            per_platform.setdefault(platform, []).append(slc)
        for platform, slcs in sorted(per_platform.items()):
            stamps = [r.timestamp for slc in slcs for r in slc.records]
            count = len(stamps)
            if count == 0:
                continue
            span = max(1, (max(stamps) - min(stamps)).days)
            out.append(
                VolumeSummary(
                    event_id=window.event_id,
                    platform=platform,
                    records=count,
                    sources=len(slcs),
                    span_days=span,
                    avg_per_day=count / span,
                )
            )
    return out


def language_composition(slices) -> list[LanguageRow]:
    """Russian-language share per source plus an "(all)" aggregate row per
    (event, platform)."""
    rows = []
    agg: dict[tuple[str, str], list[int]] = {}
    for slc in sorted(slices, key=lambda s: (s.event_id, s.platform, s.source)):
        total = len(slc.records)
        ru = sum(1 for r in slc.records if r.lang == LANG_RU)
        rows.append(
            LanguageRow(slc.event_id, slc.platform, slc.source,
                        total, ru, ru / total if total else 0.0)
        )
        bucket = agg.setdefault((slc.event_id, slc.platform), [0, 0])
        bucket[0] += total
        bucket[1] += ru
    for (event_id, platform), (total, ru) in sorted(agg.items()):
        rows.append(
            LanguageRow(event_id, platform, "(all)",
                        total, ru, ru / total if total else 0.0)
        )
    return rows


def inter_arrival_seconds(slc) -> list[float]:
    """Successive gaps (seconds) within one source, for IAT ECDFs."""
    stamps = [r.timestamp for r in slc.records]
    return [
        (b - a).total_seconds() for a, b in zip(stamps, stamps[1:])
    ]


def daily_volumes(slices) -> list[int]:
    """Messages per active day pooled over the given slices."""
    per_day: dict = {}
    for slc in slices:
        for r in slc.records:
            d = r.timestamp.date()
            per_day[d] = per_day.get(d, 0) + 1
    return [per_day[d] for d in sorted(per_day)]
