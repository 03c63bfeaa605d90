"""End-to-end orchestration: load, slice, score, emit.

Every artifact is written deterministically (sorted iteration, repr float
formatting, fixed line endings): two runs over identical inputs produce
byte-identical files, except for the run manifest's timestamp.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import PipelineConfig
from .corpus import (
    CorpusError,
    PERIOD_FULL,
    TELEGRAM,
    flag_duplicates,
    load_corpus,
    slice_corpus,
)
from .lexical import lexical_score
from .report import (
    daily_volumes,
    ecdf,
    inter_arrival_seconds,
    language_composition,
    volume_summary,
)
from .rhetoric import (
    RhetoricScore,
    near_dup_rate,
    r_score,
    shared_domains,
    shared_hashtags,
    shared_trigrams,
    trigram_jaccard,
    trigram_profile,
)
from .semantic import cross_source_matrix, h_score, load_embeddings
from .snc import ComponentVector, build_snc_rows
from .temporal import burstiness, coactivity, hourly_overlap, posting_heatmap

logger = logging.getLogger(__name__)

SKIPPABLE = ("lexical", "temporal", "rhetoric", "semantic")
ALL_STAGES = frozenset({"descriptive", "metrics", "snc"})


@dataclass
class RunResult:
    out_dir: Path
    n_records: int
    snc_rows: list
    written: list[str]


def _fmt(value) -> str:
    """Stable cell formatting: repr for floats (full round-trip), empty
    string for missing."""
    if value is None:
        return ""
    if isinstance(value, float):  # incl. np.float64; repr() via plain float
        return repr(float(value))
    return str(value)


class _Emitter:
    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.written: list[str] = []

    def csv(self, rel_path: str, header, rows):
        path = self.out_dir / rel_path
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
        self.written.append(rel_path)

    def json(self, rel_path: str, payload):
        path = self.out_dir / rel_path
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=2)
            fh.write("\n")
        self.written.append(rel_path)


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "-" for c in name)


def _sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _config_hash(cfg: PipelineConfig) -> str:
    def encode(obj):
        if dataclasses.is_dataclass(obj):
            return {k: encode(v) for k, v in dataclasses.asdict(obj).items()}
        if isinstance(obj, (list, tuple)):
            return [encode(v) for v in obj]
        if isinstance(obj, dict):
            return {k: encode(v) for k, v in obj.items()}
        if hasattr(obj, "isoformat"):
            return obj.isoformat()
        return obj

    canon = json.dumps(encode(cfg), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _matrix_rows(keys, mat):
    header = ["source"] + [f"{p}:{s}" for p, s in keys]
    rows = []
    for i, (p, s) in enumerate(keys):
        rows.append([f"{p}:{s}"] + [
            None if _isnan(mat[i, j]) else float(mat[i, j])
            for j in range(len(keys))
        ])
    return header, rows


def _isnan(x) -> bool:
    return x != x


def _engagement_metrics(platform: str):
    if platform == TELEGRAM:
        return (("views", lambda r: r.views), ("forwards", lambda r: r.forwards))
    return (("score", lambda r: r.score), ("num_comments", lambda r: r.num_comments))


def run_pipeline(cfg: PipelineConfig, corpus_specs, embeddings_path, out_dir,
                 events=None, period: str = PERIOD_FULL, skip=(),
                 config_path=None, stages=ALL_STAGES) -> RunResult:
    """Run the batch: load -> slice -> metrics -> composite -> files.

    ``corpus_specs`` is a list of (platform, path) pairs; ``skip`` names
    metric modules to leave out (their composite component goes missing
    and the score is rescaled); ``stages`` selects which output families
    are produced (descriptive report, per-module metrics, composite).
    Raises CorpusError / ConfigError for fatal input and configuration
    problems.
    """
    cfg.validate()
    stages = frozenset(stages)
    if stages - ALL_STAGES or not stages:
        raise CorpusError(f"stages must be a non-empty subset of {sorted(ALL_STAGES)}")
    if "snc" in stages:
        stages = stages | {"metrics"}  # composite rows must trace to metric rows
    skip = frozenset(skip)
    unknown_skip = skip - set(SKIPPABLE)
    if unknown_skip:
        raise CorpusError(f"cannot skip unknown module(s): {sorted(unknown_skip)}")
    need_semantic = "metrics" in stages and "semantic" not in skip
    if need_semantic and embeddings_path is None:
        raise CorpusError(
            "embeddings required: pass an embeddings file or --skip semantic"
        )

    windows = [w for w in cfg.events if events is None or w.event_id in events]
    if events is not None:
        missing = set(events) - {w.event_id for w in windows}
        if missing:
            raise CorpusError(f"unknown event id(s): {sorted(missing)}")
    if not windows:
        raise CorpusError("no event windows selected")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    emitter = _Emitter(out_dir)

    # -- load ---------------------------------------------------------
    records = []
    load_rows = []
    for platform, path in corpus_specs:
        recs, stats = load_corpus([path], platform, cfg.hash_algorithm)
        records.extend(recs)
        load_rows.append([
            platform, Path(path).name, stats.lines_read, stats.records_loaded,
            stats.dropped_empty, stats.dropped_short,
            stats.dropped_duplicate_id, stats.skipped_malformed,
        ])
    records = flag_duplicates(records)
    emitter.csv(
        "ingest_stats.csv",
        ["platform", "file", "lines_read", "records_loaded", "dropped_empty",
         "dropped_short", "dropped_duplicate_id", "skipped_malformed"],
        load_rows,
    )

    store = (
        load_embeddings(embeddings_path)
        if need_semantic and embeddings_path is not None
        else None
    )

    # -- slice --------------------------------------------------------
    slices_by_event = {}
    for window in windows:
        slices = slice_corpus(records, window, period)
        if slices:
            slices_by_event[window.event_id] = slices

    # -- descriptive report -------------------------------------------
    if "descriptive" in stages:
        emitter.csv(
            "volume_summary.csv",
            ["event_id", "platform", "records", "sources", "span_days",
             "avg_per_day"],
            [[v.event_id, v.platform, v.records, v.sources, v.span_days,
              float(v.avg_per_day)] for v in volume_summary(records, windows)],
        )
        all_slices = [
            slc for slices in slices_by_event.values() for slc in slices.values()
        ]
        emitter.csv(
            "language_composition.csv",
            ["event_id", "platform", "source", "records", "ru_records",
             "ru_fraction"],
            [[r.event_id, r.platform, r.source, r.records, r.ru_records,
              float(r.ru_fraction)] for r in language_composition(all_slices)],
        )
        _emit_ecdfs(emitter, slices_by_event)

    # -- per-slice metrics ---------------------------------------------
    run_metrics = "metrics" in stages
    lex = {}
    if run_metrics and "lexical" not in skip:
        for event_id, slices in sorted(slices_by_event.items()):
            for key, slc in sorted(slices.items()):
                lex[(event_id, *key)] = lexical_score(slc, cfg.mattr_window)
        emitter.csv(
            "lexical_scores.csv",
            ["event_id", "platform", "source", "tokens", "mattr", "h_word",
             "h_char3", "lang_majority"],
            [[e, p, s, sc.token_count, sc.mattr, sc.h_word, sc.h_char3,
              slices_by_event[e][(p, s)].lang_majority]
             for (e, p, s), sc in sorted(lex.items())],
        )

    temp = {}
    if run_metrics and "temporal" not in skip:
        # bins cover the whole event window only when analysing it whole;
        # for a sub-period the series spans the period's own data
        windows_by_id = (
            {w.event_id: w for w in windows} if period == PERIOD_FULL else {}
        )
        _compute_temporal(emitter, cfg, slices_by_event, temp, windows_by_id)

    rhet = {}
    if run_metrics and "rhetoric" not in skip:
        _compute_rhetoric(emitter, slices_by_event, rhet)

    sem = {}
    if run_metrics and "semantic" not in skip:
        _compute_semantic(emitter, cfg, slices_by_event, store, sem)

    # -- composite ------------------------------------------------------
    snc_rows = []
    if "snc" not in stages:
        _emit_manifest(emitter, cfg, corpus_specs, embeddings_path, config_path,
                       records, period, skip, events)
        return RunResult(out_dir, len(records), snc_rows, emitter.written)

    for event_id, slices in sorted(slices_by_event.items()):
        raw = {}
        for (platform, source) in sorted(slices):
            key = (event_id, platform, source)
            lex_score = lex.get(key)
            t_score = temp.get(key)
            s_score = sem.get(key)
            r_val = rhet.get(key)
            raw[(platform, source)] = ComponentVector(
                h=s_score.h_score if s_score else None,
                b=t_score.burstiness if t_score else None,
                r=r_val.r_score if r_val else None,
                d=lex_score.mattr if lex_score else None,
            )
        ranked = build_snc_rows(event_id, raw, cfg.weights, cfg.normalization_pool)
        if len(ranked) < len(raw):
            dropped = set(raw) - {(r.platform, r.source) for r in ranked}
            logger.warning(
                "%s: %d source(s) had no components and were excluded: %s",
                event_id, len(dropped), sorted(dropped),
            )
        snc_rows.extend(ranked)
    emitter.csv(
        "snc_scores.csv",
        ["event_id", "platform", "source", "H_raw", "B_raw", "R_raw", "D_raw",
         "H_hat", "B_hat", "R_hat", "D_hat", "snc", "rank",
         "components_present"],
        [[r.event_id, r.platform, r.source,
          r.raw.h, r.raw.b, r.raw.r, r.raw.d,
          r.normalized.h, r.normalized.b, r.normalized.r, r.normalized.d,
          r.snc, r.rank, r.components_present] for r in snc_rows],
    )

    _emit_manifest(emitter, cfg, corpus_specs, embeddings_path, config_path,
                   records, period, skip, events)
    return RunResult(out_dir, len(records), snc_rows, emitter.written)


def _emit_ecdfs(emitter: _Emitter, slices_by_event):
    percentile_rows = []

    def add(event_id, platform, metric, source, values):
        table = ecdf(values, metric)
        if table is None:
            return None
        percentile_rows.append([
            event_id, platform, metric, source, table.n,
            float(table.percentiles["p25"]), float(table.percentiles["p50"]),
            float(table.percentiles["p75"]), float(table.percentiles["p95"]),
        ])
        return table

    for event_id, slices in sorted(slices_by_event.items()):
        by_platform = {}
        for (platform, source), slc in sorted(slices.items()):
            by_platform.setdefault(platform, []).append(slc)
        for platform, slcs in sorted(by_platform.items()):
            records = [r for slc in slcs for r in slc.records]
            pooled = {
                "text_chars": [r.char_len for r in records],
                "text_words": [r.word_len for r in records],
                "daily_volume": daily_volumes(slcs),
                "source_activity": [len(slc) for slc in slcs],
            }
            for metric, getter in _engagement_metrics(platform):
                vals = [getter(r) for r in records if getter(r) is not None]
                pooled[metric] = vals
            for metric, values in sorted(pooled.items()):
                table = add(event_id, platform, metric, "(all)", values)
                if table is None:
                    continue
                emitter.csv(
                    f"ecdf/{_safe(event_id)}__{platform}__{metric}.csv",
                    ["value", "cum_fraction"],
                    [[float(v), float(f)] for v, f in table.points],
                )
            iat_rows = []
            for slc in slcs:
                gaps = inter_arrival_seconds(slc)
                table = add(event_id, platform, "iat_s", slc.source, gaps)
                if table is None:
                    continue
                iat_rows.extend(
                    [slc.source, float(v), float(f)] for v, f in table.points
                )
            if iat_rows:
                emitter.csv(
                    f"ecdf/{_safe(event_id)}__{platform}__iat_s.csv",
                    ["source", "value", "cum_fraction"],
                    iat_rows,
                )
    emitter.csv(
        "ecdf/percentiles.csv",
        ["event_id", "platform", "metric", "source", "n", "p25", "p50",
         "p75", "p95"],
        percentile_rows,
    )


def _compute_temporal(emitter, cfg, slices_by_event, temp, windows_by_id):
    rows = []
    for event_id, slices in sorted(slices_by_event.items()):
        for (platform, source), slc in sorted(slices.items()):
            score = burstiness(slc.timestamps)
            if score is not None:
                temp[(event_id, platform, source)] = score
            rows.append([
                event_id, platform, source,
                score.burstiness if score else None,
                score.mean_iat_s if score else None,
                score.n_gaps if score else None,
            ])
    emitter.csv(
        "temporal_scores.csv",
        ["event_id", "platform", "source", "burstiness", "mean_iat_s", "n_gaps"],
        rows,
    )

    means = {}
    for (event_id, platform, source), score in sorted(temp.items()):
        means.setdefault((platform, source), []).append(score.burstiness)
    emitter.csv(
        "burstiness_event_mean.csv",
        ["platform", "source", "mean_burstiness", "n_events"],
        [[p, s, sum(v) / len(v), len(v)] for (p, s), v in sorted(means.items())],
    )

    summary_rows = []
    for event_id, slices in sorted(slices_by_event.items()):
        telegram = [
            slc for (p, _), slc in sorted(slices.items()) if p == TELEGRAM
        ]
        if not telegram:
            continue
        series = coactivity(
            telegram, cfg.coactivity_bin_hours, windows_by_id.get(event_id)
        )
        emitter.csv(
            f"coactivity__{_safe(event_id)}.csv",
            ["bin_start", "active_sources"],
            [[ts.strftime("%Y-%m-%dT%H:%M:%SZ"), c] for ts, c in series.bins],
        )
        summary_rows.append([
            event_id, series.n_sources, len(series.bins),
            float(series.mean_active_sources),
            float(series.full_coactivity_fraction),
        ])
        if len(telegram) >= 2:
            overlap = hourly_overlap(telegram)
            header, mrows = _matrix_rows(overlap.sources, overlap.jaccard)
            emitter.csv(f"hourly_overlap__{_safe(event_id)}.csv", header, mrows)
    emitter.csv(
        "coactivity_summary.csv",
        ["event_id", "n_sources", "n_bins", "mean_active_sources",
         "full_coactivity_fraction"],
        summary_rows,
    )

    for event_id, slices in sorted(slices_by_event.items()):
        for (platform, source), slc in sorted(slices.items()):
            heat = posting_heatmap(slc)
            emitter.csv(
                f"heatmaps/{_safe(event_id)}__{platform}__{_safe(source)}.csv",
                ["weekday"] + [f"h{h:02d}" for h in range(24)],
                [[wd] + [float(x) for x in heat[wd]] for wd in range(7)],
            )


def _compute_rhetoric(emitter, slices_by_event, rhet):
    rows = []
    trigram_tables = {}
    hashtag_rows = []
    domain_rows = []
    for event_id, slices in sorted(slices_by_event.items()):
        telegram_slices = [
            slc for (p, _), slc in sorted(slices.items()) if p == TELEGRAM
        ]
        profiles = [trigram_profile(slc) for slc in telegram_slices]

        for (platform, source), slc in sorted(slices.items()):
            r_val = None
            peer_count = 0
            if platform == TELEGRAM and len(profiles) >= 2:
                r_val = r_score(profiles, source)
                peer_count = len(profiles) - 1
            score = RhetoricScore(
                r_score=r_val,
                near_dup_rate=near_dup_rate(slc),
                peer_count=peer_count,
            )
            rhet[(event_id, platform, source)] = score
            rows.append([
                event_id, platform, source, score.r_score,
                float(score.near_dup_rate), score.peer_count,
                slc.lang_majority,
            ])

        if len(profiles) >= 2:
            n = len(profiles)
            mat = np.zeros((n, n))
            for i in range(n):
                mat[i, i] = 1.0
                for j in range(i + 1, n):
                    mat[i, j] = mat[j, i] = trigram_jaccard(
                        profiles[i], profiles[j]
                    )
            keys = [(TELEGRAM, p.source) for p in profiles]
            header, mrows = _matrix_rows(keys, mat)
            emitter.csv(
                f"trigram_jaccard__{_safe(event_id)}.csv", header, mrows
            )
            trigram_tables[event_id] = shared_trigrams(profiles)

        event_slices = [slc for _, slc in sorted(slices.items())]
        hashtag_rows.extend(
            [event_id, tag, sc, total]
            for tag, sc, total in shared_hashtags(event_slices)
        )
        domain_rows.extend(
            [event_id, dom, sc, total]
            for dom, sc, total in shared_domains(event_slices)
        )

    emitter.csv(
        "rhetoric_scores.csv",
        ["event_id", "platform", "source", "r_score", "near_dup_rate",
         "peer_count", "lang_majority"],
        rows,
    )
    emitter.csv(
        "shared_hashtags.csv",
        ["event_id", "hashtag", "source_count", "total_occurrences"],
        hashtag_rows,
    )
    emitter.csv(
        "shared_domains.csv",
        ["event_id", "domain", "source_count", "total_occurrences"],
        domain_rows,
    )
    emitter.json("shared_trigrams.json", trigram_tables)


def _compute_semantic(emitter, cfg, slices_by_event, store, sem):
    rows = []
    for event_id, slices in sorted(slices_by_event.items()):
        for (platform, source), slc in sorted(slices.items()):
            score = h_score(slc, store, cfg.seed, cfg.sample_cap)
            if score is not None:
                sem[(event_id, platform, source)] = score
            rows.append([
                event_id, platform, source,
                score.h_score if score else None,
                score.n_sampled if score else None,
            ])
        if len(slices) >= 2:
            keys, mat = cross_source_matrix(
                slices.values(), store, cfg.seed, cfg.sample_cap
            )
            header, mrows = _matrix_rows(keys, mat)
            emitter.csv(
                f"semantic_matrix__{_safe(event_id)}.csv", header, mrows
            )
    emitter.csv(
        "semantic_scores.csv",
        ["event_id", "platform", "source", "h_score", "n_sampled"],
        rows,
    )


def run_ingest(cfg: PipelineConfig, corpus_specs, out_dir,
               config_path=None) -> RunResult:
    """Normalize raw platform exports into the unified JSONL schema.

    Writes ``records.jsonl`` (keys: platform, event_id, source, id, ts,
    text, views, forwards, score, num_comments, reply_to) in timestamp
    order, plus ingest stats and a manifest.
    """
    cfg.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    emitter = _Emitter(out_dir)

    records = []
    load_rows = []
    for platform, path in corpus_specs:
        recs, stats = load_corpus([path], platform, cfg.hash_algorithm)
        records.extend(recs)
        load_rows.append([
            platform, Path(path).name, stats.lines_read, stats.records_loaded,
            stats.dropped_empty, stats.dropped_short,
            stats.dropped_duplicate_id, stats.skipped_malformed,
        ])
    records = flag_duplicates(records)

    out_path = out_dir / "records.jsonl"
    with open(out_path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({
                "platform": r.platform,
                "event_id": r.event_id,
                "source": r.source,
                "id": r.record_id,
                "ts": r.timestamp.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "text": r.text,
                "views": r.views,
                "forwards": r.forwards,
                "score": r.score,
                "num_comments": r.num_comments,
                "reply_to": r.reply_to,
            }, ensure_ascii=False) + "\n")
    emitter.written.append("records.jsonl")
    emitter.csv(
        "ingest_stats.csv",
        ["platform", "file", "lines_read", "records_loaded", "dropped_empty",
         "dropped_short", "dropped_duplicate_id", "skipped_malformed"],
        load_rows,
    )
    _emit_manifest(emitter, cfg, corpus_specs, None, config_path,
                   records, PERIOD_FULL, frozenset(), None)
    return RunResult(out_dir, len(records), [], emitter.written)


def _emit_manifest(emitter, cfg, corpus_specs, embeddings_path, config_path,
                   records, period, skip, events):
    inputs = [
        {"role": f"corpus:{platform}", "path": str(path),
         "sha256": _sha256_file(path)}
        for platform, path in corpus_specs
    ]
    if embeddings_path is not None:
        inputs.append({
            "role": "embeddings", "path": str(embeddings_path),
            "sha256": _sha256_file(embeddings_path),
        })
    emitter.json("manifest.json", {
        "tool": "narracoord",
        "version": __version__,
        "created_at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        "seed": cfg.seed,
        "hash_algorithm": cfg.hash_algorithm,
        "normalization_pool": cfg.normalization_pool,
        "weights": list(cfg.weights),
        "period": period,
        "events": sorted(w.event_id for w in cfg.events
                         if events is None or w.event_id in events),
        "skip": sorted(skip),
        "config_path": str(config_path) if config_path else None,
        "config_hash": _config_hash(cfg),
        "inputs": inputs,
        "n_records": len(records),
    })
