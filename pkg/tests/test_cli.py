"""Command-line surface: subcommands, flags, exit codes."""

import json

import pytest

from narracoord.cli import EXIT_CONFIG, EXIT_INPUT, EXIT_OK, main
from conftest import FIXTURES


def _args(command, out, extra=()):
    return [
        command,
        "--corpus", f"telegram:{FIXTURES / 'telegram.jsonl'}",
        "--corpus", f"reddit:{FIXTURES / 'reddit.jsonl'}",
        "--config", str(FIXTURES / "config.yaml"),
        "--out", str(out),
        *extra,
    ]


def test_all_subcommand(tmp_path, capsys):
    code = main(_args("all", tmp_path / "out",
                      ["--embeddings", str(FIXTURES / "embeddings.vec")]))
    assert code == EXIT_OK
    assert (tmp_path / "out" / "snc_scores.csv").exists()
    assert (tmp_path / "out" / "volume_summary.csv").exists()


def test_report_subcommand_descriptive_only(tmp_path):
    code = main(_args("report", tmp_path / "out"))
    assert code == EXIT_OK
    assert (tmp_path / "out" / "volume_summary.csv").exists()
    assert not (tmp_path / "out" / "snc_scores.csv").exists()
    assert not (tmp_path / "out" / "lexical_scores.csv").exists()


def test_metrics_subcommand(tmp_path):
    code = main(_args("metrics", tmp_path / "out", ["--skip", "semantic"]))
    assert code == EXIT_OK
    assert (tmp_path / "out" / "lexical_scores.csv").exists()
    assert not (tmp_path / "out" / "snc_scores.csv").exists()
    assert not (tmp_path / "out" / "volume_summary.csv").exists()


def test_snc_subcommand_emits_metrics_too(tmp_path):
    code = main(_args("snc", tmp_path / "out", ["--skip", "semantic"]))
    assert code == EXIT_OK
    assert (tmp_path / "out" / "snc_scores.csv").exists()
    assert (tmp_path / "out" / "temporal_scores.csv").exists()


def test_ingest_subcommand(tmp_path):
    code = main(_args("ingest", tmp_path / "out"))
    assert code == EXIT_OK
    assert (tmp_path / "out" / "records.jsonl").exists()


def test_event_and_period_flags(tmp_path):
    code = main(_args("snc", tmp_path / "out", [
        "--skip", "semantic", "--event", "alpha_offensive",
        "--period", "acute", "--seed", "99",
    ]))
    assert code == EXIT_OK
    content = (tmp_path / "out" / "snc_scores.csv").read_text()
    assert "delta_summit" not in content
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["seed"] == 99
    assert manifest["period"] == "acute"
    assert manifest["events"] == ["alpha_offensive"]


def test_normalization_pool_flag(tmp_path):
    code = main(_args("snc", tmp_path / "out", [
        "--skip", "semantic", "--normalization-pool", "per_platform",
    ]))
    assert code == EXIT_OK
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["normalization_pool"] == "per_platform"


def test_platform_sniffing_from_lines(tmp_path):
    code = main([
        "report",
        "--corpus", str(FIXTURES / "telegram.jsonl"),  # no prefix
        "--config", str(FIXTURES / "config.yaml"),
        "--out", str(tmp_path / "out"),
    ])
    assert code == EXIT_OK


def test_missing_corpus_file_exit_1(tmp_path, capsys):
    code = main([
        "all", "--corpus", "telegram:/definitely/not/here.jsonl",
        "--out", str(tmp_path / "out"), "--skip", "semantic",
    ])
    assert code == EXIT_INPUT
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "input"


def test_missing_embeddings_exit_1(tmp_path, capsys):
    code = main(_args("all", tmp_path / "out"))
    assert code == EXIT_INPUT
    assert "embeddings required" in json.loads(capsys.readouterr().err)["message"]


def test_bad_config_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("normalization_pool: sideways\n")
    code = main([
        "all", "--config", str(bad),
        "--corpus", f"telegram:{FIXTURES / 'telegram.jsonl'}",
        "--out", str(tmp_path / "out"),
    ])
    assert code == EXIT_CONFIG
    assert json.loads(capsys.readouterr().err)["error"] == "config"


def test_synth_subcommand(tmp_path):
    code = main([
        "synth", "--mode", "coordinated", "--out", str(tmp_path / "gen"),
        "--seed", "5",
    ])
    assert code == EXIT_OK
    files = sorted(p.name for p in (tmp_path / "gen").iterdir())
    assert files == ["synthetic_event_coordinated.jsonl",
                     "synthetic_event_coordinated.vec"]


def test_synth_spec_file(tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text(
        "event_id: demo_event\nn_sources: 2\nn_messages_per_source: 20\n"
        "vocab_size: 50\ndim: 8\nseed: 3\n"
    )
    code = main(["synth", "--spec", str(spec), "--mode", "organic",
                 "--out", str(tmp_path / "gen")])
    assert code == EXIT_OK
    assert (tmp_path / "gen" / "demo_event_organic.jsonl").exists()


def test_synth_bad_spec_exit_2(tmp_path, capsys):
    spec = tmp_path / "spec.yaml"
    spec.write_text("made_up_knob: 4\n")
    code = main(["synth", "--spec", str(spec), "--mode", "organic",
                 "--out", str(tmp_path / "gen")])
    assert code == EXIT_CONFIG


def test_synth_default_specs_separate_end_to_end(tmp_path):
    """A bare `synth --mode X` must produce the documented mode profile:
    the two default streams have to separate cleanly in the composite."""
    from narracoord.synthgen import merge_vector_files

    gen = tmp_path / "gen"
    for mode in ("coordinated", "organic"):
        assert main(["synth", "--mode", mode, "--out", str(gen),
                     "--seed", "11"]) == EXIT_OK
    merge_vector_files(
        [gen / "synthetic_event_coordinated.vec",
         gen / "synthetic_event_organic.vec"],
        gen / "all.vec",
    )
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(
        "events:\n"
        "  - {event_id: synthetic_event, start: 2025-03-01, "
        "end: 2025-04-30, keywords: []}\n"
    )
    out = tmp_path / "run"
    code = main([
        "snc", "--config", str(cfg),
        "--corpus", f"telegram:{gen / 'synthetic_event_coordinated.jsonl'}",
        "--corpus", f"telegram:{gen / 'synthetic_event_organic.jsonl'}",
        "--embeddings", str(gen / "all.vec"), "--out", str(out),
    ])
    assert code == EXIT_OK
    import csv as csv_mod

    with open(out / "snc_scores.csv", newline="") as fh:
        rows = list(csv_mod.DictReader(fh))
    ranks = {r["source"]: int(r["rank"]) for r in rows}
    coord = {v for k, v in ranks.items() if k.startswith("coordinated")}
    organic = {v for k, v in ranks.items() if k.startswith("organic")}
    assert max(coord) < min(organic), ranks
