import json

import pytest

from statement_net import pipeline
from statement_net.cli import main
from statement_net.config import OUTPUT_DIR_ENV

from conftest import SAMPLE


def run(capsys, *args):
    code = main([str(a) for a in args])
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err.strip()


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    return tmp_path / "out"


def write_statements(out, records):
    out.mkdir(parents=True, exist_ok=True)
    lines = [
        json.dumps({"article_id": f"a{i}", "source": "S", "published": day, "sentence_index": 0,
                    "trigger": "said", "entities": ents, "text": "t"})
        for i, (ents, day) in enumerate(records)
    ]
    (out / pipeline.STATEMENTS).write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_cores_after_network_on_triangle(capsys, out):
    write_statements(out, [(["A", "B", "C"], "2015-01-01")])
    code, line, _ = run(capsys, "network", "--output-dir", out)
    assert code == 0 and line == "3 nodes, 3 simple edges, 3 events"
    code, line, _ = run(capsys, "cores", "--output-dir", out)
    assert code == 0
    assert line.startswith("max_core 2, top-core size 3")


def test_missing_intermediate_names_prior_command(capsys, out):
    code, _, err = run(capsys, "cores", "--output-dir", out)
    assert code == 1
    assert "statement-net network" in err
    code, _, err = run(capsys, "network", "--output-dir", out)
    assert code == 1 and "statement-net extract" in err


def test_stage_by_stage_matches_full_run(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    staged, full = tmp_path / "staged", tmp_path / "full"
    cfg = ["--config", SAMPLE / "config.yaml", "--output-dir", staged]
    for cmd in ("ingest-stats", "extract", "network", "cores", "trajectories", "buckets", "overlap", "daily-counts"):
        code, line, err = run(capsys, cmd, *cfg)
        assert code == 0, (cmd, err)
        assert line
    assert run(capsys, "run", "--config", SAMPLE / "config.yaml", "--output-dir", full)[0] == 0
    for path in sorted(staged.rglob("*")):
        if path.is_file():
            rel = path.relative_to(staged)
            assert path.read_bytes() == (full / rel).read_bytes(), rel


def test_rerun_is_noop(capsys, out):
    cfg = ["--config", SAMPLE / "config.yaml", "--output-dir", out]
    run(capsys, "extract", *cfg)
    run(capsys, "network", *cfg)
    run(capsys, "cores", *cfg)
    before = {p: p.read_bytes() for p in out.rglob("*") if p.is_file()}
    run(capsys, "network", *cfg)
    run(capsys, "cores", *cfg)
    after = {p: p.read_bytes() for p in out.rglob("*") if p.is_file()}
    assert before == after


def test_overlap_needs_two_periods(capsys, out):
    cfg = ["--config", SAMPLE / "config.yaml", "--output-dir", out]
    run(capsys, "extract", *cfg)
    run(capsys, "buckets", *cfg, "--bucket-months", 12)
    code, _, err = run(capsys, "overlap", *cfg)
    assert code == 1
    assert "need ≥ 2 periods" in err


def test_daily_counts_rows_equal_days(capsys, out):
    cfg = ["--config", SAMPLE / "config.yaml", "--output-dir", out]
    run(capsys, "extract", *cfg)
    code, line, _ = run(capsys, "daily-counts", *cfg, "--source", "Morning Ledger")
    assert code == 0
    stats = json.loads((out / pipeline.CORPUS_STATS).read_text())
    (ml,) = [s for s in stats["sources"] if s["source"] == "Morning Ledger"]
    rows = (out / "daily_counts" / "morning-ledger.csv").read_text().splitlines()[1:]
    assert len(rows) == ml["days_spanned"] == 353
    assert line.startswith("Morning Ledger: 353 days")
    code, _, err = run(capsys, "daily-counts", *cfg, "--source", "Nope")
    assert code == 1 and "unknown source" in err


def test_exit_codes(capsys, tmp_path, out):
    code, _, err = run(capsys, "run", "--config", SAMPLE / "config.yaml", "--output-dir", out, "--gazetteer", tmp_path / "x")
    assert code == 1 and "gazetteer not found" in err
    bad = tmp_path / "bad.jsonl"
    bad.write_text("not json\n", encoding="utf-8")
    code, _, err = run(capsys, "run", "--config", SAMPLE / "config.yaml", "--output-dir", out, "--corpus", bad)
    assert code == 2 and "stage ingest" in err and "line 1" in err
    code, _, _ = run(capsys, "run", "--config", SAMPLE / "config.yaml", "--output-dir", out, "--corpus", bad, "--on-error", "skip")
    assert code == 0


def test_output_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "envout"))
    code, _, _ = run(capsys, "ingest-stats", "--config", SAMPLE / "config.yaml")
    assert code == 0
    assert (tmp_path / "envout" / pipeline.CORPUS_STATS).exists()


def test_require_both_flag_changes_extraction(capsys, out, tmp_path):
    cfg = ["--config", SAMPLE / "config.yaml"]
    _, default_line, _ = run(capsys, "extract", *cfg, "--output-dir", tmp_path / "a")
    _, both_line, _ = run(capsys, "extract", *cfg, "--output-dir", tmp_path / "b", "--require-both")
    assert int(both_line.split()[0]) < int(default_line.split()[0])
    code, _, err = run(capsys, "extract", *cfg, "--output-dir", out, "--require-both", "--no-quote-trigger")
    assert code == 1 and "conflicts" in err
