import json
import re

import pytest
from click.testing import CliRunner

from stubmatch.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    return result


# ---------------------------------------------------------------------------
# pipeline


def test_sample_match_analyze_draw_pipeline(runner, tmp_path):
    pts = tmp_path / "pts.txt"
    edges = tmp_path / "edges.csv"
    svg = tmp_path / "fig.svg"
    run_ok(runner, ["sample", "--length", "80", "--seed", "7", "--out", str(pts)])
    assert pts.read_text().startswith("topology=interval extent=80.0")

    result = run_ok(
        runner,
        ["match", "--in", str(pts), "--degrees", "2", "--scheme", "stable",
         "--out", str(edges)],
    )
    summary = json.loads(result.output)
    assert summary["scheme"] == "stable"
    assert summary["edges"] > 0
    lines = edges.read_text().splitlines()
    assert lines[0] == "i,j,length"
    assert len(lines) == summary["edges"] + 1

    result = run_ok(
        runner,
        ["analyze", "--edges", str(edges), "--points", str(pts), "--good", "0:80"],
    )
    report = json.loads(result.output)
    assert report["edges"] == summary["edges"]
    assert report["crossings"] == 0
    assert isinstance(report["good"], bool)

    run_ok(runner, ["draw", "--points", str(pts), "--edges", str(edges),
                    "--out", str(svg), "--no-meta"])
    body = svg.read_text()
    assert body.count('<path class="edge"') == summary["edges"]
    assert "<!--" not in body


def test_sample_reruns_are_byte_identical(runner, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run_ok(runner, ["sample", "--length", "50", "--seed", "3", "--out", str(a)])
    run_ok(runner, ["sample", "--length", "50", "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_sample_kinds(runner, tmp_path):
    out = tmp_path / "c.txt"
    run_ok(runner, ["sample", "--kind", "cycle", "--n", "32", "--seed", "1",
                    "--out", str(out)])
    assert out.read_text().startswith("topology=cycle extent=32")
    run_ok(runner, ["sample", "--kind", "lattice", "--cells", "16", "--copies", "3",
                    "--seed", "1", "--out", str(out)])
    header, *rows = out.read_text().splitlines()
    assert header == "topology=cycle extent=16.0"
    assert len(rows) == 48


def test_match_scheme_and_summary_file(runner, tmp_path):
    pts = tmp_path / "p.txt"
    edges = tmp_path / "e.csv"
    summary = tmp_path / "s.json"
    run_ok(runner, ["sample", "--length", "60", "--seed", "9", "--out", str(pts)])
    run_ok(runner, ["match", "--in", str(pts), "--scheme", "core", "--method", "fast",
                    "--out", str(edges), "--summary", str(summary)])
    data = json.loads(summary.read_text())
    assert data["scheme"] == "core"
    assert set(data) == {"scheme", "n", "edges", "leftovers", "rounds"}


def test_analyze_per_point_csv(runner, tmp_path):
    pts, edges, per = tmp_path / "p.txt", tmp_path / "e.csv", tmp_path / "pp.csv"
    run_ok(runner, ["sample", "--length", "40", "--seed", "5", "--out", str(pts)])
    run_ok(runner, ["match", "--in", str(pts), "--out", str(edges)])
    run_ok(runner, ["analyze", "--edges", str(edges), "--points", str(pts),
                    "--per-point", str(per)])
    lines = per.read_text().splitlines()
    assert lines[0] == "index,pos,degree,M,X,class"
    n_points = len(pts.read_text().splitlines()) - 1
    assert len(lines) == n_points + 1


# ---------------------------------------------------------------------------
# experiments through the CLI


def test_goodness_json_and_verdict_fields(runner):
    result = run_ok(runner, ["goodness", "--length", "150", "--replicas", "31",
                             "--seed", "2", "--jobs", "1", "--no-meta"])
    report = json.loads(result.output)
    assert report["kind"] == "goodness"
    assert report["verdicts"]["verdict"] in ("reject", "fail-to-reject")
    assert len(report["replicas"]) == 31


def test_goodness_csv_format(runner):
    result = run_ok(runner, ["goodness", "--length", "100", "--replicas", "5",
                             "--seed", "2", "--jobs", "1", "--format", "csv"])
    lines = result.output.splitlines()
    assert lines[0].split(",")[:2] == ["replica", "n"] or "replica" in lines[0]
    assert len(lines) == 6


def test_report_reruns_byte_identical_with_no_meta(runner, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["table1", "--sizes", "128,256", "--replicas", "3", "--seed", "4",
            "--jobs", "1", "--no-meta"]
    run_ok(runner, base + ["--out", str(a)])
    run_ok(runner, base + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_renorm_subcommand(runner):
    result = run_ok(runner, ["renorm", "--p0", "0.968", "--kmax", "40", "--no-meta"])
    report = json.loads(result.output)
    assert report["aggregates"]["converged"] is True
    assert report["verdicts"]["p0_above_threshold"] is True
    assert report["replicas"][0] == {"k": 0, "p": 0.968}


def test_blocks_subcommand(runner):
    result = run_ok(runner, ["blocks", "--x", "50", "--replicas", "10", "--seed", "1",
                             "--jobs", "1", "--no-meta"])
    report = json.loads(result.output)
    assert report["verdicts"]["holds"] is True


def test_tails_subcommand(runner):
    result = run_ok(runner, ["tails", "--scheme", "random_direction", "--n", "2048",
                             "--replicas", "2", "--clt-replicas", "4", "--seed", "3",
                             "--jobs", "1", "--no-meta"])
    report = json.loads(result.output)
    assert "directed_X" in report["aggregates"]


# ---------------------------------------------------------------------------
# flags, config, exit codes


def test_usage_errors_exit_2(runner, tmp_path):
    assert runner.invoke(main, ["match"]).exit_code == 2  # missing --in
    assert runner.invoke(main, ["match", "--in", "missing.txt"]).exit_code == 2
    assert runner.invoke(main, ["sample", "--kind", "cycle"]).exit_code == 2
    assert runner.invoke(main, ["goodness", "--replicas", "0"]).exit_code == 2
    pts = tmp_path / "p.txt"
    run_ok(runner, ["sample", "--length", "30", "--seed", "1", "--out", str(pts)])
    bad = runner.invoke(main, ["analyze", "--points", str(pts)])
    assert bad.exit_code == 2


def test_runtime_errors_exit_3(runner, tmp_path):
    corrupt = tmp_path / "bad.txt"
    corrupt.write_text("topology=interval extent=10.0\n0.5\nnot-a-number\n")
    result = runner.invoke(main, ["match", "--in", str(corrupt)])
    assert result.exit_code == 3
    assert "not a number" in result.output

    pts = tmp_path / "p.txt"
    run_ok(runner, ["sample", "--length", "30", "--seed", "1", "--out", str(pts)])
    garbage = tmp_path / "e.csv"
    garbage.write_text("nope\n")
    result = runner.invoke(main, ["analyze", "--edges", str(garbage), "--points", str(pts)])
    assert result.exit_code == 3


def test_failed_write_leaves_no_partial_file(runner, tmp_path):
    target = tmp_path / "no-such-dir" / "out.txt"
    result = runner.invoke(main, ["sample", "--length", "20", "--seed", "1",
                                  "--out", str(target)])
    assert result.exit_code == 3
    assert not target.parent.exists()
    assert list(tmp_path.iterdir()) == []


def test_config_file_fills_defaults_but_flags_win(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"length": 25.0, "seed": 9}))
    a, b, c = (tmp_path / name for name in ("a.txt", "b.txt", "c.txt"))
    # seed flag beats config seed; length comes from config
    run_ok(runner, ["sample", "--config", str(cfg), "--seed", "2", "--out", str(a)])
    run_ok(runner, ["sample", "--length", "25", "--seed", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    run_ok(runner, ["sample", "--config", str(cfg), "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_config_rejects_unknown_keys(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    result = runner.invoke(main, ["sample", "--config", str(cfg)])
    assert result.exit_code == 2
    assert "bogus" in result.output


def test_draw_timestamp_only_with_meta(runner, tmp_path):
    pts = tmp_path / "p.txt"
    run_ok(runner, ["sample", "--length", "30", "--seed", "6", "--out", str(pts)])
    with_meta = run_ok(runner, ["draw", "--points", str(pts)]).output
    without = run_ok(runner, ["draw", "--points", str(pts), "--no-meta"]).output
    assert re.search(r"<!-- generated .* -->", with_meta)
    assert "<!--" not in without
    # identical apart from the timestamp comment
    stripped = re.sub(r"\n  <!-- generated [^\n]* -->", "", with_meta)
    assert stripped == without


def test_version_flag(runner):
    result = run_ok(runner, ["--version"])
    assert "stubmatch" in result.output
