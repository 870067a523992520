import csv
import json
import os

import pytest

from conftest import FIXTURES
from weightflow.cli import main, oracle_table


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_writes_artifacts(tmp_path, karate_paths, capsys):
    edges, labels = karate_paths
    out = tmp_path / "o"
    code, _, _ = run(["run", "--input", edges, "--labels", labels, "--iters", "5", "--out", str(out), "--trace"], capsys)
    assert code == 0
    manifest = json.loads((out / "run.json").read_text())
    assert set(manifest) == {"config", "wall_ms", "clamp_events", "best"}
    assert set(manifest["best"]) == {"by_modularity", "by_ari", "by_nmi"}
    cfg = manifest["config"]
    assert (cfg["alpha"], cfg["step"], cfg["iterations"], cfg["sweep_resolution"]) == (0.5, 0.01, 5, 200)
    assert cfg["variant"] == "one_evol"
    with open(out / "sweep.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["cutoff", "k", "modularity", "ari", "nmi"]
    assert rows[-1][1] == "34"
    with open(out / "trace.csv") as fh:
        trace = list(csv.reader(fh))
    assert trace[0] == ["iteration", "edge", "weight", "curvature"]
    assert len(trace) == 1 + 6 * 78
    with open(out / "final_weights.csv") as fh:
        assert len(list(csv.reader(fh))) == 79


def test_run_is_deterministic(tmp_path, karate_paths, capsys):
    edges, labels = karate_paths
    blobs = []
    for k in range(2):
        out = tmp_path / f"o{k}"
        run(["run", "--input", edges, "--labels", labels, "--iters", "3", "--variant", "two_evol", "--out", str(out)], capsys)
        blobs.append((out / "sweep.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_missing_input(tmp_path, capsys):
    out = tmp_path / "never"
    code, _, err = run(["run", "--input", str(tmp_path / "nope.edges"), "--out", str(out)], capsys)
    assert code == 2
    assert "nope.edges" in err
    assert not out.exists()


def test_bad_line_reports_number(tmp_path, capsys):
    f = tmp_path / "bad.edges"
    f.write_text("# header\na b 1\nb c x\n")
    code, _, err = run(["run", "--input", str(f), "--out", str(tmp_path / "o")], capsys)
    assert code == 2
    assert "bad.edges:3:" in err


def test_duplicate_edge_line(tmp_path, capsys):
    f = tmp_path / "dup.edges"
    f.write_text("a b\nb c\nb a 2\n")
    code, _, err = run(["run", "--input", str(f), "--out", str(tmp_path / "o")], capsys)
    assert code == 2 and "dup.edges:3:" in err


def test_disconnected_and_bad_alpha(tmp_path, capsys):
    f = tmp_path / "two.edges"
    f.write_text("a b\nc d\n")
    assert run(["run", "--input", str(f), "--out", str(tmp_path / "o")], capsys)[0] == 2
    g = tmp_path / "ok.edges"
    g.write_text("a b\nb c\n")
    assert run(["run", "--input", str(g), "--alpha", "1", "--out", str(tmp_path / "o")], capsys)[0] == 2
    code, _, _ = run(["run", "--input", str(g), "--alpha", "1", "--allow-alpha-one", "--out", str(tmp_path / "o")], capsys)
    assert code == 0


def test_oracle_check_passes(capsys):
    code, out, _ = run(["oracle-check"], capsys)
    assert code == 0
    assert out.count("pass") == 24


def test_oracle_check_smaller_step_shrinks_error():
    coarse = {(r["shape"], r["alpha"]): r["error"] for r in oracle_table(step=0.01)}
    fine = {(r["shape"], r["alpha"]): r["error"] for r in oracle_table(step=0.001)}
    for key in coarse:
        assert 8.0 < coarse[key] / fine[key] < 12.0


def test_oracle_check_skips_wrong_branch(capsys):
    code, out, _ = run(["oracle-check", "--alpha", "0.2", "--branch", "high"], capsys)
    assert code == 0
    assert "skip" in out and "fail" not in out


def test_oracle_check_fails_on_tight_tolerance(capsys):
    assert run(["oracle-check", "--tol", "1e-6"], capsys)[0] == 1


def test_metrics(karate_paths, tmp_path, capsys):
    edges, labels = karate_paths
    code, out, _ = run(["metrics", "--pred", labels, "--truth", labels], capsys)
    assert code == 0 and json.loads(out) == {"ari": 1.0, "nmi": 1.0}
    one = tmp_path / "one.labels"
    one.write_text("".join(f"{v} all\n" for v in range(34)))
    code, out, _ = run(["metrics", "--pred", str(one), "--truth", labels, "--edges", edges], capsys)
    got = json.loads(out)
    assert got["ari"] == 0.0 and got["nmi"] == 0.0 and got["modularity"] == 0.0


def test_metrics_fixture(capsys):
    with open(os.path.join(FIXTURES, "partition_oracle.json")) as fh:
        want = json.load(fh)
    code, out, _ = run(["metrics", "--pred", os.path.join(FIXTURES, "part_a.labels"),
                        "--truth", os.path.join(FIXTURES, "part_b.labels")], capsys)
    got = json.loads(out)
    assert got["ari"] == pytest.approx(want["ari"], rel=1e-5)
    assert got["nmi"] == pytest.approx(want["nmi"], rel=1e-5)


def test_metrics_mismatch(tmp_path, karate_paths, capsys):
    short = tmp_path / "short.labels"
    short.write_text("0 a\n1 b\n")
    assert run(["metrics", "--pred", str(short), "--truth", karate_paths[1]], capsys)[0] == 2
