import csv
import json

import numpy as np
import pytest

import balpart as bp
from balpart.cli import main

from conftest import random_hypergraph


@pytest.fixture
def instance(tmp_path, rng):
    hg = random_hypergraph(rng, 80, 100, max_weight=12)
    path = tmp_path / "inst.hgr"
    bp.write_hgr(hg, path)
    return path, hg


def test_partition_happy_path(instance, tmp_path, capsys):
    path, hg = instance
    out = tmp_path / "out.part"
    code = main(["partition", "--hypergraph", str(path), "--k", "4",
                 "--epsilon", "0.03", "--seed", "1",
                 "--output", str(out)])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["k"] == 4
    assert "km1" in report and "epsilon_hat" in report
    assert "max_block_weight" in report
    part = bp.read_partition(out, hg.num_vertices)
    assert len(part.block_of) == hg.num_vertices


def test_evaluate_reproduces_km1(instance, tmp_path, capsys):
    path, hg = instance
    out = tmp_path / "out.part"
    assert main(["partition", "--hypergraph", str(path), "--k", "4",
                 "--epsilon", "0.03", "--seed", "1",
                 "--output", str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert main(["evaluate", "--hypergraph", str(path),
                 "--partition", str(out)]) == 0
    evaluation = json.loads(capsys.readouterr().out)
    assert evaluation["km1"] == report["km1"]


def test_partition_csv_report(instance, tmp_path):
    path, _ = instance
    report_file = tmp_path / "r.csv"
    code = main(["partition", "--hypergraph", str(path), "--k", "2",
                 "--epsilon", "0.1", "--report", "csv",
                 "--report-file", str(report_file)])
    assert code == 0
    lines = report_file.read_text().splitlines()
    assert lines[0] == "key,value"
    assert any(line.startswith("km1,") for line in lines)


def test_partition_threads_flag(instance, capsys):
    path, _ = instance
    code = main(["partition", "--hypergraph", str(path), "--k", "8",
                 "--epsilon", "0.1", "--threads", "4"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["k"] == 8


def test_generate_and_partition(tmp_path, rng, capsys):
    base_hg = random_hypergraph(rng, 300, 200, unit=True)
    base = tmp_path / "base.hgr"
    bp.write_hgr(base_hg, base)
    out = tmp_path / "artificial.hgr"
    assert main(["generate", "--base", str(base), "--seed", "5",
                 "--output", str(out)]) == 0
    capsys.readouterr()
    hg = bp.load_hgr(out)
    assert hg.num_vertices == 300
    assert int(hg.vertex_weights.max()) >= 1


def test_profile_command(tmp_path, capsys):
    results = tmp_path / "results.csv"
    with open(results, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algorithm", "instance", "quality"])
        for alg, qualities in (("A", (10, 20)), ("B", (10, 30))):
            for i, q in enumerate(qualities):
                writer.writerow([alg, f"i{i}", q])
    assert main(["profile", "--input", str(results)]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    by_alg = {}
    for row in rows:
        by_alg.setdefault(row["algorithm"], []).append(
            (float(row["tau"]), float(row["fraction"])))
    assert (1.0, 1.0) in by_alg["A"]
    assert (1.0, 0.5) in by_alg["B"]
    assert (1.5, 1.0) in by_alg["B"]


def test_bench_csv_shape(instance, tmp_path):
    path, _ = instance
    out = tmp_path / "bench.csv"
    code = main(["bench", "--hypergraphs", str(path), "--k", "2,4",
                 "--epsilon", "0.03,0.1", "--seeds", "2",
                 "--output", str(out)])
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 4  # one row per (instance, k, epsilon)
    for row in rows:
        assert row["seeds"] == "2"
        assert 0.0 <= float(row["balanced_rate"]) <= 1.0
        assert int(row["balanced_runs"]) + int(row["imbalanced_runs"]) == 2


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as err:
        main(["partition", "--k", "4"])
    assert err.value.code == 2


def test_missing_file_exits_one(tmp_path, capsys):
    code = main(["partition", "--hypergraph", str(tmp_path / "nope.hgr"),
                 "--k", "2", "--epsilon", "0.1"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_malformed_file_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.hgr"
    bad.write_text("2 3\n1 2\n")
    code = main(["partition", "--hypergraph", str(bad), "--k", "2",
                 "--epsilon", "0.1"])
    assert code == 1
    assert "line" in capsys.readouterr().err
