import json

import pytest
from click.testing import CliRunner

from latcover import harness
from latcover.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def instance(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"shape": [4, 4], "points": [[1, 1], [2, 2], [3, 3], [4, 4]]}))
    return str(path)


def run_json(runner, args):
    res = runner.invoke(main, ["--json", *args])
    assert res.exit_code == 0, res.output
    return [json.loads(line) for line in res.output.splitlines() if line.strip()]


def test_cover(runner, instance):
    (rec,) = run_json(runner, ["cover", "--input", instance])
    assert rec["value"] == 4 and len(rec["witness"]) == 4
    assert set(rec["witness"][0]) == {"free_axes", "fixed_coords"}


def test_cover_text(runner, instance):
    res = runner.invoke(main, ["cover", "--input", instance, "--greedy"])
    assert res.exit_code == 0 and res.output.startswith("command=cover value=4")


def test_cover_enumerate(runner, instance):
    recs = run_json(runner, ["cover", "--input", instance, "--enumerate", "--cap", "3"])
    assert recs[1]["count"] == 24 * 16 and len(recs[1]["tuples"]) == 3


def test_independence(runner, instance):
    (rec,) = run_json(runner, ["independence", "--input", instance, "--exact", "--family", "lines"])
    assert rec["value"] == 4


def test_decomps(runner, tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps({"shape": [2, 2], "points": [[1, 1], [2, 2]]}))
    (rec,) = run_json(runner, ["decomps", "--input", str(path)])
    assert rec["count"] == 8


@pytest.mark.parametrize("theorem", ["linear", "same-cover"])
def test_restrict(runner, instance, theorem):
    (rec,) = run_json(runner, ["restrict", "--input", instance, "--theorem", theorem])
    assert rec["verified_value"] >= rec["claimed_lower_bound"] >= 1


def test_restrict_offdiag_seeded(runner, tmp_path):
    path = tmp_path / "o.json"
    path.write_text(json.dumps({"shape": [8, 8], "points": [[i, 9 - i] for i in range(1, 9)]}))
    (rec,) = run_json(runner, ["restrict", "--input", str(path), "--theorem", "offdiag", "--seed", "3"])
    assert rec["verified_value"] >= 1


def test_emit_tree(runner, instance, tmp_path):
    out = tmp_path / "tree.json"
    res = runner.invoke(main, ["restrict", "--input", instance, "--theorem", "same-cover",
                               "--emit-tree", str(out)])
    assert res.exit_code == 0
    assert json.loads(out.read_text())["depth"] == 0


def test_hypothesis_error_exit(runner, instance):
    res = runner.invoke(main, ["restrict", "--input", instance, "--theorem", "linear", "--l", "5"])
    assert res.exit_code == 2 and "error:" in res.output


def test_bad_instance(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"shape": [2, 2], "points": [[3, 1]]}))
    res = runner.invoke(main, ["cover", "--input", str(path)])
    assert res.exit_code == 2


def test_slicerank(runner, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"shape": [2, 2, 2], "p": 2, "entries": [1] * 8}))
    (rec,) = run_json(runner, ["slicerank", "--input", str(path)])
    assert rec["value"] == 1 and rec["method"] == "oracle"
    res = runner.invoke(main, ["slicerank", "--input", str(path), "--bridge"])
    assert res.exit_code == 2


def test_slicerank_bridge_default(runner, tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"shape": [2, 2, 2], "p": 2, "entries": [0, 0, 0, 1, 0, 1, 1, 0]}))
    (rec,) = run_json(runner, ["slicerank", "--input", str(path)])
    assert rec["value"] == 2 and rec["method"] == "antichain-bridge"


def test_verify_all(runner):
    res = runner.invoke(main, ["verify", "--suite", "all", "--shape", "3,3", "--count", "5",
                               "--family", "slices", "--family", "lines"])
    assert res.exit_code == 0, res.output
    assert len(res.output.splitlines()) == len(harness.SUITES)


def test_verify_json(runner):
    (rec,) = run_json(runner, ["verify", "--suite", "coloring", "--shape", "3,3,3", "--count", "4"])
    assert rec["suite"] == "coloring" and rec["violations"] == []


def test_verify_exit_code_on_violation(runner, monkeypatch):
    monkeypatch.setattr(harness, "subspace_covering_closed_form", lambda B, M, shape: -1)
    res = runner.invoke(main, ["verify", "--suite", "closed-form", "--shape", "2,2", "--count", "2"])
    assert res.exit_code == 1 and "violation relation" in res.output


def test_budget_env(runner, monkeypatch):
    monkeypatch.setattr(harness, "DEFAULT_BUDGET", 3)
    (rec,) = run_json(runner, ["verify", "--suite", "coloring", "--shape", "3,3", "--count", "10"])
    assert rec["partial"] and rec["instances_checked"] == 3


def test_search_c(runner):
    (rec,) = run_json(runner, ["search-c", "--shape", "2,2,2", "--kind", "exhaustive"])
    assert rec["ratio"] == "1/2" and rec["exhaustive"]


def test_hunt(runner):
    (rec,) = run_json(runner, ["hunt", "--shape", "3,3", "--v", "2", "--s", "1", "--r", "1",
                               "--count", "5", "--density", "0.5"])
    assert rec["examined"] == 5 and rec["findings"]


def test_bad_shape(runner):
    res = runner.invoke(main, ["verify", "--suite", "coloring", "--shape", "a,b"])
    assert res.exit_code == 2
