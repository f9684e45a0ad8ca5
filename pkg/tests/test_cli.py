from __future__ import annotations

import json
import subprocess
import sys

import pytest

from nckit.cli import main, run
from nckit.complex import from_maximal, simplex_complex, sphere_complex
from nckit.groups import symmetric
from nckit.homomorphisms import evaluation_hom
from nckit.numerics import clifford_sphere_rep
from nckit.presentations import presentation_of


@pytest.fixture
def files(tmp_path):
    S = from_maximal([["a", "b", "c"], ["c", "d"]])
    a = evaluation_hom(S, simplex_complex("abc"))
    assign = a.to_json()
    assign["target"] = a.target.to_json()
    paths = {
        "sphere2": sphere_complex(2).to_json(),
        "pres": presentation_of(S).to_json(),
        "assign": assign,
        "bad": {"a": [[1, []]], "b": [[1, []]], "c": [], "d": []},
        "s2flag": presentation_of(sphere_complex(2), "flag").to_json(),
        "rep": clifford_sphere_rep(2).rep.to_json(),
        "points": [{"0": 0.5, "1": 0.5}, {"0": "1/3", "1": "2/3"}],
        "s3": symmetric(3).to_json(),
    }
    out = {}
    for k, v in paths.items():
        p = tmp_path / f"{k}.json"
        p.write_text(json.dumps(v))
        out[k] = str(p)
    (tmp_path / "broken.json").write_text("{not json")
    out["broken"] = str(tmp_path / "broken.json")
    return out


def report_of(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_homology_of_sphere(files, capsys):
    code, rep = report_of(["homology", files["sphere2"]], capsys)
    assert code == 0
    assert [rep["result"]["homology"][k]["betti"] for k in "012"] == [1, 0, 1]
    assert rep["result"]["k_ranks"] == {"rank_K0": 2, "rank_K1": 0}


def test_reduced_homology_flag(files, capsys):
    code, rep = report_of(["homology", "--reduced", files["sphere2"]], capsys)
    assert rep["result"]["homology"]["0"]["betti"] == 0


@pytest.mark.parametrize("action", ["info", "skeleton", "flag", "barycentric"])
def test_complex_actions(files, capsys, action):
    argv = ["complex", action, files["sphere2"]] + (["--k", "1"] if action == "skeleton" else [])
    code, rep = report_of(argv, capsys)
    assert code == 0 and rep["overall"] == "PASS"


def test_verify_hom_exit_codes(files, capsys):
    assert report_of(["verify-hom", files["pres"], files["assign"]], capsys)[0] == 0
    code, rep = report_of(["verify-hom", files["pres"], files["bad"]], capsys)
    assert code == 1
    assert rep["result"]["status"] == "Failed"


def test_verify_rep(files, capsys):
    code, rep = report_of(["verify-rep", files["s2flag"], files["rep"]], capsys)
    assert code == 0
    assert all(c["status"] == "PASS" for c in rep["checks"])


def test_clifford(capsys):
    code, rep = report_of(["clifford", "--n", "3"], capsys)
    assert code == 0 and rep["result"]["dim"] == 4


def test_crossed(files, capsys):
    code, rep = report_of(["crossed", "--group", "cyclic:2", "--dim", "1", "--seed", "0"], capsys)
    assert code == 0
    for c in rep["checks"]:
        if "tolerance" in c:
            assert c["value"] <= 1e-10
    code, rep = report_of(["crossed", "--group", files["s3"], "--subgroup", "e,(1 2)", "--dim", "2"], capsys)
    assert code == 0


def test_cutoff(files, capsys):
    code, rep = report_of(["cutoff", "--group", "cyclic:2", "--F", "0,1", "--points", files["points"]], capsys)
    assert code == 0
    assert rep["result"]["trace_of_e"] == pytest.approx(rep["result"]["samples"])


def test_sigma_f(capsys):
    code, rep = report_of(["sigma-f", "--group", "zn:1", "--F=-1,0,1", "--window", "range:-3:3"], capsys)
    assert code == 0
    assert rep["result"]["maximal"] == 6 and rep["result"]["unital"] is False
    code, rep = report_of(["sigma-f", "--group", "free:2", "--F", "a,b", "--window", "ball:1", "--variant", "s"], capsys)
    assert code == 0 and rep["result"]["vertices"] == 5


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["homology", "/does/not/exist.json"],
        ["clifford", "--n", "2", "--tol", "rel=abc"],
        ["clifford", "--n", "2", "--tol", "nope=1"],
        ["clifford"],
        ["sigma-f", "--group", "zn:1", "--F", "0"],
    ],
)
def test_usage_errors_exit_3(argv, capsys):
    assert main(argv) == 3


def test_malformed_json_exit_3(files, capsys):
    assert main(["homology", files["broken"]]) == 3
    assert "malformed JSON" in capsys.readouterr().err


def test_seed_env_fallback(monkeypatch):
    monkeypatch.setenv("NCKIT_SEED", "11")
    _, rep = run(["crossed", "--group", "cyclic:2", "--output", "/dev/null"])
    assert rep.config["seed"] == 11


def test_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["crossed", "--group", "cyclic:3", "--dim", "2", "--seed", "4", "-o", str(a)])
    run(["crossed", "--group", "cyclic:3", "--dim", "2", "--seed", "4", "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert "timestamp" not in json.loads(a.read_text())


def test_suite_and_mutation(capsys):
    code, rep = report_of(["suite", "paper", "--seed", "7"], capsys)
    assert code == 0 and rep["overall"] == "PASS"
    assert sum(c["status"] == "OUT OF SCOPE" for c in rep["checks"]) >= 4
    code, rep = report_of(["suite", "--mutate-boundary"], capsys)
    assert code == 1
    failing = [c["name"] for c in rep["checks"] if c["status"] == "FAIL"]
    assert failing == ["homology: boundary squares to zero"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "nckit", "clifford", "--n", "1"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["overall"] == "PASS"
