import json
import subprocess
import sys

import pytest

from opergraph import __version__
from opergraph.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, run


def invoke(tmp_path, *argv, sub="out"):
    out = tmp_path / sub
    code = run(["--out", str(out), *argv])
    return code, out


def read_json(path):
    return json.loads(path.read_text())


def test_ainf(tmp_path, capsys):
    code, out = invoke(tmp_path, "ainf", "--arity", "4")
    assert code == EXIT_OK
    data = read_json(out / "ainf.json")
    assert data["dims"] == [1, 5, 5]
    assert data["betti"] == {"0": 1}
    assert data["d_squared_zero"] is True
    assert json.loads(capsys.readouterr().out) == data
    manifest = read_json(out / "manifest.json")
    assert manifest["subcommand"] == "ainf"
    assert manifest["parameters"] == {"arity": 4}
    assert manifest["version"] == __version__
    assert manifest["outputs"] == ["ainf.json"]
    assert manifest["wall_time_seconds"] >= 0


def test_trees(tmp_path):
    code, out = invoke(tmp_path, "trees", "--arity", "4")
    assert code == EXIT_OK
    data = read_json(out / "trees.json")
    assert data["count"] == 11
    code, out = invoke(tmp_path, "trees", "--arity", "5", "--min-children", "3", sub="k3")
    assert read_json(out / "trees.json")["count"] == 4


def test_presentation(tmp_path):
    code, out = invoke(tmp_path, "presentation", "--name", "lie", "--arity", "4")
    assert code == EXIT_OK
    data = read_json(out / "presentation.json")
    assert data["dimension"] == 6 == data["free_algebra_dimension"]


def test_ribbon_census(tmp_path):
    code, out = invoke(tmp_path, "ribbon-census", "--genus", "1", "--boundaries", "1")
    assert code == EXIT_OK
    lines = (out / "ribbon-census.csv").read_text().splitlines()
    assert lines[0] == "g,n,m,generator_count,killed_count"
    assert len(lines) == 3


def test_moduli_homology(tmp_path):
    code, out = invoke(tmp_path, "moduli-homology", "--genus", "0", "--boundaries", "3")
    assert code == EXIT_OK
    assert read_json(out / "moduli-homology.json") == {"3": 1}


def test_hochschild(tmp_path):
    code, out = invoke(tmp_path, "hochschild", "--algebra", "m2_algebra", "--max-degree", "2")
    assert code == EXIT_OK
    assert read_json(out / "hochschild.json")["cohomology"] == {"0": 1, "1": 0, "2": 0}


def test_hochschild_from_file(tmp_path):
    alg = tmp_path / "q.json"
    alg.write_text(json.dumps({"dim": 1, "c": [[0, 0, 0, 1, 1]], "unit": [1]}))
    code, out = invoke(tmp_path, "hochschild", "--algebra", str(alg), "--max-degree", "3")
    assert code == EXIT_OK
    assert read_json(out / "hochschild.json")["cohomology"] == {"0": 1, "1": 0, "2": 0, "3": 0}


def test_deform_check(tmp_path):
    code, out = invoke(tmp_path, "deform-check", "--series", "dual_deformation")
    assert code == EXIT_OK
    data = read_json(out / "deform-check.json")
    assert data["is_deformation"] and data["matches_associator"]


def test_star_exact(tmp_path):
    code, out = invoke(tmp_path, "star", "--poisson", "constant_poisson", "--f", "x1", "--g", "x2",
                       "--order", "1")
    assert code == EXIT_OK
    data = read_json(out / "star.json")
    assert data["weight_mode"] == "exact"
    assert data["coefficients_text"] == ["x1*x2", "1"]


def test_assoc_residual_mc_and_replay(tmp_path):
    argv = ["assoc-residual", "--poisson", "linear_poisson", "--f", "x1*x2", "--g", "x3",
            "--h", "x1+x2", "--order", "2", "--mc-samples", "20000", "--seed", "4"]
    code, out = invoke(tmp_path, *argv)
    assert code == EXIT_OK
    first = (out / "assoc-residual.json").read_bytes()
    data = json.loads(first)
    assert data["weight_mode"] == "monte-carlo"
    assert data["within_3_sigma"] is True
    assert read_json(out / "manifest.json")["seed"] == 4
    code = run(["--out", str(tmp_path / "again"), "--workers", "3", "replay", str(out / "manifest.json")])
    assert code == EXIT_OK
    assert (tmp_path / "again" / "assoc-residual.json").read_bytes() == first
    m1, m2 = read_json(out / "manifest.json"), read_json(tmp_path / "again" / "manifest.json")
    m1.pop("wall_time_seconds")
    m2.pop("wall_time_seconds")
    assert m1 == m2


@pytest.mark.parametrize("argv", [
    ["ainf", "--arity", "5"],
    ["ribbon-census", "--genus", "0", "--boundaries", "4"],
    ["hochschild", "--algebra", "dual_numbers", "--max-degree", "2"],
    ["star", "--poisson", "linear_poisson", "--f", "x1", "--g", "x2*x3", "--order", "1"],
])
def test_deterministic_outputs_are_byte_identical(tmp_path, argv):
    assert run(["--out", str(tmp_path / "a"), *argv]) == EXIT_OK
    assert run(["--out", str(tmp_path / "b"), "replay", str(tmp_path / "a" / "manifest.json")]) == EXIT_OK
    name = read_json(tmp_path / "a" / "manifest.json")["outputs"][0]
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["ainf"],
    ["ainf", "--arity", "0"],
    ["presentation", "--name", "gerstenhaber", "--arity", "3"],
    ["moduli-homology", "--genus", "0", "--boundaries", "2"],
    ["hochschild", "--algebra", "no_such_algebra", "--max-degree", "2"],
    ["star", "--poisson", "constant_poisson", "--f", "sin(x1)", "--g", "x2", "--order", "1"],
    ["star", "--poisson", "constant_poisson", "--f", "x1", "--g", "x2", "--order", "1",
     "--mc-samples", "100"],
    ["star", "--poisson", "constant_poisson", "--f", "x1", "--g", "x2", "--order", "1",
     "--mc-samples", "100", "--seed", "1", "--weights", "moyal_weights"],
    ["star", "--poisson", "linear_poisson", "--f", "x1*x2", "--g", "x2*x3", "--order", "2"],
])
def test_invalid_input_exit_one_and_no_output(tmp_path, argv):
    code, out = invoke(tmp_path, *argv)
    assert code == EXIT_INVALID
    assert not out.exists() or not any(out.iterdir())


def test_malformed_json_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = invoke(tmp_path, "deform-check", "--series", str(bad))
    assert code == EXIT_INVALID
    assert not out.exists()


def test_nonassociative_algebra_rejected(tmp_path):
    alg = tmp_path / "a.json"
    alg.write_text(json.dumps({"dim": 2, "c": [[0, 0, 1, 1, 1], [1, 1, 0, 1, 1]]}))
    code, _ = invoke(tmp_path, "hochschild", "--algebra", str(alg), "--max-degree", "1")
    assert code == EXIT_INVALID


@pytest.mark.parametrize("argv", [
    ["ainf", "--arity", "12"],
    ["moduli-homology", "--genus", "2", "--boundaries", "2"],
    ["presentation", "--name", "assoc", "--arity", "9"],
])
def test_budget_exit_two(tmp_path, argv):
    code, out = invoke(tmp_path, *argv)
    assert code == EXIT_BUDGET
    assert not out.exists() or not any(out.iterdir())


def test_failed_run_keeps_previous_outputs(tmp_path):
    code, out = invoke(tmp_path, "ainf", "--arity", "3")
    before = (out / "ainf.json").read_bytes()
    assert invoke(tmp_path, "ainf", "--arity", "12")[0] == EXIT_BUDGET
    assert (out / "ainf.json").read_bytes() == before
    assert sorted(p.name for p in out.iterdir()) == ["ainf.json", "manifest.json"]


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "opergraph.cli", "--out", str(tmp_path),
                           "moduli-homology", "--genus", "1", "--boundaries", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"3": 1}
    proc = subprocess.run([sys.executable, "-m", "opergraph.cli", "--version"], capture_output=True, text=True)
    assert proc.stdout.strip() == __version__
