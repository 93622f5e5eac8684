import json

import pytest

from maxplus_frechet.cli import main

P3, Q3 = ["0.2", "0.5", "0.3"], ["0.4", "0.4", "0.2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def marginals3(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"p": P3, "q": Q3}))
    return str(path)


def test_bounds_json(capsys, marginals3):
    code, out, _ = run(capsys, "bounds", "--input", marginals3)
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == doc["m"] == 3 and doc["sigma"] == "1"
    assert doc["upper_cumulative"] == [["0.2", "0.2", "0.2"], ["0.4", "0.7", "0.7"], ["0.4", "0.8", "1"]]
    assert doc["lower_cumulative"] == [["0", "0", "0.2"], ["0.1", "0.5", "0.7"], ["0.4", "0.8", "1"]]
    assert doc["upper_table"] == [["0.2", "0", "0"], ["0.2", "0.3", "0"], ["0", "0.1", "0.2"]]
    assert doc["lower_table"] == [["0", "0", "0.2"], ["0.1", "0.4", "0"], ["0.3", "0", "0"]]


def test_bounds_csv_input_and_output(capsys, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1\n1\n")
    code, out, _ = run(capsys, "bounds", "--input", str(path), "--format", "csv")
    assert code == 0
    assert "# upper_table\n1\n" in out
    assert "sigma,1" in out


def test_bounds_float_mode(capsys, marginals3):
    code, out, _ = run(capsys, "bounds", "--input", marginals3, "--mode", "float")
    assert code == 0
    doc = json.loads(out)
    assert doc["upper_cumulative"][1][1] == pytest.approx(0.7)


def test_non_terminating_fractions(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"p": ["1/3", "2/3"], "q": ["1"]}))
    code, out, _ = run(capsys, "bounds", "--input", str(path))
    assert code == 0
    assert json.loads(out)["upper_cumulative"] == [["1/3"], ["1"]]


def test_bounds_infeasible(capsys, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0.6\n0.5\n")
    code, _, err = run(capsys, "bounds", "--input", str(path))
    assert code == 1
    assert "3/5" in err and "1/2" in err


@pytest.mark.parametrize("text", ["{not json", "0.1,abc\n0.1\n", "0.5\n", '{"p": [1]}',
                                  "-1,2\n1\n"])
def test_bounds_input_errors(capsys, tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, _, err = run(capsys, "bounds", "--input", str(path))
    assert code == 2
    assert err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "bounds", "--input", str(tmp_path / "nope.json"))
    assert code == 2


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--mode", "fuzzy"])
    assert exc.value.code == 2


def test_check_member(capsys, tmp_path):
    path = tmp_path / "t.json"
    table = [["0.2", "0", "0"], ["0.2", "0.3", "0"], ["0", "0.1", "0.2"]]
    path.write_text(json.dumps({"p": P3, "q": Q3, "table": table}))
    code, out, _ = run(capsys, "check", "--input", str(path))
    assert code == 0
    rep = json.loads(out)["tables"]["table"]
    assert rep["classical"] and rep["tropical"] and rep["agree"]
    assert rep["sandwich"]["lower_ok"] and rep["sandwich"]["upper_ok"]


def test_check_perturbed(capsys, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("0.2,0.5,0.3\n0.4,0.4,0.2\n0.2,0,0\n0.2,0.4,0\n0,0.1,0.2\n")
    code, out, _ = run(capsys, "check", "--input", str(path))
    assert code == 1
    rep = json.loads(out)["tables"]["table"]
    assert not rep["classical"] and not rep["tropical"] and rep["sandwich"] is None


def test_check_zero_instance(capsys, tmp_path):
    path = tmp_path / "z.json"
    path.write_text(json.dumps({"p": [0, 0], "q": [0], "table": [[0], [0]]}))
    code, _, _ = run(capsys, "check", "--input", str(path))
    assert code == 0


def test_check_shape_error(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"p": P3, "q": Q3, "table": [[1]]}))
    code, _, _ = run(capsys, "check", "--input", str(path))
    assert code == 2


def test_bounds_output_round_trips_through_check(capsys, marginals3, tmp_path):
    out_path = tmp_path / "bounds.json"
    assert run(capsys, "bounds", "--input", marginals3, "--output", str(out_path))[0] == 0
    code, out, _ = run(capsys, "check", "--input", str(out_path))
    assert code == 0
    reports = json.loads(out)["tables"]
    assert set(reports) == {"upper_table", "lower_table"}


def test_sample(capsys, marginals3):
    code, out, _ = run(capsys, "sample", "--input", marginals3, "--count", "100", "--seed", "5")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["samples"]) == 100 and doc["all_passed"]


def test_sample_is_byte_identical(capsys, marginals3):
    a = run(capsys, "sample", "--input", marginals3, "--count", "1", "--seed", "11")[1]
    b = run(capsys, "sample", "--input", marginals3, "--count", "1", "--seed", "11")[1]
    assert a == b


def test_sample_infeasible(capsys, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,1\n1\n")
    assert run(capsys, "sample", "--input", str(path), "--count", "3")[0] == 1


def test_residuate_left(capsys, tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"A": [[0], [0]], "B": [[3], [5]]}))
    code, out, _ = run(capsys, "residuate", "--input", str(path))
    assert code == 0
    assert json.loads(out)["result"] == [["3"]]


def test_residuate_identity_and_infinities(capsys, tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("0,-inf\n-inf,0\n\n1,+inf\n-inf,2.5\n")
    code, out, _ = run(capsys, "residuate", "--input", str(path), "--side", "left")
    assert code == 0
    assert json.loads(out)["result"] == [["1", "+inf"], ["-inf", "2.5"]]


def test_residuate_right(capsys, tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"D": [[3], [5]], "C": [[0]]}))
    code, out, _ = run(capsys, "residuate", "--input", str(path), "--side", "right")
    assert code == 0
    assert json.loads(out)["result"] == [["3"], ["5"]]


def test_residuate_shape_mismatch(capsys, tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"A": [[0], [0]], "B": [[3, 1]]}))
    assert run(capsys, "residuate", "--input", str(path))[0] == 2


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--iterations", "20", "--max-size", "8",
                       "--format", "csv")
    assert code == 0
    assert out.strip().endswith("all suites passed")
    assert "galois: " in out


def test_verify_json_deterministic(capsys):
    a = run(capsys, "verify", "--iterations", "10", "--max-size", "6", "--seed", "3")
    b = run(capsys, "verify", "--iterations", "10", "--max-size", "6", "--seed", "3")
    assert a[0] == 0 and a[1] == b[1]
    assert json.loads(a[1])["passed"]
