import io
import json

import pytest

from torideg.cli import main, parse_multipliers, parse_point, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_point():
    assert parse_point("3:(1,0)") == (3, 1, 0)
    assert parse_point(" 2 : 1, 1 ") == (2, 1, 1)
    with pytest.raises(UsageError):
        parse_point("three")
    assert parse_multipliers(["P=2,0-1=3"]) == {"P": 2, "0-1": 3}
    with pytest.raises(UsageError):
        parse_multipliers(["P"])


def test_nu(capsys, data_dir):
    code, out, _ = run(capsys, "nu", "--polytope", str(data_dir / "sq1.json"), "--point", "3:(1,0)")
    assert code == 0
    r = json.loads(out)
    assert r["nu"] == {"0": "1", "0-1": "1"} and r["agrees_with_min_over_chains"]
    assert r["chain_used"][:2] == ["0", "0-1"]


def test_nu_marking_file_and_multipliers(capsys, data_dir):
    args = ["nu", "--polytope", str(data_dir / "sq1.json"), "--point", "2:(1,1)"]
    _, out, _ = run(capsys, *args)
    assert json.loads(out)["nu"] == {"P": "1"}
    _, out, _ = run(capsys, *args, "--marking", str(data_dir / "sq1-marking.json"))
    assert json.loads(out)["nu"] == {"P": "1/2"}
    _, out, _ = run(capsys, *args, "--multipliers", "P=2")
    assert json.loads(out)["nu"] == {"P": "1/2"}


def test_nu_from_stdin(capsys, data_dir, monkeypatch):
    body = json.dumps([{"m": 1, "eta": [0, 0]}, {"m": 1, "eta": [1, 0]}])
    monkeypatch.setattr("sys.stdin", io.StringIO(body))
    code, out, _ = run(capsys, "nu", "--polytope", str(data_dir / "sq1.json"), "--linearization", "alternate")
    r = json.loads(out)
    assert code == 0 and len(r["input"]) == 2 and r["agrees_with_min_over_chains"]
    assert r["chain_used"] is None


def test_faces(capsys, data_dir):
    code, out, _ = run(capsys, "faces", "--polytope", str(data_dir / "sq1.json"))
    assert code == 0 and json.loads(out)["counts"] == {"faces": 9, "maximal_chains": 8}


def test_normality_q_is_reported_not_raised(capsys, data_dir):
    code, out, _ = run(capsys, "normality", "--polytope", str(data_dir / "q-simplex.json"))
    r = json.loads(out)
    assert code == 0 and r["normal"] is False and r["witness"]["m"] == 2
    code, out, _ = run(capsys, "normality", "--polytope", str(data_dir / "r-simplex.json"))
    assert json.loads(out) == {"normal": True, "witness": None, "levels_checked": [2, 2]}


def test_triangulate(capsys, data_dir):
    code, out, _ = run(capsys, "triangulate", "--polytope", str(data_dir / "simplex6.json"))
    v = json.loads(out)["verification"]
    assert code == 0 and v["simplices"] == 24 and v["volume"] == "36"


def test_fan_to_directory(capsys, data_dir, tmp_path):
    code, out, _ = run(capsys, "fan", "--polytope", str(data_dir / "sq2.json"),
                       "--marking", str(data_dir / "sq2-modified-marking.json"),
                       "--level-bound", "3", "--out", str(tmp_path))
    assert code == 0 and out == ""
    r = json.loads((tmp_path / "fan.json").read_text())
    assert r["level_bound"] == 3 and len(r["chains"]) == 8
    assert any(c["component"]["index"] == 2 for c in r["chains"])


def test_algebra_and_shadow(capsys, data_dir):
    code, out, _ = run(capsys, "algebra", "--polytope", str(data_dir / "sq1.json"), "--degree-bound", "2")
    r = json.loads(out)
    assert code == 0 and set(r) == {"generators", "kernel", "weight_vector", "homogenized"}
    assert len(r["homogenized"]) > 0
    code, out, _ = run(capsys, "shadow", "--polytope", str(data_dir / "sq2.json"), "--marking", "integral")
    r = json.loads(out)
    assert code == 0 and len(r["components"]) == 8 and len(r["generators"]) == 9


def test_render(capsys, data_dir):
    code, out, _ = run(capsys, "render", "--polytope", str(data_dir / "sq1.json"))
    assert code == 0 and out.startswith("<?xml") and out.count('class="simplex"') == 8


def test_usage_errors_exit_2(capsys, data_dir, tmp_path):
    code, _, err = run(capsys, "nu", "--polytope", str(data_dir / "sq1.json"), "--point", "x")
    assert code == 2 and "cannot parse" in err
    code, _, err = run(capsys, "faces", "--polytope", str(tmp_path / "none.json"))
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["fan", "--polytope", str(data_dir / "sq1.json"), "--level-bound", "0"])
    assert e.value.code == 2


@pytest.mark.parametrize("argv, error", [
    (["render", "--polytope", "simplex6.json"], "UnsupportedDimension"),
    (["triangulate", "--polytope", "q-simplex.json"], "NonNormalPolytope"),
    (["nu", "--polytope", "sq1.json", "--point", "1:(2,0)"], "InvalidGradedPoint"),
    (["nu", "--polytope", "sq1.json", "--point", "1:(1,0,0)"], "InvalidGradedPoint"),
    (["shadow", "--polytope", "sq1.json"], "InapplicableMarking"),
])
def test_validation_errors_exit_1(capsys, data_dir, argv, error):
    argv = [str(data_dir / a) if a.endswith(".json") else a for a in argv]
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == error


def test_non_normal_witness_in_error(capsys, data_dir):
    _, _, err = run(capsys, "faces", "--polytope", str(data_dir / "q-simplex.json"))
    assert json.loads(err)["witness"]["m"] == 2


def test_output_is_deterministic(capsys, data_dir):
    for argv in (["fan", "--polytope", str(data_dir / "sq1.json")],
                 ["algebra", "--polytope", str(data_dir / "sq1.json")],
                 ["render", "--polytope", str(data_dir / "sq2.json")]):
        first = run(capsys, *argv)[1]
        assert run(capsys, *argv)[1] == first


def test_paper_examples(capsys):
    code, out, _ = run(capsys, "paper-examples", "--list")
    assert code == 0 and "unit-square-monoid-law" in out
    code, out, _ = run(capsys, "paper-examples")
    last = out.strip().splitlines()[-1]
    n = int(last.split("/")[1].split()[0])
    assert code == 0 and last.startswith(f"{n}/{n}") and "FAIL" not in out


def test_paper_examples_catch_corrupt_fixture(capsys, data_dir, tmp_path):
    m = json.loads((data_dir / "sq2-modified-marking.json").read_text())
    m["marking"]["2-3"] = ["1", "2"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(m))
    code, out, _ = run(capsys, "paper-examples", "--fixture", f"square-2x2-modified={bad}")
    assert code == 1 and "FAIL" in out
    code, _, _ = run(capsys, "paper-examples", "--fixture", "nope=x.json")
    assert code == 2
