import json
import subprocess
import sys

import pytest

from rootstretch.cli import BAD_INPUT, CHECK_FAILED, OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_fixture(capsys):
    code, out, _ = run(capsys, "diagram", "validate", "D_4")
    assert code == OK and out.strip() == "valid"


def test_validate_reports_bad_cartan(capsys, tmp_path):
    doc = {"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "m": 3}],
           "cartan": {"a,b": -1, "b,a": -2}, "elastic": {"x": "a", "left": [], "right": ["b"]}}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "diagram", "validate", str(path), "--json")
    assert code == CHECK_FAILED
    assert json.loads(out)["valid"] is False


def test_missing_diagram_is_bad_input(capsys):
    code, _, err = run(capsys, "stretch", "rate", "no_such_diagram")
    assert code == BAD_INPUT and "error" in err


def test_bad_root_is_bad_input(capsys):
    assert run(capsys, "stretch", "root", "D_4", "--root", "1,x,2,1", "--n", "1")[0] == BAD_INPUT
    assert run(capsys, "stretch", "root", "D_4", "--root", "1,1,3,1", "--n", "1")[0] == BAD_INPUT


def test_bad_elastic_is_bad_input(capsys):
    assert run(capsys, "stretch", "rate", "D_4", "--elastic", "3:1")[0] == BAD_INPUT
    assert run(capsys, "stretch", "rate", "D_4", "--elastic", "3:1:2")[0] == BAD_INPUT


def test_stretch_diagram_writes_file(capsys, tmp_path):
    out_file = tmp_path / "d6.json"
    code, out, _ = run(capsys, "diagram", "stretch", "D_4", "--n", "2", "-o", str(out_file))
    assert code == OK and out.startswith("6 vertices")
    code, out, _ = run(capsys, "diagram", "validate", str(out_file))
    assert code == OK and out.strip() == "valid"


def test_stretch_root_json(capsys):
    code, out, _ = run(capsys, "stretch", "root", "D_4", "--n", "2", "--json")
    doc = json.loads(out)
    assert code == OK and doc["root"] == [1, 1, 2, 2, 2, 1] and doc["depth"] == 9


def test_rate_and_classify(capsys):
    code, out, _ = run(capsys, "stretch", "rate", "D_4", "--json")
    doc = json.loads(out)
    assert code == OK and doc["t"] == 2
    assert all(r["depth"] == r["predicted"] for r in doc["table"])
    code, out, _ = run(capsys, "stretch", "classify", "star_3_2", "--root", "1,1,1,4,1,1", "--n", "2", "--json")
    doc = json.loads(out)
    assert code == OK and doc["case"] == 2
    assert (doc["comparable"], doc["depth_delta"]) == (True, 5)


def test_classify_rejects_simple_root(capsys):
    assert run(capsys, "stretch", "classify", "D_4", "--root", "0,0,1,0")[0] == BAD_INPUT


def test_roots_gen_writes_dot_and_json(capsys, tmp_path):
    dot, js = tmp_path / "p.dot", tmp_path / "p.json"
    code, out, _ = run(capsys, "roots", "gen", "A_3", "--max-depth", "5", "--dot", str(dot), "--json", str(js))
    assert code == OK and out.startswith("6 positive roots")
    assert dot.read_text().startswith("digraph")
    levels = json.loads(js.read_text())["levels"]
    assert sum(len(level) for level in levels) == 6


def test_classes(capsys, tmp_path):
    js = tmp_path / "p.json"
    code, out, _ = run(capsys, "classes", "build", "D_4", "--json", str(js))
    assert code == OK and out.startswith("29 classes")
    assert json.loads(js.read_text())["n0"] == 2
    code, out, _ = run(capsys, "classes", "polynomial", "D_4", "--json")
    doc = json.loads(out)
    assert code == OK and doc["p"] == "n^2 + 7*n + 12"
    assert all(r["p"] == r["downset"] for r in doc["table"])


def test_arr_charpoly(capsys, tmp_path):
    path = tmp_path / "braid.json"
    path.write_text(json.dumps({"dim": 3, "normals": [[1, -1, 0], [1, 0, -1], [0, 1, -1]]}))
    code, out, _ = run(capsys, "arr", "charpoly", str(path), "--primes", "--json")
    doc = json.loads(out)
    assert code == OK and doc["chi"] == [0, 2, -3, 1] and doc["agree"] and doc["regions"] == 6
    # every minor of the braid matrix is 0 or 1, so any four primes will do
    code, out, _ = run(capsys, "arr", "charpoly", str(path), "--primes", "2,3,5,7")
    assert code == OK and "agrees" in out


def test_arr_primes_below_minor_bound(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"dim": 2, "normals": [[1, 3], [1, 0]]}))
    assert run(capsys, "arr", "charpoly", str(path), "--primes", "2,3,5")[0] == BAD_INPUT
    assert run(capsys, "arr", "charpoly", str(path), "--primes", "5,7,x")[0] == BAD_INPUT


def test_arr_unreadable(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    assert run(capsys, "arr", "charpoly", str(path))[0] == BAD_INPUT


def test_shards(capsys):
    code, out, _ = run(capsys, "shards", "count", "D_4", "--n", "4")
    assert code == OK and out.strip() == "1394"
    code, out, _ = run(capsys, "shards", "charpoly", "D_4", "--json")
    doc = json.loads(out)
    assert code == OK and doc["form"]["t"] == 2 and doc["validated_n"]
    code, out, _ = run(capsys, "shards", "fractures", "A_3", "--json")
    assert code == OK and len(json.loads(out)["fractures"]) == 2


def test_verify_single_tag(capsys):
    code, out, _ = run(capsys, "verify", "--tags", "lineardepth", "--fixtures", "D_4,A_3", "--json")
    doc = json.loads(out)
    assert code == OK and doc["summary"]["failed"] == 0
    assert {c["tag"] for c in doc["checks"]} == {"lineardepth"}


def test_verify_unknown_tag(capsys):
    assert run(capsys, "verify", "--tags", "nonsense")[0] == BAD_INPUT


def test_verify_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"vertices": ["a"], "edges": [], "cartan": {},
                                "elastic": {"x": "a", "left": [], "right": []}, "roots": {"r": [2]}}))
    code, out, _ = run(capsys, "verify", "--tags", "validate", "--fixtures", str(path))
    assert code == CHECK_FAILED and "FAIL" in out


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "rootstretch.cli", "shards", "count", "A_5"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and proc.stdout.strip() == "16"


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["shards"])
    assert exc.value.code == 2
