import json
import subprocess
import sys

import pytest

from derivlab.cli import (
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_REFUTED,
    SCHEMA,
    InputError,
    dumps,
    main,
    run_task,
)

INTRO = {
    "schema": SCHEMA,
    "ring": {"coefficients": "Q", "variables": ["x", "y", "z"]},
    "derivations": {"D": {"y": "x", "z": "y"}, "E": {"x": "y", "y": "-z"}},
    "set": ["D", "E"],
    "element": "x",
}


def task(**changes):
    spec = json.loads(json.dumps(INTRO))
    spec.update(changes)
    return spec


def run(tmp_path, capsys, spec, *extra):
    path = tmp_path / "task.json"
    path.write_text(json.dumps(spec))
    code = main(["check", "--input", str(path), *extra])
    out = capsys.readouterr()
    return code, out


def test_deg_certified(tmp_path, capsys):
    code, out = run(tmp_path, capsys, task(task="deg", set=["D"], element="z^2"))
    assert code == EXIT_OK
    report = json.loads(out.out)
    assert report["result"]["degree"] == 4
    assert report["bounds"] == {"depth_bound": 16, "dim_bound": 64}
    assert "degree 4" in out.err


def test_nil_membership_refuted_with_schedule(tmp_path, capsys):
    spec = task(task="nil-membership", schedule={"preperiod": [], "period": ["E", "D"]})
    code, out = run(tmp_path, capsys, spec)
    assert code == EXIT_REFUTED
    result = json.loads(out.out)["result"]
    assert result["periodic"]["period"] == [1, 0]


def test_inconclusive_exit(tmp_path, capsys):
    spec = task(task="deg", ring={"variables": ["x"]}, derivations={"D": {"x": "x"}}, set=["D"],
                depth_bound=3)
    code, _ = run(tmp_path, capsys, spec)
    assert code == EXIT_INCONCLUSIVE


def test_operator_task(tmp_path, capsys):
    spec = {"task": "set-lnd", "operators": {"N": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]}, "set": ["N"]}
    code, out = run(tmp_path, capsys, spec)
    assert code == EXIT_OK and json.loads(out.out)["result"]["degree"] == 2


def test_lie_and_fg_tasks(tmp_path, capsys):
    spec = task(task="fg-nilpotency", derivations={"A": {"x": "1"}, "B": {"y": "x"}}, set=["A", "B"])
    code, out = run(tmp_path, capsys, spec)
    assert code == EXIT_OK and json.loads(out.out)["result"]["dim"] == 3
    spec = task(task="ad-index", ring={"variables": ["X1", "X2"]},
                derivations={"D": {"X1": "1"}, "E": {"X2": "X1^3"}}, D="D", E="E")
    code, out = run(tmp_path, capsys, spec)
    assert code == EXIT_OK and json.loads(out.out)["result"]["degree"] == 4
    code, out = run(tmp_path, capsys, task(task="lie-unil", set=["D"]))
    assert code == EXIT_OK


@pytest.mark.parametrize("changes,field", [
    ({"task": "deg", "element": "x +"}, "element"),
    ({"task": "deg", "element": "w"}, "element"),
    ({"task": "deg", "set": ["Q"]}, "set"),
    ({"task": "bogus"}, "task"),
    ({"task": "deg", "depth_bound": 0}, "depth_bound"),
    ({"task": "deg", "schema": "other/2"}, "schema"),
    ({"task": "reproduce", "example": "no-such"}, "example"),
    ({"task": "reproduce", "example": "ex-ckj029", "params": {"seed": 1}}, "params"),
])
def test_input_errors_name_the_field(tmp_path, capsys, changes, field):
    code, out = run(tmp_path, capsys, task(**changes))
    assert code == EXIT_INPUT
    assert out.err.startswith(f"error: {field}")
    assert out.out == ""


def test_parse_error_position(tmp_path, capsys):
    code, out = run(tmp_path, capsys, task(task="deg", element="x +"))
    assert "position 3" in out.err


def test_unreadable_input(tmp_path, capsys):
    assert main(["check", "--input", str(tmp_path / "missing.json")]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["check", "--input", str(bad)]) == EXIT_INPUT


def test_out_file_written(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out = run(tmp_path, capsys, task(task="deg", set=["D"]), "--out", str(out_path))
    assert code == EXIT_OK
    assert json.loads(out_path.read_text())["result"]["degree"] == 0
    assert out.out.startswith("deg: certified")


def test_reproduce_and_classify(tmp_path, capsys):
    assert main(["reproduce", "ex-298", "--n", "2"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert all(c["status"] == "pass" for c in report["result"]["claims"])
    assert main(["reproduce", "no-such"]) == EXIT_INPUT
    capsys.readouterr()
    alg = tmp_path / "alg.json"
    alg.write_text(json.dumps({"kind": "lie", "basis": ["a", "b"],
                               "table": [{"i": 0, "j": 1, "k": 1, "c": "1"}, {"i": 1, "j": 0, "k": 1, "c": "-1"}]}))
    assert main(["classify", "--algebra", str(alg)]) == EXIT_REFUTED
    alg.write_text(json.dumps({"kind": "lie", "basis": ["a"], "table": [{"i": 0, "j": 0, "k": 0, "c": "1"}]}))
    assert main(["classify", "--algebra", str(alg)]) == EXIT_INPUT


def test_classify_generators_validated():
    spec = {"task": "classify", "algebra": {"kind": "associative", "basis": ["a"], "table": []},
            "generators": [[1, 2]]}
    with pytest.raises(InputError) as info:
        run_task(spec)
    assert info.value.field == "generators"


def test_reports_are_byte_identical():
    a = dumps(run_task(task(task="nil-membership"))[0])
    b = dumps(run_task(task(task="nil-membership"))[0])
    assert a == b


def test_module_entry_point(tmp_path):
    path = tmp_path / "task.json"
    path.write_text(json.dumps(task(task="deg", set=["D"], element="z")))
    proc = subprocess.run([sys.executable, "-m", "derivlab", "check", "--input", str(path)],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["result"]["witness"] == [0, 0]
