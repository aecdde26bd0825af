import json
import shutil
import subprocess
import sys

import jsonschema
import pytest

from conftest import ROOT, SCENARIOS
from nctorus import schemas
from nctorus.cli import main, run

SCENARIO_COMMANDS = {
    "diagonal_orbifold": ("orbifold-range", 0),
    "flip_orbifold_n3": ("orbifold-range", 0),
    "generic_torus_n2": ("trace-range", 0),
    "gl2_sqrt2": ("gl2-orbit", 0),
    "morita_sqrt2": ("morita-lambda", 0),
    "odd_pfaffian": ("pfaffian", 1),
    "find_t_negative": ("find-t", 2),
    "two_dim_flip": ("verify-module", 0),
    "three_dim_flip": ("verify-module", 0),
    "two_dim_fourier": ("verify-module", 0),
}


def invoke(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write(tmp_path, doc, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_trace_range_symbolic():
    rep = run("trace-range", {"theta": {"n": 2, "generic": True}})
    assert rep["status"] == "ok"
    assert rep["payload"]["labels"] == ["1", "t1_2"]
    assert rep["payload"]["generators"] == ["1", "t1_2"]


def test_orbifold_flip_three():
    rep = run("orbifold-range", {"theta": {"n": 3, "generic": True}, "W": [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]})
    assert rep["status"] == "ok"
    assert rep["payload"]["decided"] is True
    assert rep["payload"]["lower"]["denominator"] == 2


def test_odd_pfaffian_error(tmp_path, capsys):
    code, out = invoke(capsys, "pfaffian", "--input", str(SCENARIOS / "odd_pfaffian.json"))
    rep = json.loads(out)
    assert code == 1 and rep["status"] == "error" and rep["error"]["code"] == "ODD_DIMENSION"


@pytest.mark.parametrize("name", sorted(SCENARIO_COMMANDS))
def test_scenarios(name, capsys):
    command, expected = SCENARIO_COMMANDS[name]
    code, out = invoke(capsys, command, "--input", str(SCENARIOS / f"{name}.json"))
    rep = json.loads(out)
    jsonschema.validate(rep, schemas.REPORT_SCHEMA)
    assert code == expected, rep


def test_byte_stable(tmp_path, capsys):
    path = str(SCENARIOS / "diagonal_orbifold.json")
    _, first = invoke(capsys, "orbifold-range", "--input", path)
    _, second = invoke(capsys, "orbifold-range", "--input", path)
    assert first == second
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    main(["minors", "--input", str(SCENARIOS / "generic_torus_n2.json"), "--output", str(out_a)])
    main(["minors", "--input", str(SCENARIOS / "generic_torus_n2.json"), "--output", str(out_b)])
    assert out_a.read_bytes() == out_b.read_bytes()


def test_timing_is_opt_in(capsys):
    path = str(SCENARIOS / "generic_torus_n2.json")
    _, plain = invoke(capsys, "trace-range", "--input", path)
    _, timed = invoke(capsys, "trace-range", "--input", path, "--timing")
    assert "timing" not in json.loads(plain)
    assert json.loads(timed)["timing"]["seconds"] >= 0


def test_unknown_surfaces_bound(capsys):
    code, out = invoke(capsys, "find-t", "--input", str(SCENARIOS / "find_t_negative.json"))
    rep = json.loads(out)
    assert code == 2 and rep["status"] == "unknown"
    assert rep["payload"]["bound"] == {"t_max": 5}
    # the flag overrides the input
    code, out = invoke(capsys, "find-t", "--input", str(SCENARIOS / "find_t_negative.json"), "--t-max", "20")
    rep = json.loads(out)
    assert code == 0 and rep["payload"]["t"] == 11 and rep["payload"]["verified"] is True
    assert rep["flags"]["t_max"] == 20


def test_morita_unknown_bound(tmp_path, capsys):
    doc = {"field": {"minpoly": [-2, 0, 1], "interval": [1, 2]},
           "R1": [{"coeffs": ["3/5", "1/5"]}, {"coeffs": [2, 3]}],
           "R2": [1, {"coeffs": [0, 5]}]}
    rep = run("morita-lambda", doc, {"coeff_bound": 1})
    assert rep["status"] == "unknown" and rep["payload"]["bound"] == {"coeff_bound": 1}
    rep = run("morita-lambda", doc)
    assert rep["status"] == "ok" and rep["payload"]["result"] == "found"
    code, out = invoke(capsys, "morita-lambda", "--input", write(tmp_path, doc), "--coeff-bound", "1",
                       "--format", "text")
    assert code == 2 and "exhausted bound: coeff_bound=1" in out


def test_freeness_unknown_for_infinite_order():
    rep = run("freeness", {"W": [[1, 1], [0, 1]]})
    assert rep["status"] == "unknown" and rep["payload"]["bound"] == {"max_order": 24}


def test_text_admitted_line(capsys):
    code, out = invoke(capsys, "orbifold-range", "--input", str(SCENARIOS / "diagonal_orbifold.json"),
                       "--format", "text")
    assert code == 0
    assert "admitted: 1,2 / 3,4 / 1,2,3,4" in out.splitlines()


def test_schema_errors(tmp_path, capsys):
    rep = run("pfaffian", {"theta": {"n": "two"}})
    assert rep["status"] == "error" and rep["error"]["code"] == "SCHEMA_ERROR"
    rep = run("order", {})
    assert rep["error"]["code"] == "SCHEMA_ERROR"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = invoke(capsys, "pfaffian", "--input", str(bad))
    assert code == 1 and json.loads(out)["error"]["code"] == "PARSE_ERROR"


def test_domain_errors():
    rep = run("check-symplectic", {"W": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "theta": {"n": 2, "generic": True}})
    assert rep["error"]["code"] == "DIMENSION_MISMATCH"
    rep = run("gl2-orbit", {"theta1": {"coeffs": [-1, 1], "field": {"minpoly": [-2, 0, 1], "interval": [1, 2]}},
                            "theta2": {"coeffs": [-1, 1], "field": {"minpoly": [-3, 0, 1], "interval": [1, 2]}}})
    assert rep["error"]["code"] == "MIXED_KINDS"


def test_simple_commands():
    assert run("pfaffian", {"theta": {"n": 4, "generic": True}})["payload"]["text"] == \
        "t1_2*t3_4 - t1_3*t2_4 + t1_4*t2_3"
    assert run("minors", {"theta": {"n": 4, "generic": True}})["payload"]["count"] == 7
    assert run("order", {"W": [[0, -1], [1, 1]]})["payload"]["order"] == 6
    assert run("freeness", {"W": [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]})["payload"]["free"] is False
    rep = run("extension-check", {"W": [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], "I": [1, 3]})
    assert rep["payload"]["all_hold"] is False
    rep = run("gl2-orbit", {"field": {"minpoly": [-2, 0, 1], "interval": [1, 2]},
                            "theta1": {"coeffs": [-1, 1]}, "theta2": {"coeffs": [6, 1]}})
    assert rep["payload"]["equal"] is True


def test_verify_module_tolerance_exceeded(tmp_path):
    doc = json.loads((SCENARIOS / "two_dim_fourier.json").read_text())
    doc["tests"] = ["fourier_fixed_point"]
    doc["grid"]["h"] = 0.5
    rep = run("verify-module", doc)
    assert rep["status"] == "error" and rep["error"]["code"] == "TOLERANCE_EXCEEDED"


def test_docs_schemas_in_sync():
    shipped = ROOT / "docs" / "schemas"
    for name, schema in schemas.all_schemas().items():
        assert json.loads((shipped / name).read_text()) == schema, name
        jsonschema.Draft202012Validator.check_schema(schema)


@pytest.mark.skipif(shutil.which("nctorus") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["nctorus", "gl2-orbit", "--input", str(SCENARIOS / "gl2_sqrt2.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["payload"]["equal"] is True


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nctorus.cli", "order", "--input", "-"],
                          input='{"W": [[0, -1], [1, 0]]}', capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["payload"]["order"] == 4
