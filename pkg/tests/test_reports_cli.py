import json
import math

import jsonschema
import numpy as np
import pytest

from kmsgibbs.algebra import AlgebraElement, random_element
from kmsgibbs.cli import main
from kmsgibbs.cocycle import RewritePiece
from kmsgibbs.errors import NotationError
from kmsgibbs.potential import FiniteRangePotential
from kmsgibbs.reports import (atomic_write, dumps, element_from_json, element_to_json, load_element,
                              report_schema, to_csv, validate_report)
from kmsgibbs.symbolic import EMPTY, Window


@pytest.fixture
def zero_file(tmp_path):
    path = tmp_path / "zero.json"
    FiniteRangePotential.zero(2, 2).save(path)
    return str(path)


@pytest.fixture
def random_file(tmp_path):
    path = tmp_path / "rand.json"
    FiniteRangePotential.random(2, 2, np.random.default_rng(3)).save(path)
    return str(path)


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dumps_precision():
    text = dumps({"a": 0.1, "b": 1.0, "c": 2, "d": [math.nan], "e": np.float64(1 / 3)})
    data = json.loads(text)
    assert '"a": 0.10000000000000001' in text
    assert '"b": 1.0' in text and data["c"] == 2 and data["d"] == [None]
    assert data["e"] == 1 / 3


def test_atomic_write(tmp_path):
    path = tmp_path / "out.json"
    atomic_write(path, "one")
    atomic_write(path, "two")
    assert path.read_text() == "two"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_element_roundtrip(tmp_path, rng):
    A = random_element(rng, 3, n_pieces=4)
    A = AlgebraElement(A.pieces + (RewritePiece(EMPTY, (), (), 0.5j),), 3)
    path = tmp_path / "a.json"
    path.write_text(dumps(element_to_json(A)))
    assert load_element(path, 3) == A


@pytest.mark.parametrize("data", [
    {"window": [1, 1]},
    [{"window": [0, 1], "source": "11", "target": "11", "re": 1, "im": 0}],
    [{"window": [1, 2], "source": "1", "target": "11", "re": 1, "im": 0}],
    [{"window": [1, 1], "source": "3", "target": "1", "re": 1, "im": 0}],
    [{"window": [1, 1], "source": "1", "target": "1", "re": "x", "im": 0}],
    [{"window": [1, 1], "source": "1", "target": "1", "re": 1}],
])
def test_element_rejects(data):
    with pytest.raises(NotationError):
        element_from_json(data, 2)


def test_element_window_uses_slots():
    A = element_from_json([{"window": [-1, 1], "source": "12", "target": "21", "re": 1, "im": 0}], 2)
    assert A.pieces[0].window == Window(-1, 0)


def test_schema_contents():
    schema = report_schema()
    checks = schema["properties"]["checks"]["properties"]
    assert {"gibbs", "bowen", "kms"} <= set(checks)
    jsonschema.Draft202012Validator.check_schema(schema)


def test_validate_report():
    good = {"command": "verify gibbs", "ok": True, "checks": {"gibbs": {"residual": 0.0, "passed": True}}}
    validate_report(good)
    bad = {"command": "verify gibbs", "ok": True, "checks": {"gibbs": {"residual": -1.0, "passed": True}}}
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)
    with pytest.raises(jsonschema.ValidationError):
        validate_report({"command": "x", "ok": True, "checks": {"other": {"residual": 0, "passed": True}}})


def test_csv():
    rep = {"checks": {"gibbs": {"residual": 0.5, "passed": True,
                                "residuals": [{"id": "w1", "residual": 0.25}]}},
           "result": {"pressure": 0.1, "name": "x", "skip": [1]}}
    rows = to_csv(rep).splitlines()
    assert rows == ["section,id,value", "gibbs,w1,0.25", "gibbs,max,0.5",
                    "result,pressure,0.10000000000000001", "result,name,x"]


def test_cli_pressure(capsys, zero_file):
    code, out, _ = run(capsys, "pressure", "--potential", zero_file)
    assert code == 0
    assert json.loads(out)["result"]["pressure"] == pytest.approx(math.log(2), abs=1e-14)


def test_cli_measure(capsys, zero_file):
    code, out, _ = run(capsys, "measure", "--potential", zero_file, "--cylinder", "11|21")
    assert code == 0
    assert json.loads(out)["result"]["measure"] == pytest.approx(0.0625, abs=1e-16)


def test_cli_bad_input(capsys, zero_file, tmp_path):
    assert run(capsys, "measure", "--potential", zero_file, "--cylinder", "13|1")[0] == 2
    assert run(capsys, "measure", "--potential", zero_file)[0] == 2
    assert run(capsys, "pressure", "--potential", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", "gibbs", "--potential", zero_file, "--tol", "-1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"alphabet": 2}')
    assert run(capsys, "pressure", "--potential", str(bad))[0] == 2


def test_cli_caps(capsys, zero_file):
    assert run(capsys, "finite-volume", "--potential", zero_file, "--cylinder", "1|1", "--span", "30")[0] == 3
    assert run(capsys, "verify", "uniqueness", "--potential", zero_file, "--depth", "14")[0] == 3


@pytest.mark.parametrize("args", [
    ("verify", "gibbs"), ("verify", "invariance"), ("verify", "bar-ratio"), ("verify", "bowen"),
    ("verify", "kms", "--samples", "5"),
])
def test_cli_verify_passes(capsys, random_file, args):
    code, out, _ = run(capsys, *args, "--potential", random_file)
    report = json.loads(out)
    validate_report(report)
    assert code == 0 and report["ok"]


def test_cli_uniqueness_reports_deficiency(capsys, random_file):
    code, out, _ = run(capsys, "verify", "uniqueness", "--potential", random_file)
    report = json.loads(out)
    assert report["result"]["rank_deficiency"] >= 1
    assert code == (0 if report["result"]["rank_deficiency"] == 1 else 1)


def test_cli_residual_failure(capsys, random_file):
    code, out, _ = run(capsys, "verify", "gibbs", "--potential", random_file, "--tol", "1e-300")
    assert code == 1 and not json.loads(out)["ok"]


def test_cli_deterministic(capsys, random_file, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["verify", "kms", "--potential", random_file, "--samples", "4", "--seed", "7",
                     "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_cli_csv(capsys, random_file):
    code, out, _ = run(capsys, "verify", "gibbs", "--potential", random_file, "--format", "csv")
    assert code == 0
    assert out.startswith("section,id,value\n") and "gibbs,max," in out


def test_cli_cocycle_and_algebra(capsys, random_file, tmp_path):
    code, out, _ = run(capsys, "cocycle", "--potential", random_file, "--pair", "11|21,12|12",
                       "--left-ctx", "1", "--right-ctx", "2")
    res = json.loads(out)["result"]
    assert code == 0 and res["kappa"] == 2
    a = tmp_path / "a.json"
    a.write_text(json.dumps([{"window": [-1, 1], "source": "12", "target": "12", "re": 1.0, "im": 0.0}]))
    code, out, _ = run(capsys, "algebra", "eval", "--potential", random_file, "--element-a", str(a))
    assert code == 0 and 0 < json.loads(out)["result"]["state_re"] < 1
    code, out, _ = run(capsys, "algebra", "convolve", "--potential", random_file,
                       "--element-a", str(a), "--element-b", str(a))
    assert code == 0 and len(json.loads(out)["result"]["product"]) == 1


def test_cli_schema(capsys, tmp_path):
    code, out, _ = run(capsys, "schema")
    assert code == 0 and json.loads(out) == report_schema()
