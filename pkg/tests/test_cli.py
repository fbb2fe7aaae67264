import io
import json
import subprocess
import sys

import pytest

from quathyp.cli import EXIT_BORDERLINE, EXIT_MEMBERSHIP, EXIT_PARSE, main

IDENTITY = {"field": "H", "model": "ball", "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}
SIEGEL_DIAG = {"model": "siegel", "matrix": [[2, 0, 0], [0, "1/2", 0], [0, 0, 1]]}


def run(argv, stdin=None, monkeypatch=None, capsys=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cli(monkeypatch, capsys):
    def _run(argv, stdin=None):
        return run(argv, stdin, monkeypatch, capsys)
    return _run


def lines(out):
    return [json.loads(s) for s in out.splitlines() if s.strip()]


def test_classify_identity(cli):
    code, out, _ = cli(["classify"], json.dumps(IDENTITY))
    rep = lines(out)[0]
    assert code == 0
    assert rep["classification"]["type"] == "simple elliptic (identity)"
    inv = rep["classification"]["invariants"]
    assert (inv["a"], inv["b"], inv["c"]) == (6.0, 15.0, 20.0)
    assert rep["zclass"]["case_id"] == "scalar/real"


def test_classify_siegel_diag_exact(cli):
    code, out, _ = cli(["--exact", "classify", "--oracle", "--literal"], json.dumps(SIEGEL_DIAG))
    rep = lines(out)[0]
    assert code == 0
    assert rep["classification"]["type"] == "strictly hyperbolic"
    inv = rep["classification"]["invariants"]
    assert inv["Delta"] == 0 and inv["G"] == "1/4"
    assert rep["oracle"]["agrees"] is True
    assert rep["literal"]["item"] == "2"


def test_flags_before_and_after_subcommand(cli):
    doc = json.dumps({"matrix": SIEGEL_DIAG["matrix"]})
    _, a, _ = cli(["--model", "siegel", "invariants"], doc)
    _, b, _ = cli(["invariants", "--model", "siegel"], doc)
    assert a == b and lines(a)[0]["invariants"]["G"] == pytest.approx(0.25)


def test_non_member_exit(cli):
    code, out, err = cli(["classify"], json.dumps({"matrix": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}))
    assert code == EXIT_MEMBERSHIP and "residual" in err and out == ""


def test_check_membership(cli):
    code, out, _ = cli(["check-membership", "--exact", "--model", "siegel"],
                       json.dumps({"matrix": [[2, 0, 0], [0, "1/2", 0], [0, 0, -1]]}))
    assert code == 0 and lines(out)[0]["member"] is True
    code, out, _ = cli(["check-membership", "--exact"],
                       json.dumps({"matrix": [[2, 0, 0], [0, "1/2", 0], [0, 0, -1]]}))
    assert code == EXIT_MEMBERSHIP and lines(out)[0]["residual"] == "3"


@pytest.mark.parametrize("payload", ["not json", json.dumps({"nomatrix": 1}),
                                     json.dumps({"matrix": [[1, 0], [0, 1]]}),
                                     json.dumps({"field": "C", "matrix": [["j", 0, 0], [0, 1, 0], [0, 0, 1]]})])
def test_parse_errors(cli, payload):
    code, _, err = cli(["classify"], payload)
    assert code == EXIT_PARSE and err.startswith("error:")


def test_unknown_tolerance(cli):
    code, _, _ = cli(["--tol", "bogus=1", "classify"], json.dumps(IDENTITY))
    assert code == EXIT_PARSE


def test_tolerance_reported(cli):
    _, out, _ = cli(["--tol", "sign=1e-12", "invariants"], json.dumps(IDENTITY))
    assert lines(out)[0]["invariants"]["tolerances"]["sign"] == 1e-12


def test_borderline_exit(cli):
    from quathyp import qmatrix as qm
    from quathyp.normal_forms import make_elliptic
    doc = json.dumps({"matrix": qm.to_json(make_elliptic(0.3, 1.0, 1.0 + 1e-4).matrix)})
    code, out, err = cli(["classify"], doc)
    assert code == EXIT_BORDERLINE and lines(out)[0]["classification"]["borderline"]
    code, _, _ = cli(["classify", "--allow-borderline"], doc)
    assert code == 0


def test_batch_documents(cli):
    payload = json.dumps(IDENTITY) + "\n" + json.dumps(SIEGEL_DIAG) + "\n"
    code, out, _ = cli(["zclass"], payload)
    reps = lines(out)
    assert code == 0 and len(reps) == 2
    assert reps[1]["zclass"]["case_id"] == "beta-positive/theta-real"
    code, out2, _ = cli(["zclass"], json.dumps([IDENTITY, SIEGEL_DIAG]))
    assert out2 == out


def test_normal_form_command(cli):
    doc = {"model": "siegel", "matrix": [[2, 0, 0], [0, 0.5, 0], [0, 0, "i"]]}
    code, out, _ = cli(["normal-form"], json.dumps(doc))
    rep = lines(out)[0]
    assert code == 0 and rep["normal_form"]["kind"] == "hyperbolic"
    assert rep["residual"] <= 1e-12
    assert rep["normal_form"]["params"]["theta"] == pytest.approx(1.5707963267948966)


def test_zclasses(cli):
    for field, n in (("H", 27), ("C", 11)):
        code, out, _ = cli(["zclasses", "--field", field])
        assert code == 0 and len(json.loads(out)) == n


def test_sample_deterministic_and_roundtrips(cli):
    code, a, _ = cli(["sample", "regular-elliptic", "--count", "3", "--seed", "1"])
    _, b, _ = cli(["sample", "regular-elliptic", "--count", "3", "--seed", "1"])
    assert code == 0 and a == b
    docs = lines(a)
    assert len(docs) == 3
    code, out, _ = cli(["classify"], a)
    assert code == 0
    assert all(r["classification"]["dtype"] == "regular-elliptic" for r in lines(out))


def test_sample_vertical_heisenberg_invariants(cli):
    _, doc, _ = cli(["sample", "vertical-heisenberg-translation", "--seed", "4"])
    _, out, _ = cli(["invariants"], doc)
    inv = lines(out)[0]["invariants"]
    assert (inv["a"], inv["b"], inv["c"]) == pytest.approx((6, 15, 20), abs=1e-9)
    assert inv["min_degree"] == 2


def test_sample_unknown_type(cli):
    code, _, err = cli(["sample", "wobbly"])
    assert code == EXIT_PARSE and "error" in err


def test_reports_byte_identical(cli):
    _, a, _ = cli(["classify", "--oracle"], json.dumps(SIEGEL_DIAG))
    _, b, _ = cli(["classify", "--oracle"], json.dumps(SIEGEL_DIAG))
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "quathyp.cli", "classify"], input=json.dumps(IDENTITY),
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["classification"]["identity"] is True
