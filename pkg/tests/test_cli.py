import json
from pathlib import Path

import pytest

from skeintrace.cli import main

DATA = Path(__file__).resolve().parent.parent / "scripts" / "data"


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fig8(capsys):
    code, out, _ = run(capsys, "fig8")
    assert code == 0
    assert "total: -A*[Y.z''^-1*Z.z''^-1] + A*[Y.z''^-1*Z.z''] + A*[Y.z''*Z.z''^-1]" in out
    assert "FAIL" not in out


def test_trace3d_from_files(capsys):
    code, out, _ = run(capsys, "trace3d", "--mfld", str(DATA / "figure8.json"),
                       "--presentation", str(DATA / "figure8_kb.json"))
    assert code == 0
    assert out.strip() == "-A*[Y.z''^-1*Z.z''^-1] + A*[Y.z''^-1*Z.z''] + A*[Y.z''*Z.z''^-1]"


def test_trace3d_symbolic_constants(capsys):
    code, out, _ = run(capsys, "trace3d", "--ct", "Ct", "--cb", "Cb")
    assert code == 0
    assert "Cb^-2" in out


def test_trace2d_and_uvir2d(capsys):
    args = ["--surface", str(DATA / "flip_quad.json"), "--presentation", str(DATA / "quad_arc.json")]
    code, out, _ = run(capsys, "trace2d", *args)
    assert code == 0 and out.strip() == "[y*x^-1*v] + [y*x*v]"
    code, out, _ = run(capsys, "uvir2d", *args)
    assert code == 0 and "5 passed, 0 failed" in out


def test_uvir3d_with_angles(capsys):
    code, out, _ = run(capsys, "uvir3d", "--angles", str(DATA / "figure8_angles.json"))
    assert code == 0
    assert "recovered trace" in out


@pytest.mark.parametrize("cmd", ["flip-check", "pachner-check", "cone-check"])
def test_checks_pass(capsys, cmd):
    code, out, _ = run(capsys, cmd)
    assert code == 0
    assert "FAIL" not in out


def test_out_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "cone-check", "--out", str(path))
    rep = json.loads(path.read_text())
    assert code == 0 and rep["ok"] and len(rep["checks"]) == 5


def test_verify_all_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify-all")
    code2, out2, _ = run(capsys, "verify-all", "--jobs", "2")
    assert code1 == code2 == 0
    assert out1 == out2


def test_missing_file(capsys):
    code, _, err = run(capsys, "trace3d", "--mfld", "no/such/file.json")
    assert code == 2 and "error" in err


def test_missing_input(capsys):
    code, _, err = run(capsys, "trace2d")
    assert code == 2 and "--surface" in err


def test_bad_scalar(capsys):
    code, _, err = run(capsys, "fig8", "--ct", "q^^")
    assert code == 2 and "ParseError" in err


def test_bad_presentation(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"suspensions": [{"face": "Q"}]}))
    code, _, err = run(capsys, "trace3d", "--presentation", str(path))
    assert code == 2 and "InvalidPresentation" in err


def test_bad_json(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text("{")
    code, _, _ = run(capsys, "trace3d", "--presentation", str(path))
    assert code == 2


def test_scaling_violation_is_a_failure(capsys):
    code, _, err = run(capsys, "trace3d", "--ct", "1", "--cb", "1")
    assert code == 1 and "ConstraintViolation" in err


def test_flux_mismatch_is_a_failure(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"tokens": [
        {"triangle": "T1", "gen": "beta", "orient": "fwd", "states": ["e", 1]},
        {"triangle": "T2", "gen": "gamma", "orient": "fwd", "states": ["e", 1]}]}))
    code, _, err = run(capsys, "uvir2d", "--surface", str(DATA / "flip_quad.json"), "--presentation", str(path))
    assert code == 1 and "DegreeMismatch" in err
