import io
import json
import subprocess
import sys


from qriemann.cli import main, run


def call(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_normal_form():
    assert call("normal-form", "--space", "sq2", "zb*z") == (0, "rho - 1\n")


def test_normal_form_json_and_several_inputs():
    code, text = call("normal-form", "--json", "z*zb", "zb*z")
    assert code == 0
    assert json.loads(text) == [
        {"input": "z*zb", "normal_form": "q^-2*rho - 1"},
        {"input": "zb*z", "normal_form": "rho - 1"},
    ]


def test_parse_error_exit_code(capsys):
    code = main(["normal-form", "z**"])
    assert code == 2
    err = capsys.readouterr().err
    assert "position 2" in err and "^" in err


def test_usage_error_exit_code(capsys):
    assert run(["geometry", "--space", "sq2", "--bogus"]) == 2
    assert main(["geometry", "--space", "s7"]) == 2
    assert main(["geometry", "--space", "z2"]) == 2


def test_geometry_json():
    code, text = call("geometry", "--space", "sq2", "--variant", "complex")
    assert code == 0
    assert '"scalar_curvature": "c*q^2*(1+q^2)"' in text


def test_geometry_text_riemannian():
    code, text = call("geometry", "--space", "sq2", "--variant", "riemannian", "--text")
    assert code == 0
    assert "scalar_curvature: c*(1+3*q^2+3*q^4+q^6)/4" in text


def test_distance():
    code, text = call("distance", "--space", "sq2", "--q", "0.999", "--c", "4", "--m", "100000", "--n", "0", "--terms", "50000")
    assert code == 0
    d = json.loads(text)
    assert set(d) == {"m", "n", "q", "c", "distance", "terms", "tail_bound"}
    assert 1.5 < d["distance"] < 1.6


def test_distance_tolerance_failure():
    code, _ = call("distance", "--q", "0.999", "--c", "4", "--m", "inf", "--terms", "10", "--tol", "1e-9")
    assert code == 1


def test_distance_rejects_other_spaces():
    assert call("distance", "--space", "cp2", "--q", "0.5")[0] == 2


def test_export_round_trip(tmp_path):
    code, text = call("export-space", "--space", "sq2", "--variant", "riemannian")
    assert code == 0
    path = tmp_path / "s.json"
    path.write_text(text)
    assert call("export-space", "--space-file", str(path)) == (0, text)
    code, geo = call("geometry", "--space-file", str(path), "--text")
    assert "scalar_curvature: c*(1+3*q^2+3*q^4+q^6)/4" in geo


def test_missing_space_file():
    assert call("export-space", "--space-file", "/nonexistent/x.json")[0] == 2


def test_verify_suites():
    code, text = call("verify", "braided", "z2")
    assert code == 0
    report = json.loads(text)
    assert report["braided"]["z*z''-z''*z"] == {"residual": 0.0, "threshold": 0.0, "pass": True}


def test_verify_failure_exit_code():
    # the starstar sub-check on 0- and 2-forms does not hold for the sphere table
    assert call("verify", "hodge")[0] == 1


def test_verify_unknown_suite():
    assert call("verify", "nope")[0] == 2


def test_repr_check():
    code, text = call("repr-check", "--q", "0.5", "--c", "1")
    report = json.loads(text)
    assert code == 0
    assert all(v["pass"] for v in report.values())
    assert call("repr-check", "--q", "1.5")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qriemann", "normal-form", "zb*z"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "rho - 1\n"
