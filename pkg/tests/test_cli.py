import json
import math
import subprocess
import sys


def run(*args, **kw):
    return subprocess.run([sys.executable, "-m", "qig.cli", *args],
                          capture_output=True, text=True, **kw)


def test_metric_pinned_output():
    r = run("metric", "--spec", "bh", "--r", "0.5",
            "--theta", str(math.pi / 4), "--phi", "0")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert abs(data["matrix"][0][0] - 4.0 / 3.0) < 1e-12
    assert abs(data["matrix"][1][1] - 0.25) < 1e-12


def test_field_pinned_output():
    r = run("field", "--spec", "bh", "--field", "y:0,0,1",
            "--r", "0.5", "--theta", str(math.pi / 4), "--phi", "0")
    data = json.loads(r.stdout)
    assert abs(data["components"][0] - 0.75 / math.sqrt(2.0)) < 1e-10
    assert abs(data["components"][1] + math.sqrt(2.0)) < 1e-10


def test_ode_poles_pinned():
    r = run("ode", "poles", "--B", "1", "--c", "0", "-n", "2")
    data = json.loads(r.stdout)
    assert abs(data["t_values"][0] - 0.20787957635076193) < 1e-12
    assert abs(data["t_values"][1] - 0.008983291021129429) < 1e-12


def test_ode_solve_negative_excluded():
    r = run("ode", "solve", "--A", "-2")
    data = json.loads(r.stdout)
    assert data["excluded"] is True and data["B"] == 0.5


def test_act_alpha_one():
    s2 = math.sqrt(2.0)
    g = {"sl_matrix": [[s2, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0 / s2, 0.0]]}
    r = run("act", "--family", "bh", "--g-json", json.dumps(g),
            "--state-json", '{"bloch":[0,0,0]}')
    data = json.loads(r.stdout)
    assert abs(data["bloch"][2] - 0.6) < 1e-12


def test_input_error_exit_code():
    r = run("metric", "--r", "1.5")
    assert r.returncode == 2
    assert json.loads(r.stdout)["error"] == "ChartSingularity"


def test_numeric_error_exit_code():
    r = run("metric", "--spec", "fb", "--B", "1", "--r", "0.6557942026326724")
    assert r.returncode == 3
    assert json.loads(r.stdout)["error"] == "PoleError"


def test_verify_single_suite():
    r = run("verify", "poles")
    assert r.returncode == 0
    assert json.loads(r.stdout)["passed"] is True


def test_verify_rld_commutators_is_negative_control():
    r = run("verify", "commutators", "--spec", "rld")
    assert r.returncode == 1
    data = json.loads(r.stdout)
    assert data["suites"]["commutators"]["constant_coefficient"] is False


def test_strict_tolerance_fails(tmp_path):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("tolerance = 1e-15\nseed = 0\n")
    r = run("verify", "generators", "--config", str(cfg))
    assert r.returncode == 1


def test_flag_overrides_config(tmp_path):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("tolerance = 1e-15\n")
    r = run("verify", "generators", "--config", str(cfg),
            "--tolerance", "1e-4")
    assert r.returncode == 0


def test_export_f_curves_header():
    r = run("export", "--what", "f-curves", "--steps", "10")
    lines = r.stdout.strip().split("\n")
    assert lines[0] == "t,f_A0.25,f_A1,f_A4"
    assert len(lines) == 11
    last = [float(v) for v in lines[-1].split(",")]
    assert last[0] == 1.0 and all(abs(v - 1.0) < 1e-12 for v in last[1:])


def test_export_overlay_small_gap():
    r = run("export", "--what", "overlay", "--A", "2",
            "--steps", "50", "--t-end", "0.5")
    lines = r.stdout.strip().split("\n")
    assert lines[0].endswith(",gap")
    assert max(float(l.split(",")[-1]) for l in lines[1:]) < 1e-7


def test_output_file(tmp_path):
    out = tmp_path / "m.json"
    r = run("metric", "--spec", "wy", "--r", "0.4", "--output", str(out))
    assert r.returncode == 0 and r.stdout == ""
    assert json.loads(out.read_text())["chart"] == "spherical"
