import csv
import io
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cliffordft.cli import main, normalize_argv

GAUSS = ["--signature", "0,1", "--root", "e1", "--expr", "1=exp(-0.5*x1^2)", "--grid", "-10:10:512"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_argv_keeps_negative_values():
    assert normalize_argv(["transform", "--grid", "-10:10:8", "--a", "-1"]) == [
        "transform", "--grid=-10:10:8", "--a=-1"]
    assert normalize_argv(["--grid=-1:1:4"]) == ["--grid=-1:1:4"]


def test_transform_fast_and_direct(capsys, tmp_path):
    fast, direct = tmp_path / "g.json", tmp_path / "gd.json"
    code, out, _ = run(capsys, "transform", *GAUSS, "--method", "fast", "--out", str(fast))
    assert code == 0 and out == ""
    code, out, _ = run(capsys, "transform", *GAUSS, "--method", "direct", "--out", str(direct))
    assert code == 0 and out == ""
    a, b = json.loads(fast.read_text()), json.loads(direct.read_text())
    assert a["domain"] == "frequency" and a["root"] == "e1"
    da, db = np.array(a["data"]), np.array(b["data"])
    assert np.abs(da - db).max() <= 1e-9
    peak = int(np.argmax(np.abs(da[:, 0])))
    assert da[peak, 0] == pytest.approx(math.sqrt(2 * math.pi), abs=1e-6)
    lo, hi, n = a["grid"]["min"][0], a["grid"]["max"][0], a["grid"]["shape"][0]
    assert abs(lo + (peak + 0.5) * (hi - lo) / n) <= 1e-12


def test_transform_output_is_byte_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    svgs = [tmp_path / "a.svg", tmp_path / "b.svg"]
    for p, s in zip(paths, svgs):
        assert run(capsys, "transform", *GAUSS, "--out", str(p), "--plot", str(s))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert svgs[0].read_bytes() == svgs[1].read_bytes()


def test_transform_to_stdout_and_csv(capsys):
    code, out, _ = run(capsys, "transform", *GAUSS[:-1], "-8:8:8", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][0] == "x1" and len(rows) == 9


def test_svg_is_well_formed(capsys, tmp_path):
    svg = tmp_path / "plot.svg"
    run(capsys, "transform", *GAUSS[:-1], "-10:10:64,-10:10:64", "--signature", "2,0", "--root", "e1e2",
        "--expr", "1=exp(-0.5*(x1^2+x2^2))", "--plot", str(svg), "--out", str(tmp_path / "s.json"))
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg") and root.get("version") == "1.1"
    polylines = [el for el in root.iter() if el.tag.endswith("polyline")]
    assert len(polylines) >= 2


@pytest.mark.parametrize("argv,code", [
    (["transform", "--signature", "0,1", "--root", "e2", "--expr", "1=x1", "--grid", "-1:1:8"], 2),
    (["transform", "--signature", "0,1", "--root", "e1", "--expr", "1=exp(", "--grid", "-1:1:8"], 2),
    (["transform", "--signature", "0,1", "--root", "e1", "--expr", "e3=x1", "--grid", "-1:1:8"], 2),
    (["transform", "--signature", "x", "--root", "e1", "--expr", "1=x1", "--grid", "-1:1:8"], 2),
    (["transform", "--signature", "0,1", "--root", "e1", "--grid", "-1:1:8"], 2),
    (["transform", "--signature", "0,1", "--root", "e1", "--expr", "1=x1", "--grid", "-1:1:8", "--bogus"], 2),
    (["frobnicate"], 2),
    (["transform", "--signature", "1,0", "--root", "e1", "--expr", "1=x1", "--grid", "-1:1:8"], 3),
    (["transform", "--signature", "0,1", "--root", "e1", "--expr", "1=x1", "--grid", "1:-1:8"], 3),
    (["transform", "--signature", "0,1", "--root", "e1", "--expr", "1=1/x1", "--grid", "-1:1:3"], 3),
    (["transform", "--signature", "0,1", "--root", "e1", "--expr", "1=x1", "--grid", "-1:1:8",
      "--method", "fast", "--grid", "-1:1:6"], 3),
])
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert err


def test_syntax_error_reports_offset(capsys):
    _, _, err = run(capsys, "transform", "--signature", "0,1", "--root", "e1", "--expr", "1=exp(", "--grid", "-1:1:8")
    assert "offset 4" in err


def test_verify_heisenberg(capsys):
    code, out, err = run(capsys, "verify", "--check", "heisenberg", *GAUSS, "--a", "1", "--b", "1")
    assert code == 0
    rep = json.loads(out)
    assert rep["ratio"] == pytest.approx(1.0, abs=1e-6) and rep["pass"] is True
    assert "[PASS]" in err


def test_verify_hardy(capsys, tmp_path):
    out_path = tmp_path / "h.json"
    code, out, _ = run(capsys, "verify", "--check", "hardy", "--p", "0.5", "--q", "0.5", "--C", "1.01", *GAUSS,
                       "--out", str(out_path))
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["class"] == "critical"
    code, out, _ = run(capsys, "verify", "--check", "hardy", "--p", "0.1", "--q", "0.1", "--C", "2", *GAUSS)
    assert code == 0 and json.loads(out)["class"] == "subcritical"
    code, _, _ = run(capsys, "verify", "--check", "hardy", "--p", "0.5", "--q", "0.5", *GAUSS)
    assert code == 2


def test_verify_kernel_bound(capsys):
    code, out, _ = run(capsys, "verify", "--check", "kernel-bound", "--trials", "10000", "--seed", "7")
    assert code == 0
    rep = json.loads(out)
    assert rep["diagnostics"]["violations"] == 0 and rep["diagnostics"]["trials"] == 10000


def test_verify_kernel_bound_without_roots(capsys):
    assert run(capsys, "verify", "--check", "kernel-bound", "--signature", "1,0", "--trials", "10")[0] == 3


@pytest.mark.parametrize("check,extra", [
    ("heisenberg-full", []),
    ("parseval", []),
    ("inversion", []),
    ("derivative", ["--a", "1"]),
    ("linearity", ["--seed", "3"]),
    ("linearity", ["--expr2", "e1=x1*exp(-x1^2)", "--alpha", "e1", "--beta", "2"]),
    ("scaling", ["--a", "-2"]),
    ("split", ["--trials", "50"]),
])
def test_verify_checks_pass(capsys, check, extra):
    code, out, err = run(capsys, "verify", "--check", check, *GAUSS, *extra)
    assert code == 0, err
    assert json.loads(out)["pass"] is True


def test_verify_failure_exit_code(capsys):
    # a linear field is cut off at the box edge, so the derivative property fails
    code, out, err = run(capsys, "verify", "--check", "derivative", "--signature", "0,1", "--root", "e1",
                         "--expr", "1=x1", "--grid", "-1:1:8")
    assert code == 1 and json.loads(out)["pass"] is False
    assert err.count("warning:") == 1


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--check", "parseval", *GAUSS, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["name", "lhs", "rhs", "ratio", "tolerance", "pass"]


def test_verify_is_deterministic(capsys):
    runs = [run(capsys, "verify", "--check", "linearity", *GAUSS, "--seed", "5")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "other")[0] == 2
    assert run(capsys, "verify")[0] == 2


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--op", "cft-fast", "--sizes", "1024,4096")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["op", "size", "median_seconds", "nodes_per_second"]
    assert [int(r[1]) for r in rows[1:]] == [1024, 4096]
    assert all(float(r[2]) > 0 for r in rows[1:])
    code, out, _ = run(capsys, "bench", "--op", "product", "--sizes", "256")
    assert code == 0 and out.splitlines()[1].startswith("product,256,")
    assert run(capsys, "bench", "--op", "cft-fast", "--sizes", "1000")[0] == 3
    assert run(capsys, "bench", "--op", "cft-fast", "--sizes", "x")[0] == 2
    assert run(capsys, "bench", "--op", "product", "--sizes", "4", "--repeats", "3")[0] == 2


def test_algebra_subcommand(capsys):
    code, out, _ = run(capsys, "algebra", "--signature", "2,0", "--op", "product", "--lhs", "e1", "--rhs", "e2")
    assert code == 0 and json.loads(out) == {"p": 2, "q": 0, "coeffs": {"e1e2": 1.0}}
    code, out, _ = run(capsys, "algebra", "--signature", "1,1", "--op", "scalar", "--lhs", "e2", "--rhs", "e2")
    assert json.loads(out)["value"] == -1.0
    code, out, _ = run(capsys, "algebra", "--signature", "1,1", "--op", "star", "--lhs", "e2", "--rhs", "e2")
    assert json.loads(out)["value"] == 1.0
    code, out, _ = run(capsys, "algebra", "--signature", "2,0", "--op", "reverse", "--lhs", "e1e2")
    assert json.loads(out)["coeffs"] == {"e1e2": -1.0}
    code, out, _ = run(capsys, "algebra", "--signature", "2,0", "--op", "grade", "--grade", "1",
                       "--lhs", '{"p":2,"q":0,"coeffs":{"1":3,"e1":4,"e1e2":5}}')
    assert json.loads(out)["coeffs"] == {"e1": 4.0}
    code, out, _ = run(capsys, "algebra", "--signature", "2,0", "--op", "table")
    assert out.splitlines()[3] == "e2,e2,-e1e2,1,-e1"
    assert out.splitlines()[4] == "e1e2,e1e2,-e2,e1,-1"
    assert run(capsys, "algebra", "--signature", "2,0", "--op", "product", "--lhs", "e1")[0] == 2


def test_roots_subcommand(capsys):
    code, out, _ = run(capsys, "roots", "--signature", "2,0")
    assert code == 0 and json.loads(out)["blade_roots"] == ["e1e2"]
    code, out, _ = run(capsys, "roots", "--signature", "0,2", "--validate", "e1e2")
    assert code == 0 and json.loads(out)["valid"] is True
    assert run(capsys, "roots", "--signature", "2,0", "--validate", "e1")[0] == 3
    code, out, _ = run(capsys, "roots", "--signature", "0,2", "--random", "2", "--seed", "1")
    assert len(json.loads(out)["random_roots"]) == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cliffordft", "roots", "--signature", "0,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["blade_roots"] == ["e1"]


def test_suite_runs_full_battery(capsys, tmp_path):
    out_path = tmp_path / "suite.json"
    code, out, err = run(capsys, "verify", "--suite", "paper", "--out", str(out_path))
    assert code == 0 and out == ""
    report = json.loads(out_path.read_text())
    assert report["pass"] is True
    assert [c["criterion"] for c in report["criteria"]] == list(range(1, 12))
    assert err.count("[PASS] criterion") == 11
