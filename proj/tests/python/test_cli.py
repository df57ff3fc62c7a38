import json
import math
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("LGP_CLI", "lgp")
FIXTURES = Path(os.environ.get("LGP_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "fixtures"))


def run(*args):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, timeout=300)


@pytest.fixture
def solved(tmp_path):
    out = tmp_path / "u0.json"
    r = run("solve", "--input", FIXTURES / "four_arc_tie.json", "--out", out)
    assert r.returncode == 0, r.stderr
    return out


def test_solve_three_value(tmp_path):
    out = tmp_path / "u.json"
    r = run("solve", "--input", FIXTURES / "three_value.json", "--out", out)
    assert r.returncode == 0, r.stderr
    doc = json.loads(out.read_text())
    assert len(doc["chords"]) == 2
    assert abs(doc["total_variation"] - 2 * math.sqrt(3)) < 1e-9


def test_solve_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("solve", "--input", FIXTURES / "three_value.json", "--out", out).returncode == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("name", ["hexagon_equilateral", "hexagon_green_split", "brothers"])
def test_classify_structure(tmp_path, name):
    out = tmp_path / "f.json"
    r = run("classify", "--structure", FIXTURES / f"{name}.json", "--out", out)
    assert r.returncode == 0, r.stderr
    fams = json.loads(out.read_text())["families"]
    assert len(fams) == 1
    for b in fams[0]["bounds"]:
        assert abs(b[0] + 1) < 1e-9 and abs(b[1] - 1) < 1e-9


def test_nonconvex_rejected(tmp_path):
    r = run("solve", "--input", FIXTURES / "nonconvex_quarter.json", "--out", tmp_path / "u.json")
    assert r.returncode == 2
    assert "domain must be convex" in r.stderr
    assert not (tmp_path / "u.json").exists()


def family_member(tmp_path, value):
    out = tmp_path / "fam.json"
    assert run("classify", "--input", FIXTURES / "four_arc_tie.json", "--out", out).returncode == 0
    doc = json.loads(out.read_text())
    member = doc["reference"]
    free = [r["face"] for r in doc["regions"] if r["role"] == "free"]
    assert len(free) == 1
    member["faces"][free[0]]["value"] = value
    path = tmp_path / f"member_{value}.json"
    path.write_text(json.dumps(member))
    return path


def test_verify_accepts_family_member(tmp_path, solved):
    cand = family_member(tmp_path, 0.25)
    r = run("verify", "--candidate", cand, "--reference", solved, "--input", FIXTURES / "four_arc_tie.json")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "not least-gradient" not in r.stdout


def test_verify_rejects_higher_variation(tmp_path, solved):
    cand = family_member(tmp_path, 2.0)
    r = run("verify", "--candidate", cand, "--reference", solved, "--input", FIXTURES / "four_arc_tie.json")
    assert r.returncode == 1
    assert "not least-gradient" in r.stdout


def test_verify_trace_mismatch(tmp_path, solved):
    other = tmp_path / "three.json"
    assert run("solve", "--input", FIXTURES / "three_value.json", "--out", other).returncode == 0
    r = run("verify", "--candidate", other, "--reference", solved, "--input", FIXTURES / "four_arc_tie.json")
    assert r.returncode == 2


def test_select_writes_report_and_images(tmp_path):
    report, images = tmp_path / "r.csv", tmp_path / "img"
    r = run("select", "--input", FIXTURES / "three_value.json", "--grid", 16, "--steps", 3,
            "--max-iters", 2000, "--tol", 1e-6, "--report", report, "--images", images)
    assert r.returncode in (0, 1), r.stderr
    lines = report.read_text().splitlines()
    assert lines[0] == "eps,F,G,pnorm,lambda_hat"
    assert len(lines) == 4
    assert [float(l.split(",")[0]) for l in lines[1:]] == pytest.approx([1e-1, 1e-2, 1e-3])
    for k in range(3):
        for suffix in (".pgm", ".mask.pgm", ".f64", ".json"):
            assert (images / f"step_{k}{suffix}").exists()
    assert (images / "step_0.f64").stat().st_size == 16 * 16 * 8
    assert (images / "step_0.pgm").read_bytes().startswith(b"P5\n16 16\n255\n")


@pytest.mark.parametrize("args", [(), ("solve",), ("bogus",), ("select", "--input", "x.json")])
def test_bad_arguments(args):
    assert run(*args).returncode == 2


def test_select_rejects_small_grid(tmp_path):
    r = run("select", "--input", FIXTURES / "three_value.json", "--grid", 8, "--report", tmp_path / "r.csv")
    assert r.returncode == 2
    assert "grid size" in r.stderr


def test_missing_input(tmp_path):
    r = run("solve", "--input", tmp_path / "absent.json", "--out", tmp_path / "u.json")
    assert r.returncode == 2
