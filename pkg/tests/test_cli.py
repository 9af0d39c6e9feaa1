import json
import math
import subprocess
import sys

import pytest

from ballbodies.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def two(tmp_path):
    p = tmp_path / "two.json"
    s = 0.5 * math.sqrt(2)
    p.write_text(json.dumps([[-s, 0.0], [s, 0.0]]))
    return str(p)


def test_hull_lens_area(capsys, two):
    code, out, _ = run(capsys, "hull", "--in", two)
    assert code == 0
    d = json.loads(out)
    assert d["kind"] == "point_cloud"
    assert d["lens"]["area"] == pytest.approx(math.pi / 2 - 1, abs=1e-11)
    assert d["outradius"] == pytest.approx(0.5 * math.sqrt(2))


def test_dual_radii_diameter(capsys, two):
    code, out, _ = run(capsys, "dual", "--in", two)
    assert json.loads(out)["kind"] == "ball_intersection"
    code, out, _ = run(capsys, "radii", "--in", two)
    r = json.loads(out)
    assert r["inradius"] == pytest.approx(1 - math.sqrt(0.5), abs=1e-9)
    code, out, _ = run(capsys, "diameter", "--in", two)
    assert json.loads(out)["diameter"] == pytest.approx(math.sqrt(2), abs=1e-9)


def test_lens_command(capsys):
    code, out, _ = run(capsys, "lens", "--k", "2", "--radius", "0.5", "--dim", "3")
    d = json.loads(out)
    assert code == 0 and d["dual"]["k"] == 1
    assert d["dual"]["radius"] == pytest.approx(math.sqrt(0.75))


def test_shadow_csv(capsys, tmp_path):
    p = tmp_path / "sh.json"
    p.write_text(json.dumps({"points": [[-0.3, 0.0], [0.3, 0.0]], "velocities": [1.0, -1.0]}))
    code, out, _ = run(capsys, "steiner", "--in", str(p), "--direction", "0,1", "--t-steps", "3",
                       "--t-min", "0", "--t-max", "0.2")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "t,area,dual_area" and len(lines) == 4
    areas = [float(r.split(",")[1]) for r in lines[1:]]
    assert areas == sorted(areas)


def test_counterexample_command(capsys):
    code, out, _ = run(capsys, "counterexample")
    d = json.loads(out)
    assert d["printed"] == {"psi_mid": 6.313, "psi_average": 5.9545}
    assert d["kappa_h"] < 1 and d["fiber_ok"] is False
    code, out, _ = run(capsys, "counterexample", "--z0", str(d["admissible_z0"]))
    assert json.loads(out)["fiber_ok"] is True


@pytest.mark.parametrize("example,arcs", [("reuleaux", 3), ("naztel", 4)])
def test_render(capsys, example, arcs):
    code, out, _ = run(capsys, "render", "--example", example)
    assert code == 0 and out.startswith("<svg") and out.count(" A ") == arcs


def test_render_disk_is_circle(capsys):
    _, out, _ = run(capsys, "render", "--example", "disk")
    assert "<circle" in out


def test_verify_small(capsys, tmp_path):
    o = tmp_path / "v.jsonl"
    code, out, _ = run(capsys, "verify", "--suite", "schramm,basin", "--scale", "0.02", "--out", str(o))
    assert code == 0
    rows = [json.loads(line) for line in o.read_text().splitlines()]
    assert [r["tag"] for r in rows] == ["schramm", "basin"] and all(r["passed"] for r in rows)


def test_output_is_byte_deterministic(capsys, two):
    a = run(capsys, "volume", "--in", two, "--seed", "3")[1]
    b = run(capsys, "volume", "--in", two, "--seed", "3")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["hull", "--in", "/nonexistent.json"],
    ["lens", "--radius", "-1"],
    ["hull", "--bogus"],
    ["verify", "--suite", "no-such-suite", "--scale", "0.01"],
])
def test_error_exit_codes(capsys, argv):
    assert main(argv) == 1
    assert capsys.readouterr().err


def test_console_entry_point(two):
    r = subprocess.run([sys.executable, "-m", "ballbodies", "diameter", "--in", two],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["diameter"] == pytest.approx(math.sqrt(2), abs=1e-9)
