"""End-to-end tests of the command-line interface."""

import json
import math

import pytest

from qpd3.cli import main, parse_angle


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_angle_shorthands():
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("pi/2") == pytest.approx(math.pi / 2)
    assert parse_angle("-pi/2") == pytest.approx(-math.pi / 2)
    assert parse_angle("2pi/3") == pytest.approx(2 * math.pi / 3)
    assert parse_angle("0") == 0.0
    assert parse_angle("1.25") == 1.25
    with pytest.raises(Exception):
        parse_angle("two pies")


def test_payoff_classical_all_defect(capsys):
    code, out, _ = run_cli(
        capsys, "payoff", "--gamma", "0", "--delta", "0", "--p", "0", "--mu", "0",
        "--strategy", "A:pi,0,0", "--strategy", "B:pi,0,0", "--strategy", "C:pi,0,0",
    )
    assert code == 0
    data = json.loads(out)
    assert data["payoff_A"] == pytest.approx(1.0, abs=1e-12)
    assert data["payoff_B"] == pytest.approx(1.0, abs=1e-12)
    assert data["payoff_C"] == pytest.approx(1.0, abs=1e-12)
    assert len(data["outcome_probabilities"]) == 8
    assert data["closed_form"]["max_abs_discrepancy"] <= 1e-9


def test_payoff_entangled_all_cooperate(capsys):
    code, out, _ = run_cli(capsys, "payoff", "--gamma", "pi/2", "--delta", "pi/2")
    assert code == 0
    data = json.loads(out)
    assert data["payoff_A"] == pytest.approx(3.0, abs=1e-12)


def test_payoff_in_unit_range_with_noise(capsys):
    code, out, _ = run_cli(
        capsys, "payoff", "--p", "0.4", "--mu", "1",
        "--strategy", "A:pi/2,0,0", "--strategy", "B:pi/2,0,0",
        "--strategy", "C:pi/2,pi/2,pi/2",
    )
    assert code == 0
    data = json.loads(out)
    for key in ("payoff_A", "payoff_B", "payoff_C"):
        assert 0.0 <= data[key] <= 5.0


def test_unknown_flag_is_an_error(capsys):
    code, _, _ = run_cli(capsys, "payoff", "--bogus", "1")
    assert code == 2


def test_invalid_value_is_an_error(capsys):
    code, _, _ = run_cli(capsys, "payoff", "--p", "1.5")
    assert code == 2
    code, _, _ = run_cli(capsys, "payoff", "--gamma", "pi")  # gamma max is pi/2
    assert code == 2
    code, _, _ = run_cli(capsys, "payoff", "--strategy", "Z:0,0,0")
    assert code == 2


def test_sweep_grid_contract(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--var", "p", "--grid", "0:1:2")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "x,payoff_A,payoff_B,payoff_C"
    assert len(lines) == 3
    assert lines[1].split(",")[0] == "0"
    assert lines[2].split(",")[0] == "1"


def test_sweep_preset_profile(capsys, tmp_path):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run_cli(capsys, "sweep", "--preset", "fig2", "--mu", "0",
                         "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().strip().split("\n")
    assert len(lines) == 22  # header + 21 grid points
    for line in lines[1:]:
        _, a, b, c = (float(v) for v in line.split(","))
        assert a == pytest.approx(b, abs=1e-12)
        assert c >= a - 1e-12


def test_sweep_requires_var_without_preset(capsys):
    code, _, err = run_cli(capsys, "sweep")
    assert code == 2
    assert "--var" in err


def test_sweep_csv_bytes_are_reproducible(capsys, tmp_path):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--var", "mu", "--p", "0.3", "--grid", "0:1:11"]
    assert main(args + ["--out", str(f1)]) == 0
    assert main(args + ["--out", str(f2)]) == 0
    capsys.readouterr()
    assert f1.read_bytes() == f2.read_bytes()
    assert b"\r" not in f1.read_bytes()


def test_surface_grid_contract(capsys):
    code, out, _ = run_cli(capsys, "surface", "--res", "2", "--p", "0.3", "--mu", "0.3")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "alpha1,theta1,payoff_A"
    assert len(lines) == 5


def test_surface_preset_claimed_point_is_max(capsys):
    code, out, _ = run_cli(capsys, "surface", "--preset", "fig4", "--res", "5")
    assert code == 0
    lines = out.strip().split("\n")[1:]
    assert len(lines) == 25
    rows = [tuple(float(v) for v in line.split(",")) for line in lines]
    best = max(r[2] for r in rows)
    claimed = [r for r in rows if abs(r[0] - math.pi / 2) < 1e-9 and abs(r[1] - math.pi / 2) < 1e-9]
    assert claimed and claimed[0][2] == pytest.approx(best, abs=1e-12)


def test_best_response_json(capsys):
    code, out, _ = run_cli(
        capsys, "best-response", "--player", "alice", "--claimed", "pi/2,pi/2,0",
        "--strategy", "B:pi/2,0,0", "--strategy", "C:pi/2,0,0", "--res", "5",
    )
    assert code == 0
    data = json.loads(out)
    assert set(data) == {
        "player", "grid_resolution", "best", "best_payoff",
        "payoff_at_claimed", "gain_over_claimed",
    }
    assert data["player"] == "alice"
    assert data["gain_over_claimed"] >= -1e-12


def test_nash_check_classical_equilibrium(capsys):
    code, out, _ = run_cli(
        capsys, "nash-check", "--gamma", "0", "--delta", "0",
        "--strategy", "A:pi,0,0", "--strategy", "B:pi,0,0", "--strategy", "C:pi,0,0",
        "--res", "5",
    )
    assert code == 0
    data = json.loads(out)
    assert data["is_equilibrium"] is True

    code, out, _ = run_cli(
        capsys, "nash-check", "--gamma", "0", "--delta", "0", "--res", "5",
    )
    assert code == 0
    data = json.loads(out)
    assert data["is_equilibrium"] is False
    assert data["gains"] == pytest.approx([2.0, 2.0, 2.0], abs=1e-12)


def test_payoff_table_override(capsys, tmp_path):
    table = {f"{l}{m}{n}": [0, 0, 0] for l in (0, 1) for m in (0, 1) for n in (0, 1)}
    path = tmp_path / "table.json"
    path.write_text(json.dumps(table))
    code, out, _ = run_cli(capsys, "payoff", "--table", str(path))
    assert code == 0
    assert json.loads(out)["payoff_A"] == pytest.approx(0.0, abs=1e-12)


def test_corrupted_table_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "payoff", "--table", str(path))
    assert code == 2
    assert "table" in err

    path2 = tmp_path / "missing.json"
    path2.write_text(json.dumps({"000": [1, 2, 3]}))
    code, _, err = run_cli(capsys, "payoff", "--table", str(path2))
    assert code == 2
    assert "missing" in err


def test_verify_reports_every_check(capsys, tmp_path):
    report = tmp_path / "disc.json"
    code, out, _ = run_cli(capsys, "verify", "--seed", "42", "--report", str(report))
    lines = [l for l in out.strip().split("\n") if l.startswith(("PASS", "FAIL"))]
    assert len(lines) == 10
    # the sweep-shape check fails by construction (constant payoff curves
    # under the canned profile); everything else must pass
    failing = [l for l in lines if l.startswith("FAIL")]
    assert len(failing) == 1
    assert "p_sweep_qualitative" in failing[0]
    assert code == 1
    assert "p_sweep_qualitative" in out.rsplit("failed:", 1)[1]
    assert report.exists()
    payload = json.loads(report.read_text())
    assert "max_abs_discrepancy" in payload


def test_verify_seed_independent_outcome(capsys, tmp_path):
    patterns = []
    for seed in ("42", "43"):
        code, out, _ = run_cli(capsys, "verify", "--seed", seed,
                               "--report", str(tmp_path / f"r{seed}.json"))
        patterns.append([l.split()[0] for l in out.strip().split("\n")
                         if l.startswith(("PASS", "FAIL"))])
    assert patterns[0] == patterns[1]


@pytest.mark.parametrize("cmd", ["payoff", "sweep", "surface", "best-response",
                                 "nash-check", "verify"])
def test_help_available(capsys, cmd):
    code, out, _ = run_cli(capsys, cmd, "--help")
    assert code == 0
    assert "default" in out
