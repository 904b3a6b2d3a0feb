import json
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

from fareylab.cli import main

from oracles import collar_width

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(*argv):
    return main(["--quiet" if a == "-q" else a for a in argv])


def test_default_schedule_matches_golden(workdir):
    assert run("schedule", "--quiet") == 0
    assert (workdir / "schedule.json").read_bytes() == (GOLDEN / "schedule.json").read_bytes()
    assert (workdir / "schedule.json.manifest.json").exists()


def test_schedule_rerun_is_byte_identical(workdir):
    run("schedule", "--quiet", "--kmax", "9", "--D", "3/2", "--out", "a.json")
    run("schedule", "--quiet", "--kmax", "9", "--D", "3/2", "--out", "b.json")
    assert Path("a.json").read_bytes() == Path("b.json").read_bytes()


def test_config_file_and_flag_override(workdir):
    Path("cfg.json").write_text(json.dumps({"kmax": 5, "D": "2/1"}))
    assert run("schedule", "--quiet", "--config", "cfg.json", "--kmax", "6") == 0
    data = json.loads(Path("schedule.json").read_text())
    assert data["kmax"] == 6 and data["D"] == "2/1"
    manifest = json.loads(Path("schedule.json.manifest.json").read_text())
    assert manifest["config"]["kmax"] == 6


@pytest.mark.parametrize("argv", [
    ("schedule", "--config", "missing.json"),
    ("schedule", "--D", "0"),
    ("schedule", "--out", "no/such/dir/s.json"),
    ("check", "--schedule", "missing.json"),
    ("render", "--viewport", "2,1"),
    ("render", "--viewport", "a,b"),
])
def test_bad_input_exit_2(workdir, argv):
    assert run(*argv, "--quiet") == 2


def test_cap_exit_3(workdir, monkeypatch):
    monkeypatch.setenv("FAREYLAB_CAP_DIGITS", "20")
    assert run("schedule", "--quiet") == 3


def test_check_default_passes(workdir, capsys):
    run("schedule", "--quiet")
    assert run("check", "--quiet", "--seed", "3") == 0
    report = json.loads(Path("check.json").read_text())
    assert report["ok"] and {c["check"] for c in report["checks"]} >= {
        "growth_invariants", "twist_recursion", "pivot_separation", "geodesic", "sandwich"}


def test_check_corrupted_schedule(workdir, capsys):
    run("schedule", "--quiet")
    data = json.loads(Path("schedule.json").read_text())
    data["sides"]["odd"][1] = 3
    Path("bad.json").write_text(json.dumps(data))
    assert run("check", "--quiet", "--schedule", "bad.json") == 1
    err = capsys.readouterr().err
    assert "coefficient_floor" in err and "k=3" in err


def test_simulate_rows_and_golden_first_row(workdir):
    run("schedule", "--quiet")
    assert run("simulate", "--quiet") == 0
    lines = Path("lengths.csv").read_text().splitlines()
    assert lines[0] == "k,s,delta_id,length,x,y"
    assert len(lines) - 1 == 6 * 6  # even k in 2..12, six curves
    assert lines[1] == (GOLDEN / "lengths_first_row.csv").read_text().strip()
    assert all(Fraction(r.split(",")[3]) > 0 for r in lines[1:])
    keys = [(int(r.split(",")[0]), r.split(",")[2]) for r in lines[1:]]
    assert keys == sorted(keys)


def test_first_row_independent_value():
    # k = 2, s = 7/4, curve s0_a01: i(gamma_2) = 1 (gamma_2 = 1/6), i(gamma_3) = 14 (gamma_3 = 1/14)
    row = (GOLDEN / "lengths_first_row.csv").read_text().strip().split(",")
    w = collar_width(Fraction(1))
    with mpmath.workdps(60):
        f1 = mpmath.exp(mpmath.mpf(-7) / 4)
        w_alpha = 2 * mpmath.log(mpmath.coth(f1 / 4))
        expect = (w + 45) + 14 * (w + 1) + 2 * (w_alpha + f1 * mpmath.mpf(11) / 4) + 17
        assert abs(mpmath.mpf(Fraction(row[3]).numerator) / Fraction(row[3]).denominator - expect) < 1e-17


def test_simulate_rejects_alpha_free_curve(workdir):
    run("schedule", "--quiet")
    Path("fam.json").write_text(json.dumps({"curves": [{"id": "x", "arcs0": [], "arcs1": []}]}))
    assert run("simulate", "--quiet", "--family", "fam.json") == 2


def test_limits_endpoint_and_sweep(workdir):
    run("schedule", "--quiet")
    run("simulate", "--quiet")
    assert run("limits", "--quiet") == 0
    verdict = json.loads(Path("limits.json").read_text())["verdict"]
    assert verdict["converges-to-endpoint-0"] is True
    run("simulate", "--quiet", "--theta", "1/4,1/2,3/4", "--out", "sweep.csv")
    assert run("limits", "--quiet", "--lengths", "sweep.csv", "--out", "sweep.json") == 0
    verdict = json.loads(Path("sweep.json").read_text())["verdict"]
    assert verdict["on-segment"] is True and verdict["limits-separated"] is True


def test_limits_odd_parity(workdir):
    run("schedule", "--quiet")
    run("simulate", "--quiet", "--parity", "odd")
    assert run("limits", "--quiet") == 0
    assert json.loads(Path("limits.json").read_text())["verdict"]["converges-to-endpoint-1"]


def test_limits_malformed_csv(workdir, capsys):
    run("schedule", "--quiet")
    Path("lengths.csv").write_text("k,s,delta_id,length,x,y\n2,7/4,s0_a01,1/2\n")
    assert run("limits", "--quiet") == 2
    assert "line 2" in capsys.readouterr().err


def test_render_outputs(workdir):
    assert run("render", "--quiet", "--depth", "3") == 0
    plain = Path("farey.svg").read_text()
    assert 'class="geodesic"' not in plain and plain.count('class="farey"') == 15
    assert run("render", "--quiet", "--overlay", "convergents", "--coeffs", "4,4,4",
               "--horoballs", "--out", "g.svg") == 0
    svg = Path("g.svg").read_text()
    assert 'data-slope="1/4"' in svg and 'data-slope="4/17"' in svg
    run("schedule", "--quiet")
    run("simulate", "--quiet", "--theta", "1/4,3/4", "--out", "sweep.csv")
    run("limits", "--quiet", "--lengths", "sweep.csv", "--out", "sweep.json")
    assert run("render", "--quiet", "--limits", "sweep.json", "--out", "sc.svg") == 0
    assert Path("sc.svg").read_text().count('class="limit"') == 12
