import json
import math
import subprocess
import sys

import pytest

from sdrating.cli import main
from sdrating.files import read_game_log, read_plot_data


def logistic(x):
    return 1.0 / (1.0 + math.exp(-x))


@pytest.fixture
def three_game_file(tmp_path):
    path = tmp_path / "games.log"
    path.write_text("#model=win_loss\n1,A,B\n2,C,A\n5,A,B\n")
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_rate_golden(three_game_file, capsys):
    a, b, c = 0.05, -0.05, 0.0
    g = logistic(a - c)
    c, a = c + 0.1 * g, a - 0.1 * g
    g = logistic(b - a)
    a, b = a + 0.1 * g, b - 0.1 * g
    code, out, _ = run(["rate", three_game_file], capsys)
    assert code == 0
    assert out == f"player,rating,games_played\nC,{c:.6f},1\nA,{a:.6f},3\nB,{b:.6f},2\n"
    assert out == "player,rating,games_played\nC,0.051250,1\nA,0.047532,3\nB,-0.098781,2\n"


def test_rate_empty_log_with_pool(tmp_path, capsys):
    log = tmp_path / "empty.log"
    log.write_text("#model=wdl\n")
    pool = tmp_path / "pool.txt"
    pool.write_text("X\nY\n")
    code, out, _ = run(["rate", log, "--pool", pool, "--r-init", "1.5"], capsys)
    assert code == 0
    assert out.splitlines()[1:] == ["X,1.500000,0", "Y,1.500000,0"]


def test_rate_flags_override_config(three_game_file, tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"k": 0.5, "r_init": 10}))
    _, out, _ = run(["rate", three_game_file, "--config", config, "--k", "0.1"], capsys)
    rows = {line.split(",")[0]: float(line.split(",")[1]) for line in out.splitlines()[1:]}
    assert rows["C"] == pytest.approx(10.05125, abs=1e-5)


def test_rate_elo_classic(tmp_path, capsys):
    log = tmp_path / "elo.log"
    log.write_text("#model=elo_classic\n1,A,B\n")
    code, out, _ = run(["rate", log], capsys)
    assert code == 0
    assert out.splitlines()[1:] == ["A,1208.000000,1", "B,1192.000000,1"]


def test_rate_history_and_out(three_game_file, tmp_path, capsys):
    out_path, hist = tmp_path / "r.csv", tmp_path / "h.csv"
    code, out, _ = run(["rate", three_game_file, "--out", out_path, "--history", hist], capsys)
    assert code == 0 and out == ""
    assert out_path.read_text().startswith("player,rating")
    rows = read_plot_data(hist)
    assert len(rows) == 9
    assert [r.time for r in rows[::3]] == [1, 2, 5]


def test_rate_decreasing_time(tmp_path, capsys):
    log = tmp_path / "bad.log"
    log.write_text("#model=win_loss\n1,A,B\n5,C,A\n4,A,B\n")
    code, _, err = run(["rate", log], capsys)
    assert code != 0
    assert "line 4" in err


def test_rate_model_mismatch(three_game_file, capsys):
    code, _, err = run(["rate", three_game_file, "--model", "ranking"], capsys)
    assert code == 1
    assert "cannot rate" in err


@pytest.mark.parametrize("content", [None, "#model=win_loss\n1,A\n"])
def test_rate_bad_input(tmp_path, content, capsys):
    log = tmp_path / "x.log"
    if content is not None:
        log.write_text(content)
    code, _, err = run(["rate", log], capsys)
    assert code == 1 and err.startswith("error:")


def test_rate_invalid_param(three_game_file, capsys):
    code, _, err = run(["rate", three_game_file, "--k", "-1"], capsys)
    assert code == 1 and "k_factor" in err


def test_verify_passes(capsys):
    code, out, _ = run(["verify", "--cases", "40"], capsys)
    assert code == 0
    assert out.count("PASS") == 6


def test_verify_detects_sign_flip(capsys):
    code, out, _ = run(["verify", "--cases", "40", "--inject-sign-flip", "--model", "wdl"], capsys)
    assert code == 2
    assert "FAIL  zero-expected-score" in out
    assert "FAIL  fd-agreement" in out


def test_verify_is_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a.txt", tmp_path / "b.txt"
    run(["verify", "--cases", "20", "--seed", "5", "--out", first], capsys)
    run(["verify", "--cases", "20", "--seed", "5", "--out", second], capsys)
    assert first.read_text() == second.read_text()
    assert first.read_text().endswith("all properties hold\n")


def test_verify_rejects_classic_elo(capsys):
    code, _, err = run(["verify", "--model", "elo_classic"], capsys)
    assert code == 1


def scenario_file(tmp_path, **extra):
    data = {"players": ["A", "B", "C"], "horizon": 200, "model": "win_loss", "params": {"k": 0.1}}
    data.update(extra)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data))
    return path


def test_simulate_symmetric(tmp_path, capsys):
    out = tmp_path / "plot.csv"
    code, text, _ = run(["simulate", scenario_file(tmp_path), "--replications", "20", "--seed", "1", "--out", out], capsys)
    assert code == 0
    assert "conservation" in text and "drift" not in text
    rows = read_plot_data(out)
    assert len(rows) == 20 * 200 * 3 + 200 * 3


def test_simulate_offset_drift_sign(tmp_path, capsys):
    path = scenario_file(
        tmp_path,
        skills={"A": {"kind": "constant", "level": 1.5}, "B": {"kind": "constant", "level": -1.5}},
        horizon=50,
    )
    code, text, _ = run(["simulate", path, "--replications", "5", "--drift-replications", "400"], capsys)
    assert code == 0
    drift = [line for line in text.splitlines() if line.strip().startswith(("A:", "B:"))]
    assert len(drift) == 2
    assert all("sign_matches_gap=yes" in line for line in drift)


def test_simulate_missing_file(tmp_path, capsys):
    code, _, err = run(["simulate", tmp_path / "nope.json"], capsys)
    assert code == 1 and "cannot read scenario" in err


@pytest.mark.parametrize("model, extra", [
    ("win_loss", {}),
    ("margin", {}),
    ("wdl", {}),
    ("ranking", {"pairing": {"kind": "full_field", "m": 3}}),
])
def test_emitted_log_ingests(tmp_path, capsys, model, extra):
    path = scenario_file(tmp_path, model=model, **extra)
    log = tmp_path / "sim.log"
    code, _, _ = run(["simulate", path, "--replications", "2", "--emit-log", log], capsys)
    assert code == 0
    declared, records = read_game_log(log)
    assert declared.value == model and len(records) == 200
    code, out, _ = run(["rate", log], capsys)
    assert code == 0 and len(out.splitlines()) == 4


def test_module_entry_point(three_game_file):
    proc = subprocess.run([sys.executable, "-m", "sdrating", "rate", str(three_game_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "C,0.051250,1"
