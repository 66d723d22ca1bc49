import csv
import json

import pandas as pd
import pytest

from copula_lag.cli import (
    EXIT_DEGENERATE,
    EXIT_INPUT,
    EXIT_USAGE,
    REPRO_BASE_SEED,
    main,
    parse_range,
    repro_cases,
)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_parse_range():
    assert parse_range("1..8") == (1, 8) and parse_range("3") == (3, 3)
    with pytest.raises(Exception):
        parse_range("8..1")


def test_simulate_system1(tmp_path):
    out = tmp_path / "s1.csv"
    assert main(["simulate", "--system", "1", "--lag", "2", "--seed", "7", "--out", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["index", "x", "y"] and len(rows) == 1 + 498
    man = json.loads((tmp_path / "s1.csv.manifest.json").read_text())
    assert man["config"]["spec"]["seed"] == 7 and man["config"]["spec"]["lag"] == 2


def test_simulate_system4_has_state_only(tmp_path):
    out = tmp_path / "s4.csv"
    assert main(["simulate", "--system", "4", "--lag", "3", "--out", str(out)]) == 0
    assert read_rows(out)[0] == ["index", "x"]


def test_simulate_bad_system(tmp_path, capsys):
    assert main(["simulate", "--system", "9", "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE


def test_simulate_invalid_spec(tmp_path):
    code = main(["simulate", "--system", "1", "--lag", "3", "--length", "3",
                 "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_INPUT


def test_scan_system2_lag4(tmp_path):
    traj = tmp_path / "s2.csv"
    main(["simulate", "--system", "2", "--lag", "4", "--seed", "1", "--out", str(traj)])
    prefix = tmp_path / "curve"
    assert main(["scan", "--input", str(traj), "--lags", "1..8", "--out", str(prefix)]) == 0
    doc = json.loads(prefix.with_suffix(".json").read_text())
    assert doc["identified_lag"] == 4
    rows = read_rows(prefix.with_suffix(".csv"))
    assert rows[0] == ["lag", "te_nats"] and len(rows) == 9
    # CSV and JSON agree value for value
    for row, entry in zip(rows[1:], doc["entries"]):
        assert int(row[0]) == entry["lag"] and float(row[1]) == entry["te_nats"]
    assert doc["manifest"]["inputs"][0]["sha256"]


def test_scan_reverse_and_both(tmp_path):
    traj = tmp_path / "s1.csv"
    main(["simulate", "--system", "1", "--lag", "2", "--out", str(traj)])
    main(["scan", "--input", str(traj), "--direction", "y_to_x", "--out", str(tmp_path / "r")])
    main(["scan", "--input", str(traj), "--direction", "both", "--out", str(tmp_path / "b")])
    rev = read_rows(tmp_path / "r.csv")
    both_rev = read_rows(tmp_path / "b_y_to_x.csv")
    assert rev == both_rev
    doc = json.loads((tmp_path / "b.json").read_text())
    assert set(doc["curves"]) == {"x_to_y", "y_to_x"}
    assert doc["curves"]["x_to_y"]["identified_lag"] == 2


def test_scan_self_on_state_only_file(tmp_path):
    traj = tmp_path / "s4.csv"
    main(["simulate", "--system", "4", "--lag", "3", "--seed", "2", "--out", str(traj)])
    assert main(["scan", "--input", str(traj), "--out", str(tmp_path / "c")]) == 0
    assert json.loads((tmp_path / "c.json").read_text())["identified_lag"] == 3


def test_scan_degenerate_exit_code(tmp_path):
    traj = tmp_path / "flat.csv"
    main(["simulate", "--system", "3", "--lag", "1", "--delta1", "0", "--out", str(traj)])
    assert main(["scan", "--input", str(traj), "--out", str(tmp_path / "c")]) == EXIT_DEGENERATE


def test_scan_missing_input(tmp_path):
    assert main(["scan", "--input", str(tmp_path / "nope.csv")]) == EXIT_INPUT


def test_bits_is_display_only(tmp_path, capsys):
    traj = tmp_path / "s1.csv"
    main(["simulate", "--system", "1", "--lag", "1", "--out", str(traj)])
    main(["scan", "--input", str(traj), "--out", str(tmp_path / "n")])
    main(["scan", "--input", str(traj), "--bits", "--out", str(tmp_path / "b")])
    assert "bits" in capsys.readouterr().out
    assert read_rows(tmp_path / "n.csv") == read_rows(tmp_path / "b.csv")


def test_analyze_tetouan(tmp_path, tetouan_csv):
    out = tmp_path / "tet"
    assert main(["analyze-tetouan", "--csv", str(tetouan_csv), "--out", str(out)]) == 0
    curves = sorted(out.glob("curve_*.csv"))
    assert len(curves) == 15
    for path in curves:
        rows = read_rows(path)
        assert rows[0] == ["lag", "te_nats"] and [int(r[0]) for r in rows[1:]] == list(range(1, 25))
    summary = read_rows(out / "summary.csv")
    assert summary[0] == ["factor", "network", "identified_lag_hours", "max_te_nats"]
    assert len(summary) == 16
    man = json.loads((out / "manifest.json").read_text())
    assert man["config"]["samples_per_series"] == 720
    assert man["config"]["lag_samples"][0] == 6 and man["config"]["lag_samples"][-1] == 144


def test_analyze_missing_column(tmp_path, tetouan_csv, capsys):
    df = pd.read_csv(tetouan_csv).drop(columns=["Wind Speed"])
    path = tmp_path / "cut.csv"
    df.to_csv(path, index=False)
    assert main(["analyze-tetouan", "--csv", str(path), "--out", str(tmp_path / "o")]) == EXIT_INPUT
    assert "Wind Speed" in capsys.readouterr().err


def test_repro_cases():
    assert len(repro_cases("all")) == 16
    assert repro_cases("sim2")[0] == (2, 1, REPRO_BASE_SEED + 201)


def test_repro_sim1(tmp_path, capsys):
    assert main(["repro", "sim1", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4 and "4/4" in out
    rows = read_rows(tmp_path / "sim1_curves.csv")
    assert rows[0] == ["lag", "te_nats_l1", "te_nats_l2", "te_nats_l3", "te_nats_l4"]
    assert len(rows) == 9


def test_outputs_bit_identical_across_runs(tmp_path, tetouan_csv):
    d = tmp_path / "run"
    d.mkdir()

    def run(jobs):
        main(["simulate", "--system", "3", "--lag", "2", "--seed", "5", "--out", str(d / "t.csv")])
        main(["scan", "--input", str(d / "t.csv"), "--jobs", jobs, "--out", str(d / "c")])
        main(["repro", "sim4", "--jobs", jobs, "--out", str(d / "rep")])
        main(["analyze-tetouan", "--csv", str(tetouan_csv), "--lag-hours", "1..6",
              "--jobs", jobs, "--out", str(d / "tet")])
        return {p.relative_to(d): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}

    first = run("1")
    second = run("3")
    assert first.keys() == second.keys() and len(first) > 20
    for name in first:
        assert first[name] == second[name], name


def test_timing_flag_adds_duration(tmp_path):
    out = tmp_path / "s.csv"
    main(["simulate", "--system", "1", "--timing", "--out", str(out)])
    man = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    assert man["wall_clock_seconds"] >= 0
