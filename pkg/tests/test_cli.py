import csv
import json

import numpy as np

from zakmub.cli import main
from zakmub.harness import RESULT_FIELDS


def test_simulate_writes_results(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    jout = tmp_path / "rows.json"
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(
        "grid: {M: 8, N: 6}\n"
        "sim: {scheme: zak-mub, snr_db: [12], trials: 2, seed: 3, turbo_iters: [0]}\n")
    rc = main(["simulate", "--config", str(cfg), "--out", str(out),
               "--json", str(jout), "--quiet"])
    assert rc == 0
    with open(out, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == list(RESULT_FIELDS)
    assert len(rows) == 2
    assert len(json.loads(jout.read_text())) == 1
    assert "BER" in capsys.readouterr().out


def test_simulate_flag_overrides(tmp_path):
    out = tmp_path / "rows.csv"
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("grid: {M: 8, N: 6}\nsim: {scheme: zak-mub, trials: 2}\n")
    rc = main(["simulate", "--config", str(cfg), "--scheme", "zak-mmse-single",
               "--snr-list", "10,14", "--trials", "1", "--seed", "5",
               "--turbo", "0", "--out", str(out), "--quiet"])
    assert rc == 0
    with open(out, newline="") as f:
        next(csv.reader(f))
        recs = list(csv.DictReader(f, fieldnames=RESULT_FIELDS))
    assert {r["scheme"] for r in recs} == {"zak-mmse-single"}
    assert sorted(float(r["snr_db"]) for r in recs) == [10.0, 14.0]


def test_simulate_rejects_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("sim: {modulation: qam}\n")
    rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "r.csv")])
    assert rc == 2
    assert "unknown key" in capsys.readouterr().err


def test_rate_surface_cli(tmp_path):
    out = tmp_path / "surface.csv"
    rc = main(["rate-surface", "--snr-db", "40", "--grid-steps", "10",
               "--out", str(out)])
    assert rc == 0
    with open(out, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["alpha", "delta", "sinr1", "sinr2", "ps1", "r1", "r2", "r_eff"]
    assert len(rows) == 1 + 10 * 11  # alphas exclude 0, deltas include both ends


def test_verify_cli(capsys):
    rc = main(["verify"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "overall: PASS" in out


def test_channel_dump_csv(tmp_path):
    out = tmp_path / "h.csv"
    rc = main(["channel-dump", "--seed", "1", "--domain", "time", "--out", str(out),
               "-M", "4", "-N", "3"])
    assert rc == 0
    with open(out, newline="") as f:
        rows = list(csv.reader(f))
    assert len(rows) == 12
    assert len(rows[0]) == 24  # re,im pairs


def test_channel_dump_npy(tmp_path):
    out = tmp_path / "h.npy"
    rc = main(["channel-dump", "--seed", "1", "--domain", "dd", "--out", str(out),
               "-M", "4", "-N", "3"])
    assert rc == 0
    H = np.load(out)
    assert H.shape == (12, 12)
    assert np.iscomplexobj(H)


def test_channel_dump_unknown_profile(tmp_path, capsys):
    rc = main(["channel-dump", "--profile", "bogus", "--out", str(tmp_path / "h.csv"),
               "-M", "4", "-N", "3"])
    assert rc == 2
