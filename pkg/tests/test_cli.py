import json

import numpy as np
import pytest

from udwqc.cli import main
from udwqc.plots import read_sweep_csv


def run(args):
    return main(list(args))


def test_verify_passes(capsys):
    assert run(["verify"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out
    assert "[FAIL]" not in out
    assert "all checks passed" in out


def test_capacity_sweep_csv(tmp_path):
    out = tmp_path / "cap.csv"
    code = run(["capacity", "--lmin", "0.5", "--lmax", "3", "--steps", "6",
                "--out", str(out)])
    assert code == 0
    meta, cols, rows = read_sweep_csv(out)
    assert cols == ["lambda_phi", "gamma", "capacity", "backend"]
    assert len(rows) == 6
    assert meta["seed"] == "0"
    caps = [float(r["capacity"]) for r in rows]
    assert all(b >= a - 1e-9 for a, b in zip(caps, caps[1:]))
    text = out.read_text()
    assert text.startswith("# udw v")


def test_capacity_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["capacity", "--lmin", "1", "--lmax", "2", "--steps", "3", "--seed", "7"]
    run(argv + ["--out", str(a)])
    run(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_diamond_sweep_csv(tmp_path):
    out = tmp_path / "dia.csv"
    code = run(["diamond", "--pair", "qst", "--lmin", "1", "--lmax", "2.5",
                "--steps", "3", "--seed", "5", "--coarse", "1500", "--topk", "4",
                "--out", str(out)])
    assert code == 0
    meta, cols, rows = read_sweep_csv(out)
    assert cols == ["lambda_phi", "gamma", "diamond", "starts", "converged"]
    assert meta["pair"] == "qst"
    vals = [float(r["diamond"]) for r in rows]
    assert all(b <= a + 1e-6 for a, b in zip(vals, vals[1:]))


def test_noise_sweep_csv(tmp_path):
    out = tmp_path / "noise.csv"
    code = run(["noise", "--lmin", "0.6", "--lmax", "2", "--steps", "3",
                "--b", "0", "0.5", "--out", str(out)])
    assert code == 0
    meta, cols, rows = read_sweep_csv(out)
    assert cols == ["lambda_phi", "b", "lambda_eff", "capacity", "flag"]
    assert len(rows) == 6
    assert {r["flag"] for r in rows} == {"ok"}


def test_overlap_sweep_csv(tmp_path):
    out = tmp_path / "ov.csv"
    code = run(["overlap", "--gmin", "0.1", "--gmax", "2", "--steps", "4",
                "--b", "0", "1", "--out", str(out)])
    assert code == 0
    meta, cols, rows = read_sweep_csv(out)
    assert cols == ["gamma_phi", "b", "overlap"]
    assert len(rows) == 8


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"lmin": 1.0, "lmax": 2.0, "steps": 2, "seed": 9,
                               "out": str(tmp_path / "cfg_out.csv")}))
    code = run(["--config", str(cfg), "capacity"])
    assert code == 0
    meta, cols, rows = read_sweep_csv(tmp_path / "cfg_out.csv")
    assert meta["seed"] == "9"
    assert len(rows) == 2


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"steps": 2}))
    out = tmp_path / "o.csv"
    code = run(["--config", str(cfg), "capacity", "--lmin", "1", "--lmax", "2",
                "--steps", "3", "--out", str(out)])
    assert code == 0
    _, _, rows = read_sweep_csv(out)
    assert len(rows) == 3


def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["--config", str(bad), "verify"]) == 2
    assert run(["capacity", "--lmin", "2", "--lmax", "1", "--steps", "3",
                "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["capacity", "--lmin", "1", "--lmax", "2", "--steps", "0",
                "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["no-such-command"]) == 2


def test_twelve_significant_digits(tmp_path):
    out = tmp_path / "cap.csv"
    run(["capacity", "--lmin", "0.7", "--lmax", "0.7", "--steps", "1",
         "--out", str(out)])
    row = out.read_text().splitlines()[2]
    gamma_field = row.split(",")[1]
    assert gamma_field == f"{np.pi / 4:.12g}"


def test_plot_flag_renders_svg(tmp_path):
    out = tmp_path / "cap.csv"
    code = run(["capacity", "--lmin", "1", "--lmax", "2", "--steps", "3",
                "--out", str(out), "--plot"])
    assert code == 0
    svg = out.with_suffix(".svg")
    assert svg.exists()
    head = svg.read_text()[:500]
    assert "<svg" in head


def test_plot_renderers_reject_missing_columns(tmp_path):
    from udwqc.plots import render_diamond

    bad = tmp_path / "bad.csv"
    bad.write_text("# udw v0 seed=0 backend=x\nlambda_phi,foo\n1,2\n")
    with pytest.raises(ValueError, match="diamond"):
        render_diamond(bad, tmp_path / "bad.svg")
    assert not (tmp_path / "bad.svg").exists()


def test_empty_csv_body_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("# udw v0 seed=0 backend=x\nlambda_phi,capacity\n")
    with pytest.raises(ValueError, match="no data rows"):
        read_sweep_csv(empty)
