"""CLI driver: commands, CSV contracts, exit codes."""

import json

import numpy as np
import pytest

from htent.cli import main


def write_config(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def read_rows(path):
    lines = [ln for ln in path.read_text().strip().splitlines()
             if not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


def test_entropy_profile_csv(tmp_path):
    cfg = write_config(tmp_path, {
        "command": "entropy-profile", "model": {"type": "massless"},
        "s_F": 6, "cuts": [1 / 3, 0.5], "alphas": [2], "negativity": True})
    out = tmp_path / "prof.csv"
    assert main(["--config", cfg, "--output", str(out)]) == 0
    header, rows = read_rows(out)
    assert header == ["cut_fraction", "S_vN", "S_renyi_2", "mutual_info",
                      "log_negativity", "iso_defect"]
    assert len(rows) == 2
    # floats are written with 17 significant digits and round-trip exactly
    val = float(rows[1][1])
    assert rows[1][1] == f"{val:.17g}"
    assert val > 0.0


def test_spectrum_and_fourier_pipeline(tmp_path):
    cfg = write_config(tmp_path, {
        "command": "spectrum", "model": {"type": "massive", "m": 3.0},
        "s_F": 6})
    out = tmp_path / "spec.csv"
    assert main(["--config", cfg, "--output", str(out)]) == 0
    header, rows = read_rows(out)
    assert header == ["index", "energy"]
    energies = [float(r[1]) for r in rows]
    assert energies == sorted(energies)

    # synthesize a series and push it through the fourier command
    t = np.linspace(0.0, 4.0, 101)
    series = tmp_path / "series.csv"
    series.write_text("t,S_vN\n" + "\n".join(
        f"{ti},{np.cos(7.0 * ti)}" for ti in t))
    fcfg = write_config(tmp_path, {
        "command": "fourier", "fourier": {"input": str(series)}}, "f.json")
    fout = tmp_path / "fft.csv"
    assert main(["--config", fcfg, "--output", str(fout)]) == 0
    header, rows = read_rows(fout)
    assert header == ["omega", "amplitude"]
    best = max(rows, key=lambda r: float(r[1]))
    binw = float(rows[1][0]) - float(rows[0][0])
    assert abs(float(best[0]) - 7.0) <= binw


def test_quench_csv(tmp_path):
    cfg = write_config(tmp_path, {
        "command": "quench", "s_F": 6,
        "quench": {"pre": {"type": "massive", "m": 5.0},
                   "post": {"type": "massless"},
                   "cut": 0.5, "t_max": 1.0, "steps": 3}})
    out = tmp_path / "q.csv"
    assert main(["--config", cfg, "--output", str(out)]) == 0
    header, rows = read_rows(out)
    assert header == ["t", "S_vN", "iso_defect"]
    assert len(rows) == 3


def test_oracle_compare_reports_max_abs_diff(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "command": "entropy-profile", "model": {"type": "massless"},
        "s_F": 8, "cuts": [0.25, 0.5, 0.75]})
    out = tmp_path / "ht.csv"
    assert main(["--config", cfg, "--output", str(out)]) == 0
    ocfg = write_config(tmp_path, {
        "command": "oracle",
        "oracle": {"target": "profile", "m": 0.0,
                   "cuts": [0.25, 0.5, 0.75], "K": 80},
        "compare": {"reference": str(out), "anchor": 0.5}}, "o.json")
    oout = tmp_path / "oracle.csv"
    assert main(["--config", ocfg, "--output", str(oout)]) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("max_abs_diff=")
    assert float(captured.split("=")[1]) < 0.05
    assert oout.read_text().startswith("# method=oracle")


def test_exit_code_2_on_config_errors(tmp_path, capsys):
    out = str(tmp_path / "x.csv")
    bad = write_config(tmp_path, {"command": "nope"})
    assert main(["--config", bad, "--output", out]) == 2
    assert main(["--config", str(tmp_path / "missing.json"),
                 "--output", out]) == 2
    notjson = tmp_path / "broken.json"
    notjson.write_text("{")
    assert main(["--config", str(notjson), "--output", out]) == 2
    # incommensurate cut without the override flag
    inc = write_config(tmp_path, {
        "command": "entropy-profile", "model": {"type": "massless"},
        "s_F": 6, "cuts": [0.45]}, "inc.json")
    assert main(["--config", inc, "--output", out]) == 2


def test_incommensurate_override(tmp_path):
    cfg = write_config(tmp_path, {
        "command": "entropy-profile", "model": {"type": "massless"},
        "s_F": 6, "cuts": [0.45]})
    out = tmp_path / "p.csv"
    with pytest.warns(UserWarning):
        code = main(["--config", cfg, "--output", str(out),
                     "--allow-incommensurate"])
    assert code == 0


def test_exit_code_4_on_budget(tmp_path):
    cfg = write_config(tmp_path, {
        "command": "entropy-profile", "model": {"type": "massless"},
        "s_F": 6, "cuts": [0.5]})
    out = str(tmp_path / "x.csv")
    assert main(["--config", cfg, "--output", out, "--budget", "2"]) == 4
