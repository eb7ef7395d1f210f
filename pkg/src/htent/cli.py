"""Batch command-line driver.

Reads a single JSON run configuration, executes one command, and writes a
CSV table.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure, 4 evaluation budget exceeded.  All floats are written with 17
significant digits so results round-trip exactly.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .cache import CacheStore
from .entanglement import fourier_spectrum
from .errors import (BudgetExceededError, ConfigError, SingularSplitError,
                     UnphysicalStateError)
from .fock import enumerate_full_basis
from .models import Model, ModelParams
from .pipeline import (build_hamiltonian, entropy_profile, oracle_profile,
                       oracle_quench, quench_series, shift_align)
from .splitting import CutBC
from .states import decompose

_MODEL_NAMES = {
    "massless": Model.MASSLESS_FB,
    "massive": Model.MASSIVE_FB,
    "sine_gordon": Model.SINE_GORDON,
}


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _model_params(cfg: dict) -> ModelParams:
    try:
        model = _MODEL_NAMES[cfg.get("type", "massless")]
    except KeyError:
        raise ConfigError(f"unknown model type {cfg.get('type')!r}")
    return ModelParams(model, L=cfg.get("L", 1.0), m=cfg.get("m", 0.0),
                       lam=cfg.get("lambda", 0.0),
                       M_soliton=cfg.get("M_soliton", 0.0))


def _cuts(cfg: dict, s_F: int) -> list[float]:
    cuts = cfg.get("cuts", "all")
    if cuts == "all":
        return [n / s_F for n in range(1, s_F)]
    return [float(c) for c in cuts]


def _write_csv(path: str, header: list[str], rows, comment: str | None = None
               ) -> None:
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else _fmt(c)
                             for c in row])


def _profile_rows(records, alphas):
    header = ["cut_fraction", "S_vN"] + \
        [f"S_renyi_{a:g}" for a in alphas] + \
        ["mutual_info", "log_negativity", "iso_defect"]
    rows = []
    for r in records:
        rows.append([r.cut_position, r.S_vN]
                    + [r.S_renyi[a] for a in alphas]
                    + [r.mutual_information, r.log_negativity, r.iso_defect])
    return header, rows


def _read_series(path: str) -> list[tuple[float, float]]:
    out = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                continue
            parts = line.strip().split(",")
            try:
                out.append((float(parts[0]), float(parts[1])))
            except (ValueError, IndexError):
                continue  # header or blank line
    if not out:
        raise ConfigError(f"{path}: no numeric (x, y) rows found")
    return out


def _compare(cfg: dict, out_path: str) -> None:
    ref = _read_series(cfg["reference"])
    here = _read_series(out_path)
    anchor = float(cfg.get("anchor", 0.5))
    shifted = shift_align(ref, here, anchor)
    dref = dict(ref)
    diffs = [abs(y - dref[x]) for x, y in shifted if x in dref]
    print(f"max_abs_diff={_fmt(max(diffs))}")


def run(config: dict, output: str, cache_dir: str | None = None,
        budget: int = 64, allow_incommensurate: bool = False) -> None:
    command = config.get("command")
    cache = CacheStore(cache_dir) if cache_dir else None
    alphas = tuple(config.get("alphas", ()))

    if command == "spectrum":
        params = _model_params(config.get("model", {}))
        basis = enumerate_full_basis(int(config["s_F"]))
        dec = decompose(build_hamiltonian(basis, params))
        _write_csv(output, ["index", "energy"],
                   list(enumerate(dec.eigenvalues)))

    elif command in ("entropy-profile", "thermal"):
        params = _model_params(config.get("model", {}))
        s_F = int(config["s_F"])
        T = config.get("temperature")
        if command == "thermal" and T is None:
            raise ConfigError("thermal command needs a temperature")
        bc = CutBC(config.get("cut_bc", "neumann"))
        recs = entropy_profile(
            params, s_F, _cuts(config, s_F), T=T, alphas=alphas, bc=bc,
            negativity=bool(config.get("negativity", T is None)),
            budget=budget, cache=cache,
            allow_incommensurate=allow_incommensurate)
        header, rows = _profile_rows(recs, alphas)
        _write_csv(output, header, rows)

    elif command == "quench":
        q = config["quench"]
        pre = _model_params(q["pre"])
        post = _model_params(q["post"])
        s_F = int(config["s_F"])
        times = np.linspace(0.0, float(q["t_max"]), int(q["steps"]))
        series = quench_series(pre, post, s_F, float(q["cut"]), times,
                               bc=CutBC(config.get("cut_bc", "neumann")),
                               budget=budget, cache=cache,
                               allow_incommensurate=allow_incommensurate)
        _write_csv(output, ["t", "S_vN", "iso_defect"], series)

    elif command == "oracle":
        o = config["oracle"]
        K = int(o.get("K", 200))
        L = float(o.get("L", 1.0))
        if o.get("target", "profile") == "profile":
            fractions = o.get("cuts") or _cuts(config, int(o.get("s_F", 12)))
            recs = oracle_profile(float(o.get("m", 0.0)), fractions, K=K, L=L,
                                  T=float(o.get("temperature", 0.0)),
                                  alphas=alphas)
            header, rows = _profile_rows(recs, alphas)
            _write_csv(output, header, rows, comment="method=oracle")
        else:
            times = np.linspace(0.0, float(o["t_max"]), int(o["steps"]))
            series = oracle_quench(float(o["m0"]), float(o["m"]),
                                   float(o["cut"]), times, K=K, L=L,
                                   T0=float(o.get("T0", 0.0)))
            _write_csv(output, ["t", "S_vN", "iso_defect"], series,
                       comment="method=oracle")

    elif command == "fourier":
        series = _read_series(config["fourier"]["input"])
        spec = fourier_spectrum(series)
        _write_csv(output, ["omega", "amplitude"], spec)

    else:
        raise ConfigError(f"unknown command {command!r}")

    if "compare" in config:
        _compare(config["compare"], output)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="htent",
        description="Entanglement measures from truncated Hamiltonians")
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--output", required=True, help="CSV output path")
    ap.add_argument("--cache", default=None, help="binary cache directory")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--allow-incommensurate", action="store_true")
    ap.add_argument("--budget", type=int, default=64,
                    help="max derivative order per overlap element")
    args = ap.parse_args(argv)

    if args.threads:
        try:
            import numba
            numba.set_num_threads(args.threads)
        except (ImportError, ValueError):
            pass

    try:
        cfg_path = Path(args.config)
        config = json.loads(cfg_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        run(config, args.output, cache_dir=args.cache, budget=args.budget,
            allow_incommensurate=args.allow_incommensurate)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SingularSplitError, UnphysicalStateError,
            np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
