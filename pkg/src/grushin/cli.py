"""Command-line front end: ``grushin transform|evolve|kernel|verify``.

Exit codes: 0 success, 1 I/O failure, 2 invalid configuration or arguments,
3 numerical non-convergence, 4 verification rows failed. Failures print one
line to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .calculus import SpectralSymbol, functional_calculus, sample_psi
from .grids import ConfigError, GridFunction, GrushinConfig, dual_norm, l2_norm
from .heat_kernel import HeatKernelQuery, heat_kernel, kernel_on_grid
from .io import read_config, read_dual, read_grid, write_dual, write_grid
from .quadrature import NonConvergenceError
from .testfunctions import gaussian
from .transforms import get_plan
from .verify import run_verification

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_NUMERIC, EXIT_CHECKS = 0, 1, 2, 3, 4


class UsageError(ValueError):
    """Bad command-line values (mapped to exit code 2)."""


def _config(args) -> GrushinConfig:
    if getattr(args, "config", None):
        return read_config(args.config)
    return GrushinConfig()


def _out_dir(args) -> Path:
    out = Path(getattr(args, "out", None) or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def _builtin(source: str, cfg: GrushinConfig) -> GridFunction:
    parts = source.split(":")[1:]
    if parts == ["gaussian"]:
        return gaussian(cfg, 1.3, 2.0)
    if len(parts) == 3 and parts[0] == "psi":
        k = [int(v) for v in parts[1].split(",")]
        m = [int(v) for v in parts[2].split(",")]
        if len(k) != cfg.d_prime or len(m) != cfg.d_doubleprime or not any(m):
            raise UsageError("builtin:psi:<k>:<m> needs d' Hermite indices and d'' nonzero lattice indices")
        return sample_psi(cfg, k, np.array(m) * cfg.dxi)
    raise UsageError(f"unknown builtin input {source!r} (use builtin:gaussian or builtin:psi:<k>:<m>)")


def _read_input(source: str, cfg: GrushinConfig, dual: bool):
    if source.startswith("builtin:"):
        g = _builtin(source, cfg)
        return get_plan(cfg).forward(g) if dual else g
    return read_dual(source, cfg) if dual else read_grid(source, cfg)


# -- commands ----------------------------------------------------------------------

def cmd_transform(args) -> int:
    cfg = _config(args)
    plan = get_plan(cfg)
    out = Path(args.output) if args.output else _out_dir(args) / (
        "dual.csv" if args.direction == "forward" else "grid.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.direction == "forward":
        f = _read_input(args.input, cfg, dual=False)
        F = plan.forward(f)
        back = plan.inverse(F)
        write_dual(out, F)
        summary = {"direction": "forward", "input_norm": l2_norm(f), "output_norm": dual_norm(F),
                   "roundtrip_max_abs": float(np.max(np.abs(back.values - f.values))),
                   "tail_fraction": plan.tail_fraction(F)}
    else:
        F = _read_input(args.input, cfg, dual=True)
        f = plan.inverse(F)
        again = plan.forward(f)
        write_grid(out, f)
        summary = {"direction": "inverse", "input_norm": dual_norm(F), "output_norm": l2_norm(f),
                   "roundtrip_max_abs": float(max(np.max(np.abs(again.values - F.values)),
                                                  np.max(np.abs(again.zero_slice - F.zero_slice))))}
    summary["norm_ratio"] = summary["output_norm"] / summary["input_norm"] if summary["input_norm"] else float("nan")
    summary["output"] = str(out)
    _write_json(out.with_name(out.stem + "_summary.json"), summary)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def _symbol(text: str) -> SpectralSymbol | None:
    if text == "heat":
        return None
    if text == "identity":
        return SpectralSymbol.identity()
    if text.startswith("projection:"):
        try:
            cut = float(text.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad projection level in {text!r}") from exc
        if not cut >= 0:
            raise UsageError("projection level must be >= 0")
        return SpectralSymbol.projection(cut)
    raise UsageError(f"unknown symbol {text!r} (heat, identity or projection:<level>)")


def cmd_evolve(args) -> int:
    ts = _floats(args.t)
    if not ts or any(not (t > 0 and np.isfinite(t)) for t in ts):
        raise UsageError("all times must be positive and finite")
    base = _symbol(args.symbol)
    cfg = _config(args)
    plan = get_plan(cfg)
    f = _read_input(args.input, cfg, dual=False)
    out = _out_dir(args)
    n0 = l2_norm(f)
    rows = []
    for t in ts:
        s = SpectralSymbol.heat(t) if base is None else base * SpectralSymbol.heat(t)
        g = functional_calculus(f, s, plan)
        path = out / f"evolved_t{t:g}.csv"
        write_grid(path, g)
        rows.append({"t": t, "norm": l2_norm(g), "contraction_ratio": l2_norm(g) / n0 if n0 else float("nan"),
                     "file": path.name})
    report = {"symbol": args.symbol, "input_norm": n0, "runs": rows}
    _write_json(out / "report.json", report)
    print(f"{'t':>10} {'norm':>14} {'ratio':>10}")
    for r in rows:
        print(f"{r['t']:>10.4g} {r['norm']:>14.6e} {r['contraction_ratio']:>10.6f}")
    return EXIT_OK


def _parse_slice(text: str, dim: int) -> tuple[int, np.ndarray]:
    try:
        axis, rng = text.split("=")
        lo, hi, n = rng.split(":")
        pts = np.linspace(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise UsageError(f"grid slice must look like y2=-3:3:61, got {text!r}") from exc
    if not axis.startswith("y") or not axis[1:].isdigit() or not 1 <= int(axis[1:]) <= dim:
        raise UsageError(f"slice axis must be one of y1..y{dim}")
    return int(axis[1:]) - 1, pts


def cmd_kernel(args) -> int:
    x, y = np.array(_floats(args.x)), np.array(_floats(args.y))
    dp = args.d_prime
    query = HeatKernelQuery(args.t, x, y, dp, method=args.method)
    out = Path(args.output) if args.output else _out_dir(args) / "kernel.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    if args.grid_slice:
        axis, pts = _parse_slice(args.grid_slice, len(x))
        ys = np.repeat(y[None], len(pts), 0)
        ys[:, axis] = pts
        if axis < dp:
            vals = kernel_on_grid(args.t, x, ys[:, :dp], y[None, dp:], dp)[:, 0]
        else:
            vals = kernel_on_grid(args.t, x, y[None, :dp], ys[:, dp:], dp)[0]
        rows = [(f"y{axis + 1}", float(c), float(v)) for c, v in zip(pts, vals)]
        header = ["axis", "coordinate", "p_t"]
    else:
        rows = [(args.method, heat_kernel(query))]
        header = ["method", "p_t"]
    with out.open("w") as fh:
        fh.write(",".join(header) + "\n")
        for r in rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in r) + "\n")
    if not args.grid_slice:
        print(f"p_t = {rows[0][1]!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    if not args.tighten > 0:
        raise UsageError("--tighten must be positive")
    report = run_verification(cfg, seed=getattr(args, "seed", 0), only=args.only or None,
                              tolerance_scale=1.0 / args.tighten, threads=getattr(args, "threads", 1))
    out = _out_dir(args)
    (out / "report.json").write_text(report.to_json() + "\n")
    table = report.table()
    (out / "report.txt").write_text(table + "\n")
    print(table)
    return EXIT_OK if report.passed else EXIT_CHECKS


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON configuration file")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomised checks")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads")

    parser = argparse.ArgumentParser(prog="grushin", parents=[common],
                                     description="Grushin transform, semigroup and heat kernel tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="forward or inverse transform of a data file")
    p.add_argument("direction", choices=["forward", "inverse"])
    p.add_argument("--in", dest="input", required=True,
                   help="data file (.csv or .json) or builtin:gaussian / builtin:psi:<k>:<m>")
    p.add_argument("--output", help="output file (default: <out>/dual.csv or <out>/grid.csv)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("evolve", parents=[common], help="apply exp(-tG), optionally composed with a symbol")
    p.add_argument("--t", required=True, help="comma-separated times")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--symbol", default="heat", help="heat | identity | projection:<level>")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("kernel", parents=[common], help="evaluate the heat kernel")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", required=True, help="comma-separated coordinates")
    p.add_argument("--y", required=True, help="comma-separated coordinates")
    p.add_argument("--d-prime", type=int, default=1)
    p.add_argument("--method", choices=["fourier", "hankel"], default="fourier")
    p.add_argument("--grid-slice", help="vary one coordinate of y, e.g. y2=-4:4:81")
    p.add_argument("--output", help="CSV file (default: <out>/kernel.csv)")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--only", action="append", help="group (special, transform, calculus, heat) or check name")
    p.add_argument("--tighten", type=float, default=1.0, help="divide every tolerance by this factor")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError, ValueError) as exc:
        print(f"grushin: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"grushin: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"grushin: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
