"""Command-line entry point: ``gcca fit``, ``gcca simulate`` and ``gcca oracle-check``.

Exit codes: 0 success, 1 usage/configuration, 2 data (I/O, parsing,
validation), 3 model (no usable fit).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .data import read_csv
from .errors import DataError, GccaError, ModelError
from .estimation import GccaConfig, fit
from .evalmetrics import (TABLE2_FIELDS, TABLE3_FIELDS, convergence_study, format_tables,
                          run_study, table_csv)
from .synthgen import SimConfig
from .tuning import scores_to_csv

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_USAGE, EXIT_DATA, EXIT_MODEL = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(s: str):
    try:
        return [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}")


def _int_list(s: str):
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {s!r}")


def _emit_set(s: str):
    out = {v.strip() for v in s.split(",") if v.strip()}
    bad = out - {"json", "csv", "table"}
    if bad:
        raise argparse.ArgumentTypeError(f"unknown emit target(s): {sorted(bad)}")
    return out


def _add_gcca_flags(p):
    g = p.add_argument_group("model")
    g.add_argument("--epsilon", type=float, help="correlation threshold (default 0.2)")
    g.add_argument("--lambdas", type=_float_list,
                   help="comma-separated lambda grid (default 0.5,0.55,...,0.9)")
    g.add_argument("--max-subgraphs", type=int, help="maximum number of bicliques (default 5)")
    g.add_argument("--min-block-mean", type=float,
                   help="discard bicliques whose mean |r| is at or below this (default epsilon)")
    g.add_argument("--seed", type=int, help="random seed (simulate only affects sampling)")
    p.add_argument("--config", type=Path, help="TOML or JSON file with [gcca]/[simulation] tables")
    p.add_argument("-o", "--output-dir", type=Path, default=Path("gcca_out"))
    p.add_argument("--emit", type=_emit_set, default={"json", "csv"},
                   help="comma-separated subset of json,csv,table (default json,csv)")
    p.add_argument("--emit-table", action="store_true", help="same as adding table to --emit")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gcca", description="graph canonical correlation analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser,
                               metavar="{fit,simulate}")

    p_fit = sub.add_parser("fit", help="fit gCCA to two aligned CSV files")
    p_fit.add_argument("x_csv", type=Path)
    p_fit.add_argument("y_csv", type=Path)
    _add_gcca_flags(p_fit)

    p_sim = sub.add_parser("simulate", help="run a Monte-Carlo simulation study")
    p_sim.add_argument("sim_config", type=Path)
    _add_gcca_flags(p_sim)
    p_sim.add_argument("--replicates", type=int)
    p_sim.add_argument("--convergence", type=_int_list,
                       help="comma-separated sample sizes for the RMSE-vs-n slope study")
    p_sim.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                       help="worker processes (results do not depend on this)")

    # no help= keeps it out of the subcommand listing
    p_or = sub.add_parser("oracle-check")
    p_or.add_argument("--instances", type=int, default=100)
    p_or.add_argument("--lambda", dest="lam", type=float, default=0.75)
    p_or.add_argument("--seed", type=int, default=0)
    return parser


def load_config_file(path) -> dict:
    path = Path(path)
    try:
        text = path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    try:
        if path.suffix == ".json":
            return json.loads(text)
        return tomllib.loads(text.decode("utf-8"))
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot parse config {path}: {exc}")


def _merge(defaults: dict, file_values: dict, flags: dict, allowed) -> dict:
    unknown = set(file_values) - set(allowed)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    out = dict(defaults)
    out.update(file_values)
    out.update({k: v for k, v in flags.items() if v is not None})
    return out


def resolve_gcca(args, file_cfg: dict) -> GccaConfig:
    """CLI flag > config file > default."""
    allowed = [f.name for f in fields(GccaConfig)]
    flags = {"epsilon": args.epsilon, "lambdas": args.lambdas,
             "max_subgraphs": args.max_subgraphs, "min_block_mean": args.min_block_mean}
    merged = _merge({}, file_cfg.get("gcca", {}), flags, allowed)
    try:
        cfg = GccaConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))
    if not 0 < cfg.epsilon < 1:
        raise UsageError(f"epsilon must lie in (0, 1), got {cfg.epsilon}")
    if not cfg.lambdas or any(not 0.5 <= l <= 1 for l in cfg.lambdas):
        raise UsageError("lambdas must be a nonempty list within [0.5, 1]")
    if cfg.max_subgraphs < 1:
        raise UsageError("max_subgraphs must be >= 1")
    if not 0 <= cfg.block_floor < 1:
        raise UsageError("min_block_mean must lie in [0, 1)")
    return cfg


def _manifest(command: str, extra: dict) -> dict:
    return {"command": command, "version": __version__, **extra}


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def cmd_fit(args) -> int:
    file_cfg = load_config_file(args.config) if args.config else {}
    cfg = resolve_gcca(args, file_cfg)
    x = read_csv(args.x_csv)
    y = read_csv(args.y_csv)
    if x.n != y.n:
        raise DataError(f"row counts differ: {args.x_csv} has {x.n} rows, "
                        f"{args.y_csv} has {y.n} rows")
    result = fit(x, y, cfg)
    out = args.output_dir
    out.mkdir(parents=True, exist_ok=True)
    seed = args.seed if args.seed is not None else file_cfg.get("seed", 0)
    _write(out / "manifest.json", json.dumps(_manifest("fit", {
        "x_csv": str(args.x_csv), "y_csv": str(args.y_csv), "seed": seed,
        "gcca": cfg.to_dict()}), indent=2, sort_keys=True))
    if "json" in args.emit:
        _write(out / "fit.json", result.to_json())
    if "csv" in args.emit:
        _write(out / "lambda_scores.csv", scores_to_csv(result.diagnostics))
        _write(out / "heatmap.csv", result.heatmap_csv())
    if "table" in args.emit:
        print(f"lambda*   {result.lambda_star:g}")
        print(f"|I_X|     {len(result.i_x)}")
        print(f"|I_Y|     {len(result.i_y)}")
        print(f"rho_hat   {result.rho_hat:.6f}")
        print(f"bicliques {[(len(b.u), len(b.v)) for b in result.subgraphs]}")
    return 0


def resolve_sim(args, file_cfg: dict) -> SimConfig:
    allowed = [f.name for f in fields(SimConfig)]
    flags = {"seed": args.seed, "replicates": args.replicates}
    merged = _merge({}, file_cfg.get("simulation", {}), flags, allowed)
    try:
        return SimConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc))


def cmd_simulate(args) -> int:
    file_cfg = load_config_file(args.sim_config)
    sim = resolve_sim(args, file_cfg)
    cfg = resolve_gcca(args, file_cfg)
    workers = max(1, args.threads)
    out = args.output_dir
    out.mkdir(parents=True, exist_ok=True)
    report = run_study(sim, cfg, workers)
    manifest = {"simulation": sim.to_dict(), "gcca": cfg.to_dict(), "seed": sim.seed}
    if "json" in args.emit:
        _write(out / "report.json", report.to_json())
    if "csv" in args.emit:
        _write(out / "table2.csv", table_csv([report], TABLE2_FIELDS))
        _write(out / "table3.csv", table_csv([report], TABLE3_FIELDS))
    if args.convergence:
        conv = convergence_study(sim, args.convergence, cfg, workers)
        manifest["convergence_n"] = conv.n_values
        _write(out / "convergence.json", json.dumps(conv.to_dict(), indent=2, sort_keys=True))
    _write(out / "manifest.json", json.dumps(_manifest("simulate", manifest),
                                             indent=2, sort_keys=True))
    if "table" in args.emit:
        print(format_tables([report]))
        if args.convergence:
            for n, e in zip(conv.n_values, conv.rmse):
                print(f"n={n:<6d} rmse={e:.4e}")
            print(f"log-log slope {conv.slope:.3f}")
    return 0


def cmd_oracle_check(args) -> int:
    from .oracle import agreement_check

    agree, total, fig2 = agreement_check(args.instances, args.lam, args.seed)
    ok = agree >= 0.95 * total and fig2
    print(f"greedy == exhaustive: {agree}/{total} {'PASS' if agree >= 0.95 * total else 'FAIL'}")
    print(f"figure-2 golden instance: {'PASS' if fig2 else 'FAIL'}")
    return 0 if ok else EXIT_MODEL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "emit_table", False):
        args.emit = set(args.emit) | {"table"}
    handler = {"fit": cmd_fit, "simulate": cmd_simulate, "oracle-check": cmd_oracle_check}
    try:
        return handler[args.command](args)
    except UsageError as exc:
        print(f"gcca: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"gcca: data error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelError as exc:
        print(f"gcca: model error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except GccaError as exc:
        print(f"gcca: usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
