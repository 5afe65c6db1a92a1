"""Command line front end: single runs, sweeps, dissemination benchmarks.

Configuration comes from an optional flat key=value file plus flag overrides;
flags win. Keys match the flag names (lambda, cycles, warmup, ...).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .core import ConfigError
from .harness import (ExperimentConfig, csv_text, resolve, run_dissemination,
                      run_single, run_sweep, write_csv)
from .kernels import BACKEND_NAME

CONFIG_KEYS = {
    "protocol": str,
    "mode": str,
    "n": int,
    "c": int,
    "ell": int,
    "q": int,
    "update": str,
    "lambda": float,
    "cycles": int,
    "seed": int,
    "warmup": int,
    "partial_decoding": bool,
    "source_fallback": str,
    "trials": int,
}

# config-file / flag name -> ExperimentConfig field
FIELD_OF = {
    "protocol": "protocol",
    "mode": "mode",
    "n": "n",
    "c": "c",
    "ell": "ell",
    "q": "q",
    "update": "update_kind",
    "lambda": "lam",
    "cycles": "num_cycles",
    "seed": "seed",
    "warmup": "warmup_cycles",
    "partial_decoding": "partial_decoding",
    "source_fallback": "source_fallback",
    "trials": "trials",
}


def parse_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
            key, _, val = line.partition("=")
            key = key.strip().lower().replace("-", "_")
            val = val.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, val)
    return values


def _coerce(key: str, val: str):
    typ = CONFIG_KEYS[key]
    if typ is bool:
        low = val.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}={val!r}: expected a boolean")
    try:
        return typ(val)
    except ValueError:
        raise ConfigError(f"{key}={val!r}: expected {typ.__name__}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}")


def _add_common(p: argparse.ArgumentParser, multi_n: bool):
    p.add_argument("--config", help="flat key=value config file")
    if multi_n:
        p.add_argument("--n", type=_int_list, help="network sizes, comma separated")
        p.add_argument("--seed", type=_int_list,
                       help="seeds, comma separated (default 0,1,2,3,4)")
    else:
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=int)
    p.add_argument("--protocol", choices=("interleave", "rlc-push", "rlc-pull"))
    p.add_argument("--mode", choices=("single-file", "multi-file", "dissemination-only"))
    p.add_argument("--c", type=int)
    p.add_argument("--ell", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--update", choices=("bernoulli", "every", "never"))
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--cycles", type=int)
    p.add_argument("--warmup", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--partial-decoding", action="store_true", default=None)
    p.add_argument("--source-fallback", choices=("fallback", "recycle"))
    p.add_argument("--out", help="CSV output path (default: print to stdout)")
    p.add_argument("--check-bounds", action="store_true",
                   help="exit nonzero if any run's age exceeds the analytic bound")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="agegossip",
        description="Version-age gossip simulator (file slicing and random "
                    f"linear coding); active kernel backend: {BACKEND_NAME}")
    sub = ap.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("single", help="one seeded run")
    _add_common(p1, multi_n=False)
    p1.add_argument("--trace", help="write a per-tick tick,node,file,x,y CSV here")

    p2 = sub.add_parser("sweep", help="grid of runs over n and seeds")
    _add_common(p2, multi_n=True)
    p2.add_argument("--jobs", type=int, default=1,
                    help="parallel worker processes (output is order-stable)")

    p3 = sub.add_parser("dissem", help="dissemination-time benchmark")
    _add_common(p3, multi_n=True)
    return ap


def _build_config(args, mode_default=None) -> ExperimentConfig:
    values = parse_config_file(args.config) if args.config else {}
    for key, fieldname in FIELD_OF.items():
        flag = getattr(args, "lam" if key == "lambda" else key, None)
        if flag is not None:
            values[key] = flag
    cfg = ExperimentConfig()
    for key, val in values.items():
        if key in ("n", "seed") and isinstance(val, list):
            continue  # sweep lists are handled by the caller
        cfg = replace(cfg, **{FIELD_OF[key]: val})
    if mode_default is not None and "mode" not in values:
        cfg = replace(cfg, mode=mode_default)
    return cfg


def _emit(summaries, out):
    if out:
        write_csv(out, summaries)
    else:
        sys.stdout.write(csv_text(summaries))


def _check_bounds(args, summaries) -> int:
    if args.check_bounds and not all(s.bound_satisfied for s in summaries):
        bad = [s for s in summaries if not s.bound_satisfied]
        print(f"bound check FAILED for {len(bad)} run(s)", file=sys.stderr)
        return 1
    return 0


def _as_list(value, default):
    if value is None:
        return default
    return value if isinstance(value, list) else [value]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "single":
            cfg = _build_config(args)
            summary = run_single(cfg, trace_path=args.trace)
            _emit([summary], args.out)
            print(f"done: n={summary.config.n} seed={summary.config.seed} "
                  f"avg_age={summary.avg_age} wall={summary.wall_time:.2f}s",
                  file=sys.stderr)
            return _check_bounds(args, [summary])

        if args.command == "sweep":
            cfg = _build_config(args)
            ns = _as_list(args.n, [cfg.n])
            seeds = _as_list(args.seed, [0, 1, 2, 3, 4])
            summaries = run_sweep(cfg, ns, seeds, out_path=args.out, jobs=args.jobs)
            if not args.out:
                sys.stdout.write(csv_text(summaries))
            return _check_bounds(args, summaries)

        if args.command == "dissem":
            cfg = _build_config(args, mode_default="dissemination-only")
            ns = _as_list(args.n, [cfg.n])
            seeds = _as_list(args.seed, [cfg.seed])
            summaries = []
            for n in sorted(set(ns)):
                for seed in sorted(set(seeds)):
                    summaries.append(run_dissemination(
                        resolve(replace(cfg, n=n, seed=seed))))
            _emit(summaries, args.out)
            return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
