"""Experiment configuration, run drivers, sweeps, and CSV emission."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .core import ConfigError, make_update_process
from .cycles import (MultiFileRun, SingleFileRun, age_bound,
                     interleave_dissemination_trial, rlc_dissemination_trial)
from .rlc import is_prime, smallest_prime_ge

PROTOCOLS = ("interleave", "rlc-push", "rlc-pull")
MODES = ("single-file", "multi-file", "dissemination-only")

CSV_HEADER = ("protocol,mode,n,c,ell,q,lambda,seed,cycles,warmup,"
              "avg_age,avg_age_per_n,p_hat,p_hat_se,bound,"
              "dissem_median,dissem_mean,dissem_p95")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one run. None fields are filled by resolve()."""

    protocol: str = "interleave"
    mode: str = "single-file"
    n: int = 64
    c: int | None = None
    ell: int | None = None
    q: int | None = None
    update_kind: str = "bernoulli"
    lam: float = 0.7
    num_cycles: int | None = None
    seed: int = 0
    warmup_cycles: int = 1
    partial_decoding: bool = False
    source_fallback: str = "fallback"
    trials: int = 100


def resolve(cfg: ExperimentConfig) -> ExperimentConfig:
    """Fill defaulted fields and reject inconsistent combinations."""
    if cfg.protocol not in PROTOCOLS:
        raise ConfigError(f"protocol={cfg.protocol!r} (want one of {PROTOCOLS})")
    if cfg.mode not in MODES:
        raise ConfigError(f"mode={cfg.mode!r} (want one of {MODES})")
    if cfg.n < 2:
        raise ConfigError(f"n={cfg.n}: need at least two nodes")
    if cfg.protocol == "interleave" and cfg.mode == "multi-file":
        raise ConfigError("protocol=interleave cannot run mode=multi-file; "
                          "use mode=single-file or mode=dissemination-only")
    if cfg.protocol.startswith("rlc") and cfg.mode == "single-file":
        raise ConfigError(f"protocol={cfg.protocol} cannot run mode=single-file; "
                          "use mode=multi-file or mode=dissemination-only")

    ell = cfg.ell
    q = cfg.q
    if cfg.protocol == "interleave":
        if ell is None:
            ell = max(1, int(math.floor(math.log2(cfg.n))))
        if ell < 1:
            raise ConfigError(f"ell={ell}: need at least one piece")
        q = None
    else:
        if q is None:
            q = smallest_prime_ge(cfg.n)
        if not is_prime(q) or q < cfg.n:
            raise ConfigError(f"q={q}: field size must be a prime >= n={cfg.n}")
        ell = None

    if cfg.mode == "dissemination-only":
        if cfg.trials < 1:
            raise ConfigError(f"trials={cfg.trials}: need at least one trial")
        return replace(cfg, c=None, ell=ell, q=q, num_cycles=None)

    c = cfg.c if cfg.c is not None else (18 if cfg.mode == "single-file" else 6)
    if c < 1:
        raise ConfigError(f"c={c}: cycle parameter must be >= 1")
    cycles = cfg.num_cycles
    if cycles is None:
        cycles = 200 if cfg.mode == "single-file" else 100
    if cycles < 1:
        raise ConfigError(f"cycles={cycles}: need at least one cycle")
    if not 0 <= cfg.warmup_cycles < cycles:
        raise ConfigError(
            f"warmup_cycles={cfg.warmup_cycles} must be < cycles={cycles}")
    if cfg.update_kind == "bernoulli" and not 0.0 <= cfg.lam <= 1.0:
        raise ConfigError(f"lambda={cfg.lam} must be in [0, 1]")
    if cfg.source_fallback not in ("fallback", "recycle"):
        raise ConfigError(f"source_fallback={cfg.source_fallback!r} "
                          "(want fallback or recycle)")
    return replace(cfg, c=c, ell=ell, q=q, num_cycles=cycles)


@dataclass
class RunSummary:
    """One CSV row's worth of results plus non-serialized diagnostics."""

    config: ExperimentConfig
    avg_age: float | None = None
    avg_age_per_n: float | None = None
    p_hat: float | None = None
    p_hat_se: float | None = None
    bound: float | None = None
    dissem_median: float | None = None
    dissem_mean: float | None = None
    dissem_p95: float | None = None
    wall_time: float = 0.0
    bound_satisfied: bool = True

    def csv_row(self) -> str:
        cfg = self.config
        dissem = cfg.mode == "dissemination-only"
        cells = [
            cfg.protocol,
            cfg.mode,
            _fmt(cfg.n),
            _fmt(cfg.c),
            _fmt(cfg.ell),
            _fmt(cfg.q),
            "" if dissem else _fmt(_effective_lambda(cfg)),
            _fmt(cfg.seed),
            _fmt(cfg.num_cycles),
            "" if dissem else _fmt(cfg.warmup_cycles),
            _fmt(self.avg_age),
            _fmt(self.avg_age_per_n),
            _fmt(self.p_hat),
            _fmt(self.p_hat_se),
            _fmt(self.bound),
            _fmt(self.dissem_median),
            _fmt(self.dissem_mean),
            _fmt(self.dissem_p95),
        ]
        return ",".join(cells)


def _effective_lambda(cfg: ExperimentConfig) -> float:
    if cfg.update_kind == "every":
        return 1.0
    if cfg.update_kind == "never":
        return 0.0
    return cfg.lam


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def run_single(cfg: ExperimentConfig, trace_path: str | None = None,
               backend=None) -> RunSummary:
    """Execute one full cycle-scheme run; deterministic given the seed."""
    cfg = resolve(cfg)
    if cfg.mode == "dissemination-only":
        return run_dissemination(cfg, backend=backend)
    update = make_update_process(cfg.update_kind, cfg.lam)
    t0 = time.perf_counter()
    if cfg.mode == "single-file":
        run = SingleFileRun(cfg.n, cfg.ell, cfg.c, update, cfg.num_cycles,
                            cfg.seed, warmup_cycles=cfg.warmup_cycles,
                            source_fallback=cfg.source_fallback,
                            trace=trace_path is not None, backend=backend)
    else:
        run = MultiFileRun(cfg.n, cfg.c, cfg.q, update, cfg.num_cycles, cfg.seed,
                           variant=cfg.protocol.split("-", 1)[1],
                           warmup_cycles=cfg.warmup_cycles,
                           partial_decoding=cfg.partial_decoding,
                           trace=trace_path is not None, backend=backend)
    stats = run.run()
    wall = time.perf_counter() - t0

    cycle_len = run.plan.cycle_len_slots
    p_eff = stats.p_hat + 3.0 * stats.p_hat_se
    bound = age_bound(cycle_len, p_eff) if p_eff < 1.0 else None
    summary = RunSummary(
        config=cfg,
        avg_age=stats.avg_age,
        avg_age_per_n=stats.avg_age / cfg.n,
        p_hat=stats.p_hat,
        p_hat_se=stats.p_hat_se,
        bound=bound,
        wall_time=wall,
    )
    if bound is not None:
        summary.bound_satisfied = bool(stats.per_entity_avg.max() <= bound)
    if trace_path is not None:
        write_trace(trace_path, stats.trace)
    return summary


def dissemination_times(cfg: ExperimentConfig, backend=None) -> np.ndarray:
    """Raw per-trial completion ticks (for distribution-level assertions)."""
    cfg = resolve(cfg)
    if cfg.mode != "dissemination-only":
        raise ConfigError(f"mode={cfg.mode}: dissemination needs mode=dissemination-only")
    times = np.empty(cfg.trials, dtype=np.int64)
    for t in range(cfg.trials):
        if cfg.protocol == "interleave":
            times[t] = interleave_dissemination_trial(
                cfg.n, cfg.ell, cfg.seed, t,
                recycle=cfg.source_fallback == "recycle", backend=backend)
        else:
            times[t] = rlc_dissemination_trial(
                cfg.n, cfg.q, cfg.seed, t,
                variant=cfg.protocol.split("-", 1)[1], backend=backend)
    return times


def run_dissemination(cfg: ExperimentConfig, backend=None) -> RunSummary:
    """Measure ticks-to-everyone-complete over repeated fresh generations."""
    cfg = resolve(cfg)
    t0 = time.perf_counter()
    times = dissemination_times(cfg, backend=backend)
    wall = time.perf_counter() - t0
    return RunSummary(
        config=cfg,
        dissem_median=float(np.median(times)),
        dissem_mean=float(np.mean(times)),
        dissem_p95=float(np.percentile(times, 95)),
        wall_time=wall,
    )


def _sweep_constraint(protocol: str, n: int) -> None:
    if protocol == "interleave" and n & (n - 1) != 0:
        raise ConfigError(f"n={n}: interleave sweeps use powers of two")
    if protocol.startswith("rlc") and not is_prime(n):
        raise ConfigError(f"n={n}: rlc sweeps use prime network sizes")


def run_sweep(base: ExperimentConfig, n_list, seed_list,
              out_path: str | None = None, jobs: int = 1) -> list[RunSummary]:
    """One run per (n, seed); rows come back (n ascending, seed ascending)
    regardless of execution order, so parallel output equals serial output."""
    n_list = sorted(set(int(n) for n in n_list))
    seed_list = sorted(set(int(s) for s in seed_list))
    if not n_list or not seed_list:
        raise ConfigError("sweep needs at least one n and one seed")
    for n in n_list:
        _sweep_constraint(base.protocol, n)
    configs = [resolve(replace(base, n=n, seed=s)) for n in n_list for s in seed_list]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(run_single, configs))
    else:
        summaries = [run_single(c) for c in configs]
    if out_path is not None:
        write_csv(out_path, summaries)
    return summaries


def csv_text(summaries: list[RunSummary]) -> str:
    return CSV_HEADER + "\n" + "".join(s.csv_row() + "\n" for s in summaries)


def write_csv(path: str, summaries: list[RunSummary]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(summaries))


def write_trace(path: str, trace) -> None:
    """Per-tick age dump: tick,node,file,x,y with one row per (node, file)."""
    with open(path, "w", newline="") as fh:
        fh.write("tick,node,file,x,y\n")
        for tick, age, cap in trace:
            if age.ndim == 1:
                for i in range(age.shape[0]):
                    fh.write(f"{tick},{i},0,{age[i]},{cap[i]}\n")
            else:
                for i in range(age.shape[0]):
                    for f in range(age.shape[1]):
                        fh.write(f"{tick},{i},{f},{age[i, f]},{cap[i, f]}\n")
