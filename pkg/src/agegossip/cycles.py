"""Cycle-based dissemination with age accounting.

Time is carved into cycles. At each cycle start every source freezes the
version it holds (updates landing later in the cycle are withheld), all
protocol state from the previous cycle is discarded, and the network gossips
only the frozen generation until the cycle ends. Per node (and per file) we
track the per-cycle success flag, the instantaneous version age, and a
piecewise-constant ceiling that provably dominates the age: it resets to twice
the cycle length after a successful cycle and grows by one cycle length after
a failed one. The ceiling is enforced as a hard runtime invariant every tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (STREAM_CODING, STREAM_CONTACTS, STREAM_TRIAL, STREAM_UPDATES,
                   ConfigError, InvariantViolation, Rng, UpdateProcess,
                   select_targets)
from .interleave import InterleaveState
from .rlc import CodedNetworkState, is_prime


def age_bound(cycle_len: int, failure_prob: float) -> float:
    """Closed-form ceiling on expected age: L/(1-p)^2 + L/(1-p).

    cycle_len is the cycle length in slots (c for a single file, c*n for n
    files). Strictly increasing in failure_prob.
    """
    if cycle_len <= 0:
        raise ValueError(f"cycle length must be positive, got {cycle_len}")
    if not 0.0 <= failure_prob < 1.0:
        raise ValueError(f"failure probability must be in [0, 1), got {failure_prob}")
    s = 1.0 - failure_prob
    return cycle_len / (s * s) + cycle_len / s


def update_dominating(cap_prev, success_prev, cycle_len: int):
    """Next cycle's age ceiling: 2L after a success, previous + L after a failure.

    Works elementwise on arrays as well as on scalars.
    """
    return np.where(success_prev, 2 * cycle_len, cap_prev + cycle_len)


def estimate_failure_prob(success) -> tuple[float, float]:
    """Fraction of (node, file, cycle) entries that failed, with binomial SE."""
    success = np.asarray(success, dtype=bool)
    if success.size == 0:
        raise ValueError("cannot estimate failure probability from zero cycles")
    total = success.size
    p = float(total - success.sum()) / total
    se = math.sqrt(p * (1.0 - p) / total)
    return p, se


@dataclass(frozen=True)
class CyclePlan:
    """Shape of one run's timeline."""

    c: int
    mode: str  # "single-file" | "multi-file"
    n: int
    num_cycles: int
    minislots_per_slot: int = 1

    def __post_init__(self):
        if self.c < 1:
            raise ConfigError(f"cycle parameter c must be >= 1, got {self.c}")
        if self.num_cycles < 1:
            raise ConfigError(f"need at least one cycle, got {self.num_cycles}")
        if self.mode not in ("single-file", "multi-file"):
            raise ConfigError(f"unknown cycle mode {self.mode!r}")

    @property
    def cycle_len_slots(self) -> int:
        return self.c if self.mode == "single-file" else self.c * self.n

    @property
    def ticks_per_cycle(self) -> int:
        return self.cycle_len_slots * self.minislots_per_slot


@dataclass
class RunStats:
    """Everything a finished run exposes to the harness and to tests."""

    avg_age: float
    per_entity_avg: np.ndarray  # time-averaged age per node (or per node,file)
    p_hat: float
    p_hat_se: float
    success: np.ndarray
    frozen_history: np.ndarray
    cap_history: np.ndarray
    ticks: int
    trace: list = field(default_factory=list)


class SingleFileRun:
    """Single source, file sliced into ell pieces, c slots per cycle.

    Age is recorded every minislot. Node 0 is the source; its age is zero by
    definition (it always holds its own latest version) and its success flag
    is trivially set each cycle.
    """

    def __init__(self, n: int, ell: int, c: int, update: UpdateProcess,
                 num_cycles: int, seed: int, warmup_cycles: int = 1,
                 source_fallback: str = "fallback", trace: bool = False,
                 backend=None):
        if ell < 1:
            raise ConfigError(f"piece count ell must be >= 1, got {ell}")
        if source_fallback not in ("fallback", "recycle"):
            raise ConfigError(f"unknown source_fallback {source_fallback!r}")
        if not 0 <= warmup_cycles < num_cycles:
            raise ConfigError(
                f"warmup_cycles={warmup_cycles} must be < num_cycles={num_cycles}")
        self.plan = CyclePlan(c=c, mode="single-file", n=n, num_cycles=num_cycles,
                              minislots_per_slot=ell)
        self.n = n
        self.ell = ell
        self.update = update
        self.seed = seed
        self.warmup = warmup_cycles
        self.recycle = source_fallback == "recycle"
        self.trace_enabled = trace
        self.backend = backend if backend is not None else kernels.active()
        self.source = 0

    def run(self) -> RunStats:
        n, ell, c = self.n, self.ell, self.plan.c
        cycles = self.plan.num_cycles
        rng = Rng(self.seed)
        contacts = rng.substream(STREAM_CONTACTS).gen
        arrivals = self.update.sample(rng.substream(STREAM_UPDATES, 0).gen, c * cycles)

        state = InterleaveState(n, ell, source=self.source, recycle=self.recycle,
                                backend=self.backend)
        src_version = 0
        node_version = np.zeros(n, dtype=np.int64)
        cap = np.full(n, 2 * c, dtype=np.int64)
        success = np.zeros((cycles, n), dtype=bool)
        frozen_hist = np.zeros(cycles, dtype=np.int64)
        cap_hist = np.zeros((cycles, n), dtype=np.int64)
        sum_age = np.zeros(n, dtype=np.int64)
        ticks = 0
        trace = []
        tick_index = 0

        for k in range(cycles):
            frozen = src_version  # version held at the end of the previous slot
            frozen_hist[k] = frozen
            if k > 0:
                cap = update_dominating(cap, success[k - 1], c)
            cap_hist[k] = cap
            state.reset_cycle()
            complete = state.complete_mask()
            if not complete[self.source]:
                raise InvariantViolation("source must hold all pieces at cycle start")
            success[k, self.source] = True
            prev_owned = state.owned.copy()

            for s in range(c):
                for m in range(ell):
                    if not complete.all():
                        targets = select_targets(contacts, n)
                        newly = state.step_minislot(m % 2 == 0, targets)
                        if newly.any():
                            complete |= newly
                            node_version[newly] = frozen
                            success[k, newly] = True
                        # protocol invariants, enforced every minislot
                        if (state.push_received & ~state.owned).any():
                            raise InvariantViolation("push_received not a subset of owned")
                        if (prev_owned & ~state.owned).any():
                            raise InvariantViolation("owned pieces must not vanish mid-cycle")
                        prev_owned = state.owned.copy()
                    age = src_version - node_version
                    if (age > cap).any():
                        raise InvariantViolation(
                            f"age exceeded its per-cycle ceiling in cycle {k}")
                    if k >= self.warmup:
                        sum_age += age
                        ticks += 1
                    if self.trace_enabled:
                        trace.append((tick_index, age.copy(), cap.copy()))
                    tick_index += 1
                # an update starting in this slot is fully received only at the
                # slot boundary: it becomes visible in the version counter here
                if arrivals[k * c + s]:
                    src_version += 1
                    node_version[self.source] = src_version

        per_node = sum_age / ticks
        # summary metrics cover the receivers: the source holds its own latest
        # version by definition, so its zero age and trivial success are
        # bookkeeping, not protocol outcomes
        p_hat, se = estimate_failure_prob(success[self.warmup:, 1:])
        return RunStats(
            avg_age=float(sum_age[1:].sum()) / (ticks * (n - 1)),
            per_entity_avg=per_node,
            p_hat=p_hat,
            p_hat_se=se,
            success=success,
            frozen_history=frozen_hist,
            cap_history=cap_hist,
            ticks=ticks,
            trace=trace,
        )


class MultiFileRun:
    """n sources, n files, coded gossip, c*n slots per cycle.

    Age is recorded every slot for every (node, file) pair. By default all n
    files count as acquired at once when a node's basis reaches full rank;
    with partial_decoding=True each file counts as soon as its unit vector
    appears in the node's reduced basis. A node's own file is always current.
    """

    def __init__(self, n: int, c: int, q: int, update: UpdateProcess,
                 num_cycles: int, seed: int, variant: str = "push",
                 warmup_cycles: int = 1, partial_decoding: bool = False,
                 trace: bool = False, backend=None):
        if n < 2:
            raise ConfigError(f"need n >= 2 nodes, got {n}")
        if not is_prime(q) or q < n:
            raise ConfigError(f"field size must be a prime >= n, got q={q}, n={n}")
        if variant not in ("push", "pull"):
            raise ConfigError(f"unknown coded gossip variant {variant!r}")
        if not 0 <= warmup_cycles < num_cycles:
            raise ConfigError(
                f"warmup_cycles={warmup_cycles} must be < num_cycles={num_cycles}")
        self.plan = CyclePlan(c=c, mode="multi-file", n=n, num_cycles=num_cycles)
        self.n = n
        self.q = q
        self.update = update
        self.seed = seed
        self.variant = variant
        self.warmup = warmup_cycles
        self.partial = partial_decoding
        self.trace_enabled = trace
        self.backend = backend if backend is not None else kernels.active()

    def run(self) -> RunStats:
        n, q = self.n, self.q
        L = self.plan.cycle_len_slots
        cycles = self.plan.num_cycles
        rng = Rng(self.seed)
        contacts = rng.substream(STREAM_CONTACTS).gen
        coding = rng.substream(STREAM_CODING).gen
        total_slots = L * cycles
        arrivals = np.empty((total_slots, n), dtype=bool)
        for f in range(n):
            arrivals[:, f] = self.update.sample(
                rng.substream(STREAM_UPDATES, f).gen, total_slots)

        net = CodedNetworkState(n, q, backend=self.backend)
        ranks = net.ranks
        src_versions = np.zeros(n, dtype=np.int64)
        held = np.zeros((n, n), dtype=np.int64)  # held[i, f]: version of f at node i
        diag = np.arange(n)
        cap = np.full((n, n), 2 * L, dtype=np.int64)
        success = np.zeros((cycles, n, n), dtype=bool)
        frozen_hist = np.zeros((cycles, n), dtype=np.int64)
        cap_hist = np.zeros((cycles, n, n), dtype=np.int64)
        sum_age = np.zeros((n, n), dtype=np.int64)
        ticks = 0
        trace = []
        tick_index = 0

        for k in range(cycles):
            frozen = src_versions.copy()
            frozen_hist[k] = frozen
            if k > 0:
                cap = update_dominating(cap, success[k - 1], L)
            cap_hist[k] = cap
            net.reset_cycle()
            full = np.zeros(n, dtype=bool)
            received = np.zeros(n, dtype=np.int64)
            if self.partial:
                decoded = np.zeros((n, n), dtype=bool)
                decoded[diag, diag] = True
                success[k, diag, diag] = True

            for s in range(L):
                if not full.all():
                    targets = select_targets(contacts, n)
                    coeffs = coding.integers(0, q, size=(n, n + 1))
                    changed = net.step_slot(self.variant, targets, coeffs)
                    if self.variant == "push":
                        received += np.bincount(targets, minlength=n)
                    else:
                        received += 1
                    if (ranks > received + 1).any():
                        raise InvariantViolation(
                            "rank exceeded 1 + packets received in cycle %d" % k)
                    if self.partial:
                        for i in np.nonzero(changed)[0]:
                            r = int(ranks[i])
                            counts = np.count_nonzero(net.rows[i, :r], axis=1)
                            unit = net.pivots[i, :r][counts == 1]
                            newly_f = np.zeros(n, dtype=bool)
                            newly_f[unit] = True
                            newly_f &= ~decoded[i]
                            if newly_f.any():
                                decoded[i] |= newly_f
                                held[i, newly_f] = np.maximum(held[i, newly_f],
                                                              frozen[newly_f])
                                success[k, i, newly_f] = True
                        full = ranks == n
                    else:
                        newly = (ranks == n) & ~full
                        if newly.any():
                            full |= newly
                            held[newly] = np.maximum(held[newly], frozen[None, :])
                            success[k, newly, :] = True
                age = src_versions[None, :] - held
                if (age > cap).any():
                    raise InvariantViolation(
                        f"age exceeded its per-cycle ceiling in cycle {k}")
                if k >= self.warmup:
                    sum_age += age
                    ticks += 1
                if self.trace_enabled:
                    trace.append((tick_index, age.copy(), cap.copy()))
                tick_index += 1
                # updates started this slot finish arriving at the slot boundary
                src_versions += arrivals[k * L + s]
                held[diag, diag] = src_versions  # own file is always current

        per_pair = sum_age / ticks
        # metrics cover (node, file) pairs where the node is not the file's
        # source; the diagonal age is identically zero by definition
        offdiag = ~np.eye(n, dtype=bool)
        p_hat, se = estimate_failure_prob(success[self.warmup:][:, offdiag])
        return RunStats(
            avg_age=float(sum_age[offdiag].sum()) / (ticks * n * (n - 1)),
            per_entity_avg=per_pair,
            p_hat=p_hat,
            p_hat_se=se,
            success=success,
            frozen_history=frozen_hist,
            cap_history=cap_hist,
            ticks=ticks,
            trace=trace,
        )


def interleave_dissemination_trial(n: int, ell: int, seed: int, trial: int,
                                   recycle: bool = False, backend=None,
                                   max_minislots: int | None = None) -> int:
    """Spread one frozen generation; returns the 1-based minislot at which the
    last node completes its piece collection."""
    backend = backend if backend is not None else kernels.active()
    contacts = Rng(seed).substream(STREAM_TRIAL, trial, STREAM_CONTACTS).gen
    state = InterleaveState(n, ell, source=0, recycle=recycle, backend=backend)
    limit = max_minislots if max_minislots is not None else 200 * (ell + max(1, n.bit_length()))
    complete = state.complete_mask()
    tick = 0
    while not complete.all():
        if tick >= limit:
            raise InvariantViolation(
                f"dissemination did not finish within {limit} minislots")
        m = tick % ell
        targets = select_targets(contacts, n)
        complete |= state.step_minislot(m % 2 == 0, targets)
        tick += 1
    return tick


def rlc_dissemination_trial(n: int, q: int, seed: int, trial: int,
                            variant: str = "push", backend=None,
                            max_slots: int | None = None) -> int:
    """Spread one frozen generation of n messages; returns the 1-based slot at
    which the last node reaches full rank."""
    if variant not in ("push", "pull"):
        raise ConfigError(f"unknown coded gossip variant {variant!r}")
    try:
        net = CodedNetworkState(n, q, backend=backend)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    base = Rng(seed).substream(STREAM_TRIAL, trial)
    contacts = base.substream(STREAM_CONTACTS).gen
    coding = base.substream(STREAM_CODING).gen
    limit = max_slots if max_slots is not None else 1000 * n
    tick = 0
    while not net.full_mask().all():
        if tick >= limit:
            raise InvariantViolation(f"dissemination did not finish within {limit} slots")
        targets = select_targets(contacts, n)
        coeffs = coding.integers(0, q, size=(n, n + 1))
        net.step_slot(variant, targets, coeffs)
        tick += 1
    return tick
