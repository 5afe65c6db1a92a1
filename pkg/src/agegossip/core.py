"""Shared simulation plumbing: slotted clock, seeded randomness, update processes."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# Tags for deriving named sub-streams from the master seed. Update streams are
# additionally keyed by node index so that a source's update sequence does not
# depend on how many other nodes the network has.
STREAM_UPDATES = 1
STREAM_CONTACTS = 2
STREAM_CODING = 3
STREAM_TRIAL = 4


class ConfigError(ValueError):
    """A simulation configuration is inconsistent or out of range."""


class InvariantViolation(RuntimeError):
    """A runtime invariant of the simulation was broken (always fatal)."""


@dataclass(frozen=True)
class SimClock:
    """Hierarchical time index: cycle > slot > minislot.

    One slot is the time to transfer a whole file; a minislot is 1/minislots_per_slot
    of it (minislots_per_slot is the piece count for slicing runs, 1 for coding runs).
    """

    cycle: int
    slot_in_cycle: int
    minislot_in_slot: int
    cycle_len_slots: int
    minislots_per_slot: int = 1

    def __post_init__(self):
        if self.cycle_len_slots < 1 or self.minislots_per_slot < 1:
            raise ConfigError("cycle_len_slots and minislots_per_slot must be >= 1")
        if not 0 <= self.slot_in_cycle < self.cycle_len_slots:
            raise ConfigError(f"slot_in_cycle {self.slot_in_cycle} out of range")
        if not 0 <= self.minislot_in_slot < self.minislots_per_slot:
            raise ConfigError(f"minislot_in_slot {self.minislot_in_slot} out of range")

    @property
    def abs_slot(self) -> int:
        return self.cycle * self.cycle_len_slots + self.slot_in_cycle

    @property
    def abs_minislot(self) -> int:
        return self.abs_slot * self.minislots_per_slot + self.minislot_in_slot


def step_clock(clock: SimClock) -> SimClock:
    """Advance one minislot, carrying minislot -> slot -> cycle."""
    m = clock.minislot_in_slot + 1
    s, c = clock.slot_in_cycle, clock.cycle
    if m == clock.minislots_per_slot:
        m = 0
        s += 1
        if s == clock.cycle_len_slots:
            s = 0
            c += 1
    return replace(clock, cycle=c, slot_in_cycle=s, minislot_in_slot=m)


class Rng:
    """Seeded random source with stable named sub-streams.

    Sub-streams are derived from (seed, *key) through numpy's SeedSequence, so
    e.g. the update stream of node 7 is the same bit stream no matter how many
    nodes the run has or which other streams were opened.
    """

    def __init__(self, seed: int, _key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self._key = tuple(int(k) for k in _key)
        self.gen = np.random.default_rng(np.random.SeedSequence([self.seed, *self._key]))

    def substream(self, *key: int) -> "Rng":
        return Rng(self.seed, self._key + key)

    def __repr__(self):
        return f"Rng(seed={self.seed}, key={self._key})"


def select_target(rng: Rng, self_id: int, n: int) -> int:
    """Pick a contact target uniformly among the n-1 nodes other than self_id."""
    if n < 2:
        raise ConfigError(f"target selection needs n >= 2, got n={n}")
    r = int(rng.gen.integers(0, n - 1))
    return r + (r >= self_id)


def select_targets(gen: np.random.Generator, n: int) -> np.ndarray:
    """Vector form of select_target: one target per node, self excluded."""
    if n < 2:
        raise ConfigError(f"target selection needs n >= 2, got n={n}")
    r = gen.integers(0, n - 1, size=n)
    return r + (r >= np.arange(n))


@dataclass(frozen=True)
class UpdateProcess:
    """Per-slot arrival process for new versions at a source.

    kind is one of "bernoulli", "every", "never"; rate is the per-slot arrival
    probability (1.0 / 0.0 for the degenerate kinds).
    """

    kind: str
    rate: float

    def fires(self, rng: Rng, slot: int) -> bool:
        if self.kind == "never":
            return False
        if self.kind == "every":
            return True
        return bool(rng.gen.random() < self.rate)

    def sample(self, gen: np.random.Generator, num_slots: int) -> np.ndarray:
        """Draw the whole arrival sequence at once (bool per slot)."""
        if self.kind == "never":
            return np.zeros(num_slots, dtype=bool)
        if self.kind == "every":
            return np.ones(num_slots, dtype=bool)
        return gen.random(num_slots) < self.rate


def bernoulli(rate: float) -> UpdateProcess:
    if not 0.0 <= rate <= 1.0:
        raise ConfigError(f"bernoulli rate must be in [0, 1], got {rate}")
    return UpdateProcess("bernoulli", float(rate))


EVERY_SLOT = UpdateProcess("every", 1.0)
NEVER = UpdateProcess("never", 0.0)


def make_update_process(kind: str, rate: float = 0.7) -> UpdateProcess:
    kind = kind.lower()
    if kind == "bernoulli":
        return bernoulli(rate)
    if kind == "every":
        return EVERY_SLOT
    if kind == "never":
        return NEVER
    raise ConfigError(f"unknown update process kind {kind!r}")


def advance_source(proc: UpdateProcess, rng: Rng, counter: int, slot: int) -> int:
    """Advance a source's version counter by one slot's worth of arrivals (0 or 1)."""
    return counter + 1 if proc.fires(rng, slot) else counter


def uniformity_tolerance(num_draws: int, num_targets: int) -> float:
    """Allowed max deviation of an empirical target frequency from 1/num_targets."""
    return 5.0 * math.sqrt(1.0 / (num_draws * num_targets))
