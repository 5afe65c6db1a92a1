"""File-slicing gossip: numbered pieces, alternating push and pull minislots.

Odd minislots (first of each slot) push: every node sends its highest piece
among those it received via pushes; the source injects fresh pieces 1..ell in
order. Even minislots pull: every incomplete node asks a random target for its
lowest missing piece and gets it iff the target already owned it at the start
of the minislot. Pulled pieces never become pushable: push eligibility is a
provenance property, which is the whole asymmetry of the scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import Rng, SimClock, select_targets


@dataclass
class PieceSet:
    """One node's piece collection with push-provenance marking."""

    owned: set[int] = field(default_factory=set)
    push_received: set[int] = field(default_factory=set)

    def __post_init__(self):
        if not self.push_received <= self.owned:
            raise ValueError("push_received must be a subset of owned")

    def is_complete(self, ell: int) -> bool:
        return len(self.owned) == ell


def source_piece_set(ell: int) -> PieceSet:
    """The source's start-of-cycle state: all fresh pieces, all pushable."""
    pieces = set(range(1, ell + 1))
    return PieceSet(owned=set(pieces), push_received=set(pieces))


def push_choice(state: PieceSet) -> int | None:
    """Highest piece received via pushes, or None if nothing is pushable."""
    if not state.push_received:
        return None
    return max(state.push_received)


def source_push_choice(cursor: int, state: PieceSet, ell: int,
                       recycle: bool = False) -> tuple[int, int]:
    """The source's pick for an odd minislot: next fresh piece while any remain.

    Returns (piece, new_cursor). Once all ell fresh pieces are out the source
    either behaves like a regular node (pushes its highest piece) or, with
    recycle=True, starts injecting 1..ell again.
    """
    if cursor <= ell:
        nxt = cursor + 1
        if recycle and nxt > ell:
            nxt = 1
        return cursor, nxt
    piece = push_choice(state)
    assert piece is not None  # the source owns all pieces as push_received
    return piece, cursor


def pull_request(state: PieceSet, ell: int) -> int | None:
    """Lowest missing piece, or None when the collection is complete."""
    for p in range(1, ell + 1):
        if p not in state.owned:
            return p
    return None


class InterleaveState:
    """Array form of the whole network's piece state for one cycle.

    owned / push_received are (n, ell) boolean matrices, piece p at column p-1.
    Node `source` starts with everything; everyone else starts empty.
    """

    def __init__(self, n: int, ell: int, source: int = 0, recycle: bool = False,
                 backend=None):
        if n < 2:
            raise ValueError(f"need n >= 2 nodes, got {n}")
        if ell < 1:
            raise ValueError(f"need at least one piece, got ell={ell}")
        self.n = n
        self.ell = ell
        self.source = source
        self.recycle = recycle
        self.backend = backend if backend is not None else kernels.active()
        self.owned = np.zeros((n, ell), dtype=bool)
        self.push_received = np.zeros((n, ell), dtype=bool)
        self.cursor = 1
        self.reset_cycle()

    def reset_cycle(self):
        """Drop all circulating pieces and reseed the source with fresh ones."""
        self.owned[:] = False
        self.push_received[:] = False
        self.owned[self.source] = True
        self.push_received[self.source] = True
        self.cursor = 1

    def complete_mask(self) -> np.ndarray:
        return self.owned.sum(axis=1) == self.ell

    def piece_set(self, node: int) -> PieceSet:
        owned = {p + 1 for p in np.nonzero(self.owned[node])[0]}
        pushed = {p + 1 for p in np.nonzero(self.push_received[node])[0]}
        return PieceSet(owned=owned, push_received=pushed)

    def step_minislot(self, push: bool, targets: np.ndarray) -> np.ndarray:
        """Commit one minislot against frozen state; returns newly-complete mask."""
        before = self.complete_mask()
        if push:
            self.cursor = self.backend.interleave_push_minislot(
                self.owned, self.push_received, self.cursor, targets,
                self.source, self.recycle)
        else:
            self.backend.interleave_pull_minislot(self.owned, targets)
        return self.complete_mask() & ~before


def run_interleave_minislot(state: InterleaveState, clock: SimClock,
                            rng: Rng) -> list[int]:
    """Run one minislot of the protocol, drawing one target per node.

    The first minislot of each slot is a push minislot, then parity alternates
    within the slot. Returns the nodes that completed their collection here.
    """
    targets = select_targets(rng.gen, state.n)
    push = clock.minislot_in_slot % 2 == 0
    newly = state.step_minislot(push, targets)
    return [int(i) for i in np.nonzero(newly)[0]]
