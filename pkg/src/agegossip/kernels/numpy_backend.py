"""Pure-numpy transfer kernels: the fallback path when numba is unavailable
or disabled via AGEGOSSIP_BACKEND=numpy.

Must stay bit-identical to the numba backend: both consume pre-drawn target
and coefficient arrays and do exact int64 arithmetic, so any divergence is a
bug, not tolerance.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def interleave_push_minislot(owned, pushrec, cursor, targets, source, recycle):
    """Commit one push minislot; returns the source's new fresh-piece cursor.

    Choices are computed from the state frozen at entry, then committed
    together. Pushed pieces land in both owned and push_received.
    """
    n, ell = owned.shape
    have = pushrec.any(axis=1)
    # highest pushable piece per node, as a 0-based column (rows without any
    # pushable piece are masked out via `have`)
    choice = ell - 1 - np.argmax(pushrec[:, ::-1], axis=1)
    new_cursor = cursor
    if cursor <= ell:
        choice[source] = cursor - 1
        new_cursor = cursor + 1
        if recycle and new_cursor > ell:
            new_cursor = 1
    pushers = np.nonzero(have)[0]
    t = targets[pushers]
    p = choice[pushers]
    owned[t, p] = True
    pushrec[t, p] = True
    return new_cursor


def interleave_pull_minislot(owned, targets):
    """Commit one pull minislot: lowest missing piece from a random target."""
    missing = ~owned
    incomplete = missing.any(axis=1)
    want = np.argmax(missing, axis=1)
    req = np.nonzero(incomplete)[0]
    t = targets[req]
    w = want[req]
    got = owned[t, w]  # read against frozen state, before any write
    owned[req[got], w[got]] = True


def _encode(rows_i, rank, coeffs_i, q, n):
    if rank == n:
        # full-rank RREF is the identity, so the combination is the coefficient
        # vector itself; exact shortcut, not an approximation
        return coeffs_i[:n].copy()
    if rank == 0:
        return np.zeros(n, dtype=np.int64)
    return (coeffs_i[:rank] @ rows_i[:rank]) % q


def _absorb(rows_i, pivots_i, rank, pkt, q, inv):
    """Reduce pkt against node i's rows; insert if independent. Returns new rank."""
    n = rows_i.shape[1]
    if rank == n:
        return rank
    v = pkt.copy()
    if rank:
        f = v[pivots_i[:rank]]
        if f.any():
            v = (v - f @ rows_i[:rank]) % q
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return rank
    piv = int(nz[0])
    v = (v * inv[v[piv]]) % q
    if rank:
        g = rows_i[:rank, piv]
        if g.any():
            rows_i[:rank] = (rows_i[:rank] - np.outer(g, v)) % q
    pos = int(np.searchsorted(pivots_i[:rank], piv))
    rows_i[pos + 1:rank + 1] = rows_i[pos:rank]
    pivots_i[pos + 1:rank + 1] = pivots_i[pos:rank]
    rows_i[pos] = v
    pivots_i[pos] = piv
    return rank + 1


def rlc_push_slot(rows, ranks, pivots, targets, coeffs, q, inv):
    """One push slot: every node encodes from frozen state, then all packets
    are absorbed (senders in ascending order). Returns rank-changed mask."""
    n_nodes, n = rows.shape[0], rows.shape[1]
    pkts = np.empty((n_nodes, n), dtype=np.int64)
    for i in range(n_nodes):
        # a packet headed to an already-full receiver is discarded unread
        if ranks[targets[i]] < n:
            pkts[i] = _encode(rows[i], int(ranks[i]), coeffs[i], q, n)
    changed = np.zeros(n_nodes, dtype=bool)
    for j in range(n_nodes):
        t = int(targets[j])
        if ranks[t] == n:
            continue
        new_rank = _absorb(rows[t], pivots[t], int(ranks[t]), pkts[j], q, inv)
        if new_rank != ranks[t]:
            ranks[t] = new_rank
            changed[t] = True
    return changed


def rlc_pull_slot(rows, ranks, pivots, targets, coeffs, q, inv):
    """One pull slot: node i receives a packet its target encodes just for it
    (coefficients indexed by the requester). Returns rank-changed mask."""
    n_nodes, n = rows.shape[0], rows.shape[1]
    pkts = np.empty((n_nodes, n), dtype=np.int64)
    for i in range(n_nodes):
        t = int(targets[i])
        if ranks[i] < n:
            pkts[i] = _encode(rows[t], int(ranks[t]), coeffs[i], q, n)
    changed = np.zeros(n_nodes, dtype=bool)
    for i in range(n_nodes):
        if ranks[i] == n:
            continue
        new_rank = _absorb(rows[i], pivots[i], int(ranks[i]), pkts[i], q, inv)
        if new_rank != ranks[i]:
            ranks[i] = new_rank
            changed[i] = True
    return changed
