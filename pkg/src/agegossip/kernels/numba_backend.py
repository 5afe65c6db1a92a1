"""Numba-jitted transfer kernels: the default hot path.

Same contracts and bit-identical results as numpy_backend; all randomness is
drawn by the caller, these are pure integer transforms. cache=True so the JIT
cost is paid once per machine, not per process.
"""

from __future__ import annotations

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def interleave_push_minislot(owned, pushrec, cursor, targets, source, recycle):
    n, ell = owned.shape
    choice = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for p in range(ell - 1, -1, -1):
            if pushrec[i, p]:
                choice[i] = p
                break
    new_cursor = cursor
    if cursor <= ell:
        choice[source] = cursor - 1
        new_cursor = cursor + 1
        if recycle and new_cursor > ell:
            new_cursor = 1
    for i in range(n):
        p = choice[i]
        if p >= 0:
            t = targets[i]
            owned[t, p] = True
            pushrec[t, p] = True
    return new_cursor


@njit(cache=True)
def interleave_pull_minislot(owned, targets):
    n, ell = owned.shape
    want = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        for p in range(ell):
            if not owned[i, p]:
                want[i] = p
                break
    granted = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        w = want[i]
        if w >= 0 and owned[targets[i], w]:
            granted[i] = True
    for i in range(n):
        if granted[i]:
            owned[i, want[i]] = True


@njit(cache=True)
def _encode_into(rows_i, rank, coeffs_i, q, out):
    n = rows_i.shape[1]
    if rank == n:
        # full-rank RREF is the identity: the packet is the coefficient vector
        for j in range(n):
            out[j] = coeffs_i[j]
        return
    # defer the modular reduction: values stay below n*q^2, far inside int64
    for j in range(n):
        out[j] = 0
    for r in range(rank):
        c = coeffs_i[r]
        if c != 0:
            for j in range(n):
                out[j] += c * rows_i[r, j]
    for j in range(n):
        out[j] %= q


@njit(cache=True)
def _absorb(rows_i, pivots_i, rank, pkt, q, inv):
    n = rows_i.shape[1]
    if rank == n:
        return rank
    v = pkt.copy()
    # pivot columns of other rows are zero in reduced echelon form, so each
    # v[pivot] read below is the untouched (already reduced) packet entry and
    # the modular reduction can be deferred to one final pass
    touched = False
    for r in range(rank):
        f = v[pivots_i[r]]
        if f != 0:
            touched = True
            for j in range(n):
                v[j] -= f * rows_i[r, j]
    if touched:
        for j in range(n):
            v[j] %= q
    piv = -1
    for j in range(n):
        if v[j] != 0:
            piv = j
            break
    if piv < 0:
        return rank
    s = inv[v[piv]]
    if s != 1:
        for j in range(n):
            v[j] = (v[j] * s) % q
    for r in range(rank):
        g = rows_i[r, piv]
        if g != 0:
            for j in range(n):
                rows_i[r, j] = (rows_i[r, j] - g * v[j]) % q
    pos = rank
    for r in range(rank):
        if pivots_i[r] > piv:
            pos = r
            break
    for r in range(rank, pos, -1):
        pivots_i[r] = pivots_i[r - 1]
        for j in range(n):
            rows_i[r, j] = rows_i[r - 1, j]
    pivots_i[pos] = piv
    for j in range(n):
        rows_i[pos, j] = v[j]
    return rank + 1


@njit(cache=True)
def rlc_push_slot(rows, ranks, pivots, targets, coeffs, q, inv):
    n_nodes = rows.shape[0]
    n = rows.shape[1]
    pkts = np.empty((n_nodes, n), dtype=np.int64)
    for i in range(n_nodes):
        # a packet headed to an already-full receiver is discarded unread
        if ranks[targets[i]] < n:
            _encode_into(rows[i], ranks[i], coeffs[i], q, pkts[i])
    changed = np.zeros(n_nodes, dtype=np.bool_)
    for j in range(n_nodes):
        t = targets[j]
        if ranks[t] == n:
            continue
        new_rank = _absorb(rows[t], pivots[t], ranks[t], pkts[j], q, inv)
        if new_rank != ranks[t]:
            ranks[t] = new_rank
            changed[t] = True
    return changed


@njit(cache=True)
def rlc_pull_slot(rows, ranks, pivots, targets, coeffs, q, inv):
    n_nodes = rows.shape[0]
    n = rows.shape[1]
    pkts = np.empty((n_nodes, n), dtype=np.int64)
    for i in range(n_nodes):
        if ranks[i] < n:
            _encode_into(rows[targets[i]], ranks[targets[i]], coeffs[i], q, pkts[i])
    changed = np.zeros(n_nodes, dtype=np.bool_)
    for i in range(n_nodes):
        if ranks[i] == n:
            continue
        new_rank = _absorb(rows[i], pivots[i], ranks[i], pkts[i], q, inv)
        if new_rank != ranks[i]:
            ranks[i] = new_rank
            changed[i] = True
    return changed
