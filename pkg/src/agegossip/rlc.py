"""Random linear coding gossip over a prime field.

A coded packet is just its length-n coefficient vector over F_q (payload bytes
carry no extra information for age or dissemination metrics, so they are not
simulated). Each node keeps a row-reduced basis of the coefficient vectors it
has absorbed; full rank n means every message of the cycle is decodable.
"""

from __future__ import annotations

import numpy as np

from .core import Rng, select_targets


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def smallest_prime_ge(n: int) -> int:
    m = max(2, n)
    while not is_prime(m):
        m += 1
    return m


def gf_add(a: int, b: int, q: int) -> int:
    return (a + b) % q


def gf_mul(a: int, b: int, q: int) -> int:
    return (a * b) % q


def gf_inv(a: int, q: int) -> int:
    """Multiplicative inverse in F_q (q prime). a must be nonzero."""
    a %= q
    if a == 0:
        raise ValueError("0 has no multiplicative inverse")
    return pow(a, q - 2, q)


def inverse_table(q: int) -> np.ndarray:
    """inv[a] = a^-1 mod q for a in [1, q); inv[0] is 0 and must never be used."""
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, q - 2, q)
    return inv


class CodedPacketBasis:
    """Incrementally row-reduced basis of coefficient vectors over F_q.

    Rows are kept in reduced row-echelon form, sorted by pivot column, so a
    full-rank basis is exactly the identity matrix. Rank never decreases.
    """

    def __init__(self, n: int, q: int):
        # q >= n is a protocol-level requirement checked by the run configs;
        # the algebra itself only needs a prime modulus
        if n < 1:
            raise ValueError(f"need at least one message, got n={n}")
        if not is_prime(q):
            raise ValueError(f"field size must be prime, got q={q}")
        self.n = n
        self.q = q
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_columns(self) -> set[int]:
        return set(self.pivots)

    def absorb(self, pkt) -> bool:
        """Reduce pkt against the basis; insert the residue if independent.

        Returns True iff the rank increased. The zero packet is a no-op.
        """
        v = np.asarray(pkt, dtype=np.int64)
        if v.shape != (self.n,):
            raise ValueError(f"packet length {v.shape} does not match n={self.n}")
        if (v < 0).any() or (v >= self.q).any():
            raise ValueError(f"packet entries must already be reduced mod q={self.q}")
        v = v.copy()
        r = self.rank
        if r:
            f = v[self.pivots]
            if f.any():
                v = (v - f @ self.rows) % self.q
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        v = (v * gf_inv(int(v[piv]), self.q)) % self.q
        if r:
            g = self.rows[:, piv]
            if g.any():
                self.rows = (self.rows - np.outer(g, v)) % self.q
        pos = int(np.searchsorted(np.asarray(self.pivots, dtype=np.int64), piv))
        self.rows = np.insert(self.rows, pos, v, axis=0)
        self.pivots.insert(pos, piv)
        return True

    def encode(self, own_message: int | None = None, rng: Rng | None = None,
               coeffs=None) -> np.ndarray | None:
        """Random combination of the node's knowledge: basis rows plus, when
        given, the unit vector of its own source message.

        One coefficient is drawn per knowledge vector, uniformly over F_q
        (zero included, so the all-zero packet is possible and is sent as-is).
        Returns None when the node knows nothing at all.
        """
        vectors = [self.rows[i] for i in range(self.rank)]
        if own_message is not None:
            e = np.zeros(self.n, dtype=np.int64)
            e[own_message] = 1
            vectors.append(e)
        if not vectors:
            return None
        if coeffs is None:
            if rng is None:
                raise ValueError("encode needs either an rng or explicit coeffs")
            coeffs = rng.gen.integers(0, self.q, size=len(vectors))
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (len(vectors),):
            raise ValueError("one coefficient per knowledge vector required")
        out = np.zeros(self.n, dtype=np.int64)
        for c, vec in zip(coeffs, vectors):
            out = (out + c * vec) % self.q
        return out

    def decodable_messages(self) -> set[int]:
        """Columns whose message is individually recoverable (some row is a unit vector)."""
        out = set()
        for i, piv in enumerate(self.pivots):
            row = self.rows[i]
            if row[piv] == 1 and np.count_nonzero(row) == 1:
                out.add(piv)
        return out

    def is_full(self) -> bool:
        return self.rank == self.n


class CodedNetworkState:
    """Array form of every node's basis for one cycle of coded gossip.

    Node i's basis starts as its own unit vector (it is the source of message
    i). rows[i, :rank_i] hold the reduced rows, pivots[i, :rank_i] their pivot
    columns in ascending order.
    """

    def __init__(self, n: int, q: int, backend=None):
        from . import kernels  # local import: kernels package imports core only
        if n < 2:
            raise ValueError(f"need n >= 2 nodes, got {n}")
        # kernels defer the modular reduction, so n*(q-1)^2 must fit in int64;
        # checked before the primality scan (which is slow for huge q)
        if n * (q - 1) * (q - 1) >= 2 ** 62:
            raise ValueError(f"field size q={q} too large for n={n} "
                             "(deferred-reduction kernels need n*q^2 < 2^62)")
        if not is_prime(q) or q < n:
            raise ValueError(f"field size must be a prime >= n, got q={q}, n={n}")
        self.n = n
        self.q = q
        self.backend = backend if backend is not None else kernels.active()
        self.inv = inverse_table(q)
        self.rows = np.zeros((n, n, n), dtype=np.int64)
        self.ranks = np.zeros(n, dtype=np.int64)
        self.pivots = np.zeros((n, n), dtype=np.int64)
        self.reset_cycle()

    def reset_cycle(self):
        """Drop all coded state and reseed every node with its own message."""
        self.rows[:] = 0
        self.pivots[:] = 0
        for i in range(self.n):
            self.rows[i, 0, i] = 1
            self.pivots[i, 0] = i
        self.ranks[:] = 1

    def full_mask(self) -> np.ndarray:
        return self.ranks == self.n

    def basis_of(self, node: int) -> CodedPacketBasis:
        basis = CodedPacketBasis(self.n, self.q)
        r = int(self.ranks[node])
        basis.rows = self.rows[node, :r].copy()
        basis.pivots = [int(p) for p in self.pivots[node, :r]]
        return basis

    def step_slot(self, variant: str, targets: np.ndarray,
                  coeffs: np.ndarray) -> np.ndarray:
        """Commit one slot against frozen state; returns the rank-changed mask."""
        fn = (self.backend.rlc_push_slot if variant == "push"
              else self.backend.rlc_pull_slot)
        return np.asarray(fn(self.rows, self.ranks, self.pivots, targets,
                             coeffs, self.q, self.inv))


def run_rlc_slot(state: CodedNetworkState, variant: str, rng: Rng) -> list[int]:
    """Run one slot of coded gossip, drawing one target and one coefficient
    block per node. Returns the nodes that reached full rank this slot."""
    if variant not in ("push", "pull"):
        raise ValueError(f"unknown coded gossip variant {variant!r}")
    before = state.full_mask()
    targets = select_targets(rng.gen, state.n)
    coeffs = rng.gen.integers(0, state.q, size=(state.n, state.n + 1))
    state.step_slot(variant, targets, coeffs)
    newly = state.full_mask() & ~before
    return [int(i) for i in np.nonzero(newly)[0]]
