import numpy as np
import pytest

from agegossip.core import Rng
from agegossip.rlc import (CodedPacketBasis, gf_inv, gf_mul, inverse_table,
                           is_prime, smallest_prime_ge)


# ---------------------------------------------------------------- oracles

def oracle_rank(vectors, q):
    """From-scratch Gaussian elimination over F_q on plain Python ints."""
    rows = [[int(x) % q for x in v] for v in vectors]
    if not rows:
        return 0
    n = len(rows[0])
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], q - 2, q)
        rows[rank] = [(x * inv) % q for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [(a - f * b) % q for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def oracle_in_span(vectors, candidate, q):
    return oracle_rank(list(vectors) + [candidate], q) == oracle_rank(vectors, q)


# ---------------------------------------------------------------- field ops

def test_gf_mul_example():
    assert gf_mul(3, 4, 5) == 2  # 12 mod 5


def test_gf_inv_example():
    assert gf_inv(3, 7) == 5  # 3 * 5 = 15 = 1 mod 7


def test_gf_inv_exhaustive_q11():
    for a in range(1, 11):
        assert gf_mul(a, gf_inv(a, 11), 11) == 1


def test_gf_inv_zero_raises():
    with pytest.raises(ValueError):
        gf_inv(0, 7)


def test_inverse_table_matches_gf_inv():
    for q in (2, 3, 5, 13):
        table = inverse_table(q)
        assert table[0] == 0
        for a in range(1, q):
            assert table[a] == gf_inv(a, q)


def test_field_axioms_small_primes():
    for q in (2, 3, 5, 7):
        vals = np.arange(q)
        a, b, c = np.meshgrid(vals, vals, vals, indexing="ij")
        assert ((a + b) % q == (b + a) % q).all()
        assert ((a * b) % q == (b * a) % q).all()
        assert (((a + b) % q + c) % q == (a + (b + c) % q) % q).all()
        assert ((a * b % q) * c % q == a * (b * c % q) % q).all()
        assert (a * ((b + c) % q) % q == (a * b + a * c) % q).all()
        assert ((vals + 0) % q == vals).all()
        assert ((vals * 1) % q == vals).all()


def test_prime_helpers():
    assert [p for p in range(40) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19,
                                                     23, 29, 31, 37]
    assert smallest_prime_ge(31) == 31
    assert smallest_prime_ge(32) == 37
    assert smallest_prime_ge(2) == 2
    assert smallest_prime_ge(90) == 97


# ---------------------------------------------------------------- basis

def e(i, n):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


def test_absorb_zero_packet_is_noop():
    basis = CodedPacketBasis(4, 5)
    assert basis.absorb(np.zeros(4, dtype=np.int64)) is False
    assert basis.rank == 0


def test_absorb_first_unit_vector():
    basis = CodedPacketBasis(4, 5)
    assert basis.absorb(e(2, 4)) is True
    assert basis.rank == 1
    assert basis.pivot_columns == {2}


def test_absorb_rejects_malformed_packets():
    basis = CodedPacketBasis(4, 5)
    with pytest.raises(ValueError):
        basis.absorb(np.zeros(3, dtype=np.int64))
    with pytest.raises(ValueError):
        basis.absorb(np.array([0, 0, 0, 7]))


def test_absorb_matches_oracle_on_random_batches():
    gen = Rng(17).gen
    for trial in range(200):
        q = (5, 7, 11)[trial % 3]
        n = int(gen.integers(2, 9))
        count = int(gen.integers(1, 21))
        pkts = gen.integers(0, q, size=(count, n))
        basis = CodedPacketBasis(n, q)
        for p in pkts:
            basis.absorb(p.astype(np.int64))
        assert basis.rank == oracle_rank(pkts, q)


def test_basis_rows_stay_reduced_and_sound():
    gen = Rng(23).gen
    for _ in range(50):
        q, n = 7, 6
        pkts = gen.integers(0, q, size=(15, n))
        basis = CodedPacketBasis(n, q)
        for p in pkts:
            basis.absorb(p.astype(np.int64))
        # reduced row echelon shape
        assert basis.rank == len(basis.pivots) == basis.rows.shape[0]
        assert basis.pivots == sorted(basis.pivots)
        for i, piv in enumerate(basis.pivots):
            assert basis.rows[i, piv] == 1
            for j, other in enumerate(basis.pivots):
                if i != j:
                    assert basis.rows[j, piv] == 0
        # no information invented: every row is in the span of what was absorbed
        for row in basis.rows:
            assert oracle_in_span([list(p) for p in pkts], list(row), q)


def test_rank_20_random_packets_f5():
    gen = Rng(4).gen
    pkts = gen.integers(0, 5, size=(20, 4))
    basis = CodedPacketBasis(4, 5)
    for p in pkts:
        basis.absorb(p.astype(np.int64))
    assert basis.rank == oracle_rank(pkts, 5) == 4


# ---------------------------------------------------------------- decoding

def test_decodable_full_rank_means_everything():
    basis = CodedPacketBasis(3, 5)
    for i in range(3):
        basis.absorb(e(i, 3))
    assert basis.decodable_messages() == {0, 1, 2}
    assert basis.is_full()


def test_decodable_mixture_alone_is_nothing():
    basis = CodedPacketBasis(3, 5)
    basis.absorb(np.array([1, 1, 0], dtype=np.int64))
    assert basis.decodable_messages() == set()


def test_decodable_after_reduction():
    basis = CodedPacketBasis(3, 5)
    basis.absorb(e(0, 3))
    basis.absorb(np.array([1, 1, 0], dtype=np.int64))  # reduces to e_1
    assert basis.decodable_messages() == {0, 1}


def test_decodable_iff_full_rank_covers_all():
    gen = Rng(31).gen
    for _ in range(30):
        q, n = 11, 5
        basis = CodedPacketBasis(n, q)
        for p in gen.integers(0, q, size=(12, n)):
            basis.absorb(p.astype(np.int64))
        dec = basis.decodable_messages()
        assert dec <= set(range(n))
        assert (len(dec) == n) == (basis.rank == n)


# ---------------------------------------------------------------- encoding

def test_encode_empty_knowledge_is_silent():
    basis = CodedPacketBasis(4, 5)
    assert basis.encode(own_message=None, rng=Rng(0)) is None


def test_encode_own_message_only_is_a_unit_multiple():
    basis = CodedPacketBasis(4, 5)
    rng = Rng(8)
    for _ in range(40):
        pkt = basis.encode(own_message=2, rng=rng)
        assert pkt is not None
        assert pkt[[0, 1, 3]].sum() == 0
        assert 0 <= pkt[2] < 5


def test_encode_stays_in_span_and_dependent_at_full_rank():
    gen = Rng(12).gen
    q, n = 7, 5
    basis = CodedPacketBasis(n, q)
    for p in gen.integers(0, q, size=(10, n)):
        basis.absorb(p.astype(np.int64))
    rng = Rng(3)
    for _ in range(25):
        pkt = basis.encode(rng=rng)
        assert oracle_in_span([list(r) for r in basis.rows], list(pkt), q)
    if basis.is_full():
        assert basis.absorb(basis.encode(rng=rng)) is False


def test_encode_uniform_over_span():
    # two independent knowledge vectors over F_5 span exactly 25 packets; the
    # encoded output must be uniform over them (exact oracle: enumerate the
    # 25 coefficient pairs). Uniformity asserted as total variation < 5%
    # against the enumerated distribution, with the support matching exactly.
    q = 5
    basis = CodedPacketBasis(2, q)
    basis.absorb(np.array([1, 2], dtype=np.int64))
    basis.absorb(np.array([0, 3], dtype=np.int64))
    assert basis.rank == 2
    span = {}
    for c1 in range(q):
        for c2 in range(q):
            v = tuple((c1 * basis.rows[0] + c2 * basis.rows[1]) % q)
            span[v] = span.get(v, 0) + 1
    assert len(span) == 25 and set(span.values()) == {1}
    rng = Rng(424242)
    counts = {k: 0 for k in span}
    draws = 10_000
    for _ in range(draws):
        counts[tuple(basis.encode(rng=rng))] += 1
    assert all(c > 0 for c in counts.values())  # support is the whole span
    tv = 0.5 * sum(abs(c / draws - 1 / 25) for c in counts.values())
    assert tv < 0.05


def test_encode_explicit_coefficients():
    basis = CodedPacketBasis(3, 7)
    basis.absorb(e(0, 3))
    basis.absorb(e(2, 3))
    pkt = basis.encode(own_message=1, coeffs=[2, 3, 4])
    assert (pkt == np.array([2, 4, 3])).all()


def test_basis_constructor_validation():
    with pytest.raises(ValueError):
        CodedPacketBasis(4, 9)  # not prime
    with pytest.raises(ValueError):
        CodedPacketBasis(0, 5)  # no messages


# ---------------------------------------------------------------- network op

def test_run_rlc_slot_full_rank_events():
    from agegossip.rlc import CodedNetworkState, run_rlc_slot
    net = CodedNetworkState(5, 5)
    rng = Rng(64)
    done = set()
    for _ in range(400):
        for i in run_rlc_slot(net, "push", rng):
            assert i not in done  # full-rank event fires once per node
            done.add(i)
        if len(done) == 5:
            break
    assert done == {0, 1, 2, 3, 4}
    assert net.full_mask().all()


def test_network_state_matches_per_node_basis():
    # replaying the same packets through the reference basis reproduces the
    # array state exactly
    from agegossip.rlc import CodedNetworkState, run_rlc_slot
    net = CodedNetworkState(4, 5)
    rng = Rng(12)
    for _ in range(6):
        run_rlc_slot(net, "pull", rng)
    for i in range(4):
        ref = net.basis_of(i)
        r = int(net.ranks[i])
        assert ref.rank == r
        assert (ref.rows == net.rows[i, :r]).all()
        assert ref.pivots == [int(p) for p in net.pivots[i, :r]]
        # pivots of a reduced basis are strictly increasing
        assert all(a < b for a, b in zip(ref.pivots, ref.pivots[1:]))


def test_network_slots_match_independent_basis_replay():
    # engine-level dual route: replay the same target/coefficient draws
    # through per-node reference bases (object code path, no kernels) and
    # demand the exact same rows, pivots and ranks after every slot
    from agegossip.core import select_targets
    from agegossip.rlc import CodedNetworkState

    n, q = 7, 7
    for variant in ("push", "pull"):
        net = CodedNetworkState(n, q)
        ref = []
        for i in range(n):
            b = CodedPacketBasis(n, q)
            b.absorb(e(i, n))
            ref.append(b)
        gen = Rng(2025).gen
        for _ in range(40):
            targets = select_targets(gen, n)
            coeffs = gen.integers(0, q, size=(n, n + 1))
            net.step_slot(variant, targets, coeffs)

            pkts = []
            for i in range(n):
                src = i if variant == "push" else int(targets[i])
                pkts.append(ref[src].encode(coeffs=coeffs[i][:ref[src].rank]))
            if variant == "push":
                for j in range(n):
                    ref[int(targets[j])].absorb(pkts[j])
            else:
                for i in range(n):
                    ref[i].absorb(pkts[i])

            for i in range(n):
                r = int(net.ranks[i])
                assert ref[i].rank == r
                assert ref[i].pivots == [int(p) for p in net.pivots[i, :r]]
                assert (ref[i].rows == net.rows[i, :r]).all()


def test_network_state_rejects_bad_field():
    from agegossip.rlc import CodedNetworkState
    with pytest.raises(ValueError):
        CodedNetworkState(5, 4)
    with pytest.raises(ValueError):
        CodedNetworkState(5, 3)
    with pytest.raises(ValueError, match="too large"):
        CodedNetworkState(5, 2305843009213693951)  # Mersenne prime 2^61 - 1
