import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycfree.partitions import (
    OrderedPartition,
    Partition,
    TypeBPartition,
    build_nczero,
    build_nczprime,
    enumerate_partitions,
    interval_partitions,
    join_with_intervals,
    monotone_partitions,
    monotone_weight,
    noncrossing_partitions,
    read_word,
    set_partitions,
    shifted_kreweras_tags,
    typeb_from_blocks,
    typeb_join,
    typeb_kreweras,
    typeb_leq,
    typeb_partitions,
)

CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430]
BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140]

FIGURE = Partition(
    16, [[1, 4, 8], [2], [3], [5, 7], [6], [9, 13, 14], [10, 12], [11], [15, 16]]
)


def binom(n, k):
    import math

    return math.comb(n, k)


class TestNonCrossing:
    def test_defining_crossing(self):
        assert not Partition(4, [[1, 3], [2, 4]]).is_noncrossing()

    def test_full_block(self):
        for n in range(1, 7):
            assert Partition.one(n).is_noncrossing()

    def test_figure_partition(self):
        assert FIGURE.is_noncrossing()

    def test_counts_against_brute_force(self):
        for n in range(1, 9):
            ncs = noncrossing_partitions(n)
            assert len(ncs) == CATALAN[n]
            if n <= 7:
                brute = [p for p in set_partitions(n) if p.is_noncrossing()]
                assert set(brute) == set(ncs)


class TestEnumeration:
    def test_nc4(self):
        assert len(enumerate_partitions("nc", 4)) == 14

    def test_interval_counts(self):
        assert len(enumerate_partitions("interval", 4)) == 8
        for n in range(1, 7):
            ips = interval_partitions(n)
            assert len(ips) == 2 ** (n - 1)
            assert all(
                all(b == tuple(range(b[0], b[-1] + 1)) for b in p.blocks) for p in ips
            )

    def test_monotone2(self):
        assert len(enumerate_partitions("monotone", 2)) == 3

    def test_typeb_counts(self):
        for n in range(1, 5):
            assert len(enumerate_partitions("typeB", n)) == binom(2 * n, n)

    def test_typeb_split_disjoint(self):
        for n in range(1, 5):
            ncz = enumerate_partitions("typeB_NCZ", n)
            nczp = enumerate_partitions("typeB_NCZprime", n)
            assert len(ncz) + len(nczp) == binom(2 * n, n)
            assert not ({t.blocks for t in ncz} & {t.blocks for t in nczp})

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            enumerate_partitions("nc", 0)

    def test_all_partitions_bell(self):
        for n in range(1, 8):
            assert len(set_partitions(n)) == BELL[n]

    def test_deterministic_order(self):
        assert enumerate_partitions("nc", 5) == enumerate_partitions("nc", 5)


class TestKreweras:
    def test_extremes(self):
        for n in range(1, 7):
            assert Partition.zero(n).kreweras() == Partition.one(n)
            assert Partition.one(n).kreweras() == Partition.zero(n)

    def test_example(self):
        assert Partition(3, [[1, 2], [3]]).kreweras() == Partition(3, [[1], [2, 3]])

    def test_block_count_identity(self):
        for n in range(1, 9):
            for p in noncrossing_partitions(n):
                assert len(p.blocks) + len(p.kreweras().blocks) == n + 1

    def test_double_complement_is_rotation(self):
        # Kr o Kr shifts every element down by one (i -> i-1)
        for n in range(1, 7):
            for p in noncrossing_partitions(n):
                assert p.kreweras().kreweras() == p.rotate(-1)

    def test_maximality_brute_force(self):
        """Kr(p) interleaves non-crossingly with p and is the coarsest such."""
        for n in range(1, 6):
            for p in noncrossing_partitions(n):
                kr = p.kreweras()
                assert _interleaves_noncrossing(p, kr)
                for q in noncrossing_partitions(n):
                    if _interleaves_noncrossing(p, q):
                        assert len(q.blocks) >= len(kr.blocks)

    def test_rejects_crossing(self):
        with pytest.raises(ValueError):
            Partition(4, [[1, 3], [2, 4]]).kreweras()


def _interleaves_noncrossing(p, q):
    blocks = [[2 * i - 1 for i in b] for b in p.blocks]
    blocks += [[2 * i for i in b] for b in q.blocks]
    return Partition(2 * p.n, blocks).is_noncrossing()


class TestOuterInner:
    def test_one_block(self):
        outer, inner = Partition.one(5).outer_inner()
        assert outer == ((1, 2, 3, 4, 5),) and inner == ()

    def test_figure(self):
        outer, inner = FIGURE.outer_inner()
        assert set(outer) == {(1, 4, 8), (9, 13, 14), (15, 16)}
        assert len(outer) + len(inner) == len(FIGURE.blocks)

    def test_single_nesting(self):
        outer, inner = Partition(3, [[1, 3], [2]]).outer_inner()
        assert outer == ((1, 3),) and inner == ((2,),)


class TestMonotone:
    def test_orders_compatible(self):
        for n in range(1, 6):
            for op in monotone_partitions(n):
                assert op.is_monotone()

    def test_weight_matches_order_count(self):
        for n in range(1, 6):
            by_base = {}
            for op in monotone_partitions(n):
                by_base[op.base] = by_base.get(op.base, 0) + 1
            import math

            for p, count in by_base.items():
                assert monotone_weight(p) == Fraction(
                    count, math.factorial(len(p.blocks))
                )

    def test_reanchoring_at_extremal_block(self):
        """Rotating at any element of the order's first block (the maximal
        block under the inner-first reading of the order convention; it is
        always nesting-outermost) keeps the carried order compatible with
        the new nesting order.  Exhaustive for n <= 5."""
        for n in range(1, 6):
            for op in monotone_partitions(n):
                block = op.base.blocks[op.order[0]]
                for b in block:
                    shift = n - b
                    rot = op.base.rotate(shift)
                    mapping = {}
                    for bi, blk in enumerate(op.base.blocks):
                        img = tuple(sorted((i + shift - 1) % n + 1 for i in blk))
                        mapping[bi] = rot.blocks.index(img)
                    new_order = tuple(mapping[i] for i in op.order)
                    assert OrderedPartition(rot, new_order).is_monotone()


class TestOrders:
    def test_natural_when_anchor_contains_one(self):
        p = Partition(4, [[1, 4], [2, 3]])
        assert read_word(("a1", "a2", "a3", "a4"), (2, 3), ((1, 4), False)) == ("a2", "a3")

    def test_wraparound(self):
        assert read_word(("a1", "a2", "a3", "a4"), (1, 4), ((2, 3), False)) == ("a4", "a1")

    def test_full_block_natural(self):
        # a tag anchored at 1 reads the whole ground set in natural order
        n = 5
        word = tuple("x%d" % i for i in range(1, n + 1))
        assert read_word(word, tuple(range(1, n + 1)), ((1,), True)) == word


class TestTypeB:
    def test_zero_block_n1(self):
        t = build_nczero(Partition.one(1), (1,))
        assert t.blocks == (((-1, 1)),) or t.blocks == ((-1, 1),)
        assert t.abs_map() == Partition.one(1)

    def test_nczprime_n1(self):
        t = build_nczprime(Partition.one(1), {1})
        assert t.abs_map() == Partition.one(1)
        assert t.zero_block is None

    def test_fiber_sizes_exhaustive(self):
        for n in range(1, 5):
            fibers = {}
            for t in typeb_partitions(n):
                fibers.setdefault(t.abs_map(), []).append(t)
            for pi, fib in fibers.items():
                assert len(fib) == len(pi.blocks) + len(pi.kreweras().blocks)
                assert len(fib) == pi.n + 1

    def test_constructive_matches_brute_force(self):
        for n in range(1, 4):
            brute = set()
            elems = list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
            for p in _set_partitions_of(elems):
                sets = [frozenset(b) for b in p]
                if any(frozenset(-x for x in b) not in sets for b in sets):
                    continue
                key = tuple(sorted(tuple(sorted(b)) for b in p))
                try:
                    typeb_from_blocks(n, p)
                except ValueError:
                    continue
                brute.add(key)
            assert brute == {t.blocks for t in typeb_partitions(n)}
            # every inversion-invariant non-crossing signed partition is covered
            count = 0
            for p in _set_partitions_of(elems):
                sets = [frozenset(b) for b in p]
                if any(frozenset(-x for x in b) not in sets for b in sets):
                    continue
                count += 1 if _signed_noncrossing(n, p) else 0
            assert count == len(typeb_partitions(n))

    def test_signed_noncrossing(self):
        for n in range(1, 5):
            for t in typeb_partitions(n):
                assert t.is_noncrossing_signed()

    def test_kreweras_involution_classes(self):
        for n in range(1, 4):
            for t in typeb_partitions(n):
                kr = typeb_kreweras(t)
                assert (kr.zero_block is None) != (t.zero_block is None)

    def test_tags_are_shifted_kreweras_blocks(self):
        for n in range(1, 5):
            for pi in noncrossing_partitions(n):
                tags = shifted_kreweras_tags(pi)
                assert len(tags) == len(pi.kreweras().blocks)
                for tag in tags:
                    t = build_nczprime(pi, tag)
                    assert t.kreweras_block == frozenset(tag)


def _set_partitions_of(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            remaining = [x for x in rest if x not in combo]
            for p in _set_partitions_of(remaining):
                yield [[first] + list(combo)] + p


def _signed_noncrossing(n, blocks):
    def pos(e):
        return e - 1 if e > 0 else n - e - 1

    idx = {}
    for k, b in enumerate(blocks):
        for e in b:
            idx[pos(e)] = k
    for a, b, c, d in itertools.combinations(range(2 * n), 4):
        if idx[a] == idx[c] and idx[b] == idx[d] and idx[b] != idx[c]:
            return False
    return True


class TestLattice:
    def test_join_extremes(self):
        for n in range(1, 6):
            for p in noncrossing_partitions(n):
                assert p.join(Partition.zero(n)) == p
                assert p.join(Partition.one(n)) == Partition.one(n)

    def test_join_is_lub_brute_force(self):
        for n in range(1, 5):
            allp = set_partitions(n)
            for p, q in itertools.product(noncrossing_partitions(n), repeat=2):
                j = p.join(q)
                assert p.refines(j) and q.refines(j)
                for r in allp:
                    if p.refines(r) and q.refines(r):
                        assert j.refines(r)

    def test_meet(self):
        p = Partition(4, [[1, 2], [3, 4]])
        q = Partition(4, [[1, 4], [2, 3]])
        assert p.meet(q) == Partition.zero(4)

    def test_typeb_join_with_intervals(self):
        for n in range(2, 4):
            for interval in interval_partitions(n):
                ibar = typeb_from_blocks(
                    n, [list(b) for b in interval.blocks] + [[-i for i in b] for b in interval.blocks]
                )
                for sigma in typeb_partitions(n):
                    joined = join_with_intervals(sigma, interval)
                    assert typeb_leq(sigma, joined) and typeb_leq(ibar, joined)
                    # least upper bound within NC^B against brute-force search
                    assert joined == typeb_join(sigma, ibar)

    def test_typeb_join_zero_one(self):
        n = 3
        zero_b = typeb_from_blocks(
            n, [[i] for i in range(1, n + 1)] + [[-i] for i in range(1, n + 1)]
        )
        one_b = typeb_from_blocks(n, [list(range(1, n + 1)) + [-i for i in range(1, n + 1)]])
        for sigma in typeb_partitions(n):
            assert typeb_join(sigma, zero_b) == sigma
            assert typeb_join(sigma, one_b) == one_b


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(min_value=1, max_value=6), st.randoms(use_true_random=False))
def test_random_nc_partition_invariants(n, rnd):
    ncs = noncrossing_partitions(n)
    p = ncs[rnd.randrange(len(ncs))]
    kr = p.kreweras()
    assert len(p.blocks) + len(kr.blocks) == n + 1
    assert kr.kreweras() == p.rotate(-1)
    outer, inner = p.outer_inner()
    assert set(outer) | set(inner) == set(p.blocks)
