from fractions import Fraction

import pytest

from cycfree.multiext import (
    MultiSeq,
    extend_cfree,
    extend_cyclic,
    extend_inf,
    extend_nc,
    extend_typeb,
    rotate_word,
)
from cycfree.partitions import (
    Partition,
    build_nczero,
    build_nczprime,
    noncrossing_partitions,
    typeb_partitions,
)
from conftest import rational


@pytest.fixture
def f(rng):
    vals = {}

    def fn(w):
        return vals.setdefault(tuple(w), rational(rng))

    return fn


@pytest.fixture
def df(rng):
    vals = {}

    def fn(w):
        w = tuple(w)
        rep = min(w[i:] + w[:i] for i in range(len(w)))
        return vals.setdefault(rep, rational(rng))

    return fn


def word(n):
    return tuple("a%d" % i for i in range(1, n + 1))


class TestExtendNC:
    def test_zero_partition(self, f):
        w = word(4)
        got = extend_nc(f, Partition.zero(4), w)
        want = Fraction(1)
        for x in w:
            want *= f((x,))
        assert got == want

    def test_one_partition(self, f):
        w = word(5)
        assert extend_nc(f, Partition.one(5), w) == f(w)

    def test_length_mismatch(self, f):
        with pytest.raises(ValueError):
            extend_nc(f, Partition.one(3), word(4))


class TestExtendCfree:
    def test_no_inner_blocks(self, f, df):
        p = Partition(4, [[1, 2], [3, 4]])
        w = word(4)
        assert extend_cfree(f, df, p, w) == extend_nc(f, p, w)

    def test_single_nesting(self, f, df):
        p = Partition(3, [[1, 3], [2]])
        w = word(3)
        assert extend_cfree(f, df, p, w) == f(("a1", "a3")) * df(("a2",))

    def test_f_equals_g_degenerates(self, f):
        for p in noncrossing_partitions(4):
            assert extend_cfree(f, f, p, word(4)) == extend_nc(f, p, word(4))


class TestExtendInf:
    def test_one_block(self, f, df):
        w = word(4)
        assert extend_inf(f, df, Partition.one(4), w) == df(w)

    def test_leibniz_split(self, f, df):
        p1 = Partition(2, [[1, 2]])
        p2 = Partition(3, [[1, 3], [2]])
        union = Partition(5, [[1, 2], [3, 5], [4]])
        w = word(5)
        wa, wb = w[:2], w[2:]
        lhs = extend_inf(f, df, union, w)

        def shift_fn(g):
            return lambda v: g(v)

        rhs = extend_inf(f, df, p1, wa) * extend_nc(f, p2, wb) + extend_nc(
            f, p1, wa
        ) * extend_inf(f, df, p2, wb)
        assert lhs == rhs

    def test_zero_df(self, f):
        zero = lambda w: Fraction(0)
        for p in noncrossing_partitions(4):
            assert extend_inf(f, zero, p, word(4)) == 0


class TestExtendCyclic:
    def test_worked_example(self, f, df):
        p = Partition(4, [[1, 4], [2, 3]])
        w = word(4)
        want = f(("a2", "a3")) * df(("a4", "a1")) + df(("a2", "a3")) * f(("a4", "a1"))
        assert extend_cyclic(f, df, p, w) == want

    def test_one_block(self, f, df):
        assert extend_cyclic(f, df, Partition.one(5), word(5)) == df(word(5))

    def test_rotation_covariance_exhaustive(self, f, df):
        for n in range(1, 6):
            w = word(n)
            for p in noncrossing_partitions(n):
                assert extend_cyclic(f, df, p, w) == extend_cyclic(
                    f, df, p.rotate(1), rotate_word(w, n - 1)
                )

    def test_linear_in_df(self, f, df):
        p = Partition(4, [[1, 4], [2, 3]])
        w = word(4)
        df2 = lambda v: 3 * df(v)
        assert extend_cyclic(f, df2, p, w) == 3 * extend_cyclic(f, df, p, w)

    def test_rejects_noncyclic_multiseq(self, f):
        ms = MultiSeq(f, 6, cyclic=False)
        with pytest.raises(ValueError):
            extend_cyclic(f, ms, Partition.one(3), word(3))


class TestExtendTypeB:
    def test_full_rotation(self, f, df):
        n = 4
        w = word(n)
        for i in range(1, n + 1):
            tb = build_nczprime(Partition.one(n), {i})
            assert extend_typeb("cyclic", f, df, tb, w) == f(w[i - 1 :] + w[: i - 1])

    def test_zero_block_whole_set(self, f, df):
        n = 3
        tb = build_nczero(Partition.one(n), (1, 2, 3))
        w = word(n)
        assert extend_typeb("plain", f, df, tb, w) == df(w)
        assert extend_typeb("cyclic", f, df, tb, w) == df(w)

    def test_plain_vs_cyclic_for_cyclic_f(self, df, rng):
        g = lambda w: rational(rng)
        for n in range(1, 5):
            w = word(n)
            for tb in typeb_partitions(n):
                assert extend_typeb("plain", df, df, tb, w) == extend_typeb(
                    "cyclic", df, df, tb, w
                )

    def test_anchor_orders_agree_on_nested_pairs(self):
        """For NCZ' <= NCZ' the tag orders coincide on shared blocks."""
        from cycfree.partitions import read_subset, typeb_leq

        for n in range(1, 5):
            prims = [t for t in typeb_partitions(n) if t.kreweras_block is not None]
            for s in prims:
                for t in prims:
                    if s is t or not typeb_leq(s, t):
                        continue
                    for b in s.abs_map().blocks:
                        r1 = read_subset(n, b, sorted(s.kreweras_block), True)
                        r2 = read_subset(n, b, sorted(t.kreweras_block), True)
                        assert r1 == r2
