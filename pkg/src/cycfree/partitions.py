"""Set partitions and the partition posets of non-commutative probability.

Ground sets are always {1..n}.  Partitions are stored as tuples of sorted
tuples, canonically ordered by block minimum, so equality and hashing are
cheap and deterministic.  Type-B partitions live on the signed set
{-n..-1, 1..n}.
"""

from __future__ import annotations

import itertools
import operator
from fractions import Fraction
from functools import lru_cache


def _canonical_blocks(blocks):
    bs = tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))
    return bs


class Partition:
    """A set partition of {1..n}."""

    __slots__ = ("n", "blocks")

    def __init__(self, n, blocks):
        self.n = n
        self.blocks = _canonical_blocks(blocks)
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            seen.update(b)
        if seen != set(range(1, n + 1)) or sum(len(b) for b in self.blocks) != n:
            raise ValueError("blocks must partition {1..%d}" % n)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.n == other.n and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n, self.blocks))

    def __repr__(self):
        return "Partition(%d, %s)" % (self.n, list(map(list, self.blocks)))

    def __len__(self):
        return len(self.blocks)

    @staticmethod
    def zero(n):
        return Partition(n, [[i] for i in range(1, n + 1)])

    @staticmethod
    def one(n):
        return Partition(n, [list(range(1, n + 1))])

    def block_index_of(self, i):
        for k, b in enumerate(self.blocks):
            if i in b:
                return k
        raise KeyError(i)

    def block_of(self, i):
        return self.blocks[self.block_index_of(i)]

    def same_block(self, i, j):
        return self.block_index_of(i) == self.block_index_of(j)

    def is_noncrossing(self):
        idx = {}
        for k, b in enumerate(self.blocks):
            for i in b:
                idx[i] = k
        for a, b, c, d in _crossing_quadruples(self.n):
            if idx[a] == idx[c] and idx[b] == idx[d] and idx[b] != idx[c]:
                return False
        return True

    def rotate(self, k=1):
        """Shift every element by k (mod n), the cyclic rotation i -> i+k."""
        n = self.n
        return Partition(n, [[(i + k - 1) % n + 1 for i in b] for b in self.blocks])

    def kreweras(self):
        """Kreweras complement of a non-crossing partition.

        Realized through the cycle decomposition of sigma^-1 * (1 2 ... n),
        where sigma has the blocks as increasing cycles.
        """
        if not self.is_noncrossing():
            raise ValueError("Kreweras complement requires a non-crossing partition")
        n = self.n
        sigma_inv = {}
        for b in self.blocks:
            for j, i in enumerate(b):
                sigma_inv[b[(j + 1) % len(b)]] = i
        perm = {i: sigma_inv[i % n + 1] for i in range(1, n + 1)}
        blocks, seen = [], set()
        for i in range(1, n + 1):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = perm[j]
            blocks.append(cyc)
        return Partition(n, blocks)

    def nesting_parent(self):
        """Innermost enclosing block index per block (None for outer blocks).

        Only meaningful for non-crossing partitions, where nesting is hull
        containment.
        """
        parents = []
        for k, b in enumerate(self.blocks):
            best, best_span = None, None
            for j, c in enumerate(self.blocks):
                if j == k:
                    continue
                if c[0] < b[0] and b[-1] < c[-1]:
                    span = c[-1] - c[0]
                    if best is None or span < best_span:
                        best, best_span = j, span
            parents.append(best)
        return parents

    def outer_inner(self):
        parents = self.nesting_parent()
        outer = tuple(b for b, p in zip(self.blocks, parents) if p is None)
        inner = tuple(b for b, p in zip(self.blocks, parents) if p is not None)
        return outer, inner

    def refines(self, other):
        """True iff every block of self lies inside a block of other."""
        if self.n != other.n:
            raise ValueError("ground-set size mismatch")
        return all(set(b) <= set(other.block_of(b[0])) for b in self.blocks)

    def join(self, other):
        """Join in the full partition lattice (finest common coarsening)."""
        if self.n != other.n:
            raise ValueError("ground-set size mismatch")
        return _union_find_join(self.n, self.blocks + other.blocks)

    def meet(self, other):
        """Meet in the partition lattice (blockwise intersections)."""
        if self.n != other.n:
            raise ValueError("ground-set size mismatch")
        blocks = []
        for b in self.blocks:
            for c in other.blocks:
                common = sorted(set(b) & set(c))
                if common:
                    blocks.append(common)
        return Partition(self.n, blocks)


def _union_find_join(n, blocks):
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in blocks:
        for i in b[1:]:
            parent[find(i)] = find(b[0])
    groups = {}
    for i in range(1, n + 1):
        groups.setdefault(find(i), []).append(i)
    return Partition(n, list(groups.values()))


@lru_cache(maxsize=None)
def _crossing_quadruples(n):
    return tuple(itertools.combinations(range(1, n + 1), 4))


def set_partitions(n):
    """All set partitions of {1..n}, by restricted growth strings."""
    if n == 0:
        return [Partition(0, [])] if False else []
    out = []

    def rec(i, blocks):
        if i > n:
            out.append(Partition(n, [list(b) for b in blocks]))
            return
        for b in blocks:
            b.append(i)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        rec(i + 1, blocks)
        blocks.pop()

    rec(1, [])
    return out


@lru_cache(maxsize=None)
def noncrossing_partitions(n):
    """NC(n) in a deterministic order."""
    return tuple(p for p in set_partitions(n) if p.is_noncrossing())


@lru_cache(maxsize=None)
def irreducible_noncrossing(n):
    """Non-crossing partitions with 1 and n in the same block."""
    return tuple(p for p in noncrossing_partitions(n) if p.same_block(1, n))


@lru_cache(maxsize=None)
def interval_partitions(n):
    """Interval partitions, one per composition of n."""
    out = []
    for cuts in itertools.chain.from_iterable(
        itertools.combinations(range(1, n), k) for k in range(n)
    ):
        bounds = (0,) + cuts + (n,)
        out.append(Partition(n, [list(range(a + 1, b + 1)) for a, b in zip(bounds, bounds[1:])]))
    return tuple(out)


def cyclic_interval_subsets(n):
    """Nonempty cut-point subsets of [n]; each encodes a cyclic interval partition.

    Cuts (i_1 < ... < i_l) give blocks [i_k, i_{k+1}) wrapping at the end;
    each block is read starting at its cut point.
    """
    return itertools.chain.from_iterable(
        itertools.combinations(range(1, n + 1), k) for k in range(1, n + 1)
    )


@lru_cache(maxsize=None)
def cyclic_interval_blocks(cuts, n):
    """Blocks (as reading-ordered tuples) of the cyclic interval partition."""
    blocks = []
    l = len(cuts)
    for k in range(l):
        start = cuts[k]
        stop = cuts[(k + 1) % l]
        block = []
        i = start
        while True:
            block.append(i)
            i = i % n + 1
            if i == stop:
                break
            if len(block) > n:
                raise AssertionError("bad cyclic interval")
        blocks.append(tuple(block))
    return blocks


class OrderedPartition:
    """A partition together with a total order on its blocks.

    `order` lists block indices from smallest to largest in the order.
    """

    __slots__ = ("base", "order")

    def __init__(self, base, order):
        if sorted(order) != list(range(len(base.blocks))):
            raise ValueError("order must permute the block indices")
        self.base = base
        self.order = tuple(order)

    def __eq__(self, other):
        return (
            isinstance(other, OrderedPartition)
            and self.base == other.base
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.base, self.order))

    def __repr__(self):
        return "OrderedPartition(%r, %r)" % (self.base, self.order)

    def is_monotone(self):
        """Order compatible with nesting: outer blocks precede nested blocks."""
        if not self.base.is_noncrossing():
            return False
        parents = self.base.nesting_parent()
        pos = {b: k for k, b in enumerate(self.order)}
        for k, p in enumerate(parents):
            j = p
            while j is not None:
                if pos[j] > pos[k]:
                    return False
                j = parents[j]
        return True


@lru_cache(maxsize=None)
def monotone_partitions(n):
    """All monotone partitions (non-crossing base, nesting-compatible order)."""
    out = []
    for p in noncrossing_partitions(n):
        for order in itertools.permutations(range(len(p.blocks))):
            op = OrderedPartition(p, order)
            if op.is_monotone():
                out.append(op)
    return tuple(out)


def monotone_weight(p):
    """(#nesting-compatible orders) / |pi|! via the forest hook formula."""
    parents = p.nesting_parent()
    children = {k: [] for k in range(len(p.blocks))}
    for k, par in enumerate(parents):
        if par is not None:
            children[par].append(k)

    def subtree(k):
        return 1 + sum(subtree(c) for c in children[k])

    w = Fraction(1)
    for k in range(len(p.blocks)):
        w /= subtree(k)
    return w


def enumerate_partitions(kind, n):
    """Deterministic, duplicate-free enumeration of the requested poset."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "all":
        return list(set_partitions(n))
    if kind == "nc":
        return list(noncrossing_partitions(n))
    if kind == "interval":
        return list(interval_partitions(n))
    if kind == "monotone":
        return list(monotone_partitions(n))
    if kind == "typeB":
        return list(typeb_partitions(n))
    if kind == "typeB_NCZ":
        return [t for t in typeb_partitions(n) if t.zero_block is not None]
    if kind == "typeB_NCZprime":
        return [t for t in typeb_partitions(n) if t.kreweras_block is not None]
    raise ValueError("unknown kind %r" % (kind,))


# -- cyclic orders anchored at a block or a Kreweras-complement tag ----------


def anchored_key(n, anchor, element, anchor_is_tag):
    """Sort key placing `element` in its cyclic arc relative to the anchor.

    For a block anchor V the arcs are ]v_i, v_{i+1}[ (reading starts after
    each v).  For a tag anchor R the chains start at the tag elements.
    Returns (arc_start, offset); elements of the anchor itself only have a
    key in the tag case.
    """
    anchor = sorted(anchor)
    if anchor_is_tag:
        below = [r for r in anchor if r <= element]
    else:
        if element in anchor:
            raise ValueError("element lies in the anchor block")
        below = [r for r in anchor if r < element]
    start = below[-1] if below else anchor[-1]
    return (start, (element - start) % n)


def read_subset(n, subset, anchor, anchor_is_tag):
    """Elements of `subset` in the anchored cyclic order.

    The subset must sit inside a single arc/chain, which holds for blocks of
    a non-crossing partition against one of its blocks (or a complement
    block); asserted here.
    """
    keyed = sorted((anchored_key(n, anchor, e, anchor_is_tag), e) for e in subset)
    starts = {k[0][0] for k in keyed}
    if len(starts) > 1:
        raise ValueError("subset is split across arcs of the anchor")
    return tuple(e for _, e in keyed)


def positions_getter(positions):
    """C-speed extractor of 1-indexed positions from a word tuple."""
    idx = [i - 1 for i in positions]
    if len(idx) == 1:
        g = operator.itemgetter(idx[0])
        return lambda w: (g(w),)
    return operator.itemgetter(*idx)


@lru_cache(maxsize=None)
def cyclic_reading(p):
    """Per block V of p: (getter for V, getters for other blocks in <_V order).

    Cached on the partition; the heavy evaluators in `multiext` hit this for
    every word sharing the same partition.
    """
    out = []
    for k, b in enumerate(p.blocks):
        others = tuple(
            positions_getter(read_subset(p.n, c, b, anchor_is_tag=False))
            for j, c in enumerate(p.blocks)
            if j != k
        )
        out.append((positions_getter(b), others))
    return tuple(out)


@lru_cache(maxsize=None)
def block_getters(p):
    return tuple(positions_getter(b) for b in p.blocks)


@lru_cache(maxsize=None)
def outer_inner_getters(p):
    outer, inner = p.outer_inner()
    return (
        tuple(positions_getter(b) for b in outer),
        tuple(positions_getter(b) for b in inner),
    )


@lru_cache(maxsize=None)
def outer_inner_cached(p):
    return p.outer_inner()


def read_word(word, subset, order):
    """Letters of `word` (1-indexed positions) at `subset`, in `order`'s reading.

    `order` is (anchor, anchor_is_tag) as for read_subset.
    """
    anchor, is_tag = order
    positions = read_subset(len(word), subset, anchor, is_tag)
    return tuple(word[i - 1] for i in positions)


# -- type B -------------------------------------------------------------------


def _pos(e, n):
    """Position of signed element e on the 2n-cycle (1..n, -1..-n)."""
    return e - 1 if e > 0 else n - e - 1


def _elem(p, n):
    return p + 1 if p < n else -(p - n + 1)


class TypeBPartition:
    """Inversion-invariant non-crossing partition of {-n..-1, 1..n}.

    Exactly one of `zero_block` (the self-inverse block, NCZ case) and
    `kreweras_block` (the chain-start tag R, NCZ' case) is set.
    """

    __slots__ = ("n", "blocks", "zero_block", "kreweras_block")

    def __init__(self, n, blocks, zero_block=None, kreweras_block=None):
        self.n = n
        self.blocks = tuple(sorted((tuple(sorted(b)) for b in blocks)))
        seen = set()
        for b in self.blocks:
            seen.update(b)
        full = set(range(1, n + 1)) | set(range(-n, 0))
        if seen != full or sum(len(b) for b in self.blocks) != 2 * n:
            raise ValueError("blocks must partition the signed set")
        block_sets = [frozenset(b) for b in self.blocks]
        for b in block_sets:
            if frozenset(-x for x in b) not in block_sets:
                raise ValueError("not inversion-invariant")
        if (zero_block is None) == (kreweras_block is None):
            raise ValueError("exactly one of zero_block / kreweras_block required")
        self.zero_block = frozenset(zero_block) if zero_block is not None else None
        self.kreweras_block = frozenset(kreweras_block) if kreweras_block is not None else None
        if self.zero_block is not None:
            if frozenset(-x for x in self.zero_block) != self.zero_block:
                raise ValueError("zero block must be self-inverse")
            if self.zero_block not in block_sets:
                raise ValueError("zero block must be a block")

    def __eq__(self, other):
        return (
            isinstance(other, TypeBPartition)
            and self.n == other.n
            and self.blocks == other.blocks
            and self.zero_block == other.zero_block
            and self.kreweras_block == other.kreweras_block
        )

    def __hash__(self):
        return hash((self.n, self.blocks, self.zero_block, self.kreweras_block))

    def __repr__(self):
        tag = ("zero=%s" % sorted(self.zero_block)) if self.zero_block else (
            "R=%s" % sorted(self.kreweras_block)
        )
        return "TypeBPartition(%d, %s, %s)" % (self.n, list(map(list, self.blocks)), tag)

    def is_noncrossing_signed(self):
        n = self.n
        idx = {}
        for k, b in enumerate(self.blocks):
            for e in b:
                idx[_pos(e, n)] = k
        for a, b, c, d in itertools.combinations(range(2 * n), 4):
            if idx[a] == idx[c] and idx[b] == idx[d] and idx[b] != idx[c]:
                return False
        return True

    def abs_map(self):
        """Image under |.|, a non-crossing partition of [n]."""
        merged = _union_find_join(self.n, [[abs(e) for e in b] for b in self.blocks])
        return merged


def build_nczero(pi, block):
    """The NCZ fiber element of pi determined by the chosen block."""
    block = tuple(sorted(block))
    if block not in pi.blocks:
        raise ValueError("anchor must be a block of pi")
    lo, hi = block[0], block[-1]
    blocks = [list(block) + [-i for i in block]]
    for b in pi.blocks:
        if b == block:
            continue
        lift = [(-i if i < lo else i) for i in b]
        blocks.append(lift)
        blocks.append([-x for x in lift])
    return TypeBPartition(pi.n, blocks, zero_block=blocks[0])


def shifted_kreweras_tags(pi):
    """Blocks of Kr(pi) shifted by +1 (the chain-start labelling of NCZ' tags)."""
    n = pi.n
    return [frozenset(i % n + 1 for i in b) for b in pi.kreweras().blocks]


def build_nczprime(pi, tag):
    """The NCZ' fiber element of pi determined by the chain-start tag R."""
    tag = frozenset(tag)
    if tag not in set(shifted_kreweras_tags(pi)):
        raise ValueError("tag must be a shifted Kreweras-complement block")
    n = pi.n
    blocks = []
    for b in pi.blocks:
        start = anchored_key(n, sorted(tag), b[0], True)[0]
        lift = [(i if i >= start else -i) for i in b]
        blocks.append(lift)
        blocks.append([-x for x in lift])
    tb = TypeBPartition(n, blocks, kreweras_block=tag)
    return tb


@lru_cache(maxsize=None)
def typeb_partitions(n):
    """NC^B(n) via its fibers over NC(n): |pi| + |Kr(pi)| elements each."""
    out = []
    for pi in noncrossing_partitions(n):
        for b in pi.blocks:
            out.append(build_nczero(pi, b))
        for tag in shifted_kreweras_tags(pi):
            out.append(build_nczprime(pi, tag))
    return tuple(out)


@lru_cache(maxsize=None)
def _typeb_lookup(n):
    return {t.blocks: t for t in typeb_partitions(n)}


def typeb_from_blocks(n, blocks):
    """Classify a raw signed partition as a tagged TypeBPartition."""
    key = tuple(sorted(tuple(sorted(b)) for b in blocks))
    try:
        return _typeb_lookup(n)[key]
    except KeyError:
        raise ValueError("not a type-B non-crossing partition") from None


def _kreweras_positions(blocks_of_positions, m):
    """Ordinary Kreweras complement on the m-cycle, positions 0..m-1."""
    sigma_inv = {}
    for b in blocks_of_positions:
        b = sorted(b)
        for j, i in enumerate(b):
            sigma_inv[b[(j + 1) % len(b)]] = i
    perm = {i: sigma_inv[(i + 1) % m] for i in range(m)}
    blocks, seen = [], set()
    for i in range(m):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        blocks.append(cyc)
    return blocks


def typeb_kreweras(tb):
    """Kreweras complement inside NC^B(n) (positional, on the 2n-cycle)."""
    n = tb.n
    pos_blocks = [[_pos(e, n) for e in b] for b in tb.blocks]
    kr = _kreweras_positions(pos_blocks, 2 * n)
    return typeb_from_blocks(n, [[_elem(p, n) for p in b] for b in kr])


def typeb_leq(s, t):
    """Refinement order on type-B partitions."""
    tsets = [set(b) for b in t.blocks]
    return all(any(set(b) <= ts for ts in tsets) for b in s.blocks)


def typeb_join(s, t):
    """Least upper bound in NC^B(n), by minimum over the (small) lattice."""
    if s.n != t.n:
        raise ValueError("size mismatch")
    ups = [u for u in typeb_partitions(s.n) if typeb_leq(s, u) and typeb_leq(t, u)]
    mins = [u for u in ups if not any(v is not u and typeb_leq(v, u) for v in ups)]
    if len(mins) != 1:
        raise AssertionError("join is not unique")
    return mins[0]


def interval_bar(intervals, n):
    """The NCZ'-style doubling {I, -I, ...} of an interval partition of [n]."""
    blocks = []
    for b in intervals.blocks:
        blocks.append(list(b))
        blocks.append([-i for i in b])
    return blocks


def join_with_intervals(sigma, intervals):
    """Partition-lattice join of a type-B partition with Ibar.

    The result is validated to be type-B non-crossing and returned tagged.
    """
    if sigma.n != intervals.n:
        raise ValueError("size mismatch")
    n = sigma.n
    signed = [list(b) for b in sigma.blocks] + interval_bar(intervals, n)
    pos_blocks = [[_pos(e, n) for e in b] for b in signed]
    joined = _union_find_join(2 * n, [[p + 1 for p in b] for b in pos_blocks])
    blocks = [[_elem(p - 1, n) for p in b] for b in joined.blocks]
    return typeb_from_blocks(n, blocks)
