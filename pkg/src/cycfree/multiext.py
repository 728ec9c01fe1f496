"""Partition-indexed multilinear extensions of cumulant sequences.

Words are tuples of opaque letters; evaluators map words to exact rationals.
The cyclic and type-B extensions reorder block arguments through the
anchored cyclic orders of `partitions`.
"""

from __future__ import annotations

from .partitions import (
    anchored_key,
    block_getters,
    cyclic_reading,
    outer_inner_getters,
    read_subset,
)


class MultiSeq:
    """Arity-indexed evaluator for words, with an optional cyclic-invariance flag."""

    def __init__(self, fn, max_arity, cyclic=False):
        self._fn = fn
        self.max_arity = max_arity
        self.cyclic = cyclic

    def __call__(self, word):
        if len(word) > self.max_arity:
            raise ValueError("arity %d exceeds declared maximum %d" % (len(word), self.max_arity))
        return self._fn(tuple(word))


def _restrict(word, positions):
    return tuple(word[i - 1] for i in positions)


def extend_nc(f, p, word):
    """Product of f over the blocks, each read in natural order."""
    if len(word) != p.n:
        raise ValueError("word length must match the ground set")
    val = 1
    for g in block_getters(p):
        val *= f(g(word))
        if val == 0:
            return val
    return val


def extend_cfree(f, g, p, word):
    """f on outer blocks, g on inner blocks."""
    if len(word) != p.n:
        raise ValueError("word length must match the ground set")
    outer, inner = outer_inner_getters(p)
    val = 1
    for getter in outer:
        val *= f(getter(word))
        if val == 0:
            return val
    for getter in inner:
        val *= g(getter(word))
        if val == 0:
            return val
    return val


def extend_inf(f, df, p, word):
    """Leibniz extension: df on one block, f on the rest, natural order."""
    if len(word) != p.n:
        raise ValueError("word length must match the ground set")
    getters = block_getters(p)
    total = 0
    for k, gb in enumerate(getters):
        term = df(gb(word))
        if term == 0:
            continue
        for j, gc in enumerate(getters):
            if j != k:
                term *= f(gc(word))
                if term == 0:
                    break
        total += term
    return total


def extend_cyclic(f, df, p, word):
    """Cyclic Leibniz extension: the f-blocks are read in the <_V order."""
    if len(word) != p.n:
        raise ValueError("word length must match the ground set")
    if isinstance(df, MultiSeq) and not df.cyclic:
        raise ValueError("df must be flagged cyclically invariant")
    total = 0
    for gb, others in cyclic_reading(p):
        term = df(gb(word))
        if term == 0:
            continue
        for getter in others:
            term *= f(getter(word))
            if term == 0:
                break
        total += term
    return total


def extend_typeb(style, f, g, tb, word):
    """Type-B extensions |f,g| (plain) and [f,g] (cyclic reading).

    NCZ: g on the zero block, f on the others.  NCZ': f on all blocks.
    """
    n = tb.n
    if len(word) != n:
        raise ValueError("word length must match n")
    if style not in ("plain", "cyclic"):
        raise ValueError("style must be 'plain' or 'cyclic'")
    pi = tb.abs_map()
    if tb.zero_block is not None:
        anchor = tuple(sorted(abs(e) for e in tb.zero_block if e > 0))
        val = g(_restrict(word, anchor))
        for b in pi.blocks:
            if b == anchor:
                continue
            if style == "cyclic":
                b = read_subset(n, b, anchor, anchor_is_tag=False)
            val *= f(_restrict(word, b))
        return val
    tag = tuple(sorted(tb.kreweras_block))
    val = 1
    for b in pi.blocks:
        if style == "cyclic":
            b = read_subset(n, b, tag, anchor_is_tag=True)
        val *= f(_restrict(word, b))
    return val


def rotate_word(word, k=1):
    """(a_{k+1}, ..., a_n, a_1, ..., a_k)."""
    k %= len(word) if word else 1
    return tuple(word[k:] + word[:k])
