"""Rooted-graph products with exact walk-count moments.

Vertices are opaque hashables; edges carry an origin tag (1 or 2) recording
which factor contributed them, realizing the adjacency decomposition
A = A(1) + A(2).  Free-type products are depth-truncated; moments of degree
up to the depth are exact because length-n walks from the root never leave
the radius-n ball.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


class RootedGraph:
    def __init__(self, vertices, edges, root):
        self.vertices = tuple(vertices)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertices")
        if root not in vset:
            raise ValueError("root missing")
        seen = set()
        norm = []
        for e in edges:
            u, v = e[0], e[1]
            tag = e[2] if len(e) > 2 else 1
            if u == v:
                raise ValueError("self-loop")
            if u not in vset or v not in vset:
                raise ValueError("edge endpoint missing")
            key = (min(repr(u), repr(v)), max(repr(u), repr(v)), tag)
            if (frozenset((u, v)), tag) in seen:
                raise ValueError("duplicate edge")
            seen.add((frozenset((u, v)), tag))
            norm.append((u, v, tag))
        self.edges = tuple(norm)
        self.root = root

    def __repr__(self):
        return "RootedGraph(%d vertices, %d edges)" % (len(self.vertices), len(self.edges))

    def relabel(self, fn):
        return RootedGraph(
            [fn(v) for v in self.vertices],
            [(fn(u), fn(v), t) for u, v, t in self.edges],
            fn(self.root),
        )

    def retagged(self, tag):
        return RootedGraph(self.vertices, [(u, v, tag) for u, v, _ in self.edges], self.root)

    def adjacency(self, tags=None):
        adj = {v: [] for v in self.vertices}
        for u, v, t in self.edges:
            if tags is None or t in tags:
                adj[u].append(v)
                adj[v].append(u)
        return adj

    # -- states ------------------------------------------------------------

    def root_moments(self, max_degree):
        """[1, m_1, ..., m_N]: closed-walk counts at the root."""
        adj = self.adjacency()
        vec = {self.root: 1}
        out = [Fraction(1)]
        for _ in range(max_degree):
            vec = _apply(adj, vec)
            out.append(Fraction(vec.get(self.root, 0)))
        return out

    def word_state(self, word, vertex):
        """<delta_v, A^(t_1) ... A^(t_n) delta_v> for a tag word."""
        adjs = {t: self.adjacency({t}) for t in set(word)}
        vec = {vertex: 1}
        for t in reversed(word):
            vec = _apply(adjs[t], vec)
        return Fraction(vec.get(vertex, 0))

    def trace_word(self, word, vertices):
        """Sum of word_state over `vertices` (a W-trace when W is supplied)."""
        return sum(self.word_state(word, v) for v in vertices)


def _apply(adj, vec):
    out = {}
    for v, c in vec.items():
        for w in adj[v]:
            out[w] = out.get(w, 0) + c
    return out


# -- stock graphs ------------------------------------------------------------------


def point_graph():
    return RootedGraph(["e"], [], "e")


def path_graph(n, root_index=0):
    verts = list(range(n))
    edges = [(i, i + 1, 1) for i in range(n - 1)]
    return RootedGraph(verts, edges, root_index)


def complete_graph(n):
    verts = list(range(n))
    edges = [(i, j, 1) for i in range(n) for j in range(i + 1, n)]
    return RootedGraph(verts, edges, 0)


def cycle_graph(n):
    verts = list(range(n))
    edges = [(i, (i + 1) % n, 1) for i in range(n)]
    return RootedGraph(verts, edges, 0)


def star_graph(k):
    """K_{1,k} rooted at the hub."""
    verts = list(range(k + 1))
    edges = [(0, i, 1) for i in range(1, k + 1)]
    return RootedGraph(verts, edges, 0)


# -- elementary products -------------------------------------------------------------


def star_product(g1, g2, tag1=1, tag2=2):
    """Glue at the roots; realizes Boolean convolution in the root state."""
    v1 = [("L", v) for v in g1.vertices if v != g1.root]
    v2 = [("R", v) for v in g2.vertices if v != g2.root]
    root = ("e",)

    def m1(v):
        return root if v == g1.root else ("L", v)

    def m2(v):
        return root if v == g2.root else ("R", v)

    edges = [(m1(u), m1(v), tag1) for u, v, _ in g1.edges]
    edges += [(m2(u), m2(v), tag2) for u, v, _ in g2.edges]
    return RootedGraph([root] + v1 + v2, edges, root)


def comb_product(g1, g2, tag1=1, tag2=2):
    """A copy of g2 at every vertex of g1; realizes monotone convolution."""
    verts = [(v, w) for v in g1.vertices for w in g2.vertices]
    edges = [((u, g2.root), (v, g2.root), tag1) for u, v, _ in g1.edges]
    for v in g1.vertices:
        edges += [((v, a), (v, b), tag2) for a, b, _ in g2.edges]
    return RootedGraph(verts, edges, (g1.root, g2.root))


def orthogonal_product(g1, g2, tag1=1, tag2=2):
    """Comb with the root's g2-copy removed (component of the root)."""
    verts = [(v, g2.root) for v in g1.vertices]
    verts += [(v, w) for v in g1.vertices if v != g1.root for w in g2.vertices if w != g2.root]
    edges = [((u, g2.root), (v, g2.root), tag1) for u, v, _ in g1.edges]
    for v in g1.vertices:
        if v != g1.root:
            edges += [((v, a), (v, b), tag2) for a, b, _ in g2.edges]
    return RootedGraph(verts, edges, (g1.root, g2.root))


# -- free product and branches ----------------------------------------------------------


def _letters(g, factor):
    return [(factor, v) for v in g.vertices if v != g.root]


def free_product_truncated(g1, g2, depth):
    """Reduced-word model, words of length <= depth; root = empty word."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    factors = {1: g1, 2: g2}
    words = {()}
    frontier = [()]
    for _ in range(depth):
        new = []
        for u in frontier:
            for i, g in factors.items():
                if u and u[0][0] == i:
                    continue
                for v in g.vertices:
                    if v != g.root:
                        w = ((i, v),) + u
                        if w not in words:
                            words.add(w)
                            new.append(w)
        frontier = new
    edges = []
    for u in words:
        for i, g in factors.items():
            if u and u[0][0] == i:
                continue

            def lift(v):
                return u if v == g.root else ((i, v),) + u

            for a, b, _ in g.edges:
                la, lb = lift(a), lift(b)
                if la in words and lb in words:
                    edges.append((la, lb, i))
    return RootedGraph(sorted(words), edges, ())


def subordination_branch(g1, g2, depth, lead=1):
    """Branch of the free product: words whose rightmost letter is from `lead`."""
    fp = free_product_truncated(g1, g2, depth)
    keep = {w for w in fp.vertices if w == () or w[-1][0] == lead}
    edges = [(u, v, t) for u, v, t in fp.edges if u in keep and v in keep]
    return RootedGraph(sorted(keep), edges, ())


def conditional_product(h1, h2, g1, g2, depth):
    """(H1 |- Gamma2) star (H2 |- Gamma1), branches truncated at `depth`.

    Edge tags: H1 and G1 copies carry 1, H2 and G2 copies carry 2.
    """
    gamma2 = subordination_branch(g1, g2, depth, lead=2)
    gamma1 = subordination_branch(g1, g2, depth, lead=1)
    root = ("e",)

    def build_side(side, h, branch, htag):
        def mv(hv, w):
            if hv == h.root and w == ():
                return root
            return (side, hv, w)

        verts = [mv(v, ()) for v in h.vertices]
        edges = [(mv(u, ()), mv(v, ()), htag) for u, v, _ in h.edges]
        for v in h.vertices:
            if v == h.root:
                continue
            verts += [mv(v, w) for w in branch.vertices if w != ()]
            edges += [(mv(v, a), mv(v, b), t) for a, b, t in branch.edges]
        return verts, edges

    vl, el = build_side("L", h1, gamma2, 1)
    vr, er = build_side("R", h2, gamma1, 2)
    verts = [root] + [v for v in vl + vr if v != root]
    return RootedGraph(verts, el + er, root)


def w_vertices(product, h1, h2):
    """The H1-and-H2 level vertices of a conditional product (roots glued)."""
    out = [product.root]
    out += [("L", v, ()) for v in h1.vertices if v != h1.root]
    out += [("R", v, ()) for v in h2.vertices if v != h2.root]
    return out


def graph_product(kind, g1, g2, depth=None):
    if kind == "star":
        return star_product(g1, g2)
    if kind == "comb":
        return comb_product(g1, g2)
    if kind == "orthogonal":
        return orthogonal_product(g1, g2)
    if kind == "free":
        if depth is None:
            raise ValueError("free product needs a depth")
        return free_product_truncated(g1, g2, depth)
    raise ValueError("unknown product kind %r" % (kind,))


# -- polynomial states on the product ------------------------------------------------


class TagPolynomial:
    """Linear combination of tag words in the two adjacency generators."""

    def __init__(self, terms):
        self.terms = {tuple(w): Fraction(c) for w, c in terms.items() if c != 0}

    @staticmethod
    def power(tag, k, shift=Fraction(0)):
        """X_tag^k - shift * 1."""
        out = {(tag,) * k: Fraction(1)}
        if shift:
            out[()] = out.get((), Fraction(0)) - shift
        return TagPolynomial(out)

    def __mul__(self, other):
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, Fraction(0)) + c1 * c2
        return TagPolynomial(out)

    def state(self, graph, vertex):
        return sum(c * graph.word_state(w, vertex) for w, c in self.terms.items())

    def trace(self, graph, vertices):
        return sum(self.state(graph, v) for v in vertices)


def omega_state(product, wset, poly_or_word):
    if isinstance(poly_or_word, TagPolynomial):
        return poly_or_word.trace(product, wset)
    return product.trace_word(tuple(poly_or_word), wset)


# -- theorem verification ---------------------------------------------------------------


def verify_graph_theorems(h1, h2, g1, g2, degree):
    """Checks the conditional-product and W-trace theorems; returns a report."""
    from .series import conditional_additive, free_additive

    report = {}
    depth = degree
    prod = conditional_product(h1, h2, g1, g2, depth)
    fp = free_product_truncated(g1, g2, depth)
    wset = w_vertices(prod, h1, h2)

    mu1 = g1.root_moments(degree)
    mu2 = g2.root_moments(degree)
    nu1 = h1.root_moments(degree)
    nu2 = h2.root_moments(degree)

    # (i) root state of the product = conditionally free additive convolution
    cond = conditional_additive((mu1, nu1), (mu2, nu2))
    report["cfree_convolution"] = prod.root_moments(degree) == cond.phi
    report["free_convolution"] = fp.root_moments(degree) == free_additive(mu1, mu2).moments

    # (ii) traciality of the W-trace on mixed tag words
    tracial = True
    for n in range(2, degree + 1):
        for word in itertools.product((1, 2), repeat=n):
            a = prod.trace_word(word, wset)
            b = prod.trace_word(word[1:] + word[:1], wset)
            if a != b:
                tracial = False
    report["w_trace_tracial"] = tracial

    # (iii) cyclic-c-free factorization on centred alternating polynomials
    def phi_of(poly):
        return poly.state(prod, prod.root)

    fp_m_by_tag = {
        1: [fp.trace_word((1,) * n, [fp.root]) for n in range(degree + 1)],
        2: [fp.trace_word((2,) * n, [fp.root]) for n in range(degree + 1)],
    }

    def psi_centred_power(tag, k):
        return TagPolynomial.power(tag, k, shift=fp_m_by_tag[tag][k])

    factor_ok = True
    noncyc_ok = True
    for pattern_len in (2, 3, 4):
        for start in (1, 2):
            tags = [(start if i % 2 == 0 else 3 - start) for i in range(pattern_len)]
            for ks in itertools.product((1, 2), repeat=pattern_len):
                if sum(ks) > degree:
                    continue
                polys = [psi_centred_power(t, k) for t, k in zip(tags, ks)]
                if tags[0] != tags[-1]:
                    word = polys[0]
                    for p in polys[1:]:
                        word = word * p
                    lhs = omega_state(prod, wset, word)
                    rhs = Fraction(1)
                    for p in polys:
                        rhs *= phi_of(p)
                    if lhs != rhs:
                        factor_ok = False
                else:
                    # omega(p_n ... p_1) = phi(p_1 p_n) phi(p_{n-1}) ... phi(p_2)
                    rev = polys[-1]
                    for p in reversed(polys[:-1]):
                        rev = rev * p
                    lhs2 = omega_state(prod, wset, rev)
                    rhs2 = phi_of(polys[0] * polys[-1])
                    for p in polys[1:-1]:
                        rhs2 *= phi_of(p)
                    if lhs2 != rhs2:
                        noncyc_ok = False
    report["cyclic_cfree_factorization"] = factor_ok
    report["noncyclic_pairing"] = noncyc_ok

    # (iv) single-algebra omega-moments equal the H_i trace moments
    ok4 = True
    for k in range(1, degree + 1):
        lhs1 = prod.trace_word((1,) * k, wset)
        rhs1 = h1.trace_word((1,) * k, h1.vertices)
        lhs2 = prod.trace_word((2,) * k, wset)
        rhs2 = h2.retagged(2).trace_word((2,) * k, h2.vertices)
        if lhs1 != rhs1 or lhs2 != rhs2:
            ok4 = False
    report["w_restriction_trace"] = ok4

    report["omega_unit"] = Fraction(len(wset)) == Fraction(
        len(h1.vertices) + len(h2.vertices) - 1
    )
    return report
