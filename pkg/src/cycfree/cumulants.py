"""Moment <-> cumulant conversion for the cumulant families, and the
companion transforms (soul, inverse Markov-Krein, W, and the D-functionals).

All arithmetic is exact rational; conversions invert the defining sums by
peeling off the full-block term, uniformly across families.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .rationals import Q
from .multiext import (
    extend_cfree,
    extend_cyclic,
    extend_inf,
    extend_nc,
    extend_typeb,
    rotate_word,
)
from .partitions import (
    cyclic_interval_blocks,
    cyclic_interval_subsets,
    interval_partitions,
    irreducible_noncrossing,
    monotone_weight,
    noncrossing_partitions,
    typeb_kreweras,
    typeb_partitions,
)

FAMILIES = (
    "free",
    "boolean",
    "monotone",
    "conditional",
    "infinitesimal",
    "cyclic_free",
    "cyclic_conditional",
    "cyclic_boolean",
)


def all_words(alphabet, max_degree, min_degree=1):
    for n in range(min_degree, max_degree + 1):
        yield from itertools.product(alphabet, repeat=n)


class MomentFunctional:
    """Word -> rational values with an explicit unit value."""

    def __init__(self, alphabet, values, unit_value=Fraction(1), tracial=False, max_degree=None):
        self.alphabet = tuple(alphabet)
        self.values = {tuple(w): Q(v) for w, v in values.items()}
        self.unit_value = Q(unit_value)
        self.tracial = tracial
        if max_degree is None:
            max_degree = max((len(w) for w in self.values), default=0)
        self.max_degree = max_degree

    @classmethod
    def from_function(cls, alphabet, max_degree, fn, unit_value=Fraction(1), tracial=False):
        vals = {w: fn(w) for w in all_words(alphabet, max_degree)}
        return cls(alphabet, vals, unit_value, tracial, max_degree)

    @classmethod
    def univariate(cls, moments, letter="a", tracial=True):
        """moments = [m_0, m_1, ...]; m_0 is the unit value."""
        vals = {(letter,) * n: moments[n] for n in range(1, len(moments))}
        return cls((letter,), vals, moments[0], tracial, len(moments) - 1)

    def value(self, word):
        word = tuple(word)
        if not word:
            return self.unit_value
        try:
            return self.values[word]
        except KeyError:
            raise KeyError("moment not stored for word %r" % (word,)) from None

    def moments_of(self, letter, max_degree=None):
        d = self.max_degree if max_degree is None else max_degree
        return [self.unit_value] + [self.value((letter,) * n) for n in range(1, d + 1)]

    def is_tracial_on_stored(self):
        return all(
            self.values.get(rotate_word(w)) == v
            for w, v in self.values.items()
            if rotate_word(w) in self.values
        )

    def scaled(self, c):
        return MomentFunctional(
            self.alphabet,
            {w: c * v for w, v in self.values.items()},
            c * self.unit_value,
            self.tracial,
            self.max_degree,
        )


def linear_combination(terms, alphabet=None, max_degree=None, tracial=False):
    """Sum of coeff * functional over shared words."""
    coeffs_fns = [(Q(c), f) for c, f in terms]
    if alphabet is None:
        alphabet = coeffs_fns[0][1].alphabet
    if max_degree is None:
        max_degree = min(f.max_degree for _, f in coeffs_fns)
    vals = {
        w: sum(c * f.value(w) for c, f in coeffs_fns)
        for w in all_words(alphabet, max_degree)
    }
    unit = sum(c * f.unit_value for c, f in coeffs_fns)
    return MomentFunctional(alphabet, vals, unit, tracial, max_degree)


class CumulantTable:
    """Family-tagged word -> rational cumulant values."""

    def __init__(self, family, values, meta=None):
        if family not in FAMILIES:
            raise ValueError("unknown family %r" % (family,))
        self.family = family
        self.values = {tuple(w): Q(v) for w, v in values.items()}
        self.meta = dict(meta or {})

    def value(self, word):
        return self.values[tuple(word)]

    def evaluator(self):
        return lambda w: self.values[tuple(w)]

    def is_rotation_invariant(self):
        return all(
            self.values.get(rotate_word(w)) == v
            for w, v in self.values.items()
            if rotate_word(w) in self.values
        )


def _memoized(fn):
    memo = {}

    def inner(w):
        w = tuple(w)
        if w not in memo:
            memo[w] = fn(inner, w)
        return memo[w]

    return inner


# -- free ----------------------------------------------------------------------


def free_kappa_evaluator(psi):
    def step(self, w):
        val = psi.value(w)
        for p in noncrossing_partitions(len(w)):
            if len(p.blocks) > 1:
                val -= extend_nc(self, p, w)
        return val

    return _memoized(step)


def free_cumulants(psi, max_degree=None):
    if psi.unit_value != 1:
        raise ValueError("free cumulants need a unital functional")
    d = psi.max_degree if max_degree is None else max_degree
    k = free_kappa_evaluator(psi)
    return CumulantTable("free", {w: k(w) for w in all_words(psi.alphabet, d)})


def moments_from_free(table, alphabet=None, max_degree=None, tracial=False):
    k = table.evaluator()
    if alphabet is None:
        alphabet = sorted({w[0] for w in table.values if len(w) == 1})
    if max_degree is None:
        max_degree = max(len(w) for w in table.values)

    def m(w):
        return sum(extend_nc(k, p, w) for p in noncrossing_partitions(len(w)))

    return MomentFunctional.from_function(alphabet, max_degree, m, tracial=tracial)


# -- Boolean -------------------------------------------------------------------


def boolean_beta_evaluator(phi):
    def step(self, w):
        val = phi.value(w)
        for k in range(1, len(w)):
            val -= self(w[:k]) * phi.value(w[k:])
        return val

    return _memoized(step)


def boolean_cumulants(phi, max_degree=None):
    d = phi.max_degree if max_degree is None else max_degree
    b = boolean_beta_evaluator(phi)
    return CumulantTable("boolean", {w: b(w) for w in all_words(phi.alphabet, d)})


def moments_from_boolean(table, alphabet=None, max_degree=None):
    b = table.evaluator()
    if alphabet is None:
        alphabet = sorted({w[0] for w in table.values if len(w) == 1})
    if max_degree is None:
        max_degree = max(len(w) for w in table.values)

    def m(w):
        total = 0
        for p in interval_partitions(len(w)):
            total += extend_nc(b, p, w)
        return total

    return MomentFunctional.from_function(alphabet, max_degree, m)


def boolean_from_free(table_free, max_degree=None):
    """beta_n as the sum of kappa_pi over irreducible non-crossing partitions."""
    k = table_free.evaluator()
    if max_degree is None:
        max_degree = max(len(w) for w in table_free.values)
    alphabet = sorted({w[0] for w in table_free.values if len(w) == 1})
    vals = {}
    for w in all_words(alphabet, max_degree):
        vals[w] = sum(extend_nc(k, p, w) for p in irreducible_noncrossing(len(w)))
    return CumulantTable("boolean", vals)


# -- monotone ------------------------------------------------------------------


def monotone_K_evaluator(phi):
    def step(self, w):
        val = phi.value(w)
        for p in noncrossing_partitions(len(w)):
            if len(p.blocks) > 1:
                val -= monotone_weight(p) * extend_nc(self, p, w)
        return val

    return _memoized(step)


def monotone_cumulants(phi, max_degree=None):
    d = phi.max_degree if max_degree is None else max_degree
    K = monotone_K_evaluator(phi)
    return CumulantTable("monotone", {w: K(w) for w in all_words(phi.alphabet, d)})


def moments_from_monotone(table, alphabet=None, max_degree=None):
    K = table.evaluator()
    if alphabet is None:
        alphabet = sorted({w[0] for w in table.values if len(w) == 1})
    if max_degree is None:
        max_degree = max(len(w) for w in table.values)

    def m(w):
        return sum(
            monotone_weight(p) * extend_nc(K, p, w) for p in noncrossing_partitions(len(w))
        )

    return MomentFunctional.from_function(alphabet, max_degree, m)


# -- conditional ---------------------------------------------------------------


def conditional_cumulants(psi, phi, max_degree=None):
    if psi.unit_value != 1 or phi.unit_value != 1:
        raise ValueError("conditional cumulants need unital functionals")
    d = min(psi.max_degree, phi.max_degree) if max_degree is None else max_degree
    kap = free_kappa_evaluator(psi)

    def step(self, w):
        val = phi.value(w)
        for p in noncrossing_partitions(len(w)):
            if len(p.blocks) > 1:
                val -= extend_cfree(self, kap, p, w)
        return val

    kc = _memoized(step)
    return CumulantTable("conditional", {w: kc(w) for w in all_words(phi.alphabet, d)})


def moments_from_conditional(table_cond, table_free, alphabet=None, max_degree=None):
    kc = table_cond.evaluator()
    k = table_free.evaluator()
    if alphabet is None:
        alphabet = sorted({w[0] for w in table_cond.values if len(w) == 1})
    if max_degree is None:
        max_degree = max(len(w) for w in table_cond.values)

    def m(w):
        return sum(extend_cfree(kc, k, p, w) for p in noncrossing_partitions(len(w)))

    return MomentFunctional.from_function(alphabet, max_degree, m)


# -- soul, inverse Markov-Krein, W ----------------------------------------------


def soul_transform(psi, max_degree=None):
    """Weighted free-cumulant sum: sum over NC(n) of (n+1-|pi|) kappa_pi."""
    if psi.unit_value != 1:
        raise ValueError("soul transform needs a unital functional")
    d = psi.max_degree if max_degree is None else max_degree
    kap = free_kappa_evaluator(psi)

    def val(w):
        n = len(w)
        return sum(
            (n + 1 - len(p.blocks)) * extend_nc(kap, p, w) for p in noncrossing_partitions(n)
        )

    return MomentFunctional.from_function(psi.alphabet, d, val, tracial=psi.tracial)


def soul_boolean_univariate(psi, letter="a", max_degree=None):
    """Univariate Boolean-sum form: sum_k (n-k) psi(a^k) beta_{n-k}(a)."""
    d = psi.max_degree if max_degree is None else max_degree
    beta = boolean_beta_evaluator(psi)
    out = [Fraction(1)]
    for n in range(1, d + 1):
        out.append(
            sum((n - k) * psi.value((letter,) * k) * beta((letter,) * (n - k)) for k in range(n))
        )
    return out


def mk_transform(f, max_degree=None):
    """Inverse Markov-Krein transform [f]: cyclic sums of Boolean cumulants."""
    d = f.max_degree if max_degree is None else max_degree
    beta = boolean_beta_evaluator(f)

    def val(w):
        n = len(w)
        total = 0
        for cuts in cyclic_interval_subsets(n):
            term = 1
            for block in cyclic_interval_blocks(cuts, n):
                term *= beta(tuple(w[i - 1] for i in block))
                if term == 0:
                    break
            total += term
        return total

    return MomentFunctional.from_function(f.alphabet, d, val, tracial=True)


def w_transform(phi, max_degree=None):
    """W(phi): cyclic sum of Boolean cumulants with the lead letter repeated."""
    d = (phi.max_degree - 1) if max_degree is None else max_degree
    beta = boolean_beta_evaluator(phi)

    def val(w):
        n = len(w)
        return sum(beta(w[i:] + w[:i] + (w[i],)) for i in range(n))

    return MomentFunctional.from_function(
        phi.alphabet, d, val, unit_value=Fraction(0), tracial=True
    )


# -- infinitesimal ---------------------------------------------------------------


def infinitesimal_cumulants(psi, dpsi, max_degree=None):
    if dpsi.unit_value != 0:
        raise ValueError("direct infinitesimal cumulants need dpsi(1) = 0")
    d = min(psi.max_degree, dpsi.max_degree) if max_degree is None else max_degree
    kap = free_kappa_evaluator(psi)

    def step(self, w):
        val = dpsi.value(w)
        for p in noncrossing_partitions(len(w)):
            if len(p.blocks) > 1:
                val -= extend_inf(kap, self, p, w)
        return val

    dk = _memoized(step)
    return CumulantTable("infinitesimal", {w: dk(w) for w in all_words(dpsi.alphabet, d)})


def dpsi_infinitesimal(psi, omega, max_degree=None):
    """omega - omega(1) * soul(psi)."""
    d = min(psi.max_degree, omega.max_degree) if max_degree is None else max_degree
    return linear_combination(
        [(1, omega), (-omega.unit_value, soul_transform(psi, d))], omega.alphabet, d
    )


def infinitesimal_cumulants_general(psi, omega, max_degree=None):
    return infinitesimal_cumulants(psi, dpsi_infinitesimal(psi, omega, max_degree), max_degree)


def moments_from_infinitesimal(table_dk, table_free, soul_fn, omega_unit, alphabet, max_degree):
    dk = table_dk.evaluator()
    k = table_free.evaluator()

    def m(w):
        total = omega_unit * soul_fn.value(w)
        total += sum(extend_inf(k, dk, p, w) for p in noncrossing_partitions(len(w)))
        return total

    return MomentFunctional.from_function(
        alphabet, max_degree, m, unit_value=omega_unit
    )


# -- cyclic free -----------------------------------------------------------------


def cyclic_free_cumulants(psi, dpsi, max_degree=None, check_tracial=True):
    if dpsi.unit_value != 0:
        raise ValueError("direct cyclic free cumulants need dpsi(1) = 0")
    if check_tracial and not dpsi.is_tracial_on_stored():
        raise ValueError("dpsi must be tracial")
    d = min(psi.max_degree, dpsi.max_degree) if max_degree is None else max_degree
    kap = free_kappa_evaluator(psi)

    def step(self, w):
        val = dpsi.value(w)
        for p in noncrossing_partitions(len(w)):
            if len(p.blocks) > 1:
                val -= extend_cyclic(kap, self, p, w)
        return val

    dk = _memoized(step)
    return CumulantTable("cyclic_free", {w: dk(w) for w in all_words(dpsi.alphabet, d)})


def dpsi_cyclic(psi, omega, max_degree=None):
    """omega - omega(1) * [psi]."""
    d = min(psi.max_degree, omega.max_degree) if max_degree is None else max_degree
    return linear_combination(
        [(1, omega), (-omega.unit_value, mk_transform(psi, d))], omega.alphabet, d, tracial=True
    )


def cyclic_free_cumulants_general(psi, omega, max_degree=None):
    return cyclic_free_cumulants(psi, dpsi_cyclic(psi, omega, max_degree), max_degree)


def moments_from_cyclic_free(table_dk, table_free, mk_fn, omega_unit, alphabet, max_degree):
    dk = table_dk.evaluator()
    k = table_free.evaluator()

    def m(w):
        total = omega_unit * mk_fn.value(w)
        total += sum(extend_cyclic(k, dk, p, w) for p in noncrossing_partitions(len(w)))
        return total

    return MomentFunctional.from_function(alphabet, max_degree, m, unit_value=omega_unit)


# -- cyclic conditional -----------------------------------------------------------


def dpsi_cyclic_conditional(psi, phi, omega, max_degree=None, mk_psi=None, mk_phi=None):
    """omega - [phi] - (omega(1) - 1) * [psi]."""
    d = (
        min(psi.max_degree, phi.max_degree, omega.max_degree)
        if max_degree is None
        else max_degree
    )
    if mk_psi is None:
        mk_psi = mk_transform(psi, d)
    if mk_phi is None:
        mk_phi = mk_transform(phi, d)
    return linear_combination(
        [(1, omega), (-1, mk_phi), (1 - omega.unit_value, mk_psi)],
        omega.alphabet,
        d,
        tracial=True,
    )


def cyclic_conditional_cumulants(psi, phi, omega, max_degree=None, mk_psi=None, mk_phi=None):
    if psi.unit_value != 1 or phi.unit_value != 1:
        raise ValueError("psi and phi must be unital")
    if not omega.is_tracial_on_stored():
        raise ValueError("omega must be tracial on stored words")
    d = (
        min(psi.max_degree, phi.max_degree, omega.max_degree)
        if max_degree is None
        else max_degree
    )
    dpsi = dpsi_cyclic_conditional(psi, phi, omega, d, mk_psi=mk_psi, mk_phi=mk_phi)
    table = cyclic_free_cumulants(psi, dpsi, d, check_tracial=False)
    return CumulantTable("cyclic_conditional", table.values)


def moments_from_cyclic_conditional(
    table_dk, table_free, psi, phi, omega_unit, alphabet, max_degree, mk_psi=None, mk_phi=None
):
    """omega(w) = [phi](w) + (omega(1)-1)[psi](w) + sum over CyNC of [kappa, Dkappa]."""
    dk = table_dk.evaluator()
    k = table_free.evaluator()
    if mk_psi is None:
        mk_psi = mk_transform(psi, max_degree)
    if mk_phi is None:
        mk_phi = mk_transform(phi, max_degree)

    def m(w):
        total = mk_phi.value(w) + (omega_unit - 1) * mk_psi.value(w)
        total += sum(extend_cyclic(k, dk, p, w) for p in noncrossing_partitions(len(w)))
        return total

    return MomentFunctional.from_function(alphabet, max_degree, m, unit_value=omega_unit)


# -- cyclic Boolean ----------------------------------------------------------------


def cyclic_boolean_cumulants(phi, omega, max_degree=None):
    """c_n from the pair (phi, omega); omega(w) minus the >=2-block cyclic sums."""
    d = min(phi.max_degree, omega.max_degree) if max_degree is None else max_degree
    beta = boolean_beta_evaluator(phi)

    def val(w):
        n = len(w)
        total = omega.value(w)
        for cuts in cyclic_interval_subsets(n):
            if len(cuts) < 2:
                continue
            term = 1
            for block in cyclic_interval_blocks(cuts, n):
                term *= beta(tuple(w[i - 1] for i in block))
            total -= term
        return total

    return CumulantTable(
        "cyclic_boolean", {w: val(w) for w in all_words(omega.alphabet, d)}
    )


def moments_from_cyclic_boolean(table_c, phi, alphabet, max_degree, omega_unit=Fraction(0)):
    c = table_c.evaluator()
    beta = boolean_beta_evaluator(phi)

    def m(w):
        n = len(w)
        total = c(w)
        for cuts in cyclic_interval_subsets(n):
            if len(cuts) < 2:
                continue
            term = 1
            for block in cyclic_interval_blocks(cuts, n):
                term *= beta(tuple(w[i - 1] for i in block))
            total += term
        return total

    return MomentFunctional.from_function(alphabet, max_degree, m, unit_value=omega_unit)


# -- products of cyclically free variables -----------------------------------------


def product_cumulant_check(psi, dpsi, a_letters, b_letters, nmax):
    """Check Dkappa_n(a_1 b_1 ox ... ox a_n b_n) against the type-B Kreweras sum.

    psi, dpsi: a cyclic pair (dpsi(1) = 0, tracial) on mixed words in which the
    a-letters are cyclically free from the b-letters.  Requires words up to
    length 2 * nmax.  Returns {n: (lhs, rhs)}.
    """
    kap = free_kappa_evaluator(psi)

    def dk_step(self, w):
        val = dpsi.value(w)
        for p in noncrossing_partitions(len(w)):
            if len(p.blocks) > 1:
                val -= extend_cyclic(kap, self, p, w)
        return val

    dkap = _memoized(dk_step)

    def interleave(word_pairs):
        out = []
        for a, b in word_pairs:
            out.extend((a, b))
        return tuple(out)

    report = {}
    for n in range(1, nmax + 1):
        aw = tuple(a_letters[:n])
        bw = tuple(b_letters[:n])

        # product variables c_i = a_i b_i; their psi/dpsi values on all c-words
        def pv(word):
            return psi.value(interleave([(aw[i], bw[i]) for i in word]))

        def dv(word):
            return dpsi.value(interleave([(aw[i], bw[i]) for i in word]))

        idx = tuple(range(n))
        prod_psi = MomentFunctional.from_function(idx, n, pv)
        prod_dpsi = MomentFunctional.from_function(idx, n, dv, unit_value=Fraction(0))
        pk = free_kappa_evaluator(prod_psi)

        def pdk_step(self, w):
            val = prod_dpsi.value(w)
            for p in noncrossing_partitions(len(w)):
                if len(p.blocks) > 1:
                    val -= extend_cyclic(pk, self, p, w)
            return val

        lhs = _memoized(pdk_step)(idx)

        def ka(w):
            return kap(w)

        def dka(w):
            return dkap(w)

        rhs = Fraction(0)
        for tb in typeb_partitions(n):
            left = extend_typeb("cyclic", ka, dka, tb, aw)
            right = extend_typeb("cyclic", ka, dka, typeb_kreweras(tb), bw)
            rhs += left * right
        report[n] = (lhs, rhs)
    return report
