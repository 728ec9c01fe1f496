"""Joint moment functionals of tuples declared independent, built from
marginal data by monochromatic cumulant sums, with verification of the
defining moment conditions and the companion (tensor-algebra) constructions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cumulants import (
    CumulantTable,
    MomentFunctional,
    all_words,
    boolean_beta_evaluator,
    conditional_cumulants,
    cyclic_free_cumulants,
    free_cumulants,
    free_kappa_evaluator,
    linear_combination,
    mk_transform,
    soul_transform,
    w_transform,
)
from .multiext import extend_cfree, extend_cyclic, extend_inf, extend_nc, rotate_word
from .partitions import interval_partitions, noncrossing_partitions

MODES = (
    "free",
    "boolean",
    "monotone",
    "conditional",
    "infinitesimal",
    "cyclic_free",
    "cyclic_conditional",
)


class MarginalSpec:
    """Moments of one algebra's generators under the states it carries."""

    def __init__(self, label, alphabet, psi=None, phi=None, omega=None, omega_unit=None):
        self.label = label
        self.alphabet = tuple(alphabet)
        self.psi = psi
        self.phi = phi
        self.omega = omega
        self.omega_unit = None if omega_unit is None else Fraction(omega_unit)

    def functional(self, which, max_degree, unit=Fraction(1)):
        vals = getattr(self, which)
        if vals is None:
            raise ValueError("marginal %r carries no %s data" % (self.label, which))
        return MomentFunctional(self.alphabet, vals, unit, max_degree=max_degree)


class JointTriple:
    def __init__(self, mode, algebra_of, psi, phi=None, omega=None, max_degree=None):
        self.mode = mode
        self.algebra_of = dict(algebra_of)
        self.letters = tuple(self.algebra_of)
        self.psi = psi
        self.phi = phi
        self.omega = omega
        if max_degree is None:
            max_degree = (psi if psi is not None else phi).max_degree
        self.max_degree = max_degree

    def functional(self, which):
        f = getattr(self, which)
        if f is None:
            raise ValueError("joint carries no %s" % which)
        return f


def _mono_evaluator(tables, algebra_of):
    """Evaluator: marginal cumulant on monochromatic words, 0 on mixed."""

    def ev(word):
        labels = {algebra_of[x] for x in word}
        if len(labels) != 1:
            return Fraction(0)
        return tables[labels.pop()](word)

    return ev


def _check_alphabets(marginals):
    algebra_of = {}
    for m in marginals:
        for x in m.alphabet:
            if x in algebra_of:
                raise ValueError("letter %r appears in two marginals" % (x,))
            algebra_of[x] = m.label
    return algebra_of


def build_joint(mode, marginals, max_degree, omega_unit=None):
    """Joint functionals with vanishing mixed cumulants, per mode."""
    if mode not in MODES:
        raise ValueError("unknown mode %r" % (mode,))
    algebra_of = _check_alphabets(marginals)
    alphabet = tuple(algebra_of)
    d = max_degree

    def psi_of(m):
        return m.functional("psi", d)

    if mode == "monotone":
        return _build_monotone(marginals, algebra_of, d)

    if mode == "boolean":
        betas = {
            m.label: boolean_beta_evaluator(m.functional("phi", d)) for m in marginals
        }
        bet = _mono_evaluator(betas, algebra_of)

        def joint_phi_val(w):
            return sum(extend_nc(bet, p, w) for p in interval_partitions(len(w)))

        phi = MomentFunctional.from_function(alphabet, d, joint_phi_val)
        return JointTriple(mode, algebra_of, None, phi=phi, max_degree=d)

    kappas = {m.label: free_cumulants(psi_of(m), d).evaluator() for m in marginals}
    kap = _mono_evaluator(kappas, algebra_of)

    def joint_psi_val(w):
        return sum(extend_nc(kap, p, w) for p in noncrossing_partitions(len(w)))

    psi = MomentFunctional.from_function(alphabet, d, joint_psi_val)

    if mode == "free":
        return JointTriple(mode, algebra_of, psi, max_degree=d)

    if mode == "conditional":
        phi = _conditional_joint_phi(marginals, algebra_of, kap, d)
        return JointTriple(mode, algebra_of, psi, phi=phi, max_degree=d)

    if mode in ("infinitesimal", "cyclic_free"):
        delta = _shared_omega_unit(marginals, omega_unit)
        dtables = {}
        for m in marginals:
            p = psi_of(m)
            om = m.functional("omega", d, unit=delta)
            if mode == "infinitesimal":
                base = soul_transform(p, d)
                dpsi = linear_combination([(1, om), (-delta, base)], m.alphabet, d)
                from .cumulants import infinitesimal_cumulants

                dtables[m.label] = infinitesimal_cumulants(p, dpsi, d).evaluator()
            else:
                base = mk_transform(p, d)
                dpsi = linear_combination(
                    [(1, om), (-delta, base)], m.alphabet, d, tracial=True
                )
                dtables[m.label] = cyclic_free_cumulants(p, dpsi, d).evaluator()
        dk = _mono_evaluator(dtables, algebra_of)
        if mode == "infinitesimal":
            carrier = soul_transform(psi, d)
            extend = extend_inf
        else:
            carrier = mk_transform(psi, d)
            extend = extend_cyclic

        def joint_omega_val(w):
            total = delta * carrier.value(w)
            total += sum(extend(kap, dk, p, w) for p in noncrossing_partitions(len(w)))
            return total

        omega = MomentFunctional.from_function(
            alphabet, d, joint_omega_val, unit_value=delta, tracial=(mode == "cyclic_free")
        )
        return JointTriple(mode, algebra_of, psi, omega=omega, max_degree=d)

    # cyclic_conditional
    delta = _shared_omega_unit(marginals, omega_unit)
    phi = _conditional_joint_phi(marginals, algebra_of, kap, d)
    dtables = {}
    for m in marginals:
        p = psi_of(m)
        f = m.functional("phi", d)
        om = m.functional("omega", d, unit=delta)
        from .cumulants import cyclic_conditional_cumulants

        dtables[m.label] = cyclic_conditional_cumulants(p, f, om, d).evaluator()
    dk = _mono_evaluator(dtables, algebra_of)
    mk_psi = mk_transform(psi, d)
    mk_phi = mk_transform(phi, d)

    def joint_omega_val(w):
        total = mk_phi.value(w) + (delta - 1) * mk_psi.value(w)
        total += sum(extend_cyclic(kap, dk, p, w) for p in noncrossing_partitions(len(w)))
        return total

    omega = MomentFunctional.from_function(
        alphabet, d, joint_omega_val, unit_value=delta, tracial=True
    )
    return JointTriple(mode, algebra_of, psi, phi=phi, omega=omega, max_degree=d)


def _shared_omega_unit(marginals, omega_unit):
    units = {m.omega_unit for m in marginals if m.omega_unit is not None}
    if omega_unit is not None:
        units.add(Fraction(omega_unit))
    if len(units) > 1:
        raise ValueError("omega(1) must be shared across the space, got %s" % units)
    if not units:
        raise ValueError("omega(1) unspecified")
    return units.pop()


def _conditional_joint_phi(marginals, algebra_of, kap, d):
    ctables = {
        m.label: conditional_cumulants(m.functional("psi", d), m.functional("phi", d), d).evaluator()
        for m in marginals
    }
    kc = _mono_evaluator(ctables, algebra_of)
    alphabet = tuple(algebra_of)

    def val(w):
        return sum(extend_cfree(kc, kap, p, w) for p in noncrossing_partitions(len(w)))

    return MomentFunctional.from_function(alphabet, d, val)


def _build_monotone(marginals, algebra_of, d):
    """Monotone joint by the definitional extraction of higher-index runs.

    Monotone independence is one-state; the state may arrive in the psi or
    the phi slot and the joint is returned in the same slot.
    """
    slot = "psi" if all(m.psi is not None for m in marginals) else "phi"
    order = {m.label: i for i, m in enumerate(marginals)}
    psis = {m.label: m.functional(slot, d) for m in marginals}
    alphabet = tuple(algebra_of)

    def val(word):
        runs = decompose_runs(word, algebra_of)
        while len(runs) > 1:
            top = max(order[lab] for lab, _ in runs)
            if top == min(order[lab] for lab, _ in runs):
                break
            i = next(k for k, (lab, _) in enumerate(runs) if order[lab] == top)
            lab, seg = runs[i]
            factor = psis[lab].value(seg)
            rest = runs[: i] + runs[i + 1 :]
            merged = []
            for lab2, seg2 in rest:
                if merged and merged[-1][0] == lab2:
                    merged[-1] = (lab2, merged[-1][1] + seg2)
                else:
                    merged.append((lab2, seg2))
            return factor * val(tuple(itertools.chain.from_iterable(s for _, s in merged)))
        lab = runs[0][0]
        return psis[lab].value(word)

    joint = MomentFunctional.from_function(alphabet, d, val)
    if slot == "psi":
        return JointTriple("monotone", algebra_of, joint, max_degree=d)
    return JointTriple("monotone", algebra_of, None, phi=joint, max_degree=d)


def decompose_runs(word, algebra_of):
    runs = []
    for x in word:
        lab = algebra_of[x]
        if runs and runs[-1][0] == lab:
            runs[-1] = (lab, runs[-1][1] + (x,))
        else:
            runs.append((lab, (x,)))
    return tuple(runs)


# -- verification -----------------------------------------------------------------


def _run_sequences(jt, max_degree, cyclic_only=False, min_runs=2):
    """Alternating sequences of (algebra, word) runs, total length <= max_degree."""
    by_alg = {}
    for x, lab in jt.algebra_of.items():
        by_alg.setdefault(lab, []).append(x)
    labels = sorted(by_alg)

    def words_of(lab, max_len):
        out = []
        for n in range(1, max_len + 1):
            out.extend(itertools.product(by_alg[lab], repeat=n))
        return out

    for r in range(min_runs, max_degree + 1):
        for pattern in itertools.product(labels, repeat=r):
            if any(pattern[i] == pattern[i + 1] for i in range(r - 1)):
                continue
            if cyclic_only and pattern[0] == pattern[-1]:
                continue
            budget = max_degree - r

            def fill(i, remaining):
                if i == r:
                    yield ()
                    return
                for w in words_of(pattern[i], 1 + remaining):
                    for rest in fill(i + 1, remaining - (len(w) - 1)):
                        yield (w,) + rest

            for combo in fill(0, budget):
                yield tuple(zip(pattern, combo))


def centred_expectation(fn, psi, runs):
    """fn(prod_i (w_i - psi(w_i) 1)), expanded multilinearly."""
    n = len(runs)
    total = Fraction(0)
    for mask in range(1 << n):
        coeff = Fraction(1)
        kept = []
        for i in range(n):
            if mask & (1 << i):
                kept.append(runs[i][1])
            else:
                coeff *= -psi.value(runs[i][1])
        word = tuple(itertools.chain.from_iterable(kept))
        total += coeff * fn(word)
    return total


def verify_defining_conditions(jt, mode=None, max_degree=None):
    """Exhaustive check of the mode's moment conditions; returns violations."""
    mode = jt.mode if mode is None else mode
    d = jt.max_degree if max_degree is None else max_degree
    psi = jt.psi
    violations = []

    def note(kind, runs, lhs, rhs):
        if lhs != rhs:
            violations.append((kind, runs, lhs, rhs))

    if mode in ("free", "conditional", "infinitesimal", "cyclic_free", "cyclic_conditional"):
        for runs in _run_sequences(jt, d):
            note("psi_alternating", runs, centred_expectation(psi.value, psi, runs), Fraction(0))

    if mode == "boolean":
        phi = jt.phi
        for runs in _run_sequences(jt, d):
            lhs = phi.value(tuple(itertools.chain.from_iterable(w for _, w in runs)))
            rhs = Fraction(1)
            for _, w in runs:
                rhs *= phi.value(w)
            note("boolean_factorization", runs, lhs, rhs)

    if mode == "monotone":
        state = jt.psi if jt.psi is not None else jt.phi
        order = {}
        for x, lab in jt.algebra_of.items():
            order.setdefault(lab, len(order))
        for runs in _run_sequences(jt, d):
            full = tuple(itertools.chain.from_iterable(w for _, w in runs))
            top = max(runs, key=lambda r: order[r[0]])[0]
            for k, (lab, w) in enumerate(runs):
                if lab != top:
                    continue
                rest = tuple(
                    itertools.chain.from_iterable(
                        w2 for j, (_, w2) in enumerate(runs) if j != k
                    )
                )
                note(
                    "monotone_extraction",
                    runs,
                    state.value(full),
                    state.value(w) * state.value(rest),
                )

    if mode in ("conditional", "cyclic_conditional"):
        phi = jt.phi
        for runs in _run_sequences(jt, d):
            lhs = centred_expectation(phi.value, psi, runs)
            rhs = Fraction(1)
            for _, w in runs:
                rhs *= phi.value(w) - psi.value(w)
            note("phi_factorization", runs, lhs, rhs)

    if mode == "infinitesimal":
        omega = jt.omega
        for runs in _run_sequences(jt, d):
            lhs = centred_expectation(omega.value, psi, runs)
            rhs = Fraction(0)
            for i, (_, w) in enumerate(runs):
                rest = runs[:i] + runs[i + 1 :]
                rhs += (omega.value(w) - omega.unit_value * psi.value(w)) * (
                    centred_expectation(psi.value, psi, rest) if rest else Fraction(1)
                )
            note("infinitesimal_omega", runs, lhs, rhs)

    if mode == "cyclic_free":
        omega = jt.omega
        for runs in _run_sequences(jt, d, cyclic_only=True):
            note(
                "cyclic_omega",
                runs,
                centred_expectation(omega.value, psi, runs),
                Fraction(0),
            )

    if mode == "cyclic_conditional":
        phi, omega = jt.phi, jt.omega
        for runs in _run_sequences(jt, d, cyclic_only=True):
            lhs = centred_expectation(omega.value, psi, runs)
            rhs = Fraction(1)
            for _, w in runs:
                rhs *= phi.value(w) - psi.value(w)
            note("cyclic_conditional_omega", runs, lhs, rhs)

    if mode in ("cyclic_free", "cyclic_conditional") and jt.omega is not None:
        for w in all_words(jt.letters, d):
            note("omega_tracial", (w,), jt.omega.value(w), jt.omega.value(rotate_word(w)))

    return violations


def mixed_words(jt, max_degree):
    for w in all_words(jt.letters, max_degree):
        if len({jt.algebra_of[x] for x in w}) > 1:
            yield w


def mixed_cumulant_report(jt, max_degree=None):
    """Tables of the joint's own cumulants on mixed words (should vanish)."""
    from .cumulants import cyclic_conditional_cumulants

    d = jt.max_degree if max_degree is None else max_degree
    report = {}
    kap = free_cumulants(jt.psi, d)
    report["free"] = {w: kap.value(w) for w in mixed_words(jt, d)}
    if jt.phi is not None:
        kc = conditional_cumulants(jt.psi, jt.phi, d)
        report["conditional"] = {w: kc.value(w) for w in mixed_words(jt, d)}
    if jt.mode == "cyclic_conditional":
        cc = cyclic_conditional_cumulants(jt.psi, jt.phi, jt.omega, d)
        report["cyclic_conditional"] = {w: cc.value(w) for w in mixed_words(jt, d)}
    return report


# -- companion constructions --------------------------------------------------------


def beta_on_tensor(f, tensor_word, memo=None):
    """Boolean cumulant of f-on-concatenations, letters = monomials."""
    if memo is None:
        memo = {}
    tw = tuple(tuple(m) for m in tensor_word)
    if tw in memo:
        return memo[tw]
    val = f(tuple(itertools.chain.from_iterable(tw)))
    for k in range(1, len(tw)):
        val -= beta_on_tensor(f, tw[:k], memo) * f(
            tuple(itertools.chain.from_iterable(tw[k:]))
        )
    memo[tw] = val
    return val


def mk_on_tensor(f, tensor_word, memo=None):
    """[f](w_1 ox ... ox w_n) for monomial letters w_i."""
    tw = tuple(tuple(m) for m in tensor_word)
    n = len(tw)
    if n == 0:
        return Fraction(1)
    if memo is None:
        memo = {}
    total = Fraction(0)
    from .partitions import cyclic_interval_blocks, cyclic_interval_subsets

    for cuts in cyclic_interval_subsets(n):
        term = Fraction(1)
        for block in cyclic_interval_blocks(cuts, n):
            term *= beta_on_tensor(f, tuple(tw[i - 1] for i in block), memo)
        total += term
    return total


def w_on_tensor(f, tensor_word, memo=None):
    """W(f)(x_{w_1} ... x_{w_n}): cyclic beta sums with the lead repeated."""
    tw = tuple(tuple(m) for m in tensor_word)
    n = len(tw)
    if n == 0:
        return Fraction(0)
    if memo is None:
        memo = {}
    return sum(
        beta_on_tensor(f, tw[i:] + tw[:i] + (tw[i],), memo) for i in range(n)
    )


def _tensor_elements(alphabet, max_total, max_parts=2):
    """Small tensor-monomials over one algebra: tuples of monomials."""
    out = []
    for parts in range(1, max_parts + 1):
        for lens in itertools.product(range(1, max_total + 1), repeat=parts):
            if sum(lens) > max_total:
                continue
            for mono in itertools.product(
                *[itertools.product(alphabet, repeat=k) for k in lens]
            ):
                out.append(tuple(mono))
    return out


def _concat_tensors(tensors):
    return tuple(itertools.chain.from_iterable(tensors))


def cyclic_companion(kind, marginals, max_degree):
    """Build the companion pair/triple and verify the target independence.

    Returns (violations, checked_count).
    """
    if kind == "free_to_cyclic":
        base = build_joint("free", marginals, max_degree)
        return _verify_companion_cyclic(base, base.psi.value, "mk", max_degree)
    if kind == "conditional_to_cyclic_w":
        # W(phi) repeats the lead tensor letter, a monomial of length up to
        # the element cap; the base joint carries the extra degrees.
        base = build_joint("conditional", marginals, max_degree + 2)
        return _verify_companion_cyclic(
            base, base.phi.value, "w", max_degree, element_cap=2
        )
    if kind == "conditional_to_cyclic_conditional":
        base = build_joint("conditional", marginals, max_degree)
        return _verify_companion_cyclic_conditional(base, max_degree)
    if kind == "boolean_to_cyclic_boolean":
        base = build_joint("boolean", marginals, max_degree)
        return _verify_companion_cyclic_boolean(base, max_degree)
    if kind == "monotone_to_cyclic_monotone":
        base = build_joint("monotone", marginals, max_degree)
        return _verify_companion_cyclic_monotone(base, max_degree)
    raise ValueError("unknown companion kind %r" % (kind,))


def _by_algebra(base):
    by_alg = {}
    for x, lab in base.algebra_of.items():
        by_alg.setdefault(lab, []).append(x)
    return by_alg


def _tensor_sequences(base, max_degree, cyclic_only, min_runs=2, element_cap=None):
    by_alg = _by_algebra(base)
    labels = sorted(by_alg)
    cap = max_degree - 1 if element_cap is None else min(element_cap, max_degree - 1)
    elements = {
        lab: _tensor_elements(tuple(xs), cap) for lab, xs in by_alg.items()
    }
    for r in range(min_runs, max_degree + 1):
        for pattern in itertools.product(labels, repeat=r):
            if any(pattern[i] == pattern[i + 1] for i in range(r - 1)):
                continue
            if cyclic_only and pattern[0] == pattern[-1]:
                continue

            def fill(i, budget):
                if i == r:
                    yield ()
                    return
                for el in elements[pattern[i]]:
                    L = sum(len(m) for m in el)
                    if L <= budget - (r - 1 - i):
                        for rest in fill(i + 1, budget - L):
                            yield (el,) + rest

            yield from ((pattern, combo) for combo in fill(0, max_degree))


def _psi_vec(base):
    def val(tensor):
        return base.psi.value(_concat_tensors(tensor)) if tensor else Fraction(1)

    return val


def _centred_tensor_expectation(fn, psi_vec, tensors):
    n = len(tensors)
    total = Fraction(0)
    for mask in range(1 << n):
        coeff = Fraction(1)
        kept = []
        for i in range(n):
            if mask & (1 << i):
                kept.append(tensors[i])
            else:
                coeff *= -psi_vec(tensors[i])
        total += coeff * fn(tuple(itertools.chain.from_iterable(kept)))
    return total


def _verify_companion_cyclic(base, omega_base_fn, omega_kind, max_degree, element_cap=None):
    """Check cyclic freeness of (psi, [psi]) or (psi, W(phi)) on tensor words."""
    psi_vec = _psi_vec(base)
    memo = {}
    if omega_kind == "mk":
        om = lambda t: mk_on_tensor(base.psi.value, t, memo) if t else Fraction(1)
    else:
        om = lambda t: w_on_tensor(base.phi.value, t, memo) if t else Fraction(0)
    violations = []
    checked = 0
    for pattern, tensors in _tensor_sequences(
        base, max_degree, cyclic_only=True, element_cap=element_cap
    ):
        lhs = _centred_tensor_expectation(om, psi_vec, tensors)
        checked += 1
        if lhs != 0:
            violations.append(("cyclic_omega", tensors, lhs, Fraction(0)))
    for pattern, tensors in _tensor_sequences(
        base, max_degree, cyclic_only=False, element_cap=element_cap
    ):
        lhs = _centred_tensor_expectation(lambda t: psi_vec(t), psi_vec, tensors)
        checked += 1
        if lhs != 0:
            violations.append(("psi_alternating", tensors, lhs, Fraction(0)))
    return violations, checked


def _verify_companion_cyclic_conditional(base, max_degree):
    """(psi, phi, [phi]) is cyclic-conditionally free over T(A_1), T(A_2)."""
    psi_vec = _psi_vec(base)
    memo = {}

    def om(t):
        return mk_on_tensor(base.phi.value, t, memo) if t else Fraction(1)

    def phiv(t):
        return base.phi.value(_concat_tensors(t)) if t else Fraction(1)

    violations = []
    checked = 0
    for pattern, tensors in _tensor_sequences(base, max_degree, cyclic_only=True):
        lhs = _centred_tensor_expectation(om, psi_vec, tensors)
        rhs = Fraction(1)
        for t in tensors:
            rhs *= phiv(t) - psi_vec(t)
        checked += 1
        if lhs != rhs:
            violations.append(("cyclic_conditional_omega", tensors, lhs, rhs))
    return violations, checked


def _verify_companion_cyclic_boolean(base, max_degree):
    """(phi, [phi]) is cyclic Boolean over T_0(A_1), T_0(A_2)."""
    memo = {}

    def om(t):
        return mk_on_tensor(base.phi.value, t, memo)

    def phiv(t):
        return base.phi.value(_concat_tensors(t))

    violations = []
    checked = 0
    for pattern, tensors in _tensor_sequences(base, max_degree, cyclic_only=True):
        full = tuple(itertools.chain.from_iterable(tensors))
        lhs, rhs = om(full), phiv(full)
        checked += 1
        if lhs != rhs:
            violations.append(("cyclic_boolean_omega", tensors, lhs, rhs))
    for pattern, tensors in _tensor_sequences(base, max_degree, cyclic_only=False):
        full = tuple(itertools.chain.from_iterable(tensors))
        lhs = phiv(full)
        rhs = Fraction(1)
        for t in tensors:
            rhs *= phiv(t)
        checked += 1
        if lhs != rhs:
            violations.append(("boolean_factorization", tensors, lhs, rhs))
    return violations, checked


def _verify_companion_cyclic_monotone(base, max_degree):
    """(phi, [phi]) is cyclic monotone: the b_0 a_1 b_1 ... a_n b_n rule."""
    by_alg = _by_algebra(base)
    labels = sorted(by_alg)
    first, second = labels[0], labels[1]
    elements = {
        lab: _tensor_elements(tuple(xs), max_degree - 1) for lab, xs in by_alg.items()
    }
    memo = {}

    def om(t):
        return mk_on_tensor(base.phi.value, t, memo)

    def phiv(t):
        return base.phi.value(_concat_tensors(t))

    violations = []
    checked = 0
    for n in range(1, 3):
        pats = [elements[first]] * n + [elements[second]] * (n + 1)
        for combo in itertools.product(*pats):
            a_s = combo[:n]
            b_s = combo[n:]  # (b_0, b_1, ..., b_n)
            total_len = sum(len(m) for t in combo for m in t)
            if total_len > max_degree:
                continue
            word = [b_s[0]]
            for i in range(n):
                word.append(a_s[i])
                word.append(b_s[i + 1])
            full = tuple(itertools.chain.from_iterable(word))
            lhs = om(full)
            rhs = om(tuple(itertools.chain.from_iterable(a_s)))
            for i in range(1, n):
                rhs *= phiv(b_s[i])
            rhs *= phiv(b_s[n] + b_s[0])
            checked += 1
            if lhs != rhs:
                violations.append(("cyclic_monotone_omega", tuple(word), lhs, rhs))
    return violations, checked


def difference_reduction(marginals_omega1, marginals_omega2, max_degree, omega_unit1, omega_unit2):
    """Cyclic freeness of (psi, omega1 - omega2) from two cyclic-c-free joints."""
    j1 = build_joint("cyclic_conditional", marginals_omega1, max_degree, omega_unit1)
    j2 = build_joint("cyclic_conditional", marginals_omega2, max_degree, omega_unit2)
    if j1.psi.values != j2.psi.values or j1.phi.values != j2.phi.values:
        raise ValueError("difference reduction needs shared psi and phi marginals")
    diff = linear_combination([(1, j1.omega), (-1, j2.omega)], j1.letters, max_degree, tracial=True)
    jt = JointTriple("cyclic_free", j1.algebra_of, j1.psi, omega=diff, max_degree=max_degree)
    return verify_defining_conditions(jt, "cyclic_free", max_degree)
