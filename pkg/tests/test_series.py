from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycfree import series as se
from cycfree.series import (
    Dual,
    PSeries,
    USeries,
    additive_convolve,
    boolean_additive,
    boolean_multiplicative,
    check_conditional_f_identity,
    check_free_mult_subordination,
    check_free_subordination,
    check_infinitesimal_eta_identity,
    check_infinitesimal_subordination,
    conditional_additive,
    conditional_cumulant_series,
    conditional_multiplicative,
    cyclic_boolean_additive,
    cyclic_boolean_multiplicative,
    cyclic_boolean_nfold,
    cyclic_boolean_transforms,
    cyclic_conditional_additive,
    cyclic_conditional_multiplicative,
    cyclic_monotone_additive,
    cyclic_monotone_multiplicative,
    eta_series,
    f_series,
    free_additive,
    free_cumulant_series,
    free_multiplicative,
    g_series,
    infinitesimal_additive,
    infinitesimal_multiplicative,
    mk_series,
    moments_from_free_cumulant_series,
    moments_from_s,
    monotone_additive,
    monotone_multiplicative,
    mult_subordinations,
    rho_series,
    s_transform,
)
from conftest import rational, univariate_moments

CATALAN = [Fraction(x) for x in (1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42)]
BERNOULLI = [Fraction(1), Fraction(0)] * 5 + [Fraction(1)]
ARCSINE = [Fraction(x) for x in (1, 0, 2, 0, 6, 0, 20, 0, 70, 0, 252)]


def rmoms(rng, order, unit=Fraction(1), lo=-4, hi=4):
    return univariate_moments(rng, order, unit=unit, lo=lo, hi=hi)


def pos_moms(rng, order):
    return [Fraction(1)] + [rational(rng, 1, 4) for _ in range(order)]


class TestTransforms:
    def test_point_mass_at_zero(self):
        pm = [Fraction(1)] + [Fraction(0)] * 6
        assert all(c == 0 for c in eta_series(pm).coeffs)
        g = g_series(pm)
        assert g.coeffs[0] == 1 and all(c == 0 for c in g.coeffs[1:])

    def test_mk_fixes_point_masses(self):
        c = Fraction(-7, 2)
        pm = [c**n for n in range(9)]
        assert mk_series(pm) == pm

    def test_catalan_r_transform(self):
        kappa = free_cumulant_series(CATALAN)
        assert kappa == [Fraction(0), Fraction(1)] + [Fraction(0)] * 8

    def test_free_cumulant_series_roundtrip(self, rng):
        for _ in range(10):
            m = rmoms(rng, 10)
            assert moments_from_free_cumulant_series(free_cumulant_series(m)) == m

    def test_mk_semicircle_gives_arcsine(self):
        assert mk_series(CATALAN)[:9] == ARCSINE[:9]

    def test_mk_matches_word_level(self, rng):
        from cycfree.cumulants import MomentFunctional, mk_transform

        for _ in range(20):
            m = rmoms(rng, 10)
            mk_w = mk_transform(MomentFunctional.univariate(m))
            assert mk_series(m) == [Fraction(1)] + [
                mk_w.value(("a",) * n) for n in range(1, 11)
            ]

    def test_s_transform_roundtrip(self, rng):
        m = pos_moms(rng, 8)
        s = s_transform(m)
        assert moments_from_s(s, 8) == m

    def test_s_requires_nonzero_mean(self):
        with pytest.raises(ZeroDivisionError):
            s_transform([Fraction(1), Fraction(0), Fraction(1)])

    def test_inverse_compose_requires_unit(self):
        with pytest.raises(ZeroDivisionError):
            PSeries([Fraction(0), Fraction(0), Fraction(1)], 4).inverse_compose()

    def test_conditional_c_series_matches_word_level(self, rng):
        from cycfree.cumulants import MomentFunctional, conditional_cumulants

        mp, mf = rmoms(rng, 8), rmoms(rng, 8)
        kc_series = conditional_cumulant_series(mp, mf)
        kc_word = conditional_cumulants(
            MomentFunctional.univariate(mp), MomentFunctional.univariate(mf)
        )
        assert kc_series == [kc_word.value(("a",) * n) for n in range(1, 9)]


class TestFreeAdditive:
    def test_bernoulli_gives_arcsine(self):
        res = free_additive(BERNOULLI, BERNOULLI)
        assert res.moments == ARCSINE
        assert check_free_subordination(BERNOULLI, BERNOULLI, res, res.order)

    def test_random_certificates_order_10(self, rng):
        for _ in range(5):
            ma, mb = rmoms(rng, 12), rmoms(rng, 12)
            res = free_additive(ma, mb)
            assert check_free_subordination(ma, mb, res, 12)

    def test_matches_word_level_joint(self, rng):
        import itertools

        from cycfree.joint import MarginalSpec, build_joint

        d = 6
        ma, mb = rmoms(rng, d), rmoms(rng, d)
        jt = build_joint(
            "free",
            [
                MarginalSpec("A", ("a",), psi={("a",) * n: ma[n] for n in range(1, d + 1)}),
                MarginalSpec("B", ("b",), psi={("b",) * n: mb[n] for n in range(1, d + 1)}),
            ],
            d,
        )
        res = free_additive(ma, mb)
        for n in range(1, d + 1):
            total = sum(
                jt.psi.value(w) for w in itertools.product(("a", "b"), repeat=n)
            )
            assert total == res.moments[n]


class TestOtherAdditive:
    def test_boolean_bernoulli(self):
        out = boolean_additive(BERNOULLI, BERNOULLI).moments
        assert out[:8] == [Fraction(x) for x in (1, 0, 2, 0, 4, 0, 8, 0)]

    def test_monotone_linearized_by_F(self, rng):
        ma, mb = rmoms(rng, 8), rmoms(rng, 8)
        out = monotone_additive(ma, mb)
        fa, fb = f_series(ma), f_series(mb)
        assert g_series(out.moments).reciprocal().eq_to(fa.compose(fb), 6)

    def test_conditional_f_identity_order_10(self, rng):
        a = (rmoms(rng, 12), rmoms(rng, 12))
        b = (rmoms(rng, 12), rmoms(rng, 12))
        res = conditional_additive(a, b)
        assert check_conditional_f_identity(a, b, res, 12)

    def test_infinitesimal_subordination_order_10(self, rng):
        a = (rmoms(rng, 12), rmoms(rng, 12, unit=Fraction(0)))
        b = (rmoms(rng, 12), rmoms(rng, 12, unit=Fraction(0)))
        res = infinitesimal_additive(a, b)
        assert check_infinitesimal_subordination(a, b, res, 11)

    def test_cyclic_conditional_internal_dual_path(self, rng):
        delta_t = Fraction(1, 2)
        a = (rmoms(rng, 10), rmoms(rng, 10), rmoms(rng, 10, unit=delta_t))
        b = (rmoms(rng, 10), rmoms(rng, 10), rmoms(rng, 10, unit=delta_t))
        res = cyclic_conditional_additive(a, b)  # asserts the dual path itself
        assert res.omega[0] == delta_t

    def test_cyclic_boolean_specialization(self, rng):
        n = 10
        fa, fb = rmoms(rng, n), rmoms(rng, n)
        oa = rmoms(rng, n, unit=Fraction(0))
        ob = rmoms(rng, n, unit=Fraction(0))
        triv = [Fraction(1)] + [Fraction(0)] * n
        cb = cyclic_boolean_additive((fa, oa), (fb, ob))
        cc = cyclic_conditional_additive((triv, fa, oa), (triv, fb, ob))
        assert cb.omega == cc.omega and cb.phi == cc.phi

    def test_cyclic_monotone_specialization(self, rng):
        n = 10
        fa, fb = rmoms(rng, n), rmoms(rng, n)
        oa = rmoms(rng, n, unit=Fraction(0))
        ob = rmoms(rng, n, unit=Fraction(0))
        triv = [Fraction(1)] + [Fraction(0)] * n
        cm = cyclic_monotone_additive((fa, oa), (fb, ob))
        cc = cyclic_conditional_additive((triv, fa, oa), (fb, fb, ob))
        assert cm.omega == cc.omega and cm.phi == cc.phi

    def test_delta_affineness(self, rng):
        n = 8
        pa, fa = rmoms(rng, n), rmoms(rng, n)
        pb, fb = rmoms(rng, n), rmoms(rng, n)
        oa = rmoms(rng, n, unit=Fraction(0))
        ob = rmoms(rng, n, unit=Fraction(0))

        def with_delta(d):
            a = (pa, fa, [d] + oa[1:])
            b = (pb, fb, [d] + ob[1:])
            return cyclic_conditional_additive(a, b).omega

        w0, w1, w2 = with_delta(Fraction(0)), with_delta(Fraction(1)), with_delta(Fraction(2))
        assert all(w2[k] - w1[k] == w1[k] - w0[k] for k in range(n + 1))

    def test_dispatch(self, rng):
        assert additive_convolve("boolean", BERNOULLI, BERNOULLI).moments[2] == 2
        with pytest.raises(ValueError):
            additive_convolve("nope", BERNOULLI, BERNOULLI)


class TestFreeMultiplicative:
    def test_unit_factor(self, rng):
        mx = pos_moms(rng, 8)
        unit = [Fraction(1)] * 9
        assert free_multiplicative(mx, unit).moments == mx
        assert boolean_multiplicative(mx, unit).moments == mx
        assert monotone_multiplicative(mx, unit).moments == mx

    def test_subordination_identities(self, rng):
        mx, my = pos_moms(rng, 8), pos_moms(rng, 8)
        res = free_multiplicative(mx, my)
        assert check_free_mult_subordination(mx, my, res, 8)

    def test_s_multiplicativity(self, rng):
        mx, my = pos_moms(rng, 8), pos_moms(rng, 8)
        res = free_multiplicative(mx, my)
        sxy = s_transform(res.moments)
        prod = s_transform(mx) * s_transform(my)
        assert sxy.coeffs[:8] == prod.coeffs[:8]

    def test_zero_mean_subordination_path(self, rng):
        mx = [Fraction(1), Fraction(0)] + [rational(rng, 1, 4) for _ in range(7)]
        my = pos_moms(rng, 8)
        res = free_multiplicative(mx, my)
        assert check_free_mult_subordination(mx, my, res, 8)

    def test_fixed_point_truncation_stability(self, rng):
        mx, my = pos_moms(rng, 8), pos_moms(rng, 8)
        short = free_multiplicative(mx, my).moments
        longer = free_multiplicative(
            mx + [Fraction(1), Fraction(2)], my + [Fraction(3), Fraction(1)]
        ).moments
        assert longer[:9] == short


class TestOtherMultiplicative:
    def test_conditional_rho_identity(self, rng):
        x = (pos_moms(rng, 8), pos_moms(rng, 8))
        y = (pos_moms(rng, 8), pos_moms(rng, 8))
        res = conditional_multiplicative(x, y)
        rphi = rho_series(res.phi)
        rx = PSeries(rho_series(x[1]).coeffs, 8)
        ry = PSeries(rho_series(y[1]).coeffs, 8)
        rhs = rx.compose(res.omega_x) * ry.compose(res.omega_y)
        k = min(rphi.order, rhs.order)
        assert rphi.coeffs[: k + 1] == rhs.coeffs[: k + 1]

    def test_infinitesimal_eta_identity(self, rng):
        x = (pos_moms(rng, 8), rmoms(rng, 8, unit=Fraction(0)))
        y = (pos_moms(rng, 8), rmoms(rng, 8, unit=Fraction(0)))
        res = infinitesimal_multiplicative(x, y)
        assert check_infinitesimal_eta_identity(x, y, res, 7)

    def test_infinitesimal_s_leibniz(self, rng):
        x = (pos_moms(rng, 8), rmoms(rng, 8, unit=Fraction(0)))
        y = (pos_moms(rng, 8), rmoms(rng, 8, unit=Fraction(0)))
        res = infinitesimal_multiplicative(x, y)

        def ds(m, dm):
            order = len(m) - 1
            minv = se.m_series(m).inverse_compose()
            dM = PSeries([Fraction(0)] + list(dm[1:]), order)
            return -1 * dM.compose(minv) * minv.deriv()

        lhs = ds(res.psi, res.dpsi)
        rhs = ds(*x) * s_transform(y[0]) + s_transform(x[0]) * ds(*y)
        k = min(lhs.order, rhs.order)
        assert lhs.coeffs[: k + 1] == rhs.coeffs[: k + 1]

    def test_cyclic_boolean_matches_cc_specialization(self, rng):
        n = 9
        fx, fy = pos_moms(rng, n), pos_moms(rng, n)
        ox = rmoms(rng, n, unit=Fraction(0))
        oy = rmoms(rng, n, unit=Fraction(0))
        ones = [Fraction(1)] * (n + 1)
        cb = cyclic_boolean_multiplicative((fx, ox), (fy, oy))
        cc = cyclic_conditional_multiplicative((ones, fx, ox), (ones, fy, oy))
        k = min(len(cb.omega), len(cc.omega))
        assert cb.omega[:k] == cc.omega[:k] and cb.phi == cc.phi

    def test_cyclic_boolean_nfold_corollary(self, rng):
        n = 11
        fx = pos_moms(rng, n)
        ox = rmoms(rng, n, unit=Fraction(0))
        nf = cyclic_boolean_nfold(fx, ox, 3)
        b2 = cyclic_boolean_multiplicative((fx, ox), (fx, ox))
        b3 = cyclic_boolean_multiplicative(
            (list(b2.phi) + [Fraction(0)], list(b2.omega) + [Fraction(0)]), (fx, ox)
        )
        k = min(len(nf), len(b3.omega), 9)
        assert nf[:k] == b3.omega[:k]

    def test_cyclic_monotone_matches_cc_specialization(self, rng):
        n = 9
        fx, fy = pos_moms(rng, n), pos_moms(rng, n)
        ox = rmoms(rng, n, unit=Fraction(0))
        oy = rmoms(rng, n, unit=Fraction(0))
        ones = [Fraction(1)] * (n + 1)
        cm = cyclic_monotone_multiplicative((fx, ox), (fy, oy))
        cc = cyclic_conditional_multiplicative((ones, fx, ox), (fy, fy, oy))
        k = min(len(cm.omega), len(cc.omega))
        assert cm.omega[:k] == cc.omega[:k] and cm.phi == cc.phi

    def test_unit_factor_cyclic_modes(self, rng):
        n = 8
        fx = pos_moms(rng, n)
        ox = rmoms(rng, n, unit=Fraction(0))
        unit_phi = [Fraction(1)] * (n + 1)
        unit_om = [Fraction(0)] * (n + 1)
        cb = cyclic_boolean_multiplicative((fx, ox), (unit_phi, unit_om))
        assert cb.phi == fx and cb.omega[: len(cb.omega)] == ox[: len(cb.omega)]


class TestCyclicBooleanTransforms:
    def test_sigma_additive_under_mult(self, rng):
        n = 9
        fx, fy = pos_moms(rng, n), pos_moms(rng, n)
        ox, oy = rmoms(rng, n, unit=Fraction(0)), rmoms(rng, n, unit=Fraction(0))
        prod = cyclic_boolean_multiplicative((fx, ox), (fy, oy))
        s1 = cyclic_boolean_transforms(fx, ox)[2]
        s2 = cyclic_boolean_transforms(fy, oy)[2]
        sp = cyclic_boolean_transforms(prod.phi, prod.omega)[2]
        k = min(sp.order, s1.order)
        assert sp.coeffs[: k + 1] == (s1 + s2).coeffs[: k + 1]

    def test_h_additive_under_add(self, rng):
        n = 9
        fx, fy = pos_moms(rng, n), pos_moms(rng, n)
        ox, oy = rmoms(rng, n, unit=Fraction(0)), rmoms(rng, n, unit=Fraction(0))
        add = cyclic_boolean_additive((fx, ox), (fy, oy))
        h1 = cyclic_boolean_transforms(fx, ox)[0]
        h2 = cyclic_boolean_transforms(fy, oy)[0]
        ha = cyclic_boolean_transforms(add.phi, add.omega)[0]
        assert ha.eq_to(h1 + h2, n)

    def test_h_sigma_relation(self, rng):
        n = 9
        fx = pos_moms(rng, n)
        ox = rmoms(rng, n, unit=Fraction(0))
        h, c, sigma = cyclic_boolean_transforms(fx, ox)
        lhs = USeries(2, [sigma.coeffs[k] for k in range(1, n + 1)])
        base = USeries(2, [Fraction(1)] * n)
        assert lhs.eq_to(h + base, min(lhs.top, (h + base).top))

    def test_c_matches_word_level(self, rng):
        from cycfree.cumulants import MomentFunctional, cyclic_boolean_cumulants

        n = 8
        fx = pos_moms(rng, n)
        ox = rmoms(rng, n, unit=Fraction(0))
        c = cyclic_boolean_transforms(fx, ox)[1]
        table = cyclic_boolean_cumulants(
            MomentFunctional.univariate(fx), MomentFunctional.univariate(ox)
        )
        assert [c.coeffs[k] for k in range(1, n + 1)] == [
            table.value(("a",) * k) for k in range(1, n + 1)
        ]

    def test_zero_distribution(self):
        n = 6
        zero_phi = [Fraction(1)] + [Fraction(0)] * n
        zero_om = [Fraction(0)] * (n + 1)
        h, c, sigma = cyclic_boolean_transforms(zero_phi, zero_om)
        assert h.is_zero_to(n)
        assert all(x == 0 for x in c.coeffs)


class TestDual:
    def test_arithmetic(self):
        a, b = Dual(2, 3), Dual(5, -1)
        assert a * b == Dual(10, 13)
        assert (a / b).a == Fraction(2, 5)
        assert 1 / Dual(2, 4) == Dual(Fraction(1, 2), -1)

    def test_zero_part_division(self):
        with pytest.raises(ZeroDivisionError):
            Dual(0, 1).inverse()


@settings(max_examples=40, deadline=None, derandomize=True)
@given(
    st.lists(
        st.fractions(min_value=-4, max_value=4, max_denominator=3),
        min_size=8,
        max_size=8,
    )
)
def test_free_additive_subordination_property(tail):
    m = [Fraction(1)] + list(tail)
    res = free_additive(m, m)
    assert check_free_subordination(m, m, res, res.order)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(
    st.lists(
        st.fractions(min_value=-3, max_value=3, max_denominator=3),
        min_size=7,
        max_size=7,
    )
)
def test_mk_series_is_involution_on_fixed_points_property(tail):
    """[psi] of a point mass stays a point mass; generic inputs round-trip
    through the free cumulant series."""
    m = [Fraction(1)] + list(tail)
    assert moments_from_free_cumulant_series(free_cumulant_series(m)) == m
