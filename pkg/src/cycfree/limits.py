"""Closed-form limit laws (central limit and Poisson type) expanded to exact
rational moments, plus exact N-fold convolution convergence checks.

Square roots of quadratics are expanded at infinity as binomial series with
the branch fixed by G ~ 1/z; infinitesimal parts ride through the ordinary
expansions as dual numbers.
"""

from __future__ import annotations

from fractions import Fraction

from .series import (
    Dual,
    PSeries,
    conditional_cumulant_series,
    dpsi_series,
    free_cumulant_series,
    mk_series,
    moments_from_conditional_series,
    moments_from_free_cumulant_series,
)

LAWS = (
    "free_clt",
    "cfree_clt",
    "infinitesimal_clt",
    "cyclic_conditional_clt",
    "cyclic_boolean_clt",
    "free_poisson",
    "cfree_poisson",
    "infinitesimal_poisson",
    "cyclic_conditional_poisson",
    "cyclic_boolean_poisson",
)


def _moments_from_u_series(ps, order):
    """Moment list from G = sum m_n u^(n+1) given as a PSeries in u."""
    return [ps.coeffs[n + 1] for n in range(order + 1)]


def _neg_log_deriv_from_c(c):
    """-G'/G for G = u C(u): equals u (1 + u C'/C), a PSeries in u."""
    u = PSeries.x(c.order)
    zc = PSeries([k * c.coeffs[k] for k in range(c.order + 1)], c.order)
    return u * (1 + zc / c)


def semicircle_moments(var, order):
    """Moments of the centred semicircle with second moment `var`."""
    if var == 0:
        return [Fraction(1)] + [Fraction(0)] * order
    r = PSeries([1, 0, -4 * var], order + 2).sqrt1p_of_tail()
    g = (1 - r) / (2 * var)
    return [g.coeffs[n + 2] for n in range(order + 1)]


def cfree_clt_moments(alpha2, beta2, order):
    """phi-moments of the conditionally free CLT limit."""
    if beta2 == alpha2:
        return semicircle_moments(alpha2, order)
    c = _cfree_clt_c(alpha2, beta2, order)
    u = PSeries.x(order + 1)
    g = u * PSeries(c.coeffs, order + 1)
    return _moments_from_u_series(g, order)


def _cfree_clt_c(alpha2, beta2, order):
    """C with G^phi = u C(u)."""
    r = PSeries([1, 0, -4 * alpha2], order + 2).sqrt1p_of_tail()
    num = Fraction(beta2, 2) - alpha2 + Fraction(beta2, 2) * r
    den = PSeries([beta2 - alpha2, 0, -(beta2 ** 2)], order + 2)
    return num / den


def _clt_t_series(alpha2, order):
    """T(u) with (alpha'/alpha^2)(1/s - G_sc) = alpha' T(u); works at alpha = 0."""
    coeffs = [Fraction(0)] * (order + 2)
    binom = Fraction(1)
    for k in range(1, (order + 1) // 2 + 1):
        binom = binom * 2 * (2 * k - 1) / k  # binom(2k, k) iteratively
        if 2 * k + 1 < len(coeffs):
            coeffs[2 * k + 1] = binom * Fraction(k, k + 1) * alpha2 ** (k - 1)
    return PSeries(coeffs, order + 1)


def infinitesimal_clt_moments(alpha2, alpha_prime, order):
    """dPsi-moments of the infinitesimal CLT limit (unit value 0)."""
    t = _clt_t_series(alpha2, order)
    return [Fraction(0)] + [alpha_prime * t.coeffs[n + 1] for n in range(1, order + 1)]


def cyclic_conditional_clt_moments(alpha2, beta2, gamma2, omega_unit, order):
    """omega-moments of the cyclic-conditional CLT limit; entry 0 is omega(1).

    The variance of the D-part is alpha' = 2(1-omega(1)) alpha^2 - 2 beta^2
    + gamma^2 (the printed alpha' misses the factors of 2; the exact identity
    omega(S_N^2) = gamma^2 pins this form).
    """
    delta = 1 - omega_unit
    alpha_prime = 2 * delta * alpha2 - 2 * beta2 + gamma2
    t = _clt_t_series(alpha2, order)
    inv_s = PSeries([1, 0, -4 * alpha2], order + 2).sqrt1p_of_tail().reciprocal()
    u = PSeries.x(order + 1)
    inv_s_u = u * PSeries(inv_s.coeffs, order + 1)  # 1/s = u (1-4a^2u^2)^(-1/2)
    if beta2 == alpha2:
        if alpha2 == 0:
            neg_ld = u  # G^phi = 1/z
        else:
            gphi = semicircle_moments(alpha2, order + 1)
            cphi = PSeries(gphi, order + 1)
            neg_ld = _neg_log_deriv_from_c(cphi)
    else:
        neg_ld = _neg_log_deriv_from_c(_cfree_clt_c(alpha2, beta2, order + 1))
    gw = alpha_prime * t - delta * inv_s_u + neg_ld
    out = _moments_from_u_series(gw, order)
    out[0] = out[0] + 0  # slot 0 carries omega(1)
    if out[0] != omega_unit:
        raise AssertionError("omega(1) mismatch in the CLT expansion")
    return out


def cyclic_boolean_clt_moments(order):
    """omega-moments of the cyclic Boolean CLT limit: (0,0,2,0,2,...)."""
    return [Fraction(0)] + [
        Fraction(2) if n >= 2 and n % 2 == 0 else Fraction(0) for n in range(1, order + 1)
    ]


def free_poisson_moments(alpha, lam, order):
    """Moments of the free Poisson law with jump alpha and rate lam."""
    alpha = alpha if isinstance(alpha, Dual) else Fraction(alpha)
    if alpha == 0:
        return [Fraction(1)] + [Fraction(0)] * order
    c = alpha * (1 + lam)
    d = lam * alpha * alpha
    inner = PSeries([1, -2 * c, c * c - 4 * d], order + 2)
    r = inner.sqrt1p_of_tail()
    g = (1 + (alpha * (1 - lam)) * PSeries.x(order + 2) - r) / (2 * alpha)
    return [g.coeffs[n + 1] for n in range(order + 1)]


def cfree_poisson_moments(lam_psi, lam_phi, order):
    """phi-moments of the conditionally free Poisson limit."""
    if lam_psi == lam_phi:
        return free_poisson_moments(1, lam_psi, order)
    c = _cfree_poisson_c(lam_psi, lam_phi, order)
    return [c.coeffs[n] for n in range(order + 1)]


def _cfree_poisson_c(lam_psi, lam_phi, order):
    """C with G^phi = u C(u) for the c-free Poisson transform."""
    inner = PSeries([1, -2 * (1 + lam_psi), (1 + lam_psi) ** 2 - 4 * lam_psi], order + 2)
    r = inner.sqrt1p_of_tail()
    num = (
        PSeries([2 * lam_psi - lam_phi, lam_phi * (1 - lam_psi)], order + 2)
        - lam_phi * r
    )
    den = 2 * PSeries([lam_psi - lam_phi, lam_phi * (1 - lam_psi + lam_phi)], order + 2)
    return num / den


def infinitesimal_poisson_moments(lam, lam_prime, order):
    """(theta, d-theta) moment lists via a dual-number free Poisson."""
    dual = free_poisson_moments(Dual(1, 1), Dual(lam, lam_prime), order)
    return [Dual.lift(c).a for c in dual], [Dual.lift(c).b for c in dual]


def cyclic_conditional_poisson_moments(lam_psi, lam_phi, lam_omega, omega_unit, order):
    """omega-moments of the cyclic-conditional Poisson limit.

    G^w = d/du P_{1+u, lam_psi + lam_omega u} + (1-w(1)) P'/P - (P^c)'/(P^c).
    """
    delta = 1 - omega_unit
    _, dmoms = infinitesimal_poisson_moments(lam_psi, lam_omega, order)
    ddu = PSeries([Fraction(0), Fraction(0)] + dmoms[1:], order + 1)
    if lam_psi == 0:
        p_neg_ld = PSeries.x(order + 1)  # P = 1/z
    else:
        p = free_poisson_moments(1, lam_psi, order + 1)
        p_neg_ld = _neg_log_deriv_from_c(PSeries(p, order + 1))
    if lam_psi == lam_phi:
        pc_neg_ld = p_neg_ld if lam_psi != 0 else PSeries.x(order + 1)
    else:
        pc_neg_ld = _neg_log_deriv_from_c(_cfree_poisson_c(lam_psi, lam_phi, order + 1))
    gw = ddu - delta * p_neg_ld + pc_neg_ld
    out = _moments_from_u_series(gw, order)
    if out[0] != omega_unit:
        raise AssertionError("omega(1) mismatch in the Poisson expansion")
    return out


def cyclic_boolean_poisson_moments(lam_phi, lam_omega, order):
    """Closed form lam_w/(z(z-1)) + lam_phi/((z-1)(z-1-lam_phi)); w(1) = 0.

    This is the form that satisfies the Poisson transform relation exactly;
    see the notes on the printed variant.
    """
    u = PSeries.x(order + 1)
    one_minus = (1 - u).reciprocal()
    term1 = lam_omega * u * u * one_minus
    term2 = (
        lam_phi
        * u
        * u
        * one_minus
        * (1 - (1 + lam_phi) * u).reciprocal()
    )
    g = term1 + term2
    return _moments_from_u_series(g, order)


def limit_moments(law, params, order):
    """Exact moments of the requested limit law to the given order."""
    if law == "free_clt":
        return semicircle_moments(params["alpha2"], order)
    if law == "cfree_clt":
        return cfree_clt_moments(params["alpha2"], params["beta2"], order)
    if law == "infinitesimal_clt":
        return infinitesimal_clt_moments(params["alpha2"], params["alpha_prime"], order)
    if law == "cyclic_conditional_clt":
        return cyclic_conditional_clt_moments(
            params["alpha2"], params["beta2"], params["gamma2"], params["omega_unit"], order
        )
    if law == "cyclic_boolean_clt":
        return cyclic_boolean_clt_moments(order)
    if law == "free_poisson":
        return free_poisson_moments(params.get("alpha", 1), params["lam"], order)
    if law == "cfree_poisson":
        return cfree_poisson_moments(params["lam_psi"], params["lam_phi"], order)
    if law == "infinitesimal_poisson":
        theta, dtheta = infinitesimal_poisson_moments(
            params["lam"], params["lam_prime"], order
        )
        return dtheta
    if law == "cyclic_conditional_poisson":
        return cyclic_conditional_poisson_moments(
            params["lam_psi"],
            params["lam_phi"],
            params["lam_omega"],
            params["omega_unit"],
            order,
        )
    if law == "cyclic_boolean_poisson":
        return cyclic_boolean_poisson_moments(params["lam_phi"], params["lam_omega"], order)
    raise ValueError("unknown law %r" % (law,))


# -- exact N-fold convolutions -----------------------------------------------------


def _scaled(m, N, order):
    """Moments of X / sqrt(N); N must be a perfect square."""
    root = _isqrt_exact(N)
    return [m[k] / Fraction(root) ** k for k in range(order + 1)]


def _isqrt_exact(N):
    r = int(round(N ** 0.5))
    if r * r != N:
        raise ValueError("CLT checks need perfect-square N")
    return r


def nfold_moments(law, marginal, N, order):
    """Exact moments of the rescaled N-fold sum for the law's scheme."""
    if law == "free_clt":
        m = _scaled(marginal["psi"], N, order)
        return moments_from_free_cumulant_series(
            [N * k for k in free_cumulant_series(m)]
        )
    if law == "cfree_clt":
        mp = _scaled(marginal["psi"], N, order)
        mf = _scaled(marginal["phi"], N, order)
        psi_out = moments_from_free_cumulant_series(
            [N * k for k in free_cumulant_series(mp)]
        )
        kc = [N * k for k in conditional_cumulant_series(mp, mf)]
        return moments_from_conditional_series(kc, psi_out)
    if law == "infinitesimal_clt":
        mp = _scaled(marginal["psi"], N, order)
        dm = _scaled(marginal["dpsi"], N, order)
        md = [Dual(a, b) for a, b in zip(mp, dm)]
        out = moments_from_free_cumulant_series(
            [N * k for k in free_cumulant_series(md)]
        )
        return [Dual.lift(c).b for c in out]
    if law == "cyclic_conditional_clt":
        mp = _scaled(marginal["psi"], N, order)
        mf = _scaled(marginal["phi"], N, order)
        mo = _scaled(marginal["omega"], N, order)
        mo[0] = marginal["omega"][0]
        return _cc_nfold(mp, mf, mo, N, order)
    if law == "free_poisson":
        lam = marginal["lam"]
        bern = [Fraction(1)] + [Fraction(lam, N)] * order
        return moments_from_free_cumulant_series(
            [N * k for k in free_cumulant_series(bern)]
        )
    if law == "cyclic_conditional_poisson":
        p = Fraction(marginal["lam_psi"], N)
        q = Fraction(marginal["lam_phi"], N)
        r = Fraction(marginal["lam_omega"], N)
        omega_unit = marginal["omega_unit"]
        mp = [Fraction(1)] + [p] * order
        mf = [Fraction(1)] + [q] * order
        # infinitesimal Bernoulli with alpha_omega = 1: DPsi(a^n) = r + n p
        dm = [Fraction(0)] + [r + n * p for n in range(1, order + 1)]
        mo = [omega_unit] + [
            dm[n] + mk_series(mf)[n] - (1 - omega_unit) * mk_series(mp)[n]
            for n in range(1, order + 1)
        ]
        return _cc_nfold(mp, mf, mo, N, order)
    raise ValueError("no N-fold scheme for law %r" % (law,))


def _cc_nfold(mp, mf, mo, N, order):
    """omega-moments of the N-fold cyclic-conditional sum via cumulant scaling."""
    psi_out = moments_from_free_cumulant_series([N * k for k in free_cumulant_series(mp)])
    kc = [N * k for k in conditional_cumulant_series(mp, mf)]
    phi_out = moments_from_conditional_series(kc, psi_out)
    dm = dpsi_series(mp, mf, mo)
    md = [Dual(a, b) for a, b in zip(mp, dm)]
    dk = [Dual.lift(c).b for c in free_cumulant_series(md)]
    kp_out = free_cumulant_series(psi_out)
    out_dual = moments_from_free_cumulant_series(
        [Dual(k, N * d) for k, d in zip(kp_out, dk)]
    )
    dpsi_out = [Dual.lift(c).b for c in out_dual]
    delta = 1 - mo[0]
    mk_psi = mk_series(psi_out)
    mk_phi = mk_series(phi_out)
    return [mo[0]] + [
        dpsi_out[n] + mk_phi[n] - delta * mk_psi[n] for n in range(1, order + 1)
    ]


def nfold_check(law, marginal, n_list, order, limit_params=None):
    """Rows (N, k, exact gap to the limit law) for each N and moment k."""
    if limit_params is None:
        limit_params = marginal
    lim = limit_moments(law, limit_params, order)
    rows = []
    for N in n_list:
        mN = nfold_moments(law, marginal, N, order)
        for k in range(1, order + 1):
            rows.append((N, k, mN[k] - lim[k]))
    return rows


def richardson_consistent(rows, order):
    """Theta(1/N) check: N * gap stabilizes along the N-ladder."""
    by_k = {}
    for N, k, gap in rows:
        by_k.setdefault(k, []).append((N, gap))
    ok = True
    for k, seq in by_k.items():
        seq.sort()
        vals = [(N, gap) for N, gap in seq]
        if all(g == 0 for _, g in vals):
            continue
        scaled = [N * g for N, g in vals]
        diffs = [abs(scaled[i + 1] - scaled[i]) for i in range(len(scaled) - 1)]
        gaps = [abs(g) for _, g in vals]
        if not all(gaps[i + 1] < gaps[i] or gaps[i] == 0 for i in range(len(gaps) - 1)):
            ok = False
        if len(diffs) >= 2 and not all(
            diffs[i + 1] < diffs[i] or diffs[i] == 0 for i in range(len(diffs) - 1)
        ):
            ok = False
    return ok
