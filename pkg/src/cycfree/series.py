"""Truncated exact-rational formal series: transforms, additive and
multiplicative convolutions, and their subordination certificates.

Two representations are used.  `PSeries` is an ordinary truncated power
series in z.  `USeries` is a Laurent series at infinity, sum of c_j *
z^(-(shift+j)), with the number of stored coefficients tracking how many
are actually known; operations propagate that precision and refuse to
overclaim.  Moment sequences are lists [m_0, ..., m_N].

Coefficients are Fractions or `Dual` numbers (a + b*eps, eps^2 = 0); the
dual route turns the ordinary free pipeline into the infinitesimal one.
"""

from __future__ import annotations

from fractions import Fraction


class Dual:
    """a + b*eps with eps^2 = 0, over exact rationals."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def lift(x):
        return x if isinstance(x, Dual) else Dual(x)

    @staticmethod
    def _coerce(x):
        if isinstance(x, Dual):
            return x
        if isinstance(x, (int, Fraction)) or hasattr(x, "denominator"):
            return Dual(x)
        return None

    def __add__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inverse(self):
        if self.a == 0:
            raise ZeroDivisionError("dual number with zero standard part")
        ia = 1 / self.a
        return Dual(ia, -self.b * ia * ia)

    def __truediv__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = Dual._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return "Dual(%s, %s)" % (self.a, self.b)


def _zero_like(x):
    return x * 0


class PSeries:
    """Truncated power series in z; coeffs[k] is the z^k coefficient."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        coeffs = coeffs[: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order

    @staticmethod
    def const(c, order):
        return PSeries([c], order)

    @staticmethod
    def x(order):
        return PSeries([Fraction(0), Fraction(1)], order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return self.order + 1

    def __add__(self, other):
        if not isinstance(other, PSeries):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return PSeries(c, self.order)
        n = min(self.order, other.order)
        return PSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return PSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PSeries) else -1 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PSeries):
            return PSeries([c * other for c in self.coeffs], self.order)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return PSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, PSeries):
            inv = Fraction(1) / other if not isinstance(other, Dual) else other.inverse()
            return self * inv
        return self * other.reciprocal()

    def reciprocal(self):
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("reciprocal needs a unit constant term")
        inv0 = Fraction(1) / c0 if not isinstance(c0, Dual) else c0.inverse()
        out = [inv0] + [Fraction(0)] * self.order
        for k in range(1, self.order + 1):
            s = _zero_like(c0)
            for j in range(1, k + 1):
                s = s + self.coeffs[j] * out[k - j]
            out[k] = -inv0 * s
        return PSeries(out, self.order)

    def deriv(self):
        return PSeries(
            [self.coeffs[k] * k for k in range(1, self.order + 1)], self.order - 1
        )

    def shift_down(self, k=1):
        """Divide by z^k; the dropped coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise ValueError("series not divisible by z^%d" % k)
        return PSeries(self.coeffs[k:], self.order - k)

    def shift_up(self, k=1):
        return PSeries([Fraction(0)] * k + self.coeffs, self.order + k)

    def compose(self, g):
        """self(g), g with zero constant term."""
        if g.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        n = min(self.order, g.order)
        out = PSeries.const(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            out = out * g + self.coeffs[k]
        return out

    def inverse_compose(self):
        """Compositional inverse; needs zero constant and unit linear term."""
        if self.coeffs[0] != 0:
            raise ValueError("inverse requires zero constant term")
        c1 = self.coeffs[1]
        if c1 == 0:
            raise ZeroDivisionError("inverse requires an invertible linear term")
        inv1 = Fraction(1) / c1 if not isinstance(c1, Dual) else c1.inverse()
        n = self.order
        g = [Fraction(0), inv1] + [Fraction(0)] * (n - 1)
        for k in range(2, n + 1):
            h = self.compose(PSeries(g[: k + 1] + [Fraction(0)] * (n - k), n))
            g[k] = -inv1 * h.coeffs[k]
        return PSeries(g, n)

    def sqrt1p_of_tail(self):
        """(1 + f)^(1/2) for self = 1 + f with f of valuation >= 1."""
        if self.coeffs[0] != 1:
            raise ValueError("sqrt expects constant term 1")
        f = self - 1
        out = PSeries.const(Fraction(1), self.order)
        fk = PSeries.const(Fraction(1), self.order)
        coef = Fraction(1)
        for k in range(1, self.order + 1):
            coef = coef * (Fraction(1, 2) - (k - 1)) / k
            fk = fk * f
            out = out + coef * fk
        return out

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __repr__(self):
        return "PSeries(%s)" % (self.coeffs,)


class USeries:
    """Laurent series at infinity: sum of coeffs[j] * z^(-(shift+j)).

    Coefficients beyond the stored ones are unknown; `top` (the largest
    exponent index shift+len-1) is the precision high-water mark.
    """

    __slots__ = ("shift", "coeffs")

    def __init__(self, shift, coeffs):
        self.shift = shift
        self.coeffs = list(coeffs)
        if not self.coeffs:
            raise ValueError("empty USeries")

    @property
    def top(self):
        return self.shift + len(self.coeffs) - 1

    @staticmethod
    def const(c, top):
        return USeries(0, [c] + [Fraction(0)] * top)

    @staticmethod
    def z_var(top):
        """The series z, exact, padded to precision `top`."""
        return USeries(-1, [Fraction(1)] + [Fraction(0)] * (top + 1))

    @staticmethod
    def from_moments(m):
        """G-type series: sum m_n z^(-(n+1))."""
        return USeries(1, list(m))

    def to_moments(self, order):
        """Coefficients of z^-1 .. z^-(order+1) (requires shift >= ... known)."""
        if self.top < order + 1:
            raise ValueError("insufficient precision: top %d < %d" % (self.top, order + 1))
        for j in range(0, min(len(self.coeffs), 1 - self.shift)):
            if self.shift + j < 1 and self.coeffs[j] != 0:
                raise ValueError("series has a nonvanishing polynomial part")
        out = []
        for n in range(order + 1):
            j = n + 1 - self.shift
            out.append(self.coeffs[j] if j >= 0 else Fraction(0))
        return out

    def coeff(self, e):
        """Coefficient of z^-e; must be within known precision."""
        j = e - self.shift
        if j < 0:
            return Fraction(0)
        if j >= len(self.coeffs):
            raise ValueError("coefficient beyond known precision")
        return self.coeffs[j]

    def normalized(self):
        """Strip leading zero coefficients (raises shift, keeps top)."""
        k = 0
        while k < len(self.coeffs) - 1 and self.coeffs[k] == 0:
            k += 1
        return USeries(self.shift + k, self.coeffs[k:])

    def __add__(self, other):
        if not isinstance(other, USeries):
            other = USeries.const(other, self.top)
        shift = min(self.shift, other.shift)
        top = min(self.top, other.top)
        if top < shift:
            raise ValueError("no overlapping precision")
        out = []
        for e in range(shift, top + 1):
            a = self.coeffs[e - self.shift] if 0 <= e - self.shift < len(self.coeffs) else Fraction(0)
            b = other.coeffs[e - other.shift] if 0 <= e - other.shift < len(other.coeffs) else Fraction(0)
            out.append(a + b)
        return USeries(shift, out)

    __radd__ = __add__

    def __neg__(self):
        return USeries(self.shift, [-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, USeries):
            other = USeries.const(other, self.top)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, USeries):
            return USeries(self.shift, [c * other for c in self.coeffs])
        a, b = self.normalized(), other.normalized()
        shift = a.shift + b.shift
        top = min(a.top + b.shift, b.top + a.shift)
        n = top - shift + 1
        if n < 1:
            raise ValueError("no overlapping precision in product")
        out = [Fraction(0)] * n
        for i, ca in enumerate(a.coeffs):
            if ca == 0:
                continue
            for j, cb in enumerate(b.coeffs):
                if i + j >= n:
                    break
                if cb != 0:
                    out[i + j] = out[i + j] + ca * cb
        return USeries(shift, out)

    __rmul__ = __mul__

    def reciprocal(self):
        a = self.normalized()
        c0 = a.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("zero leading coefficient")
        inv0 = Fraction(1) / c0 if not isinstance(c0, Dual) else c0.inverse()
        n = len(a.coeffs)
        out = [inv0] + [Fraction(0)] * (n - 1)
        for k in range(1, n):
            s = _zero_like(c0)
            for j in range(1, k + 1):
                s = s + a.coeffs[j] * out[k - j]
            out[k] = -inv0 * s
        return USeries(-a.shift, out)

    def __truediv__(self, other):
        if not isinstance(other, USeries):
            inv = Fraction(1) / other if not isinstance(other, Dual) else other.inverse()
            return self * inv
        return self * other.reciprocal()

    def deriv(self):
        """d/dz."""
        return USeries(
            self.shift + 1,
            [-(self.shift + j) * c for j, c in enumerate(self.coeffs)],
        )

    def pow_int(self, k):
        if k == 0:
            return USeries.const(Fraction(1), self.top - self.shift + 2)
        base = self if k > 0 else self.reciprocal()
        out = base
        for _ in range(abs(k) - 1):
            out = out * base
        return out

    def compose(self, w):
        """self(w) for w = z * (1 + O(1/z)) (shift -1, unit leading coeff)."""
        w = w.normalized()
        if w.shift != -1:
            raise ValueError("inner series must have a simple z term")
        winv = w.reciprocal()
        big = winv.top + len(self.coeffs) + 2
        total = USeries.const(Fraction(0), big)
        for j, c in enumerate(self.coeffs):
            e = self.shift + j
            if c == 0:
                continue
            if e > 0:
                term = winv.pow_int(e) * c
            elif e == 0:
                term = USeries.const(c, big)
            else:
                term = w.pow_int(-e) * c
            total = total + term
        # the unknown tail of self enters at exponent shift+len; cap there.
        cap = self.shift + len(self.coeffs) - 1
        if total.top > cap:
            total = USeries(total.shift, total.coeffs[: cap - total.shift + 1])
        return total

    def is_zero_to(self, top):
        if self.top < top:
            raise ValueError("insufficient precision to certify zero to %d" % top)
        return all(
            c == 0 for j, c in enumerate(self.coeffs) if self.shift + j <= top
        )

    def eq_to(self, other, top):
        return (self - other).is_zero_to(top)

    def __repr__(self):
        return "USeries(shift=%d, %s)" % (self.shift, self.coeffs)


def polyval_u(coeffs, g):
    """sum coeffs[k] * g**k for a USeries g with positive shift."""
    g = g.normalized()
    if g.shift < 1:
        raise ValueError("polyval_u expects a series vanishing at infinity")
    total = USeries.const(coeffs[0], g.top - g.shift + 1)
    p = None
    for k in range(1, len(coeffs)):
        p = g if p is None else p * g
        if coeffs[k] != 0:
            total = total + p * coeffs[k]
    # unknown tail of coeffs beyond len-1 enters at exponent len*g.shift
    cap = len(coeffs) * g.shift - 1
    if total.top > cap:
        total = USeries(total.shift, total.coeffs[: cap - total.shift + 1])
    return total


# -- univariate transforms -------------------------------------------------------


def m_series(m):
    """M(z) = sum_{n>=1} m_n z^n as a PSeries of order len(m)-1."""
    return PSeries([Fraction(0)] + [x for x in m[1:]], len(m) - 1)


def eta_series(m):
    M = m_series(m)
    return M / (1 + M)


def rho_series(m):
    return eta_series(m).shift_down(1)


def g_series(m):
    if m[0] == 0:
        raise ValueError("G-series of a functional with unit value 0")
    return USeries.from_moments(m)


def f_series(m):
    return g_series(m).reciprocal()


def moments_from_eta(eta, order=None):
    M = eta / (1 - eta)
    n = M.order if order is None else order
    return [Fraction(1)] + [M.coeffs[k] for k in range(1, n + 1)]


def free_cumulant_series(m):
    """[kappa_1, ..., kappa_N] from [m_0=1, m_1, ..., m_N]."""
    order = len(m) - 1
    ghat = PSeries([Fraction(0)] + list(m), order + 1)
    v = ghat.inverse_compose()
    vtil = v.shift_down(1)
    r = ((1 - vtil) / vtil).shift_down(1)
    return [r.coeffs[k] for k in range(order)]


def moments_from_free_cumulant_series(kappa):
    """Inverse of free_cumulant_series."""
    order = len(kappa)
    w = PSeries.x(order + 1)
    v = w / (1 + (w * PSeries(list(kappa), order + 1)))
    ghat = v.inverse_compose()
    return [Fraction(1) if n == 0 else ghat.coeffs[n + 1] for n in range(order + 1)]


def r_transform(m):
    """R(z) = sum kappa_n z^n (coefficients start at z^1)."""
    kap = free_cumulant_series(m)
    return PSeries([Fraction(0)] + kap, len(m) - 1)


def s_transform(m):
    """S(z) = (1+z)/z * M^<-1>(z); needs m_1 != 0."""
    if m[1] == 0:
        raise ZeroDivisionError("S-transform needs a nonzero first moment")
    M = m_series(m)
    minv = M.inverse_compose()
    return (1 + PSeries.x(M.order)) * PSeries(minv.coeffs[1:], M.order - 1)


def moments_from_s(S, order):
    """Moments from the S-transform: M^<-1>(z) = z S(z) / (1+z)."""
    w = PSeries.x(order + 1)
    minv = (w * PSeries(list(S.coeffs), order + 1)) / (1 + w)
    M = minv.inverse_compose()
    return [Fraction(1)] + [M.coeffs[n] for n in range(1, order + 1)]


def conditional_cumulant_series(mpsi, mphi):
    """[kc_1, ..., kc_N]: conditional cumulants via the C-transform equation."""
    order = min(len(mpsi), len(mphi)) - 1
    Mpsi = m_series(mpsi[: order + 1])
    y = PSeries.x(order) * (1 + Mpsi)
    yinv = y.inverse_compose()
    t = (eta_series(mphi[: order + 1]) * (1 + Mpsi)).compose(yinv)
    return [t.coeffs[k] for k in range(1, order + 1)]


def moments_from_conditional_series(kc, mpsi):
    """phi-moments from conditional cumulants and the psi-moments."""
    order = len(kc)
    Mpsi = m_series(mpsi[: order + 1])
    y = PSeries.x(order) * (1 + Mpsi)
    c = PSeries([Fraction(0)] + list(kc), order)
    t = c.compose(y)
    Mphi = t / (1 + Mpsi - t)
    return [Fraction(1)] + [Mphi.coeffs[n] for n in range(1, order + 1)]


def mk_series(m):
    """Moments of [psi]: M^[psi] = z (M^psi)' / (1 + M^psi); entry 0 is 1."""
    M = m_series(m)
    zmp = PSeries([Fraction(0)] + [n * m[n] for n in range(1, M.order + 1)], M.order)
    out = zmp / (1 + M)
    return [Fraction(1)] + [out.coeffs[n] for n in range(1, M.order + 1)]


def dpsi_series(mpsi, mphi, momega):
    """DPsi-moments [0, d_1, ..]: omega - [phi] - (omega(1)-1)[psi]."""
    order = min(len(mpsi), len(mphi), len(momega)) - 1
    mkp = mk_series(mpsi[: order + 1])
    mkf = mk_series(mphi[: order + 1])
    delta = 1 - momega[0]
    out = [Fraction(0)]
    for n in range(1, order + 1):
        out.append(momega[n] - mkf[n] + delta * mkp[n])
    return out


def g_dpsi_series(mpsi, mphi, momega):
    """G^{DPsi} as a USeries (no 1/z term)."""
    d = dpsi_series(mpsi, mphi, momega)
    return USeries(1, d)


# -- additive convolutions --------------------------------------------------------


class AdditiveResult:
    def __init__(self, **kw):
        self.__dict__.update(kw)


def free_additive(ma, mb):
    """Free additive convolution with subordination certificates."""
    order = min(len(ma), len(mb)) - 1
    ka = free_cumulant_series(ma[: order + 1])
    kb = free_cumulant_series(mb[: order + 1])
    mout = moments_from_free_cumulant_series([x + y for x, y in zip(ka, kb)])
    gout = g_series(mout)
    wa = subordination_from_kappa(ka, gout)
    wb = subordination_from_kappa(kb, gout)
    return AdditiveResult(moments=mout, omega_a=wa, omega_b=wb, order=order)


def subordination_from_kappa(kappa_self, g_out):
    """omega_a = K_a(G_{a+b}) = R_a(G_{a+b}) + 1/G_{a+b}."""
    return polyval_u(kappa_self, g_out) + g_out.reciprocal()


def check_free_subordination(ma, mb, res, order):
    """Exact identities: G_a(w_a) = G_{a+b} = G_b(w_b); w_a + w_b - z = F."""
    gout = g_series(res.moments)
    ga, gb = g_series(ma), g_series(mb)
    ok = ga.compose(res.omega_a).eq_to(gout, order + 1)
    ok &= gb.compose(res.omega_b).eq_to(gout, order + 1)
    f = gout.reciprocal()
    z = USeries.z_var(order + 1)
    ok &= (res.omega_a + res.omega_b - z).eq_to(f, order - 1)
    return ok


def boolean_additive(ma, mb):
    order = min(len(ma), len(mb)) - 1
    eta = eta_series(ma[: order + 1]) + eta_series(mb[: order + 1])
    return AdditiveResult(moments=moments_from_eta(eta, order), order=order)


def monotone_additive(ma, mb):
    """F_{a |> b} = F_a o F_b."""
    order = min(len(ma), len(mb)) - 1
    fa, fb = f_series(ma[: order + 1]), f_series(mb[: order + 1])
    fout = fa.compose(fb)
    return AdditiveResult(moments=fout.reciprocal().to_moments(order), order=order)


def conditional_additive(a, b):
    """a, b: (mpsi, mphi) pairs; conditional cumulants add on the phi side."""
    (mpa, mfa), (mpb, mfb) = a, b
    order = min(len(mpa), len(mfa), len(mpb), len(mfb)) - 1
    psi = free_additive(mpa[: order + 1], mpb[: order + 1])
    kc = [
        x + y
        for x, y in zip(
            conditional_cumulant_series(mpa[: order + 1], mfa[: order + 1]),
            conditional_cumulant_series(mpb[: order + 1], mfb[: order + 1]),
        )
    ]
    phi = moments_from_conditional_series(kc, psi.moments)
    return AdditiveResult(
        psi=psi.moments, phi=phi, omega_a=psi.omega_a, omega_b=psi.omega_b, order=order
    )


def check_conditional_f_identity(a, b, res, order):
    """F^psi_{a+b} - (F^phi_a(w_a) + F^phi_b(w_b)) = -F^phi_{a+b}."""
    (mpa, mfa), (mpb, mfb) = a, b
    lhs = f_series(res.psi) - (
        f_series(mfa).compose(res.omega_a) + f_series(mfb).compose(res.omega_b)
    )
    return (lhs + f_series(res.phi)).is_zero_to(order - 1)


def infinitesimal_additive(a, b):
    """a, b: (mpsi, dm) with dm[0] = 0; dual-number free convolution."""
    (mpa, da), (mpb, db) = a, b
    order = min(len(mpa), len(da), len(mpb), len(db)) - 1
    ma = [Dual(x, y) for x, y in zip(mpa[: order + 1], da[: order + 1])]
    mb = [Dual(x, y) for x, y in zip(mpb[: order + 1], db[: order + 1])]
    ka = free_cumulant_series(ma)
    kb = free_cumulant_series(mb)
    mout = moments_from_free_cumulant_series([x + y for x, y in zip(ka, kb)])
    psi = [Dual.lift(c).a for c in mout]
    dpsi = [Dual.lift(c).b for c in mout]
    base = free_additive(mpa[: order + 1], mpb[: order + 1])
    return AdditiveResult(
        psi=psi, dpsi=dpsi, omega_a=base.omega_a, omega_b=base.omega_b, order=order
    )


def check_infinitesimal_subordination(a, b, res, order):
    """G^d_{a+b} = G^d_a(w_a) w_a' + G^d_b(w_b) w_b'."""
    (mpa, da), (mpb, db) = a, b
    gda, gdb = USeries(2, da[1:]), USeries(2, db[1:])
    rhs = gda.compose(res.omega_a) * res.omega_a.deriv() + gdb.compose(
        res.omega_b
    ) * res.omega_b.deriv()
    lhs = USeries(2, res.dpsi[1:])
    return lhs.eq_to(rhs, order)


def log_deriv_u(g):
    """g'/g for a USeries."""
    return g.deriv() / g


def cyclic_conditional_additive(a, b):
    """a, b: (mpsi, mphi, momega) with momega[0] = omega(1) shared.

    omega-output from the subordination proposition; also computed through
    D-cumulant additivity as an internal cross-check.
    """
    (mpa, mfa, moa), (mpb, mfb, mob) = a, b
    if moa[0] != mob[0]:
        raise ValueError("omega(1) must agree across marginals")
    delta1 = 1 - moa[0]
    order = min(len(x) for x in (mpa, mfa, moa, mpb, mfb, mob)) - 1
    cond = conditional_additive((mpa, mfa), (mpb, mfb))
    wa, wb = cond.omega_a, cond.omega_b
    gpsi_out = g_series(cond.psi)
    gphi_out = g_series(cond.phi)
    gwa = USeries(1, moa[: order + 1])
    gwb = USeries(1, mob[: order + 1])
    gfa = g_series(mfa[: order + 1])
    gfb = g_series(mfb[: order + 1])
    gw_out = (
        gwa.compose(wa) * wa.deriv()
        + gwb.compose(wb) * wb.deriv()
        - delta1 * log_deriv_u(gpsi_out)
        + log_deriv_u(gfa).compose(wa) * wa.deriv()
        + log_deriv_u(gfb).compose(wb) * wb.deriv()
        - log_deriv_u(gphi_out)
    )
    momega_out = gw_out.to_moments(order)
    if momega_out[0] != moa[0]:
        raise AssertionError("omega(1) not preserved by the additive formula")

    # cross-path: D-cumulant additivity
    dts = [dpsi_series(mpa, mfa, moa), dpsi_series(mpb, mfb, mob)]
    dk = []
    for mp, dt in ((mpa, dts[0]), (mpb, dts[1])):
        md = [Dual(x, y) for x, y in zip(mp[: order + 1], dt[: order + 1])]
        dk.append([Dual.lift(c).b for c in free_cumulant_series(md)])
    kp = [
        x + y
        for x, y in zip(
            free_cumulant_series(mpa[: order + 1]), free_cumulant_series(mpb[: order + 1])
        )
    ]
    md_out = moments_from_free_cumulant_series(
        [Dual(k, d1 + d2) for k, d1, d2 in zip(kp, dk[0], dk[1])]
    )
    dpsi_out = [Dual.lift(c).b for c in md_out]
    mk_psi = mk_series(cond.psi)
    mk_phi = mk_series(cond.phi)
    momega_cross = [moa[0]] + [
        dpsi_out[n] + mk_phi[n] - delta1 * mk_psi[n] for n in range(1, order + 1)
    ]
    if momega_cross != momega_out:
        raise AssertionError("cyclic-conditional additive dual paths disagree")
    return AdditiveResult(
        psi=cond.psi,
        phi=cond.phi,
        omega=momega_out,
        omega_a=wa,
        omega_b=wb,
        order=order,
    )


def cyclic_boolean_additive(a, b):
    """a, b: (mphi, momega) with momega[0] = 0 and psi trivial on the ideal.

    G^w_{a+b} = G^w_a + G^w_b + (G^f_a)'/G^f_a + (G^f_b)'/G^f_b
                - (G^f_{a+b})'/G^f_{a+b} + 1/z.
    """
    (mfa, moa), (mfb, mob) = a, b
    order = min(len(mfa), len(moa), len(mfb), len(mob)) - 1
    phi = boolean_additive(mfa[: order + 1], mfb[: order + 1]).moments
    zinv = USeries(1, [Fraction(1)] + [Fraction(0)] * (order + 1))
    gw = (
        USeries(1, moa[: order + 1])
        + USeries(1, mob[: order + 1])
        + log_deriv_u(g_series(mfa[: order + 1]))
        + log_deriv_u(g_series(mfb[: order + 1]))
        - log_deriv_u(g_series(phi))
        + zinv
    )
    return AdditiveResult(phi=phi, omega=gw.to_moments(order), order=order)


def cyclic_monotone_additive(a, b):
    """a: (mphi_a, momega_a) for the kernel variable, b likewise with psi=phi.

    G^w_{a+b}(z) = G^w_a(F^f_b(z)) (F^f_b)'(z) + G^w_b(z).
    """
    (mfa, moa), (mfb, mob) = a, b
    order = min(len(mfa), len(moa), len(mfb), len(mob)) - 1
    fb = f_series(mfb[: order + 1])
    gw = USeries(1, moa[: order + 1]).compose(fb) * fb.deriv() + USeries(
        1, mob[: order + 1]
    )
    phi = monotone_additive(mfa[: order + 1], mfb[: order + 1]).moments
    return AdditiveResult(phi=phi, omega=gw.to_moments(order), order=order)


def additive_convolve(mode, a, b):
    if mode == "free":
        return free_additive(a, b)
    if mode == "boolean":
        return boolean_additive(a, b)
    if mode == "monotone":
        return monotone_additive(a, b)
    if mode == "conditional":
        return conditional_additive(a, b)
    if mode == "infinitesimal":
        return infinitesimal_additive(a, b)
    if mode == "cyclic_conditional":
        return cyclic_conditional_additive(a, b)
    if mode == "cyclic_boolean":
        return cyclic_boolean_additive(a, b)
    if mode == "cyclic_monotone":
        return cyclic_monotone_additive(a, b)
    raise ValueError("unknown additive mode %r" % (mode,))


# -- multiplicative convolutions ----------------------------------------------------


def mult_subordinations(mx, my, iterations=None):
    """Fixed points w_x = z rho_x(z rho_y(w_x)), w_y symmetric; PSeries.

    rho-series are zero-padded back to full order; the padded coefficient
    cannot reach degrees <= order through z rho(val->=1 argument).
    """
    order = min(len(mx), len(my)) - 1
    rx = PSeries(rho_series(mx[: order + 1]).coeffs, order)
    ry = PSeries(rho_series(my[: order + 1]).coeffs, order)
    z = PSeries.x(order)
    its = order + 1 if iterations is None else iterations

    def solve(r_self, r_other):
        # w_x = z rho_y(z rho_x(w_x)): from w_x w_y = z eta_xy and
        # eta_x o w_x = eta_xy; the unit factor forces this pairing.
        w = PSeries.const(Fraction(0), order)
        for _ in range(its):
            w = z * r_other.compose(z * r_self.compose(w))
        return w

    wx, wy = solve(rx, ry), solve(ry, rx)
    resx = wx - z * ry.compose(z * rx.compose(wx))
    resy = wy - z * rx.compose(z * ry.compose(wy))
    if any(c != 0 for c in resx.coeffs) or any(c != 0 for c in resy.coeffs):
        raise AssertionError("fixed point not attained")
    return wx, wy


def z_dlog(p):
    """z d/dz ln(p) = v + z U'/U for p = z^v U, built without order loss."""
    v = p.valuation()
    if v > p.order:
        raise ZeroDivisionError("log-derivative of the zero series")
    U = PSeries(p.coeffs[v:], p.order - v)
    zUp = PSeries([k * U.coeffs[k] for k in range(U.order + 1)], U.order)
    return v + zUp / U


class MultiplicativeResult:
    def __init__(self, **kw):
        self.__dict__.update(kw)


def free_multiplicative(mx, my):
    order = min(len(mx), len(my)) - 1
    wx, wy = mult_subordinations(mx, my)
    eta_xy = eta_series(mx[: order + 1]).compose(wx)
    return MultiplicativeResult(
        moments=moments_from_eta(eta_xy, order), omega_x=wx, omega_y=wy, order=order
    )


def check_free_mult_subordination(mx, my, res, order):
    ex, ey = eta_series(mx), eta_series(my)
    exy = eta_series(res.moments)
    ok = ex.compose(res.omega_x) == exy
    ok &= ey.compose(res.omega_y) == exy
    prod = res.omega_x * res.omega_y
    zeta = PSeries([Fraction(0), Fraction(0)] + list(exy.coeffs[1:]), order)
    ok &= prod.coeffs[: order + 1] == zeta.coeffs[: order + 1]
    return ok


def boolean_multiplicative(mx, my):
    """rho_{xy} = rho_x rho_y for x-1, y-1 Boolean independent."""
    order = min(len(mx), len(my)) - 1
    eta = (rho_series(mx[: order + 1]) * rho_series(my[: order + 1])).shift_up(1)
    return MultiplicativeResult(moments=moments_from_eta(eta, order), order=order)


def monotone_multiplicative(mx, my):
    """eta_{xy} = eta_x o eta_y for x-1 monotone independent from y."""
    order = min(len(mx), len(my)) - 1
    eta = eta_series(mx[: order + 1]).compose(eta_series(my[: order + 1]))
    return MultiplicativeResult(moments=moments_from_eta(eta, order), order=order)


def conditional_multiplicative(x, y):
    """x, y: (mpsi, mphi); rho^phi_{xy} = rho^phi_x(w^psi_x) rho^phi_y(w^psi_y)."""
    (mpx, mfx), (mpy, mfy) = x, y
    order = min(len(mpx), len(mfx), len(mpy), len(mfy)) - 1
    psi = free_multiplicative(mpx[: order + 1], mpy[: order + 1])
    wx, wy = psi.omega_x, psi.omega_y
    rfx = PSeries(rho_series(mfx[: order + 1]).coeffs, order)
    rfy = PSeries(rho_series(mfy[: order + 1]).coeffs, order)
    rho = rfx.compose(wx) * rfy.compose(wy)
    eta = rho.shift_up(1)
    return MultiplicativeResult(
        psi=psi.moments,
        phi=moments_from_eta(eta, order),
        omega_x=wx,
        omega_y=wy,
        order=order,
    )


def eta_infinitesimal(m, dm):
    """d-eta = dM / (1+M)^2 as a PSeries."""
    order = min(len(m), len(dm)) - 1
    dM = PSeries([Fraction(0)] + list(dm[1 : order + 1]), order)
    M = m_series(m[: order + 1])
    q = (1 + M).reciprocal()
    return dM * q * q


def infinitesimal_multiplicative(x, y):
    (mpx, dx), (mpy, dy) = x, y
    order = min(len(mpx), len(dx), len(mpy), len(dy)) - 1
    md_x = [Dual(a, b) for a, b in zip(mpx[: order + 1], dx[: order + 1])]
    md_y = [Dual(a, b) for a, b in zip(mpy[: order + 1], dy[: order + 1])]
    wx, wy = mult_subordinations(md_x, md_y)
    eta_xy = eta_series(md_x).compose(wx)
    md_out = moments_from_eta(eta_xy, order)
    base = free_multiplicative(mpx[: order + 1], mpy[: order + 1])
    return MultiplicativeResult(
        psi=[Dual.lift(c).a for c in md_out],
        dpsi=[Dual.lift(c).b for c in md_out],
        omega_x=base.omega_x,
        omega_y=base.omega_y,
        order=order,
    )


def check_infinitesimal_eta_identity(x, y, res, order):
    """d-eta_{xy} = (z ln' w_x)(d-eta_x o w_x) + (z ln' w_y)(d-eta_y o w_y)."""
    (mpx, dx), (mpy, dy) = x, y
    z = PSeries.x(order)
    lhs = eta_infinitesimal(res.psi, res.dpsi)

    def term(w, m, dm):
        return z_dlog(w) * eta_infinitesimal(m, dm).compose(w)

    rhs = term(res.omega_x, mpx, dx) + term(res.omega_y, mpy, dy)
    n = min(lhs.order, rhs.order, order)
    return lhs.coeffs[: n + 1] == rhs.coeffs[: n + 1]


def cyclic_conditional_multiplicative(x, y):
    """x, y: (mpsi, mphi, momega); corrected subordination formula for omega."""
    (mpx, mfx, mox), (mpy, mfy, moy) = x, y
    if mox[0] != moy[0]:
        raise ValueError("omega(1) must agree across marginals")
    delta1 = 1 - mox[0]
    order = min(len(t) for t in (mpx, mfx, mox, mpy, mfy, moy)) - 1
    cond = conditional_multiplicative((mpx, mfx), (mpy, mfy))
    wx, wy = cond.omega_x, cond.omega_y
    eta_phix = eta_series(mfx[: order + 1])
    eta_phiy = eta_series(mfy[: order + 1])
    eta_phixy = eta_series(cond.phi)
    eta_psixy = eta_series(cond.psi)
    # M^w_{xy} = sum_c z ln'(w_c) M^w_c(w_c)
    #            - z d/dz ln((1-eta^f_{xy})/((1-eta^f_x o w_x)(1-eta^f_y o w_y)))
    #            - delta1 * z d/dz ln(1-eta^psi_{xy})
    Mx = PSeries([Fraction(0)] + list(mox[1 : order + 1]), order)
    My = PSeries([Fraction(0)] + list(moy[1 : order + 1]), order)
    out = (
        z_dlog(wx) * Mx.compose(wx)
        + z_dlog(wy) * My.compose(wy)
        - (
            z_dlog(1 - eta_phixy)
            - z_dlog(1 - eta_phix.compose(wx))
            - z_dlog(1 - eta_phiy.compose(wy))
        )
        - delta1 * z_dlog(1 - eta_psixy)
    )
    momega = [mox[0]] + [out.coeffs[n] for n in range(1, out.order + 1)]
    return MultiplicativeResult(
        psi=cond.psi, phi=cond.phi, omega=momega, omega_x=wx, omega_y=wy, order=order
    )


def cyclic_boolean_multiplicative(x, y):
    """x, y: (mphi, momega), x-1 and y-1 cyclic Boolean independent.

    M^w_{xy} = M^w_x + M^w_y - z d/dz ln((1-z rho_x rho_y)/((1-z rho_x)(1-z rho_y)))
               + z/(1-z).
    """
    (mfx, mox), (mfy, moy) = x, y
    order = min(len(mfx), len(mox), len(mfy), len(moy)) - 1
    z = PSeries.x(order)
    rx, ry = rho_series(mfx[: order + 1]), rho_series(mfy[: order + 1])
    Mx = PSeries([Fraction(0)] + list(mox[1 : order + 1]), order)
    My = PSeries([Fraction(0)] + list(moy[1 : order + 1]), order)
    out = (
        Mx
        + My
        - (
            z_dlog(1 - (rx * ry).shift_up(1))
            - z_dlog(1 - rx.shift_up(1))
            - z_dlog(1 - ry.shift_up(1))
        )
        + z / (1 - z)
    )
    phi = boolean_multiplicative(mfx[: order + 1], mfy[: order + 1]).moments
    return MultiplicativeResult(
        phi=phi, omega=[mox[0]] + [out.coeffs[n] for n in range(1, out.order + 1)], order=order
    )


def cyclic_boolean_nfold(mphi, momega, N):
    """Corrected N-fold corollary:
    M^w = N M^w_x + z d/dz ln((1-z rho)^N/(1-z rho^N)) + (N-1) z/(1-z).
    """
    order = min(len(mphi), len(momega)) - 1
    z = PSeries.x(order)
    rho = rho_series(mphi[: order + 1])
    rhoN = PSeries.const(Fraction(1), order - 1)
    for _ in range(N):
        rhoN = rhoN * rho
    Mx = PSeries([Fraction(0)] + list(momega[1 : order + 1]), order)
    out = (
        N * Mx
        + (N * z_dlog(1 - rho.shift_up(1)) - z_dlog(1 - rhoN.shift_up(1)))
        + (N - 1) * (z / (1 - z))
    )
    return [momega[0]] + [out.coeffs[n] for n in range(1, out.order + 1)]


def cyclic_monotone_multiplicative(x, y):
    """Mtilde^w_{xy}(z) = Mtilde^w_y(z) + Mtilde^w_x(eta^f_y(z)) (eta^f_y)'(z)."""
    (mfx, mox), (mfy, moy) = x, y
    order = min(len(mfx), len(mox), len(mfy), len(moy)) - 1
    eta_y = eta_series(mfy[: order + 1])
    Mtx = PSeries(list(mox[1 : order + 1]), order - 1)
    Mty = PSeries(list(moy[1 : order + 1]), order - 1)
    out = Mty + _compose_with_val1(Mtx, eta_y) * eta_y.deriv()
    phi = monotone_multiplicative(mfx[: order + 1], mfy[: order + 1]).moments
    momega = [mox[0]] + [out.coeffs[n - 1] for n in range(1, order + 1)]
    return MultiplicativeResult(phi=phi, omega=momega, order=order)


def _compose_with_val1(p, g):
    """p(g) where p may have a constant term; g has valuation >= 1."""
    out = PSeries.const(p.coeffs[p.order], min(p.order, g.order))
    for k in range(p.order - 1, -1, -1):
        out = out * g + p.coeffs[k]
    return out


def multiplicative_convolve(mode, x, y):
    if mode == "free":
        return free_multiplicative(x, y)
    if mode == "boolean":
        return boolean_multiplicative(x, y)
    if mode == "monotone":
        return monotone_multiplicative(x, y)
    if mode == "conditional":
        return conditional_multiplicative(x, y)
    if mode == "infinitesimal":
        return infinitesimal_multiplicative(x, y)
    if mode == "cyclic_conditional":
        return cyclic_conditional_multiplicative(x, y)
    if mode == "cyclic_boolean":
        return cyclic_boolean_multiplicative(x, y)
    if mode == "cyclic_monotone":
        return cyclic_monotone_multiplicative(x, y)
    raise ValueError("unknown multiplicative mode %r" % (mode,))


# -- cyclic Boolean transform bundle --------------------------------------------------


def cyclic_boolean_transforms(mphi, momega):
    """(h, c, Sigma-d) for a cyclic Boolean pair.

    h (USeries) linearizes the additive convolution; c's coefficients are the
    cyclic Boolean cumulants; Sigma-d (PSeries) linearizes the multiplicative
    convolution.
    """
    order = min(len(mphi), len(momega)) - 1
    z = PSeries.x(order)
    gphi = g_series(mphi[: order + 1])
    gw = USeries(1, momega[: order + 1])
    h = gw + log_deriv_u(gphi) + USeries(1, [Fraction(1)] + [Fraction(0)] * order)
    # h = G^w + d/dz ln(z G^f); d/dz ln z = 1/z
    Mphi = m_series(mphi[: order + 1])
    eta_phi = eta_series(mphi[: order + 1])
    Mw = PSeries([Fraction(0)] + list(momega[1 : order + 1]), order)
    zMp = PSeries([k * Mphi.coeffs[k] for k in range(order + 1)], order)
    zEp = PSeries([k * eta_phi.coeffs[k] for k in range(order + 1)], order)
    c = (Mw - zMp / (1 + Mphi)) + zEp
    rho = rho_series(mphi[: order + 1])
    sigma = Mw + z_dlog(1 - rho.shift_up(1)) + z / (1 - z)
    return h, c, sigma
