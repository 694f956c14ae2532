"""phi, the Gamma-action and psi on scalar series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._kernel import INF, suffix_min, taylor_shift, vp
from .errors import DomainError, PrecisionError
from .padic import DEFAULT_PRECISION, CycloElement, PadicNumber
from .series import (DEFAULT_NEG_DEPTH, CycloPowerSeries, LaurentSeries, _padic,
                     shift_modulus, subst_oneplus)


@dataclass(frozen=True)
class GammaElement:
    """gamma in Gamma = Z_p^*, recorded by a = chi(gamma)."""
    a: object  # int, Fraction or PadicNumber
    p: int

    def __post_init__(self):
        x = _padic(self.a, self.p)
        if x.v != 0:
            raise DomainError(f"chi(gamma) must be a p-adic unit, got {self.a}")
        if self.p == 2 and x.lift() % 4 != 1:
            raise DomainError("for p = 2 only a = 1 mod 4 is supported")

    def __mul__(self, other):
        return GammaElement(self.a * other.a, self.p)

    def __pow__(self, k):
        if k < 0:
            return GammaElement(_padic(self.a, self.p).inverse() ** (-k), self.p)
        return GammaElement(self.a ** k, self.p)

    @property
    def chi(self) -> PadicNumber:
        return _padic(self.a, self.p)


def op_phi(f: LaurentSeries, max_neg_depth=DEFAULT_NEG_DEPTH) -> LaurentSeries:
    """phi(f) = f((1+X)^p - 1)."""
    return subst_oneplus(f, f.p, max_neg_depth)


def op_gamma(g: GammaElement, f: LaurentSeries, max_neg_depth=DEFAULT_NEG_DEPTH,
             order=None) -> LaurentSeries:
    if g.p != f.p:
        raise DomainError("prime mismatch")
    if g.a == 1:
        return f
    return subst_oneplus(f, g.a, max_neg_depth, order)


def op_partial(f: LaurentSeries) -> LaurentSeries:
    return f.partial()


def op_nabla(f: LaurentSeries) -> LaurentSeries:
    return f.nabla()


def log_p(a, p, prec=DEFAULT_PRECISION) -> PadicNumber:
    """Iwasawa logarithm of a principal unit a = 1 + x, v(x) > 0."""
    a = _padic(a, p, prec)
    x = a - 1
    if x.v <= 0:
        raise DomainError("log_p series needs a - 1 divisible by p")
    total = PadicNumber.zero(p)
    k = 1
    power = x
    while k * x.v - vp(k, p) < prec + x.v + 2:
        total = total + power * Fraction((-1) ** (k + 1), k)
        power = power * x
        k += 1
    return total


def nabla_fd(f: LaurentSeries, m: int, order: int) -> LaurentSeries:
    """Finite-difference estimate (gamma_a(f) - f) / log_p(a), a = 1 + p^m.

    Differs from nabla(f) by O(p^m) to first order.
    """
    p = f.p
    a = 1 + p ** m
    ft = f.truncate(order)
    diff = subst_oneplus(ft, a, order=order) - ft
    return diff.scale(log_p(a, p, ft._scalar_precision() + m).inverse(ft._scalar_precision() + m))


# ---------------------------------------------------------------------------
# psi


def psi_decompose(f: LaurentSeries, max_neg_depth=DEFAULT_NEG_DEPTH):
    """The components (x_0, ..., x_{p-1}) of f = sum (1+X)^i phi(x_i).

    In the basis Y = 1+X the equations become triangular: phi(x_i)(Y - 1) is
    x_i's Y-expansion evaluated at Y^p, so x_i collects the Y-coefficients in
    the residue class i mod p. Poles are cleared first by phi(X)^d.
    """
    p = f.p
    d = max(0, -f.start)
    if d > max_neg_depth:
        raise DomainError(f"pole order {d} exceeds the configured depth {max_neg_depth}")
    g = f
    if d:
        g = f * op_phi(LaurentSeries.gen(p)) ** d
    if g.order != INF and g.start < 0:
        raise DomainError("pole clearing failed")
    length = g.end if g.order == INF else g.order
    ints = [0] * length
    caps = [INF] * length
    for i in range(len(g)):
        e = g.start + i
        if e < length:
            ints[e] = g.c[i]
            caps[e] = g.caps[i]
    mod = shift_modulus(p, g.caps, g.shift) if g.order != INF else None
    big = taylor_shift(ints, -1, mod)  # Y-basis coefficients
    ycaps = suffix_min(caps)
    out_order = INF if g.order == INF else -(-g.order // p) - d
    parts = []
    for r in range(p):
        sub = big[r::p]
        sc = ycaps[r::p]
        back = taylor_shift(sub, 1, mod)
        bcaps = suffix_min(sc) if sc else []
        comp = LaurentSeries._finish(p, 0, 0, INF, g.shift, back, bcaps)
        if d:
            comp = comp.shift_exponents(-d)
        if out_order != INF:
            comp = comp.truncate(out_order) if len(comp) else LaurentSeries.zero(p, out_order)
            comp = LaurentSeries._finish(p, 0, comp.start, out_order, comp.shift,
                                         comp.c, comp.caps)
        parts.append(comp)
    # phi(X)^d f = sum (1+X)^i phi(X^d x_i), hence the shift by -d above
    return parts


def psi_A(f: LaurentSeries, max_neg_depth=DEFAULT_NEG_DEPTH) -> LaurentSeries:
    """psi by solving the decomposition x = sum (1+X)^i phi(x_i)."""
    return psi_decompose(f, max_neg_depth)[0]


def _desubstitute_phi(k: LaurentSeries, length: int) -> LaurentSeries:
    """Solve phi(q) = k for a power series q mod X^length (X-adic triangular solve)."""
    p = k.p
    phx = op_phi(LaurentSeries.gen(p))
    powers = [LaurentSeries.one(p)]
    for _ in range(1, length):
        powers.append((powers[-1] * phx).truncate(length))
    r = k.truncate(length)
    q = []
    for j in range(length):
        cj = r.coefficient(j)
        qj = cj * PadicNumber.from_rational(Fraction(1, p ** j), p, None)
        q.append(qj)
        if qj.u:
            r = r - powers[j].scale(qj)
    return LaurentSeries._from_scalars(p, 0, 0, length, q)


def psi_B(f: LaurentSeries, max_neg_depth=DEFAULT_NEG_DEPTH, order=None) -> LaurentSeries:
    """psi via the trace over mu_p: phi(psi(f)) = p^{-1} sum_{zeta^p=1} f(zeta(1+X) - 1).

    The zeta != 1 terms form one Galois orbit, so their sum is the trace
    K_1 -> Q_p of f(zeta(1+X) - 1). Works on the stored representative as an
    exact value; the result's precision is the input's uniform precision
    (psi preserves X^{-d} Z_p[[X]]).
    """
    p = f.p
    d = max(0, -f.start)
    if d > max_neg_depth:
        raise DomainError(f"pole order {d} exceeds the configured depth {max_neg_depth}")
    if order is None:
        if f.order == INF:
            order = -(-(f.end + d * (p - 1)) // p) - d + 1
        else:
            order = -(-(f.order + d) // p) - d
    length = order + d  # of q = X^d psi(f)
    if length <= 0:
        return LaurentSeries.zero(p, order)
    work = length + d + 1  # X-adic length needed for h
    fx = LaurentSeries._from_scalars(p, 0, f.start, INF,
                                     f._exact_scalars(f.start, len(f)))
    z = CycloElement.zeta(p, 1)
    u = CycloPowerSeries.from_scalars([z - 1, z], p, 1, 0, INF)
    one = CycloPowerSeries.from_scalars([CycloElement.scalar(1, p, 1)], p, 1, 0, INF)
    hi = max(fx.end, 0)
    acc = None
    for e in range(hi - 1, -1, -1):
        c = CycloElement.scalar(fx.coefficient(e), p, 1)
        acc = one.scale(c) if acc is None else (acc * u + one.scale(c)).truncate(work)
    total = acc if acc is not None else one.scale(0)
    if d:
        ui = u.invert(order=work)
        neg = None
        for e in range(-d, 0):
            c = CycloElement.scalar(fx.coefficient(e), p, 1)
            neg = one.scale(c) if neg is None else neg * ui + one.scale(c)
        total = total + (neg * ui).truncate(work)
    tr = total.truncate(work).trace()
    h = (tr + fx.truncate(work)).scale(PadicNumber.from_rational(Fraction(1, p), p, None))
    phx = op_phi(LaurentSeries.gen(p))
    k = (h * phx ** d).truncate(length) if d else h.truncate(length)
    q = _desubstitute_phi(k, length)
    # image-of-phi check: re-apply phi and compare
    back = op_phi(q).truncate(length)
    if not back.equals(k.truncate(length)):
        raise PrecisionError("trace result is not in the image of phi at working precision")
    out = q.shift_exponents(-d)
    cap = f.min_precision()
    if cap != INF:
        out = out.with_precision(cap)
    return out.truncate(order)


def op_psi(f: LaurentSeries, algorithm="A", max_neg_depth=DEFAULT_NEG_DEPTH) -> LaurentSeries:
    if algorithm == "A":
        return psi_A(f, max_neg_depth)
    if algorithm == "B":
        return psi_B(f, max_neg_depth)
    raise DomainError(f"unknown psi algorithm {algorithm!r}")
