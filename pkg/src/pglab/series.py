"""Truncated Laurent series over Q_p, and power series over K_n.

Storage: a window of exponents starting at ``start``; coefficient ``e`` is
``p**shift * c[e - start]`` (``d`` integers per coefficient when the
coefficients live in K_n, power basis in zeta). Each coefficient carries its
own absolute precision ``caps[e - start]``: the true value is known modulo
``p**cap`` (times the integers of K_n). ``INF`` marks exact values.

``order`` is the X-adic truncation: the series is known mod X**order. An
``order`` of ``INF`` means the value is an exact Laurent polynomial; such
values are closed under +, *, d/dX, phi and gamma_a for positive integers a.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernel import INF, as_cap, convolve, convolve_cyclo, cyclo_degree, minplus, \
    reduce_cyclotomic, suffix_min, taylor_shift, vp, vp_many
from .errors import DomainError
from .padic import DEFAULT_PRECISION, CycloElement, PadicNumber, binom_zp

DEFAULT_ORDER = 32
DEFAULT_NEG_DEPTH = 8


def _padic(x, p, N=DEFAULT_PRECISION):
    if isinstance(x, PadicNumber):
        if x.p != p:
            raise DomainError("prime mismatch")
        return x
    x = Fraction(x)
    den = x.denominator
    exact = den // p ** vp(den, p) == 1
    return PadicNumber.from_rational(x, p, None if exact else N)


class _SeriesBase:
    __slots__ = ("p", "level", "start", "order", "shift", "c", "caps")
    var = "X"

    def __init__(self, p, level, start, order, shift, c, caps):
        self.p = p
        self.level = level
        self.start = start
        self.order = order
        self.shift = shift
        self.c = c
        self.caps = caps

    # -- construction / normalization --------------------------------------
    @property
    def d(self):
        return cyclo_degree(self.p, self.level)

    @property
    def end(self):
        """One past the last stored exponent."""
        return self.start + len(self.caps)

    @classmethod
    def _finish(cls, p, level, start, order, shift, c, caps):
        d = cyclo_degree(p, level)
        if order == INF:
            length = max(len(caps), len(c) // d)
        else:
            length = max(order - start, 0)
        c = list(c[:length * d]) + [0] * max(0, length * d - len(c))
        caps = list(caps[:length]) + [INF] * max(0, length - len(caps))
        for i, cap in enumerate(caps):
            if cap != INF:
                e = cap - shift
                lo, hi = i * d, (i + 1) * d
                if e <= 0:
                    c[lo:hi] = [0] * d
                else:
                    m = p ** e
                    for j in range(lo, hi):
                        c[j] %= m
        k = 0
        while k < length and caps[k] == INF and not any(c[k * d:(k + 1) * d]):
            k += 1
        if k:
            c = c[k * d:]
            caps = caps[k:]
            start += k
            length -= k
        if order == INF:
            while caps and caps[-1] == INF and not any(c[-d:]):
                caps.pop()
                del c[-d:]
            if not caps:
                start = 0
        g = vp_many(c, p)
        if g == INF:
            shift = 0
        elif g:
            q = p ** g
            c = [x // q for x in c]
            shift += g
        return cls(p, level, start, order, shift, c, caps)

    def _new(self, start, order, shift, c, caps):
        return type(self)._finish(self.p, self.level, start, order, shift, c, caps)

    @classmethod
    def _from_scalars(cls, p, level, start, order, values):
        """From PadicNumbers (level 0) or CycloElements at start, start+1, ..."""
        d = cyclo_degree(p, level)
        if level == 0:
            shift = min((int(x.v) for x in values if x.u), default=0)
            c, caps = [], []
            for x in values:
                if x.u == 0:
                    c.append(0)
                    caps.append(x.v if x.v == INF else int(x.v))
                else:
                    c.append(x.u * p ** (int(x.v) - shift))
                    caps.append(INF if x.N == INF else int(x.v + x.N))
            return cls._finish(p, 0, start, order, shift, c, caps)
        shift = min((x.shift for x in values if not x.is_zero()), default=0)
        c, caps = [], []
        for x in values:
            if x.is_zero():
                c.extend([0] * d)
            else:
                k = p ** (x.shift - shift)
                c.extend(y * k for y in x.c)
            caps.append(as_cap(x.prec))
        return cls._finish(p, level, start, order, shift, c, caps)

    def _scalar(self, x, N=None):
        """Coerce a number to this series' coefficient type."""
        N = self._scalar_precision() if N is None else N
        if self.level == 0:
            return _padic(x, self.p, N)
        if isinstance(x, CycloElement):
            return x
        return CycloElement.scalar(x, self.p, self.level, N)

    def _scalar_zero(self):
        if self.level == 0:
            return PadicNumber.zero(self.p)
        return CycloElement.scalar(0, self.p, self.level)

    # -- inspection ---------------------------------------------------------
    def __len__(self):
        return len(self.caps)

    def coefficient_valuations(self):
        """Lattice valuation of each stored coefficient, capped by its precision."""
        out = []
        d = self.d
        for i, cap in enumerate(self.caps):
            k = vp_many(self.c[i * d:(i + 1) * d], self.p)
            out.append(cap if k == INF else min(self.shift + k, cap))
        return out

    def valuation(self):
        """min over coefficients of min(valuation, precision); INF for exact zero."""
        return min(self.coefficient_valuations(), default=INF)

    def min_precision(self):
        return min(self.caps, default=INF)

    def is_exact(self):
        return all(cap == INF for cap in self.caps)

    def is_polynomial(self):
        return self.order == INF

    def is_zero(self, threshold=None):
        if threshold is None:
            return not any(self.c)
        return self.valuation() >= threshold

    def low_exponent(self):
        """Lowest exponent whose coefficient is nonzero at precision, or None."""
        d = self.d
        for i in range(len(self)):
            if any(self.c[i * d:(i + 1) * d]):
                return self.start + i
        return None

    def _scalar_precision(self):
        """Relative precision to use for scalars mixed into this series."""
        finite = [cap - v for cap, v in zip(self.caps, self.coefficient_valuations())
                  if cap != INF and v != INF]
        return max(finite + [DEFAULT_PRECISION])

    def coefficient(self, e):
        if e < self.start or (self.order == INF and e >= self.end):
            return self._scalar_zero()
        if e >= self.order:
            raise DomainError(f"{self.var}^{e} is beyond the truncation O({self.var}^{self.order})")
        i = e - self.start
        cap = self.caps[i]
        if self.level == 0:
            return PadicNumber.from_parts(self.p, self.shift, self.c[i],
                                          INF if cap == INF else cap - self.shift)
        d = self.d
        return CycloElement.make(self.p, self.level, self.c[i * d:(i + 1) * d], self.shift, cap)

    def coefficients(self):
        return {self.start + i: self.coefficient(self.start + i) for i in range(len(self))}

    # -- ring operations ----------------------------------------------------
    def _compatible(self, other):
        if not isinstance(other, _SeriesBase):
            return False
        if (other.p, other.level) != (self.p, self.level):
            raise DomainError("series over different coefficient rings")
        return True

    def _aligned(self, other):
        d = self.d
        start = min(self.start, other.start)
        order = min(self.order, other.order)
        if order == INF:
            length = max(self.end, other.end) - start
        else:
            length = max(order - start, 0)
        m = min(self.shift, other.shift)

        def place(s):
            out = [0] * (length * d)
            caps = [INF] * length
            k = s.p ** (s.shift - m)
            off = s.start - start
            for i in range(len(s)):
                j = off + i
                if j >= length:
                    break
                caps[j] = s.caps[i]
                out[j * d:(j + 1) * d] = [x * k for x in s.c[i * d:(i + 1) * d]]
            return out, caps

        a, ca = place(self)
        b, cb = place(other)
        return start, order, m, a, ca, b, cb

    def __add__(self, other):
        if not self._compatible(other):
            return self + self.constant(other)
        start, order, m, a, ca, b, cb = self._aligned(other)
        return self._new(start, order, m, [x + y for x, y in zip(a, b)],
                         [min(x, y) for x, y in zip(ca, cb)])

    __radd__ = __add__

    def __neg__(self):
        return self._new(self.start, self.order, self.shift, [-x for x in self.c], list(self.caps))

    def __sub__(self, other):
        if not self._compatible(other):
            return self - self.constant(other)
        start, order, m, a, ca, b, cb = self._aligned(other)
        return self._new(start, order, m, [x - y for x, y in zip(a, b)],
                         [min(x, y) for x, y in zip(ca, cb)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not self._compatible(other):
            return self.scale(other)
        a, b = self, other
        start = a.start + b.start
        order = min(a.order + b.start, b.order + a.start)
        if order == INF:
            length = len(a) + len(b) - 1 if len(a) and len(b) else 0
        else:
            length = max(order - start, 0)
        d = self.d
        if length <= 0:
            return self._new(start, order, 0, [], [])
        prod = convolve_cyclo(a.c[:length * d], b.c[:length * d], d, self.p, self.level)
        if a.is_exact() and b.is_exact():
            caps = [INF] * length
        else:
            va = a.coefficient_valuations()[:length]
            vb = b.coefficient_valuations()[:length]
            m = np.minimum(minplus(va, b.caps[:length]), minplus(a.caps[:length], vb))
            caps = [as_cap(x) for x in m[:length]] + [INF] * max(0, length - len(m))
        return self._new(start, order, a.shift + b.shift, prod, caps)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.invert() ** (-k)
        out = self.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def constant(self, x):
        return type(self)._from_scalars(self.p, self.level, 0, max(self.order, 1),
                                        [self._scalar(x)])

    def scale(self, x):
        """Multiply by a scalar (number, PadicNumber or CycloElement)."""
        x = self._scalar(x)
        n = len(self)
        if self.level == 0:
            xv = x.v if x.u else x.v
            xprec, xc, xshift = x.absprec, [x.u], (int(x.v) if x.v != INF else 0)
        else:
            xv = x.lattice_valuation()
            xprec, xc, xshift = x.prec, list(x.c), x.shift
        if xv == INF:
            return self._new(self.start, self.order, 0, [], [INF] * n)
        vals = self.coefficient_valuations()
        caps = [min(cap + xv, v + xprec) for cap, v in zip(self.caps, vals)]
        if not any(xc):
            return self._new(self.start, self.order, 0, [], [as_cap(c) for c in caps])
        d = self.d
        if d == 1:
            c = [y * xc[0] for y in self.c]
        else:
            c = []
            for i in range(n):
                c.extend(reduce_cyclotomic(convolve(self.c[i * d:(i + 1) * d], xc),
                                           self.p, self.level))
        return self._new(self.start, self.order, self.shift + xshift, c,
                         [as_cap(cp) for cp in caps])

    def shift_exponents(self, k):
        """Multiply by var**k (exact)."""
        return self._new(self.start + k, self.order + k, self.shift, list(self.c),
                         list(self.caps))

    def truncate(self, order):
        order = min(order, self.order)
        n = max(order - self.start, 0) if order != INF else len(self)
        return self._new(self.start, order, self.shift, self.c[:n * self.d], self.caps[:n])

    def with_precision(self, cap):
        """Forget digits: clamp every coefficient's absolute precision to ``cap``."""
        return self._new(self.start, self.order, self.shift, list(self.c),
                         [min(c, cap) for c in self.caps])

    def residual_valuation(self, other):
        return (self - other).valuation()

    def equals(self, other, threshold=None):
        return (self - other).is_zero(threshold)

    def derivative(self):
        """Formal derivative in the series variable."""
        p, d = self.p, self.d
        c, caps = [], []
        for i in range(len(self)):
            e = self.start + i
            c.extend(e * x for x in self.c[i * d:(i + 1) * d])
            cap = self.caps[i]
            caps.append(INF if e == 0 or cap == INF else cap + vp(e, p))
        return self._new(self.start - 1, self.order - 1, self.shift, c, caps)

    def invert(self, order=None):
        """Inverse in the Laurent series field.

        Writes f = c var^e (1 + h) with e the lowest exponent whose coefficient
        is nonzero at precision; lower coefficients that are zero at precision
        are treated as exactly zero. ``order`` is only consulted for an exact
        polynomial input (default: relative length DEFAULT_ORDER).
        """
        e = self.low_exponent()
        if e is None:
            raise DomainError("series is zero at working precision; not invertible")
        p = self.p
        if self.order == INF:
            if self.end - e == 1 and self.is_exact():
                length = INF
            else:
                length = (order + e) if order is not None else DEFAULT_ORDER
        else:
            length = self.order - e
        rel = self._scalar_precision() + 8
        exact = self._exact_scalars(e, 1 if length == INF else length)
        lead = exact[0]
        inv_lead = lead.inverse(rel)
        if length == INF:
            return type(self)._from_scalars(p, self.level, -e, INF, [inv_lead])
        g = [inv_lead]
        nz = [i for i in range(1, length) if not exact[i].is_zero()]
        for m in range(1, length):
            acc = self._scalar_zero()
            for i in nz:
                if i > m:
                    break
                acc = acc + exact[i] * g[m - i]
            g.append(-(acc * inv_lead))
        vg = [self._val(x) for x in g]
        i0 = e - self.start
        cf = self.caps[i0:i0 + length]
        cf = cf + [INF] * (length - len(cf))
        if all(cap == INF for cap in cf):
            pert = [INF] * length
        else:
            pert = list(minplus(minplus(vg, cf), vg)[:length])
        out = [self._clamp(x, pert[m]) for m, x in enumerate(g)]
        return type(self)._from_scalars(p, self.level, -e, -e + length, out)

    def _exact_scalars(self, e, length):
        """Stored representatives from exponent e on, as exact scalars."""
        out = []
        d = self.d
        for j in range(e, e + length):
            i = j - self.start
            if 0 <= i < len(self):
                if self.level == 0:
                    out.append(PadicNumber.from_parts(self.p, self.shift, self.c[i], INF))
                else:
                    out.append(CycloElement.make(self.p, self.level,
                                                 self.c[i * d:(i + 1) * d], self.shift))
            else:
                out.append(self._scalar_zero())
        return out

    def _val(self, x):
        if self.level == 0:
            return x.v if x.u else (x.v if x.v == INF else x.v)
        return x.lattice_valuation()

    def _clamp(self, x, bound):
        """Lower a scalar's absolute precision to ``bound`` (a float or INF)."""
        if bound == INF:
            return x
        b = as_cap(bound)
        if self.level == 0:
            if x.u == 0 or b <= x.v:
                return PadicNumber.inexact_zero(self.p, min(b, as_cap(x.v)))
            if x.absprec <= b:
                return x
            return PadicNumber.from_parts(self.p, int(x.v), x.u, b - int(x.v))
        return CycloElement.make(self.p, self.level, list(x.c), x.shift, min(x.prec, b))

    def __truediv__(self, other):
        if self._compatible(other):
            return self * other.invert()
        return self.scale(self._scalar(other).inverse(self._scalar_precision()))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TDivision:
    """Outcome of dividing by t: either a quotient or the obstructing exponent."""
    ok: bool
    quotient: "LaurentSeries | None" = None
    obstruction: int | None = None

    def __bool__(self):
        return self.ok


class LaurentSeries(_SeriesBase):
    """Truncated Laurent series in X over Q_p (or an exact Laurent polynomial)."""
    __slots__ = ()

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_coefficients(cls, coeffs, p, start=0, order=None, prec=DEFAULT_PRECISION):
        """Coefficients for exponents start, start+1, ...

        Rational entries get absolute precision ``prec`` (``None``: exact,
        which needs denominators that are powers of p); PadicNumbers keep
        their own. ``order=None`` makes an exact Laurent polynomial.
        """
        vals = []
        for x in coeffs:
            if isinstance(x, PadicNumber):
                vals.append(x)
                continue
            x = Fraction(x)
            if prec is None:
                vals.append(PadicNumber.from_rational(x, p, None))
            elif x == 0:
                vals.append(PadicNumber.inexact_zero(p, prec))
            else:
                v = vp(x.numerator, p) - vp(x.denominator, p)
                if v >= prec:
                    vals.append(PadicNumber.inexact_zero(p, prec))
                else:
                    vals.append(PadicNumber.from_rational(x, p, prec - v))
        return cls._from_scalars(p, 0, start, INF if order is None else order, vals)

    @classmethod
    def polynomial(cls, terms, p, order=INF, prec=None):
        """From a dict exponent -> coefficient; exact by default."""
        if not terms:
            return cls.zero(p, order)
        lo = min(terms)
        hi = max(terms) + 1 if order == INF else max(lo, order)
        coeffs = [terms.get(e, 0) for e in range(lo, hi)]
        return cls.from_coefficients(coeffs, p, start=lo,
                                     order=None if order == INF else order, prec=prec)

    @classmethod
    def zero(cls, p, order=INF):
        return cls._finish(p, 0, 0 if order == INF else order, order, 0, [], [])

    @classmethod
    def one(cls, p, order=INF):
        return cls.polynomial({0: 1}, p, order)

    @classmethod
    def gen(cls, p, order=INF):
        return cls.polynomial({1: 1}, p, order)

    def __repr__(self):
        terms = [f"({x})*X^{e}" for e, x in self.coefficients().items() if x.u]
        body = " + ".join(terms) or "0"
        return body if self.order == INF else f"{body} + O(X^{self.order})"

    def to_fractions(self):
        """Rational representatives of the stored coefficients."""
        return {e: x.to_fraction() for e, x in self.coefficients().items()}

    # -- text round trip ----------------------------------------------------
    def to_text(self):
        parts = [json.dumps(x.to_json(), sort_keys=True) + f"*X^{e}"
                 for e, x in self.coefficients().items() if x.v != INF]
        if self.order != INF:
            parts.append(f"O(X^{self.order})")
        return " + ".join(parts) or "0"

    def to_expression(self):
        """Ascending rational rendering such as ``1 + X - 1/3*X^2``; None unless exact."""
        if not self.is_exact():
            return None
        out = ""
        for e, c in sorted(self.to_fractions().items()):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            c = abs(c)
            mono = "" if e == 0 else ("X" if e == 1 else f"X^{e}")
            body = str(c) if not mono else (mono if c == 1 else f"{c}*{mono}")
            out += (f" {sign} " if out else ("-" if sign == "-" else "")) + body
        return out or "0"

    @classmethod
    def from_text(cls, text, p=None):
        pieces = [s.strip() for s in text.split(" + ")]
        order = INF
        m = re.fullmatch(r"O\(X\^(-?\d+)\)", pieces[-1])
        if m:
            order = int(m.group(1))
            pieces = pieces[:-1]
        if pieces == ["0"]:
            pieces = []
        terms = {}
        for piece in pieces:
            m = re.fullmatch(r"(\{.*\})\*X\^(-?\d+)", piece)
            if not m:
                raise DomainError(f"cannot parse term {piece!r}")
            x = PadicNumber.from_json(json.loads(m.group(1)))
            p = x.p if p is None else p
            terms[int(m.group(2))] = x
        if p is None:
            raise DomainError("cannot infer the prime of an empty series")
        if not terms:
            return cls.zero(p, order)
        lo = min(terms)
        hi = order if order != INF else max(terms) + 1
        vals = [terms.get(e, PadicNumber.zero(p)) for e in range(lo, hi)]
        return cls._from_scalars(p, 0, lo, order, vals)

    @classmethod
    def from_expression(cls, expr, p, order=DEFAULT_ORDER, prec=DEFAULT_PRECISION):
        """Parse a rational expression in X such as ``"(1+X)^3"`` or ``"(1+X)/X"``.

        Laurent polynomials come back exact; anything else is expanded mod X^order.
        """
        import sympy

        X = sympy.Symbol("X")
        e = sympy.sympify(expr.replace("^", "**"), locals={"X": X})
        num, den = sympy.fraction(sympy.together(e))
        num_p = sympy.Poly(sympy.expand(num), X)
        den_p = sympy.Poly(sympy.expand(den), X)

        def build(poly):
            terms = {int(m[0]): Fraction(int(c.p), int(c.q))
                     for m, c in zip(poly.monoms(), poly.coeffs())}
            exact = all(_padic(v, p).is_exact for v in terms.values())
            return cls.polynomial(terms, p, INF, None if exact else prec)

        top, bottom = build(num_p), build(den_p)
        if len(bottom) == 1:
            return top * bottom.invert()
        return top * bottom.invert(order=order - top.start)

    # -- calculus -----------------------------------------------------------
    def ddx(self):
        """Formal derivative d/dX."""
        return self.derivative()

    def partial(self):
        """(1+X) d/dX."""
        return self.ddx() * LaurentSeries.polynomial({0: 1, 1: 1}, self.p)

    def nabla(self):
        """t (1+X) d/dX."""
        df = self.partial()
        order = df.order if df.order != INF else max(df.end, DEFAULT_ORDER)
        t = log_oneplus(self.p, max(order - min(df.start, 0), 1), self._scalar_precision())
        return t * df

    def subst_oneplus(self, a, max_neg_depth=DEFAULT_NEG_DEPTH, order=None):
        return subst_oneplus(self, a, max_neg_depth, order)

    def tdivide(self) -> TDivision:
        return tdivide(self)


class CycloPowerSeries(_SeriesBase):
    """Truncated series with coefficients in K_n (level >= 1)."""
    __slots__ = ()

    @classmethod
    def from_scalars(cls, values, p, level, start=0, order=None):
        if order is None:
            order = start + len(values)
        return cls._from_scalars(p, level, start, order, values)

    @classmethod
    def from_laurent(cls, f: LaurentSeries, level):
        """Q_p-coefficient series viewed over K_level."""
        vals = [CycloElement.scalar(x, f.p, level) for x in f.coefficients().values()]
        return cls._from_scalars(f.p, level, f.start, f.order, vals)

    def galois(self, a):
        """Apply sigma_a: zeta -> zeta^a to every coefficient."""
        vals = [x.galois(a) for x in self.coefficients().values()]
        return type(self)._from_scalars(self.p, self.level, self.start, self.order, vals)

    def scale_variable(self, a):
        """var -> a * var, for a p-adic integer a (exact rational or PadicNumber)."""
        a = _padic(a, self.p, self._scalar_precision())
        vals, power = [], a ** self.start if self.start >= 0 else a.inverse() ** (-self.start)
        for x in self.coefficients().values():
            vals.append(x * CycloElement.scalar(power, self.p, self.level))
            power = power * a
        return type(self)._from_scalars(self.p, self.level, self.start, self.order, vals)

    def trace(self) -> LaurentSeries:
        """Coefficientwise trace K_n -> Q_p."""
        vals = [x.trace() for x in self.coefficients().values()]
        return LaurentSeries._from_scalars(self.p, 0, self.start, self.order, vals)

    def __repr__(self):
        terms = [f"({x})*{self.var}^{e}" for e, x in self.coefficients().items()
                 if not x.is_zero()]
        body = " + ".join(terms) or "0"
        return body if self.order == INF else f"{body} + O({self.var}^{self.order})"


# ---------------------------------------------------------------------------
# module-level operations


def s_add(f, g):
    return f + g


def s_mul(f, g):
    return f * g


def s_invert(f):
    return f.invert()


def s_ddX(f):
    return f.ddx()


def s_partial(f):
    return f.partial()


def s_nabla(f):
    return f.nabla()


def oneplus_power_minus_one(a, p, order=INF, prec=DEFAULT_PRECISION):
    """(1+X)^a - 1, exact for a nonnegative integer a, else mod X^order."""
    if isinstance(a, int) and a >= 0:
        return LaurentSeries.polynomial({k: _binom(a, k) for k in range(1, a + 1)}, p)
    a = _padic(a, p, prec)
    if order == INF:
        raise DomainError("a truncation order is needed for a non-integer exponent")
    coeffs = [PadicNumber.zero(p)] + [binom_zp(a, k) for k in range(1, max(order, 1))]
    return LaurentSeries._from_scalars(p, 0, 0, order, coeffs)


def _binom(a, k):
    from math import comb
    return comb(a, k)


def _as_int(a, p):
    if isinstance(a, int):
        return a
    if isinstance(a, Fraction) and a.denominator == 1:
        return int(a)
    if isinstance(a, PadicNumber) and a.is_exact and a.to_fraction().denominator == 1:
        return int(a.to_fraction())
    return None


def subst_oneplus(f: LaurentSeries, a, max_neg_depth=DEFAULT_NEG_DEPTH, order=None):
    """f((1+X)^a - 1): the Gamma-action for a unit a, Frobenius for a = p.

    Exact Laurent polynomials stay exact when a is a positive integer and f
    has no pole. For a = p the truncation is rescaled: order M with pole
    depth d becomes p(M + d) - d. Otherwise the result is known mod
    X^order (default: the input's order; at least DEFAULT_ORDER for exact
    input with a pole).
    """
    p = f.p
    ai = _as_int(a, p)
    av = _padic(a, p, f._scalar_precision())
    if av.v == INF or av.u == 0:
        raise DomainError("substitution exponent must be nonzero")
    if av.v < 0:
        raise DomainError("substitution exponent must lie in Z_p")
    neg = max(0, -f.start)
    if neg and not (av.v == 0 or ai == p):
        raise DomainError("negative exponents need a unit exponent or a = p")
    if neg > max_neg_depth:
        raise DomainError(f"pole order {neg} exceeds the configured depth {max_neg_depth}")
    if order is None:
        if f.order != INF:
            order = p * (f.order + neg) - neg if ai == p else f.order
        elif ai is not None and ai > 0 and not neg:
            order = INF
        elif ai == p:
            order = max(p * (f.end + neg) - neg, DEFAULT_ORDER)
        else:
            order = max(f.end, DEFAULT_ORDER)
    exact_y = ai is not None and ai > 0
    if exact_y and not neg and f.order == INF:
        return _subst_power_exact(f, ai).truncate(order)
    if order == INF:
        y = oneplus_power_minus_one(ai, p)
    elif exact_y:
        y = oneplus_power_minus_one(ai, p).truncate(order + neg + 2)
    else:
        y = oneplus_power_minus_one(av, p, order + neg + 2, f._scalar_precision())
    result = LaurentSeries.zero(p, order)
    hi = f.end if f.order == INF else min(f.order, order)
    pos = [f.coefficient(e) for e in range(max(f.start, 0), hi)]
    if pos:
        y_pos = y.truncate(order)
        acc = LaurentSeries._from_scalars(p, 0, 0, order, [pos[-1]])
        for x in reversed(pos[:-1]):
            acc = acc * y_pos + LaurentSeries._from_scalars(p, 0, 0, order, [x])
        if f.start > 0:
            acc = acc * (y_pos ** f.start)
        result = acc
    if neg:
        z = y.invert(order=order + neg)
        acc = LaurentSeries._from_scalars(p, 0, 0, INF, [f.coefficient(-neg)])
        for e in range(-neg + 1, 0):
            acc = acc * z + LaurentSeries._from_scalars(p, 0, 0, INF, [f.coefficient(e)])
        result = result + acc * z
    return result.truncate(order)




def shift_modulus(p, caps, shift):
    """Modulus valid for a unimodular basis change of the stored integers."""
    if not caps or any(c == INF for c in caps):
        return None
    return p ** max(max(caps) - shift, 1)


def _subst_power_exact(f: LaurentSeries, a: int) -> LaurentSeries:
    """f((1+X)^a - 1) for a polynomial f and a positive integer a.

    With F(Y) = f(Y - 1) the result is F(Y^a) read back at Y = 1+X; both
    basis changes are unimodular, so a coefficient's precision is bounded by
    the least precise coefficient at or above it.
    """
    p = f.p
    n = f.end
    ints = [0] * n
    caps = [INF] * n
    for i in range(len(f)):
        ints[f.start + i] = f.c[i]
        caps[f.start + i] = f.caps[i]
    mod = shift_modulus(p, f.caps, f.shift)
    big = taylor_shift(ints, -1, mod)
    ycaps = suffix_min(caps)
    m = a * (n - 1) + 1
    spread = [0] * m
    scaps = [INF] * m
    for j in range(n):
        spread[a * j] = big[j]
        scaps[a * j] = ycaps[j]
    return LaurentSeries._finish(p, 0, 0, INF, f.shift, taylor_shift(spread, 1, mod),
                                 suffix_min(scaps))


def s_subst_oneplus(f, a, max_neg_depth=DEFAULT_NEG_DEPTH):
    return subst_oneplus(f, a, max_neg_depth)


def log_oneplus(p, order, prec=DEFAULT_PRECISION):
    """t = log(1+X) mod X^order.

    Each coefficient carries relative precision ``prec``, so the absolute
    precision drops by v_p(k) at X^k.
    """
    vals = [PadicNumber.zero(p)]
    for k in range(1, max(order, 1)):
        vals.append(_padic(Fraction((-1) ** (k + 1), k), p, prec))
    return LaurentSeries._from_scalars(p, 0, 0, order, vals)


def s_log_oneplus(p, order, prec=DEFAULT_PRECISION):
    return log_oneplus(p, order, prec)


def tdivide(f: LaurentSeries) -> TDivision:
    """Divide by t inside power series, with no new pole.

    Succeeds iff f is a power series vanishing at X = 0 (at precision);
    otherwise reports the first obstructing exponent.
    """
    order = f.order if f.order != INF else max(f.end, DEFAULT_ORDER)
    e = f.low_exponent()
    if e is None:
        return TDivision(True, LaurentSeries.zero(f.p, order - 1), None)
    if e <= 0:
        return TDivision(False, None, e)
    t = log_oneplus(f.p, order + 1, f._scalar_precision() + 2)
    w = t.shift_exponents(-1)  # t / X, a unit power series
    g = f.truncate(order).shift_exponents(-1) * w.invert()
    return TDivision(True, g.truncate(order - 1), None)


def s_tdivide(f):
    return tdivide(f)
