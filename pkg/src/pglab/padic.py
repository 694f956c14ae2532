"""p-adic scalars with tracked precision, and the cyclotomic fields K_n.

A ``PadicNumber`` is ``p**v * u`` with ``u`` a unit known modulo ``p**N``.
Two kinds of zero exist: the exact zero (``v = inf``) and an inexact
``O(p**k)`` (``u = 0, N = 0, v = k``). Nonzero values may be exact
(``N = inf``) when they lie in Z[1/p].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._kernel import INF, convolve, cyclo_degree, reduce_cyclotomic, vp, vp_many
from .errors import DomainError, PrecisionError

DEFAULT_PRECISION = 24


def _split(x: Fraction, p):
    """Write a nonzero rational as p**v * (a/b) with a, b prime to p."""
    num, den = x.numerator, x.denominator
    vn, vd = vp(num, p), vp(den, p)
    return vn - vd, num // p ** vn, den // p ** vd


@dataclass(frozen=True)
class PadicNumber:
    p: int
    v: float  # int, or INF for the exact zero
    u: int
    N: float  # int, or INF for an exact value

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, p):
        return cls(p, INF, 0, INF)

    @classmethod
    def inexact_zero(cls, p, absprec):
        return cls(p, absprec, 0, 0)

    @classmethod
    def from_rational(cls, x, p, N=DEFAULT_PRECISION):
        """Embed a rational in Q_p with relative precision ``N``.

        ``N=None`` keeps the value exact, which needs the denominator to be a
        power of ``p``.
        """
        x = Fraction(x)
        if x == 0:
            return cls.zero(p)
        v, a, b = _split(x, p)
        if N is None:
            if b != 1:
                raise DomainError(f"{x} is not in Z[1/{p}]; give a precision")
            return cls(p, v, a, INF)
        if N <= 0:
            raise PrecisionError("relative precision must be positive", required=1)
        mod = p ** N
        return cls(p, v, a * pow(b, -1, mod) % mod, N)

    @classmethod
    def from_parts(cls, p, v, u, N):
        """Build from a raw representative ``p**v * u`` (u may carry p-factors)."""
        if u == 0:
            return cls.zero(p) if N == INF else cls.inexact_zero(p, v + N)
        k = vp(u, p)
        u //= p ** k
        if N == INF:
            return cls(p, v + k, u, INF)
        N = N - k
        if N <= 0:
            return cls.inexact_zero(p, v + k + N)
        return cls(p, v + k, u % p ** N, N)

    # -- basic properties ---------------------------------------------------
    @property
    def absprec(self):
        return self.v + self.N

    @property
    def is_exact(self):
        return self.N == INF

    def is_exact_zero(self):
        return self.v == INF

    def is_zero(self):
        """Zero at the available precision (exact or inexact zero)."""
        return self.u == 0

    def valuation(self):
        return self.v

    def to_fraction(self) -> Fraction:
        """Rational representative p**v * u (0 for either zero)."""
        if self.u == 0:
            return Fraction(0)
        return Fraction(self.u) * Fraction(self.p) ** self.v

    def __repr__(self):
        if self.v == INF:
            return f"PadicNumber(0, p={self.p})"
        if self.u == 0:
            return f"O({self.p}^{self.v})"
        tail = "" if self.N == INF else f" + O({self.p}^{self.v + self.N})"
        return f"{self.p}^{self.v}*{self.u}{tail}"

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other, rel_needed):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise DomainError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        x = Fraction(other)
        if x == 0:
            return PadicNumber.zero(self.p)
        v, a, b = _split(x, self.p)
        if b == 1:
            return PadicNumber(self.p, v, a, INF)
        n = rel_needed(v)
        if n == INF:
            n = DEFAULT_PRECISION
        return PadicNumber.from_rational(x, self.p, max(int(n), 1))

    def _add_coerce(self, other):
        return self._coerce(other, lambda v: self.absprec - v)

    def _mul_coerce(self, other):
        return self._coerce(other, lambda v: self.N if self.N else DEFAULT_PRECISION)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        b = self._add_coerce(other)
        a = self
        if a.v == INF:
            return b
        if b.v == INF:
            return a
        absprec = min(a.absprec, b.absprec)
        m = min(a.v, b.v)
        s = a.u * a.p ** (a.v - m) + b.u * b.p ** (b.v - m)
        if absprec == INF:
            return PadicNumber.from_parts(a.p, m, s, INF) if s else PadicNumber.zero(a.p)
        rel = absprec - m
        s %= a.p ** rel
        if s == 0:
            return PadicNumber.inexact_zero(a.p, absprec)
        return PadicNumber.from_parts(a.p, m, s, rel)

    __radd__ = __add__

    def __neg__(self):
        if self.u == 0:
            return self
        u = -self.u if self.N == INF else (-self.u) % self.p ** self.N
        return PadicNumber(self.p, self.v, u, self.N)

    def __sub__(self, other):
        return self + (-self._add_coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._mul_coerce(other)
        a = self
        if a.v == INF or b.v == INF:
            return PadicNumber.zero(a.p)
        v = a.v + b.v
        if a.u == 0 or b.u == 0:
            return PadicNumber.inexact_zero(a.p, min(a.v + b.absprec, b.v + a.absprec))
        N = min(a.N, b.N)
        u = a.u * b.u
        if N != INF:
            u %= a.p ** N
        return PadicNumber(a.p, v, u, N)

    __rmul__ = __mul__

    def inverse(self, N=DEFAULT_PRECISION):
        """Multiplicative inverse; ``N`` is used only for exact non-trivial units."""
        if self.v == INF:
            raise DomainError("inverse of exact zero")
        if self.u == 0:
            raise PrecisionError(
                f"inverse of O({self.p}^{self.v}): no significant digits", required=1)
        if self.N == INF:
            if self.u in (1, -1):
                return PadicNumber(self.p, -self.v, self.u, INF)
            mod = self.p ** N
            return PadicNumber(self.p, -self.v, pow(self.u, -1, mod), N)
        mod = self.p ** self.N
        return PadicNumber(self.p, -self.v, pow(self.u, -1, mod), self.N)

    def __truediv__(self, other):
        return self * self._mul_coerce(other).inverse(
            self.N if self.N != INF else DEFAULT_PRECISION)

    def __rtruediv__(self, other):
        return self._mul_coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PadicNumber(self.p, 0, 1, INF)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def equals(self, other, threshold=None):
        """Equality at precision: the difference vanishes (or has v >= threshold)."""
        d = self - other
        if threshold is None:
            return d.is_zero()
        return d.v >= threshold

    def lift(self) -> int:
        """Integer representative of a p-adic integer (v >= 0)."""
        if self.u == 0:
            return 0
        if self.v < 0:
            raise DomainError("not a p-adic integer")
        return self.u * self.p ** int(self.v)

    # -- serialization ------------------------------------------------------
    def to_json(self):
        return {"p": self.p,
                "v": None if self.v == INF else int(self.v),
                "u": str(self.u),
                "N": None if self.N == INF else int(self.N)}

    @classmethod
    def from_json(cls, obj):
        p = int(obj["p"])
        v = INF if obj.get("v") is None else int(obj["v"])
        N = INF if obj.get("N") is None else int(obj["N"])
        u = int(obj["u"])
        if v == INF:
            return cls.zero(p)
        return cls.from_parts(p, v, u, N)


def padd(a, b):
    return a + b


def pmul(a, b):
    return a * b


def pinv(a):
    return a.inverse()


def binom_zp(a: PadicNumber, k: int) -> PadicNumber:
    """Generalized binomial coefficient a(a-1)...(a-k+1)/k! for a in Z_p."""
    if k < 0:
        raise DomainError("k must be non-negative")
    if a.v < 0:
        raise DomainError("binom_zp needs v(a) >= 0")
    if k == 0:
        return PadicNumber(a.p, 0, 1, INF)
    if a.is_exact:
        x = a.to_fraction()
        if x.denominator == 1:
            n = x.numerator
            val = math.comb(n, k) if n >= 0 else (-1) ** k * math.comb(k - n - 1, k)
            return PadicNumber.from_parts(a.p, 0, val, INF)
    prod = PadicNumber(a.p, 0, 1, INF)
    for i in range(k):
        prod = prod * (a - i)
    fk = math.factorial(k)
    vk = vp(fk, a.p)
    unit = fk // a.p ** vk
    out = prod * PadicNumber(a.p, -vk, 1, INF)
    if unit != 1:
        if out.u == 0:
            raise PrecisionError(f"binom_zp({a}, {k}): precision exhausted", required=vk + 1)
        out = out / unit
    if out.u == 0 and not out.is_exact_zero():
        raise PrecisionError(f"binom_zp({a}, {k}): precision exhausted", required=vk + 1)
    return out


# ---------------------------------------------------------------------------
# cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_poly(p, n):
    """Coefficients of Phi_{p^n}, ascending."""
    q = p ** (n - 1)
    out = [0] * (p * q - q + 1)
    for i in range(p):
        out[i * q] = 1
    return tuple(out)


def _mod_lattice(c, shift, prec, p):
    if prec == INF:
        return list(c)
    e = prec - shift
    if e <= 0:
        return [0] * len(c)
    m = p ** e
    return [x % m for x in c]


@dataclass(frozen=True)
class CycloElement:
    """Element of K_n = Q_p(zeta_{p^n}) in the power basis.

    Value ``p**shift * sum(c[i] zeta**i)``, known modulo ``p**prec`` times the
    ring of integers (flat lattice precision).
    """
    p: int
    n: int
    c: tuple
    shift: int = 0
    prec: float = INF

    def __post_init__(self):
        d = cyclo_degree(self.p, self.n)
        if len(self.c) != d:
            raise DomainError(f"expected {d} coefficients, got {len(self.c)}")

    @property
    def degree(self):
        return len(self.c)

    @classmethod
    def make(cls, p, n, c, shift=0, prec=INF):
        """Normalizing constructor: reduces, pulls common p-factors into shift."""
        d = cyclo_degree(p, n)
        c = list(c)
        if len(c) > d:
            c = reduce_cyclotomic(c, p, n)
        c = c + [0] * (d - len(c))
        c = _mod_lattice(c, shift, prec, p)
        if not any(c):
            return cls(p, n, tuple(c), 0 if prec == INF else prec, prec)
        k = vp_many(c, p)
        if k:
            q = p ** k
            c = [x // q for x in c]
            shift += k
        return cls(p, n, tuple(c), shift, prec)

    @classmethod
    def zeta(cls, p, n):
        if n == 1 and p == 2:
            return cls(p, n, (-1,))
        c = [0] * cyclo_degree(p, n)
        c[1] = 1
        return cls(p, n, tuple(c))

    @classmethod
    def scalar(cls, x, p, n, N=DEFAULT_PRECISION):
        d = cyclo_degree(p, n)
        if not isinstance(x, PadicNumber):
            x = PadicNumber.from_rational(x, p, None if _in_zp_inv(x, p) else N)
        if x.v == INF:
            return cls(p, n, (0,) * d)
        if x.u == 0:
            return cls(p, n, (0,) * d, int(x.v), x.v)
        prec = x.v + x.N
        return cls.make(p, n, [x.u] + [0] * (d - 1), int(x.v), prec)

    @classmethod
    def from_coefficients(cls, coeffs, p, n, N=DEFAULT_PRECISION):
        """From a list of rationals / PadicNumbers in the power basis."""
        vals = [c if isinstance(c, PadicNumber) else PadicNumber.from_rational(
            c, p, None if _in_zp_inv(c, p) else N) for c in coeffs]
        shift = min((int(x.v) for x in vals if x.u), default=0)
        prec = min((x.absprec for x in vals), default=INF)
        ints = [0 if x.u == 0 else x.u * p ** int(x.v - shift) for x in vals]
        return cls.make(p, n, ints, shift, prec)

    def coefficients(self):
        """Power-basis coordinates as PadicNumbers."""
        return [PadicNumber.from_parts(self.p, self.shift, x, self.prec - self.shift)
                if self.prec != INF else PadicNumber.from_parts(self.p, self.shift, x, INF)
                for x in self.c]

    def lattice_valuation(self):
        """min over coordinates (INF for exact zero, prec for zero-at-precision)."""
        k = vp_many(list(self.c), self.p)
        return min(self.shift + k, self.prec)

    def is_zero(self):
        return not any(self.c)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, CycloElement):
            return CycloElement.scalar(other, self.p, self.n)
        if (other.p, other.n) != (self.p, self.n):
            raise DomainError("level mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        m = min(self.shift, other.shift)
        a = [x * self.p ** (self.shift - m) for x in self.c]
        b = [x * self.p ** (other.shift - m) for x in other.c]
        return CycloElement.make(self.p, self.n, [x + y for x, y in zip(a, b)], m,
                                 min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return CycloElement.make(self.p, self.n, [-x for x in self.c], self.shift, self.prec)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        prod = reduce_cyclotomic(convolve(list(self.c), list(other.c)), self.p, self.n)
        prec = min(self.prec + other.lattice_valuation(), other.prec + self.lattice_valuation())
        return CycloElement.make(self.p, self.n, prod, self.shift + other.shift, prec)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloElement.scalar(1, self.p, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois(self, a):
        """sigma_a: zeta -> zeta**a, for a prime to p (int or p-adic unit)."""
        if isinstance(a, PadicNumber):
            a = a.lift() if a.v >= 0 else None
            if a is None:
                raise DomainError("Galois action needs a p-adic unit")
        mod = self.p ** self.n
        a %= mod
        if a % self.p == 0:
            raise DomainError("Galois action needs a unit")
        out = [0] * mod
        for i, x in enumerate(self.c):
            out[(i * a) % mod] += x
        return CycloElement.make(self.p, self.n, out, self.shift, self.prec)

    def embed(self, m):
        """Image under K_n -> K_m, zeta_n = zeta_m ** (p**(m-n))."""
        if m < self.n:
            raise DomainError("can only embed into a higher level")
        step = self.p ** (m - self.n)
        out = [0] * cyclo_degree(self.p, m)
        for i, x in enumerate(self.c):
            out[i * step] = x
        return CycloElement.make(self.p, m, out, self.shift, self.prec)

    def conjugates(self):
        mod = self.p ** self.n
        return [self.galois(a) for a in range(1, mod) if a % self.p]

    def norm(self) -> PadicNumber:
        """N_{K_n/Q_p} as a PadicNumber (product of all conjugates)."""
        prod = CycloElement.scalar(1, self.p, self.n)
        for g in self.conjugates():
            prod = prod * g
        return prod.coefficients()[0]

    def trace(self) -> PadicNumber:
        total = CycloElement.scalar(0, self.p, self.n)
        for g in self.conjugates():
            total = total + g
        return total.coefficients()[0]

    def valuation(self) -> Fraction:
        """v_p normalized by v_p(p) = 1; rational with denominator | [K_n:Q_p]."""
        nm = self.norm()
        if nm.u == 0:
            raise PrecisionError("valuation undetermined: norm is zero at precision")
        return Fraction(int(nm.v), self.degree)

    def inverse(self, N=DEFAULT_PRECISION):
        if self.is_zero():
            raise DomainError("inverse of zero in K_n")
        exact = CycloElement(self.p, self.n, self.c, self.shift, INF)
        adj = CycloElement.scalar(1, self.p, self.n)
        for g in exact.conjugates()[1:]:
            adj = adj * g
        nm = (exact * adj).c[0]  # the norm lands in Q_p
        if nm == 0:
            raise DomainError("non-unit: norm vanishes at working precision")
        k = vp(nm, self.p)
        unit = nm // self.p ** k
        shift = adj.shift - (exact * adj).shift - k
        if unit in (1, -1) and self.prec == INF:
            return CycloElement.make(self.p, self.n, [unit * x for x in adj.c], shift)
        inv_lat = shift + vp_many(list(adj.c), self.p)
        if self.prec == INF:
            prec = inv_lat + N
        else:
            prec = self.prec + 2 * inv_lat
        e = prec - shift
        if e <= 0:
            raise PrecisionError("inverse has no significant digits", required=int(1 - e))
        mod = self.p ** e
        ui = pow(unit, -1, mod)
        return CycloElement.make(self.p, self.n, [ui * x for x in adj.c], shift, prec)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def equals(self, other, threshold=None):
        d = self - other
        if threshold is None:
            return d.is_zero()
        return d.lattice_valuation() >= threshold

    def to_json(self):
        return {"p": self.p, "n": self.n,
                "coefficients": [x.to_json() for x in self.coefficients()]}

    def __repr__(self):
        terms = [f"{x}*z^{i}" for i, x in enumerate(self.c) if x]
        body = " + ".join(terms) or "0"
        tail = "" if self.prec == INF else f" + O({self.p}^{self.prec})"
        return f"p^{self.shift}*({body}){tail} in K_{self.n}"


def _in_zp_inv(x, p):
    """True if x is a rational whose denominator is a power of p."""
    if isinstance(x, PadicNumber):
        return x.is_exact
    x = Fraction(x)
    d = x.denominator
    return d // p ** vp(d, p) == 1


def cyclo_mul(x, y):
    return x * y


def cyclo_inv(x):
    return x.inverse()
