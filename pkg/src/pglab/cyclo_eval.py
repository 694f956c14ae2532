"""Evaluation at cyclotomic points: iota_n into K_n[[t]] and t-coefficients.

iota_n sends X to eps * exp(t / p^n) - 1 where eps = zeta_{p^n}. The
coefficients of exp(t / p^n) have growing denominators, so work is done at
an inflated relative precision chosen up front (``precision_budget``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction

from ._kernel import INF, vp
from .errors import DomainError, PrecisionError
from .padic import DEFAULT_PRECISION, CycloElement, PadicNumber
from .series import DEFAULT_NEG_DEPTH, CycloPowerSeries, LaurentSeries

DEFAULT_TORDER = 8
GUARD_DIGITS = 4


class TatePowerSeries(CycloPowerSeries):
    """Truncated Laurent series in t over K_n (K_n[[t]], or K_n((t)) with a pole)."""
    __slots__ = ()
    var = "t"

    @classmethod
    def from_scalars(cls, values, p, level, start=0, order=None):
        if order is None:
            order = start + len(values)
        return cls._from_scalars(p, level, start, order, values)

    def ddt(self) -> "TatePowerSeries":
        return self.derivative()

    def to_json(self):
        return {
            "p": self.p, "n": self.level, "var": "t",
            "order": None if self.order == INF else self.order,
            "coefficients": {str(e): x.to_json() for e, x in self.coefficients().items()},
        }


def epsilon_minus_one_valuation(p, n) -> Fraction:
    return Fraction(1, p ** (n - 1) * (p - 1))


@dataclass(frozen=True)
class Budget:
    """Working precision for one evaluation."""
    relative: int    # relative digits carried by the exp(t/p^n) coefficients
    loss: int        # digits lost at the top t-coefficient
    target: int


def precision_budget(p, n, M_t, prec=DEFAULT_PRECISION, pole_depth=0) -> Budget:
    """Digits needed so that t^(M_t-1) still carries ``prec`` absolute digits."""
    k = M_t - 1
    loss = n * k + vp(math.factorial(k), p) + pole_depth
    return Budget(prec + loss + GUARD_DIGITS, loss, prec)


def _check_level(n, M_t):
    if n < 1:
        raise DomainError("iota_n needs n >= 1")
    if M_t < 1:
        raise DomainError("t-truncation must be positive")


@lru_cache(maxsize=64)
def iota_generator(p, n, M_t=DEFAULT_TORDER, prec=DEFAULT_PRECISION) -> TatePowerSeries:
    """iota_n(X) = eps exp(t/p^n) - 1 mod t^M_t."""
    _check_level(n, M_t)
    rel = precision_budget(p, n, M_t, prec).relative
    eps = CycloElement.zeta(p, n)
    vals = [eps - 1]
    for k in range(1, M_t):
        c = PadicNumber.from_rational(Fraction(1, math.factorial(k) * p ** (n * k)), p, rel)
        vals.append(eps * CycloElement.scalar(c, p, n))
    return TatePowerSeries.from_scalars(vals, p, n, 0, M_t)


def _tail_caps(f: LaurentSeries, n, M_t):
    """Per-coefficient bound on the image of the unknown O(X^order) tail.

    X^M maps to (eps-1)^M (1 + ...) whose t^j coefficient has valuation at
    least M v(eps-1) - j (n + 1/(p-1)); the tail is assumed to sit in the
    same lattice as the known coefficients.
    """
    p = f.p
    v0 = epsilon_minus_one_valuation(p, n)
    w = n + Fraction(1, p - 1)
    base = f.valuation()
    if base == INF:
        base = f.min_precision()
    return [math.floor(f.order * v0 - j * w + base) for j in range(M_t)]


def iota_n(f: LaurentSeries, n: int, M_t: int = DEFAULT_TORDER, prec=DEFAULT_PRECISION,
           max_neg_depth=DEFAULT_NEG_DEPTH) -> TatePowerSeries:
    """Substitute X -> eps exp(t/p^n) - 1 into f; the result is known mod t^M_t."""
    _check_level(n, M_t)
    p = f.p
    d = max(0, -f.start)
    if d > max_neg_depth:
        raise DomainError(f"pole order {d} exceeds the configured depth {max_neg_depth}")
    budget = precision_budget(p, n, M_t, prec, d)
    if f.min_precision() != INF and f.min_precision() - budget.loss <= 0:
        raise PrecisionError(
            f"input carries {f.min_precision()} digits, evaluation loses {budget.loss}",
            required=budget.loss + 1)
    y = iota_generator(p, n, M_t, prec)
    hi = f.end if f.order == INF else f.order

    def lift(e):
        return CycloElement.scalar(f.coefficient(e), p, n, budget.relative)

    zero = TatePowerSeries.from_scalars([CycloElement.scalar(0, p, n)], p, n, 0, M_t)
    acc = zero
    if hi > 0:
        for e in range(hi - 1, max(f.start, 0) - 1, -1):
            acc = acc * y + zero.constant(lift(e))
        if f.start > 0:
            acc = acc * y ** f.start
    if d:
        yi = y.invert()
        neg = zero
        for e in range(-d, 0):
            neg = neg * yi + zero.constant(lift(e))
        acc = acc + neg * yi
    acc = acc.truncate(M_t)
    if f.order != INF:
        bound = _tail_caps(f, n, M_t)
        caps = [min(c, b) for c, b in zip(acc.caps, bound[acc.start:])]
        acc = acc._new(acc.start, acc.order, acc.shift, list(acc.c), caps)
    return acc


@lru_cache(maxsize=64)
def iota_t(p, n, M_t=DEFAULT_TORDER, prec=DEFAULT_PRECISION) -> TatePowerSeries:
    """log(1 + iota_n(X)) by the truncated log series in K_n[[t]].

    Nothing assumes log(eps) = 0: the constant term is the partial sum of
    sum (-1)^(k+1) (eps-1)^k / k, which has to come out small.
    """
    y = iota_generator(p, n, M_t, prec)
    rel = precision_budget(p, n, M_t, prec).relative
    v0 = epsilon_minus_one_valuation(p, n)
    w = n + Fraction(1, p - 1)
    j = M_t - 1
    terms = 1
    # the t^j coefficient of y^k / k has valuation >= (k - j) v0 - j w - log_p k
    while (terms - j) * v0 - j * w - math.log(terms, p) < prec + GUARD_DIGITS:
        terms += 1
    total = None
    power = y
    for k in range(1, terms + 1):
        c = PadicNumber.from_rational(Fraction((-1) ** (k + 1), k), p, rel)
        term = power.scale(CycloElement.scalar(c, p, n, rel))
        total = term if total is None else total + term
        power = power * y
    return total


def log_epsilon(p, n, prec=DEFAULT_PRECISION) -> CycloElement:
    """Constant term of iota_t: the computed log(eps), expected to vanish."""
    return iota_t(p, n, 1, prec).coefficient(0)


def t_over_pn(p, n, M_t=DEFAULT_TORDER) -> TatePowerSeries:
    one = CycloElement.scalar(Fraction(1, p ** n), p, n)
    zero = CycloElement.scalar(0, p, n)
    return TatePowerSeries.from_scalars([zero, one] + [zero] * (M_t - 2), p, n, 0, M_t)


def gamma_tate(F: TatePowerSeries, a) -> TatePowerSeries:
    """The Gamma-action on K_n[[t]]: zeta -> zeta^a on coefficients, t -> a t."""
    return F.galois(a).scale_variable(a)


def delta_coeff(F: TatePowerSeries, k: int) -> CycloElement:
    """Coefficient of t^k."""
    if k >= F.order:
        raise DomainError(f"t^{k} is beyond the truncation O(t^{F.order})")
    if k < F.start and F.start <= 0 and k < -DEFAULT_NEG_DEPTH:
        raise DomainError(f"t^{k} is outside the stored window")
    return F.coefficient(k)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    passed: bool
    residual: float
    threshold: float
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"passed": self.passed,
                "residual": None if self.residual == INF else self.residual,
                "threshold": self.threshold, **self.detail}


def check_intertwine(f: LaurentSeries, n: int, M_t: int = DEFAULT_TORDER,
                     threshold=None, prec=DEFAULT_PRECISION, scale_exponent=None) -> Report:
    """Compare iota_n(d f) with p^s d/dt iota_n(f) mod t^(M_t - 1).

    With iota_n(t) = t / p^n the chain rule forces s = n, the default.
    ``scale_exponent`` lets a caller test other normalizations.
    """
    p = f.p
    s = n if scale_exponent is None else scale_exponent
    threshold = prec - 8 if threshold is None else threshold
    lhs = iota_n(f.partial(), n, M_t, prec).truncate(M_t - 1)
    factor = CycloElement.scalar(Fraction(p) ** s, p, n)
    rhs = iota_n(f, n, M_t, prec).ddt().scale(factor).truncate(M_t - 1)
    res = (lhs - rhs).valuation()
    return Report(res >= threshold, res, threshold, {"n": n, "M_t": M_t, "scale_exponent": s})


def factorial_identity_check(F: TatePowerSeries, k: int, threshold=None) -> Report:
    """[t^k] F against (k!)^-1 [t^0] (d/dt)^k F."""
    direct = delta_coeff(F, k)
    G = F
    for _ in range(k):
        G = G.ddt()
    via = delta_coeff(G, 0) * CycloElement.scalar(Fraction(1, math.factorial(k)), F.p, F.level,
                                                  max(F._scalar_precision(), DEFAULT_PRECISION))
    res = (direct - via).lattice_valuation()
    threshold = DEFAULT_PRECISION - 8 if threshold is None else threshold
    return Report(res >= threshold, res, threshold, {"k": k})
