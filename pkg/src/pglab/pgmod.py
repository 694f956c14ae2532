"""Direct sums of cyclotomic twists as (phi, Gamma)-modules.

Summand i has weight k_i: gamma_a acts on its basis vector e_i by a^k_i and
phi fixes e_i. Its de Rham lattice is N = t^(-k_i) B e_i, with D_dR basis
t^(-k_i) e_i. A coordinate is stored as a pair (j, f) standing for t^j f,
so elements of N such as t^(-k) f e are represented without expanding
powers of t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._kernel import INF
from .cyclo_eval import DEFAULT_TORDER, TatePowerSeries, iota_n
from .errors import DomainError, Indeterminate
from .operators import GammaElement, op_gamma, op_phi, op_psi
from .padic import DEFAULT_PRECISION, CycloElement, PadicNumber
from .series import DEFAULT_ORDER, LaurentSeries, log_oneplus, tdivide
from .wronskian import (ProlongationSystem, RelationCertificate, SeriesField,
                        check_hypotheses, extract_constant_relation, solve_in_H)


@dataclass(frozen=True)
class TwistModule:
    p: int
    weights: tuple
    labels: tuple = ()
    order: int = DEFAULT_ORDER
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(k) for k in self.weights))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(len(self.weights))))
        if len(self.labels) != len(self.weights):
            raise DomainError("one label per summand")

    @property
    def rank(self):
        return len(self.weights)

    def element(self, coords) -> "ModuleElement":
        """From series, or (tpow, series) pairs, one per summand."""
        out = []
        for c in coords:
            if isinstance(c, Coordinate):
                out.append(c)
            elif isinstance(c, tuple):
                out.append(Coordinate(c[1], c[0]))
            else:
                out.append(Coordinate(c))
        return ModuleElement(self, tuple(out))

    def to_json(self):
        return {"p": self.p, "weights": list(self.weights), "labels": list(self.labels),
                "truncation": None if self.order == INF else self.order, "precision": self.prec}


@dataclass(frozen=True)
class Coordinate:
    """t^tpow * f."""
    f: LaurentSeries
    tpow: int = 0

    def expand(self, order=DEFAULT_ORDER) -> LaurentSeries:
        """t^tpow f as a single truncated series."""
        if self.tpow == 0:
            return self.f
        t = log_oneplus(self.f.p, order + abs(self.tpow) + 1, self.f._scalar_precision())
        return self.f * t ** self.tpow


@dataclass(frozen=True)
class ModuleElement:
    module: TwistModule
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.module.rank:
            raise DomainError(f"expected {self.module.rank} coordinates, got {len(self.coords)}")
        if any(c.f.p != self.module.p for c in self.coords):
            raise DomainError("prime mismatch")

    def _combine(self, other, sign):
        if other.module.weights != self.module.weights:
            raise DomainError("elements of different modules")
        out = []
        for a, b in zip(self.coords, other.coords):
            if a.tpow != b.tpow:
                raise DomainError("coordinates with different powers of t; expand first")
            out.append(Coordinate(a.f + b.f if sign > 0 else a.f - b.f, a.tpow))
        return ModuleElement(self.module, tuple(out))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c):
        return ModuleElement(self.module, tuple(Coordinate(x.f.scale(c), x.tpow)
                                                for x in self.coords))

    def valuation(self):
        return min((c.f.valuation() for c in self.coords), default=INF)

    def to_json(self):
        return [{"tpow": c.tpow, "series": c.f.to_text()} for c in self.coords]


def _apow(g: GammaElement, e: int):
    a = g.a
    if isinstance(a, PadicNumber):
        return a ** e if e >= 0 else a.inverse() ** (-e)
    return Fraction(a) ** e


# ---------------------------------------------------------------------------
# operators


def mod_phi(M: TwistModule, y: ModuleElement) -> ModuleElement:
    """phi(t^j f e) = p^j t^j phi(f) e."""
    return M.element([Coordinate(op_phi(c.f).scale(Fraction(M.p) ** c.tpow), c.tpow)
                      for c in y.coords])


def mod_gamma(M: TwistModule, y: ModuleElement, g: GammaElement, order=None) -> ModuleElement:
    """gamma_a(t^j f e) = a^(j+k) t^j gamma_a(f) e."""
    out = []
    for k, c in zip(M.weights, y.coords):
        out.append(Coordinate(op_gamma(g, c.f, order=order).scale(_apow(g, k + c.tpow)), c.tpow))
    return M.element(out)


def mod_psi(M: TwistModule, y: ModuleElement, algorithm="A") -> ModuleElement:
    """psi(t^j f e) = p^-j t^j psi(f) e, from psi(phi(x) y) = x psi(y)."""
    return M.element([Coordinate(op_psi(c.f, algorithm).scale(Fraction(M.p) ** -c.tpow), c.tpow)
                      for c in y.coords])


def mod_nabla(M: TwistModule, y: ModuleElement) -> ModuleElement:
    """nabla_D(t^j f e) = t^j (nabla f + (j+k) f) e."""
    out = []
    for k, c in zip(M.weights, y.coords):
        out.append(Coordinate(c.f.nabla() + c.f.scale(c.tpow + k), c.tpow))
    return M.element(out)


@dataclass(frozen=True)
class PartialResult:
    element: ModuleElement
    pole_orders: tuple   # order of the t-pole per summand (0: none)

    @property
    def has_pole(self):
        return any(self.pole_orders)


def mod_partial(M: TwistModule, y: ModuleElement) -> PartialResult:
    """d_D = t^-1 nabla_D.

    When j + k = 0 this is t^j d(f) with no division. Otherwise the
    quotient (nabla f + (j+k) f) / t is attempted; if t does not divide,
    the result keeps a factor t^(j-1).
    """
    out, poles = [], []
    for k, c in zip(M.weights, y.coords):
        if c.tpow + k == 0:
            coord = Coordinate(c.f.partial(), c.tpow)
        else:
            g = c.f.nabla() + c.f.scale(c.tpow + k)
            q = tdivide(g)
            coord = Coordinate(q.quotient, c.tpow) if q.ok else Coordinate(g, c.tpow - 1)
        out.append(coord)
        poles.append(max(0, -coord.tpow))
    return PartialResult(M.element(out), tuple(poles))


# ---------------------------------------------------------------------------
# de Rham lattice


@dataclass(frozen=True)
class Membership:
    summand: str
    ok: bool
    obstruction: int | None = None   # exponent of the first non-vanishing coefficient

    def to_json(self):
        return {"summand": self.summand, "ok": self.ok, "obstruction": self.obstruction}


def ndr_membership(M: TwistModule, y: ModuleElement, mode="in_N") -> list:
    """Per-summand test of y in N (mode in_N) or in tN (mode in_tN).

    t^j f e lies in t^m N = t^(m-k) B e iff t^(m-k-j) divides f in B; no
    division is needed when m-k-j <= 0.
    """
    if mode not in ("in_N", "in_tN"):
        raise DomainError(f"unknown membership mode {mode!r}")
    m = 1 if mode == "in_tN" else 0
    out = []
    for label, k, c in zip(M.labels, M.weights, y.coords):
        need = m - k - c.tpow
        f, ok, obst = c.f, True, None
        for _ in range(max(need, 0)):
            q = tdivide(f)
            if not q.ok:
                ok, obst = False, q.obstruction
                break
            f = q.quotient
        out.append(Membership(label, ok, obst))
    return out


def fil_j(M: TwistModule, j: int) -> TwistModule:
    """The sub-sum of summands of weight >= j."""
    keep = [i for i, k in enumerate(M.weights) if k >= j]
    return TwistModule(M.p, tuple(M.weights[i] for i in keep), tuple(M.labels[i] for i in keep),
                       M.order, M.prec)


def quotient(M: TwistModule, sub: TwistModule) -> TwistModule:
    """M / sub for a sub-sum (matched by label)."""
    gone = set(sub.labels)
    if not gone <= set(M.labels):
        raise DomainError("not a sub-sum of the module")
    keep = [i for i, lab in enumerate(M.labels) if lab not in gone]
    return TwistModule(M.p, tuple(M.weights[i] for i in keep), tuple(M.labels[i] for i in keep),
                       M.order, M.prec)


# ---------------------------------------------------------------------------
# g-criterion


def ddr_coordinate(M: TwistModule, y: ModuleElement, i: int, n: int, M_t=DEFAULT_TORDER,
                   prec=DEFAULT_PRECISION) -> TatePowerSeries:
    """Coordinate of iota_n(y) on the basis t^(-k_i) e_i: t^(k_i) iota_n(t^j f)."""
    c = y.coords[i]
    k = M.weights[i]
    F = iota_n(c.f, n, M_t, prec)
    if c.tpow:
        F = F.scale(CycloElement.scalar(Fraction(M.p) ** (-n * c.tpow), M.p, n))
    return F.shift_exponents(k + c.tpow)


def _verdict(x: CycloElement, floor):
    """'zero', 'nonzero' or 'indeterminate' for a value known to x.prec."""
    if x.is_zero():
        return "zero" if x.prec >= floor else "indeterminate"
    return "nonzero" if x.lattice_valuation() < floor else "zero"


@dataclass
class GCell:
    level: int
    summand: str
    value: CycloElement
    cross_check: CycloElement
    verdict: str
    routes_agree: bool

    def valuation(self):
        return None if self.value.is_zero() else self.value.valuation()

    def to_json(self):
        v = self.valuation()
        return {"level": self.level, "summand": self.summand, "verdict": self.verdict,
                "value": self.value.to_json(), "valuation": None if v is None else str(v),
                "routes_agree": self.routes_agree}


@dataclass
class GReport:
    k: int
    cells: list = field(default_factory=list)

    def verdict(self, level=None):
        cells = [c for c in self.cells if level is None or c.level == level]
        if any(c.verdict == "nonzero" for c in cells):
            return "nonzero"
        if any(c.verdict == "indeterminate" for c in cells):
            return "indeterminate"
        return "zero"

    @property
    def passes(self):
        return self.verdict() == "zero"

    def to_json(self):
        levels = sorted({c.level for c in self.cells})
        return {"k": self.k, "verdict": self.verdict(),
                "by_level": {str(n): self.verdict(n) for n in levels},
                "cells": [c.to_json() for c in self.cells]}


def g_criterion(M: TwistModule, y: ModuleElement, k: int, levels: Sequence[int] = (1, 2),
                M_t=DEFAULT_TORDER, prec=DEFAULT_PRECISION, floor=None) -> GReport:
    """delta_V (d/dt)^k iota_n(y) in D_dR coordinates, per level.

    Cross-check: the same number equals k! times the t^k coefficient.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    floor = prec - 8 if floor is None else floor
    report = GReport(k)
    for n in levels:
        for i, label in enumerate(M.labels):
            F = ddr_coordinate(M, y, i, n, max(M_t, k + 1), prec)
            G = F
            for _ in range(k):
                G = G.ddt()
            value = G.coefficient(0)
            via = F.coefficient(k) * CycloElement.scalar(math.factorial(k), M.p, n)
            agree = (value - via).lattice_valuation() >= floor
            report.cells.append(GCell(n, label, value, via, _verdict(value, floor), agree))
    return report


# ---------------------------------------------------------------------------
# gamma-relations


@dataclass
class GammaRelation:
    """P(gamma) = sum_w coefficients[w] gamma^w with P(gamma) y = 0 at precision."""
    coefficients: list
    residual: float
    certificate: RelationCertificate
    orbit_rank: int
    tau: float
    truncation: int

    def is_gamma_minus_one(self):
        """True when P is a nonzero multiple of gamma - 1 at precision."""
        if len(self.coefficients) != 2:
            return False
        c0, c1 = self.coefficients
        return c1.u != 0 and (c0 + c1).u == 0

    def display(self):
        """Signed small-integer rendering such as '-1 + 1*gamma'."""
        parts = []
        for w, c in enumerate(self.coefficients):
            x = _signed(c)
            mono = "" if w == 0 else ("*gamma" if w == 1 else f"*gamma^{w}")
            parts.append(f"{x}{mono}")
        return " + ".join(parts)

    def to_json(self):
        return {"relation": True,
                "coefficients": [x.to_json() for x in self.coefficients],
                "display": self.display(),
                "residual": None if self.residual == INF else self.residual,
                "orbit_rank": self.orbit_rank, "tau": self.tau, "truncation": self.truncation,
                "provenance": self.certificate.provenance}


def _signed(x: PadicNumber):
    """Rational value of x with the unit lifted to the symmetric range."""
    if x.u == 0:
        return 0
    u = x.u
    if x.N != INF and u > p_pow(x.p, x.N) // 2:
        u -= p_pow(x.p, x.N)
    return Fraction(u) * Fraction(x.p) ** int(x.v)


def p_pow(p, n):
    return p ** int(n)


@dataclass
class NoRelation:
    reason: str
    v_max: int
    s_max: int
    tau: float
    truncation: int
    indeterminate: bool = False

    def to_json(self):
        return {"relation": False, "reason": self.reason, "v_max": self.v_max,
                "s_max": self.s_max, "tau": self.tau, "truncation": self.truncation,
                "indeterminate": self.indeterminate}


def _orbit(M: TwistModule, y: ModuleElement, g: GammaElement, count: int, order: int):
    """Coordinate series of gamma^w(y), w < count, with the t^j factors dropped.

    Dropping t^j rescales a coordinate uniformly along the orbit, which
    changes no linear relation between orbit elements.
    """
    current = [c.f.truncate(order) if c.f.order == INF else c.f for c in y.coords]
    orbit = []
    for w in range(count):
        orbit.append(list(current))
        current = [op_gamma(g, f, order=order).scale(_apow(g, k + c.tpow))
                   for f, k, c in zip(current, M.weights, y.coords)]
    return orbit


def find_gamma_relation(M: TwistModule, y: ModuleElement, g: GammaElement, v_max=3, s_max=4,
                        tau=None, order=24):
    """Search for a constant-coefficient P with P(gamma) y = 0.

    Find the least v with gamma^v y in the H-span of y, ..., gamma^(v-1) y;
    write gamma^w y = sum_j a^w_j gamma^j y; set x_w = a^(w+v-1) and hand
    x_1..x_(s+1) with derivation d to the Wronskian solver.
    """
    H = SeriesField(M.p, tau, order, M.prec)
    orbit = _orbit(M, y, g, v_max + s_max + 2, order)
    try:
        v = None
        for cand in range(1, v_max + 1):
            if H.rank(orbit[:cand]) < cand:
                break
            if H.rank(orbit[:cand + 1]) == cand:
                v = cand
                break
        if v is None:
            return NoRelation(f"orbit has no H-dependence with v <= {v_max}",
                              v_max, s_max, H.tau, order)
        basis = orbit[:v]
        xs = [solve_in_H(H, basis, orbit[w]) for w in range(v, v + s_max + 1)]
        for s in range(1, s_max + 1):
            for k in range(max(1, -(-s // v)), s + 1):
                system = ProlongationSystem(H, xs[:s + 1], k)
                hyp = check_hypotheses(system)
                if hyp.h1 is None or hyp.h2 is None:
                    raise Indeterminate("rank undecided")
                if not hyp.ok:
                    continue
                cert = extract_constant_relation(system)
                # sum lambda_w gamma^(w+v-1) y = 0; strip gamma^v (gamma is invertible)
                # and make P monic (lambda_{s+1} = -1)
                coeffs = [-c for c in cert.lambdas]
                residual = _apply_polynomial(M, y, g, coeffs).valuation()
                return GammaRelation(coeffs, residual, cert, v, H.tau, order)
    except Indeterminate as exc:
        return NoRelation(f"indeterminate: {exc}", v_max, s_max, H.tau, order, True)
    return NoRelation(f"no constant relation with s <= {s_max}", v_max, s_max, H.tau, order)


def _apply_polynomial(M: TwistModule, y: ModuleElement, g: GammaElement, coeffs) -> ModuleElement:
    """sum_w coeffs[w] gamma^w(y), computed on the module element itself."""
    total = None
    current = y
    for c in coeffs:
        term = current.scale(c)
        total = term if total is None else total + term
        current = mod_gamma(M, current, g, order=M.order)
    return total
