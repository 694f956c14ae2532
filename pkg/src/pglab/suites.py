"""Randomized identity suites behind ``pglab identities``.

Every suite draws its inputs from a ``random.Random`` seeded by the run seed
and the suite name, so a report depends only on the configuration. Reports
carry residual valuations, never timings.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from ._kernel import INF
from .config import RunConfig
from .cyclo_eval import (check_intertwine, factorial_identity_check, gamma_tate, iota_n, iota_t,
                         t_over_pn)
from .operators import GammaElement, op_gamma, op_phi, psi_A, psi_B
from .pgmod import TwistModule, fil_j, mod_partial, ndr_membership, quotient
from .series import LaurentSeries, log_oneplus, tdivide


@dataclass
class IdentityResult:
    name: str
    cases: int
    residual: object        # worst valuation seen; INF when every residual was exactly zero
    threshold: object
    failures: int = 0
    note: str = ""

    @property
    def passed(self):
        return self.failures == 0

    def to_json(self):
        d = {"name": self.name, "cases": self.cases, "passed": self.passed,
             "residual": None if self.residual == INF else str(self.residual),
             "threshold": str(self.threshold), "failures": self.failures}
        if self.note:
            d["note"] = self.note
        return d


class _Tally:
    def __init__(self, name, threshold, note=""):
        self.r = IdentityResult(name, 0, INF, threshold, note=note)

    def add(self, residual):
        self.r.cases += 1
        if residual < self.r.residual:
            self.r.residual = residual
        if residual < self.r.threshold:
            self.r.failures += 1

    def check(self, ok: bool):
        self.r.cases += 1
        if not ok:
            self.r.failures += 1


def _rng(cfg: RunConfig, name: str) -> random.Random:
    return random.Random(f"{cfg.seed}:{cfg.p}:{name}")


def random_series(rng, p, length, N, start=0):
    """Exact Laurent polynomial with coefficients drawn from [0, p^N)."""
    return LaurentSeries.from_coefficients([rng.randrange(p ** N) for _ in range(length)],
                                           p, start=start, prec=N)


def gamma_units(p, bound=16):
    """Small units used for gamma_a. For p = 2 only a = 1 mod 4."""
    return [a for a in range(2, bound) if a % p and (p != 2 or a % 4 == 1)]


# ---------------------------------------------------------------------------
# scalar operators


OPERATOR_IDENTITIES = ("psi_phi_identity", "projection_formula", "psi_gamma_commute",
                       "gamma_composition", "phi_gamma_commute", "partial_phi",
                       "partial_gamma", "leibniz")


def operator_suite(cfg: RunConfig, psi: Callable = psi_A) -> list:
    p = cfg.p
    rng = _rng(cfg, "operators")
    note = "a restricted to 1 + 4Z_2" if p == 2 else ""
    tallies = {name: _Tally(name, cfg.N - 4, note if "gamma" in name else "")
               for name in OPERATOR_IDENTITIES}
    units = gamma_units(p)
    for _ in range(cfg.cases):
        x = random_series(rng, p, cfg.M, cfg.N)
        y = random_series(rng, p, cfg.M, cfg.N)
        a, b = rng.choice(units), rng.choice(units)
        g, h = GammaElement(a, p), GammaElement(b, p)
        gy = op_gamma(g, y)
        residuals = {
            "psi_phi_identity": psi(op_phi(x)) - x,
            "projection_formula": psi(op_phi(x) * y) - x * psi(y),
            "psi_gamma_commute": psi(gy) - op_gamma(g, psi(y)),
            "gamma_composition": op_gamma(g, op_gamma(h, y)) - op_gamma(g * h, y),
            "phi_gamma_commute": op_phi(gy) - op_gamma(g, op_phi(y)),
            "partial_phi": op_phi(y).partial() - op_phi(y.partial()).scale(p),
            "partial_gamma": gy.partial() - op_gamma(g, y.partial()).scale(a),
            "leibniz": (x * y).partial() - x.partial() * y - x * y.partial(),
        }
        for name, r in residuals.items():
            tallies[name].add(r.valuation())
    return [t.r for t in tallies.values()]


def psi_crosscheck(cfg: RunConfig, cases=25, max_pole=2, psi: Callable = psi_A) -> IdentityResult:
    """Algorithm A against the mu_p-trace algorithm B, poles of depth <= max_pole."""
    p = cfg.p
    rng = _rng(cfg, "psi_algorithms")
    tally = _Tally("psi_algorithms_agree", cfg.N - 6)
    for _ in range(cases):
        d = rng.randint(0, max_pole)
        f = random_series(rng, p, cfg.M, cfg.N, start=-d)
        A, B = psi(f), psi_B(f, cfg.neg_depth)
        order = min(A.order, B.order)
        tally.add((A.truncate(order) - B.truncate(order)).valuation())
    return tally.r


def psi_fixed_points(cfg: RunConfig, psi: Callable = psi_A) -> IdentityResult:
    """psi(1), psi(1/X), psi((1+X)/X) and psi((1+X)^j) for j <= 2p, all exact."""
    p = cfg.p
    L = LaurentSeries
    X, one = L.gen(p), L.one(p)
    tally = _Tally("psi_fixed_points", cfg.N)
    for f in (one, X ** -1, (one + X) * X ** -1):
        tally.add((psi(f) - f).valuation())
    for j in range(2 * p + 1):
        expected = (one + X) ** (j // p) if j % p == 0 else L.zero(p)
        tally.add((psi((one + X) ** j) - expected).valuation())
    return tally.r


# ---------------------------------------------------------------------------
# iota_n


def _small_series(rng, p, length, start):
    bound = p ** 6
    return LaurentSeries.from_coefficients([rng.randrange(-bound, bound) for _ in range(length)],
                                           p, start=start, prec=None)


def iota_suite(cfg: RunConfig, cases=None, length=16) -> list:
    p, M_t = cfg.p, cfg.M_t
    cases = cfg.iota_cases if cases is None else cases
    floor = cfg.N - 8
    rng = _rng(cfg, "iota")
    mult = _Tally("iota_multiplicative", floor)
    tt = _Tally("iota_t", floor)
    inter = _Tally("iota_intertwine", floor)
    fact = _Tally("factorial_identity", floor)
    equiv = _Tally("iota_gamma_equivariance", floor)
    units = gamma_units(p)
    for n in cfg.levels:
        tt.add((iota_t(p, n, M_t, cfg.N) - t_over_pn(p, n, M_t)).valuation())
        for _ in range(cases):
            f = _small_series(rng, p, length, -rng.randint(0, 2))
            g = _small_series(rng, p, length, -rng.randint(0, 2))
            lhs = iota_n(f * g, n, M_t, cfg.N)
            mult.add((lhs - iota_n(f, n, M_t, cfg.N) * iota_n(g, n, M_t, cfg.N)).valuation())
            inter.add(check_intertwine(f, n, M_t, floor, cfg.N).residual)
        for _ in range(max(1, cases // 10)):
            f = _small_series(rng, p, length, -rng.randint(0, 2))
            F = iota_n(f, n, M_t, cfg.N)
            for k in range(4):
                fact.add(factorial_identity_check(F, k, floor).residual)
            # pole-free inputs: the gamma-image of a pole is a truncated series
            # whose unknown tail swamps iota_n at this t-truncation
            f = f.shift_exponents(max(0, -f.start))
            a = rng.choice(units)
            equiv.add((iota_n(op_gamma(GammaElement(a, p), f), n, M_t, cfg.N)
                       - gamma_tate(iota_n(f, n, M_t, cfg.N), a)).valuation())
    return [mult.r, tt.r, inter.r, fact.r, equiv.r]


# ---------------------------------------------------------------------------
# twist modules


def module_suite(cfg: RunConfig, cases=None, weights=None) -> list:
    """Lattice and filtration checks; ``weights`` restricts to given summands."""
    p = cfg.p
    cases = cfg.module_cases if cases is None else cases
    rng = _rng(cfg, "modules")
    length = 12

    stable = _Tally("partial_preserves_ndr", 0)
    summands = sorted(set(weights)) if weights else range(-2, 3)
    for k in summands:
        M = TwistModule(p, (k,))
        for _ in range(cases):
            m = rng.randint(0, 2)
            y = M.element([(m - k, _small_series(rng, p, length, 0))])
            r = mod_partial(M, y)
            stable.check(all(x.ok for x in ndr_membership(M, r.element, "in_N")))

    nofil = _Tally("fil_of_quotient_vanishes", 0)
    for _ in range(cases):
        weights = tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 5)))
        j = rng.randint(-3, 3)
        W = TwistModule(p, weights)
        nofil.check(fil_j(quotient(W, fil_j(W, j)), j).rank == 0)
    if weights:
        W = TwistModule(p, tuple(weights))
        for j in range(min(weights) - 1, max(weights) + 2):
            nofil.check(fil_j(quotient(W, fil_j(W, j)), j).rank == 0)

    mono = _Tally("ndr_monotone", 0)
    tdiv = _Tally("weight0_t_divisibility", 0)
    M0 = TwistModule(p, (0,))
    for _ in range(2 * cases):
        k = rng.choice(list(summands))
        M = TwistModule(p, (k,))
        f = _small_series(rng, p, length, 0).shift_exponents(rng.randint(0, 1))
        y = M.element([(rng.randint(-3, 3), f)])
        in_tn = ndr_membership(M, y, "in_tN")[0].ok
        in_n = ndr_membership(M, y, "in_N")[0].ok
        mono.check(in_n or not in_tn)
        # weight 0: y in tN iff t | y, and then t * (y / t) = y
        f0 = _small_series(rng, p, length, 0).shift_exponents(rng.randint(0, 1))
        member = ndr_membership(M0, M0.element([f0]), "in_tN")[0].ok
        q = tdivide(f0)
        ok = member == q.ok == f0.coefficient(0).is_zero()
        if q.ok:
            t = log_oneplus(p, q.quotient.order + 1, cfg.N)
            back = (q.quotient * t).truncate(q.quotient.order) - f0.truncate(q.quotient.order)
            ok = ok and back.is_zero()   # zero at every coefficient's known precision
        tdiv.check(ok)
    return [stable.r, nofil.r, mono.r, tdiv.r]


# ---------------------------------------------------------------------------


def run_identities(cfg: RunConfig, psi: Callable = psi_A) -> dict:
    """All suites; ``psi`` is a test hook for fault injection."""
    results = operator_suite(cfg, psi)
    results.append(psi_crosscheck(cfg, psi=psi))
    results.append(psi_fixed_points(cfg, psi))
    results += iota_suite(cfg)
    results += module_suite(cfg)
    results.sort(key=lambda r: r.name)
    failing = [r.name for r in results if not r.passed]
    return {"config": cfg.to_json(), "passed": not failing, "failing": failing,
            "identities": [r.to_json() for r in results]}
