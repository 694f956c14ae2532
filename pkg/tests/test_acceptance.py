"""Acceptance criteria 1-9 at their stated tolerances.

Each test records a one-line verdict that the conftest prints at the end of
the session. The intertwining sub-check of criterion 4 with the factor
p^(-n) is expected to fail (see the decisions ledger) and is kept as a
strict xfail so it is reported rather than hidden.
"""
import json
import random
import shutil
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import amend, record
from pglab import suites
from pglab._kernel import INF
from pglab.config import RunConfig
from pglab.cyclo_eval import check_intertwine
from pglab.errors import HypothesisFailure
from pglab.operators import GammaElement
from pglab.padic import CycloElement
from pglab.pgmod import (GammaRelation, NoRelation, TwistModule, find_gamma_relation,
                         g_criterion, ndr_membership)
from pglab.series import LaurentSeries
from pglab.wronskian import (ProlongationSystem, RationalFunctionField, check_hypotheses,
                             extract_constant_relation, verify_certificate)

PRIMES = (2, 3, 5)
N = 24
L = LaurentSeries


def fmt(x):
    return "exact" if x == INF else str(x)


def test_criterion_1_operator_identities():
    t0 = time.perf_counter()
    worst, failing = INF, []
    for p in PRIMES:
        for r in suites.operator_suite(RunConfig(p=p, M=32, N=N, cases=100)):
            assert r.cases == 100
            worst = min(worst, r.residual)
            if not r.passed:
                failing.append(f"{r.name}@p={p}")
    elapsed = time.perf_counter() - t0
    ok = not failing and worst >= N - 4 and elapsed < 60
    record(1, ok, f"8 identities x 3 primes x 100 cases, worst residual {fmt(worst)} "
                  f"(need >= {N - 4}), {elapsed:.1f}s (need < 60s)")
    assert not failing, failing
    assert elapsed < 60


def test_criterion_2_psi_algorithms_agree():
    worst = INF
    for p in PRIMES:
        r = suites.psi_crosscheck(RunConfig(p=p, N=N), cases=25, max_pole=2)
        worst = min(worst, r.residual)
    ok = worst >= N - 6
    record(2, ok, f"A vs B, 25 inputs per prime with poles of depth <= 2, "
                  f"worst residual {fmt(worst)} (need >= {N - 6})")
    assert ok


def test_criterion_3_fixed_points(derived):
    failures = []
    for p in PRIMES:
        r = suites.psi_fixed_points(RunConfig(p=p, N=N))
        if r.residual != INF:
            failures.append(p)
    # second opinion on (1+X)^j from the coefficient-matching oracle
    from pglab.operators import psi_A
    for row in derived["psi_oneplus_power"]:
        p, j = row["p"], row["j"]
        got = {e: c for e, c in psi_A((L.one(p) + L.gen(p)) ** j).to_fractions().items() if c}
        want = {int(e): Fraction(c) for e, c in row["psi"].items() if Fraction(c)}
        if got != want:
            failures.append((p, j))
    ok = not failures
    record(3, ok, "psi(1), psi(1/X), psi((1+X)/X), psi((1+X)^j) j <= 2p, p in {2,3,5}: "
                  + ("all exact" if ok else f"failures {failures}"))
    assert ok


def _iota_inputs(rng, p, count):
    out = []
    for _ in range(count):
        d = rng.randint(0, 2)
        out.append(L.from_coefficients([rng.randrange(-p ** 6, p ** 6) for _ in range(16)],
                                       p, start=-d, prec=None))
    return out


def test_criterion_4_iota():
    floor, M_t = N - 8, 8
    worst = {"mult": INF, "t": INF, "inter": INF, "fact": INF}
    for p in PRIMES:
        cfg = RunConfig(p=p, N=N, M_t=M_t, iota_cases=50, levels=(1, 2))
        rs = {r.name: r for r in suites.iota_suite(cfg)}
        worst["mult"] = min(worst["mult"], rs["iota_multiplicative"].residual)
        worst["t"] = min(worst["t"], rs["iota_t"].residual)
        worst["inter"] = min(worst["inter"], rs["iota_intertwine"].residual)
        worst["fact"] = min(worst["fact"], rs["factorial_identity"].residual)
    ok = all(v >= floor for v in worst.values())
    record(4, False,
           f"multiplicative {fmt(worst['mult'])}, iota(t)-t/p^n {fmt(worst['t'])}, "
           f"k!-identity {fmt(worst['fact'])}, intertwining with p^n {fmt(worst['inter'])} "
           f"(need >= {floor})")
    assert ok


@pytest.mark.xfail(strict=True, reason="iota_n(t) = t/p^n forces the factor p^n, not p^-n")
def test_criterion_4_stated_intertwining():
    rng = random.Random(4)
    worst = INF
    for p in PRIMES:
        for n in (1, 2):
            for f in _iota_inputs(rng, p, 50):
                worst = min(worst, check_intertwine(f, n, 8, N - 8, N, scale_exponent=-n).residual)
    amend(4, f"stated p^-n form: worst residual {fmt(worst)} (need >= {N - 8})")
    assert worst >= N - 8


def _planted(rng, H):
    X = H.element("X")

    def rr():
        num = sum((H.element(rng.randint(-5, 5)) * X ** i for i in range(rng.randint(1, 3))),
                  H.zero)
        return num / (X + H.element(rng.randint(-5, 5))) if rng.random() < 0.5 else num

    return rr


def test_criterion_5_wronskian():
    H = RationalFunctionField()
    rng = random.Random(5)
    rr = _planted(rng, H)
    X = H.element("X")
    t0 = time.perf_counter()
    recovered = certified_adversarial = bad_certs = 0
    for _ in range(100):
        while True:
            v, k, s = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
            if v * k >= s:
                break
        while True:
            xs = [[rr() for _ in range(v)] for _ in range(s)]
            if check_hypotheses(ProlongationSystem(H, xs + [xs[0]], k)).h1:
                break
        cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(s)]
        last = [sum((H.from_constant(c) * x[i] for c, x in zip(cs, xs)), H.zero)
                for i in range(v)]
        system = ProlongationSystem(H, xs + [last], k)
        cert = extract_constant_relation(system)
        recovered += cert.lambdas == cs + [-1]
        bad_certs += not verify_certificate(system, cert)
    for _ in range(100):
        v, k, s = rng.randint(1, 4), rng.randint(1, 3), rng.randint(1, 3)
        xs = [[rr() for _ in range(v)] for _ in range(s)]
        mus = [rr() + X * H.element(rng.randint(1, 5)) for _ in range(s)]
        last = [sum((m * x[i] for m, x in zip(mus, xs)), H.zero) for i in range(v)]
        system = ProlongationSystem(H, xs + [last], k)
        try:
            cert = extract_constant_relation(system)
        except HypothesisFailure:
            continue
        certified_adversarial += 1
        bad_certs += not verify_certificate(system, cert)
    elapsed = time.perf_counter() - t0
    ok = recovered == 100 and certified_adversarial == 0 and bad_certs == 0 and elapsed < 30
    record(5, ok, f"planted recovered {recovered}/100, adversarial certified "
                  f"{certified_adversarial}/100, unverifiable certificates {bad_certs}, "
                  f"{elapsed:.1f}s (need < 30s)")
    assert ok


def test_criterion_6_pgmod():
    failing, counts = [], {}
    for p in PRIMES:
        for r in suites.module_suite(RunConfig(p=p, N=N, module_cases=50)):
            counts[r.name] = counts.get(r.name, 0) + r.cases
            if not r.passed:
                failing.append(f"{r.name}@p={p}")
    ok = not failing
    record(6, ok, "d_D(N) in N (50 per weight in [-2,2]), Fil^j(W/Fil^j W) = 0 (50 multisets), "
                  "in_tN => in_N and weight-0 t-divisibility (100 elements), per prime: "
                  + ("all hold" if ok else f"failing {failing}"))
    assert ok, failing
    assert counts["partial_preserves_ndr"] == 3 * 250


def test_criterion_7_g_criterion():
    problems = []
    for p in PRIMES:
        X = L.gen(p)
        M0 = TwistModule(p, (0,))
        rep = g_criterion(M0, M0.element([X ** -1]), 0, (1,))
        cell = rep.cells[0]
        # route 1: iota_1 by Horner evaluation, route 2: 1/(zeta - 1) directly in K_1
        direct = (CycloElement.zeta(p, 1) - 1).inverse()
        if cell.verdict != "nonzero":
            problems.append(f"p={p}: verdict {cell.verdict}")
        if (cell.value - direct).lattice_valuation() < N - 8:
            problems.append(f"p={p}: routes disagree")
        if cell.valuation() != Fraction(-1, p - 1) or direct.valuation() != Fraction(-1, p - 1):
            problems.append(f"p={p}: valuation {cell.valuation()}")
        M1 = TwistModule(p, (1,))
        for f in (L.one(p), X, (L.one(p) + X) ** 2, X ** 3 - L.one(p).scale(p)):
            y = M1.element([f])
            if not ndr_membership(M1, y, "in_tN")[0].ok:
                problems.append(f"p={p}: {f} not in tN")
            if not g_criterion(M1, y, 0, (1, 2)).passes:
                problems.append(f"p={p}: weight-1 element {f} rejected")
    ok = not problems
    record(7, ok, "1/X on the trivial summand nonzero with valuation -1/(p-1) by both routes; "
                  "weight-1 tN elements pass at n=1,2: " + ("yes" if ok else "; ".join(problems)))
    assert ok, problems


def test_criterion_8_gamma_relation():
    problems, worst = [], INF
    for p in (3, 5):
        g = GammaElement(4 if p != 2 else 5, p)
        M0, Mm = TwistModule(p, (0,)), TwistModule(p, (-1,))
        planted = [(M0, M0.element([L.polynomial({0: c}, p)])) for c in (1, 5, -7)]
        planted.append((Mm, Mm.element([(1, L.one(p))])))
        for M, y in planted:
            rel = find_gamma_relation(M, y, g)
            if not (isinstance(rel, GammaRelation) and rel.is_gamma_minus_one()):
                problems.append(f"p={p}: no gamma - 1 for {y.to_json()}")
                continue
            worst = min(worst, rel.residual)
        rel = find_gamma_relation(M0, M0.element([L.gen(p)]), g, v_max=3, s_max=4)
        if not (isinstance(rel, NoRelation) and not rel.indeterminate):
            problems.append(f"p={p}: relation reported for y = X")
    ok = not problems and worst >= N - 6
    record(8, ok, f"gamma - 1 for constants and t*e (weight -1), worst residual {fmt(worst)} "
                  f"(need >= {N - 6}); y = X: no relation within v_max=3, s_max=4"
                  + ("" if not problems else f"; problems {problems}"))
    assert ok, problems


def test_criterion_9_determinism():
    exe = shutil.which("pglab")
    cmd = [exe] if exe else [sys.executable, "-m", "pglab.cli"]
    runs = [subprocess.run(cmd + ["identities", "--seed", "7"], capture_output=True)
            for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout
    report = json.loads(runs[0].stdout)
    ok = same and runs[0].returncode == 0 and report["config"]["seed"] == 7
    record(9, ok, f"two runs of 'pglab identities --seed 7': "
                  f"{'byte-identical' if same else 'differ'}, exit {runs[0].returncode}")
    assert ok
