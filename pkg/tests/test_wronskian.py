from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pglab.errors import DomainError, HypothesisFailure, Indeterminate
from pglab.series import LaurentSeries
from pglab.wronskian import (ProlongationSystem, RationalFunctionField, SeriesField,
                             check_hypotheses, extract_constant_relation, solve_in_H,
                             verify_certificate)

H = RationalFunctionField()


def system(vectors, k):
    return ProlongationSystem(H, vectors, k)


def test_constant_vectors():
    sy = system([["1", "0"], ["0", "1"], ["2", "3"]], 1)
    cert = extract_constant_relation(sy)
    assert cert.lambdas == [2, 3, -1]
    assert verify_certificate(sy, cert)


def test_wronskian_of_monomials_is_nonzero(derived):
    sy = system([["1"], ["X"], ["X^2"]], 2)
    hyp = check_hypotheses(sy)
    assert hyp.h1 and not hyp.h2
    assert derived["wronskian_det_1_X_X2"] == "2"
    with pytest.raises(HypothesisFailure) as err:
        extract_constant_relation(sy)
    assert err.value.failed == ["h2"]


def test_three_plus_five_X(derived):
    sy = system([["1"], ["X"], ["3+5*X"]], 2)
    assert check_hypotheses(sy).ok
    cert = extract_constant_relation(sy)
    assert [str(x) for x in cert.lambdas] == derived["wronskian_3_plus_5X"]["lambdas"]
    assert verify_certificate(sy, cert) and cert.residual is None


def test_solve_two_by_two(derived):
    cols = [[H.element("X"), H.element(0)], [H.element(0), H.element("1/(X+1)")]]
    sol = solve_in_H(H, cols, [H.element("X^2"), H.element(1)])
    want = [H.element(s) for s in derived["solve_2x2"]["solution"]]
    assert sol == want


def test_singular_solve_raises():
    cols = [[H.element("X")], [H.element("2*X")]]
    with pytest.raises(DomainError):
        solve_in_H(H, cols, [H.element(1)])


def test_rank_against_sympy():
    cols = [["1", "X", "X^2"], ["X", "X^2", "X^3"], ["1", "2", "3"]]
    ours = H.rank([[H.element(e) for e in c] for c in cols])
    X = sympy.Symbol("X")
    M = sympy.Matrix([[sympy.sympify(e.replace("^", "**"), locals={"X": X}) for e in c]
                      for c in cols])
    assert ours == M.rank()


def test_malformed_systems():
    with pytest.raises(DomainError):
        system([["1"]], 1)
    with pytest.raises(DomainError):
        system([["1"], ["1", "2"]], 1)
    with pytest.raises(DomainError):
        system([["1"], ["X"]], 0)


rational = st.builds(lambda a, b: f"({a})/({b})" if b else str(a),
                     st.integers(-6, 6), st.sampled_from([0, "X+1", "X-2", "X^2+1"]))


@settings(max_examples=25)
@given(st.lists(st.lists(rational, min_size=2, max_size=2), min_size=1, max_size=2),
       st.lists(st.fractions(max_denominator=7), min_size=2, max_size=2))
def test_planted_relation_is_recovered(xs, cs):
    vecs = [[H.element(e) for e in x] for x in xs]
    s = len(vecs)
    cs = cs[:s]
    last = [sum((H.from_constant(c) * x[i] for c, x in zip(cs, vecs)), H.zero) for i in range(2)]
    sy = ProlongationSystem(H, vecs + [last], 1)
    if not check_hypotheses(sy).h1:
        return
    cert = extract_constant_relation(sy)
    assert cert.lambdas == list(cs) + [-1]
    assert verify_certificate(sy, cert)


def test_non_constant_dependence_is_rejected():
    sy = system([["1", "X"], ["X", "X^2"]], 1)
    with pytest.raises(HypothesisFailure):
        extract_constant_relation(sy)


def test_series_field_relation():
    p = 3
    F = SeriesField(p, order=16)
    f = LaurentSeries.from_expression("1/(1-X)", p, 16)
    g = LaurentSeries.from_expression("X^3+2", p, 16)
    h = f.scale(3) + g.scale(Fraction(-5, 7))
    sy = ProlongationSystem(F, [[f], [g], [h]], 2)
    cert = extract_constant_relation(sy)
    lam = [x.to_fraction() if x.is_exact else x for x in cert.lambdas]
    assert (cert.lambdas[0] - 3).u == 0
    assert (cert.lambdas[1] - F.from_constant(Fraction(-5, 7)).coefficient(0)).u == 0
    assert cert.residual >= F.tau and lam[2] == -1


def test_series_zero_test_is_tristate():
    F = SeriesField(3, tau=10, order=8)
    exact_zero = LaurentSeries.zero(3, 8)
    unknown = LaurentSeries.from_coefficients([0], 3, order=8, prec=5)
    assert F.zero_state(exact_zero) is True
    assert F.zero_state(unknown) is None
    with pytest.raises(Indeterminate):
        F.is_zero(unknown)
