from fractions import Fraction

import pytest

from pglab._kernel import INF
from pglab.errors import DomainError
from pglab.operators import GammaElement, log_p
from pglab.pgmod import (GammaRelation, NoRelation, TwistModule, fil_j, find_gamma_relation,
                         g_criterion, mod_gamma, mod_nabla, mod_partial, mod_phi, mod_psi,
                         ndr_membership, quotient)
from pglab.series import LaurentSeries, log_oneplus

p = 3
L = LaurentSeries
X, ONE = L.gen(p), L.one(p)
M0, M1, Mm = TwistModule(p, (0,)), TwistModule(p, (1,)), TwistModule(p, (-1,))


def test_psi_on_trivial_summand():
    y = M0.element([X ** -1])
    assert (mod_psi(M0, y).coords[0].f - X ** -1).valuation() == INF


def test_psi_phi_on_twists():
    W = TwistModule(p, (2, -1))
    y = W.element([(1, X + ONE), (-1, X ** 2)])
    back = mod_psi(W, mod_phi(W, y))
    assert all((a.f - b.f).valuation() == INF for a, b in zip(back.coords, y.coords))


def test_gamma_scales_basis_vector():
    y = M1.element([L.polynomial({0: 7}, p)])
    out = mod_gamma(M1, y, GammaElement(2, p))
    assert out.coords[0].f.to_fractions() == {0: 14}


def test_partial_on_lattice_generator():
    # d_D(t^-1 X e) = t^-1 d(X) e on weight 1
    y = M1.element([(-1, X)])
    r = mod_partial(M1, y)
    assert r.element.coords[0].tpow == -1
    assert (r.element.coords[0].f - X.partial()).valuation() == INF


def test_partial_of_e_has_a_pole():
    r = mod_partial(M1, M1.element([ONE]))
    assert r.element.coords[0].tpow == -1 and r.pole_orders == (1,)


@pytest.mark.parametrize("k", [-1, 0, 2])
def test_nabla_is_the_lie_derivative(k):
    # (gamma_a - 1)/log_p(a) with a = 1 + p^m approaches nabla_D
    M = TwistModule(p, (k,))
    y = M.element([L.from_coefficients([2, 1, -1, 3], p, prec=None)])
    m, order = 6, 6
    a = 1 + p ** m
    g = mod_gamma(M, y, GammaElement(a, p), order=order)
    lg = log_p(a, p, 40)
    est = (g.coords[0].f - y.coords[0].f.truncate(order)).scale(lg.inverse(40))
    exact = mod_nabla(M, y).coords[0].f.truncate(order)
    assert (est - exact).valuation() >= 4


def test_membership_examples():
    assert ndr_membership(M1, M1.element([ONE]), "in_N")[0].ok
    assert ndr_membership(M1, M1.element([ONE]), "in_tN")[0].ok
    m = ndr_membership(M0, M0.element([ONE]), "in_tN")[0]
    assert not m.ok and m.obstruction == 0
    assert ndr_membership(M0, M0.element([(1, X)]), "in_tN")[0].ok
    assert ndr_membership(M0, M0.element([log_oneplus(p, 24) * X]), "in_tN")[0].ok
    with pytest.raises(DomainError):
        ndr_membership(M0, M0.element([ONE]), "in_t2N")


def test_filtration():
    W = TwistModule(p, (2, 0, -1))
    assert fil_j(W, 1).weights == (2,)
    assert fil_j(W, -5).rank == 3
    assert fil_j(quotient(W, fil_j(W, 0)), 0).rank == 0
    assert quotient(W, fil_j(W, 0)).weights == (-1,)


def test_g_criterion_rejects_inverse_X():
    rep = g_criterion(M0, M0.element([X ** -1]), 0, (1, 2))
    assert rep.verdict(1) == "nonzero" and rep.verdict(2) == "nonzero"
    v1 = next(c for c in rep.cells if c.level == 1).valuation()
    assert v1 == Fraction(-1, p - 1)


def test_g_criterion_two_routes_agree():
    rep = g_criterion(M0, M0.element([X ** -1]), 1, (1,))
    assert all(c.routes_agree for c in rep.cells)


def test_g_criterion_accepts_t_multiples():
    assert g_criterion(M1, M1.element([ONE]), 0).passes
    assert g_criterion(M0, M0.element([(1, X + 3 * ONE)]), 0).passes


def test_gamma_relation_for_constants():
    rel = find_gamma_relation(M0, M0.element([L.polynomial({0: 5}, p)]), GammaElement(4, p))
    assert isinstance(rel, GammaRelation) and rel.is_gamma_minus_one()
    assert rel.residual >= 24 - 6
    assert rel.display() == "-1 + 1*gamma"


def test_gamma_relation_for_t_e():
    rel = find_gamma_relation(Mm, Mm.element([(1, ONE)]), GammaElement(4, p))
    assert isinstance(rel, GammaRelation) and rel.is_gamma_minus_one()


def test_no_relation_for_X():
    rel = find_gamma_relation(M0, M0.element([X]), GammaElement(4, p), 3, 4)
    assert isinstance(rel, NoRelation) and not rel.indeterminate


def test_element_validation():
    with pytest.raises(DomainError):
        M0.element([X, X])
    with pytest.raises(DomainError):
        M0.element([(1, X)]) + M0.element([X])
