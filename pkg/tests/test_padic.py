from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pglab._kernel import INF
from pglab.errors import DomainError
from pglab.padic import CycloElement, PadicNumber, binom_zp, cyclotomic_poly, pinv

PRIMES = st.sampled_from([2, 3, 5, 7])
nonzero_rationals = st.fractions(max_denominator=10 ** 4).filter(lambda x: x != 0)


def padic(x, p, N=24):
    return PadicNumber.from_rational(x, p, N)


def close(a: PadicNumber, x: Fraction, digits):
    """a agrees with the rational x to absolute precision ``digits``."""
    d = a - PadicNumber.from_rational(x, a.p, 60)
    return d.u == 0 or d.v >= digits


def test_pinv_matches_euclid(derived):
    fx = derived["pinv"]
    a = PadicNumber(fx["p"], 0, fx["u"], fx["N"])
    inv = pinv(a)
    assert (inv.v, inv.u, inv.N) == (0, fx["inverse"], 4)


def test_binom_half(derived):
    fx = derived["binom_half_2"]
    c = binom_zp(padic(Fraction(fx["a"]), fx["p"]), fx["k"])
    assert close(c, Fraction(fx["value"]), 20)


def test_exact_zero_and_valuation():
    z = PadicNumber.zero(3)
    assert z.v == INF and z.is_exact_zero()
    x = padic(Fraction(18, 5), 3)
    assert x.v == 2 and x.u % 3 != 0


def test_precision_never_grows():
    a = padic(Fraction(1, 7), 5, 10)
    b = padic(Fraction(2, 3), 5, 20)
    assert (a + b).N <= 10
    assert (a * b).N == 10


def test_cancellation_loses_digits():
    a = padic(1, 3, 10)
    b = padic(1 + 3 ** 4, 3, 10)
    d = b - a
    assert d.v == 4 and d.N <= 6


def test_inverse_of_zero_raises():
    with pytest.raises(DomainError):
        PadicNumber.zero(3).inverse()


@given(PRIMES, nonzero_rationals, nonzero_rationals)
def test_field_operations_match_rationals(p, x, y):
    a, b = padic(x, p), padic(y, p)
    lo = min(a.v, b.v)
    assert close(a + b, x + y, lo + 20)
    assert close(a * b, x * y, a.v + b.v + 20)
    assert close(a / b, x / y, a.v - b.v + 20)


@given(PRIMES, nonzero_rationals)
def test_json_round_trip(p, x):
    a = padic(x, p)
    assert PadicNumber.from_json(a.to_json()) == a


@given(PRIMES, st.integers(-30, 30), st.integers(0, 6))
def test_binom_integer_argument(p, a, k):
    from math import comb
    expected = comb(a, k) if a >= 0 else (-1) ** k * comb(k - a - 1, k)
    assert close(binom_zp(PadicNumber.from_rational(a, p, None), k), Fraction(expected), 30)


# -- cyclotomic fields


def test_norm_of_zeta_minus_one(derived):
    for row in derived["norm_zeta_minus_one"]:
        z = CycloElement.zeta(row["p"], row["n"])
        nm = (z - 1).norm()
        assert nm.to_fraction() == row["norm"]


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)])
def test_zeta_relations(p, n):
    z = CycloElement.zeta(p, n)
    assert (z ** (p ** n) - 1).is_zero()
    phi = cyclotomic_poly(p, n)
    total = CycloElement.scalar(0, p, n)
    for i, c in enumerate(phi):
        total = total + z ** i * c
    assert total.is_zero()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_valuation_of_zeta_minus_one(p):
    for n in (1, 2):
        v = (CycloElement.zeta(p, n) - 1).valuation()
        assert v == Fraction(1, p ** (n - 1) * (p - 1))


cyclo_coeffs = st.lists(st.integers(-50, 50), min_size=6, max_size=6)


@given(cyclo_coeffs, cyclo_coeffs)
def test_embedding_is_a_ring_map(c1, c2):
    p = 3
    x = CycloElement.from_coefficients(c1[:2], p, 1)
    y = CycloElement.from_coefficients(c2[:2], p, 1)
    assert (x * y).embed(2).equals(x.embed(2) * y.embed(2))
    assert (x + y).embed(2).equals(x.embed(2) + y.embed(2))


@given(cyclo_coeffs)
def test_inverse_in_k2(c):
    x = CycloElement.from_coefficients(c, 3, 2)
    if x.is_zero():
        return
    one = CycloElement.scalar(1, 3, 2)
    assert (x * x.inverse() - one).lattice_valuation() >= 20


def test_galois_is_multiplicative():
    p, n = 5, 1
    x = CycloElement.from_coefficients([1, 2, 0, 3], p, n)
    y = CycloElement.from_coefficients([0, 1, 4, 1], p, n)
    for a in (2, 3, 4):
        assert (x * y).galois(a).equals(x.galois(a) * y.galois(a))
