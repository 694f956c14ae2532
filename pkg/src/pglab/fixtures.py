"""Reference values computed by independent oracles (sympy, fractions, stdlib).

Nothing here calls the library's own arithmetic: each value is obtained the
slow, obvious way so tests can compare the fast code against it.
``pglab --fixtures`` writes ``build_fixtures()`` to a JSON file.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import sympy

X, T = sympy.symbols("X T")
DEFAULT_PATH = Path("tests") / "fixtures" / "derived.json"


def _coeffs(expr, order):
    """Rational Taylor/Laurent coefficients of expr at X = 0 below X^order."""
    s = sympy.series(expr, X, 0, order).removeO()
    s = sympy.expand(s)
    out = {}
    for term in sympy.Add.make_args(s):
        c, e = term.as_coeff_exponent(X)
        if c != 0:
            out[str(int(e))] = str(sympy.Rational(c))
    return out


def pinv_oracle(p, N, u):
    return pow(u, -1, p ** N)


def binom_oracle(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (a - i) / (i + 1)
    return out


def norm_zeta_minus_one(p, n):
    """Norm of zeta - 1: prod (zeta_i - 1) = (-1)^d Phi_{p^n}(1)."""
    phi = sympy.Poly(sympy.cyclotomic_poly(p ** n, T), T)
    return int((-1) ** phi.degree() * phi.eval(1))


def psi_by_matching(p, j):
    """psi((1+X)^j) by solving (1+X)^j = sum_i (1+X)^i x_i((1+X)^p - 1) for polynomials x_i."""
    deg = j // p + 1
    unknowns = [[sympy.Symbol(f"c_{i}_{m}") for m in range(deg)] for i in range(p)]
    Y = (1 + X) ** p - 1
    rhs = sum((1 + X) ** i * sum(c * Y ** m for m, c in enumerate(row))
              for i, row in enumerate(unknowns))
    eqs = sympy.Poly(sympy.expand(rhs - (1 + X) ** j), X).coeffs()
    sol = sympy.solve(eqs, [c for row in unknowns for c in row], dict=True)[0]
    x0 = sum(sol.get(c, 0) * X ** m for m, c in enumerate(unknowns[0]))
    return {str(e): str(c) for (e,), c in sympy.Poly(sympy.expand(x0), X).terms()}


def phi_psi_inverse_X_by_trace(p, order):
    """p^-1 sum_{zeta^p = 1} f(zeta(1+X) - 1) for f = 1/X, as a rational series.

    The sum over mu_p is evaluated symbolically in the field of p-th roots of
    unity and simplified before expanding.
    """
    zetas = [sympy.exp(2 * sympy.pi * sympy.I * m / p) for m in range(p)]
    total = sum(1 / (z * (1 + X) - 1) for z in zetas) / p
    total = sympy.nsimplify(sympy.simplify(sympy.expand_complex(sympy.together(total))))
    return _coeffs(sympy.cancel(total), order)


def wronskian_det(entries, k):
    """det of the (k+1) x (k+1) Wronskian of scalar functions under d/dX."""
    fs = [sympy.sympify(e.replace("^", "**"), locals={"X": X}) for e in entries]
    m = sympy.Matrix([[sympy.diff(f, X, i) for f in fs] for i in range(k + 1)])
    return str(sympy.simplify(m.det()))


def build_fixtures() -> dict:
    fx = {}
    fx["pinv"] = {"p": 3, "N": 4, "u": 2, "inverse": pinv_oracle(3, 4, 2)}
    fx["binom_half_2"] = {"p": 3, "a": "1/2", "k": 2,
                          "value": str(binom_oracle(Fraction(1, 2), 2))}
    fx["norm_zeta_minus_one"] = [{"p": p, "n": n, "norm": norm_zeta_minus_one(p, n)}
                                 for p in (2, 3, 5) for n in (1, 2)]
    fx["psi_oneplus_power"] = [{"p": p, "j": j, "psi": psi_by_matching(p, j)}
                               for p in (2, 3) for j in range(2 * p + 1)]
    fx["phi_psi_inverse_X"] = {"p": 3, "order": 6,
                               "coefficients": phi_psi_inverse_X_by_trace(3, 6)}
    fx["inverse_phi_X"] = {"p": 3, "order": 4,
                           "coefficients": _coeffs(1 / ((1 + X) ** 3 - 1), 4)}
    fx["phi_t"] = {"p": 3, "order": 10,
                   "coefficients": _coeffs(sympy.log((1 + X) ** 3), 10)}
    fx["gamma_t"] = {"p": 3, "a": 4, "order": 8,
                     "coefficients": _coeffs(sympy.log((1 + X) ** 4), 8)}
    fx["gamma_compose"] = {"p": 3, "a": 2, "b": 4,
                           "coefficients": _coeffs(sympy.expand((1 + ((1 + X) ** 4 - 1)) ** 2 - 1),
                                                   20)}
    fx["partial_oneplus_5"] = {"p": 3, "order": 10,
                               "coefficients": _coeffs((1 + X) * sympy.diff((1 + X) ** 5, X), 10)}
    fx["partial_t_oneplus_sq"] = {"p": 3, "order": 8,
                                  "coefficients": _coeffs(sympy.expand((1 + X) ** 2), 8)}
    fx["wronskian_det_1_X_X2"] = wronskian_det(["1", "X", "X^2"], 2)
    # X^2_3 = 3 X^2_1 + 5 X^2_2 for (1, X, 3 + 5X), checked by differentiation
    fs = [sympy.Integer(1), X, 3 + 5 * X]
    prol = [[sympy.diff(f, X, i) for i in range(3)] for f in fs]
    lam = (3, 5, -1)
    assert all(sympy.expand(sum(l * pr[i] for l, pr in zip(lam, prol))) == 0 for i in range(3))
    fx["wronskian_3_plus_5X"] = {"lambdas": [str(x) for x in lam]}
    a, b = sympy.symbols("a b")
    sol = sympy.solve([X * a - X ** 2, b / (X + 1) - 1], [a, b], dict=True)[0]
    fx["solve_2x2"] = {"solution": [str(sol[a]), str(sol[b])]}
    fx["delta_inverse_X_valuation"] = [
        # v(1/(zeta - 1)) = -v(Norm(zeta - 1)) / [K_1 : Q_p]
        {"p": p, "valuation": str(-Fraction(
            sympy.multiplicity(p, abs(norm_zeta_minus_one(p, 1))), p - 1))} for p in (2, 3, 5)]
    return fx


def write_fixtures(path=DEFAULT_PATH) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(build_fixtures(), indent=2, sort_keys=True) + "\n")
    return path
