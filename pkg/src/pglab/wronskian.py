"""Constant relations from prolongations over a differential field H.

If the order-(k-1) prolongations of x_1..x_s are independent over H and the
order-k prolongations of x_1..x_{s+1} are dependent, the dependence can be
chosen with constant coefficients. ``extract_constant_relation`` follows the
argument: solve with lambda_{s+1} = -1, then check every lambda is constant.

Two fields are provided: exact rational functions Q(X) with d/dX, and
truncated Laurent series over Q_p with (1+X) d/dX, where zero tests are
made against a valuation threshold and may come back undecided.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy
from sympy import QQ

from ._kernel import INF
from .errors import DomainError, HypothesisFailure, Indeterminate, PglabError
from .padic import DEFAULT_PRECISION, PadicNumber
from .series import LaurentSeries

DEFAULT_TAU_SLACK = 4


# ---------------------------------------------------------------------------
# fields


class RationalFunctionField:
    """Q(X) with the derivation d/dX."""
    name = "QQ(X)"
    exact = True

    def __init__(self):
        self.X = sympy.Symbol("X")
        self.K = QQ.frac_field(self.X)
        self.gen = self.K.gens[0] if hasattr(self.K, "gens") else self.K.from_sympy(self.X)
        self.zero = self.K.zero
        self.one = self.K.one

    def element(self, x):
        if getattr(x, "field", None) is self.K.field:
            return x
        if isinstance(x, str):
            x = sympy.sympify(x.replace("^", "**"), locals={"X": self.X})
        elif isinstance(x, Fraction):
            x = sympy.Rational(x.numerator, x.denominator)
        return self.K.from_sympy(sympy.sympify(x))

    def is_zero(self, x):
        return x == self.zero

    def derive(self, x):
        return x.diff(self.gen)

    def inverse(self, x):
        return self.one / x

    def constant_value(self, x) -> Fraction:
        num, den = x.numer, x.denom
        if num.degree() > 0 or den.degree() > 0:
            raise DomainError(f"{self.to_text(x)} is not a constant")
        c = Fraction(int(num.LC.numerator), int(num.LC.denominator)) if num else Fraction(0)
        d = Fraction(int(den.LC.numerator), int(den.LC.denominator))
        return c / d

    def from_constant(self, c):
        return self.element(Fraction(c))

    def to_text(self, x):
        return str(self.K.to_sympy(x))

    def size(self, x):
        return x.numer.degree()

    def rank(self, columns):
        return _bareiss_rank(self, columns)


class SeriesField:
    """Truncated Laurent series over Q_p with d = (1+X) d/dX.

    An entry counts as zero when every coefficient is at or above ``tau``;
    it is nonzero when some coefficient is known to be nonzero below
    ``tau``; anything else is undecided.
    """
    name = "series"
    exact = False

    def __init__(self, p, tau=None, order=32, prec=DEFAULT_PRECISION):
        self.p = p
        self.prec = prec
        self.tau = prec - DEFAULT_TAU_SLACK if tau is None else tau
        self.order = order
        self.zero = LaurentSeries.zero(p, order)
        self.one = LaurentSeries.one(p, order)

    def element(self, x):
        if isinstance(x, LaurentSeries):
            return x
        if isinstance(x, str):
            return LaurentSeries.from_expression(x, self.p, self.order, self.prec)
        return LaurentSeries.from_coefficients([Fraction(x)], self.p, 0, self.order, self.prec)

    def zero_state(self, x):
        """True (zero), False (nonzero) or None (undecided)."""
        known_nonzero = False
        for v, cap in zip(x.coefficient_valuations(), x.caps):
            if v < self.tau:
                if v < cap:
                    known_nonzero = True
                else:
                    return None if not known_nonzero else False
        if known_nonzero:
            return False
        return True

    def is_zero(self, x):
        state = self.zero_state(x)
        if state is None:
            raise Indeterminate(f"cannot decide whether an entry vanishes below valuation {self.tau}")
        return state

    def derive(self, x):
        return x.partial()

    def inverse(self, x):
        return x.invert(order=self.order)

    def constant_value(self, x):
        return x.coefficient(0)

    def from_constant(self, c):
        if isinstance(c, PadicNumber):
            return LaurentSeries._from_scalars(self.p, 0, 0, self.order, [c])
        return self.element(c)

    def to_text(self, x):
        return x.to_text()

    def size(self, x):
        return x.valuation()

    def rank(self, columns):
        return _pivot_rank(self, columns)


# ---------------------------------------------------------------------------
# linear algebra


def _bareiss_rank(H: RationalFunctionField, columns):
    """Rank by fraction-free (Bareiss) elimination on denominator-cleared columns."""
    if not columns:
        return 0
    polys = []
    for col in columns:
        den = col[0].denom
        for x in col[1:]:
            den = den.lcm(x.denom)
        polys.append([x.numer * den.exquo(x.denom) for x in col])
    m = [list(r) for r in zip(*polys)]  # rows: coordinates
    rows, cols = len(m), len(m[0])
    prev = None
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                val = m[r][c] * m[i][j] - m[i][c] * m[r][j]
                m[i][j] = val if prev is None else val.exquo(prev)
            m[i][c] = m[i][c] - m[i][c]
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def _pivot_rank(H: SeriesField, columns):
    """Rank with valuation pivoting; raises Indeterminate when undecidable."""
    if not columns:
        return 0
    m = [list(r) for r in zip(*columns)]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        best, best_v, undecided = None, INF, False
        for i in range(r, rows):
            state = H.zero_state(m[i][c])
            if state is None:
                undecided = True
            elif state is False and m[i][c].valuation() < best_v:
                best, best_v = i, m[i][c].valuation()
        if best is None:
            if undecided:
                raise Indeterminate(f"pivot in column {c} is undecided at valuation {H.tau}")
            continue
        m[r], m[best] = m[best], m[r]
        inv = H.inverse(m[r][c])
        for i in range(r + 1, rows):
            f = m[i][c] * inv
            for j in range(c, cols):
                m[i][j] = m[i][j] - f * m[r][j]
        r += 1
        if r == rows:
            break
    return r


def solve_in_H(H, vectors: Sequence[Sequence], target: Sequence):
    """Coefficients c with sum c_i vectors[i] = target (unique solution required)."""
    n = len(vectors)
    if n == 0:
        raise DomainError("no vectors")
    rows = len(target)
    if any(len(v) != rows for v in vectors):
        raise DomainError("vector length mismatch")
    aug = [[vectors[j][i] for j in range(n)] + [target[i]] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        if H.exact:
            piv = next((i for i in range(r, rows) if not H.is_zero(aug[i][c])), None)
        else:
            best_v = INF
            for i in range(r, rows):
                if not H.is_zero(aug[i][c]) and aug[i][c].valuation() < best_v:
                    piv, best_v = i, aug[i][c].valuation()
        if piv is None:
            raise DomainError("singular system: the vectors are dependent over H")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = H.inverse(aug[r][c])
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and not H.is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if not H.is_zero(aug[i][n]):
            raise DomainError("inconsistent system: target is not in the span")
    return [aug[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# prolongations


@dataclass
class ProlongationSystem:
    """Vectors x_1..x_{s+1} in H^v and a derivation order k."""
    field: object
    vectors: list
    k: int
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(self.vectors) < 2:
            raise DomainError("need s + 1 >= 2 vectors")
        if self.k < 1:
            raise DomainError("derivation order k must be >= 1")
        v = len(self.vectors[0])
        if v < 1 or any(len(x) != v for x in self.vectors):
            raise DomainError("all vectors must have the same positive length")
        self.vectors = [[self.field.element(e) for e in x] for x in self.vectors]

    @property
    def s(self):
        return len(self.vectors) - 1

    @property
    def v(self):
        return len(self.vectors[0])

    def derivatives(self, w, j):
        """The j-th derivative of x_w (cached)."""
        key = (w, j)
        if key not in self._cache:
            if j == 0:
                self._cache[key] = list(self.vectors[w])
            else:
                self._cache[key] = [self.field.derive(e) for e in self.derivatives(w, j - 1)]
        return self._cache[key]

    def prolongation(self, w, j):
        """X^j_w = (x_w, d x_w, ..., d^j x_w), flattened."""
        out = []
        for i in range(j + 1):
            out.extend(self.derivatives(w, i))
        return out


@dataclass(frozen=True)
class Hypotheses:
    h1: bool | None
    h2: bool | None

    @property
    def ok(self):
        return bool(self.h1) and bool(self.h2)

    def failed(self):
        return [name for name, val in (("h1", self.h1), ("h2", self.h2)) if not val]


def check_hypotheses(system: ProlongationSystem) -> Hypotheses:
    """h1: X^(k-1)_1..X^(k-1)_s independent; h2: X^k_1..X^k_(s+1) dependent.

    With the series field an undecidable rank gives None for that hypothesis.
    """
    H, s, k = system.field, system.s, system.k

    def rank_or_none(cols):
        try:
            return H.rank(cols)
        except Indeterminate:
            return None

    r1 = rank_or_none([system.prolongation(w, k - 1) for w in range(s)])
    r2 = rank_or_none([system.prolongation(w, k) for w in range(s + 1)])
    return Hypotheses(None if r1 is None else r1 == s, None if r2 is None else r2 < s + 1)


@dataclass
class RelationCertificate:
    """Constants lambda with sum lambda_w x_w = 0."""
    lambdas: list
    residual: object
    provenance: dict

    def to_json(self, H=None):
        def show(x):
            if isinstance(x, Fraction):
                return str(x)
            if hasattr(x, "to_json"):
                return x.to_json()
            return str(x)
        return {"lambdas": [show(x) for x in self.lambdas],
                "residual": None if self.residual == INF else self.residual,
                "provenance": self.provenance}


def extract_constant_relation(system: ProlongationSystem) -> RelationCertificate:
    H = system.field
    hyp = check_hypotheses(system)
    if hyp.h1 is None or hyp.h2 is None:
        raise Indeterminate("rank undecided at the working threshold")
    if not hyp.ok:
        raise HypothesisFailure(f"hypotheses not satisfied: {', '.join(hyp.failed())}",
                                failed=hyp.failed())
    s, k = system.s, system.k
    basis = [system.prolongation(w, k) for w in range(s)]
    lam = solve_in_H(H, basis, system.prolongation(s, k))
    # sum d(lambda_w) X^(k-1)_w = 0 and h1 force d(lambda_w) = 0
    for x in lam:
        state = H.is_zero(H.derive(x))
        if not state:
            raise PglabError("solution is not constant although both hypotheses hold")
    if H.exact:
        consts = [H.constant_value(x) for x in lam] + [Fraction(-1)]
    else:
        consts = [H.constant_value(x) for x in lam] + [-H.constant_value(H.one)]
    residual = _residual(H, system, consts)
    prov = {"field": H.name, "s": s, "k": k, "v": system.v, "h1": True, "h2": True,
            "normalization": "lambda_{s+1} = -1"}
    if not H.exact:
        prov["tau"] = H.tau
        prov["order"] = H.order
    return RelationCertificate(consts, residual, prov)


def _residual(H, system, consts):
    """Exact field: largest numerator degree of sum lambda_w x_w (None when it is 0).
    Series field: smallest coordinate valuation."""
    sizes = []
    for i in range(system.v):
        acc = H.zero
        for lam, x in zip(consts, system.vectors):
            acc = acc + H.from_constant(lam) * x[i]
        if H.exact:
            if not H.is_zero(acc):
                sizes.append(H.size(acc))
        else:
            sizes.append(H.size(acc))
    if H.exact:
        return max(sizes) if sizes else None
    return min(sizes)


def verify_certificate(system: ProlongationSystem, cert: RelationCertificate) -> bool:
    """Exact check of sum lambda x = 0 and d(lambda) = 0 (exact field only)."""
    H = system.field
    if not H.exact:
        raise DomainError("exact verification needs the rational function field")
    lams = [H.from_constant(c) for c in cert.lambdas]
    if all(H.is_zero(x) for x in lams):
        return False
    if not all(H.is_zero(H.derive(x)) for x in lams):
        return False
    for i in range(system.v):
        acc = H.zero
        for lam, x in zip(lams, system.vectors):
            acc = acc + lam * x[i]
        if not H.is_zero(acc):
            return False
    return True
