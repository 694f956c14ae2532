"""Integer kernels shared by the scalar and series layers.

Polynomial products go through Kronecker substitution: coefficient vectors are
packed into one big integer, multiplied by CPython's native bignum routine, and
unpacked again. Precision bookkeeping for products is a (min, +) convolution,
done with numpy.
"""
import math
from functools import lru_cache

import numpy as np

INF = math.inf


def vp(n, p):
    """p-adic valuation of an integer (INF for 0)."""
    if n == 0:
        return INF
    n = abs(n)
    k = 0
    # strip large blocks first; cheap for the long runs that show up after shifts
    while n % p == 0:
        q = p
        e = 1
        while n % (q * q) == 0:
            q *= q
            e *= 2
        n //= q
        k += e
    return k


def vp_many(values, p):
    """Valuation of the gcd of a collection of integers."""
    g = math.gcd(*values) if values else 0
    return vp(g, p)


def cyclo_degree(p, n):
    return 1 if n == 0 else p ** (n - 1) * (p - 1)


def reduce_cyclotomic(vec, p, n):
    """Reduce an integer vector (ascending powers of zeta) modulo Phi_{p^n}.

    Mutates and returns ``vec[:d]``.
    """
    d = cyclo_degree(p, n)
    if len(vec) <= d:
        return vec + [0] * (d - len(vec))
    q = p ** (n - 1)
    for j in range(len(vec) - 1, d - 1, -1):
        c = vec[j]
        if c:
            vec[j] = 0
            base = j - d
            for i in range(p - 1):
                vec[base + i * q] -= c
    return vec[:d]


def _slot_bytes(bits):
    return (bits + 7) // 8 + 1


def _pack(values, wb):
    return int.from_bytes(b"".join(v.to_bytes(wb, "little") for v in values), "little")


def _unpack(r, wb, count):
    raw = r.to_bytes(wb * count, "little")
    return [int.from_bytes(raw[i * wb:(i + 1) * wb], "little") for i in range(count)]


def _split_sign(values):
    if all(v >= 0 for v in values):
        return values, None
    return [v if v > 0 else 0 for v in values], [-v if v < 0 else 0 for v in values]


def convolve(a, b):
    """Full linear convolution of two integer lists (signed allowed)."""
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if la == 1:
        x = a[0]
        return [x * y for y in b]
    if lb == 1:
        y = b[0]
        return [x * y for x in a]
    ba = max(abs(v) for v in a).bit_length()
    bb = max(abs(v) for v in b).bit_length()
    if ba == 0 or bb == 0:
        return [0] * (la + lb - 1)
    n = la + lb - 1
    wb = _slot_bytes(ba + bb + min(la, lb).bit_length())
    ap, an = _split_sign(a)
    bp, bn = _split_sign(b)
    count = n

    def prod(x, y):
        return _unpack(_pack(x, wb) * _pack(y, wb), wb, count)

    out = prod(ap, bp)
    if an is not None:
        out = [o - t for o, t in zip(out, prod(an, bp))]
    if bn is not None:
        out = [o - t for o, t in zip(out, prod(ap, bn))]
        if an is not None:
            out = [o + t for o, t in zip(out, prod(an, bn))]
    return out


def convolve_cyclo(a, b, d, p, n):
    """Product of two series whose coefficients live in Z[zeta_{p^n}].

    ``a`` and ``b`` are flat lists, ``d`` integers per series coefficient.
    Returns a flat list with ``la + lb - 1`` coefficients, each reduced.
    """
    if d == 1:
        return convolve(a, b)
    la, lb = len(a) // d, len(b) // d
    if la == 0 or lb == 0:
        return []
    stride = 2 * d - 1

    def spread(v, count):
        out = [0] * (count * stride)
        for m in range(count):
            out[m * stride:m * stride + d] = v[m * d:(m + 1) * d]
        return out

    raw = convolve(spread(a, la), spread(b, lb))
    total = la + lb - 1
    raw += [0] * (total * stride - len(raw))
    out = []
    for m in range(total):
        out.extend(reduce_cyclotomic(raw[m * stride:(m + 1) * stride], p, n))
    return out


def taylor_shift(c, sign, modulus=None):
    """Integer coefficients of f(Y + sign) from those of f(Y).

    Divide and conquer: f = lo + Y^m hi gives lo(Y+s) + (Y+s)^m hi(Y+s).
    With ``modulus`` every intermediate is reduced (the map is unimodular).
    """
    c = list(c)
    n = len(c)
    if n <= 24:
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += sign * c[j + 1]
        return [x % modulus for x in c] if modulus else c
    m = n // 2
    lo = taylor_shift(c[:m], sign, modulus)
    hi = taylor_shift(c[m:], sign, modulus)
    top = convolve(_shift_row(m, sign, modulus), hi)
    out = top[:]
    for i, x in enumerate(lo):
        out[i] += x
    out = out[:n]
    return [x % modulus for x in out] if modulus else out


@lru_cache(maxsize=256)
def _shift_row(m, sign, modulus):
    """Coefficients of (Y + sign)^m, optionally reduced."""
    row = [1] * (m + 1)
    b = 1
    for k in range(1, m + 1):
        b = b * (m - k + 1) // k
        row[k] = b
    if sign < 0:
        row = [x if (m - k) % 2 == 0 else -x for k, x in enumerate(row)]
    if modulus:
        row = [x % modulus for x in row]
    return tuple(row)


def suffix_min(caps):
    out = list(caps)
    for i in range(len(out) - 2, -1, -1):
        out[i] = min(out[i], out[i + 1])
    return out


@lru_cache(maxsize=None)
def _skew_index(la, lb):
    rows = np.arange(la)[:, None]
    cols = np.arange(lb)[None, :]
    return (rows * (la + lb - 1) + rows + cols).ravel()


def minplus(a, b):
    """(min, +) convolution: out[n] = min_{i+j=n} a[i] + b[j]."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return np.empty(0)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if la == 1:
        return a[0] + b
    if lb == 1:
        return a + b[0]
    n = la + lb - 1
    grid = np.full(la * n, INF)
    grid[_skew_index(la, lb)] = (a[:, None] + b[None, :]).ravel()
    return grid.reshape(la, n).min(axis=0)


def as_cap(x):
    """Convert a float cap back to int unless infinite."""
    return INF if x == INF else int(x)
