"""Exact dense univariate polynomials over Q(i), as coefficient lists (low to high)."""

from __future__ import annotations

from .arith import mpq
from .poly import MultiPoly

__all__ = ["from_multipoly", "to_multipoly", "strip", "derivative", "divmod_poly", "gcd",
           "squarefree_decomposition", "squarefree_part", "monic", "horner"]


def strip(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def from_multipoly(p: MultiPoly):
    if p.nvars != 1:
        raise ValueError("expected a univariate polynomial")
    deg = p.total_degree()
    out = [mpq(0)] * (deg + 1)
    for (d,), c in p.terms.items():
        out[d] = c
    return out


def to_multipoly(a, var="t"):
    return MultiPoly._raw((var,), {(d,): c for d, c in enumerate(a) if c})


def derivative(a):
    return strip([c * k for k, c in enumerate(a)][1:])


def monic(a):
    a = strip(a)
    if not a:
        return a
    lc = a[-1]
    if lc == 1:
        return a
    inv = 1 / lc
    return [c * inv for c in a]


def divmod_poly(a, b):
    a = strip(a)
    b = strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    inv = 1 / b[-1]
    r = list(a)
    q = [mpq(0)] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] * inv
        q[k] = c
        if c:
            for i, bc in enumerate(b):
                r[k + i] = r[k + i] - c * bc
    return strip(q), strip(r[: len(b) - 1])


def gcd(a, b):
    a, b = strip(a), strip(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_decomposition(a):
    """Yun's algorithm: list of (factor, multiplicity) with monic square-free factors."""
    a = monic(a)
    if len(a) <= 1:
        return []
    out = []
    da = derivative(a)
    g = gcd(a, da)
    b = divmod_poly(a, g)[0]
    c = divmod_poly(da, g)[0]
    d = strip([x - y for x, y in _pad(c, derivative(b))])
    k = 1
    while len(b) > 1:
        h = gcd(b, d)
        if len(h) > 1:
            out.append((h, k))
        b = divmod_poly(b, h)[0]
        c = divmod_poly(d, h)[0]
        d = strip([x - y for x, y in _pad(c, derivative(b))])
        k += 1
    return out


def squarefree_part(a):
    a = monic(a)
    return monic(divmod_poly(a, gcd(a, derivative(a)))[0])


def _pad(a, b):
    n = max(len(a), len(b))
    zero = mpq(0)
    return zip(list(a) + [zero] * (n - len(a)), list(b) + [zero] * (n - len(b)))


def horner(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc
