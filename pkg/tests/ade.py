"""Padded ADE germs for the classifier suites (not collected by pytest)."""

import random

from qutrit_sing.arith import mpq
from qutrit_sing.poly import MultiPoly, linear_change

# core germs in (u, v); the second variable is unused by the A series
CORES = {
    "A": lambda k, u, v: u ** (k + 1),
    "D4": lambda k, u, v: u ** 2 * v + v ** 3,
    "E6": lambda k, u, v: u ** 3 + v ** 4,
    "E7": lambda k, u, v: u ** 3 + u * v ** 3,
    "E8": lambda k, u, v: u ** 3 + v ** 5,
}


def padded_germ(kind, k=None, padding=0, seed=0, mix=True):
    """Core germ plus ``padding`` nondegenerate squares, optionally in skewed coordinates.

    The skew is a random unimodular rational substitution, so the Hessian
    kernel is not aligned with the coordinate axes.
    """
    core_vars = 1 if kind == "A" else 2
    n = core_vars + padding
    names = tuple(f"v{i}" for i in range(n))
    gens = MultiPoly.gens(names)
    u = gens[0]
    v = gens[1] if core_vars == 2 else None
    f = CORES[kind](k, u, v)
    rng = random.Random(f"{kind}|{k}|{padding}|{seed}")
    for i in range(core_vars, n):
        f = f + mpq(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) * gens[i] ** 2
    if mix and n > 1:
        f = linear_change(f, _unimodular(rng, n), names)
    return f


def _unimodular(rng, n):
    """Columns of a product of random elementary shears (determinant 1)."""
    M = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        a, b = rng.sample(range(n), 2)
        c = mpq(rng.choice([-2, -1, 1, 2]), rng.randint(1, 2))
        for row in M:
            row[b] = row[b] + c * row[a]
    return [[M[i][j] for i in range(n)] for j in range(n)]
