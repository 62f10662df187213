"""Gröbner bases over Q(i) and the quotient-algebra data built on them.

The Buchberger loop works on raw ``{exponent tuple: coefficient}`` dicts and
only wraps results in :class:`~qutrit_sing.poly.MultiPoly` at the boundary.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .arith import mpq
from .poly import MultiPoly, VariableMismatch

__all__ = [
    "TermOrder",
    "IdealBasis",
    "Staircase",
    "NotZeroDimensional",
    "buchberger",
    "normal_form",
    "krull_dimension",
    "quotient_basis",
    "mult_matrix",
    "char_poly",
    "local_algebra_dim",
]


class NotZeroDimensional(ValueError):
    """The ideal has a positive-dimensional (or empty) variety."""


def _degrevlex(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


def _lex(e):
    return e


def _negdeg(e):
    # local degree order: the lowest-degree term leads
    return (-sum(e),) + tuple(-x for x in reversed(e))


_ORDER_KEYS = {"degrevlex": _degrevlex, "lex": _lex, "negdegrevlex": _negdeg}


class _KeyCache(dict):
    __slots__ = ("fn",)

    def __init__(self, fn):
        super().__init__()
        self.fn = fn

    def __missing__(self, m):
        k = self.fn(m)
        self[m] = k
        return k


@dataclass(frozen=True)
class TermOrder:
    kind: str
    variables: tuple

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex"):
            raise ValueError(f"unsupported term order {self.kind!r}")
        object.__setattr__(self, "variables", tuple(self.variables))

    def key(self, monomial):
        return _ORDER_KEYS[self.kind](tuple(monomial))

    @classmethod
    def degrevlex(cls, variables):
        return cls("degrevlex", tuple(variables))

    @classmethod
    def lex(cls, variables):
        return cls("lex", tuple(variables))


@dataclass(frozen=True)
class Staircase:
    standard_monomials: tuple

    def __len__(self):
        return len(self.standard_monomials)

    def index(self, m):
        return self.standard_monomials.index(m)


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple
    order: TermOrder
    reduced: bool = True
    _lms: tuple = field(default=(), repr=False, compare=False)

    @property
    def variables(self):
        return self.order.variables

    @property
    def leading_monomials(self):
        return self._lms

    def is_unit(self):
        """True when the ideal is the whole ring."""
        return any(not any(m) for m in self._lms)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


# -- raw dict machinery ------------------------------------------------------

def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _monic(p, lm):
    c = p[lm]
    if c == 1:
        return p
    inv = 1 / c
    return {m: v * inv for m, v in p.items()}


def _reduce(p, basis, key, full=True, truncate=None):
    """Reduce ``p`` by ``basis`` = list of (lm, monic dict).

    Returns the remainder dict.  With ``truncate`` set, every term of degree
    >= truncate is dropped on the fly.
    """
    p = dict(p)
    # max-heap via negated keys; entries whose monomial left ``p`` are stale
    heap = [(tuple(-k for k in key(m)), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    while p:
        m = heapq.heappop(heap)[1]
        c = p.pop(m, None)
        if c is None:
            continue
        for lm, g in basis:
            if _divides(lm, m):
                q = tuple(x - y for x, y in zip(m, lm))
                for gm, gc in g.items():
                    if gm == lm:
                        continue
                    nm = tuple(x + y for x, y in zip(q, gm))
                    if truncate is not None and sum(nm) >= truncate:
                        continue
                    v = p.get(nm)
                    if v is None:
                        p[nm] = -c * gc
                        heapq.heappush(heap, (tuple(-k for k in key(nm)), nm))
                    else:
                        v = v - c * gc
                        if v:
                            p[nm] = v
                        else:
                            del p[nm]
                break
        else:
            rem[m] = c
            if not full:
                rem.update(p)
                return rem
    return rem


def _spoly(f, lmf, g, lmg, truncate=None):
    lcm = _lcm(lmf, lmg)
    qf = tuple(x - y for x, y in zip(lcm, lmf))
    qg = tuple(x - y for x, y in zip(lcm, lmg))
    out = {}
    for m, c in f.items():
        if m == lmf:
            continue
        nm = tuple(x + y for x, y in zip(qf, m))
        if truncate is not None and sum(nm) >= truncate:
            continue
        out[nm] = c
    for m, c in g.items():
        if m == lmg:
            continue
        nm = tuple(x + y for x, y in zip(qg, m))
        if truncate is not None and sum(nm) >= truncate:
            continue
        v = out.get(nm)
        if v is None:
            out[nm] = -c
        else:
            v = v - c
            if v:
                out[nm] = v
            else:
                del out[nm]
    return out


def _buchberger_raw(polys, key, truncate=None, use_product=True):
    """Core loop with Gebauer–Möller pair management.

    ``polys`` are nonzero raw dicts.  Returns a list of (lm, monic dict)
    forming a minimal basis, or ``None`` if a unit was found.
    """
    store = []          # all basis polynomials ever added: (lm, dict)
    active = []         # indices into store forming the current basis
    pairs = []          # (lcm, i, j)

    def lcm_key(pair):
        return key(pair[0]), pair[1], pair[2]

    def update(h):
        lmh = store[h][0]
        cand = [(_lcm(lmh, store[g][0]), g) for g in active]
        kept = []
        for idx, (l1, g1) in enumerate(cand):
            if use_product and _coprime(lmh, store[g1][0]):
                kept.append((l1, g1, True))
                continue
            redundant = False
            for l2, g2 in cand[idx + 1:]:
                if _divides(l2, l1):
                    redundant = True
                    break
            if not redundant:
                for l2, g2, _ in kept:
                    if _divides(l2, l1):
                        redundant = True
                        break
            if not redundant:
                kept.append((l1, g1, False))
        # equal-lcm duplicates were kept once by the chain test above
        new_pairs = [(l, g, h) for l, g, cop in kept if not cop]
        survivors = []
        for l, i, j in pairs:
            if _divides(lmh, l):
                li = _lcm(store[i][0], lmh)
                lj = _lcm(store[j][0], lmh)
                if li != l and lj != l:
                    continue
            survivors.append((l, i, j))
        pairs[:] = survivors + new_pairs
        active[:] = [g for g in active if not _divides(lmh, store[g][0])] + [h]

    basis_view = lambda: [store[g] for g in active]  # noqa: E731

    # seed: interreduce inputs in increasing order
    for p in sorted(polys, key=lambda d: key(max(d, key=key))):
        r = _reduce(p, basis_view(), key, truncate=truncate)
        if not r:
            continue
        lm = max(r, key=key)
        if not any(lm):
            return None
        store.append((lm, _monic(r, lm)))
        update(len(store) - 1)

    while pairs:
        pairs.sort(key=lcm_key)
        l, i, j = pairs.pop(0)
        s = _spoly(store[i][1], store[i][0], store[j][1], store[j][0], truncate)
        if not s:
            continue
        r = _reduce(s, basis_view(), key, truncate=truncate)
        if not r:
            continue
        lm = max(r, key=key)
        if not any(lm):
            return None
        store.append((lm, _monic(r, lm)))
        update(len(store) - 1)

    return basis_view()


def _interreduce(basis, key):
    basis = sorted(basis, key=lambda t: key(t[0]))
    out = []
    for idx, (lm, g) in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        tail = {m: c for m, c in g.items() if m != lm}
        tail = _reduce(tail, others, key)
        tail[lm] = mpq(1)
        out.append((lm, tail))
    return out


def _to_raw(gens, variables):
    raw = []
    for g in gens:
        if g.variables != variables:
            raise VariableMismatch("generators live in different rings")
        if g.terms:
            raw.append(dict(g.terms))
    return raw


def _wrap(raw_basis, order):
    variables = order.variables
    gens = tuple(MultiPoly._raw(variables, dict(g)) for _, g in raw_basis)
    lms = tuple(lm for lm, _ in raw_basis)
    return IdealBasis(gens, order, True, lms)


def buchberger(gens: Sequence[MultiPoly], order: TermOrder | str = "degrevlex") -> IdealBasis:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    The basis is monic and sorted by increasing leading monomial, so it is a
    canonical representative of the ideal.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("empty generator list")
    if isinstance(order, str):
        order = TermOrder(order, gens[0].variables)
    variables = order.variables
    key = _KeyCache(_ORDER_KEYS[order.kind]).__getitem__
    raw = _to_raw(gens, variables)
    n = len(variables)
    if not raw:
        return IdealBasis((), order, True, ())
    basis = _buchberger_raw(raw, key)
    if basis is None:
        one = (0,) * n
        return _wrap([(one, {one: mpq(1)})], order)
    return _wrap(_interreduce(basis, key), order)


def normal_form(p: MultiPoly, basis: IdealBasis) -> MultiPoly:
    if p.variables != basis.variables:
        raise VariableMismatch("polynomial and basis live in different rings")
    key = _KeyCache(_ORDER_KEYS[basis.order.kind]).__getitem__
    raw = list(zip(basis.leading_monomials, (g.terms for g in basis.generators)))
    return MultiPoly._raw(p.variables, _reduce(p.terms, raw, key))


def krull_dimension(basis: IdealBasis) -> int:
    """Dimension of the affine variety; -1 when the ideal is the unit ideal."""
    lms = basis.leading_monomials
    n = len(basis.variables)
    if not lms:
        return n
    if basis.is_unit():
        return -1
    supports = [sum(1 << i for i, e in enumerate(m) if e) for m in lms]
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        if all(s & ~mask for s in supports):
            best = size
    return best


def quotient_basis(basis: IdealBasis) -> Staircase:
    """Standard monomials of a zero-dimensional ideal, increasing in degrevlex."""
    if krull_dimension(basis) > 0:
        raise NotZeroDimensional("ideal has a positive-dimensional variety")
    lms = basis.leading_monomials
    n = len(basis.variables)
    if basis.is_unit():
        return Staircase(())
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                e = list(m)
                e[i] += 1
                e = tuple(e)
                if e in seen or any(_divides(lm, e) for lm in lms):
                    continue
                seen.add(e)
                nxt.append(e)
        frontier = nxt
    return Staircase(tuple(sorted(seen, key=_degrevlex)))


def mult_matrix(basis: IdealBasis, u: MultiPoly, staircase: Staircase | None = None):
    """Matrix of multiplication by ``u`` on the quotient, in the staircase basis.

    Column ``j`` holds the coordinates of ``u * b_j``.
    """
    if staircase is None:
        staircase = quotient_basis(basis)
    mons = staircase.standard_monomials
    index = {m: i for i, m in enumerate(mons)}
    key = _KeyCache(_ORDER_KEYS[basis.order.kind]).__getitem__
    raw = list(zip(basis.leading_monomials, (g.terms for g in basis.generators)))
    size = len(mons)
    mat = [[mpq(0)] * size for _ in range(size)]
    for j, b in enumerate(mons):
        prod = {}
        for m, c in u.terms.items():
            nm = tuple(x + y for x, y in zip(m, b))
            prod[nm] = prod.get(nm, 0) + c
        prod = {m: c for m, c in prod.items() if c}
        nf = _reduce(prod, raw, key)
        for m, c in nf.items():
            mat[index[m]][j] = c
    return mat


def char_poly(M, var: str = "t") -> MultiPoly:
    """Characteristic polynomial det(t*I - M) by Faddeev–LeVerrier."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix is not square")
    coeffs = [mpq(0)] * (n + 1)
    coeffs[n] = mpq(1)
    if n:
        N = [[mpq(0)] * n for _ in range(n)]   # M_0 = 0
        c = mpq(1)
        for k in range(1, n + 1):
            # M_k = M @ M_{k-1} + c_{n-k+1} I
            prev = N
            N = [[sum((M[i][l] * prev[l][j] for l in range(n) if M[i][l] and prev[l][j]), mpq(0))
                  for j in range(n)] for i in range(n)]
            for i in range(n):
                N[i][i] = N[i][i] + c
            tr = sum((sum((M[i][l] * N[l][i] for l in range(n) if M[i][l] and N[l][i]), mpq(0))
                      for i in range(n)), mpq(0))
            c = -tr / k
            coeffs[n - k] = c
    return MultiPoly._raw((var,), {(d,): c for d, c in enumerate(coeffs) if c})


# -- local algebra -----------------------------------------------------------

def _monomials_below(n, N):
    """All exponent tuples in n variables of total degree < N."""
    out = []
    for d in range(N):
        for combo in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def local_quotient_dim(gens: Sequence[MultiPoly], N: int) -> int:
    """dim K[x]/(gens + m^N), via a truncated standard basis in a local order."""
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].nvars
    key = _KeyCache(_negdeg).__getitem__
    raw = []
    for g in gens:
        t = {m: c for m, c in g.terms.items() if sum(m) < N}
        if t:
            raw.append(t)
    if not raw:
        return len(_monomials_below(n, N))
    basis = _buchberger_raw(raw, key, truncate=N, use_product=False)
    if basis is None:
        return 0
    lms = [lm for lm, _ in basis]
    return sum(1 for m in _monomials_below(n, N) if not any(_divides(lm, m) for lm in lms))


def local_algebra_dim(gens: Sequence[MultiPoly], max_degree: int) -> int | None:
    """Length of the local algebra at the origin, or ``None`` if unstable.

    Computes dim K[x]/(gens + m^N) for N = 1, 2, ... and returns the value
    once two consecutive truncations agree.  ``None`` signals that no
    stabilization happened up to ``max_degree``.
    """
    prev = None
    for N in range(1, max_degree + 1):
        d = local_quotient_dim(gens, N)
        if prev is not None and d == prev:
            return d
        prev = d
    return None
