"""Sparse multivariate polynomials and truncated power series.

A monomial is a plain tuple of exponents indexed by the polynomial's variable
list.  Coefficients are exact field elements from :mod:`qutrit_sing.arith`;
numeric (``complex``) coefficients are allowed only in polynomials produced by
:meth:`MultiPoly.to_numeric`, which is how the numeric stage opts in.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .arith import mpq, to_field, to_complex, is_exact

__all__ = [
    "VariableMismatch",
    "MultiPoly",
    "TruncatedSeries",
    "degrevlex_key",
    "poly_arith",
    "differentiate",
    "evaluate",
    "substitute",
    "translate",
    "linear_change",
]


class VariableMismatch(ValueError):
    """Operands live in different polynomial rings, or a variable is unknown."""


def degrevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def _add_into(acc: dict, terms: Mapping, sign=1):
    for m, c in terms.items():
        v = acc.get(m)
        if v is None:
            acc[m] = c if sign == 1 else -c
        else:
            v = v + c if sign == 1 else v - c
            if v:
                acc[m] = v
            else:
                del acc[m]


def _mul_terms(a: Mapping, b: Mapping, maxdeg=None) -> dict:
    out = {}
    if maxdeg is None:
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                v = out.get(m)
                v = ca * cb if v is None else v + ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out
    bd = [(mb, cb, sum(mb)) for mb, cb in b.items()]
    for ma, ca in a.items():
        da = sum(ma)
        if da > maxdeg:
            continue
        for mb, cb, db in bd:
            if da + db > maxdeg:
                continue
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m)
            v = ca * cb if v is None else v + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


class MultiPoly:
    """Polynomial in a fixed, ordered variable list.

    ``terms`` maps exponent tuples to nonzero coefficients.  Instances are
    treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(x) for x in m)
            if len(m) != n or any(x < 0 for x in m):
                raise ValueError(f"bad exponent vector {m} for {n} variables")
            c = c if isinstance(c, complex) else to_field(c)
            if c:
                clean[m] = clean[m] + c if m in clean else c
                if not clean[m]:
                    del clean[m]
        self.terms = clean

    @classmethod
    def _raw(cls, variables, terms):
        p = object.__new__(cls)
        p.variables = variables
        p.terms = terms
        return p

    @classmethod
    def zero(cls, variables):
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        c = to_field(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise VariableMismatch(f"unknown variable {name!r}") from None
        e = [0] * len(variables)
        e[i] = 1
        return cls._raw(variables, {tuple(e): mpq(1)})

    @classmethod
    def gens(cls, variables):
        return [cls.var(variables, v) for v in variables]

    # ring structure -------------------------------------------------------

    def _check(self, other):
        if other.variables != self.variables:
            raise VariableMismatch(
                f"variable lists differ: {self.variables} vs {other.variables}")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, complex):
            return MultiPoly._raw(self.variables, {(0,) * len(self.variables): other} if other else {})
        return MultiPoly.constant(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms)
        return MultiPoly._raw(self.variables, acc)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        acc = dict(self.terms)
        _add_into(acc, other.terms, -1)
        return MultiPoly._raw(self.variables, acc)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return MultiPoly._raw(self.variables, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        other = self._lift(other)
        return MultiPoly._raw(self.variables, _mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        if not c:
            return MultiPoly.zero(self.variables)
        return MultiPoly._raw(self.variables, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        try:
            return self == self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # inspection -----------------------------------------------------------

    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        """Degree of the polynomial; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self):
        """Lowest total degree of a term; -1 for zero."""
        return min((sum(m) for m in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, mpq(0))

    def coefficient(self, monomial):
        return self.terms.get(tuple(monomial), mpq(0))

    def homogeneous_part(self, d):
        return MultiPoly._raw(self.variables, {m: c for m, c in self.terms.items() if sum(m) == d})

    def truncate(self, d):
        """Drop every term of total degree above ``d``."""
        return MultiPoly._raw(self.variables, {m: c for m, c in self.terms.items() if sum(m) <= d})

    def sorted_terms(self, key=degrevlex_key):
        """Terms in decreasing order under ``key`` (degrevlex by default)."""
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def is_exact(self):
        return all(is_exact(c) for c in self.terms.values())

    def to_numeric(self):
        return MultiPoly._raw(self.variables, {m: to_complex(c) for m, c in self.terms.items()})

    def degree_in(self, name):
        i = self.variables.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # calculus -------------------------------------------------------------

    def diff(self, name):
        try:
            i = self.variables.index(name)
        except ValueError:
            raise VariableMismatch(f"unknown variable {name!r}") from None
        out = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                e = list(m)
                e[i] = k - 1
                out[tuple(e)] = c * k
        return MultiPoly._raw(self.variables, out)

    def gradient(self):
        return [self.diff(v) for v in self.variables]

    def hessian(self):
        g = self.gradient()
        return [[gi.diff(v) for v in self.variables] for gi in g]

    def __call__(self, *point):
        return evaluate(self, point)


def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    p._check(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


def differentiate(p: MultiPoly, v: str) -> MultiPoly:
    return p.diff(v)


def evaluate(p: MultiPoly, point: Sequence):
    """Evaluate at a point of exact field elements or complex floats."""
    if len(point) != p.nvars:
        raise VariableMismatch(f"point has {len(point)} entries, ring has {p.nvars} variables")
    numeric = any(isinstance(x, (complex, float)) for x in point) or not p.is_exact()
    if numeric:
        pt = [complex(x) if isinstance(x, (complex, float)) else to_complex(x) for x in point]
        coeff = to_complex
    else:
        pt = [to_field(x) for x in point]
        coeff = None
    powers = [dict() for _ in pt]
    total = 0j if numeric else mpq(0)
    for m, c in p.terms.items():
        t = coeff(c) if numeric else c
        for i, k in enumerate(m):
            if k:
                pw = powers[i].get(k)
                if pw is None:
                    pw = pt[i] ** k
                    powers[i][k] = pw
                t = t * pw
        total = total + t
    return total


class TruncatedSeries:
    """Polynomial body with every term of total degree above ``degree`` dropped."""

    __slots__ = ("body", "degree")

    def __init__(self, body: MultiPoly, degree: int):
        self.body = body.truncate(degree)
        self.degree = int(degree)

    @classmethod
    def _raw(cls, body, degree):
        s = object.__new__(cls)
        s.body = body
        s.degree = degree
        return s

    @property
    def variables(self):
        return self.body.variables

    def _other(self, other):
        if isinstance(other, TruncatedSeries):
            self.body._check(other.body)
            return other.body, min(self.degree, other.degree)
        if isinstance(other, MultiPoly):
            self.body._check(other)
            return other.truncate(self.degree), self.degree
        return self.body._lift(other), self.degree

    def __add__(self, other):
        b, n = self._other(other)
        return TruncatedSeries((self.body + b), n)

    __radd__ = __add__

    def __sub__(self, other):
        b, n = self._other(other)
        return TruncatedSeries((self.body - b), n)

    def __rsub__(self, other):
        b, n = self._other(other)
        return TruncatedSeries((b - self.body), n)

    def __neg__(self):
        return TruncatedSeries._raw(-self.body, self.degree)

    def __mul__(self, other):
        b, n = self._other(other)
        terms = _mul_terms(self.body.terms, b.terms, n)
        return TruncatedSeries._raw(MultiPoly._raw(self.variables, terms), n)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = TruncatedSeries._raw(MultiPoly.constant(self.variables, 1), self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.degree == other.degree and self.body == other.body
        return NotImplemented

    def order(self):
        return self.body.order()

    def __repr__(self):
        return f"TruncatedSeries({self.body}, degree={self.degree})"


def substitute(p: MultiPoly, bindings: Mapping[str, TruncatedSeries | MultiPoly],
               variables: Sequence[str] | None = None,
               degree: int | None = None) -> TruncatedSeries:
    """Compose ``p`` with the given series, truncating at the ambient degree.

    Unbound variables of ``p`` map to the same-named target variable.  The
    target ring and truncation degree come from the bindings unless given.
    """
    series = {}
    for name, s in bindings.items():
        if name not in p.variables:
            raise VariableMismatch(f"binding for unknown variable {name!r}")
        series[name] = s
    if variables is None:
        if not series:
            variables = p.variables
        else:
            variables = next(iter(series.values())).variables
    variables = tuple(variables)
    if degree is None:
        degs = [s.degree for s in series.values() if isinstance(s, TruncatedSeries)]
        degree = min(degs) if degs else max(p.total_degree(), 0)
    images = []
    for name in p.variables:
        s = series.get(name)
        if s is None:
            if name not in variables:
                raise VariableMismatch(f"unbound variable {name!r} is absent from the target ring")
            s = MultiPoly.var(variables, name)
        body = s.body if isinstance(s, TruncatedSeries) else s
        if body.variables != variables:
            raise VariableMismatch("bound series do not share the target variable list")
        images.append(body.terms)

    # unit is a plain int so complex coefficients never meet mpq
    cache = [{0: {(0,) * len(variables): 1}, 1: images[i]} for i in range(p.nvars)]

    def power(i, k):
        c = cache[i]
        if k not in c:
            half = power(i, k // 2)
            sq = _mul_terms(half, half, degree)
            c[k] = _mul_terms(sq, c[1], degree) if k % 2 else sq
        return c[k]

    acc = {}
    for m, coef in p.terms.items():
        t = {(0,) * len(variables): coef}
        for i, k in enumerate(m):
            if k:
                t = _mul_terms(t, power(i, k), degree)
                if not t:
                    break
        _add_into(acc, t)
    return TruncatedSeries._raw(MultiPoly._raw(variables, acc), degree)


def translate(p: MultiPoly, point: Sequence) -> MultiPoly:
    """Return ``p(x + point)``; exact when both inputs are exact."""
    variables = p.variables
    if len(point) != p.nvars:
        raise VariableMismatch("point length does not match the variable count")
    numeric = not p.is_exact() or any(isinstance(a, (complex, float)) for a in point)
    if numeric:
        p = p.to_numeric()
    d = max(p.total_degree(), 0)
    n = len(variables)
    bindings = {}
    for i, (name, a) in enumerate(zip(variables, point)):
        e = [0] * n
        e[i] = 1
        if numeric:
            terms = {tuple(e): 1 + 0j}
            shift = complex(a) if isinstance(a, (complex, float)) else to_complex(a)
        else:
            terms = {tuple(e): mpq(1)}
            shift = to_field(a)
        if shift:
            terms[(0,) * n] = shift
        bindings[name] = TruncatedSeries._raw(MultiPoly._raw(variables, terms), d)
    return substitute(p, bindings, variables, d).body


def linear_change(p: MultiPoly, columns: Sequence[Sequence], new_variables: Sequence[str],
                  degree: int | None = None) -> MultiPoly:
    """Substitute ``x = P t`` where ``columns[j]`` is the j-th column of ``P``."""
    new_variables = tuple(new_variables)
    if any(isinstance(c, (complex, float)) for col in columns for c in col):
        p = p.to_numeric()
        columns = [[complex(c) if isinstance(c, (complex, float)) else to_complex(c) for c in col]
                   for col in columns]
    d = max(p.total_degree(), 0) if degree is None else degree
    bindings = {}
    for i, name in enumerate(p.variables):
        terms = {}
        for j, col in enumerate(columns):
            c = col[i]
            if c:
                e = [0] * len(new_variables)
                e[j] = 1
                terms[tuple(e)] = c
        bindings[name] = TruncatedSeries._raw(MultiPoly._raw(new_variables, terms), d)
    return substitute(p, bindings, new_variables, d).body


def from_terms(variables: Iterable[str], terms: Mapping) -> MultiPoly:
    return MultiPoly(tuple(variables), terms)
