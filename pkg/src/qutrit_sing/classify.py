"""Singular points of hyperplane sections and their ADE types.

Pipeline per state: for every one of the 27 affine charts build the ideal
``(f, grad f)``, compute its reduced Gröbner basis and Krull dimension; a
positive dimension anywhere is an exact certificate of non-isolated
singularities.  Zero-dimensional charts are solved through multiplication
matrices, the points are merged across charts, and each point is typed in its
home chart by corank, splitting-lemma reduction and Milnor number.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import univariate as U
from .arith import mpq, gauss, to_complex, is_exact, real_part, imag_part
from .ideal import (IdealBasis, buchberger, krull_dimension, quotient_basis, mult_matrix,
                    char_poly, local_algebra_dim)
from .matrix import rank as exact_rank, nullspace, matmul, rref, inverse
from .numeric import (NumericTolerances, NumericFailure, univariate_roots, numeric_rank,
                      newton_refine)
from .poly import MultiPoly, TruncatedSeries, substitute, translate, linear_change
from .segre import CHARTS, Chart, ProjectivePoint, StateTensor, section_polynomial

__all__ = [
    "LocalType",
    "SingularPoint",
    "ChartSummary",
    "SectionClassification",
    "ConsistencyError",
    "find_singular_points",
    "classify_point",
    "splitting_reduce",
    "binary_cubic_degeneracy",
    "milnor_oracle",
    "classify_state",
    "stratum_of",
    "ADJACENCY",
]

DEFAULT_TRUNCATION = 8

# Eq.-(13)-style adjacency of the types that occur: each type deforms to the earlier ones.
ADJACENCY = ("A1", "A2", "A3", "D4")


class ConsistencyError(RuntimeError):
    """Exact and classified data disagree (e.g. Tjurina sum vs Milnor sum)."""


@dataclass(frozen=True)
class LocalType:
    """Arnold type of an isolated critical point.

    ``kind`` is one of ``"A"``, ``"D4"``, ``"BeyondD4"``, ``"NotSimple"`` or
    ``"Unresolved"``; ``k`` is the A-series index.
    """

    kind: str
    corank: int
    k: int | None = None
    cubic_degeneracy: str | None = None
    milnor: int | None = None

    @classmethod
    def A(cls, k):
        return cls("A", 0 if k == 1 else 1, k=k, milnor=k)

    @classmethod
    def D4(cls):
        return cls("D4", 2, cubic_degeneracy="nondegenerate", milnor=4)

    @property
    def label(self):
        if self.kind == "A":
            return f"A{self.k}"
        if self.kind == "D4":
            return "D4"
        if self.kind == "BeyondD4":
            return f"BeyondD4[{self.cubic_degeneracy}]"
        if self.kind == "NotSimple":
            return f"NotSimple[corank {self.corank}]"
        return "Unresolved"

    @property
    def is_morse(self):
        return self.kind == "A" and self.k == 1

    def to_json_obj(self):
        return {"type": self.label, "kind": self.kind, "corank": self.corank,
                "k": self.k, "cubic_degeneracy": self.cubic_degeneracy,
                "milnor": self.milnor}

    def __str__(self):
        return self.label


@dataclass
class SingularPoint:
    location: ProjectivePoint
    home_chart: Chart
    local_type: LocalType | None = None
    exact: bool = False
    tjurina: int | None = None          # multiplicity in the quotient by (f, grad f)
    hessian_rank: int | None = None
    milnor_oracle: int | None = None

    @property
    def milnor(self):
        return self.local_type.milnor if self.local_type else None

    def to_json_obj(self):
        return {"location": self.location.to_json_obj(), "home_chart": str(self.home_chart),
                "exact": self.exact, "type": self.local_type.to_json_obj() if self.local_type else None,
                "hessian_rank": self.hessian_rank, "tjurina": self.tjurina,
                "milnor_oracle": self.milnor_oracle}


@dataclass
class ChartSummary:
    chart: Chart
    dimension: int
    quotient_dim: int | None = None
    point_count: int = 0

    def to_json_obj(self):
        return {"chart": str(self.chart), "dimension": self.dimension,
                "quotient_dim": self.quotient_dim, "points": self.point_count}


@dataclass
class SectionClassification:
    verdict: str                       # "smooth" | "isolated" | "non-isolated"
    points: list = field(default_factory=list)
    charts: list = field(default_factory=list)
    witness_chart: Chart | None = None
    witness_dimension: int | None = None
    milnor_sum: int | None = None
    stratum: tuple | None = None       # (name, multiplicity)
    tolerances: NumericTolerances = field(default_factory=NumericTolerances)
    warnings: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def types(self):
        """Sorted multiset of point type labels."""
        return sorted(p.local_type.label for p in self.points if p.local_type)

    def type_counts(self):
        counts = {}
        for label in self.types:
            counts[label] = counts.get(label, 0) + 1
        return counts

    @property
    def summary(self):
        """Compact verdict string, e.g. ``"3A1"``, ``"D4"``, ``"Smooth"``."""
        if self.verdict == "smooth":
            return "Smooth"
        if self.verdict == "non-isolated":
            return "Non-isolated"
        parts = []
        for label, n in sorted(self.type_counts().items(), key=lambda t: _type_rank(t[0])):
            parts.append(label if n == 1 else f"{n}{label}")
        return "+".join(parts)

    @property
    def stratum_label(self):
        name, mult = self.stratum
        return name if mult is None else f"{name}{{{mult}}}"


def _type_rank(label):
    if label in ADJACENCY:
        return ADJACENCY.index(label)
    if label.startswith("A"):
        return int(label[1:]) if label[1:].isdigit() else 99
    return 100


# -- exact helpers -----------------------------------------------------------

def _exact_hessian_at_origin(g: MultiPoly):
    n = g.nvars
    H = [[mpq(0)] * n for _ in range(n)]
    for m, c in g.terms.items():
        if sum(m) != 2:
            continue
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx
        if i == j:
            H[i][i] = H[i][i] + 2 * c
        else:
            H[i][j] = H[i][j] + c
            H[j][i] = H[j][i] + c
    return H


def _numeric_hessian_at_origin(g: MultiPoly):
    n = g.nvars
    H = np.zeros((n, n), dtype=complex)
    for m, c in g.terms.items():
        if sum(m) != 2:
            continue
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx
        c = complex(c)
        if i == j:
            H[i, i] += 2 * c
        else:
            H[i, j] += c
            H[j, i] += c
    return H


def hessian_at(f: MultiPoly, point, exact=True):
    g = translate(f, point)
    return _exact_hessian_at_origin(g) if exact else _numeric_hessian_at_origin(g)


def _is_zero(c, eps):
    if is_exact(c):
        return not c
    return abs(c) <= eps


def binary_cubic_degeneracy(a, b, c, d, eps=0.0):
    """Root structure of ``a s^3 + b s^2 t + c s t^2 + d t^3``.

    Returns ``"nondegenerate"`` (three distinct roots), ``"doubleRoot"``,
    ``"perfectCube"`` or ``"zero"``.  ``eps`` is the zero threshold used for
    numeric coefficients, relative to the coefficient scale.
    """
    coeffs = [a, b, c, d]
    exact = all(is_exact(x) for x in coeffs)
    scale = 1.0 if exact else max(abs(complex(x)) for x in coeffs)
    if exact and not any(coeffs):
        return "zero"
    if not exact and scale <= eps:
        return "zero"
    if not exact:
        a, b, c, d = (complex(x) / scale for x in coeffs)
    disc = b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
    if not _is_zero(disc, eps):
        return "nondegenerate"
    # the Hessian covariant of a binary cubic vanishes iff it is a perfect cube
    hess = (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    if all(_is_zero(h, eps) for h in hess):
        return "perfectCube"
    return "doubleRoot"


# -- splitting lemma ---------------------------------------------------------

def _complement(kernel, n, exact):
    if exact:
        rows = [list(v) for v in kernel]
        cols = []
        for i in range(n):
            e = [mpq(0)] * n
            e[i] = mpq(1)
            trial = rows + [e]
            if exact_rank(trial) == len(trial):
                rows = trial
                cols.append(e)
            if len(rows) == n:
                break
        return cols
    K = np.array(kernel, dtype=complex).T.reshape(n, len(kernel))
    if K.shape[1] == 0:
        return list(np.eye(n, dtype=complex).T)
    q, _ = np.linalg.qr(np.hstack([K, np.eye(n, dtype=complex)]))
    return list(q[:, K.shape[1]:n].T)


def splitting_reduce(f: MultiPoly, kernel: Sequence, truncation: int = DEFAULT_TRUNCATION,
                     exact: bool | None = None) -> TruncatedSeries:
    """Residual germ in the kernel directions after eliminating the Morse part.

    ``f`` must have a critical point at the origin and ``kernel`` spans the
    kernel of its Hessian.  The complement variables are solved from their
    critical equations by truncated fixed-point iteration and substituted
    back; the result is stably equivalent to ``f``.
    """
    n = f.nvars
    kernel = [list(v) for v in kernel]
    r = len(kernel)
    if exact is None:
        exact = f.is_exact() and all(is_exact(x) for v in kernel for x in v)
    comp = _complement(kernel, n, exact)
    tnames = tuple(f"t{i}" for i in range(r))
    wnames = tuple(f"w{i}" for i in range(n - r))
    F = linear_change(f if exact else f.to_numeric(), kernel + comp, tnames + wnames)
    if not exact:
        F = F.to_numeric() if F.is_exact() else F
    s = n - r
    if s == 0:
        return TruncatedSeries(_restrict_vars(F, tnames), truncation)
    HW = _exact_hessian_at_origin(F) if exact else _numeric_hessian_at_origin(F)
    HW = [row[r:] for row in HW[r:]] if exact else HW[r:, r:]
    if exact:
        try:
            HWinv = inverse(HW)
        except ZeroDivisionError:
            raise ArithmeticError("Hessian is singular on the kernel complement") from None
    else:
        if np.linalg.cond(HW) > 1e12:
            raise ArithmeticError("Hessian is singular on the kernel complement")
        HWinv = np.linalg.inv(HW)
    grads = [F.diff(w) for w in wnames]
    allnames = tnames + wnames
    tvars = [TruncatedSeries(_restrict_vars(MultiPoly.var(allnames, t), tnames) if exact
                             else _restrict_vars(MultiPoly.var(allnames, t).to_numeric(), tnames),
                             truncation) for t in tnames]
    zero = MultiPoly.zero(tnames)
    w = [TruncatedSeries(zero, truncation) for _ in range(s)]
    for _ in range(truncation + 2):
        bindings = dict(zip(tnames, tvars))
        bindings.update(zip(wnames, w))
        vals = [substitute(g, bindings, tnames, truncation).body for g in grads]
        new_w = []
        for i in range(s):
            acc = w[i].body
            for j in range(s):
                coef = HWinv[i][j] if exact else complex(HWinv[i, j])
                if coef and vals[j]:
                    acc = acc - vals[j].scale(coef)
            new_w.append(TruncatedSeries(acc, truncation))
        if exact and all(a == b for a, b in zip(new_w, w)):
            w = new_w
            break
        w = new_w
    bindings = dict(zip(tnames, tvars))
    bindings.update(zip(wnames, w))
    return substitute(F, bindings, tnames, truncation)


def _restrict_vars(p: MultiPoly, names):
    """Keep the leading variables ``names`` of ``p`` (others must not occur)."""
    r = len(names)
    terms = {}
    for m, c in p.terms.items():
        if any(m[r:]):
            raise ValueError("polynomial depends on dropped variables")
        terms[m[:r]] = c
    return MultiPoly._raw(tuple(names), terms)


# -- pointwise classification -----------------------------------------------

def _check_critical(f, point, exact, tol):
    vals = [f] + f.gradient()
    if exact:
        for g in vals:
            if g.is_exact() and _eval_exact(g, point):
                raise ValueError("point is not a singular point of the section")
    else:
        scale = max([1.0] + [abs(complex(c)) for c in f.terms.values()])
        for g in vals:
            v = _eval_numeric(g, point)
            if abs(v) > 1e3 * tol.newton_tolerance * scale:
                raise ValueError(f"point is not a singular point of the section (residual {abs(v):.3g})")


def _eval_exact(g, point):
    from .poly import evaluate
    return evaluate(g, point)


def _eval_numeric(g, point):
    from .poly import evaluate
    return evaluate(g, [complex(to_complex(x)) if not isinstance(x, complex) else x for x in point])


def classify_point(f: MultiPoly, point: Sequence, tol: NumericTolerances | None = None,
                   exact: bool | None = None, truncation: int = DEFAULT_TRUNCATION,
                   max_truncation: int | None = None):
    """Arnold type of the critical point ``point`` of ``f``.

    Returns ``(LocalType, hessian_rank, warnings)``.
    """
    tol = tol or NumericTolerances()
    if exact is None:
        exact = f.is_exact() and all(is_exact(x) for x in point)
    _check_critical(f, point, exact, tol)
    n = f.nvars
    warnings = []
    if exact:
        g = translate(f, point)
        H = _exact_hessian_at_origin(g)
        kernel = nullspace(H)
        rk = n - len(kernel)
    else:
        g = translate(f.to_numeric(), [complex(to_complex(x)) if not isinstance(x, complex) else x
                                       for x in point])
        H = _numeric_hessian_at_origin(g)
        nr = numeric_rank(H, tol)
        rk = nr.rank
        kernel = [nr.kernel[:, j] for j in range(nr.kernel.shape[1])]
        if nr.gap < 10:
            warnings.append(f"borderline Hessian corank (singular value gap {nr.gap:.3g})")
    corank = n - rk
    scale = max([1.0] + [abs(complex(to_complex(c))) for c in g.terms.values()])
    eps = tol.rank_threshold * scale
    if corank == 0:
        return LocalType.A(1), rk, warnings
    if corank >= 3:
        return LocalType("NotSimple", corank), rk, warnings
    if corank == 2:
        K = [list(v) for v in kernel]
        cubic = linear_change(g, K, ("s", "t"), degree=3).homogeneous_part(3)
        co = [cubic.coefficient(m) for m in ((3, 0), (2, 1), (1, 2), (0, 3))]
        if not exact:
            co = [complex(to_complex(c)) if not isinstance(c, complex) else c for c in co]
        deg = binary_cubic_degeneracy(*co, eps=0.0 if exact else eps)
        if deg == "nondegenerate":
            return LocalType.D4(), rk, warnings
        mu = milnor_oracle(f, point) if exact else None
        return LocalType("BeyondD4", 2, cubic_degeneracy=deg, milnor=mu), rk, warnings
    # corank one: read the order of the residual germ
    N = truncation
    tried = set()
    while True:
        tried.add(N)
        res = splitting_reduce(g, kernel, N, exact=exact)
        order = _series_order(res.body, 0.0 if exact else eps)
        if order is not None:
            if order < 3:
                raise ConsistencyError(f"residual germ has order {order} < 3")
            k = order - 1
            return LocalType("A", 1, k=k, milnor=k), rk, warnings
        if max_truncation is None or max_truncation in tried or max_truncation <= N:
            return LocalType("Unresolved", 1), rk, warnings + [f"residual germ vanishes to degree {N}"]
        N = max_truncation


def _series_order(p: MultiPoly, eps):
    best = None
    for m, c in p.terms.items():
        d = sum(m)
        if (abs(c) > eps) if not is_exact(c) else bool(c):
            best = d if best is None else min(best, d)
    return best


def milnor_oracle(f: MultiPoly, point: Sequence, max_degree: int | None = None):
    """Local Milnor number from the gradient ideal at an exact point.

    Independent of :func:`classify_point`; returns ``None`` when the local
    dimension does not stabilize by ``max_degree``.
    """
    if not all(is_exact(x) for x in point):
        raise ValueError("the Milnor oracle needs an exact point")
    g = translate(f, point)
    grads = g.gradient()
    if max_degree is None:
        max_degree = 12
    return local_algebra_dim(grads, max_degree)


# -- chart solving -----------------------------------------------------------

_U_COEFFS = (1, 3, -2, 5, 7, -11, 13, 4, -6, 9)


def _linear_forms(variables):
    n = len(variables)
    gens = MultiPoly.gens(variables)
    for shift in range(len(_U_COEFFS)):
        u = MultiPoly.zero(variables)
        for i in range(n):
            u = u + gens[i].scale(mpq(_U_COEFFS[(i + shift) % len(_U_COEFFS)] * (i + 1)))
        yield u


def _distinct_count(chi):
    return sum(len(fac) - 1 for fac, _ in U.squarefree_decomposition(U.from_multipoly(chi)))


def _rational_guess(z: complex, max_den=10 ** 6):
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    return gauss(re, im)


def _exact_generalized_eigenspace(M, lam, m):
    n = len(M)
    A = [[M[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    P = A
    for _ in range(m - 1):
        P = matmul(P, A)
    return nullspace(P)


def _exact_restricted_trace(Mv, V):
    """trace of Mv on the invariant subspace spanned by the columns ``V``."""
    # solve V C = Mv V using pivot rows of V
    m = len(V)
    cols = [list(v) for v in V]                 # m vectors of length n
    Vmat = [list(r) for r in zip(*cols)]        # n x m
    MV = matmul(Mv, Vmat)                       # n x m
    _, piv_rows = rref([list(r) for r in zip(*Vmat)])   # pivots of V^T = independent rows of V
    sub = [Vmat[i] for i in piv_rows]
    rhs = [MV[i] for i in piv_rows]
    C = matmul(inverse(sub), rhs)
    tr = sum((C[i][i] for i in range(m)), mpq(0))
    return C, tr / m


def _nilpotent(C, c):
    m = len(C)
    A = [[C[i][j] - (c if i == j else 0) for j in range(m)] for i in range(m)]
    P = A
    for _ in range(m - 1):
        P = matmul(P, A)
    return not any(x for row in P for x in row)


@dataclass
class _ChartPoint:
    coords: list
    exact: bool
    tjurina: int


def _solve_chart(f: MultiPoly, gb: IdealBasis, tol: NumericTolerances, warnings: list):
    """All points of the zero-dimensional ideal ``gb`` with their multiplicities."""
    stair = quotient_basis(gb)
    n = len(stair)
    if n == 0:
        return []
    variables = f.variables
    forms = _linear_forms(variables)
    best = None
    stale = 0
    for u in forms:
        Mu = mult_matrix(gb, u, stair)
        chi = char_poly(Mu)
        cnt = _distinct_count(chi)
        if best is None or cnt > best[0]:
            best = (cnt, u, Mu, chi)
            stale = 0
        else:
            stale += 1
        if stale >= 2 or cnt == n:
            break
    _, u, Mu, chi = best
    Mvars = [mult_matrix(gb, v, stair) for v in MultiPoly.gens(variables)]
    roots = univariate_roots(chi, tol)
    grads = f.gradient()
    out = []
    Mu_num = np.array([[complex(to_complex(x)) for x in row] for row in Mu])
    Mv_num = [np.array([[complex(to_complex(x)) for x in row] for row in M]) for M in Mvars]
    for root in roots:
        m = root.multiplicity
        lam = _rational_guess(root.value)
        if not U.horner(U.from_multipoly(chi), lam):
            V = _exact_generalized_eigenspace(Mu, lam, m)
            if len(V) != m:
                raise ConsistencyError("generalized eigenspace dimension mismatch")
            coords = []
            separated = True
            for Mv in Mvars:
                C, c = _exact_restricted_trace(Mv, V)
                if not _nilpotent(C, c):
                    separated = False
                coords.append(c)
            if not separated:
                raise ConsistencyError("linear form failed to separate the points")
            if any(g.is_exact() and _eval_exact(g, coords) for g in [f] + grads):
                raise ConsistencyError("exact point does not satisfy the chart system")
            out.append(_ChartPoint(coords, True, m))
            continue
        A = Mu_num - root.value * np.eye(n)
        P = np.linalg.matrix_power(A, m)
        _, s, vh = np.linalg.svd(P)
        V = vh[n - m:].conj().T
        coords = []
        for Mv in Mv_num:
            C = V.conj().T @ Mv @ V
            coords.append(complex(np.trace(C) / m))
        x, _ = newton_refine(grads, f, coords, tol)
        out.append(_ChartPoint([complex(v) for v in x], False, m))
    return out


def _lift_point(chart: Chart, coords, exact):
    vecs = chart.lift(coords if exact else [complex(c) for c in coords])
    return ProjectivePoint(*vecs)


def find_singular_points(state: StateTensor, tol: NumericTolerances | None = None,
                         stop_at_nonisolated: bool = False) -> SectionClassification:
    """Locate the singular points of the section over all 27 charts (untyped)."""
    tol = tol or NumericTolerances()
    t0 = time.perf_counter()
    section = section_polynomial(state.normalized())
    result = SectionClassification("smooth", tolerances=tol)
    found = []          # (ProjectivePoint, tjurina, chart found in)
    witness = None
    for chart in CHARTS:
        f = section.chart(chart)
        gb = buchberger([f] + f.gradient())
        dim = krull_dimension(gb)
        summary = ChartSummary(chart, dim)
        result.charts.append(summary)
        if dim >= 1:
            if witness is None or dim > witness[1]:
                witness = (chart, dim)
            if stop_at_nonisolated:
                break
            continue
        if dim < 0:
            summary.quotient_dim = 0
            continue
        summary.quotient_dim = len(quotient_basis(gb))
        try:
            pts = _solve_chart(f, gb, tol, result.warnings)
        except NumericFailure as exc:
            exc.diagnostics.setdefault("chart", str(chart))
            raise
        summary.point_count = len(pts)
        for cp in pts:
            pp = _lift_point(chart, cp.coords, cp.exact)
            _merge_point(found, pp, cp.tjurina, chart, tol, result.warnings)
    result.timings["locate"] = time.perf_counter() - t0
    if witness is not None:
        result.verdict = "non-isolated"
        result.witness_chart, result.witness_dimension = witness
        result.points = [SingularPoint(p, p.home_chart, exact=p.exact, tjurina=t)
                         for p, t, _ in found]
        return result
    result.points = [SingularPoint(p, p.home_chart, exact=p.exact, tjurina=t) for p, t, _ in found]
    result.verdict = "isolated" if found else "smooth"
    return result


def _merge_point(found, pp, tjurina, chart, tol, warnings):
    for idx, (q, t, c) in enumerate(found):
        if q.close_to(pp, tol.dedupe_tolerance):
            if t != tjurina:
                raise ConsistencyError(
                    f"point multiplicity differs between charts {c} and {chart}")
            # prefer exact coordinates, then the copy found in the home chart
            if (pp.exact and not q.exact) or (pp.exact == q.exact and chart == pp.home_chart):
                found[idx] = (pp, tjurina, chart)
            return
        if not (q.exact and pp.exact) and q.close_to(pp, 10 * tol.dedupe_tolerance):
            warnings.append(f"borderline duplicate points near {q!r}")
    found.append((pp, tjurina, chart))


def stratum_of(verdict, points):
    """Dual-variety stratum for a classified section."""
    if verdict == "smooth":
        return ("NotOnDual", None)
    if verdict == "non-isolated":
        return ("NonIsolated", None)
    mu = sum(p.milnor for p in points)
    if any(not p.local_type.is_morse for p in points):
        return ("Cusp", mu)
    if len(points) == 1:
        return ("DualSmooth", None)
    return ("Node", mu)


def classify_state(state: StateTensor, tol: NumericTolerances | None = None,
                   check_milnor: bool = True, stop_at_nonisolated: bool = False) -> SectionClassification:
    """Full classification: points, types, Milnor sum, stratum, consistency checks."""
    tol = tol or NumericTolerances()
    result = find_singular_points(state, tol, stop_at_nonisolated=stop_at_nonisolated)
    t0 = time.perf_counter()
    if result.verdict == "non-isolated":
        result.stratum = stratum_of(result.verdict, result.points)
        result.timings["classify"] = time.perf_counter() - t0
        return result
    section = section_polynomial(state.normalized())
    qdims = {s.chart.pivot: s.quotient_dim for s in result.charts}
    for sp in result.points:
        chart = sp.home_chart
        f = section.chart(chart)
        coords = chart.coordinates(sp.location)
        if not sp.exact:
            coords, _ = newton_refine(f.gradient(), f, [complex(c) for c in coords], tol)
            coords = [complex(c) for c in coords]
        bound = (qdims.get(chart.pivot) or 0) + 2
        lt, rk, warns = classify_point(f, coords, tol, exact=sp.exact,
                                       max_truncation=max(bound, DEFAULT_TRUNCATION))
        result.warnings.extend(warns)
        if lt.milnor is None and lt.kind in ("BeyondD4", "NotSimple", "Unresolved"):
            # best effort: the Tjurina multiplicity bounds the Milnor number from below
            lt = LocalType(lt.kind, lt.corank, lt.k, lt.cubic_degeneracy,
                           milnor_oracle(f, coords) if sp.exact else sp.tjurina)
        sp.local_type = lt
        sp.hessian_rank = rk
        if sp.exact and check_milnor:
            mu = milnor_oracle(f, coords, max_degree=max(bound, 4) + 1)
            sp.milnor_oracle = mu
            if mu != lt.milnor:
                raise ConsistencyError(
                    f"Milnor oracle gives {mu} but the point was classified {lt.label}")
    # per-chart Tjurina sums against the classified Milnor numbers
    for s in result.charts:
        if s.dimension < 0:
            continue
        inside = [p for p in result.points
                  if s.chart.contains(p.location, tol=tol.dedupe_tolerance)]
        total = sum(p.milnor or 0 for p in inside)
        if total != s.quotient_dim:
            raise ConsistencyError(
                f"chart {s.chart}: quotient dimension {s.quotient_dim} but Milnor sum {total}")
    result.points.sort(key=lambda p: (p.home_chart.index, p.location.sort_key()))
    if result.verdict == "isolated":
        result.milnor_sum = sum(p.milnor for p in result.points)
    else:
        result.milnor_sum = 0
    result.stratum = stratum_of(result.verdict, result.points)
    result.timings["classify"] = time.perf_counter() - t0
    return result
