"""Perturbation experiments around a singular section.

Two probes are offered.  Random trials jitter the coefficients of a base
state by small exact rationals and check upper semicontinuity: the Milnor sum
may only drop and every type must lie below the base type in the adjacency
chain A1 <- A2 <- A3 <- D4.  The directed scan instead builds perturbations
aimed at a chosen degeneration of one singular point, by solving an exact
linear system for a tensor whose local jet at that point is prescribed.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import mpq, to_field, real_part, imag_part
from .classify import (ADJACENCY, ConsistencyError, SectionClassification, classify_state,
                       hessian_at)
from .matrix import nullspace, rref
from .numeric import NumericFailure, NumericTolerances
from .poly import MultiPoly, translate
from .segre import StateTensor, section_polynomial
from .workers import parallel_map

__all__ = [
    "PerturbTrial",
    "PerturbReport",
    "DirectedOutcome",
    "adjacency_closure",
    "parse_epsilon",
    "random_jitter",
    "run_perturbation",
    "directed_directions",
    "directed_scan",
]

_LABELS = ["".join(map(str, t)) for t in itertools.product(range(3), repeat=3)]


def parse_epsilon(text) -> mpq:
    """Exact magnitude from ``"1e-2"``, ``"1/100"`` or a number."""
    value = Fraction(str(text))
    if value < 0:
        raise ValueError("epsilon must be non-negative")
    return mpq(value.numerator, value.denominator)


def adjacency_closure(labels: Sequence[str]) -> tuple:
    """Types reachable by deforming the given ones along A1 <- A2 <- A3 <- D4."""
    ranks = [ADJACENCY.index(l) for l in labels if l in ADJACENCY]
    if not ranks:
        return ()
    return ADJACENCY[:max(ranks) + 1]


def random_jitter(rng: random.Random, epsilon, max_den: int = 4) -> StateTensor | None:
    """Exact jitter with entries ``epsilon * j / max_den``, |j| <= max_den.

    A random number of coefficients (1 to 27) is touched so that sparse and
    dense perturbations both occur.  Returns ``None`` for an all-zero draw.
    """
    eps = to_field(epsilon)
    support = rng.sample(range(27), rng.randint(1, 27))
    flat = [mpq(0)] * 27
    for idx in support:
        j = rng.randint(-max_den, max_den)
        flat[idx] = eps * mpq(j, max_den)
    if not any(flat):
        return None
    return StateTensor(flat)


@dataclass
class PerturbTrial:
    index: int
    perturbation: StateTensor | None
    summary: str | None = None
    stratum: str | None = None
    milnor_sum: int | None = None
    types: tuple = ()
    breach: str | None = None
    error: str | None = None

    def to_json_obj(self, base: StateTensor):
        state = base if self.perturbation is None else base + self.perturbation
        obj = {"trial": self.index, "summary": self.summary, "stratum": self.stratum,
               "milnor_sum": self.milnor_sum, "types": list(self.types)}
        if self.breach or self.error:
            obj["breach"] = self.breach
            obj["error"] = self.error
            obj["state"] = state.to_json_obj()
        return obj


@dataclass
class DirectedOutcome:
    name: str
    predicted: str | None
    summary: str | None
    stratum: str | None
    types: tuple = ()
    error: str | None = None

    def to_json_obj(self):
        return {"direction": self.name, "predicted": self.predicted, "summary": self.summary,
                "stratum": self.stratum, "types": list(self.types), "error": self.error}


@dataclass
class PerturbReport:
    base_name: str
    base: StateTensor
    base_result: SectionClassification
    epsilon: mpq
    seed: int
    trials: list = field(default_factory=list)
    directed: list = field(default_factory=list)

    @property
    def breaches(self):
        return [t for t in self.trials if t.breach]

    @property
    def errors(self):
        return [t for t in self.trials if t.error] + [d for d in self.directed if d.error]

    def observed(self) -> Counter:
        return Counter(t.summary for t in self.trials if t.summary is not None)

    def observed_types(self) -> set:
        seen = set()
        for t in self.trials:
            seen.update(t.types)
        return seen

    def directed_summaries(self) -> set:
        return {d.summary for d in self.directed if d.summary is not None}

    def to_json_obj(self):
        closure = adjacency_closure(self.base_result.types)
        return {
            "base": self.base_name,
            "base_summary": self.base_result.summary,
            "base_milnor_sum": self.base_result.milnor_sum,
            "adjacency_closure": list(closure),
            "epsilon": str(self.epsilon),
            "seed": self.seed,
            "trials": len(self.trials),
            "observed": dict(sorted(self.observed().items())),
            "observed_types": sorted(self.observed_types()),
            "breaches": [t.to_json_obj(self.base) for t in self.breaches],
            "errors": [t.to_json_obj(self.base) for t in self.trials if t.error],
            "directed": [d.to_json_obj() for d in self.directed],
        }


def _sup(c):
    return max(abs(real_part(c)), abs(imag_part(c)))


def _check(base: SectionClassification, res: SectionClassification):
    if res.verdict == "non-isolated":
        return "perturbed section has non-isolated singularities"
    base_mu = base.milnor_sum or 0
    if (res.milnor_sum or 0) > base_mu:
        return f"Milnor sum {res.milnor_sum} exceeds base {base_mu}"
    allowed = set(adjacency_closure(base.types))
    bad = [t for t in res.types if t not in allowed]
    if bad:
        return f"types {bad} outside the adjacency closure {sorted(allowed)}"
    return None


def _classify_safely(state, tol):
    try:
        return classify_state(state, tol), None
    except (NumericFailure, ConsistencyError, ArithmeticError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _trial_job(args):
    index, base, base_result, jitter, tol = args
    trial = PerturbTrial(index, jitter)
    state = base if jitter is None else base + jitter
    res, err = _classify_safely(state, tol)
    if err:
        trial.error = err
        return trial
    trial.summary, trial.stratum = res.summary, res.stratum_label
    trial.milnor_sum, trial.types = res.milnor_sum, tuple(res.types)
    trial.breach = _check(base_result, res)
    return trial


def run_perturbation(base: StateTensor, epsilon, trials: int, seed: int = 0,
                     tol: NumericTolerances | None = None, base_name: str = "state",
                     directed: bool = False) -> PerturbReport:
    tol = tol or NumericTolerances()
    eps = to_field(epsilon)
    base_result = classify_state(base, tol)
    if base_result.verdict == "non-isolated":
        raise ValueError("the base state must have isolated singularities")
    rng = random.Random(f"perturb|{seed}")
    jobs = []
    for i in range(trials):
        jitter = random_jitter(rng, eps) if eps else None
        jobs.append((i, base, base_result, jitter, tol))
    report = PerturbReport(base_name, base, base_result, eps, seed)
    report.trials = parallel_map(_trial_job, jobs)
    if directed:
        report.directed = directed_scan(base, eps, tol, base_result)
    return report


# -- directed scan -------------------------------------------------------------

def _jets(chart_poly: MultiPoly, point):
    """Constant, linear, quadratic and cubic coefficient dicts at ``point``."""
    g = translate(chart_poly, point)
    jets = ({}, {}, {}, {})
    for m, c in g.terms.items():
        d = sum(m)
        if d <= 3:
            jets[d][m] = c
    return jets


def _quad_form(quad, n, u, v):
    """Bilinear form H(u, v) of the Hessian given by degree-2 coefficients."""
    total = mpq(0)
    for m, c in quad.items():
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx
        if i == j:
            total += 2 * c * u[i] * v[i]
        else:
            total += c * (u[i] * v[j] + u[j] * v[i])
    return total


def _cubic_at(cub, v):
    total = mpq(0)
    for m, c in cub.items():
        t = c
        for vi, e in zip(v, m):
            if e:
                t *= vi ** e
        total += t
    return total


@dataclass(frozen=True)
class _Target:
    name: str
    value: int                  # prescribed f-value shift at the point
    q: tuple                    # symmetric kernel block, row-major upper triangle
    cubic: int | None           # prescribed cubic along the null line, if any
    null: tuple | None          # null direction of q in kernel coordinates


def _kernel_targets(k: int):
    """Coarse grid of kernel jets for a corank-``k`` point."""
    out = [_Target("value-shift", 1, (0,) * (k * (k + 1) // 2), None, None)]
    if k == 1:
        out.append(_Target("kernel-square", 0, (1,), None, None))
        out.append(_Target("kernel-flat,cubic", 0, (0,), 1, (1,)))
        out.append(_Target("kernel-flat", 0, (0,), 0, (1,)))
    elif k == 2:
        for a, b, c in ((1, 0, 1), (1, 0, -1), (0, 1, 0), (1, 1, 2)):
            out.append(_Target(f"kernel-form[{a},{b},{c}]", 0, (a, b, c), None, None))
        for al, be in ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1)):
            # q = (al*s + be*r)^2, null line spanned by (be, -al)
            q = (al * al, al * be, be * be)
            null = (be, -al)
            for cubic in (0, 1):
                out.append(_Target(f"kernel-square[{al},{be}],cubic={cubic}", 0, q, cubic, null))
    return out


def _solve_direction(rows, rhs):
    """Particular exact solution of ``rows * x = rhs`` (free variables zero)."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    n = len(rows[0])
    if n in pivots:
        return None
    x = [mpq(0)] * n
    for r, col in enumerate(pivots):
        x[col] = red[r][n]
    return x


def directed_directions(base: StateTensor, base_result: SectionClassification):
    """Named exact perturbation directions with a predicted local type.

    For each exact singular point of corank 1 or 2 the tensor direction is
    chosen so that the point stays critical, the kernel block of its Hessian
    equals a target quadratic, the null directions of that target stay
    Hessian-orthogonal to a complement of the kernel and, for a degenerate
    target, the cubic along the null line is prescribed.  The predicted type
    then follows from the base cubic.  Axis directions (single basis vectors) are appended for breadth.
    """
    out = []
    section = section_polynomial(base.normalized())
    lead = next(c for c in base.coefficients if c)
    basis_sections = [section_polynomial(StateTensor.from_terms({lab: 1})) for lab in _LABELS]
    for sp in base_result.points:
        if not sp.exact or sp.local_type is None or sp.local_type.is_morse:
            continue
        chart = sp.home_chart
        point = chart.coordinates(sp.location)
        f = section.chart(chart)
        n = f.nvars
        H = hessian_at(f, point, exact=True)
        K = nullspace(H)
        k = len(K)
        if k not in (1, 2):
            continue
        _, pivots = rref(H)
        R = [[mpq(1) if i == p else mpq(0) for i in range(n)] for p in pivots]
        _, _, _, base_cubic = _jets(f, point)
        jets = [_jets(b.chart(chart), point) for b in basis_sections]
        # linear functionals on the 27 tensor coordinates
        value_row = [j[0].get((0,) * n, mpq(0)) for j in jets]
        grad_rows = [[j[1].get(tuple(int(i == v) for i in range(n)), mpq(0)) for j in jets]
                     for v in range(n)]
        pairs = [(a, b) for a in range(k) for b in range(a, k)]
        q_rows = [[_quad_form(j[2], n, K[a], K[b]) for j in jets] for a, b in pairs]
        where = sp.location.basis_label() or str(chart)
        for t in _kernel_targets(k):
            rows = [value_row] + grad_rows + q_rows
            rhs = [mpq(t.value)] + [mpq(0)] * n + [mpq(v) for v in t.q]
            # only null directions of the target need to decouple from the
            # complement; other cross terms are absorbed by shifting it
            nulls = [K[a] for a in range(k)] if not any(t.q) else []
            if t.null is not None:
                nulls = [[sum(K[a][i] * t.null[a] for a in range(k)) for i in range(n)]]
            for u in nulls:
                for r in R:
                    rows.append([_quad_form(j[2], n, u, r) for j in jets])
                    rhs.append(mpq(0))
            predicted = "A1" if t.cubic is None and any(t.q) else None
            if t.value:
                predicted = "Smooth"
            if t.cubic is not None:
                v = nulls[0]
                rows.append([_cubic_at(j[3], v) for j in jets])
                rhs.append(mpq(t.cubic))
                base_c = _cubic_at(base_cubic, v)
                predicted = "A2" if (base_c or t.cubic) else "A3+"
            delta = _solve_direction(rows, rhs)
            if delta is None or not any(delta):
                continue
            # the chart polynomial was built from the normalized base
            delta = [d * lead for d in delta]
            out.append((f"{where}:{t.name}", predicted, delta))
    for idx, lab in enumerate(_LABELS):
        delta = [mpq(0)] * 27
        delta[idx] = mpq(1)
        out.append((f"axis:{lab}", None, delta))
    return out


def _directed_job(args):
    name, predicted, state, tol = args
    res, err = _classify_safely(state, tol)
    if err:
        return DirectedOutcome(name, predicted, None, None, error=err)
    return DirectedOutcome(name, predicted, res.summary, res.stratum_label, tuple(res.types))


def directed_scan(base: StateTensor, epsilon, tol: NumericTolerances | None = None,
                  base_result: SectionClassification | None = None) -> list:
    """Classify ``base + epsilon * d`` for every direction ``d`` of the grid.

    Each direction is rescaled so that its largest coefficient has size
    ``epsilon`` relative to the largest coefficient of the base, sizes being
    measured by the larger of the real and imaginary parts so that the scale
    factor stays rational.
    """
    tol = tol or NumericTolerances()
    base_result = base_result or classify_state(base, tol)
    eps = to_field(epsilon)
    scale = max(_sup(c) for c in base.coefficients)
    jobs = []
    for name, predicted, delta in directed_directions(base, base_result):
        factor = eps * scale / max(_sup(d) for d in delta)
        jobs.append((name, predicted, base + StateTensor([d * factor for d in delta]), tol))
    return parallel_map(_directed_job, jobs)
