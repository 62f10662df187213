"""Nurmiev normal forms of 3x3x3 tensors and their expected section types.

The nullcone rows ``N1``–``N24`` are parameter free.  The parametric rows
``F{family},{index}`` are combinations of

    X1 = <000| + <111| + <222|
    X2 = <012| + <120| + <201|
    X3 = <021| + <102| + <210|

plus a nilpotent part, with the family constraints

    family 1: abc != 0, (a^3 + b^3 + c^3)^3 - (3abc)^3 != 0
    family 2: b(a^3 + b^3) != 0, c = 0
    family 3: a != 0, b = c = 0
    family 4: c = -b != 0, a = 0
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .arith import mpq, format_rational, to_field
from .classify import classify_state, SectionClassification, ConsistencyError
from .numeric import NumericTolerances, NumericFailure
from .segre import StateTensor
from .workers import parallel_map

__all__ = [
    "NormalForm",
    "ExpectedResult",
    "ConstraintViolated",
    "CATALOG",
    "ROW_IDS",
    "N_ROWS",
    "F_ROWS",
    "build_state",
    "sample_generic",
    "expected",
    "regimes",
    "run_catalog",
    "run_row",
    "CatalogReport",
    "RowResult",
]


class ConstraintViolated(ValueError):
    def __init__(self, form_id, which):
        super().__init__(f"{form_id}: constraint {which} vanishes")
        self.form_id = form_id
        self.which = which


@dataclass(frozen=True)
class ExpectedResult:
    """``verdict`` is ``"smooth"``, ``"non-isolated"`` or ``"isolated"``."""

    verdict: str
    types: tuple = ()

    @property
    def summary(self):
        if self.verdict == "smooth":
            return "Smooth"
        if self.verdict == "non-isolated":
            return "Non-isolated"
        counts = {}
        for t in self.types:
            counts[t] = counts.get(t, 0) + 1
        return "+".join(t if n == 1 else f"{n}{t}" for t, n in counts.items())

    @classmethod
    def parse(cls, text):
        if text == "Smooth":
            return cls("smooth")
        if text == "Non-isolated":
            return cls("non-isolated")
        types = []
        for part in text.split("+"):
            i = 0
            while i < len(part) and part[i].isdigit():
                i += 1
            n = int(part[:i]) if i else 1
            types.extend([part[i:]] * n)
        return cls("isolated", tuple(sorted(types)))

    def matches(self, result: SectionClassification):
        if result.verdict != self.verdict:
            return False
        return self.verdict != "isolated" or tuple(result.types) == tuple(sorted(self.types))


def _x1(p):
    return [("000", p, 1), ("111", p, 1), ("222", p, 1)]


def _x2(p, s=1):
    return [("012", p, s), ("120", p, s), ("201", p, s)]


def _x3(p, s=1):
    return [("021", p, s), ("102", p, s), ("210", p, s)]


def _nil(*labels):
    return [(lab, None, 1) for lab in labels]


def _family_constraints(family):
    if family == 1:
        return [("abc", lambda a, b, c: a * b * c),
                ("(a^3+b^3+c^3)^3-(3abc)^3",
                 lambda a, b, c: (a ** 3 + b ** 3 + c ** 3) ** 3 - (3 * a * b * c) ** 3)]
    if family == 2:
        return [("b(a^3+b^3)", lambda a, b, c: b * (a ** 3 + b ** 3))]
    if family == 3:
        return [("a", lambda a, b, c: a)]
    if family == 4:
        return [("b", lambda a, b, c: b)]
    return []


_FAMILY_PARAMS = {0: (), 1: ("a", "b", "c"), 2: ("a", "b"), 3: ("a",), 4: ("b",)}


@dataclass(frozen=True)
class NormalForm:
    id: str
    family: int                      # 0 for the nullcone
    terms: tuple                     # (label, parameter or None, multiplier)
    expectations: tuple              # ((regime, table verdict text), ...)

    @property
    def parameters(self):
        return _FAMILY_PARAMS[self.family]

    @property
    def constraints(self):
        return _family_constraints(self.family)

    @property
    def regimes(self):
        return tuple(r for r, _ in self.expectations)


def _N(idx, labels, verdict):
    return NormalForm(f"N{idx}", 0, tuple(_nil(*labels)), (("generic", verdict),))


def _F(fam, idx, terms, *expectations):
    return NormalForm(f"F{fam},{idx}", fam, tuple(terms), tuple(expectations))


_NI = "Non-isolated"

N_ROWS = (
    _N(1, ["012", "021", "102", "111", "120", "200"], "A3"),
    _N(2, ["012", "021", "102", "110", "111", "200"], "D4"),
    _N(3, ["002", "011", "020", "101", "112", "200"], _NI),
    _N(4, ["002", "011", "101", "110", "220"], _NI),
    _N(5, ["002", "020", "021", "110", "201"], _NI),
    _N(6, ["002", "011", "101", "120", "210"], _NI),
    _N(7, ["002", "011", "020", "101", "210"], _NI),
    _N(8, ["002", "020", "111", "200"], _NI),
    _N(9, ["000", "011", "111", "122"], _NI),
    _N(10, ["002", "011", "020", "101", "110", "200"], _NI),
    _N(11, ["002", "020", "101", "210"], _NI),
    _N(12, ["002", "020", "100", "111"], _NI),
    _N(13, ["002", "011", "020", "101", "110"], _NI),
    _N(14, ["002", "010", "021", "100", "201"], _NI),
    _N(15, ["011", "022", "100"], _NI),
    _N(16, ["002", "011", "020", "100"], _NI),
    _N(17, ["001", "010", "102", "120"], _NI),
    _N(18, ["000", "011", "101", "112"], _NI),
    _N(19, ["002", "010", "101"], _NI),
    _N(20, ["000", "111"], _NI),
    _N(21, ["001", "010", "100"], _NI),
    _N(22, ["000", "011", "022"], _NI),
    _N(23, ["000", "011"], _NI),
    _N(24, ["000"], _NI),
)

_B23 = lambda: _x2("b", 1) + _x3("b", -1)  # noqa: E731  b(X2 - X3)

F_ROWS = (
    _F(1, 1, _x1("a") + _x2("b") + _x3("c"), ("generic", "Smooth")),
    _F(2, 1, _x1("a") + _x2("b") + _nil("021", "102"), ("generic", "A1"), ("a=0", "3A1")),
    _F(2, 2, _x1("a") + _x2("b") + _nil("021"), ("generic", "2A1"), ("a=0", "3A1")),
    _F(2, 3, _x1("a") + _x2("b") + _nil("201"), ("generic", "3A1"), ("a=0", "3A1")),
    _F(3, 1, _x1("a") + _nil("012", "021", "102", "120"), ("generic", "2A1")),
    _F(3, 2, _x1("a") + _nil("012", "021", "102"), ("generic", "3A1")),
    _F(3, 3, _x1("a") + _nil("012", "021", "120"), ("generic", "3A1")),
    _F(3, 4, _x1("a") + _nil("012", "021"), ("generic", "4A1")),
    _F(3, 5, _x1("a") + _nil("012", "120"), ("generic", "4A1")),
    _F(3, 6, _x1("a") + _nil("021", "102"), ("generic", "4A1")),
    _F(3, 7, _x1("a") + _nil("012"), ("generic", "5A1")),
    _F(3, 8, _x1("a") + _nil("021"), ("generic", "5A1")),
    _F(3, 9, _x1("a"), ("generic", "6A1")),
    _F(4, 1, _B23() + _nil("002", "020", "111", "200"), ("generic", "A2")),
    _F(4, 2, _B23() + _nil("002", "011", "020", "101", "110", "200"), ("generic", "A3")),
    _F(4, 3, _B23() + _nil("000", "111"), ("generic", "D4")),
    _F(4, 4, _B23() + _nil("001", "010", "100", "200"), ("generic", _NI)),
    _F(4, 5, _B23() + _nil("000"), ("generic", _NI)),
    _F(4, 6, _B23(), ("generic", _NI)),
)

CATALOG = {nf.id: nf for nf in N_ROWS + F_ROWS}
ROW_IDS = tuple(CATALOG)


def _form(form_id) -> NormalForm:
    try:
        return CATALOG[form_id]
    except KeyError:
        raise KeyError(f"unknown normal form {form_id!r}") from None


def build_state(form_id: str, params: dict | None = None) -> StateTensor:
    """Instantiate a normal form; parameters outside the family are rejected."""
    nf = _form(form_id)
    params = {k: to_field(v) for k, v in (params or {}).items()}
    unknown = set(params) - set(nf.parameters)
    if unknown:
        raise ValueError(f"{form_id} has no parameters {sorted(unknown)}")
    missing = set(nf.parameters) - set(params)
    if missing:
        raise ValueError(f"{form_id} needs parameters {sorted(missing)}")
    full = {"a": mpq(0), "b": mpq(0), "c": mpq(0)}
    full.update(params)
    for name, fn in nf.constraints:
        if not fn(full["a"], full["b"], full["c"]):
            raise ConstraintViolated(form_id, name)
    terms = {}
    for label, p, mult in nf.terms:
        value = mpq(mult) if p is None else full[p] * mult
        terms[label] = terms.get(label, mpq(0)) + value
    return StateTensor.from_terms(terms)


def _small_rational(rng, nonzero=True):
    while True:
        q = mpq(rng.randint(-7, 7), rng.randint(1, 7))
        if q or not nonzero:
            return q


def sample_generic(form_id: str, seed, regime: str = "generic") -> dict:
    """Small random rational parameters satisfying the family constraints.

    Numerators and denominators are bounded by 7; samples are redrawn until
    every constraint polynomial is nonzero.  ``regime="a=0"`` pins ``a``.
    """
    nf = _form(form_id)
    rng = random.Random(f"{form_id}|{regime}|{seed}")
    while True:
        params = {name: _small_rational(rng) for name in nf.parameters}
        if regime == "a=0":
            if "a" not in params:
                raise ValueError(f"{form_id} has no parameter a")
            params["a"] = mpq(0)
        elif regime != "generic":
            raise ValueError(f"unknown regime {regime!r}")
        try:
            build_state(form_id, params)
        except ConstraintViolated:
            continue
        return params


def regimes(form_id: str):
    return _form(form_id).regimes


def expected(form_id: str, regime: str = "generic") -> ExpectedResult:
    nf = _form(form_id)
    for r, text in nf.expectations:
        if r == regime:
            return ExpectedResult.parse(text)
    raise KeyError(f"{form_id} has no regime {regime!r}")


# -- catalog runs --------------------------------------------------------------

@dataclass
class SampleResult:
    params: dict
    observed: str
    stratum: str | None
    milnor_sum: int | None
    seconds: float
    error: str | None = None

    def to_json_obj(self):
        return {"params": {k: format_rational(v) for k, v in self.params.items()},
                "observed": self.observed, "stratum": self.stratum,
                "milnor_sum": self.milnor_sum, "seconds": round(self.seconds, 4),
                "error": self.error}


@dataclass
class RowResult:
    form_id: str
    regime: str
    expected: str
    samples: list = field(default_factory=list)
    genericity_warning: bool = False

    @property
    def passed(self):
        return (not self.genericity_warning and bool(self.samples)
                and all(s.error is None and s.observed == self.expected for s in self.samples))

    def to_json_obj(self):
        return {"row": self.form_id, "regime": self.regime, "expected": self.expected,
                "passed": self.passed, "genericity_warning": self.genericity_warning,
                "samples": [s.to_json_obj() for s in self.samples]}


@dataclass
class CatalogReport:
    rows: list
    tolerances: NumericTolerances
    seeds: tuple

    @property
    def passed(self):
        return all(r.passed for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r.passed]

    def to_json_obj(self):
        return {"passed": self.passed, "seeds": list(self.seeds),
                "tolerances": self.tolerances.as_dict(),
                "rows": [r.to_json_obj() for r in self.rows]}

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=False)

    def to_markdown(self):
        lines = ["| Orbit | Params | Expected | Observed | Status |",
                 "|---|---|---|---|---|"]
        for r in self.rows:
            observed = sorted({s.observed for s in r.samples})
            status = "PASS" if r.passed else ("GENERICITY WARNING" if r.genericity_warning else "FAIL")
            params = "-" if not CATALOG[r.form_id].parameters else r.regime
            lines.append(f"| {r.form_id} | {params} | {r.expected} | {', '.join(observed)} | {status} |")
        return "\n".join(lines) + "\n"


def _observe(state, tol):
    t0 = time.perf_counter()
    try:
        res = classify_state(state, tol)
    except (ConsistencyError, NumericFailure, ArithmeticError) as exc:
        return None, time.perf_counter() - t0, f"{type(exc).__name__}: {exc}"
    return res, time.perf_counter() - t0, None


def run_row(form_id: str, regime: str, seeds: Sequence, tol: NumericTolerances,
            param_sets: Sequence[dict] | None = None) -> RowResult:
    """Classify one (row, regime); ``param_sets`` overrides the seeded samples."""
    nf = _form(form_id)
    exp = expected(form_id, regime)
    row = RowResult(form_id, regime, exp.summary)
    if param_sets is None:
        param_sets = [{}] if not nf.parameters else [sample_generic(form_id, s, regime)
                                                     for s in seeds]
    for params in param_sets:
        res, secs, err = _observe(build_state(form_id, params), tol)
        if err:
            row.samples.append(SampleResult(params, "Error", None, None, secs, err))
        else:
            row.samples.append(SampleResult(params, res.summary, res.stratum_label,
                                            res.milnor_sum, secs))
    observed = {s.observed for s in row.samples}
    row.genericity_warning = len(observed) > 1
    return row


def run_catalog(seeds: Sequence = (0, 1), samples_per_row: int | None = None,
                rows: Sequence[str] | None = None,
                tol: NumericTolerances | None = None) -> CatalogReport:
    """Classify every (row, regime) at several generic samples.

    A row passes when all samples agree with the table; disagreement between
    samples is flagged as a genericity warning rather than averaged away.
    """
    tol = tol or NumericTolerances()
    seeds = tuple(seeds)
    if samples_per_row is not None:
        if samples_per_row < 2:
            raise ValueError("generic rows need at least 2 samples")
        base = list(seeds) or [0]
        seeds = tuple(base[i] if i < len(base) else base[-1] + i for i in range(samples_per_row))
    if len(seeds) < 2:
        raise ValueError("generic rows need at least 2 samples")
    ids = list(rows) if rows is not None else list(ROW_IDS)
    jobs = [(form_id, regime, seeds, tol) for form_id in ids for regime in regimes(form_id)]
    return CatalogReport(parallel_map(_row_job, jobs), tol, seeds)


def _row_job(args):
    return run_row(*args)
