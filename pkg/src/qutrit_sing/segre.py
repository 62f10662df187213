"""State tensors, the Segre embedding and hyperplane sections of P2 x P2 x P2."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import mpq, to_field, parse_scalar, format_scalar, abs2, to_complex, is_exact
from .matrix import det, identity, matmul
from .poly import MultiPoly

__all__ = [
    "FULL_VARIABLES",
    "StateTensor",
    "Chart",
    "CHARTS",
    "SectionPolynomial",
    "ProjectivePoint",
    "StateFormatError",
    "section_polynomial",
    "restrict_to_chart",
    "segre_embed",
    "pairing",
    "tangent_membership",
    "tangent_pairings",
    "slocc_act",
    "random_sl3_triple",
    "basis_index",
]

FULL_VARIABLES = ("x0", "x1", "x2", "y0", "y1", "y2", "z0", "z1", "z2")
_INDICES = list(itertools.product(range(3), repeat=3))


class StateFormatError(ValueError):
    """A state file or literal does not match the state schema."""


def basis_index(i, j, k):
    return 9 * i + 3 * j + k


def _parse_label(label):
    label = str(label).strip()
    if len(label) != 3 or any(ch not in "012" for ch in label):
        raise StateFormatError(f"bad basis label {label!r}")
    return tuple(int(ch) for ch in label)


class StateTensor:
    """3x3x3 coefficient grid ``h[i][j][k]`` of a linear form on C3 x C3 x C3.

    Stored flat in base-3 order (position ``9i + 3j + k``).
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        coeffs = tuple(to_field(c) for c in coefficients)
        if len(coeffs) != 27:
            raise StateFormatError(f"expected 27 coefficients, got {len(coeffs)}")
        if not any(coeffs):
            raise StateFormatError("the zero tensor does not define a hyperplane")
        self.coefficients = coeffs

    @classmethod
    def from_terms(cls, terms: Mapping):
        """Build from ``{"012": coeff, (1, 1, 0): coeff, ...}``."""
        flat = [mpq(0)] * 27
        for label, c in terms.items():
            idx = label if isinstance(label, tuple) else _parse_label(label)
            flat[basis_index(*idx)] = flat[basis_index(*idx)] + to_field(c)
        return cls(flat)

    @classmethod
    def from_nested(cls, grid):
        try:
            flat = [grid[i][j][k] for i, j, k in _INDICES]
        except (IndexError, TypeError, KeyError) as exc:
            raise StateFormatError("nested coefficients must be a 3x3x3 grid") from exc
        return cls(flat)

    def __getitem__(self, ijk):
        i, j, k = ijk
        return self.coefficients[basis_index(i, j, k)]

    def __eq__(self, other):
        return isinstance(other, StateTensor) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def nonzero_terms(self):
        return {(i, j, k): self[i, j, k] for i, j, k in _INDICES if self[i, j, k]}

    def scaled(self, lam):
        lam = to_field(lam)
        if not lam:
            raise ValueError("scaling by zero")
        return StateTensor(c * lam for c in self.coefficients)

    def normalized(self):
        """Projective representative: the first nonzero entry becomes 1."""
        lead = next(c for c in self.coefficients if c)
        return self.scaled(1 / lead)

    def nested(self):
        return [[[self[i, j, k] for k in range(3)] for j in range(3)] for i in range(3)]

    def __add__(self, other):
        return StateTensor(a + b for a, b in zip(self.coefficients, other.coefficients))

    # serialization ----------------------------------------------------------

    def to_json_obj(self):
        return {"coefficients": [format_scalar(c) for c in self.coefficients]}

    def to_json(self):
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict) or "coefficients" not in obj:
            raise StateFormatError('state JSON needs a "coefficients" field')
        data = obj["coefficients"]
        if not isinstance(data, list):
            raise StateFormatError("coefficients must be a list")
        try:
            if len(data) == 3 and all(isinstance(r, list) and len(r) == 3 and
                                      all(isinstance(c, list) and len(c) == 3 for c in r)
                                      for r in data):
                grid = [[[parse_scalar(c) for c in col] for col in row] for row in data]
                return cls.from_nested(grid)
            return cls([parse_scalar(c) for c in data])
        except (ValueError, TypeError) as exc:
            if isinstance(exc, StateFormatError):
                raise
            raise StateFormatError(str(exc)) from exc

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"malformed JSON: {exc}") from exc
        return cls.from_json_obj(obj)

    def __repr__(self):
        parts = [f"{c}*<{i}{j}{k}|" for (i, j, k), c in self.nonzero_terms().items()]
        return "StateTensor(" + " + ".join(parts) + ")"


@dataclass(frozen=True)
class Chart:
    """Affine patch ``x_i = y_j = z_k = 1`` of P2 x P2 x P2."""

    pivot: tuple

    @property
    def index(self):
        return basis_index(*self.pivot)

    @property
    def variables(self):
        i, j, k = self.pivot
        return tuple([f"x{a}" for a in range(3) if a != i] +
                     [f"y{b}" for b in range(3) if b != j] +
                     [f"z{c}" for c in range(3) if c != k])

    def __str__(self):
        return "[{},{},{}]".format(*self.pivot)

    def lift(self, coords: Sequence):
        """Chart coordinates -> three factor vectors with pivot entries 1."""
        one = mpq(1) if all(is_exact(c) for c in coords) else 1 + 0j
        it = iter(coords)
        vecs = []
        for p in self.pivot:
            vecs.append(tuple(one if a == p else next(it) for a in range(3)))
        return vecs

    def coordinates(self, point: "ProjectivePoint"):
        """Affine coordinates of ``point`` in this chart; requires nonzero pivots."""
        out = []
        for vec, p in zip(point.factors, self.pivot):
            piv = vec[p]
            out.extend(v / piv for a, v in enumerate(vec) if a != p)
        return out

    def contains(self, point: "ProjectivePoint", tol=1e-9):
        for vec, p in zip(point.factors, self.pivot):
            if point.exact:
                if not vec[p]:
                    return False
            elif abs(vec[p]) <= tol:
                return False
        return True


CHARTS = tuple(Chart(p) for p in _INDICES)


class SectionPolynomial:
    """The trilinear form ``sum h_ijk x_i y_j z_k`` with cached chart restrictions."""

    def __init__(self, state: StateTensor):
        self.state = state
        terms = {}
        for (i, j, k), c in state.nonzero_terms().items():
            e = [0] * 9
            e[i] += 1
            e[3 + j] += 1
            e[6 + k] += 1
            terms[tuple(e)] = c
        self.full = MultiPoly._raw(FULL_VARIABLES, terms)
        self._charts = {}

    def chart(self, chart: Chart) -> MultiPoly:
        poly = self._charts.get(chart.pivot)
        if poly is None:
            poly = _restrict(self.state, chart)
            self._charts[chart.pivot] = poly
        return poly


def _restrict(state, chart):
    pi, pj, pk = chart.pivot
    xs = [a for a in range(3) if a != pi]
    ys = [b for b in range(3) if b != pj]
    zs = [c for c in range(3) if c != pk]
    terms = {}
    for (i, j, k), c in state.nonzero_terms().items():
        e = [0] * 6
        if i != pi:
            e[xs.index(i)] = 1
        if j != pj:
            e[2 + ys.index(j)] = 1
        if k != pk:
            e[4 + zs.index(k)] = 1
        terms[tuple(e)] = c
    return MultiPoly._raw(chart.variables, terms)


def section_polynomial(state: StateTensor) -> SectionPolynomial:
    return SectionPolynomial(state)


def restrict_to_chart(section: SectionPolynomial, chart: Chart) -> MultiPoly:
    return section.chart(chart)


def _check_vec(v):
    if len(v) != 3:
        raise ValueError("factor vectors must have length 3")
    if not any(v):
        raise ValueError("zero factor vector")


def segre_embed(x: Sequence, y: Sequence, z: Sequence):
    """27-vector with entry ``x_i y_j z_k`` at base-3 position ``9i + 3j + k``."""
    for v in (x, y, z):
        _check_vec(v)
    return [x[i] * y[j] * z[k] for i, j, k in _INDICES]


def pairing(state: StateTensor, vec27: Sequence):
    """Value of the linear form on a 27-vector (no complex conjugation)."""
    total = mpq(0) if all(is_exact(v) for v in vec27) else 0j
    for c, v in zip(state.coefficients, vec27):
        if c and v:
            total = total + (c * v if is_exact(v) else to_complex(c) * v)
    return total


def _largest_index(v):
    if all(is_exact(c) for c in v):
        mods = [abs2(c) for c in v]
    else:
        mods = [abs(complex(c)) for c in v]
    best = max(mods)
    return mods.index(best)


def tangent_pairings(state: StateTensor, x, y, z):
    """Pairings with the point and with the six tangent directions at it.

    The directions replace one factor by a basis vector other than that
    factor's largest-modulus slot, which together with the point span the
    tangent space.
    """
    values = [pairing(state, segre_embed(x, y, z))]
    factors = [list(x), list(y), list(z)]
    for slot in range(3):
        piv = _largest_index(factors[slot])
        for a in range(3):
            if a == piv:
                continue
            e = [mpq(0)] * 3
            e[a] = mpq(1)
            f = list(factors)
            f[slot] = e
            values.append(pairing(state, segre_embed(*f)))
    return values


def tangent_membership(state: StateTensor, point) -> bool:
    """True iff the tangent space of the Segre variety at ``point`` lies in the hyperplane."""
    x, y, z = point.factors if isinstance(point, ProjectivePoint) else point
    values = tangent_pairings(state, x, y, z)
    if all(is_exact(v) for v in values):
        return not any(values)
    return all(abs(complex(v)) <= 1e-10 for v in values)


def slocc_act(state: StateTensor, g: Sequence) -> StateTensor:
    """Apply ``(A, B, C)`` factor-wise: ``h'_ijk = sum A_ia B_jb C_kc h_abc``."""
    if len(g) != 3:
        raise ValueError("expected a triple of 3x3 matrices")
    mats = []
    for m in g:
        m = [[to_field(v) for v in row] for row in m]
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise ValueError("SLOCC factors must be 3x3")
        if det(m) != 1:
            raise ValueError("SLOCC factors must have determinant exactly 1")
        mats.append(m)
    A, B, C = mats
    h = state.nested()
    # contract one index at a time
    t1 = [[[sum((A[i][a] * h[a][b][c] for a in range(3) if A[i][a] and h[a][b][c]), mpq(0))
            for c in range(3)] for b in range(3)] for i in range(3)]
    t2 = [[[sum((B[j][b] * t1[i][b][c] for b in range(3) if B[j][b] and t1[i][b][c]), mpq(0))
            for c in range(3)] for j in range(3)] for i in range(3)]
    t3 = [[[sum((C[k][c] * t2[i][j][c] for c in range(3) if C[k][c] and t2[i][j][c]), mpq(0))
            for k in range(3)] for j in range(3)] for i in range(3)]
    return StateTensor.from_nested(t3)


def random_sl3_triple(seed, shear_count: int = 4, max_offset: int = 2, max_den: int = 2):
    """Products of elementary shears with small rational offsets; exact det 1."""
    rng = random.Random(seed)
    triple = []
    for _ in range(3):
        m = identity(3)
        for _ in range(shear_count):
            a, b = rng.sample(range(3), 2)
            num = rng.choice([v for v in range(-max_offset, max_offset + 1) if v])
            c = mpq(num, rng.randint(1, max_den))
            e = identity(3)
            e[a][b] = c
            m = matmul(m, e)
        triple.append(m)
    return tuple(triple)


class ProjectivePoint:
    """A point of P2 x P2 x P2, each factor scaled so its largest-modulus entry is 1.

    Ties for the largest modulus go to the smallest index.  ``exact`` points
    carry Q(i) coordinates, the others complex floats.
    """

    __slots__ = ("factors", "exact")

    def __init__(self, x, y, z):
        vecs = []
        exact = all(is_exact(c) for v in (x, y, z) for c in v)
        for v in (x, y, z):
            _check_vec(v)
            v = [to_field(c) for c in v] if exact else [complex(to_complex(c)) for c in v]
            piv = v[_largest_index(v)]
            vecs.append(tuple(c / piv for c in v))
        self.factors = tuple(vecs)
        self.exact = exact

    @property
    def home_chart(self) -> Chart:
        return Chart(tuple(_largest_index(v) for v in self.factors))

    def numeric(self):
        return ProjectivePoint(*[[to_complex(c) for c in v] for v in self.factors])

    def close_to(self, other: "ProjectivePoint", tol: float) -> bool:
        """Componentwise comparison after rescaling ``other`` onto this point's pivots."""
        if self.exact and other.exact:
            return self == other
        for u, v in zip(self.factors, other.factors):
            p = _largest_index(u)
            vp = to_complex(v[p])
            if abs(vp) < 1e-300:
                return False
            for a, b in zip(u, v):
                if abs(to_complex(a) - to_complex(b) / vp) > tol:
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, ProjectivePoint) and self.exact == other.exact
                and self.factors == other.factors)

    def __hash__(self):
        return hash(self.factors)

    def basis_label(self):
        """``"ijk"`` when the point is a basis vector ``|ijk>``, else ``None``."""
        label = []
        for v in self.factors:
            nz = [a for a, c in enumerate(v) if (c if self.exact else abs(c) > 1e-9)]
            if len(nz) != 1:
                return None
            label.append(str(nz[0]))
        return "".join(label)

    def sort_key(self):
        return tuple((round(to_complex(c).real, 9), round(to_complex(c).imag, 9))
                     for v in self.factors for c in v)

    def to_json_obj(self):
        if self.exact:
            coords = [[format_scalar(c) for c in v] for v in self.factors]
        else:
            # rounded floats; adding 0.0 folds -0.0 into 0.0 for stable output
            coords = [[[round(to_complex(c).real, 10) + 0.0, round(to_complex(c).imag, 10) + 0.0]
                       for c in v] for v in self.factors]
        return {"exact": self.exact, "factors": coords, "label": self.basis_label()}

    def __repr__(self):
        lab = self.basis_label()
        if lab:
            return f"ProjectivePoint(|{lab}>)"
        return f"ProjectivePoint({self.factors}, exact={self.exact})"
