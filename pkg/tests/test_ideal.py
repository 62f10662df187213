import itertools

import pytest

from qutrit_sing.arith import mpq
from qutrit_sing.ideal import (NotZeroDimensional, buchberger, char_poly, krull_dimension,
                               local_algebra_dim, mult_matrix, normal_form, quotient_basis)
from qutrit_sing.ideal import local_quotient_dim
import sympy
from qutrit_sing.poly import MultiPoly
from qutrit_sing.segre import Chart, section_polynomial

from conftest import CHART_VARS

XY = ("x", "y")
x, y = MultiPoly.gens(XY)
t = MultiPoly.var(("t",), "t")


def d4_basis():
    return buchberger([2 * x * y, x ** 2 + 3 * y ** 2])


def critical_ideal(state, pivot):
    f = section_polynomial(state).chart(Chart(pivot))
    return f, buchberger([f] + f.gradient())


def test_single_generator():
    gb = buchberger([x])
    assert list(gb) == [x]
    assert normal_form(x, gb).is_zero()


def test_d4_jacobian_basis():
    assert set(d4_basis()) == {x * y, x ** 2 + 3 * y ** 2, y ** 3}


def test_example1_critical_ideal_is_maximal(phi1):
    f, gb = critical_ideal(phi1, (0, 2, 1))
    gens = MultiPoly.gens(f.variables)
    assert set(gb) == set(gens)
    assert krull_dimension(gb) == 0 and len(quotient_basis(gb)) == 1


def test_normal_forms():
    gb = d4_basis()
    assert normal_form(y ** 3, gb).is_zero()
    assert normal_form(y ** 2, gb) == y ** 2
    assert normal_form(x ** 2, gb) == -3 * y ** 2


def test_krull_dimension_examples(phi2):
    assert krull_dimension(buchberger([x + 1, x])) == -1
    x0, _, y0 = MultiPoly.gens(CHART_VARS)[:3]
    assert krull_dimension(buchberger([x0 * y0])) == 5
    _, gb = critical_ideal(phi2, (2, 2, 2))
    assert krull_dimension(gb) == 0
    assert krull_dimension(buchberger([MultiPoly.zero(XY)])) == 2


def test_staircases(phi2):
    st = quotient_basis(d4_basis())
    assert sorted(st.standard_monomials) == sorted([(0, 0), (1, 0), (0, 1), (0, 2)])
    assert len(quotient_basis(buchberger([t ** 2]))) == 2
    _, gb = critical_ideal(phi2, (2, 2, 2))
    assert len(quotient_basis(gb)) == 4
    with pytest.raises(NotZeroDimensional):
        quotient_basis(buchberger([x * y]))


def test_mult_matrix_examples(phi2):
    assert mult_matrix(buchberger([t ** 2]), t) == [[0, 0], [1, 0]]
    zero = mult_matrix(d4_basis(), MultiPoly.zero(XY))
    assert all(c == 0 for row in zero for c in row)
    f, gb = critical_ideal(phi2, (2, 2, 2))
    gens = MultiPoly.gens(f.variables)
    u = sum((c * g for c, g in zip((1, 3, -2, 5, 7, -11), gens)), MultiPoly.zero(f.variables))
    M = mult_matrix(gb, u)
    assert len(M) == 4
    assert char_poly(M) == t ** 4


def test_char_poly_examples():
    assert char_poly([[0, 0], [1, 0]]) == t ** 2
    eye = [[mpq(int(i == j)) for j in range(3)] for i in range(3)]
    assert char_poly(eye) == (t - 1) ** 3


def test_staircase_size_matches_char_poly_degree():
    gb = buchberger([x ** 2 - 1, y ** 3 - x * y])
    M = mult_matrix(gb, x + 2 * y)
    assert char_poly(M).total_degree() == len(quotient_basis(gb))


@pytest.mark.parametrize("gens,expected", [
    ([3 * t ** 2], 2),
    ([2 * x * y, x ** 2 + 3 * y ** 2], 4),
    ([y, x], 1),
])
def test_local_algebra_dim_examples(gens, expected):
    assert local_algebra_dim(gens, 8) == expected


@pytest.mark.parametrize("k", range(1, 7))
def test_a_series_milnor(k):
    assert local_algebra_dim([(k + 1) * t ** k], k + 3) == k


def test_local_algebra_dim_unstable():
    # y-axis is a curve of zeros, so the truncated lengths keep growing
    assert local_algebra_dim([x], 6) is None


def test_local_ignores_far_zeros():
    # global quotient has 3 points; only the origin counts locally
    gens = [x * (x - 1), y * (y - 2)]
    assert len(quotient_basis(buchberger(gens))) == 4
    assert local_algebra_dim(gens, 6) == 1


def test_f11_smooth_in_every_chart():
    from qutrit_sing.catalog import build_state
    from qutrit_sing.segre import CHARTS
    sec = section_polynomial(build_state("F1,1", {"a": 1, "b": 2, "c": 3}))
    for chart in CHARTS:
        f = sec.chart(chart)
        assert krull_dimension(buchberger([f] + f.gradient())) == -1


def _brute_local_dim(gens, N):
    """dim K[x]/(gens + m^N) by linear algebra on all truncated multiples."""
    n = gens[0].nvars
    mons = [e for d in range(N) for e in _exps(n, d)]
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    for g in gens:
        for m in mons:
            row = [mpq(0)] * len(mons)
            for e, c in g.terms.items():
                s = tuple(a + b for a, b in zip(e, m))
                if sum(s) < N:
                    row[index[s]] += c
            if any(row):
                rows.append(row)
    if not rows:
        return len(mons)
    M = sympy.Matrix([[sympy.Rational(int(c.numerator), int(c.denominator)) for c in r] for r in rows])
    return len(mons) - M.rank()


def _exps(n, d):
    for combo in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        yield tuple(e)


@pytest.mark.parametrize("gens", [
    [2 * x * y, x ** 2 + 3 * y ** 2],
    [x ** 2 + y ** 3, x * y],
    [x ** 3 - y ** 2, x * y ** 2 + x],
    [x + y ** 2, y ** 3],
])
@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_local_quotient_dim_matches_brute_force(gens, N):
    assert local_quotient_dim(gens, N) == _brute_local_dim(gens, N)
