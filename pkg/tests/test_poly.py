import pytest

from qutrit_sing.arith import I, mpq
from qutrit_sing.poly import (MultiPoly, TruncatedSeries, VariableMismatch, differentiate, evaluate,
                              linear_change, poly_arith, substitute, translate)
from qutrit_sing.segre import CHARTS, Chart, section_polynomial

XY = ("x", "y")


def P(terms, variables=XY):
    return MultiPoly(variables, terms)


x, y = MultiPoly.gens(XY)


def test_difference_of_squares():
    assert poly_arith(x + y, x - y, "mul") == x ** 2 - y ** 2


def test_times_zero():
    assert poly_arith(x * y + 3, MultiPoly.zero(XY), "mul").is_zero()


def test_chart_polynomial_times_one(phi1):
    f = section_polynomial(phi1).chart(Chart((0, 2, 1)))
    g = poly_arith(f, MultiPoly.constant(f.variables, 1), "mul")
    assert g == f and len(g) == 3


def test_mismatched_rings_are_rejected():
    with pytest.raises(VariableMismatch):
        poly_arith(x, MultiPoly.var(("u",), "u"), "add")


def test_derivative_examples(phi1):
    f = section_polynomial(phi1).chart(Chart((0, 2, 1)))
    assert differentiate(f, "x1") == MultiPoly.var(f.variables, "y1")
    assert differentiate(MultiPoly.constant(XY, 5), "x").is_zero()
    assert differentiate(x ** 2 * y + y ** 3, "y") == x ** 2 + 3 * y ** 2


def test_evaluate_examples(phi1):
    f = section_polynomial(phi1).chart(Chart((0, 2, 1)))
    assert evaluate(f, [0] * 6) == 0
    assert evaluate(x * y + 7, [0, 0]) == 7
    assert evaluate(x ** 2 + 3 * y ** 2, [1, I]) == -2


def test_evaluate_numeric_mode():
    v = evaluate(x ** 2 + 3 * y ** 2, [1.0 + 0j, 1j])
    assert isinstance(v, complex) and abs(v + 2) < 1e-14


def test_substitute_cancellation():
    s = TruncatedSeries(-y ** 2, 4)
    assert substitute(x + y ** 2, {"x": s}).body.is_zero()


def test_substitute_identity():
    p = x ** 3 * y + 2 * x - 5
    assert substitute(p, {}).body == p


def test_substitute_linear_change():
    UV = ("u", "v")
    u, v = MultiPoly.gens(UV)
    out = substitute(x * y, {"x": TruncatedSeries(u + v, 4), "y": TruncatedSeries(u - v, 4)})
    assert out.body == u ** 2 - v ** 2


def test_truncation_drops_high_degree():
    s = TruncatedSeries(x + y, 1)
    assert (s * s).body.is_zero()
    t = TruncatedSeries(1 + x, 2)
    assert (t ** 3).body == 1 + 3 * x + 3 * x ** 2


def test_translate_and_linear_change_agree_with_evaluation():
    p = x ** 3 - 2 * x * y + y ** 2 + 1
    q = translate(p, [mpq(1, 2), -1])
    assert evaluate(q, [0, 0]) == evaluate(p, [mpq(1, 2), -1])
    r = linear_change(p, [[1, 1], [1, -1]], ("s", "t"))
    assert evaluate(r, [2, 3]) == evaluate(p, [5, -1])


def test_no_stored_zero_coefficients():
    p = P({(1, 0): 1, (0, 1): 0})
    assert list(p.terms) == [(1, 0)]
    assert (x - x).terms == {}


def test_gradient_hessian_shapes():
    p = x ** 2 * y
    assert p.gradient() == [2 * x * y, x ** 2]
    assert p.hessian()[0][1] == 2 * x


def test_chart_count_and_degree(phi2):
    sec = section_polynomial(phi2)
    assert len(CHARTS) == 27
    for chart in CHARTS:
        f = sec.chart(chart)
        assert f.total_degree() <= 3 and len(f) <= 27
