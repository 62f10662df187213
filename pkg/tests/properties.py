"""Randomized engine property suites shared by the unit and acceptance tests.

Each ``check_*`` runs a Hypothesis suite of ``n`` examples and returns the
number of cases actually executed, so callers can assert the sample size.
"""

import numpy as np
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qutrit_sing.arith import gauss, mpq
from qutrit_sing.ideal import buchberger, normal_form
from qutrit_sing.matrix import matmul
from qutrit_sing.numeric import univariate_roots
from qutrit_sing.poly import MultiPoly, differentiate, evaluate
from qutrit_sing.segre import StateTensor, random_sl3_triple, slocc_act

_QUIET = [HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.filter_too_much]

small_int = st.integers(-5, 5)
rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-9, 9), st.integers(1, 6))
scalars = st.one_of(rationals, st.builds(gauss, rationals, rationals))


def polys(variables, max_degree=3, max_terms=5, coeffs=scalars):
    n = len(variables)
    exps = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(
        lambda e: sum(e) <= max_degree).map(tuple)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(
        lambda d: MultiPoly(variables, d))


def check_ring_axioms(n=1000):
    V = ("x", "y", "z")
    counter = [0]

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(polys(V), polys(V), polys(V))
    def run(p, q, r):
        counter[0] += 1
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p * q == q * p and p + q == q + p
        assert (p - p).is_zero()
    run()
    return counter[0]


def check_leibniz(n=1000):
    V = ("x", "y", "z")
    counter = [0]

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(polys(V, 4, 6), polys(V, 4, 6), st.sampled_from(V))
    def run(p, q, v):
        counter[0] += 1
        assert differentiate(p * q, v) == p * differentiate(q, v) + q * differentiate(p, v)
    run()
    return counter[0]


def check_substitute_coherence(n=1000):
    V = ("x", "y")
    counter = [0]

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(polys(V, 3, 5), polys(V, 2, 3), polys(V, 2, 3), st.tuples(rationals, rationals))
    def run(p, a, b, pt):
        from qutrit_sing.poly import TruncatedSeries, substitute
        counter[0] += 1
        deg = max(p.total_degree(), 0) * 2 + 1
        comp = substitute(p, {"x": TruncatedSeries(a, deg), "y": TruncatedSeries(b, deg)})
        inner = [evaluate(a, list(pt)), evaluate(b, list(pt))]
        assert evaluate(comp.body, list(pt)) == evaluate(p, inner)
    run()
    return counter[0]


def _to_sympy(p, symbols):
    expr = 0
    for m, c in p.terms.items():
        re, im = _parts(c)
        coef = sympy.Rational(int(re.numerator), int(re.denominator)) + \
            sympy.I * sympy.Rational(int(im.numerator), int(im.denominator))
        expr += coef * sympy.Mul(*[s ** e for s, e in zip(symbols, m)])
    return sympy.expand(expr)


def _parts(c):
    from qutrit_sing.arith import imag_part, real_part
    return real_part(c), imag_part(c)


def check_gb_uniqueness(n=200, sympy_every=1):
    """Reduced bases agree under generator permutation and with sympy."""
    V = ("x", "y", "z")
    syms = sympy.symbols(V)
    counter = [0]
    ideal_gens = st.lists(polys(V, 3, 3, st.builds(mpq, small_int)), min_size=2, max_size=3)

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(ideal_gens, st.randoms(use_true_random=False))
    def run(gens, rnd):
        counter[0] += 1
        gens = [g for g in gens if not g.is_zero()] or [MultiPoly.var(V, "x")]
        gb = buchberger(gens)
        perm = list(gens)
        rnd.shuffle(perm)
        assert tuple(buchberger(perm)) == tuple(gb)
        # scaling a generator does not change the ideal either
        assert tuple(buchberger([perm[0].scale(mpq(-3, 2))] + perm[1:])) == tuple(gb)
        for g in gens:
            assert normal_form(g, gb).is_zero()
        if counter[0] % sympy_every == 0:
            ref = sympy.groebner([_to_sympy(g, syms) for g in gens], *syms, order="grevlex")
            mine = {sympy.expand(_to_sympy(g, syms)) for g in gb}
            theirs = {sympy.expand(e / sympy.LC(e, *syms, order="grevlex")) for e in ref.exprs}
            assert mine == theirs
    run()
    return counter[0]


def check_root_residuals(n=1000):
    """Every returned root has a small backward residual; multiplicities add up."""
    t = MultiPoly.var(("t",), "t")
    counter = [0]
    factor = st.tuples(st.integers(-6, 6), st.integers(1, 4), st.integers(-6, 6), st.integers(1, 3))

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(st.lists(factor, min_size=1, max_size=6), st.integers(1, 7), st.booleans())
    def run(factors, lead, gaussian):
        counter[0] += 1
        p = MultiPoly.constant(("t",), lead)
        for num, den, im, mult in factors:
            root = gauss(mpq(num, den), mpq(im, 2)) if gaussian else mpq(num, den)
            p = p * (t - root) ** mult
        roots = univariate_roots(p)
        degree = p.total_degree()
        assert sum(r.multiplicity for r in roots) == degree
        c = np.array([complex(p.coefficient((d,))) for d in range(degree + 1)])
        for r in roots:
            scale = float(np.sum(np.abs(c) * np.abs(r.value) ** np.arange(degree + 1)))
            resid = abs(np.polynomial.polynomial.polyval(r.value, c))
            assert resid <= 1e-12 * scale
    run()
    return counter[0]


def check_slocc_action(n=1000):
    """g.(h.phi) == (gh).phi exactly."""
    counter = [0]
    entries = st.lists(st.one_of(st.just(0), rationals), min_size=27, max_size=27).filter(any)

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(entries, st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 4))
    def run(coeffs, s1, s2, shears):
        counter[0] += 1
        phi = StateTensor(coeffs)
        g = random_sl3_triple(s1, shears)
        h = random_sl3_triple(s2, 3)
        gh = tuple(matmul(a, b) for a, b in zip(g, h))
        assert slocc_act(slocc_act(phi, h), g) == slocc_act(phi, gh)
    run()
    return counter[0]


def check_inverse(n=1000):
    counter = [0]

    @settings(max_examples=n, deadline=None, suppress_health_check=_QUIET, database=None)
    @given(scalars.filter(bool), scalars)
    def run(a, b):
        counter[0] += 1
        assert (a * b) * (1 / a) == b
    run()
    return counter[0]
