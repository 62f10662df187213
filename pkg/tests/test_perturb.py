import random

import pytest

from qutrit_sing import workers
from qutrit_sing.arith import mpq
from qutrit_sing.catalog import build_state
from qutrit_sing.classify import SectionClassification, classify_state
from qutrit_sing.perturb import (_check, adjacency_closure, directed_scan, parse_epsilon,
                                 random_jitter, run_perturbation)


@pytest.mark.parametrize("text,value", [("1e-2", mpq(1, 100)), ("1/8", mpq(1, 8)),
                                        ("0", mpq(0)), (0.5, mpq(1, 2))])
def test_parse_epsilon(text, value):
    assert parse_epsilon(text) == value


def test_parse_epsilon_rejects():
    for bad in ("-1e-2", "abc"):
        with pytest.raises(ValueError):
            parse_epsilon(bad)


def test_adjacency_closure():
    assert adjacency_closure(["D4"]) == ("A1", "A2", "A3", "D4")
    assert adjacency_closure(["A1", "A2"]) == ("A1", "A2")
    assert adjacency_closure([]) == ()


def test_random_jitter_bounds_and_determinism():
    eps = mpq(1, 100)
    assert random_jitter(random.Random(9), eps) == random_jitter(random.Random(9), eps)
    rng = random.Random(1)
    sizes = set()
    for _ in range(200):
        j = random_jitter(rng, eps)
        if j is None:
            continue
        nz = [c for c in j.coefficients if c]
        sizes.add(len(nz))
        assert all(abs(c) <= eps and (c / eps * 4).denominator == 1 for c in nz)
    assert min(sizes) <= 3 and max(sizes) >= 20


def _fake(verdict, types, mu):
    r = SectionClassification(verdict)
    r.milnor_sum = mu

    class P:
        def __init__(self, label):
            self.local_type = type("T", (), {"label": label})()
    r.points = [P(t) for t in types]
    return r


def test_breach_checks():
    base = _fake("isolated", ["D4"], 4)
    assert _check(base, _fake("isolated", ["A1", "A3"], 4)) is None
    assert _check(base, _fake("smooth", [], 0)) is None
    assert "exceeds" in _check(base, _fake("isolated", ["A1"] * 5, 5))
    # A3 is not adjacent to an A2 base even when the Milnor sum fits
    assert "outside" in _check(_fake("isolated", ["A2", "A2"], 4), _fake("isolated", ["A3"], 3))
    assert "non-isolated" in _check(base, _fake("non-isolated", [], None))


def test_zero_epsilon_keeps_base(phi2):
    rep = run_perturbation(phi2, 0, 2)
    assert rep.observed() == {"D4": 2} and not rep.breaches


def test_small_random_run(phi2):
    rep = run_perturbation(phi2, mpq(1, 100), 4, seed=5)
    assert not rep.breaches and not rep.errors
    assert all((t.milnor_sum or 0) <= 4 for t in rep.trials)
    assert rep.to_json_obj()["adjacency_closure"] == ["A1", "A2", "A3", "D4"]


def test_non_isolated_base_rejected():
    with pytest.raises(ValueError):
        run_perturbation(build_state("N24"), mpq(1, 100), 1)


def test_directed_scan_n2_predictions(phi2):
    outcomes = directed_scan(phi2, mpq(1, 100))
    named = [o for o in outcomes if not o.name.startswith("axis:")]
    assert named and not any(o.error for o in outcomes)
    for o in named:
        if o.predicted in ("A1", "A2", "Smooth"):
            assert o.predicted in (o.summary or "")
        elif o.predicted == "A3+":
            assert any(t in ("A3", "D4") for t in o.types)
    seen = {o.summary for o in outcomes}
    assert {"Smooth", "A1", "A2", "A3"} <= seen


def test_directed_scan_f43_reaches_a3():
    base = build_state("F4,3", {"b": 1})
    outcomes = directed_scan(base, mpq(1, 100))
    assert "A3" in {o.summary for o in outcomes}


def test_worker_count(monkeypatch):
    monkeypatch.delenv(workers.ENV_VAR, raising=False)
    assert workers.worker_count() == 1
    monkeypatch.setenv(workers.ENV_VAR, "64")
    assert 1 <= workers.worker_count() <= 64
    for bad in ("0", "two"):
        monkeypatch.setenv(workers.ENV_VAR, bad)
        with pytest.raises(ValueError):
            workers.worker_count()


def test_parallel_map_order(monkeypatch):
    monkeypatch.setattr(workers, "worker_count", lambda: 2)
    assert workers.parallel_map(abs, [-3, 1, -2]) == [3, 1, 2]


def test_pool_and_serial_agree(monkeypatch, phi2):
    serial = run_perturbation(phi2, mpq(1, 100), 2, seed=1)
    monkeypatch.setattr(workers, "worker_count", lambda: 2)
    pooled = run_perturbation(phi2, mpq(1, 100), 2, seed=1)
    assert serial.to_json_obj() == pooled.to_json_obj()
