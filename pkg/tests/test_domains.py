"""Metric domain laws and folds."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from atquery import (
    DomainValueError,
    MetricDomain,
    UnknownDomainError,
    builtin_domain,
    check_axioms,
    compare,
    fold_delta,
    fold_nabla,
)
from atquery.domains import BUILTIN_NAMES, INF


def test_builtin_mincost_row():
    d = builtin_domain("mincost")
    assert d.nabla(24, 26) == 24
    assert d.delta(15, 2) == 17
    assert d.one_nabla == INF
    assert d.one_delta == 0
    assert d.leq(3, INF)


def test_builtin_maxprob_row():
    d = builtin_domain("maxprob")
    assert d.nabla(0.2, 0.5) == 0.5
    assert d.delta(0.5, 0.5) == 0.25
    assert d.one_nabla == 0.0
    assert d.one_delta == 1.0


@pytest.mark.parametrize("name,delta_example", [
    ("mincost", (15, 2, 17)),
    ("seqtime", (15, 2, 17)),
    ("partime", (15, 2, 15)),
    ("minskill", (15, 2, 15)),
])
def test_builtin_nat_rows(name, delta_example):
    d = builtin_domain(name)
    x, y, expected = delta_example
    assert d.delta(x, y) == expected
    assert d.nabla(x, y) == min(x, y)
    assert d.one_nabla == INF and d.one_delta == 0


def test_unknown_domain():
    with pytest.raises(UnknownDomainError):
        builtin_domain("bogus")


def test_fold_delta_cost():
    d = builtin_domain("mincost")
    assert fold_delta(d, [15, 2, 7]) == 24
    assert fold_delta(d, []) == 0
    assert fold_delta(builtin_domain("partime"), [15, 2, 7]) == 15


def test_fold_nabla():
    d = builtin_domain("mincost")
    assert fold_nabla(d, [24, 26]) == 24
    assert fold_nabla(d, []) == INF
    assert fold_nabla(builtin_domain("maxprob"), [0.2, 0.5]) == 0.5


def test_infinity_arithmetic():
    d = builtin_domain("mincost")
    assert fold_delta(d, [INF, 3]) == INF
    assert fold_nabla(d, [INF, 3]) == 3
    assert builtin_domain("partime").delta(INF, 4) == INF


@pytest.mark.parametrize("name,bad", [
    ("mincost", -1),
    ("mincost", 1.5),
    ("maxprob", 1.5),
    ("maxprob", -0.1),
    ("mincost", True),
])
def test_domain_value_errors(name, bad):
    with pytest.raises(DomainValueError):
        fold_delta(builtin_domain(name), [bad])


def test_axioms_hold_for_builtins():
    nat_samples = [0, 1, 5, INF]
    unit_samples = [0.0, 0.3, 0.7, 1.0]
    for name in BUILTIN_NAMES:
        d = builtin_domain(name)
        samples = unit_samples if d.value_kind == "unit" else nat_samples
        report = check_axioms(d, samples)
        assert report.ok, report.violations


def test_degenerate_min_min_domain():
    # (naturals+inf, min, min, inf, inf, <=): units, commutativity,
    # associativity and distributivity all hold, but absorption does not:
    # min(1, min(1, 0)) = 0 != 1.
    d = MetricDomain("minmin", "nat", min, min, INF, INF, lambda a, b: a <= b)
    report = check_axioms(d, [0, 1])
    failed = {v.axiom for v in report.violations}
    assert failed == {"absorption"}
    assert d.delta(d.one_delta, 0) == 0  # the unit law itself is fine


def test_broken_max_plus_fails_absorption():
    d = MetricDomain("maxplus", "nat", max, lambda a, b: a + b, 0, 0,
                     lambda a, b: a <= b)
    report = check_axioms(d, [1, 2])
    assert not report.ok
    assert any(v.axiom == "absorption" for v in report.violations)
    # direct arithmetic at the pair (1, 2): 1 nabla (1 delta 2) = max(1, 3) = 3
    assert d.nabla(1, d.delta(1, 2)) == 3


def _random_values(rng, domain, n):
    if domain.value_kind == "nat":
        return [INF if rng.random() < 0.1 else rng.randint(0, 60)
                for _ in range(n)]
    return [round(rng.random(), 6) for _ in range(n)]


def test_axioms_random_triples():
    rng = random.Random(20240917)
    for name in BUILTIN_NAMES:
        d = builtin_domain(name)
        for _ in range(100):
            triple = _random_values(rng, d, 3)
            report = check_axioms(d, triple)
            assert report.ok, (name, triple, report.violations)


@given(st.lists(st.integers(min_value=0, max_value=10**6), max_size=8),
       st.randoms(use_true_random=False))
def test_fold_order_insensitive_nat(values, rng):
    d = builtin_domain("mincost")
    shuffled = list(values)
    rng.shuffle(shuffled)
    assert fold_delta(d, values) == fold_delta(d, shuffled)
    assert fold_nabla(d, values) == fold_nabla(d, shuffled)


@given(st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
                max_size=8),
       st.randoms(use_true_random=False))
def test_fold_order_insensitive_unit(values, rng):
    d = builtin_domain("maxprob")
    shuffled = list(values)
    rng.shuffle(shuffled)
    assert abs(fold_delta(d, values) - fold_delta(d, shuffled)) <= 1e-9
    assert abs(fold_nabla(d, values) - fold_nabla(d, shuffled)) <= 1e-9


def test_fold_level_absorption_consequence():
    # extending a family of attacks by supersets never changes the outer fold
    rng = random.Random(5)
    for name in BUILTIN_NAMES:
        d = builtin_domain(name)
        for _ in range(50):
            base = [_random_values(rng, d, rng.randint(0, 4))
                    for _ in range(rng.randint(1, 4))]
            supersets = [s + _random_values(rng, d, rng.randint(1, 3))
                         for s in base for _ in range(rng.randint(0, 2))]
            lhs = fold_nabla(d, [fold_delta(d, s) for s in base + supersets])
            rhs = fold_nabla(d, [fold_delta(d, s) for s in base])
            assert d.close(lhs, rhs), (name, base, supersets)


def test_compare_comparators():
    d = builtin_domain("mincost")
    assert compare(d, "<=", 24, 24) and compare(d, "<=", 24, 25)
    assert not compare(d, "<", 24, 24) and compare(d, "<", 24, 25)
    assert compare(d, ">=", 24, 24) and compare(d, ">", 25, 24)
    assert compare(d, "==", 24, 24) and compare(d, "!=", 24, 25)
    assert compare(d, "<", 24, INF)
    with pytest.raises(ValueError):
        compare(d, "<>", 1, 2)


def test_parse_and_format_values():
    cost = builtin_domain("mincost")
    assert cost.parse_value("15") == 15
    assert cost.parse_value("inf") == INF
    assert cost.format_value(INF) == "inf"
    assert cost.format_value(24) == "24"
    with pytest.raises(DomainValueError):
        cost.parse_value("1.5")
    prob = builtin_domain("maxprob")
    assert prob.parse_value("0.125") == 0.125
    assert prob.parse_value("1") == 1.0
    with pytest.raises(DomainValueError):
        prob.parse_value("0.1234567891")  # ten decimals
    with pytest.raises(DomainValueError):
        prob.parse_value("2")
