"""The diagram engine: combinators, quantification, renaming, enumeration,
canonicity, and the structural invariant checker."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from atquery import Bdd, BddManager
from atquery.errors import (
    BddInvariantError,
    EnumerationCapExceeded,
    LengthMismatchError,
    NonInjectiveMapError,
    OrderMismatchError,
    OrderViolationError,
    PartialAssignmentError,
    UnknownVariableError,
)

from helpers import table_of


@pytest.fixture
def mgr():
    return BddManager(["x", "y", "z", "w"])


def test_var_eval(mgr):
    x = mgr.var("x")
    assert x.evaluate({"x": 1}) == 1
    assert x.evaluate({"x": 0}) == 0
    assert mgr.var("x") == x  # unique table: same node


def test_unknown_variable(mgr):
    with pytest.raises(UnknownVariableError):
        mgr.var("nope")


def test_contradiction_and_tautology(mgr):
    x = mgr.var("x")
    assert (x & ~x).is_false
    assert (x | ~x).is_true


def test_apply_truth_tables(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    for ax in (0, 1):
        for ay in (0, 1):
            env = {"x": ax, "y": ay}
            assert (x & y).evaluate(env) == (ax and ay)
            assert (x | y).evaluate(env) == (ax or ay)
            assert (x ^ y).evaluate(env) == (ax ^ ay)
            assert (~x).evaluate(env) == (not ax)


def test_order_mismatch():
    m1, m2 = BddManager(["x"]), BddManager(["x"])
    with pytest.raises(OrderMismatchError):
        m1.var("x") & m2.var("x")


def test_restrict(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    assert x.restrict("x", 1).is_true
    assert (x & y).restrict("x", 0).is_false
    assert (x & y).restrict("x", 1) == y
    # vacuous restriction returns the same node
    assert x.restrict("y", 1) == x


def test_exists(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    assert x.exists({"x"}).is_true
    assert (x & y).exists({"x"}) == y
    assert (x & y).exists([]) == (x & y)
    assert (x & y).exists(["x", "y"]).is_true


def test_exists_equals_restrict_or(mgr):
    rng = random.Random(3)
    vs = [mgr.var(n) for n in "xyzw"]
    for _ in range(50):
        b = vs[rng.randrange(4)]
        for _ in range(rng.randint(1, 6)):
            op, other = rng.choice("&|^"), vs[rng.randrange(4)]
            b = b & other if op == "&" else b | other if op == "|" else b ^ other
        name = rng.choice("xyzw")
        law = b.restrict(name, 0) | b.restrict(name, 1)
        assert b.exists({name}) == law  # same node, not merely equivalent


def test_rename(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    assert x.rename({"x": "y"}) == y
    assert x.rename({"x": "y"}).rename({"y": "x"}) == x
    moved = (x & y).rename({"x": "z", "y": "w"})
    assert moved.evaluate({"z": 1, "w": 1}) == 1
    assert moved.evaluate({"z": 1, "w": 0}) == 0


def test_rename_errors(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    with pytest.raises(NonInjectiveMapError):
        (x & y).rename({"x": "z", "y": "z"})
    with pytest.raises(NonInjectiveMapError):
        (x & y).rename({"x": "y"})  # collides with untouched y
    with pytest.raises(OrderViolationError):
        (x & y).rename({"x": "w", "y": "z"})  # crosses the order
    with pytest.raises(UnknownVariableError):
        x.rename({"x": "nope"})


def test_subset_constraint_one_pair():
    m = BddManager(["p", "u"])
    c = m.subset_constraint(["p"], ["u"])
    rows = [(pv, uv, c.evaluate({"p": pv, "u": uv})) for pv in (0, 1) for uv in (0, 1)]
    assert [(0, 1, 1)] == [(p, u, v) for p, u, v in rows if v]


def test_subset_constraint_two_pairs():
    m = BddManager(["p1", "u1", "p2", "u2"])
    c = m.subset_constraint(["p1", "p2"], ["u1", "u2"])
    sat = 0
    for row in range(16):
        env = {"p1": row & 1, "u1": (row >> 1) & 1,
               "p2": (row >> 2) & 1, "u2": (row >> 3) & 1}
        primed = {k for k in ("1", "2") if env[f"p{k}"]}
        unprimed = {k for k in ("1", "2") if env[f"u{k}"]}
        expected = primed < unprimed
        assert bool(c.evaluate(env)) == expected
        sat += c.evaluate(env)
    assert sat == 5


def test_subset_constraint_equal_assignment_false():
    m = BddManager(["p", "u"])
    c = m.subset_constraint(["p"], ["u"])
    assert c.evaluate({"p": 1, "u": 1}) == 0
    assert c.evaluate({"p": 0, "u": 0}) == 0


def test_subset_constraint_length_mismatch(mgr):
    with pytest.raises(LengthMismatchError):
        mgr.subset_constraint(["x"], ["y", "z"])


def test_allsat(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    assert mgr.true.allsat(["x"]) == {frozenset(), frozenset({"x"})}
    assert mgr.false.allsat(["x"]) == set()
    assert (x & y).allsat(["x", "y"]) == {frozenset({"x", "y"})}
    # don't-care expansion to total assignments
    assert x.allsat(["x", "y"]) == {frozenset({"x"}), frozenset({"x", "y"})}
    with pytest.raises(ValueError):
        (x & y).allsat(["x"])  # does not cover the support
    with pytest.raises(EnumerationCapExceeded):
        mgr.true.allsat(["x", "y", "z"], limit=3)


def test_eval_partial_assignment(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    with pytest.raises(PartialAssignmentError):
        (x & y).evaluate({"x": 1})


def test_support_and_node_count(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    assert (x & y).support() == {"x", "y"}
    assert mgr.true.support() == set()
    assert mgr.true.node_count() == 1
    assert x.node_count() == 3  # node plus both terminals


def test_product_bound(mgr):
    rng = random.Random(9)
    vs = [mgr.var(n) for n in "xyzw"]

    def random_bdd():
        b = vs[rng.randrange(4)]
        for _ in range(rng.randint(0, 5)):
            other = vs[rng.randrange(4)]
            b = rng.choice([b & other, b | other, b ^ other, ~b])
        return b

    for _ in range(50):
        a, b = random_bdd(), random_bdd()
        assert (a & b).node_count() <= a.node_count() * b.node_count()


def test_canonicity_random_programs(mgr):
    rng = random.Random(42)
    names = ["x", "y", "z", "w"]
    pool = [(mgr.var(n), table_of(mgr.var(n), names)) for n in names]
    for _ in range(120):
        a, ta = pool[rng.randrange(len(pool))]
        b, tb = pool[rng.randrange(len(pool))]
        op = rng.choice("&|^!r")
        if op == "&":
            c, tc = a & b, None
        elif op == "|":
            c, tc = a | b, None
        elif op == "^":
            c, tc = a ^ b, None
        elif op == "!":
            c, tc = ~a, None
        else:
            name = rng.choice(names)
            c, tc = a.restrict(name, rng.randint(0, 1)), None
        tc = table_of(c, names)
        c.check_invariants()
        pool.append((c, tc))
    for b1, t1 in pool:
        for b2, t2 in pool:
            assert (t1 == t2) == (b1 == b2)


_NAMES = ("x", "y", "z")


def _exprs():
    leaves = st.sampled_from(_NAMES)
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.tuples(st.just("not"), sub),
            st.tuples(st.sampled_from(["and", "or", "xor"]), sub, sub),
        ),
        max_leaves=8)


def _build(expr, mgr):
    if isinstance(expr, str):
        return mgr.var(expr)
    if expr[0] == "not":
        return ~_build(expr[1], mgr)
    a, b = _build(expr[1], mgr), _build(expr[2], mgr)
    return {"and": a & b, "or": a | b, "xor": a ^ b}[expr[0]]


def _truth(expr, env):
    if isinstance(expr, str):
        return env[expr]
    if expr[0] == "not":
        return not _truth(expr[1], env)
    a, b = _truth(expr[1], env), _truth(expr[2], env)
    return {"and": a and b, "or": a or b, "xor": a != b}[expr[0]]


@given(_exprs())
def test_diagrams_match_boolean_semantics(expr):
    mgr = BddManager(_NAMES)
    b = _build(expr, mgr)
    b.check_invariants()
    for row in range(2 ** len(_NAMES)):
        env = {n: bool((row >> i) & 1) for i, n in enumerate(_NAMES)}
        assert bool(b.evaluate(env)) == _truth(expr, env)


def test_invariant_checker_catches_corruption():
    m = BddManager(["x", "y"])
    x = m.var("x")
    # hand-build a redundant node behind the manager's back
    m._nodes.append((m._level_of("y"), x.node, x.node))
    bad = Bdd(m, len(m._nodes) - 1)
    with pytest.raises(BddInvariantError):
        bad.check_invariants()


def test_to_dot(mgr):
    x, y = mgr.var("x"), mgr.var("y")
    dot = (x & y).to_dot()
    assert dot.startswith("digraph")
    assert "style=dashed" in dot and '"x"' in dot and '"y"' in dot
