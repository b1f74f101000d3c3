"""Facts pinned about the bundled corpus files."""

import pytest

import atquery
from atquery import (
    check_layer2,
    check_layer4,
    naive_layer2,
    naive_layer4,
    parse_formula,
    parse_queries,
    parse_tree,
)


@pytest.fixture(scope="module")
def cubesat():
    return parse_tree(atquery.corpus_path("cubesat.at").read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def excerpt_doc():
    return parse_tree(atquery.corpus_path("excerpt.at").read_text(encoding="utf-8"))


def test_corpus_trees_validate(cubesat, excerpt_doc):
    assert cubesat.tree.validate().ok
    assert excerpt_doc.tree.validate().ok


def test_shared_subtrees(cubesat):
    tree = cubesat.tree
    assert set(tree.parents("IGP")) == {"DoS", "GA"}
    assert set(tree.parents("ADA")) == {"TDC", "UMS"}


def test_sharing_breaks_modules(cubesat):
    tree = cubesat.tree
    # IGP sits below GA but is also reachable through the DoS branch, so
    # neither GA nor ADA is a module; IGP itself still is one.
    assert not tree.is_module("GA")
    assert not tree.is_module("ADA")
    assert tree.is_module("IGP")
    assert tree.is_module("EP")


def test_query_list_parses_all_layers(cubesat):
    queries = parse_queries(
        atquery.corpus_path("cubesat.atm").read_text(encoding="utf-8"), cubesat)
    assert [q.layer for q in queries] == [1, 2, 2, 3, 4, 4, 4, 4]


def test_goal_minimal_attacks_and_metrics(cubesat):
    # expected values computed once by the enumeration oracle over all
    # 2**18 attacks; frozen here so the default suite stays fast
    from atquery import metric_layer3, parse_formula, sat_attacks
    per_branch = {"DoS": 6, "TDC": 4, "KR": 4}
    total = 0
    for goal, count in per_branch.items():
        attacks = sat_attacks(cubesat.tree, parse_formula(f"MA({goal})", cubesat))
        assert len(attacks) == count, goal
        total += count
    goal_attacks = sat_attacks(cubesat.tree, parse_formula("MA(DCOP)", cubesat))
    assert len(goal_attacks) == total == 14
    expected = {"cost": 13, "prob": 0.02835, "skill": 25, "partime": 5}
    for dom, value in expected.items():
        got = metric_layer3(cubesat, parse_formula(f"V[{dom}](DCOP)", cubesat))
        assert cubesat.domain(dom).close(got, value), (dom, got)


def test_intermediate_attribution_parity(excerpt_doc):
    # overriding a pruned module's value must agree between engine and oracle
    at = excerpt_doc
    psi = parse_formula("(M[cost](ADA) <= 20)[EP @cost := 3]", at)
    attack = frozenset({"IGP", "LDG", "EP"})
    assert check_layer2(attack, at, psi) is True
    assert naive_layer2(attack, at, psi) is True
    gamma = parse_formula("exists( ; (M[cost](ADA) <= 20)[EP @cost := 3])", at)
    assert check_layer4(at, gamma) == naive_layer4(at, gamma)
