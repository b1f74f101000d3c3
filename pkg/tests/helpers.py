"""Shared generators and reference utilities for the test suite."""

from __future__ import annotations

import random
from itertools import combinations

from atquery import (
    And,
    Atom,
    AttackTree,
    AttributedTree,
    Evidence,
    Implies,
    MetricDomain,
    MinimalAttack,
    MinimalDefence,
    Not,
    Or,
    builtin_domain,
)
from atquery.domains import INF


def excerpt_tree() -> AttackTree:
    """The ground-station database access subtree used throughout."""
    nodes = ["ADA", "GA", "EP", "IGP", "LDG", "LM", "EV"]
    node_type = {"ADA": "and", "GA": "and", "EP": "or",
                 "IGP": "basic", "LDG": "basic", "LM": "basic", "EV": "basic"}
    children = {"ADA": ["GA", "EP"], "GA": ["IGP", "LDG"], "EP": ["LM", "EV"]}
    return AttackTree(nodes, node_type, children, "ADA")


EXCERPT_COSTS = {"IGP": 15, "LDG": 2, "LM": 7, "EV": 9}


def excerpt_attributed() -> AttributedTree:
    return AttributedTree(excerpt_tree(), [builtin_domain("mincost")], [EXCERPT_COSTS])


def all_attacks(tree: AttackTree):
    basics = tree.basic_order
    for k in range(len(basics) + 1):
        for combo in combinations(basics, k):
            yield frozenset(combo)


def random_tree(rng: random.Random, max_basics: int = 8) -> AttackTree:
    """A random valid DAG-structured tree; children may be shared."""
    n_basics = rng.randint(1, max_basics)
    basics = [f"b{i}" for i in range(n_basics)]
    nodes = list(basics)
    node_type = {b: "basic" for b in basics}
    children: dict[str, list[str]] = {}
    pool = list(basics)
    for gi in range(rng.randint(1, max(2, n_basics))):
        k = rng.randint(1, min(4, len(pool)))
        kids = rng.sample(pool, k)
        name = f"g{gi}"
        nodes.append(name)
        node_type[name] = rng.choice(["and", "or"])
        children[name] = kids
        pool.append(name)
    have_parents = {c for kids in children.values() for c in kids}
    orphans = [n for n in nodes if n not in have_parents]
    if len(orphans) == 1 and node_type[orphans[0]] != "basic":
        root = orphans[0]
    else:
        root = "root"
        nodes.append(root)
        node_type[root] = rng.choice(["and", "or"])
        children[root] = orphans
    tree = AttackTree(nodes, node_type, children, root)
    assert tree.validate().ok
    return tree


def random_phi(rng: random.Random, tree: AttackTree, depth: int = 5):
    """A random layer-1 formula; evidence targets only basic steps so the
    result is always well-formed."""
    names = list(tree.nodes)
    basics = list(tree.basic_order)

    def gen(d):
        if d == 0 or rng.random() < 0.3:
            return Atom(rng.choice(names))
        r = rng.random()
        if r < 0.18:
            return Not(gen(d - 1))
        if r < 0.42:
            return And(gen(d - 1), gen(d - 1))
        if r < 0.58:
            return Or(gen(d - 1), gen(d - 1))
        if r < 0.66:
            return Implies(gen(d - 1), gen(d - 1))
        if r < 0.78:
            return Evidence(gen(d - 1), rng.choice(basics), rng.randint(0, 1))
        if r < 0.92:
            return MinimalAttack(gen(d - 1))
        return MinimalDefence(gen(d - 1))

    return gen(depth)


def random_attribution(rng: random.Random, tree: AttackTree, domain: MetricDomain):
    if domain.value_kind == "nat":
        return {b: (INF if rng.random() < 0.05 else rng.randint(0, 30))
                for b in tree.basic_order}
    return {b: round(rng.random(), 6) for b in tree.basic_order}


def unfold_tree(tree: AttackTree) -> AttackTree:
    """Duplicate every shared gate so the result is tree-structured; basic
    steps stay shared (they carry the attack bits)."""
    nodes = list(tree.basic_order)
    node_type = {b: "basic" for b in nodes}
    children: dict[str, list[str]] = {}
    counter = [0]

    def copy(v: str) -> str:
        if tree.node_type[v] == "basic":
            return v
        counter[0] += 1
        name = f"{v}__u{counter[0]}"
        kids = [copy(c) for c in tree.children[v]]
        nodes.append(name)
        node_type[name] = tree.node_type[v]
        children[name] = kids
        return name

    root = copy(tree.root)
    if tree.node_type[tree.root] == "basic":
        # degenerate single-basic tree
        return tree
    return AttackTree(nodes, node_type, children, root)


def shared_ladder(pairs: int) -> tuple[AttackTree, dict[str, int]]:
    """A DAG family with shared subtrees: the root requires one of each
    (a_i | b_i) pair, plus a redundant disjunction of shared pair-gates.
    2*pairs basic steps; 2**pairs minimal attacks."""
    nodes = []
    node_type = {}
    children = {}
    costs = {}
    gates = []
    for i in range(pairs):
        a, b, w = f"a{i}", f"b{i}", f"w{i}"
        nodes += [a, b, w]
        node_type[a] = node_type[b] = "basic"
        node_type[w] = "or"
        children[w] = [a, b]
        costs[a] = 3 * i + 1
        costs[b] = 2 * i + 2
        gates.append(w)
    if pairs >= 3:
        # share w-gates between the root conjunction and two extra gates
        nodes += ["p", "q", "pq"]
        node_type["p"] = node_type["q"] = "and"
        node_type["pq"] = "or"
        children["p"] = [gates[0], gates[1]]
        children["q"] = [gates[1], gates[2]]
        children["pq"] = ["p", "q"]
        top_children = gates + ["pq"]
    else:
        top_children = gates
    nodes.append("goal")
    node_type["goal"] = "and"
    children["goal"] = top_children
    tree = AttackTree(nodes, node_type, children, "goal")
    assert tree.validate().ok
    return tree, costs


def table_of(bdd, names) -> int:
    """Truth table of a diagram as a bitmask over all assignments."""
    mask = 0
    for row in range(2 ** len(names)):
        assignment = {n: (row >> i) & 1 for i, n in enumerate(names)}
        if bdd.evaluate(assignment):
            mask |= 1 << row
    return mask
