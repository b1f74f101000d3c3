"""Why trust the engine? Cross-validate against brute force, then scale.

The oracle evaluates the denotational semantics by exhaustive enumeration
and never touches a diagram. On small random trees the two must agree
everywhere; on larger shared trees only the diagram path stays feasible.
"""

import random
import time
from itertools import combinations

from atquery import (
    And,
    Atom,
    AttackTree,
    AttributedTree,
    Evidence,
    MetricValue,
    MinimalAttack,
    Not,
    Or,
    builtin_domain,
    compile_formula,
    metric_layer3,
    naive_eval,
    naive_phi_metric,
)


def random_tree(rng, max_basics):
    basics = [f"b{i}" for i in range(rng.randint(2, max_basics))]
    nodes, node_type, children = list(basics), {b: "basic" for b in basics}, {}
    pool = list(basics)
    for gi in range(rng.randint(1, len(basics))):
        kids = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        name = f"g{gi}"
        nodes.append(name)
        node_type[name] = rng.choice(["and", "or"])
        children[name] = kids
        pool.append(name)
    orphans = [n for n in nodes if not any(n in k for k in children.values())]
    nodes.append("root")
    node_type["root"] = "and"
    children["root"] = orphans
    return AttackTree(nodes, node_type, children, "root")


def random_formula(rng, tree, depth):
    if depth == 0 or rng.random() < 0.3:
        return Atom(rng.choice(list(tree.nodes)))
    r = rng.random()
    if r < 0.2:
        return Not(random_formula(rng, tree, depth - 1))
    if r < 0.5:
        ctor = And if rng.random() < 0.5 else Or
        return ctor(random_formula(rng, tree, depth - 1),
                    random_formula(rng, tree, depth - 1))
    if r < 0.7:
        return Evidence(random_formula(rng, tree, depth - 1),
                        rng.choice(tree.basic_order), rng.randint(0, 1))
    return MinimalAttack(random_formula(rng, tree, depth - 1))


def pair_ladder(pairs):
    """Root needs one of each (a_i | b_i); pair gates are shared with two
    redundant conjunction gates, making the tree properly DAG-structured."""
    nodes, node_type, children, costs = [], {}, {}, {}
    gates = []
    for i in range(pairs):
        a, b, w = f"a{i}", f"b{i}", f"w{i}"
        nodes += [a, b, w]
        node_type.update({a: "basic", b: "basic", w: "or"})
        children[w] = [a, b]
        costs[a], costs[b] = 3 * i + 1, 2 * i + 2
        gates.append(w)
    nodes += ["p", "q", "pq", "goal"]
    node_type.update({"p": "and", "q": "and", "pq": "or", "goal": "and"})
    children.update({"p": gates[:2], "q": gates[1:3], "pq": ["p", "q"],
                     "goal": gates + ["pq"]})
    return AttackTree(nodes, node_type, children, "goal"), costs


# --- agreement on random instances ---------------------------------------

rng = random.Random(2024)
cases = attacks_checked = 0
for _ in range(25):
    tree = random_tree(rng, max_basics=7)
    phi = random_formula(rng, tree, depth=4)
    cf = compile_formula(tree, phi)
    for k in range(len(tree.basic_order) + 1):
        for combo in combinations(tree.basic_order, k):
            attack = frozenset(combo)
            assert cf.root.descend(attack) == naive_eval(attack, tree, phi)
            attacks_checked += 1
    cases += 1
print(f"{cases} random formulae, {attacks_checked} attacks: no disagreement")

# --- scaling on a shared-subtree family ----------------------------------

cost = builtin_domain("mincost")
print(f"\n{'pairs':>5} {'steps':>5} {'diagram':>12} {'enumeration':>12}")
for pairs in (4, 6, 8, 10, 12):
    tree, costs = pair_ladder(pairs)
    at = AttributedTree(tree, [cost], [costs])
    goal = MetricValue("mincost", Atom(tree.root))

    t0 = time.perf_counter()
    fast = metric_layer3(at, goal)
    t_fast = time.perf_counter() - t0

    if pairs <= 8:  # 2**16 evaluations already takes a while
        t0 = time.perf_counter()
        slow = naive_phi_metric(at, "mincost", Atom(tree.root))
        t_slow = time.perf_counter() - t0
        assert fast == slow
        slow_txt = f"{t_slow * 1000:10.1f} ms"
    else:
        slow_txt = "   (skipped)"
    print(f"{pairs:>5} {len(tree.basic_order):>5} {t_fast * 1000:10.2f} ms {slow_txt}")

print("\nThe diagram sweep grows with diagram size, not with 2**steps;")
print("that is the entire point of compiling formulas instead of enumerating.")
