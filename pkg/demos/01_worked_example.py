"""A first tour: build a small tree in code and ask it questions.

The model: an attacker wants admin access to the ground-station database
of a small satellite (ADA). They must gain access (GA: phishing IGP, then
a login LDG) and escalate privileges (EP: leverage a misconfiguration LM
or exploit a vulnerability EV).
"""

from atquery import (
    Atom,
    AttackTree,
    AttributedTree,
    Evidence,
    MetricBound,
    MetricValue,
    MinimalAttack,
    builtin_domain,
    check_layer1,
    check_layer2,
    metric_layer3,
    sat_attacks,
)

# --- the tree ----------------------------------------------------------

tree = AttackTree(
    nodes=["ADA", "GA", "EP", "IGP", "LDG", "LM", "EV"],
    node_type={"ADA": "and", "GA": "and", "EP": "or",
               "IGP": "basic", "LDG": "basic", "LM": "basic", "EV": "basic"},
    children={"ADA": ["GA", "EP"], "GA": ["IGP", "LDG"], "EP": ["LM", "EV"]},
    root="ADA",
)
print("valid:", tree.validate().ok)

# Which attacks succeed? The structure function decides per attack.
print("phishing alone succeeds:", tree.succeeds({"IGP"}))
print("phish + login + misconfig:", tree.succeeds({"IGP", "LDG", "LM"}))

# The whole suite of successful attacks is characterised by the minimal ones.
minimal = sat_attacks(tree, MinimalAttack(Atom("ADA")))
print("minimal attacks:", sorted(sorted(a) for a in minimal))

# --- attach costs -------------------------------------------------------

cost = builtin_domain("mincost")
at = AttributedTree(tree, [cost], [{"IGP": 15, "LDG": 2, "LM": 7, "EV": 9}])

# The cheapest way in: 15 + 2 + min(7, 9) = 24.
print("min cost to ADA:", metric_layer3(at, MetricValue("mincost", Atom("ADA"))))

# Per-attack checks: the LM route costs 24, the EV route 26.
lm_route = frozenset({"IGP", "LDG", "LM"})
ev_route = frozenset({"IGP", "LDG", "EV"})
budget = MetricBound("mincost", Atom("ADA"), "<=", 25)
print("LM route within 25:", check_layer2(lm_route, at, budget))
print("EV route within 25:", check_layer2(ev_route, at, budget))

# --- what-if: the vulnerability gets patched ----------------------------

# Force EV off inside the formula; only the misconfiguration path remains.
patched = Evidence(Atom("ADA"), "EV", 0)
print("LM route still works when EV is patched:",
      check_layer1(lm_route, tree, patched))
print("EV route with EV patched:", check_layer1(ev_route, tree, patched))

# What-if on values instead: a hardened login raises LDG's cost to 12.
hardened = at.set_attribution(0, "LDG", 12)
print("min cost after hardening the login:",
      metric_layer3(hardened, MetricValue("mincost", Atom("ADA"))))
print("original tree is untouched:",
      metric_layer3(at, MetricValue("mincost", Atom("ADA"))))
