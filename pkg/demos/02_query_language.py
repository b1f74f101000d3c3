"""The concrete syntax: tree documents, the four query layers, quantifiers.

Uses the bundled CubeSAT corpus. Layer 1 talks about reachability, layer 2
bounds a metric on one attack, layer 3 computes a metric for a formula,
and layer 4 quantifies over all attacks.
"""

import atquery
from atquery import (
    check_layer2,
    check_layer4,
    format_formula,
    layer_of,
    metric_layer3,
    parse_formula,
    parse_tree,
    sat_attacks,
)

at = parse_tree(atquery.corpus_path("cubesat.at").read_text(encoding="utf-8"))
tree = at.tree
print(f"CubeSAT tree: {len(tree.nodes)} nodes, {len(tree.basic_order)} basic steps,"
      f" domains: {[d.name for d in at.domains]}")
print("IGP is shared by:", tree.parents("IGP"))
print("ADA is shared by:", tree.parents("ADA"))

# --- layer 1: which attacks disrupt operations without touching DoS? ----

phi = parse_formula("MA(DCOP & !DoS)", at)
print("\nminimal non-DoS disruptions:")
for attack in sorted(sat_attacks(tree, phi), key=lambda a: (len(a), sorted(a))):
    print("  ", sorted(attack))

# --- layer 2: is this specific attack plan cheap and quiet? -------------

plan = frozenset({"Sh", "ScC", "CME", "SLU", "LDG", "LM", "LDB", "MDE"})
psi = parse_formula("M[cost](TDC) <= 25 & M[prob](TDC) > 0.001", at)
print("\nplan:", sorted(plan))
print("cheap and not hopeless:", check_layer2(plan, at, psi))

# --- layer 3: metrics of formulas, with what-if overrides ----------------

for text in [
    "V[cost](ADA)",
    "V[cost](DCOP)",
    "Skill(KR)",
    "Skill(KR)[IGP @skill := 20]",   # treat the phishing module as one step
    "ParTime(DoS)",
]:
    xi = parse_formula(text, at)
    print(f"{text:35} = {metric_layer3(at, xi)}")

# --- layer 4: quantified what-if scenarios --------------------------------

for text in [
    "exists(TDC[EV:=0])",             # tampering without the exploit?
    "forall(KR => LM ;)",             # is the misconfiguration unavoidable?
    "exists( ; Cost(ADA) < 20)",      # cheap database access?
    "!exists(KR & !ADA ;)",           # no comms kill without DB access?
]:
    gamma = parse_formula(text, at)
    outcome = check_layer4(at, gamma)
    witness = sorted(outcome.witness) if outcome.witness is not None else "-"
    print(f"{text:32} layer {layer_of(gamma)}  verdict={outcome.verdict}  "
          f"witness={witness}")

# Round-trip: every parsed formula prints back to an equivalent form.
f = parse_formula("forall((AUI & DS) => (Cost(DCOP) < 35 & ParTime(DCOP) < 60))", at)
print("\nnormalized form:", format_formula(f))
