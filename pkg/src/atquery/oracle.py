"""Brute-force reference semantics, by exhaustive enumeration.

Everything here is deliberately naive and never touches a decision diagram;
the point is an independent ground truth to cross-validate the compiled
path against. Enumeration is capped (default 16 basic steps) because the
scans are exponential.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .checker import CheckOutcome
from .domains import Value, compare, fold_nabla
from .errors import EnumerationCapExceeded
from .formulas import (
    And,
    Atom,
    Evidence,
    Exists,
    Forall,
    Gamma,
    GammaNot,
    Holds,
    Iff,
    Implies,
    MetricBound,
    MetricValue,
    MinimalAttack,
    MinimalDefence,
    Nequiv,
    Not,
    Or,
    Phi,
    Psi,
    PsiAnd,
    PsiAttrib,
    PsiIff,
    PsiImplies,
    PsiNequiv,
    PsiNot,
    PsiOr,
    Xi,
    XiAttrib,
    prune_for,
)
from .trees import BASIC, Attack, AttackTree, AttributedTree

DEFAULT_ORACLE_CAP = 16


def _all_attacks(tree: AttackTree, cap: int):
    basics = tree.basic_order
    if len(basics) > cap:
        raise EnumerationCapExceeded(
            f"{len(basics)} basic steps exceed the oracle cap of {cap}")
    for k in range(len(basics) + 1):
        for combo in combinations(basics, k):
            yield frozenset(combo)


def naive_eval(attack: Iterable[str], tree: AttackTree, phi: Phi,
               cap: int = DEFAULT_ORACLE_CAP) -> bool:
    """Evaluate a layer-1 formula by structural recursion on its semantics.

    Sugar connectives are evaluated directly (no desugaring), evidence
    overrides the attack bit by bit, and minimal-attack membership is
    decided by full enumeration.
    """
    members = attack if isinstance(attack, frozenset) else frozenset(attack)
    return _naive_eval(members, tree, phi, cap, {})


def _naive_eval(members: Attack, tree: AttackTree, phi: Phi, cap: int,
                minimal_sets: dict) -> bool:
    match phi:
        case Atom(name):
            return tree.structure_function(name, members)
        case Not(c):
            return not _naive_eval(members, tree, c, cap, minimal_sets)
        case And(a, b):
            return (_naive_eval(members, tree, a, cap, minimal_sets)
                    and _naive_eval(members, tree, b, cap, minimal_sets))
        case Or(a, b):
            return (_naive_eval(members, tree, a, cap, minimal_sets)
                    or _naive_eval(members, tree, b, cap, minimal_sets))
        case Implies(a, b):
            return ((not _naive_eval(members, tree, a, cap, minimal_sets))
                    or _naive_eval(members, tree, b, cap, minimal_sets))
        case Iff(a, b):
            return (_naive_eval(members, tree, a, cap, minimal_sets)
                    == _naive_eval(members, tree, b, cap, minimal_sets))
        case Nequiv(a, b):
            return (_naive_eval(members, tree, a, cap, minimal_sets)
                    != _naive_eval(members, tree, b, cap, minimal_sets))
        case Evidence(child, target, bit):
            if tree.node_type.get(target) != BASIC:
                tree = tree.prune_at(target)
                members = members & frozenset(tree.basic_order)
            members = members | {target} if bit else members - {target}
            return _naive_eval(members, tree, child, cap, minimal_sets)
        case MinimalAttack(child):
            return members in _minimal_sat(tree, child, cap, minimal_sets)
        case MinimalDefence(child):
            return members in _minimal_sat(tree, Not(child), cap, minimal_sets)
    raise TypeError(f"not a layer-1 formula: {phi!r}")


def naive_minimal_sat(tree: AttackTree, phi: Phi, cap: int = DEFAULT_ORACLE_CAP) -> set[Attack]:
    """The minimal satisfaction set: satisfying attacks without a satisfying
    strict subset. Always an antichain."""
    return _minimal_sat(tree, phi, cap, {})


def _minimal_sat(tree: AttackTree, phi: Phi, cap: int, minimal_sets: dict) -> set[Attack]:
    # memoized per (tree, formula) within one top-level call, so nested
    # minimal-attack operators do not recompute the set for every attack;
    # still pure enumeration
    key = (tree, phi)
    cached = minimal_sets.get(key)
    if cached is not None:
        return cached
    index = {b: i for i, b in enumerate(tree.basic_order)}

    def mask(attack: Attack) -> int:
        m = 0
        for b in attack:
            m |= 1 << index[b]
        return m

    minimal: list[Attack] = []
    masks: list[int] = []
    for attack in _all_attacks(tree, cap):  # ascending cardinality
        if not _naive_eval(attack, tree, phi, cap, minimal_sets):
            continue
        m = mask(attack)
        if any(k & m == k for k in masks):  # a smaller satisfying set exists
            continue
        minimal.append(attack)
        masks.append(m)
    result = set(minimal)
    minimal_sets[key] = result
    return result


def naive_phi_metric(at: AttributedTree, domain: str, phi: Phi,
                     cap: int = DEFAULT_ORACLE_CAP) -> Value:
    """Metric of a formula straight from the definition: fold the per-attack
    values of all minimal satisfying attacks."""
    k = at.domain_index(domain)
    minimal = naive_minimal_sat(at.tree, phi, cap)
    return fold_nabla(at.domains[k],
                      (at.attack_value(k, a) for a in sorted(minimal, key=sorted)))


def naive_layer2(attack: Iterable[str], at: AttributedTree, psi: Psi,
                 cap: int = DEFAULT_ORACLE_CAP) -> bool:
    """Semantic layer-2 evaluation (no diagrams, no compiled bounds)."""
    at = prune_for(at, psi, at.domains)
    return _naive_layer2(attack, at, psi, cap)


def _naive_layer2(attack: Iterable[str], at: AttributedTree, psi: Psi,
                  cap: int) -> bool:
    members = attack if isinstance(attack, frozenset) else frozenset(attack)
    match psi:
        case PsiNot(c):
            return not _naive_layer2(members, at, c, cap)
        case PsiAnd(a, b):
            return _naive_layer2(members, at, a, cap) and _naive_layer2(members, at, b, cap)
        case PsiOr(a, b):
            return _naive_layer2(members, at, a, cap) or _naive_layer2(members, at, b, cap)
        case PsiImplies(a, b):
            return (not _naive_layer2(members, at, a, cap)) or _naive_layer2(members, at, b, cap)
        case PsiIff(a, b):
            return _naive_layer2(members, at, a, cap) == _naive_layer2(members, at, b, cap)
        case PsiNequiv(a, b):
            return _naive_layer2(members, at, a, cap) != _naive_layer2(members, at, b, cap)
        case Holds(phi):
            return naive_eval(members, at.tree, phi, cap)
        case MetricBound(domain, phi, cmp, bound):
            if not naive_eval(members, at.tree, phi, cap):
                return False
            k = at.domain_index(domain)
            return compare(at.domains[k], cmp, at.attack_value(k, members), bound)
        case PsiAttrib(child, target, domain, value):
            k = at.domain_index(domain)
            return _naive_layer2(members, at.set_attribution(k, target, value), child, cap)
    raise TypeError(f"not a layer-2 formula: {psi!r}")


def naive_metric(at: AttributedTree, xi: Xi, cap: int = DEFAULT_ORACLE_CAP) -> Value:
    """Layer-3 value by enumeration; prunes intermediate targets first."""
    at = prune_for(at, xi, at.domains)
    return _naive_metric(at, xi, cap)


def _naive_metric(at: AttributedTree, xi: Xi, cap: int) -> Value:
    match xi:
        case XiAttrib(child, target, domain, value):
            k = at.domain_index(domain)
            return _naive_metric(at.set_attribution(k, target, value), child, cap)
        case MetricValue(domain, phi):
            return naive_phi_metric(at, domain, phi, cap)
    raise TypeError(f"not a layer-3 formula: {xi!r}")


def naive_layer4(at: AttributedTree, gamma: Gamma, cap: int = DEFAULT_ORACLE_CAP) -> CheckOutcome:
    """Direct quantifier evaluation over all attacks, in the same
    deterministic order as the checker."""
    at = prune_for(at, gamma, at.domains)
    return _naive_gamma(at, gamma, cap)


def _naive_gamma(at: AttributedTree, gamma: Gamma, cap: int) -> CheckOutcome:
    match gamma:
        case GammaNot(child):
            inner = _naive_gamma(at, child, cap)
            return CheckOutcome(not inner.verdict, None)
        case Exists(phi, psi):
            for attack in _all_attacks(at.tree, cap):
                if phi is not None and not naive_eval(attack, at.tree, phi, cap):
                    continue
                if psi is not None and not _naive_layer2(attack, at, psi, cap):
                    continue
                return CheckOutcome(True, attack)
            return CheckOutcome(False, None)
        case Forall(phi, psi):
            for attack in _all_attacks(at.tree, cap):
                if phi is not None and not naive_eval(attack, at.tree, phi, cap):
                    return CheckOutcome(False, attack)
                if psi is not None and not _naive_layer2(attack, at, psi, cap):
                    return CheckOutcome(False, attack)
            return CheckOutcome(True, None)
    raise TypeError(f"not a layer-4 formula: {gamma!r}")
