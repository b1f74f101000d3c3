"""Model-checking entry points for the four query layers.

Layer 1 walks the compiled diagram along an attack; layer 2 recurses over
the formula, folding attack values when a metric bound is hit; layer 3 runs
a bottom-up sweep over the diagram that generalises shortest path on DAGs
to any metric domain; layer 4 scans attacks in a fixed deterministic order
(ascending cardinality, then declaration order) so witnesses are
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .bdd import Bdd
from .compiler import CompiledFormula, compile_formula
from .domains import MetricDomain, Value, compare
from .errors import EnumerationCapExceeded, MissingAttributionError
from .formulas import (
    Exists,
    Forall,
    Gamma,
    GammaNot,
    Holds,
    MetricBound,
    MetricValue,
    Phi,
    Psi,
    PsiAnd,
    PsiAttrib,
    PsiNot,
    Xi,
    XiAttrib,
    desugar,
    prune_for,
)
from .trees import Attack, AttackTree, AttributedTree

#: Default bound on the number of basic steps a quantifier scan may
#: enumerate over (the scan visits up to 2**n attacks).
DEFAULT_CAP = 24


@dataclass(frozen=True)
class CheckOutcome:
    """Quantifier verdict plus the example/counterexample attack, when the
    deciding branch produced one."""

    verdict: bool
    witness: Attack | None = None


# --- layer 1 -----------------------------------------------------------------

def check_layer1(attack: Iterable[str], tree: AttackTree, phi: Phi) -> bool:
    """Does the attack satisfy the layer-1 formula?"""
    cf = compile_formula(tree, phi)
    members = attack if isinstance(attack, frozenset) else frozenset(attack)
    return cf.root.descend(members)


def sat_attacks(tree: AttackTree, phi: Phi, cap: int | None = None) -> set[Attack]:
    """All attacks satisfying the formula, over the canonical enumeration
    universe (evidence-removed variables are omitted from the reported
    attacks)."""
    cf = compile_formula(tree, phi)
    if cap is not None and len(cf.enum_vars) > cap:
        raise EnumerationCapExceeded(
            f"{len(cf.enum_vars)} enumeration variables exceed the cap of {cap}")
    return cf.root.allsat(cf.enum_vars)


# --- layer 2 -----------------------------------------------------------------

class _PsiEvaluator:
    """Evaluates one layer-2 formula against many attacks; every embedded
    layer-1 formula is compiled exactly once."""

    def __init__(self, at: AttributedTree, psi: Psi):
        self.at = at
        self._compiled: dict[Phi, CompiledFormula] = {}
        self.psi = psi
        for phi in self._phis(psi):
            if phi not in self._compiled:
                self._compiled[phi] = compile_formula(at.tree, phi)

    @staticmethod
    def _phis(psi: Psi):
        match psi:
            case PsiNot(child):
                yield from _PsiEvaluator._phis(child)
            case PsiAnd(left, right):
                yield from _PsiEvaluator._phis(left)
                yield from _PsiEvaluator._phis(right)
            case PsiAttrib(child, _, _, _):
                yield from _PsiEvaluator._phis(child)
            case Holds(phi):
                yield phi
            case MetricBound(_, phi, _, _):
                yield phi

    def check(self, attack: Attack, at: AttributedTree | None = None) -> bool:
        return self._check(attack, self.at if at is None else at, self.psi)

    def _check(self, attack: Attack, at: AttributedTree, psi: Psi) -> bool:
        match psi:
            case PsiNot(child):
                return not self._check(attack, at, child)
            case PsiAnd(left, right):
                return self._check(attack, at, left) and self._check(attack, at, right)
            case Holds(phi):
                return self._compiled[phi].root.descend(attack)
            case MetricBound(domain, phi, cmp, bound):
                if not self._compiled[phi].root.descend(attack):
                    return False
                k = at.domain_index(domain)
                return compare(at.domains[k], cmp, at.attack_value(k, attack), bound)
            case PsiAttrib(child, target, domain, value):
                k = at.domain_index(domain)
                return self._check(attack, at.set_attribution(k, target, value), child)
        raise TypeError(f"not a core layer-2 formula: {psi!r}")


def check_layer2(attack: Iterable[str], at: AttributedTree, psi: Psi) -> bool:
    """Does the attack satisfy the layer-2 formula on this attributed tree?

    A metric bound holds only when the attack also satisfies the bound's
    inner formula; its value is the delta-fold over the whole attack.
    """
    core = desugar(psi)
    pruned = prune_for(at, core, at.domains)
    members = attack if isinstance(attack, frozenset) else frozenset(attack)
    return _PsiEvaluator(pruned, core).check(members)


# --- layer 3 -----------------------------------------------------------------

def _metric_sweep(cf: CompiledFormula, domain: MetricDomain, alpha: dict) -> Value:
    """Bottom-up sweep: terminals get the fold units, and an inner node
    combines its low value with (high value delta its variable's value).
    Node ids ascend from children to parents, so one sorted pass suffices."""
    root = cf.root.node
    if root == 0:
        return domain.one_nabla
    if root == 1:
        return domain.one_delta
    mgr = cf.manager
    nodes = mgr._nodes
    names = mgr._names
    reachable = set()
    stack = [root]
    while stack:
        u = stack.pop()
        if u <= 1 or u in reachable:
            continue
        reachable.add(u)
        _, low, high = nodes[u]
        stack.append(low)
        stack.append(high)
    value = {0: domain.one_nabla, 1: domain.one_delta}
    nabla, delta = domain.nabla, domain.delta
    for u in sorted(reachable):
        level, low, high = nodes[u]
        name = names[level]
        try:
            a = alpha[name]
        except KeyError:
            raise MissingAttributionError(
                f"{name!r} has no value for domain {domain.name!r}") from None
        value[u] = nabla(value[low], delta(value[high], a))
    return value[root]


def metric_layer3(at: AttributedTree, xi: Xi) -> Value:
    """Metric value of a layer-3 formula: the nabla-fold over the minimal
    satisfying attacks, computed on the diagram without enumerating them.
    An unsatisfiable formula yields the nabla unit."""
    core = desugar(xi)
    pruned = prune_for(at, core, at.domains)
    return _metric(pruned, core)


def _metric(at: AttributedTree, xi: Xi) -> Value:
    match xi:
        case XiAttrib(child, target, domain, value):
            k = at.domain_index(domain)
            return _metric(at.set_attribution(k, target, value), child)
        case MetricValue(domain, phi):
            k = at.domain_index(domain)
            cf = compile_formula(at.tree, phi)
            return _metric_sweep(cf, at.domains[k], at.attributions[k])
    raise TypeError(f"not a core layer-3 formula: {xi!r}")


# --- layer 4 -----------------------------------------------------------------

def _ordered_attacks(universe: Iterable[str]):
    """All subsets of the universe, by ascending cardinality and then
    lexicographically in declaration order."""
    names = tuple(universe)
    for k in range(len(names) + 1):
        for combo in combinations(names, k):
            yield frozenset(combo)


def _min_satisfying(b: Bdd, index_of: dict[str, int]) -> Attack | None:
    """First satisfying assignment in (cardinality, declaration-lex) order,
    found by dynamic programming over the diagram; don't-care variables are
    always left out (absent is both smaller and earlier)."""
    mgr = b.manager
    nodes, names = mgr._nodes, mgr._names
    best: dict[int, tuple[int, tuple[int, ...]] | None] = {0: None, 1: (0, ())}
    order = []
    seen = set()
    stack = [b.node]
    while stack:
        u = stack.pop()
        if u <= 1 or u in seen:
            continue
        seen.add(u)
        order.append(u)
        _, low, high = nodes[u]
        stack.extend((low, high))
    for u in sorted(order):
        level, low, high = nodes[u]
        idx = index_of[names[level]]
        lo = best[low]
        hi = best[high]
        taken = None if hi is None else (hi[0] + 1, (idx,) + hi[1])
        if lo is None:
            best[u] = taken
        elif taken is None:
            best[u] = lo
        else:
            best[u] = min(lo, taken)
    winner = best[b.node]
    if winner is None:
        return None
    by_index = {i: name for name, i in index_of.items()}
    return frozenset(by_index[i] for i in winner[1])


def check_layer4(at: AttributedTree, gamma: Gamma, cap: int = DEFAULT_CAP) -> CheckOutcome:
    """Decide a quantified formula, returning a deterministic witness for a
    true existential or counterexample for a false universal."""
    core = desugar(gamma)
    pruned = prune_for(at, core, at.domains)
    return _gamma(pruned, core, cap)


def _gamma(at: AttributedTree, gamma: Gamma, cap: int) -> CheckOutcome:
    match gamma:
        case GammaNot(child):
            inner = _gamma(at, child, cap)
            return CheckOutcome(not inner.verdict, None)
        case Exists(phi, psi):
            return _exists(at, phi, psi, cap)
        case Forall(phi, psi):
            return _forall(at, phi, psi, cap)
    raise TypeError(f"not a core layer-4 formula: {gamma!r}")


def _check_cap(universe, cap: int) -> None:
    if len(universe) > cap:
        raise EnumerationCapExceeded(
            f"{len(universe)} basic steps exceed the enumeration cap of {cap}")


def _exists(at: AttributedTree, phi: Phi | None, psi: Psi | None, cap: int) -> CheckOutcome:
    # The scan ranges over the full attack universe, not just the variables
    # the first side's diagram mentions: the second side may constrain steps
    # that an evidence operator removed from the first.
    universe = at.tree.basic_order
    accepts = compile_formula(at.tree, phi).root.descend if phi is not None else None
    _check_cap(universe, cap)
    psi_eval = _PsiEvaluator(at, psi) if psi is not None else None
    for attack in _ordered_attacks(universe):
        if accepts is not None and not accepts(attack):
            continue
        if psi_eval is not None and not psi_eval.check(attack):
            continue
        return CheckOutcome(True, attack)
    return CheckOutcome(False, None)


def _forall(at: AttributedTree, phi: Phi | None, psi: Psi | None, cap: int) -> CheckOutcome:
    universe = at.tree.basic_order
    _check_cap(universe, cap)
    if psi is None:
        # pure layer-1 universal: decide symbolically, recover the first
        # counterexample without scanning
        cf = compile_formula(at.tree, phi)
        failing = ~cf.root
        if failing.is_false:
            return CheckOutcome(True, None)
        index_of = {name: i for i, name in enumerate(universe)}
        return CheckOutcome(False, _min_satisfying(failing, index_of))
    accepts = compile_formula(at.tree, phi).root.descend if phi is not None else None
    psi_eval = _PsiEvaluator(at, psi)
    for attack in _ordered_attacks(universe):
        if accepts is not None and not accepts(attack):
            return CheckOutcome(False, attack)
        if not psi_eval.check(attack):
            return CheckOutcome(False, attack)
    return CheckOutcome(True, None)
