"""Translate attack trees and layer-1 formulae into decision diagrams.

The variable order interleaves each basic step's variable with its primed
copy (b1, b1', b2, b2', ...), in canonical basic order. The primed copies
are only used inside the minimal-attack construction, which conjoins a
formula's diagram with "no strict subset also satisfies it":

    B  &  ~exists primed. (primed strictly below unprimed) & B[unprimed -> primed]

The subset constraint ranges over the full variable universe of the pruned
tree, so diagrams stay faithful pointwise on whole attacks even when
evidence removed some variables from B itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bdd import AND, OR, Bdd, BddManager
from .errors import UnknownNodeError
from .formulas import (
    And,
    Atom,
    Evidence,
    MinimalAttack,
    Not,
    Phi,
    desugar,
    evidence_targets,
    prune_for,
)
from .trees import BASIC, AttackTree

PRIME = "'"


def interleaved_variables(basics) -> list[str]:
    """Variable order b1 < b1' < b2 < b2' < ...; keeps renaming to primed
    copies order-safe."""
    out = []
    for b in basics:
        out.append(b)
        out.append(b + PRIME)
    return out


def _manager_for(tree: AttackTree) -> BddManager:
    return BddManager(interleaved_variables(tree.basic_order))


class _Translator:
    """Structure-function translation with per-node memoization, so shared
    subtrees are compiled once."""

    def __init__(self, tree: AttackTree, manager: BddManager):
        self.tree = tree
        self.manager = manager
        self.memo: dict[str, int] = {}

    def translate(self, node: str) -> Bdd:
        if node not in self.tree.node_type:
            raise UnknownNodeError(f"unknown node {node!r}")
        mgr = self.manager
        memo = self.memo
        stack = [node]
        while stack:
            n = stack[-1]
            if n in memo:
                stack.pop()
                continue
            t = self.tree.node_type.get(n)
            if t is None:
                raise UnknownNodeError(f"unknown node {n!r}")
            if t == BASIC:
                memo[n] = mgr.var(n).node
                stack.pop()
                continue
            pending = [c for c in self.tree.children[n] if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            op = AND if t == "and" else OR
            kids = self.tree.children[n]
            acc = memo[kids[0]]
            for c in kids[1:]:
                acc = mgr._apply(op, acc, memo[c])
            memo[n] = acc
            stack.pop()
        return Bdd(mgr, memo[node])


def translate_tree(tree: AttackTree, node: str, manager: BddManager | None = None) -> Bdd:
    """Diagram whose satisfying assignments are exactly the attacks that
    make ``node`` succeed."""
    if manager is None:
        manager = _manager_for(tree)
    return _Translator(tree, manager).translate(node)


@dataclass(frozen=True)
class CompiledFormula:
    """A compiled layer-1 formula.

    ``tree`` is the input tree after pruning every intermediate
    evidence/attribution target. ``enum_vars`` is the canonical enumeration
    universe for satisfying attacks: the pruned tree's basics minus
    variables an evidence operator removed from the diagram.
    """

    tree: AttackTree
    manager: BddManager
    root: Bdd
    enum_vars: tuple[str, ...]
    pruned: frozenset[str]


def compile_formula(tree: AttackTree, phi: Phi) -> CompiledFormula:
    """Compile a layer-1 formula against a tree.

    The formula is checked for well-formedness first; intermediate targets
    are pruned to pseudo-basics before anything is translated.
    """
    core = desugar(phi)
    pruned_tree = prune_for(tree, core)
    manager = _manager_for(pruned_tree)
    translator = _Translator(pruned_tree, manager)
    root = _compile(core, pruned_tree, manager, translator)
    dropped = evidence_targets(core) - root.support()
    enum_vars = tuple(b for b in pruned_tree.basic_order if b not in dropped)
    prune_set = frozenset(set(pruned_tree.basic_order) - set(tree.basic_order))
    return CompiledFormula(pruned_tree, manager, root, enum_vars, prune_set)


def _compile(phi: Phi, tree: AttackTree, mgr: BddManager, translator: _Translator) -> Bdd:
    match phi:
        case Atom(name):
            return translator.translate(name)
        case Not(child):
            return ~_compile(child, tree, mgr, translator)
        case And(left, right):
            return (_compile(left, tree, mgr, translator)
                    & _compile(right, tree, mgr, translator))
        case Evidence(child, target, bit):
            return _compile(child, tree, mgr, translator).restrict(target, bit)
        case MinimalAttack(child):
            b = _compile(child, tree, mgr, translator)
            names = tree.basic_order
            primed = [n + PRIME for n in names]
            constraint = mgr.subset_constraint(primed, names)
            shifted = b.rename({n: n + PRIME for n in names})
            smaller_sat = (constraint & shifted).exists(primed)
            return b & ~smaller_sat
    raise TypeError(f"not a core layer-1 formula: {phi!r}")
