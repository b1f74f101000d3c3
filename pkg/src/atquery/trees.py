"""Attack trees: rooted DAGs of AND/OR gates over basic attack steps.

Trees are immutable after construction. Structural validation is a separate
step (``validate``) so that deliberately broken trees can be built and
inspected; evaluation raises on malformed input it actually touches.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .domains import MetricDomain, Value, fold_delta
from .errors import (
    MissingAttributionError,
    NotAModuleError,
    UnknownBasicError,
    UnknownDomainError,
    UnknownNodeError,
)

OR = "or"
AND = "and"
BASIC = "basic"

Attack = frozenset


@dataclass(frozen=True)
class Defect:
    code: str  # "unknown-child" | "leaf-gate-mismatch" | "cycle" | "multiple-roots"
    node: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.node}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    defects: tuple[Defect, ...]


class AttackTree:
    """A static attack tree; node sharing (multiple parents) is permitted.

    ``basic_order`` is the canonical ordering of basic steps: declaration
    order for freshly built trees, with pruned pseudo-basics appended at the
    end. It seeds the variable order of every diagram compiled from the tree.
    """

    __slots__ = ("nodes", "node_type", "children", "root", "basic_order",
                 "_index", "_parents")

    def __init__(
        self,
        nodes: Sequence[str],
        node_type: Mapping[str, str],
        children: Mapping[str, Sequence[str]],
        root: str,
        basic_order: Sequence[str] | None = None,
    ):
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise ValueError("duplicate node declarations")
        index = {n: i for i, n in enumerate(nodes)}
        if root not in index:
            raise ValueError(f"root {root!r} is not a declared node")
        for n in nodes:
            if node_type.get(n) not in (OR, AND, BASIC):
                raise ValueError(f"node {n!r} lacks a valid type")
        self.nodes = nodes
        self.node_type = {n: node_type[n] for n in nodes}
        self.children = {n: tuple(children.get(n, ())) for n in nodes}
        self.root = root
        if basic_order is None:
            basic_order = tuple(n for n in nodes if self.node_type[n] == BASIC)
        self.basic_order = tuple(basic_order)
        self._index = index
        parents: dict[str, list[str]] = {n: [] for n in nodes}
        for n in nodes:
            for c in self.children[n]:
                if c in parents:
                    parents[c].append(n)
        self._parents = {n: tuple(ps) for n, ps in parents.items()}

    # -- basic queries -------------------------------------------------

    @property
    def basics(self) -> tuple[str, ...]:
        return self.basic_order

    def is_basic(self, node: str) -> bool:
        return self.node_type.get(node) == BASIC

    def parents(self, node: str) -> tuple[str, ...]:
        self._require(node)
        return self._parents[node]

    def _require(self, node: str) -> None:
        if node not in self._index:
            raise UnknownNodeError(f"unknown node {node!r}")

    def declaration_index(self, node: str) -> int:
        self._require(node)
        return self._index[node]

    def descendants(self, node: str) -> frozenset[str]:
        """All nodes reachable from ``node``, including itself."""
        self._require(node)
        seen = {node}
        stack = [node]
        while stack:
            for c in self.children.get(stack.pop(), ()):
                if c in self._index and c not in seen:
                    seen.add(c)
                    stack.append(c)
        return frozenset(seen)

    # -- validation ----------------------------------------------------

    def validate(self) -> ValidationReport:
        """Check all structural invariants, reporting every violation."""
        defects: list[Defect] = []
        for n in self.nodes:
            for c in self.children[n]:
                if c not in self._index:
                    defects.append(Defect("unknown-child", n,
                                          f"child {c!r} is not declared"))
            if self.node_type[n] == BASIC and self.children[n]:
                defects.append(Defect("leaf-gate-mismatch", n,
                                      "basic step has children"))
            if self.node_type[n] != BASIC and not self.children[n]:
                defects.append(Defect("leaf-gate-mismatch", n,
                                      "gate has no children"))

        # cycle detection: iterative three-colour DFS over declared edges
        WHITE, GREY, BLACK = 0, 1, 2
        colour = {n: WHITE for n in self.nodes}
        for start in self.nodes:
            if colour[start] != WHITE:
                continue
            stack: list[tuple[str, int]] = [(start, 0)]
            colour[start] = GREY
            while stack:
                node, i = stack.pop()
                kids = [c for c in self.children[node] if c in self._index]
                if i < len(kids):
                    stack.append((node, i + 1))
                    kid = kids[i]
                    if colour[kid] == GREY:
                        defects.append(Defect("cycle", kid,
                                              f"edge {node!r} -> {kid!r} closes a cycle"))
                    elif colour[kid] == WHITE:
                        colour[kid] = GREY
                        stack.append((kid, 0))
                else:
                    colour[node] = BLACK

        parentless = [n for n in self.nodes if not self._parents[n]]
        for n in parentless:
            if n != self.root:
                defects.append(Defect("multiple-roots", n,
                                      "parentless node besides the declared root"))
        reachable = self.descendants(self.root)
        for n in self.nodes:
            if n not in reachable:
                defects.append(Defect("multiple-roots", n,
                                      "not reachable from the declared root"))
        return ValidationReport(not defects, tuple(defects))

    # -- semantics -----------------------------------------------------

    def structure_function(self, node: str, attack: Iterable[str]) -> bool:
        """Does ``attack`` make ``node`` succeed?

        OR gates need one successful child, AND gates all of them, and a
        basic step succeeds iff it is in the attack. Shared nodes are
        evaluated once per call.
        """
        self._require(node)
        members = attack if isinstance(attack, (set, frozenset)) else frozenset(attack)
        memo: dict[str, bool] = {}
        stack = [node]
        while stack:
            n = stack[-1]
            if n in memo:
                stack.pop()
                continue
            t = self.node_type.get(n)
            if t is None:
                raise UnknownNodeError(f"unknown node {n!r}")
            if t == BASIC:
                memo[n] = n in members
                stack.pop()
                continue
            pending = [c for c in self.children[n] if c not in memo]
            if pending:
                for c in pending:
                    if c not in self._index:
                        raise UnknownNodeError(f"unknown node {c!r}")
                stack.extend(pending)
                continue
            values = (memo[c] for c in self.children[n])
            memo[n] = any(values) if t == OR else all(values)
            stack.pop()
        return memo[node]

    def succeeds(self, attack: Iterable[str]) -> bool:
        return self.structure_function(self.root, attack)

    # -- modules and pruning --------------------------------------------

    def is_module(self, node: str) -> bool:
        """True iff every path between ``node``'s descendants and the rest
        of the tree passes through ``node``. Basic steps and the root are
        always modules."""
        self._require(node)
        inside = self.descendants(node)
        for d in inside:
            if d == node:
                continue
            for p in self._parents[d]:
                if p not in inside:
                    return False
        return True

    def prune_at(self, node: str) -> "AttackTree":
        """Collapse the module under ``node`` into a pseudo-basic step.

        The new basic keeps its identifier and is appended to the basic
        ordering after all surviving basics. Pruning an existing basic is
        the identity.
        """
        if not self.is_module(node):
            raise NotAModuleError(f"{node!r} is not a module; cannot prune")
        if self.node_type[node] == BASIC:
            return self
        removed = self.descendants(node) - {node}
        new_nodes = [n for n in self.nodes if n not in removed]
        new_type = {n: self.node_type[n] for n in new_nodes}
        new_type[node] = BASIC
        new_children = {n: self.children[n] for n in new_nodes}
        new_children[node] = ()
        order = [b for b in self.basic_order if b not in removed]
        order.append(node)
        return AttackTree(new_nodes, new_type, new_children, self.root, order)

    def __repr__(self) -> str:
        return (f"AttackTree(root={self.root!r}, nodes={len(self.nodes)}, "
                f"basics={len(self.basic_order)})")


class AttributedTree:
    """An attack tree plus metric domains and per-basic attributions.

    Value semantics: ``set_attribution`` and ``prune_at`` return new
    instances and never touch the original. A pruned pseudo-basic starts
    with no attributed values; using it in a metric before assignment
    raises ``MissingAttributionError``.
    """

    __slots__ = ("tree", "domains", "attributions", "_domain_index")

    def __init__(
        self,
        tree: AttackTree,
        domains: Sequence[MetricDomain],
        attributions: Sequence[Mapping[str, Value]],
    ):
        if len(domains) != len(attributions):
            raise ValueError("need one attribution map per domain")
        names = [d.name for d in domains]
        if len(set(names)) != len(names):
            raise ValueError("duplicate domain names")
        basics = set(tree.basic_order)
        checked = []
        for dom, attr in zip(domains, attributions):
            for b, v in attr.items():
                if b not in basics:
                    raise UnknownBasicError(
                        f"{b!r} is not a basic step; cannot attribute it")
                dom.require(v)
            checked.append(dict(attr))
        self.tree = tree
        self.domains = tuple(domains)
        self.attributions = tuple(checked)
        self._domain_index = {d.name: i for i, d in enumerate(self.domains)}

    def domain_index(self, name: str) -> int:
        try:
            return self._domain_index[name]
        except KeyError:
            raise UnknownDomainError(f"domain {name!r} is not declared") from None

    def domain(self, name: str) -> MetricDomain:
        return self.domains[self.domain_index(name)]

    def value(self, k: int, basic: str) -> Value:
        try:
            return self.attributions[k][basic]
        except KeyError:
            raise MissingAttributionError(
                f"{basic!r} has no value for domain {self.domains[k].name!r}"
            ) from None

    def attack_value(self, k: int, attack: Iterable[str]) -> Value:
        """Delta-fold of the attack's values, in canonical basic order."""
        members = set(attack)
        order = [b for b in self.tree.basic_order if b in members]
        extra = members.difference(order)
        if extra:
            name = sorted(extra)[0]
            raise MissingAttributionError(
                f"{name!r} has no value for domain {self.domains[k].name!r}")
        return fold_delta(self.domains[k], (self.value(k, b) for b in order))

    def set_attribution(self, k: int, basic: str, value: Value) -> "AttributedTree":
        """Return a copy with basic's value in domain k replaced."""
        if basic not in set(self.tree.basic_order):
            raise UnknownBasicError(f"{basic!r} is not a basic step of the tree")
        self.domains[k].require(value)
        attrs = [dict(a) for a in self.attributions]
        attrs[k][basic] = value
        return AttributedTree(self.tree, self.domains, attrs)

    def prune_at(self, node: str) -> "AttributedTree":
        pruned = self.tree.prune_at(node)
        if pruned is self.tree:
            return self
        basics = set(pruned.basic_order)
        attrs = [{b: v for b, v in a.items() if b in basics}
                 for a in self.attributions]
        return AttributedTree(pruned, self.domains, attrs)

    def __repr__(self) -> str:
        doms = ", ".join(d.name for d in self.domains)
        return f"AttributedTree({self.tree!r}, domains=[{doms}])"
