"""Reduced ordered binary decision diagrams with a shared unique table.

The construction follows the classic recipes (Bryant 1986; Brace, Rudell,
Bryant 1990; Andersen's lecture notes): nodes live in an append-only store,
a unique table guarantees that equal (variable, low, high) triples share one
node, and apply/negate/restrict results are memoized for the lifetime of
the manager. Canonicity therefore holds within a manager: two references
denote the same Boolean function iff they are the same node.

References are wrapped in :class:`Bdd` values carrying their manager, so
mixing diagrams from different managers fails loudly instead of silently
producing garbage. The variable order is fixed at construction; there is no
dynamic reordering and no garbage collection (the store only grows).
"""

from __future__ import annotations

import sys
from typing import Container, Iterable, Mapping, Sequence

from .errors import (
    BddInvariantError,
    EnumerationCapExceeded,
    LengthMismatchError,
    NonInjectiveMapError,
    OrderMismatchError,
    OrderViolationError,
    PartialAssignmentError,
    UnknownVariableError,
)

_LEAF = sys.maxsize  # terminals sort after every variable level

AND = "and"
OR = "or"
XOR = "xor"
_OPS = (AND, OR, XOR)


class Bdd:
    """A reference to one node of a manager; compares by identity of the
    underlying node, which by canonicity is function equality."""

    __slots__ = ("manager", "node")

    def __init__(self, manager: "BddManager", node: int):
        self.manager = manager
        self.node = node

    def __eq__(self, other) -> bool:
        return (isinstance(other, Bdd) and other.manager is self.manager
                and other.node == self.node)

    def __hash__(self) -> int:
        return hash((id(self.manager), self.node))

    def __repr__(self) -> str:
        return f"Bdd(node={self.node})"

    # -- operator sugar -------------------------------------------------

    def _peer(self, other: "Bdd") -> int:
        if not isinstance(other, Bdd):
            raise TypeError(f"expected a Bdd, got {other!r}")
        if other.manager is not self.manager:
            raise OrderMismatchError("operands come from different managers")
        return other.node

    def __and__(self, other: "Bdd") -> "Bdd":
        return Bdd(self.manager, self.manager._apply(AND, self.node, self._peer(other)))

    def __or__(self, other: "Bdd") -> "Bdd":
        return Bdd(self.manager, self.manager._apply(OR, self.node, self._peer(other)))

    def __xor__(self, other: "Bdd") -> "Bdd":
        return Bdd(self.manager, self.manager._apply(XOR, self.node, self._peer(other)))

    def __invert__(self) -> "Bdd":
        return Bdd(self.manager, self.manager._negate(self.node))

    @property
    def is_true(self) -> bool:
        return self.node == 1

    @property
    def is_false(self) -> bool:
        return self.node == 0

    # -- wrapped operations ----------------------------------------------

    def restrict(self, var: str, bit: int) -> "Bdd":
        m = self.manager
        return Bdd(m, m._restrict(self.node, m._level_of(var), 1 if bit else 0))

    def exists(self, variables: Iterable[str]) -> "Bdd":
        return self.manager.exists(self, variables)

    def rename(self, mapping: Mapping[str, str]) -> "Bdd":
        return self.manager.rename(self, mapping)

    def evaluate(self, assignment: Mapping[str, int | bool]) -> int:
        return self.manager.evaluate(self, assignment)

    def descend(self, present: Container[str]) -> bool:
        """Walk the diagram taking the high edge exactly at variables that
        are in ``present``; absent variables count as 0."""
        m = self.manager
        nodes, names = m._nodes, m._names
        u = self.node
        while u > 1:
            level, low, high = nodes[u]
            u = high if names[level] in present else low
        return u == 1

    def support(self) -> frozenset[str]:
        m = self.manager
        seen: set[int] = set()
        levels: set[int] = set()
        stack = [self.node]
        while stack:
            u = stack.pop()
            if u <= 1 or u in seen:
                continue
            seen.add(u)
            level, low, high = m._nodes[u]
            levels.add(level)
            stack.append(low)
            stack.append(high)
        return frozenset(m._names[l] for l in levels)

    def node_count(self) -> int:
        """Number of distinct nodes reachable from this root, terminals
        included."""
        seen = set()
        stack = [self.node]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if u > 1:
                _, low, high = self.manager._nodes[u]
                stack.append(low)
                stack.append(high)
        return len(seen)

    def allsat(self, over: Sequence[str], limit: int | None = None) -> set[frozenset[str]]:
        return self.manager.allsat(self, over, limit)

    def check_invariants(self) -> None:
        self.manager.check_invariants(self)

    def to_dot(self) -> str:
        return self.manager.to_dot(self)


class BddManager:
    """Owns the node store, the unique table, and the operation caches.

    Construction operations require exclusive access; completed diagrams
    may be read concurrently.
    """

    def __init__(self, variables: Sequence[str]):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self._names = names
        self._levels = {name: i for i, name in enumerate(names)}
        # node store: id -> (level, low, high); ids 0 and 1 are the terminals
        self._nodes: list[tuple[int, int, int]] = [(_LEAF, 0, 0), (_LEAF, 1, 1)]
        self._unique: dict[tuple[int, int, int], int] = {}
        self._apply_cache: dict[tuple[str, int, int], int] = {}
        self._not_cache: dict[int, int] = {}
        self._restrict_cache: dict[tuple[int, int, int], int] = {}

    # -- bookkeeping ------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._names

    def _level_of(self, name: str) -> int:
        try:
            return self._levels[name]
        except KeyError:
            raise UnknownVariableError(f"variable {name!r} is not registered") from None

    def _level(self, u: int) -> int:
        return self._nodes[u][0]

    def _mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        node = self._unique.get(key)
        if node is None:
            node = len(self._nodes)
            self._nodes.append(key)
            self._unique[key] = node
        return node

    # -- constructors ------------------------------------------------------

    @property
    def false(self) -> Bdd:
        return Bdd(self, 0)

    @property
    def true(self) -> Bdd:
        return Bdd(self, 1)

    def var(self, name: str) -> Bdd:
        return Bdd(self, self._mk(self._level_of(name), 0, 1))

    def apply(self, op: str, a: Bdd, b: Bdd) -> Bdd:
        if op not in _OPS:
            raise ValueError(f"unknown operation {op!r}")
        if a.manager is not self or b.manager is not self:
            raise OrderMismatchError("operands come from different managers")
        return Bdd(self, self._apply(op, a.node, b.node))

    def negate(self, a: Bdd) -> Bdd:
        return ~a

    # -- core recursion ----------------------------------------------------

    def _apply(self, op: str, u: int, v: int) -> int:
        if op == AND:
            if u == 0 or v == 0:
                return 0
            if u == 1:
                return v
            if v == 1 or u == v:
                return u
        elif op == OR:
            if u == 1 or v == 1:
                return 1
            if u == 0:
                return v
            if v == 0 or u == v:
                return u
        else:  # XOR
            if u == v:
                return 0
            if u == 0:
                return v
            if v == 0:
                return u
            if u == 1:
                return self._negate(v)
            if v == 1:
                return self._negate(u)
        if v < u:  # all three ops commute
            u, v = v, u
        key = (op, u, v)
        cached = self._apply_cache.get(key)
        if cached is not None:
            return cached
        lu, lv = self._nodes[u][0], self._nodes[v][0]
        level = lu if lu <= lv else lv
        if lu == level:
            u_low, u_high = self._nodes[u][1], self._nodes[u][2]
        else:
            u_low = u_high = u
        if lv == level:
            v_low, v_high = self._nodes[v][1], self._nodes[v][2]
        else:
            v_low = v_high = v
        result = self._mk(level,
                          self._apply(op, u_low, v_low),
                          self._apply(op, u_high, v_high))
        self._apply_cache[key] = result
        return result

    def _negate(self, u: int) -> int:
        if u <= 1:
            return 1 - u
        cached = self._not_cache.get(u)
        if cached is not None:
            return cached
        level, low, high = self._nodes[u]
        result = self._mk(level, self._negate(low), self._negate(high))
        self._not_cache[u] = result
        self._not_cache[result] = u
        return result

    def _restrict(self, u: int, level: int, bit: int) -> int:
        node_level = self._nodes[u][0]
        if node_level > level:  # variable cannot occur below
            return u
        key = (u, level, bit)
        cached = self._restrict_cache.get(key)
        if cached is not None:
            return cached
        lvl, low, high = self._nodes[u]
        if lvl == level:
            result = high if bit else low
        else:
            result = self._mk(lvl,
                              self._restrict(low, level, bit),
                              self._restrict(high, level, bit))
        self._restrict_cache[key] = result
        return result

    # -- quantification, renaming, constraints ------------------------------

    def exists(self, b: Bdd, variables: Iterable[str]) -> Bdd:
        """Existential quantification as iterated restrict-or:
        exists x. B = restrict(B, x, 0) | restrict(B, x, 1)."""
        if b.manager is not self:
            raise OrderMismatchError("operand comes from a different manager")
        u = b.node
        for level in sorted(self._level_of(x) for x in set(variables)):
            u = self._apply(OR,
                            self._restrict(u, level, 0),
                            self._restrict(u, level, 1))
        return Bdd(self, u)

    def rename(self, b: Bdd, mapping: Mapping[str, str]) -> Bdd:
        """Rename variables; the map must be injective and must preserve the
        relative order of the diagram's variables."""
        if b.manager is not self:
            raise OrderMismatchError("operand comes from a different manager")
        images = list(mapping.values())
        if len(set(images)) != len(images):
            raise NonInjectiveMapError("renaming maps two variables onto one")
        level_map = {self._level_of(k): self._level_of(v) for k, v in mapping.items()}
        support_levels = set()
        stack = [b.node]
        seen = set()
        while stack:
            u = stack.pop()
            if u <= 1 or u in seen:
                continue
            seen.add(u)
            level, low, high = self._nodes[u]
            support_levels.add(level)
            stack.extend((low, high))
        untouched = {self._names[l] for l in support_levels} - set(mapping)
        clash = untouched & set(images)
        if clash:
            raise NonInjectiveMapError(
                f"renaming collides with untouched variable {sorted(clash)[0]!r}")
        cache: dict[int, int] = {}

        def walk(u: int) -> int:
            if u <= 1:
                return u
            hit = cache.get(u)
            if hit is not None:
                return hit
            level, low, high = self._nodes[u]
            new_level = level_map.get(level, level)
            new_low, new_high = walk(low), walk(high)
            if new_level >= min(self._level(new_low), self._level(new_high)):
                raise OrderViolationError(
                    f"renaming {self._names[level]!r} -> {self._names[new_level]!r} "
                    f"breaks the variable order")
            result = self._mk(new_level, new_low, new_high)
            cache[u] = result
            return result

        return Bdd(self, walk(b.node))

    def subset_constraint(self, primed: Sequence[str], unprimed: Sequence[str]) -> Bdd:
        """Diagram that is true exactly when the primed variables form a
        strict pointwise subset of the unprimed ones:
        (AND_i p_i => u_i) and (OR_i p_i != u_i)."""
        primed = list(primed)
        unprimed = list(unprimed)
        if len(primed) != len(unprimed):
            raise LengthMismatchError(
                f"{len(primed)} primed vs {len(unprimed)} unprimed variables")
        implication = self.true
        difference = self.false
        for p, u in zip(primed, unprimed):
            pv, uv = self.var(p), self.var(u)
            implication = implication & (~pv | uv)
            difference = difference | (pv ^ uv)
        return implication & difference

    # -- inspection ----------------------------------------------------------

    def evaluate(self, b: Bdd, assignment: Mapping[str, int | bool]) -> int:
        """Follow the decision path of a total assignment; returns 0 or 1."""
        if b.manager is not self:
            raise OrderMismatchError("operand comes from a different manager")
        missing = b.support() - set(assignment)
        if missing:
            raise PartialAssignmentError(
                f"assignment lacks variable {sorted(missing)[0]!r}")
        u = b.node
        while u > 1:
            level, low, high = self._nodes[u]
            u = high if assignment[self._names[level]] else low
        return u

    def allsat(self, b: Bdd, over: Sequence[str], limit: int | None = None) -> set[frozenset[str]]:
        """All total assignments over ``over`` that satisfy the diagram,
        as sets of the variables assigned 1; don't-cares are expanded."""
        if b.manager is not self:
            raise OrderMismatchError("operand comes from a different manager")
        over = list(over)
        levels = sorted(self._level_of(x) for x in over)
        if len(set(levels)) != len(levels):
            raise ValueError("duplicate variables in enumeration set")
        extra = b.support() - {self._names[l] for l in levels}
        if extra:
            raise ValueError(
                f"enumeration set does not cover support variable {sorted(extra)[0]!r}")
        out: set[frozenset[str]] = set()
        names = self._names
        nodes = self._nodes

        def walk(u: int, i: int, acc: list[str]):
            if u == 0:
                return
            if i == len(levels):
                out.add(frozenset(acc))
                if limit is not None and len(out) > limit:
                    raise EnumerationCapExceeded(
                        f"more than {limit} satisfying attacks")
                return
            level = levels[i]
            if nodes[u][0] == level:
                _, low, high = nodes[u]
                walk(low, i + 1, acc)
                acc.append(names[level])
                walk(high, i + 1, acc)
                acc.pop()
            else:  # diagram skips this variable: expand both values
                walk(u, i + 1, acc)
                acc.append(names[level])
                walk(u, i + 1, acc)
                acc.pop()

        walk(b.node, 0, [])
        return out

    def check_invariants(self, b: Bdd) -> None:
        """Verify ordered, reduced and unique-table invariants for every node
        reachable from ``b``; raises ``BddInvariantError`` on violation."""
        if b.manager is not self:
            raise OrderMismatchError("operand comes from a different manager")
        seen = set()
        stack = [b.node]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if u <= 1:
                continue
            if not 0 <= u < len(self._nodes):
                raise BddInvariantError(f"node id {u} out of range")
            level, low, high = self._nodes[u]
            if not 0 <= level < len(self._names):
                raise BddInvariantError(f"node {u} has invalid level {level}")
            if low == high:
                raise BddInvariantError(f"node {u} is redundant (low == high)")
            for child in (low, high):
                if self._level(child) <= level:
                    raise BddInvariantError(
                        f"node {u} violates the order: child {child} not below it")
            if self._unique.get((level, low, high)) != u:
                raise BddInvariantError(f"node {u} duplicates another node")
            stack.extend((low, high))

    def to_dot(self, b: Bdd) -> str:
        """DOT dump: solid edge to the high child, dashed to the low child."""
        lines = ["digraph bdd {"]
        seen = set()
        stack = [b.node]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            if u <= 1:
                lines.append(f'  n{u} [shape=box, label="{u}"];')
                continue
            level, low, high = self._nodes[u]
            lines.append(f'  n{u} [shape=circle, label="{self._names[level]}"];')
            lines.append(f"  n{u} -> n{high};")
            lines.append(f"  n{u} -> n{low} [style=dashed];")
            stack.extend((low, high))
        lines.append("}")
        return "\n".join(lines)
