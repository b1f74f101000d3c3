"""Stratified formula ASTs for the four query layers, with desugaring and
well-formedness checking.

Layer 1 speaks about which nodes an attack reaches, layer 2 bounds metric
values of single attacks, layer 3 asks for metric values of whole formulae,
and layer 4 quantifies over attacks. Connective sugar (or, implies, iff,
xor-iff, minimal defence) is kept in the AST so parsed formulae can be
printed back verbatim; ``desugar`` rewrites a formula into the core
connectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .domains import COMPARATORS, MetricDomain, Value
from .errors import (
    DescendantInFormulaError,
    NotAModuleError,
    UnknownAtomError,
    UnknownDomainError,
)
from .trees import BASIC, AttackTree


# --- layer 1 ----------------------------------------------------------------

class Phi:
    """Base class of layer-1 formulae."""
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Phi):
    name: str


@dataclass(frozen=True)
class Not(Phi):
    child: Phi


@dataclass(frozen=True)
class And(Phi):
    left: Phi
    right: Phi


@dataclass(frozen=True)
class Or(Phi):  # sugar
    left: Phi
    right: Phi


@dataclass(frozen=True)
class Implies(Phi):  # sugar
    left: Phi
    right: Phi


@dataclass(frozen=True)
class Iff(Phi):  # sugar
    left: Phi
    right: Phi


@dataclass(frozen=True)
class Nequiv(Phi):  # sugar: exclusive-or of two formulae
    left: Phi
    right: Phi


@dataclass(frozen=True)
class Evidence(Phi):
    """Force ``target``'s status to ``bit`` inside ``child``."""
    child: Phi
    target: str
    bit: int


@dataclass(frozen=True)
class MinimalAttack(Phi):
    child: Phi


@dataclass(frozen=True)
class MinimalDefence(Phi):  # sugar: MinimalAttack(Not(child))
    child: Phi


# --- layer 2 ----------------------------------------------------------------

class Psi:
    """Base class of layer-2 formulae."""
    __slots__ = ()


@dataclass(frozen=True)
class PsiNot(Psi):
    child: Psi


@dataclass(frozen=True)
class PsiAnd(Psi):
    left: Psi
    right: Psi


@dataclass(frozen=True)
class PsiOr(Psi):  # sugar
    left: Psi
    right: Psi


@dataclass(frozen=True)
class PsiImplies(Psi):  # sugar
    left: Psi
    right: Psi


@dataclass(frozen=True)
class PsiIff(Psi):  # sugar
    left: Psi
    right: Psi


@dataclass(frozen=True)
class PsiNequiv(Psi):  # sugar
    left: Psi
    right: Psi


@dataclass(frozen=True)
class Holds(Psi):
    """A layer-1 formula used as a layer-2 operand.

    Needed to state mixed conditions such as "reaching these nodes implies
    the attack is cheap"; satisfied exactly when the attack satisfies the
    embedded formula.
    """
    phi: Phi


@dataclass(frozen=True)
class MetricBound(Psi):
    domain: str  # declared domain name
    phi: Phi
    cmp: str  # one of COMPARATORS
    bound: Value

    def __post_init__(self):
        if self.cmp not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.cmp!r}")


@dataclass(frozen=True)
class PsiAttrib(Psi):
    """Evaluate ``child`` with ``target``'s value in ``domain`` set to ``value``."""
    child: Psi
    target: str
    domain: str
    value: Value


# --- layer 3 ----------------------------------------------------------------

class Xi:
    """Base class of layer-3 formulae."""
    __slots__ = ()


@dataclass(frozen=True)
class MetricValue(Xi):
    domain: str
    phi: Phi


@dataclass(frozen=True)
class XiAttrib(Xi):
    child: Xi
    target: str
    domain: str
    value: Value


# --- layer 4 ----------------------------------------------------------------

class Gamma:
    """Base class of layer-4 formulae."""
    __slots__ = ()


@dataclass(frozen=True)
class GammaNot(Gamma):
    child: Gamma


@dataclass(frozen=True)
class Exists(Gamma):
    """Some attack satisfies both sides; a missing side is trivially true."""
    phi: Phi | None
    psi: Psi | None

    def __post_init__(self):
        if self.phi is None and self.psi is None:
            raise ValueError("quantifier needs at least one side")


@dataclass(frozen=True)
class Forall(Gamma):
    """Every attack satisfies both sides; a missing side is trivially true."""
    phi: Phi | None
    psi: Psi | None

    def __post_init__(self):
        if self.phi is None and self.psi is None:
            raise ValueError("quantifier needs at least one side")


Formula = Union[Phi, Psi, Xi, Gamma]


# --- desugaring -------------------------------------------------------------

def desugar(f: Formula | None) -> Formula | None:
    """Rewrite derived connectives into the core set; idempotent.

    or  ->  not(not a and not b)          implies -> not(a and not b)
    iff ->  (a => b) and (b => a)         nequiv  -> not(a iff b)
    minimal defence -> minimal attack of the negation
    """
    if f is None:
        return None
    match f:
        # layer 1
        case Atom():
            return f
        case Not(c):
            return Not(desugar(c))
        case And(a, b):
            return And(desugar(a), desugar(b))
        case Or(a, b):
            return Not(And(Not(desugar(a)), Not(desugar(b))))
        case Implies(a, b):
            return Not(And(desugar(a), Not(desugar(b))))
        case Iff(a, b):
            return And(desugar(Implies(a, b)), desugar(Implies(b, a)))
        case Nequiv(a, b):
            return Not(desugar(Iff(a, b)))
        case Evidence(c, e, bit):
            return Evidence(desugar(c), e, bit)
        case MinimalAttack(c):
            return MinimalAttack(desugar(c))
        case MinimalDefence(c):
            return MinimalAttack(Not(desugar(c)))
        # layer 2
        case PsiNot(c):
            return PsiNot(desugar(c))
        case PsiAnd(a, b):
            return PsiAnd(desugar(a), desugar(b))
        case PsiOr(a, b):
            return PsiNot(PsiAnd(PsiNot(desugar(a)), PsiNot(desugar(b))))
        case PsiImplies(a, b):
            return PsiNot(PsiAnd(desugar(a), PsiNot(desugar(b))))
        case PsiIff(a, b):
            return PsiAnd(desugar(PsiImplies(a, b)), desugar(PsiImplies(b, a)))
        case PsiNequiv(a, b):
            return PsiNot(desugar(PsiIff(a, b)))
        case Holds(phi):
            return Holds(desugar(phi))
        case MetricBound(domain, phi, cmp, bound):
            return MetricBound(domain, desugar(phi), cmp, bound)
        case PsiAttrib(c, target, domain, value):
            return PsiAttrib(desugar(c), target, domain, value)
        # layer 3
        case MetricValue(domain, phi):
            return MetricValue(domain, desugar(phi))
        case XiAttrib(c, target, domain, value):
            return XiAttrib(desugar(c), target, domain, value)
        # layer 4
        case GammaNot(c):
            return GammaNot(desugar(c))
        case Exists(phi, psi):
            return Exists(desugar(phi), desugar(psi))
        case Forall(phi, psi):
            return Forall(desugar(phi), desugar(psi))
    raise TypeError(f"not a formula: {f!r}")


# --- syntactic queries ------------------------------------------------------

def _walk(f: Formula | None):
    """Yield every subformula, depth first."""
    if f is None:
        return
    yield f
    for attr in ("child", "left", "right", "phi", "psi"):
        sub = getattr(f, attr, None)
        if isinstance(sub, (Phi, Psi, Xi, Gamma)):
            yield from _walk(sub)


def atoms(f: Formula) -> frozenset[str]:
    """All node identifiers occurring as atoms or as evidence/attribution
    targets."""
    names = set()
    for sub in _walk(f):
        if isinstance(sub, Atom):
            names.add(sub.name)
        elif isinstance(sub, (Evidence, PsiAttrib, XiAttrib)):
            names.add(sub.target)
    return frozenset(names)


def evidence_targets(f: Formula | None) -> frozenset[str]:
    return frozenset(s.target for s in _walk(f) if isinstance(s, Evidence))


def assignment_targets(f: Formula | None) -> frozenset[str]:
    """Targets of evidence and of attribution overrides."""
    return frozenset(s.target for s in _walk(f)
                     if isinstance(s, (Evidence, PsiAttrib, XiAttrib)))


# --- well-formedness --------------------------------------------------------

def well_formed(
    tree: AttackTree,
    f: Formula,
    domains: Sequence[MetricDomain] = (),
) -> frozenset[str]:
    """Check a formula against a tree; return the set of intermediate nodes
    that must be pruned before evaluation.

    Plain atoms may name any node. Evidence and attribution targets that are
    intermediate nodes must be modules whose descendants do not occur
    anywhere else in the formula; such targets form the returned prune set.
    """
    by_name = {d.name: d for d in domains}
    mentioned = atoms(f)
    for name in mentioned:
        if name not in tree.node_type:
            raise UnknownAtomError(f"{name!r} does not name a tree node")

    for sub in _walk(f):
        if isinstance(sub, Evidence) and sub.bit not in (0, 1):
            raise ValueError(f"evidence bit must be 0 or 1, got {sub.bit!r}")
        if isinstance(sub, (MetricBound, MetricValue, PsiAttrib, XiAttrib)):
            dom = by_name.get(sub.domain)
            if dom is None:
                raise UnknownDomainError(f"domain {sub.domain!r} is not declared")
            value = sub.bound if isinstance(sub, MetricBound) else getattr(sub, "value", None)
            if value is not None:
                dom.require(value)

    prune = set()
    for target in assignment_targets(f):
        if not tree.is_module(target):
            raise NotAModuleError(
                f"{target!r} is not a module; cannot assign to it")
        strict = tree.descendants(target) - {target}
        clash = strict & mentioned
        if clash:
            raise DescendantInFormulaError(
                f"{sorted(clash)[0]!r} is a descendant of target {target!r} "
                f"and occurs in the formula")
        if tree.node_type[target] != BASIC:
            prune.add(target)
    return frozenset(prune)


def prune_for(tree_like, f: Formula, domains: Sequence[MetricDomain] = ()):
    """Prune a tree (or attributed tree) at every target ``well_formed``
    requires, in declaration order. Returns the pruned object."""
    tree = tree_like.tree if hasattr(tree_like, "tree") else tree_like
    targets = well_formed(tree, f, domains)
    pruned = tree_like
    for t in sorted(targets, key=tree.declaration_index):
        pruned = pruned.prune_at(t)
    return pruned
