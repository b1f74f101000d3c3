"""Metric domains: linearly ordered unital semirings over attack values.

A metric domain bundles a value set with two combination operators. ``delta``
combines the values of the steps inside one attack, ``nabla`` combines the
values of different attacks, and ``leq`` is the total order used to compare
results. The five built-in domains cover minimal cost, sequential and
parallel time, minimal skill, and discrete success probability.

Extended naturals are represented as Python ints plus ``math.inf``; unit
probabilities as floats in [0, 1]. All operations are pure and values are
immutable, so domains can be shared freely across threads.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import DomainValueError, UnknownDomainError

Value = float  # int or math.inf for "nat" domains, float in [0,1] for "unit"

INF = math.inf

#: Tolerance for comparing unit-interval values; "nat" domains compare exactly.
UNIT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class MetricDomain:
    """A linearly ordered unital semiring attribute domain.

    ``delta`` must distribute over ``nabla`` and ``nabla`` must absorb
    ``delta`` (x nabla (x delta y) = x); ``check_axioms`` verifies these
    laws on sample values.
    """

    name: str
    value_kind: str  # "nat" (naturals plus inf) or "unit" ([0, 1])
    nabla: Callable[[Value, Value], Value]
    delta: Callable[[Value, Value], Value]
    one_nabla: Value
    one_delta: Value
    leq: Callable[[Value, Value], bool]

    def contains(self, v: Value) -> bool:
        if isinstance(v, bool):
            return False
        if self.value_kind == "nat":
            return (isinstance(v, int) and v >= 0) or v == INF
        return isinstance(v, (int, float)) and 0.0 <= v <= 1.0

    def require(self, v: Value) -> Value:
        if not self.contains(v):
            raise DomainValueError(f"{v!r} is not a value of domain {self.name!r}")
        return v

    @property
    def tolerance(self) -> float:
        return 0.0 if self.value_kind == "nat" else UNIT_TOLERANCE

    def close(self, a: Value, b: Value) -> bool:
        """Equality up to the domain's comparison tolerance."""
        if a == b:
            return True
        if a == INF or b == INF:
            return False
        return abs(a - b) <= self.tolerance

    def format_value(self, v: Value) -> str:
        if v == INF:
            return "inf"
        if isinstance(v, int):
            return str(v)
        return repr(v)

    def parse_value(self, text: str) -> Value:
        """Parse a literal: nonnegative decimal, ``inf``, or a probability."""
        text = text.strip()
        if text == "inf":
            return self.require(INF)
        if self.value_kind == "nat":
            if not text.isdigit():
                raise DomainValueError(
                    f"{text!r} is not a natural number or 'inf' (domain {self.name!r})")
            return int(text)
        whole, _, frac = text.partition(".")
        if not whole.isdigit() or (frac and not frac.isdigit()):
            raise DomainValueError(f"{text!r} is not a probability (domain {self.name!r})")
        if len(frac) > 9:
            raise DomainValueError(
                f"{text!r} has more than 9 decimal places (domain {self.name!r})")
        return self.require(float(text))


def _min(a: Value, b: Value) -> Value:
    return a if a <= b else b


def _max(a: Value, b: Value) -> Value:
    return b if a <= b else a


def _le(a: Value, b: Value) -> bool:
    return a <= b


def _add(a: Value, b: Value) -> Value:
    return a + b


_BUILTINS = {
    "mincost": ("nat", _min, _add, INF, 0),
    "seqtime": ("nat", _min, _add, INF, 0),
    "partime": ("nat", _min, _max, INF, 0),
    "minskill": ("nat", _min, _max, INF, 0),
    "maxprob": ("unit", _max, operator.mul, 0.0, 1.0),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_domain(name: str) -> MetricDomain:
    """Return one of the five built-in domains by name."""
    try:
        kind, nabla, delta, one_n, one_d = _BUILTINS[name]
    except KeyError:
        raise UnknownDomainError(
            f"unknown metric domain {name!r}; choose one of {', '.join(BUILTIN_NAMES)}"
        ) from None
    return MetricDomain(name, kind, nabla, delta, one_n, one_d, _le)


def fold_delta(domain: MetricDomain, values: Iterable[Value]) -> Value:
    """Combine the values of one attack; the empty fold is ``one_delta``."""
    acc = domain.one_delta
    for v in values:
        acc = domain.delta(acc, domain.require(v))
    return acc


def fold_nabla(domain: MetricDomain, values: Iterable[Value]) -> Value:
    """Combine values across attacks; the empty fold is ``one_nabla``."""
    acc = domain.one_nabla
    for v in values:
        acc = domain.nabla(acc, domain.require(v))
    return acc


COMPARATORS = ("<=", "<", ">=", ">", "==", "!=")


def compare(domain: MetricDomain, cmp: str, a: Value, b: Value) -> bool:
    """Decide a comparison; all six comparators derive from the total order."""
    le, ge = domain.leq(a, b), domain.leq(b, a)
    if cmp == "<=":
        return le
    if cmp == "<":
        return le and not ge
    if cmp == ">=":
        return ge
    if cmp == ">":
        return ge and not le
    if cmp == "==":
        return le and ge
    if cmp == "!=":
        return not (le and ge)
    raise ValueError(f"unknown comparator {cmp!r}")


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    values: tuple
    detail: str

    def __str__(self) -> str:
        return f"{self.axiom} fails at {self.values}: {self.detail}"


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    violations: tuple[AxiomViolation, ...]


def check_axioms(domain: MetricDomain, samples: Iterable[Value]) -> AxiomReport:
    """Check every semiring/order axiom over all tuples drawn from samples.

    Violations are collected (first witness per axiom), not raised.
    """
    xs = [domain.require(v) for v in samples]
    nab, dlt, close = domain.nabla, domain.delta, domain.close
    found: list[AxiomViolation] = []

    def record(axiom, values, lhs, rhs):
        found.append(AxiomViolation(axiom, values, f"{lhs!r} != {rhs!r}"))

    def check_pairs(axiom, f):
        for x in xs:
            for y in xs:
                lhs, rhs = f(x, y)
                if not close(lhs, rhs):
                    record(axiom, (x, y), lhs, rhs)
                    return

    def check_triples(axiom, f):
        for x in xs:
            for y in xs:
                for z in xs:
                    lhs, rhs = f(x, y, z)
                    if not close(lhs, rhs):
                        record(axiom, (x, y, z), lhs, rhs)
                        return

    check_pairs("nabla-commutative", lambda x, y: (nab(x, y), nab(y, x)))
    check_pairs("delta-commutative", lambda x, y: (dlt(x, y), dlt(y, x)))
    check_triples("nabla-associative",
                  lambda x, y, z: (nab(nab(x, y), z), nab(x, nab(y, z))))
    check_triples("delta-associative",
                  lambda x, y, z: (dlt(dlt(x, y), z), dlt(x, dlt(y, z))))
    # delta distributes over nabla: x . (y + z) = (x . y) + (x . z) in
    # semiring notation, with nabla as the additive operator.
    check_triples("distributivity",
                  lambda x, y, z: (dlt(x, nab(y, z)), nab(dlt(x, y), dlt(x, z))))
    check_pairs("absorption", lambda x, y: (nab(x, dlt(x, y)), x))
    for x in xs:
        if not close(nab(domain.one_nabla, x), x):
            record("nabla-unit", (x,), nab(domain.one_nabla, x), x)
            break
    for x in xs:
        if not close(dlt(domain.one_delta, x), x):
            record("delta-unit", (x,), dlt(domain.one_delta, x), x)
            break
    for x in xs:
        stop = False
        for y in xs:
            ab, ba = domain.leq(x, y), domain.leq(y, x)
            if not (ab or ba):
                found.append(AxiomViolation("order-total", (x, y), "incomparable"))
                stop = True
                break
        if stop:
            break

    return AxiomReport(not found, tuple(found))
