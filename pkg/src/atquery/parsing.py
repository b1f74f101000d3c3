"""Concrete syntax: tree documents, formulae, and query lists.

Tree documents are line-oriented, ``;``-terminated, with ``#`` comments:

    domain cost mincost;
    toplevel ADA;
    ADA and GA EP;
    EP or LM EV;
    basic LM cost=7;

Formulae use ``!``, ``&``, ``|``, ``=>``, ``<=>``, ``<!=>``, postfix evidence
``phi[e:=0]``, ``MA()``/``MD()``, metric bounds ``M[cost](phi) <= 24``,
metric values ``V[cost](phi)``, postfix attribution ``[e @cost := 5]``,
quantifiers ``exists(phi ; psi)`` / ``forall(phi ; psi)``, and capitalized
domain aliases (``Cost(phi) < 20``). The layer of a parsed formula is
inferred from the constructs it uses; layer-1 operands of layer-2
connectives are lifted automatically.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

from .domains import COMPARATORS, builtin_domain
from .errors import (
    DomainValueError,
    InvalidTreeError,
    ParseError,
    PartialAttributionError,
)
from .formulas import (
    And,
    Atom,
    Evidence,
    Exists,
    Forall,
    Formula,
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
)
from .trees import AND, BASIC, OR, AttackTree, AttributedTree

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>\d+(?:\.\d+)?)
  | (?P<op><!=>|<=>|<=|>=|==|!=|=>|:=|<|>|=|!|&|\||\(|\)|\[|\]|;|@|,)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "op" | "end"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(lexeme)
        else:
            tokens.append(Token(kind, lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in ops

    def take_op(self, op: str) -> Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.next()

    def take_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        return self.next()


# --- tree documents ----------------------------------------------------------


def parse_tree(text: str) -> AttributedTree:
    """Parse and validate a tree document; returns the attributed tree.

    Raises ``ParseError`` on syntax problems, ``InvalidTreeError`` when the
    structure breaks a tree invariant, and ``PartialAttributionError`` when a
    declared domain misses a basic step.
    """
    stream = _Stream(tokenize(text))
    domains: dict[str, object] = {}
    domain_order: list[str] = []
    toplevel: Token | None = None
    nodes: list[str] = []
    node_type: dict[str, str] = {}
    children: dict[str, list[str]] = {}
    raw_attrs: dict[str, dict[str, tuple[str, Token]]] = {}

    def declare(tok: Token, kind: str) -> None:
        if tok.text in node_type:
            raise ParseError(f"node {tok.text!r} declared twice", tok.line, tok.col)
        nodes.append(tok.text)
        node_type[tok.text] = kind

    while stream.peek().kind != "end":
        head = stream.take_ident("statement")
        if head.text == "domain":
            name = stream.take_ident("domain name")
            builtin = stream.take_ident("built-in domain name")
            if name.text in domains:
                raise ParseError(f"domain {name.text!r} declared twice",
                                 name.line, name.col)
            try:
                base = builtin_domain(builtin.text)
            except Exception as exc:
                raise ParseError(str(exc), builtin.line, builtin.col) from None
            # a declared domain keeps its own name but built-in arithmetic
            domains[name.text] = dataclasses.replace(base, name=name.text)
            domain_order.append(name.text)
        elif head.text == "toplevel":
            if toplevel is not None:
                raise ParseError("toplevel declared twice", head.line, head.col)
            toplevel = stream.take_ident("root node name")
        elif head.text == "basic":
            name = stream.take_ident("basic step name")
            declare(name, BASIC)
            attrs: dict[str, tuple[str, Token]] = {}
            while stream.peek().kind == "ident":
                dom = stream.take_ident()
                stream.take_op("=")
                val = stream.peek()
                if val.kind == "number" or (val.kind == "ident" and val.text == "inf"):
                    stream.next()
                else:
                    raise ParseError("expected a value after '='", val.line, val.col)
                if dom.text in attrs:
                    raise ParseError(
                        f"value for domain {dom.text!r} given twice", dom.line, dom.col)
                attrs[dom.text] = (val.text, dom)
            raw_attrs[name.text] = attrs
        else:
            node = head
            gate = stream.take_ident("'and' or 'or'")
            if gate.text not in (AND, OR):
                raise ParseError(f"expected 'and' or 'or', found {gate.text!r}",
                                 gate.line, gate.col)
            declare(node, gate.text)
            kids = []
            while stream.peek().kind == "ident":
                kids.append(stream.next().text)
            if not kids:
                raise ParseError(f"gate {node.text!r} has no children",
                                 node.line, node.col)
            children[node.text] = kids
        stream.take_op(";")

    if toplevel is None:
        tok = stream.peek()
        raise ParseError("missing 'toplevel' declaration", tok.line, tok.col)
    if toplevel.text not in node_type:
        raise ParseError(f"toplevel {toplevel.text!r} is not declared",
                         toplevel.line, toplevel.col)

    tree = AttackTree(nodes, node_type, children, toplevel.text)
    report = tree.validate()
    if not report.ok:
        raise InvalidTreeError(report.defects)

    ordered_domains = [domains[n] for n in domain_order]
    attributions: list[dict] = [dict() for _ in ordered_domains]
    index = {n: i for i, n in enumerate(domain_order)}
    for basic, attrs in raw_attrs.items():
        for dom_name, (value_text, tok) in attrs.items():
            if dom_name not in index:
                raise ParseError(f"domain {dom_name!r} is not declared",
                                 tok.line, tok.col)
            dom = ordered_domains[index[dom_name]]
            try:
                value = dom.parse_value(value_text)
            except DomainValueError as exc:
                raise ParseError(str(exc), tok.line, tok.col) from None
            attributions[index[dom_name]][basic] = value
    for dom, attr in zip(ordered_domains, attributions):
        missing = [b for b in tree.basic_order if b not in attr]
        if missing:
            raise PartialAttributionError(
                f"domain {dom.name!r} lacks a value for basic step {missing[0]!r}")
    return AttributedTree(tree, ordered_domains, attributions)


# --- formulae ----------------------------------------------------------------

# surface nodes: connectives stay generic until the layer is known
@dataclass(frozen=True)
class _SNode:
    op: str           # "atom" | "not" | "and" | ... | "ma" | "md" | "evidence"
    parts: tuple      # children / payload
    line: int
    col: int


_BINARY = {"&": "and", "|": "or", "=>": "implies", "<=>": "iff", "<!=>": "nequiv"}


class _FormulaParser:
    def __init__(self, stream: _Stream, at: AttributedTree):
        self.s = stream
        self.at = at
        self.domain_names = {d.name.lower(): d.name for d in at.domains}

    # precedence: iff/nequiv < implies < or < and < not < postfix < primary
    def parse(self) -> _SNode:
        return self._iff()

    def _iff(self) -> _SNode:
        node = self._implies()
        while self.s.at_op("<=>", "<!=>"):
            tok = self.s.next()
            right = self._implies()
            node = _SNode(_BINARY[tok.text], (node, right), tok.line, tok.col)
        return node

    def _implies(self) -> _SNode:
        node = self._or()
        if self.s.at_op("=>"):
            tok = self.s.next()
            right = self._implies()  # right-associative
            node = _SNode("implies", (node, right), tok.line, tok.col)
        return node

    def _or(self) -> _SNode:
        node = self._and()
        while self.s.at_op("|"):
            tok = self.s.next()
            node = _SNode("or", (node, self._and()), tok.line, tok.col)
        return node

    def _and(self) -> _SNode:
        node = self._unary()
        while self.s.at_op("&"):
            tok = self.s.next()
            node = _SNode("and", (node, self._unary()), tok.line, tok.col)
        return node

    def _unary(self) -> _SNode:
        if self.s.at_op("!"):
            tok = self.s.next()
            return _SNode("not", (self._unary(),), tok.line, tok.col)
        return self._postfix()

    def _postfix(self) -> _SNode:
        node = self._primary()
        while self.s.at_op("["):
            tok = self.s.take_op("[")
            target = self.s.take_ident("evidence or attribution target")
            if self.s.at_op(":="):
                self.s.take_op(":=")
                bit = self.s.peek()
                if bit.kind != "number" or bit.text not in ("0", "1"):
                    raise ParseError("evidence value must be 0 or 1",
                                     bit.line, bit.col)
                self.s.next()
                node = _SNode("evidence", (node, target.text, int(bit.text)),
                              tok.line, tok.col)
            elif self.s.at_op("@"):
                self.s.take_op("@")
                dom = self.s.take_ident("domain name")
                self.s.take_op(":=")
                value = self._value_token()
                node = _SNode("attrib", (node, target.text, dom.text, value, dom),
                              tok.line, tok.col)
            else:
                bad = self.s.peek()
                raise ParseError("expected ':=' or '@' inside '[...]'",
                                 bad.line, bad.col)
            self.s.take_op("]")
        return node

    def _value_token(self) -> str:
        tok = self.s.peek()
        if tok.kind == "number" or (tok.kind == "ident" and tok.text == "inf"):
            self.s.next()
            return tok.text
        raise ParseError("expected a value", tok.line, tok.col)

    def _primary(self) -> _SNode:
        tok = self.s.peek()
        if tok.kind == "op" and tok.text == "(":
            self.s.next()
            node = self.parse()
            self.s.take_op(")")
            return node
        if tok.kind != "ident":
            raise ParseError(f"expected a formula, found {tok.text or 'end of input'!r}",
                             tok.line, tok.col)
        name = self.s.next()
        if name.text in ("MA", "MD") and self.s.at_op("("):
            self.s.take_op("(")
            inner = self.parse()
            self.s.take_op(")")
            return _SNode("ma" if name.text == "MA" else "md", (inner,),
                          name.line, name.col)
        if name.text in ("M", "V") and self.s.at_op("["):
            self.s.take_op("[")
            dom = self.s.take_ident("domain name")
            self.s.take_op("]")
            self.s.take_op("(")
            inner = self.parse()
            self.s.take_op(")")
            if name.text == "M":
                cmp_tok = self.s.peek()
                if not self.s.at_op(*COMPARATORS):
                    raise ParseError("metric bound needs a comparator",
                                     cmp_tok.line, cmp_tok.col)
                self.s.next()
                value = self._value_token()
                return _SNode("bound", (dom.text, inner, cmp_tok.text, value, dom),
                              name.line, name.col)
            return _SNode("value", (dom.text, inner, dom), name.line, name.col)
        if name.text in ("exists", "forall") and self.s.at_op("("):
            return self._quantifier(name)
        if self.s.at_op("("):
            # capitalized metric alias: Cost(phi) [cmp value]
            resolved = self.domain_names.get(name.text.lower())
            if resolved is None:
                raise ParseError(f"unknown metric alias {name.text!r}",
                                 name.line, name.col)
            self.s.take_op("(")
            inner = self.parse()
            self.s.take_op(")")
            if self.s.at_op(*COMPARATORS):
                cmp_tok = self.s.next()
                value = self._value_token()
                return _SNode("bound", (resolved, inner, cmp_tok.text, value, name),
                              name.line, name.col)
            return _SNode("value", (resolved, inner, name), name.line, name.col)
        return _SNode("atom", (name.text,), name.line, name.col)

    def _quantifier(self, name: Token) -> _SNode:
        self.s.take_op("(")
        left = right = None
        if not self.s.at_op(";") and not self.s.at_op(")"):
            left = self.parse()
        saw_semicolon = False
        if self.s.at_op(";"):
            saw_semicolon = True
            self.s.next()
            if not self.s.at_op(")"):
                right = self.parse()
        self.s.take_op(")")
        if left is None and right is None:
            raise ParseError("quantifier needs at least one side",
                             name.line, name.col)
        if not saw_semicolon:
            # one-sided form without ';': side chosen by the body's layer
            if self._is_phi(left):
                left, right = left, None
            else:
                left, right = None, left
        return _SNode(name.text, (left, right), name.line, name.col)

    # -- elaboration into the stratified AST ------------------------------

    def _is_phi(self, node: _SNode | None) -> bool:
        if node is None:
            return True
        if node.op in ("bound", "value", "attrib", "exists", "forall"):
            return False
        return all(self._is_phi(p) for p in node.parts if isinstance(p, _SNode))

    def _contains(self, node: _SNode, ops: tuple) -> bool:
        if node.op in ops:
            return True
        return any(self._contains(p, ops) for p in node.parts if isinstance(p, _SNode))

    def elaborate(self, node: _SNode) -> Formula:
        if node.op in ("exists", "forall") or (
                node.op == "not" and self._contains(node, ("exists", "forall"))):
            return self._as_gamma(node)
        if self._contains(node, ("exists", "forall")):
            raise ParseError("quantifiers cannot nest inside connectives",
                             node.line, node.col)
        if self._contains(node, ("value",)):
            return self._as_xi(node)
        if self._is_phi(node):
            return self._as_phi(node)
        return self._as_psi(node)

    def _as_phi(self, node: _SNode) -> Phi:
        op, parts = node.op, node.parts
        if op == "atom":
            return Atom(parts[0])
        if op == "not":
            return Not(self._as_phi(parts[0]))
        if op in ("and", "or", "implies", "iff", "nequiv"):
            ctor = {"and": And, "or": Or, "implies": Implies,
                    "iff": Iff, "nequiv": Nequiv}[op]
            return ctor(self._as_phi(parts[0]), self._as_phi(parts[1]))
        if op == "evidence":
            return Evidence(self._as_phi(parts[0]), parts[1], parts[2])
        if op == "ma":
            return MinimalAttack(self._as_phi(parts[0]))
        if op == "md":
            return MinimalDefence(self._as_phi(parts[0]))
        if op == "attrib":
            raise ParseError("attribution needs a metric formula to apply to",
                             node.line, node.col)
        raise ParseError(f"{op} cannot occur in a layer-1 formula",
                         node.line, node.col)

    def _domain_value(self, dom_name: str, text: str, tok: Token):
        try:
            dom = self.at.domain(dom_name)
        except Exception as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None
        try:
            return dom.parse_value(text)
        except DomainValueError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def _as_psi(self, node: _SNode) -> Psi:
        if self._is_phi(node):
            return Holds(self._as_phi(node))
        op, parts = node.op, node.parts
        if op == "not":
            return PsiNot(self._as_psi(parts[0]))
        if op in ("and", "or", "implies", "iff", "nequiv"):
            ctor = {"and": PsiAnd, "or": PsiOr, "implies": PsiImplies,
                    "iff": PsiIff, "nequiv": PsiNequiv}[op]
            return ctor(self._as_psi(parts[0]), self._as_psi(parts[1]))
        if op == "bound":
            dom_name, inner, cmp, value_text, tok = parts
            value = self._domain_value(dom_name, value_text, tok)
            return MetricBound(dom_name, self._as_phi(inner), cmp, value)
        if op == "attrib":
            inner, target, dom_name, value_text, tok = parts
            value = self._domain_value(dom_name, value_text, tok)
            return PsiAttrib(self._as_psi(inner), target, dom_name, value)
        if op == "evidence":
            raise ParseError("evidence applies to layer-1 formulas only",
                             node.line, node.col)
        raise ParseError(f"{op} cannot occur in a layer-2 formula",
                         node.line, node.col)

    def _as_xi(self, node: _SNode) -> Xi:
        op, parts = node.op, node.parts
        if op == "value":
            dom_name, inner, _tok = parts
            return MetricValue(dom_name, self._as_phi(inner))
        if op == "attrib":
            inner, target, dom_name, value_text, tok = parts
            value = self._domain_value(dom_name, value_text, tok)
            return XiAttrib(self._as_xi(inner), target, dom_name, value)
        raise ParseError(
            "a metric value cannot be combined with boolean connectives; "
            "compare it with a bound instead", node.line, node.col)

    def _as_gamma(self, node: _SNode) -> Gamma:
        op, parts = node.op, node.parts
        if op == "not":
            return GammaNot(self._as_gamma(parts[0]))
        if op in ("exists", "forall"):
            left, right = parts
            phi = self._as_phi(left) if left is not None else None
            psi = self._as_psi(right) if right is not None else None
            ctor = Exists if op == "exists" else Forall
            return ctor(phi, psi)
        raise ParseError("quantifiers cannot nest inside connectives",
                         node.line, node.col)


def parse_formula(text: str, at: AttributedTree) -> Formula:
    """Parse a formula of any layer; the layer is inferred."""
    stream = _Stream(tokenize(text))
    parser = _FormulaParser(stream, at)
    surface = parser.parse()
    leftover = stream.peek()
    if leftover.kind != "end":
        raise ParseError(f"unexpected trailing input {leftover.text!r}",
                         leftover.line, leftover.col)
    return parser.elaborate(surface)


def layer_of(f: Formula) -> int:
    if isinstance(f, Phi):
        return 1
    if isinstance(f, Psi):
        return 2
    if isinstance(f, Xi):
        return 3
    if isinstance(f, Gamma):
        return 4
    raise TypeError(f"not a formula: {f!r}")


# --- pretty-printing ---------------------------------------------------------

_LEVEL_IFF, _LEVEL_IMPLIES, _LEVEL_OR, _LEVEL_AND, _LEVEL_NOT, _LEVEL_POSTFIX = \
    1, 2, 3, 4, 5, 6
_PRIMARY = 7


def _fmt_value(v) -> str:
    if v == float("inf"):
        return "inf"
    if isinstance(v, int):
        return str(v)
    return repr(v)


def format_formula(f: Formula | None) -> str:
    """Render a formula; reparsing the output yields an identical AST."""
    if f is None:
        return ""
    text, _ = _fmt(f)
    return text


def _wrap(child: Formula, minimum: int) -> str:
    text, level = _fmt(child)
    return f"({text})" if level < minimum else text


def _fmt(f: Formula) -> tuple[str, int]:
    match f:
        case Atom(name):
            return name, _PRIMARY
        case Not(c) | PsiNot(c) | GammaNot(c):
            return "!" + _wrap(c, _LEVEL_NOT), _LEVEL_NOT
        case And(a, b) | PsiAnd(a, b):
            return f"{_wrap(a, _LEVEL_AND)} & {_wrap(b, _LEVEL_AND + 1)}", _LEVEL_AND
        case Or(a, b) | PsiOr(a, b):
            return f"{_wrap(a, _LEVEL_OR)} | {_wrap(b, _LEVEL_OR + 1)}", _LEVEL_OR
        case Implies(a, b) | PsiImplies(a, b):
            return (f"{_wrap(a, _LEVEL_IMPLIES + 1)} => {_wrap(b, _LEVEL_IMPLIES)}",
                    _LEVEL_IMPLIES)
        case Iff(a, b) | PsiIff(a, b):
            return (f"{_wrap(a, _LEVEL_IFF)} <=> {_wrap(b, _LEVEL_IFF + 1)}",
                    _LEVEL_IFF)
        case Nequiv(a, b) | PsiNequiv(a, b):
            return (f"{_wrap(a, _LEVEL_IFF)} <!=> {_wrap(b, _LEVEL_IFF + 1)}",
                    _LEVEL_IFF)
        case Evidence(c, target, bit):
            return f"{_wrap(c, _LEVEL_POSTFIX)}[{target}:={bit}]", _LEVEL_POSTFIX
        case MinimalAttack(c):
            return f"MA({format_formula(c)})", _PRIMARY
        case MinimalDefence(c):
            return f"MD({format_formula(c)})", _PRIMARY
        case Holds(phi):
            return _fmt(phi)
        case MetricBound(domain, phi, cmp, bound):
            return (f"M[{domain}]({format_formula(phi)}) {cmp} {_fmt_value(bound)}",
                    _PRIMARY)
        case PsiAttrib(c, target, domain, value) | XiAttrib(c, target, domain, value):
            return (f"{_wrap(c, _LEVEL_POSTFIX)}[{target} @{domain} := {_fmt_value(value)}]",
                    _LEVEL_POSTFIX)
        case MetricValue(domain, phi):
            return f"V[{domain}]({format_formula(phi)})", _PRIMARY
        case Exists(phi, psi):
            return f"exists({format_formula(phi)} ; {format_formula(psi)})", _PRIMARY
        case Forall(phi, psi):
            return f"forall({format_formula(phi)} ; {format_formula(psi)})", _PRIMARY
    raise TypeError(f"not a formula: {f!r}")


# --- query documents ---------------------------------------------------------

@dataclass(frozen=True)
class Query:
    name: str
    text: str
    formula: Formula
    layer: int


def parse_queries(text: str, at: AttributedTree) -> list[Query]:
    """Parse a query list: one ``name: formula`` entry per line, ``#``
    comments and blank lines ignored."""
    queries: list[Query] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(":")
        name = name.strip()
        body = body.strip()
        if not sep or not body:
            raise ParseError("expected 'name: formula'", lineno, 1)
        if not IDENTIFIER.match(name):
            raise ParseError(f"invalid query name {name!r}", lineno, 1)
        if name in seen:
            raise ParseError(f"query {name!r} defined twice", lineno, 1)
        seen.add(name)
        try:
            formula = parse_formula(body, at)
        except ParseError as exc:
            raise ParseError(f"in query {name!r}: {exc.message}",
                             lineno, exc.col) from None
        queries.append(Query(name, body, formula, layer_of(formula)))
    return queries
