"""Exception types shared across the package."""

from __future__ import annotations


class AtqueryError(Exception):
    """Base class for all errors raised by this package."""


# --- metric domains ---------------------------------------------------------

class UnknownDomainError(AtqueryError):
    """A metric domain name does not refer to a known domain."""


class DomainValueError(AtqueryError):
    """A value lies outside the value set of its metric domain."""


# --- attack trees -----------------------------------------------------------

class UnknownNodeError(AtqueryError):
    """A node identifier does not occur in the tree."""


class NotAModuleError(AtqueryError):
    """Pruning or targeting requires a module node."""


class UnknownBasicError(AtqueryError):
    """An identifier does not name a basic step of the tree."""


class MissingAttributionError(AtqueryError):
    """A basic step has no attributed value for the requested domain."""


# --- formulas ---------------------------------------------------------------

class UnknownAtomError(AtqueryError):
    """A formula mentions an identifier that is not a tree node."""


class DescendantInFormulaError(AtqueryError):
    """An evidence/attribution target has a descendant mentioned elsewhere
    in the same formula."""


# --- BDD engine -------------------------------------------------------------

class UnknownVariableError(AtqueryError):
    """A variable name is not registered with the manager."""


class OrderMismatchError(AtqueryError):
    """Operands belong to different managers (hence different orders)."""


class OrderViolationError(AtqueryError):
    """A renaming would break the variable order."""


class NonInjectiveMapError(AtqueryError):
    """A renaming maps two variables onto one."""


class LengthMismatchError(AtqueryError):
    """Paired variable lists have different lengths."""


class PartialAssignmentError(AtqueryError):
    """An assignment does not cover all variables of the diagram."""


class BddInvariantError(AtqueryError):
    """A diagram violates the reduced/ordered/unique invariants."""


# --- checking ---------------------------------------------------------------

class EnumerationCapExceeded(AtqueryError):
    """An exhaustive scan would exceed the configured basic-step cap."""


# --- frontend ---------------------------------------------------------------

class ParseError(AtqueryError):
    """Syntax error in a tree document or formula, with position info."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"{self.line}:{self.col}: {self.message}"


class InvalidTreeError(AtqueryError):
    """A parsed tree document failed structural validation."""

    def __init__(self, defects):
        super().__init__("; ".join(str(d) for d in defects))
        self.defects = tuple(defects)


class PartialAttributionError(AtqueryError):
    """A declared domain does not cover every basic step."""
