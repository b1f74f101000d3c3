"""Quantitative queries on static attack trees.

The package models attack trees as rooted DAGs of AND/OR gates over basic
attack steps, attaches semiring metric domains (cost, time, skill,
probability) to them, and answers four layers of queries: reachability of
nodes under an attack, metric bounds on single attacks, metric values of
whole formulae, and quantification over all attacks. Queries compile to
reduced ordered binary decision diagrams; a brute-force oracle provides an
independent reference semantics for cross-validation.
"""

from importlib import resources as _resources

from .bdd import Bdd, BddManager
from .checker import (
    DEFAULT_CAP,
    CheckOutcome,
    check_layer1,
    check_layer2,
    check_layer4,
    metric_layer3,
    sat_attacks,
)
from .compiler import CompiledFormula, compile_formula, translate_tree
from .domains import (
    BUILTIN_NAMES,
    INF,
    AxiomReport,
    AxiomViolation,
    MetricDomain,
    builtin_domain,
    check_axioms,
    compare,
    fold_delta,
    fold_nabla,
)
from .errors import *  # noqa: F401,F403 -- the exception vocabulary
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
    atoms,
    desugar,
    prune_for,
    well_formed,
)
from .oracle import (
    naive_eval,
    naive_layer2,
    naive_layer4,
    naive_metric,
    naive_minimal_sat,
    naive_phi_metric,
)
from .parsing import (
    Query,
    format_formula,
    layer_of,
    parse_formula,
    parse_queries,
    parse_tree,
)
from .trees import Attack, AttackTree, AttributedTree, Defect, ValidationReport

__version__ = "0.1.0"


def corpus_path(name: str):
    """Filesystem path of a bundled corpus file, e.g. ``"excerpt.at"``."""
    return _resources.files(__name__).joinpath("corpus", name)
