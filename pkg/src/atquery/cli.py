"""Command-line driver.

Exit codes: 0 for success (or a true verdict), 1 for a false verdict or an
invalid tree, 2 for any parse or semantic error. With ``--json`` every
command prints one JSON object on stdout; errors become a structured
``{"error": ...}`` object.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .checker import (
    DEFAULT_CAP,
    check_layer1,
    check_layer2,
    check_layer4,
    metric_layer3,
    sat_attacks,
)
from .domains import INF
from .errors import AtqueryError, InvalidTreeError, ParseError
from .formulas import Gamma, MetricValue, MinimalAttack, Phi, Psi, Xi, prune_for
from .oracle import (
    naive_eval,
    naive_layer2,
    naive_layer4,
    naive_metric,
    naive_minimal_sat,
)
from .parsing import format_formula, layer_of, parse_formula, parse_queries, parse_tree
from .trees import AttributedTree


def _attack_list(attacks) -> list[list[str]]:
    rendered = [sorted(a) for a in attacks]
    rendered.sort(key=lambda names: (len(names), names))
    return rendered


def _json_value(v):
    return "inf" if v == INF else v


def _outcome_payload(outcome) -> dict:
    return {
        "verdict": outcome.verdict,
        "witness": sorted(outcome.witness) if outcome.witness is not None else None,
    }


def _load_tree(path: str) -> AttributedTree:
    return parse_tree(Path(path).read_text(encoding="utf-8"))


def _parse_attack(text: str, at: AttributedTree, formula=None):
    """Split a comma-separated attack; members must be basic steps of the
    tree after any pruning the formula requires."""
    names = [n for n in (part.strip() for part in text.split(",")) if n]
    tree = at.tree
    if formula is not None:
        tree = prune_for(tree, formula, at.domains)
    known = set(tree.basic_order)
    for n in names:
        if n not in known:
            raise AtqueryError(f"{n!r} is not a basic step of the tree"
                               + (" (after pruning)" if formula is not None else ""))
    return frozenset(names)


def _emit(args, payload: dict, human: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif human is not None:
        print(human)


def _cmd_validate(args) -> int:
    try:
        _load_tree(args.tree)
    except InvalidTreeError as exc:
        defects = [{"code": d.code, "node": d.node, "message": d.message}
                   for d in exc.defects]
        _emit(args, {"valid": False, "defects": defects},
              "\n".join(str(d) for d in exc.defects))
        return 1
    _emit(args, {"valid": True, "defects": []}, "ok")
    return 0


def _cmd_attacks(args) -> int:
    at = _load_tree(args.tree)
    phi = parse_formula(args.formula, at)
    if not isinstance(phi, Phi):
        raise AtqueryError("'attacks' needs a layer-1 formula")
    if args.minimal:
        phi = MinimalAttack(phi)
    result = _attack_list(sat_attacks(at.tree, phi, cap=args.cap))
    if args.json:
        print(json.dumps({"attacks": result}, sort_keys=True))
    else:
        print(json.dumps(result))
    return 0


def _cmd_check(args) -> int:
    at = _load_tree(args.tree)
    formula = parse_formula(args.formula, at)
    attack = _parse_attack(args.attack, at, formula)
    if isinstance(formula, Phi):
        verdict = check_layer1(attack, at.tree, formula)
    elif isinstance(formula, Psi):
        verdict = check_layer2(attack, at, formula)
    else:
        raise AtqueryError("'check' needs a layer-1 or layer-2 formula")
    _emit(args, {"verdict": verdict}, "true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_metric(args) -> int:
    at = _load_tree(args.tree)
    xi = parse_formula(args.formula, at)
    if not isinstance(xi, Xi):
        raise AtqueryError("'metric' needs a layer-3 formula")
    value = metric_layer3(at, xi)
    _emit(args, {"value": _json_value(value)},
          "inf" if value == INF else str(value))
    return 0


def _cmd_quantify(args) -> int:
    at = _load_tree(args.tree)
    gamma = parse_formula(args.formula, at)
    if not isinstance(gamma, Gamma):
        raise AtqueryError("'quantify' needs a layer-4 formula")
    outcome = check_layer4(at, gamma, cap=args.cap)
    payload = _outcome_payload(outcome)
    print(json.dumps(payload, sort_keys=True))
    return 0 if outcome.verdict else 1


def _sample_attacks(at: AttributedTree, seed: int, count: int = 2048):
    rng = random.Random(seed)
    basics = at.tree.basic_order
    for _ in range(count):
        yield frozenset(b for b in basics if rng.random() < 0.5)


def _enumerate_attacks(at: AttributedTree, args):
    """Exhaustive when the tree is small enough, else seeded sampling."""
    basics = at.tree.basic_order
    if len(basics) <= args.cap and len(basics) <= 16:
        from itertools import combinations
        for k in range(len(basics) + 1):
            for combo in combinations(basics, k):
                yield frozenset(combo)
    else:
        yield from _sample_attacks(at, args.seed)


def _values_close(at: AttributedTree, xi, a, b) -> bool:
    inner = xi
    while not isinstance(inner, MetricValue):
        inner = inner.child
    return at.domain(inner.domain).close(a, b)


def _cmd_oracle_compare(args) -> int:
    at = _load_tree(args.tree)
    formula = parse_formula(args.formula, at)
    layer = layer_of(formula)
    mismatches = 0
    checked = 0
    if layer == 1:
        cap = len(at.tree.basic_order)
        for attack in _enumerate_attacks(at, args):
            checked += 1
            if check_layer1(attack, at.tree, formula) != naive_eval(
                    attack, at.tree, formula, cap=cap):
                mismatches += 1
        if len(at.tree.basic_order) <= args.cap:
            fast = _attack_list(sat_attacks(at.tree, MinimalAttack(formula), cap=args.cap))
            slow = _attack_list(naive_minimal_sat(at.tree, formula, cap=args.cap))
            checked += 1
            if fast != slow:
                mismatches += 1
    elif layer == 2:
        cap = len(at.tree.basic_order)
        for attack in _enumerate_attacks(at, args):
            checked += 1
            if check_layer2(attack, at, formula) != naive_layer2(
                    attack, at, formula, cap=cap):
                mismatches += 1
    elif layer == 3:
        checked += 1
        fast = metric_layer3(at, formula)
        slow = naive_metric(at, formula, cap=args.cap)
        if not _values_close(at, formula, fast, slow):
            mismatches += 1
    else:
        checked += 1
        fast = check_layer4(at, formula, cap=args.cap)
        slow = naive_layer4(at, formula, cap=args.cap)
        if (fast.verdict, fast.witness) != (slow.verdict, slow.witness):
            mismatches += 1
    payload = {"match": mismatches == 0, "checked": checked, "mismatches": mismatches}
    _emit(args, payload,
          "match" if mismatches == 0 else f"MISMATCH ({mismatches} of {checked})")
    return 0 if mismatches == 0 else 1


def _cmd_run(args) -> int:
    at = _load_tree(args.tree)
    queries = parse_queries(Path(args.queries).read_text(encoding="utf-8"), at)
    attack = (_parse_attack(args.attack, at) if args.attack is not None
              else frozenset(at.tree.basic_order))
    results = []
    for q in queries:
        entry: dict = {"name": q.name, "layer": q.layer,
                       "formula": format_formula(q.formula)}
        if q.layer == 1:
            attacks = sat_attacks(at.tree, q.formula, cap=args.cap)
            entry["attacks"] = _attack_list(attacks)
        elif q.layer == 2:
            entry["attack"] = sorted(attack)
            entry["verdict"] = check_layer2(attack, at, q.formula)
        elif q.layer == 3:
            entry["value"] = _json_value(metric_layer3(at, q.formula))
        else:
            entry.update(_outcome_payload(check_layer4(at, q.formula, cap=args.cap)))
        results.append(entry)
    if args.json:
        print(json.dumps({"results": results}, sort_keys=True))
    else:
        for entry in results:
            print(json.dumps(entry, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atquery",
        description="Quantitative queries on static attack trees.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="machine-readable JSON output")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="enumeration cap in basic steps (default %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="parse and structurally validate a tree")
    p.add_argument("tree")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("attacks", parents=[common],
                       help="enumerate satisfying attacks of a layer-1 formula")
    p.add_argument("tree")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--minimal", action="store_true",
                   help="restrict to minimal attacks")
    p.set_defaults(func=_cmd_attacks)

    p = sub.add_parser("check", parents=[common],
                       help="check a layer-1/2 formula against one attack")
    p.add_argument("tree")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("-a", "--attack", required=True,
                   help="comma-separated basic steps (empty for the empty attack)")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("metric", parents=[common],
                       help="compute the value of a layer-3 formula")
    p.add_argument("tree")
    p.add_argument("-f", "--formula", required=True)
    p.set_defaults(func=_cmd_metric)

    p = sub.add_parser("quantify", parents=[common],
                       help="decide a layer-4 formula, with witness")
    p.add_argument("tree")
    p.add_argument("-f", "--formula", required=True)
    p.set_defaults(func=_cmd_quantify)

    p = sub.add_parser("oracle-compare", parents=[common],
                       help="cross-validate the diagram engine against the "
                            "brute-force oracle")
    p.add_argument("tree")
    p.add_argument("-f", "--formula", required=True)
    p.add_argument("--seed", type=int, default=0,
                   help="sampling seed when the tree is too large to enumerate")
    p.set_defaults(func=_cmd_oracle_compare)

    p = sub.add_parser("run", parents=[common],
                       help="run every query in a .atm query list")
    p.add_argument("tree")
    p.add_argument("queries")
    p.add_argument("-a", "--attack", default=None,
                   help="attack used for layer-2 queries (default: all basics)")
    p.set_defaults(func=_cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AtqueryError as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError):
            error["message"] = exc.message
            error["line"] = exc.line
            error["col"] = exc.col
        if getattr(args, "json", False):
            print(json.dumps({"error": error}, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
