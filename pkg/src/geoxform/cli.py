"""Command-line entry point.

Exit codes: 0 success, 1 property failure, 2 search budget exhausted,
3 annotation integrity error, 4 invalid input.  Anything meant for other
programs goes to a file or one line of stdout; summaries go to stderr.
"""

import argparse
import json
import os
import sys

from . import synlang
from .fiber import ROT13, GeneratorSet
from .rewrite import (RULES, AnnotatedFile, IntegrityError, RewriteError, apply_rewrite, invert_rewrite,
                      pdf_regions)
from .search import BudgetExceeded, GoalSpec, MoveConfig, find_transform, rot13_goal
from .space import GENERAL_COSTS, INSDEL_COSTS, InvalidInput, edit_distance
from .suites import SUITES, run_suite
from .treedist import LabeledTree, ast_distance, parse_tree, tree_edit_distance

EXIT_OK, EXIT_PROPERTY, EXIT_BUDGET, EXIT_INTEGRITY, EXIT_INPUT = 0, 1, 2, 3, 4

PROFILES = {"insdel": INSDEL_COSTS, "general": GENERAL_COSTS}


class CliError(Exception):
    def __init__(self, message, code=EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _say(*args):
    print(*args, file=sys.stderr)


def _read_arg(value) -> bytes:
    """An existing file's bytes, otherwise the argument itself."""
    if os.path.isfile(value):
        with open(value, "rb") as fh:
            return fh.read()
    return os.fsencode(value)


def _read_file(path) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}")


def _write(path, data):
    if isinstance(data, str):
        data = data.encode()
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _emit_line(obj):
    print(json.dumps(obj, separators=(",", ":")))


# --- transform -------------------------------------------------------------

def _move_config(args):
    costs = PROFILES[args.profile]
    if args.moves == "insdel":
        costs = INSDEL_COSTS
    elif args.moves == "insdelsub":
        costs = GENERAL_COSTS
    vertical = {"none": None, "unit": GeneratorSet(1), "shift31": GeneratorSet(31), "rot13": ROT13}[args.vertical]
    kw = {}
    if args.budget is not None:
        kw["max_expansions"] = args.budget
    if args.vertical == "rot13":
        kw["symbols"] = tuple(range(97, 123))
    return MoveConfig(costs=costs, vertical=vertical, vertical_step_cost=args.vertical_cost, **kw)


def cmd_transform(args):
    start = _read_arg(args.input)
    if os.path.isfile(args.input):
        start = start.rstrip(b"\r\n")
    if args.goal == "rot13":
        goal = rot13_goal()
    elif args.target is not None:
        goal = GoalSpec.word(_read_arg(args.target))
    else:
        raise CliError("transform needs --target or --goal")
    config = _move_config(args)
    try:
        script = find_transform(start, goal, config)
    except BudgetExceeded as e:
        if e.best is not None and args.output:
            _write(args.output, e.best.dumps())
        _say(f"budget exhausted after {e.expansions} expansions"
             + (f"; best-so-far cost {e.best.total_cost}" if e.best is not None else ""))
        _emit_line({"status": "budget", "best_cost": e.best.total_cost if e.best else None})
        return EXIT_BUDGET
    if args.output:
        _write(args.output, script.dumps())
    _say(f"total cost {script.total_cost}: {script.vertical_count} vertical, "
         f"{script.horizontal_count} horizontal")
    for step in script.steps:
        _say("  " + step.describe())
    _emit_line({"cost": script.total_cost, "vertical": script.vertical_count,
                "horizontal": script.horizontal_count})
    return EXIT_OK


# --- rewrite ---------------------------------------------------------------

def cmd_rewrite(args):
    data = _read_file(args.input)
    scanner = None if args.anywhere else pdf_regions
    if args.invert:
        if args.sidecar:
            af = AnnotatedFile.from_sidecar(data, _read_file(args.sidecar).decode())
        else:
            af = AnnotatedFile.from_bytes(data)
        out = invert_rewrite(af)
        _write(args.output, out)
        _say(f"inverted {len(af.annotations)} sites")
        return EXIT_OK
    if args.rule not in RULES:
        raise CliError(f"unknown rule {args.rule!r}; known: {', '.join(sorted(RULES))}")
    af = apply_rewrite(data, RULES[args.rule], scanner=scanner, inline=not args.sidecar)
    _write(args.output, af.content)
    if args.sidecar:
        _write(args.sidecar, af.sidecar_json())
    sites = sum(1 for a in af.annotations if a.rule_id == args.rule)
    _say(f"{sites} sites")
    return EXIT_OK


# --- lift / unparse --------------------------------------------------------

def cmd_lift(args):
    src = _read_file(args.input)
    cst = synlang.parse(src)
    if args.to == "cst":
        obj = cst
    else:
        obj = synlang.abstract(cst)
        if args.to == "cfg":
            obj = synlang.to_cfg(obj)
    fmt = args.format
    if fmt == "text":
        if args.to == "cst":
            out = synlang.unparse_cst(cst)
        elif args.to == "ast":
            out = str(obj) + "\n"
        else:
            out = "".join(f"{s} -{lab}-> {d}\n" if lab is not None else f"{s} -> {d}\n"
                          for s, d, lab in obj.edge_list())
    elif fmt == "dot":
        if args.to != "cfg":
            raise CliError("dot output is only available for --to cfg")
        out = obj.to_dot()
    else:
        text = synlang.dumps(obj)
        out = (text if args.output else json.dumps(json.loads(text), separators=(",", ":"))) + "\n"
    _write(args.output, out)
    if args.to == "cfg":
        _say(f"{len(obj.predicates())} predicate nodes, {len(obj.statements())} statement nodes")
    return EXIT_OK


def cmd_unparse(args):
    try:
        ast = synlang.loads(_read_file(args.input).decode())
    except (ValueError, KeyError) as e:
        raise CliError(f"not a serialized AST: {e}")
    if not isinstance(ast, synlang.AstNode):
        raise CliError("input holds a CST or CFG, not an AST")
    _write(args.output, synlang.unparse(ast))
    return EXIT_OK


# --- verify ----------------------------------------------------------------

def cmd_verify(args):
    results = run_suite(args.suite, seed=args.seed)
    for r in results:
        _say(r.line())
    ok = all(r.passed for r in results)
    report = {"passed": ok, "seed": args.seed,
              "results": [{"name": r.name, "cases": r.cases, "passed": r.passed,
                           "counterexample": r.counterexample} for r in results]}
    if args.output:
        _write(args.output, json.dumps(report, indent=2))
    _emit_line(report if not ok else {"passed": True, "seed": args.seed})
    return EXIT_OK if ok else EXIT_PROPERTY


# --- distance --------------------------------------------------------------

def _tree_arg(value) -> LabeledTree:
    raw = _read_arg(value)
    text = raw.decode("latin-1").strip()
    if text.startswith("{"):
        return LabeledTree.from_dict(json.loads(text))
    return parse_tree(raw)


def cmd_distance(args):
    if args.metric == "edit":
        d = edit_distance(_read_arg(args.a), _read_arg(args.b), PROFILES[args.profile])
    elif args.metric == "tree":
        try:
            d = tree_edit_distance(_tree_arg(args.a), _tree_arg(args.b))
        except (ValueError, KeyError) as e:
            raise CliError(f"invalid tree: {e}")
    else:
        a = synlang.abstract(synlang.parse(_read_arg(args.a)))
        b = synlang.abstract(synlang.parse(_read_arg(args.b)))
        d = ast_distance(a, b, keep_labels=args.keep_labels)
    print(d)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="geoxform", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="search a minimum-cost transformation script")
    t.add_argument("input", help="start word, or a file holding it")
    t.add_argument("--target", help="target word, or a file holding it")
    t.add_argument("--goal", choices=["rot13"], help="objective goal instead of a target")
    t.add_argument("--moves", choices=["insdel", "insdelsub"], help="horizontal move set (overrides profile)")
    t.add_argument("--vertical", choices=["none", "unit", "shift31", "rot13"], default="none")
    t.add_argument("--vertical-cost", type=int, default=1, help="cost of one vertical step")
    t.add_argument("--profile", choices=sorted(PROFILES), default="insdel")
    t.add_argument("--budget", type=int, help="maximum number of expanded states")
    t.add_argument("-o", "--output", help="write the script here")
    t.set_defaults(func=cmd_transform)

    r = sub.add_parser("rewrite", help="apply or invert an annotated rewrite")
    r.add_argument("input")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--rule", help="rule id, e.g. objend-endobj")
    g.add_argument("--invert", action="store_true")
    r.add_argument("--sidecar", help="keep annotations in this JSON file instead of inline")
    r.add_argument("--anywhere", action="store_true", help="do not protect comments/strings/streams")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_rewrite)

    lf = sub.add_parser("lift", help="parse a toy program into CST, AST or CFG")
    lf.add_argument("input")
    lf.add_argument("--to", choices=["cst", "ast", "cfg"], required=True)
    lf.add_argument("--format", choices=["json", "text", "dot"], default="json")
    lf.add_argument("-o", "--output")
    lf.set_defaults(func=cmd_lift)

    u = sub.add_parser("unparse", help="print a serialized AST as source")
    u.add_argument("input")
    u.add_argument("-o", "--output")
    u.set_defaults(func=cmd_unparse)

    v = sub.add_parser("verify", help="run randomized property suites")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("-o", "--output", help="write the full report here")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("distance", help="distance between two inputs")
    d.add_argument("a")
    d.add_argument("b")
    d.add_argument("--metric", choices=["edit", "tree", "ast"], default="edit")
    d.add_argument("--profile", choices=sorted(PROFILES), default="insdel")
    d.add_argument("--keep-labels", action="store_true", help="ast metric: keep S/b indices")
    d.set_defaults(func=cmd_distance)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        _say(f"error: {e}")
        return e.code
    except IntegrityError as e:
        _say(f"integrity error at offset {e.offset}: {e}")
        return EXIT_INTEGRITY
    except synlang.ParseError as e:
        _say(f"parse error: {e}")
        return EXIT_INPUT
    except (InvalidInput, RewriteError, synlang.NotStructured) as e:
        _say(f"error: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
