"""Command-line front end: check | fuzz | oracle | derive | snf.

JSON in, JSON out.  Exit codes: 0 Primitive, 1 NotPrimitive, 2 Unknown,
3 unsupported configuration, 4 input error.  All randomness flows from a
single 64-bit seed (flag, else the PRIMUS_SEED environment variable,
else 0) through Python's Mersenne Twister, so failure reproducers replay
anywhere.  Budgets may be set in a key=value config file and overridden
by flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import abelian, fuzz, laurent, nilpotent, solvable, stallings, wreath
from .groupring import fox_derivative, format_ring_element
from .laurent import UnsupportedConfigurationError, format_laurent, project_to_quotient
from .verdict import Status
from .words import (PrimitivityProblem, VarietySpec, WordSyntaxError,
                    change_rank, format_word, parse_word)

EXIT_PRIMITIVE = 0
EXIT_NOT_PRIMITIVE = 1
EXIT_UNKNOWN = 2
EXIT_UNSUPPORTED = 3
EXIT_INPUT_ERROR = 4

DEFAULT_BUDGETS = {
    "node_budget": stallings.DEFAULT_NODE_BUDGET,
    "degree_bound": 2,
    "max_steps": fuzz.DEFAULT_MAX_STEPS,
    "seed": 0,
}

CHECK_REQUEST_SCHEMA = {
    "type": "object",
    "required": ["rank", "set", "variety"],
    "properties": {
        "rank": {"type": "integer", "minimum": 2},
        "set": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "variety": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["Free", "Abelian", "Nilpotent", "AmAn", "Solvable"]},
                "n": {"type": "integer", "minimum": 0},
                "m": {"type": "integer", "minimum": 0},
                "c": {"type": "integer", "minimum": 1},
                "t": {"type": "integer", "minimum": 1},
            },
        },
        "l": {"type": ["integer", "null"], "minimum": 1},
        "budgets": {
            "type": "object",
            "properties": {
                "node_budget": {"type": "integer", "minimum": 1},
                "degree_bound": {"type": "integer", "minimum": 0},
                "max_steps": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer"},
            },
        },
    },
}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["status", "witness", "reason", "budget"],
    "properties": {
        "status": {"enum": ["Primitive", "NotPrimitive", "Unknown"]},
        "witness": {"type": ["object", "null"]},
        "reason": {"type": "string"},
        "budget": {"type": ["object", "null"]},
        "restricted": {"type": ["object", "null"]},
    },
}

FUZZ_REPORT_SCHEMA = {
    "type": "object",
    "required": ["variety", "rank", "l", "k", "trials", "passes", "unknowns",
                 "failures"],
    "properties": {
        "rank": {"type": "integer"},
        "l": {"type": "integer"},
        "k": {"type": "integer"},
        "trials": {"type": "integer"},
        "passes": {"type": "integer"},
        "unknowns": {"type": "integer"},
        "failures": {"type": "array"},
    },
}


class InputError(ValueError):
    pass


def _emit(data):
    sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")


def read_config(path):
    """TOML-style key = value lines; '#' starts a comment."""
    budgets = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError("%s:%d: expected key = value" % (path, lineno))
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in DEFAULT_BUDGETS:
                raise InputError("%s:%d: unknown key %r" % (path, lineno, key))
            try:
                budgets[key] = int(value.strip())
            except ValueError:
                raise InputError("%s:%d: %r is not an integer" % (path, lineno, value))
    return budgets


def resolve_budgets(args, request_budgets=None):
    budgets = dict(DEFAULT_BUDGETS)
    env_seed = os.environ.get("PRIMUS_SEED")
    if env_seed is not None:
        try:
            budgets["seed"] = int(env_seed)
        except ValueError:
            raise InputError("PRIMUS_SEED must be an integer")
    if getattr(args, "config", None):
        budgets.update(read_config(args.config))
    if request_budgets:
        for key, value in request_budgets.items():
            if key not in DEFAULT_BUDGETS:
                raise InputError("unknown budget key %r" % key)
            budgets[key] = int(value)
    for key in DEFAULT_BUDGETS:
        flag = getattr(args, key, None)
        if flag is not None:
            budgets[key] = flag
    return budgets


def _parse_request(raw):
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError("request is not valid JSON: %s" % exc)
    if not isinstance(data, dict):
        raise InputError("request must be a JSON object")
    for key in ("rank", "set", "variety"):
        if key not in data:
            raise InputError("request is missing %r" % key)
    try:
        rank = int(data["rank"])
        variety = VarietySpec.from_json(data["variety"])
        words = tuple(parse_word(text, rank) for text in data["set"])
        l = data.get("l")
        problem = PrimitivityProblem(rank=rank, words=words, variety=variety,
                                     l=None if l is None else int(l))
    except (WordSyntaxError, ValueError, KeyError, TypeError) as exc:
        raise InputError(str(exc))
    return problem, data.get("budgets") or {}


def decide(problem, budgets):
    """Dispatch to the per-variety decider; may raise
    UnsupportedConfigurationError."""
    variety = problem.variety
    words = list(problem.words)
    rank = problem.rank
    k = len(words)
    if variety.kind == "Free":
        return stallings.is_primitive_free(words, rank,
                                           node_budget=budgets["node_budget"])
    if variety.kind == "Abelian":
        return abelian.is_primitive_abelian(abelian.abelianize(words, rank),
                                            variety.n)
    if variety.kind == "Nilpotent":
        return nilpotent.is_primitive_nilpotent(words, rank, variety.c, variety.n)
    if variety.kind == "AmAn":
        return laurent.is_primitive_am_an(words, variety.m, variety.n,
                                          degree_bound=budgets["degree_bound"])
    if variety.kind == "Solvable":
        if variety.t == 1:
            return abelian.is_primitive_abelian(abelian.abelianize(words, rank), 0)
        if variety.t == 2:
            if k == rank:
                return solvable.is_basis_metabelian(words, rank)
            return solvable.is_primitive_metabelian_subset(
                words, rank, degree_bound=budgets["degree_bound"])
        raise UnsupportedConfigurationError(
            "no decision procedure for derived length %d; only witness "
            "verification is available" % variety.t)
    raise UnsupportedConfigurationError("unknown variety")


def cmd_check(args):
    if args.request:
        raw = args.request
    elif args.file:
        with open(args.file, "r", encoding="utf-8") as handle:
            raw = handle.read()
    else:
        raw = sys.stdin.read()
    problem, request_budgets = _parse_request(raw)
    budgets = resolve_budgets(args, request_budgets)
    result = decide(problem, budgets)
    if args.emit_dot:
        graph = stallings.build_subgroup_graph(list(problem.words), problem.rank)
        with open(args.emit_dot, "w", encoding="utf-8") as handle:
            handle.write(graph.to_dot() + "\n")
    payload = result.to_json()
    if problem.l is not None and problem.l >= 2:
        # re-decide the same set inside the rank-l subgroup it lives in
        restricted = PrimitivityProblem(
            rank=problem.l,
            words=tuple(change_rank(w, problem.l) for w in problem.words),
            variety=problem.variety)
        try:
            payload["restricted"] = decide(restricted, budgets).to_json()
        except UnsupportedConfigurationError as exc:
            payload["restricted"] = {"error": "unsupported", "detail": str(exc)}
    elif problem.l is not None:
        # a restriction index of 1 leaves a rank-1 group, outside the
        # problem type; the ambient verdict is still reported
        payload["restricted"] = None
    _emit(payload)
    return {Status.PRIMITIVE: EXIT_PRIMITIVE,
            Status.NOT_PRIMITIVE: EXIT_NOT_PRIMITIVE,
            Status.UNKNOWN: EXIT_UNKNOWN}[result.status]


def cmd_fuzz(args):
    try:
        variety = VarietySpec.from_json(json.loads(args.variety))
    except (json.JSONDecodeError, ValueError) as exc:
        raise InputError("bad variety: %s" % exc)
    budgets = resolve_budgets(args)
    try:
        report = fuzz.fuzz_restriction(variety, args.rank, args.l, args.k,
                                       args.trials, budgets["seed"], budgets)
    except ValueError as exc:
        raise UnsupportedConfigurationError(str(exc))
    _emit(report.to_json())
    if report.failures:
        for failure in report.failures:
            sys.stderr.write("RESTRICTION FAILURE (defect or discovery!): %s\n"
                             % json.dumps(failure, sort_keys=True))
        return EXIT_NOT_PRIMITIVE
    return EXIT_PRIMITIVE


def cmd_oracle(args):
    budgets = resolve_budgets(args)
    if args.kind == "free":
        tuples = stallings.enumerate_primitive_orbit(args.rank, args.k, args.cap)
        table = sorted([format_word(w) for w in t] for t in tuples)
        _emit({"kind": "free", "rank": args.rank, "k": args.k, "cap": args.cap,
               "primitive_tuples": table})
        return EXIT_PRIMITIVE
    model = wreath.WreathModel(args.m, args.n, args.rank)
    sets = []
    if args.sets:
        for text in args.sets:
            sets.append([s.strip() for s in text.split(";") if s.strip()])
    else:
        sets = [[format_word(w)] for w in _single_words(args.rank, args.max_len)]
    table = []
    for texts in sets:
        words = [parse_word(t, args.rank) for t in texts]
        answer, _completion = wreath.primitive_in_model(model, words)
        table.append({"set": texts, "primitive": answer})
    _emit({"kind": "aman", "m": args.m, "n": args.n, "rank": args.rank,
           "order": model.order, "table": table})
    return EXIT_PRIMITIVE


def _single_words(rank, max_len):
    from .words import enumerate_reduced_words

    return enumerate_reduced_words(rank, max_len, include_identity=False)


def cmd_derive(args):
    words = [parse_word(text, args.rank) for text in args.words]
    lines = []
    for i, w in enumerate(words, 1):
        row = [format_ring_element(fox_derivative(j, w))
               for j in range(1, args.rank + 1)]
        lines.append("J[%d] = %s" % (i, ", ".join(row)))
    if args.project:
        m, n = args.project
        for i, w in enumerate(words, 1):
            row = [format_laurent(project_to_quotient(fox_derivative(j, w), m, n))
                   for j in range(1, args.rank + 1)]
            lines.append("J0[%d] = %s  (m=%d, n=%d)" % (i, ", ".join(row), m, n))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_PRIMITIVE


def cmd_snf(args):
    try:
        rows = json.loads(args.matrix)
        matrix = abelian.ExponentMatrix(tuple(tuple(int(x) for x in row)
                                              for row in rows))
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise InputError("bad matrix: %s" % exc)
    _emit(abelian.smith_normal_form(matrix).to_json())
    return EXIT_PRIMITIVE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="primus",
        description="Exact primitivity tests in relatively free groups.")
    parser.add_argument("--config", help="key=value budget file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="decide a primitivity request (JSON)")
    p_check.add_argument("request", nargs="?", help="inline JSON request")
    p_check.add_argument("--file", help="read the JSON request from a file")
    p_check.add_argument("--emit-dot", dest="emit_dot", metavar="PATH",
                         help="write the folded subgroup graph as DOT")
    _budget_flags(p_check)

    p_fuzz = sub.add_parser("fuzz", help="fuzz the restriction property")
    p_fuzz.add_argument("--variety", required=True, help="variety JSON")
    p_fuzz.add_argument("--rank", type=int, required=True)
    p_fuzz.add_argument("--l", type=int, required=True)
    p_fuzz.add_argument("--k", type=int, required=True)
    p_fuzz.add_argument("--trials", type=int, default=100)
    _budget_flags(p_fuzz)

    p_oracle = sub.add_parser("oracle", help="emit a brute-force ground-truth table")
    p_oracle.add_argument("kind", choices=["free", "aman"])
    p_oracle.add_argument("--rank", type=int, required=True)
    p_oracle.add_argument("--k", type=int, default=1)
    p_oracle.add_argument("--cap", type=int, default=2)
    p_oracle.add_argument("--m", type=int, default=2)
    p_oracle.add_argument("--n", type=int, default=2)
    p_oracle.add_argument("--max-len", type=int, default=3)
    p_oracle.add_argument("--sets", nargs="*",
                          help="explicit sets, words separated by ';'")
    _budget_flags(p_oracle)

    p_derive = sub.add_parser("derive", help="print the Fox Jacobian of words")
    p_derive.add_argument("--rank", type=int, required=True)
    p_derive.add_argument("words", nargs="+")
    p_derive.add_argument("--project", type=int, nargs=2, metavar=("M", "N"),
                          help="also print the induced derivatives mod (m, n)")
    _budget_flags(p_derive)

    p_snf = sub.add_parser("snf", help="Smith normal form of a JSON matrix")
    p_snf.add_argument("matrix", help="JSON rows, e.g. [[2,0],[0,3]]")
    _budget_flags(p_snf)

    return parser


def _budget_flags(parser):
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--node-budget", dest="node_budget", type=int, default=None)
    parser.add_argument("--degree-bound", dest="degree_bound", type=int, default=None)
    parser.add_argument("--max-steps", dest="max_steps", type=int, default=None)
    parser.add_argument("--config", dest="config", default=None)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check": cmd_check,
        "fuzz": cmd_fuzz,
        "oracle": cmd_oracle,
        "derive": cmd_derive,
        "snf": cmd_snf,
    }
    try:
        return handlers[args.command](args)
    except UnsupportedConfigurationError as exc:
        sys.stderr.write(json.dumps({"error": "unsupported", "detail": str(exc)}) + "\n")
        return EXIT_UNSUPPORTED
    except (InputError, WordSyntaxError) as exc:
        sys.stderr.write(json.dumps({"error": "input", "detail": str(exc)}) + "\n")
        return EXIT_INPUT_ERROR
    except FileNotFoundError as exc:
        sys.stderr.write(json.dumps({"error": "input", "detail": str(exc)}) + "\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
