"""Command-line front end.

Exit codes: 0 true / plan found / suite clean, 1 false / no plan /
counterexample, 2 usage error, 3 parse or model error, 4 starred formula
given to the contextual engine.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import axioms, ets, planner, qbf
from .mc_contextual import StarNotSupported, mc
from .model import ModelError, UncertaintyMap, fixtures, load_model, model_to_dict
from .semantics_direct import sat
from .syntax import ParseError, is_star_free, parse_formula

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_INPUT, EXIT_STAR = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_model(spec: str) -> UncertaintyMap:
    if spec.startswith("fixture:"):
        name = spec.split(":", 1)[1]
        table = fixtures()
        if name not in table:
            raise ModelError(f"unknown fixture {name!r}; have {', '.join(sorted(table))}")
        return table[name]
    try:
        text = Path(spec).read_text()
    except OSError as e:
        raise ModelError(f"cannot read {spec}: {e.strerror}") from None
    return load_model(text)


def _actions(text: str | None, um: UncertaintyMap) -> list[str]:
    if not text:
        return um.model.actions
    return [a for a in text.replace(",", " ").split() if a]


def _emit(out, args, value, human: str):
    if args.machine:
        out.write(f"result={value}\n")
    else:
        out.write(human + "\n")


def _check(args, out) -> int:
    um = _read_model(args.model)
    f = parse_formula(args.formula)
    if args.point is None and bin(um.uncertainty).count("1") > 1:
        raise UsageError("--point is required when the uncertainty set has more than one state")
    point = um.point(args.point)
    engine = args.engine or ("contextual" if is_star_free(f) else "ets")
    if engine == "direct":
        result = sat(um, point, f)
    elif engine == "contextual":
        result = mc(um, point, (), f)
    else:
        result = ets.check_full(um, point, f)
    if args.dump_ets:
        e = ets.build_bullet(um.model, um.uncertainty)
        Path(args.dump_ets).write_text(ets.dump_ets(e) + "\n")
    _emit(out, args, "true" if result else "false", "TRUE" if result else "FALSE")
    return EXIT_TRUE if result else EXIT_FALSE


def _problem(args) -> planner.PlanningProblem:
    um = _read_model(args.model)
    goal = parse_formula(args.goal)
    return planner.PlanningProblem(um, goal, frozenset(_actions(args.actions, um)))


def _plan(args, out) -> int:
    problem = _problem(args)
    plan = planner.find_plan(problem)
    if plan is None:
        _emit(out, args, "false", "NO PLAN")
        return EXIT_FALSE
    _emit(out, args, "plan:" + ".".join(plan), " ".join(plan) if plan else "(empty plan)")
    return EXIT_TRUE


def _verify(args, out) -> int:
    problem = _problem(args)
    steps = _actions(args.plan, problem.map) if args.plan.strip() else []
    try:
        ok = planner.verify_plan(problem, steps)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit(out, args, "true" if ok else "false", "TRUE" if ok else "FALSE")
    return EXIT_TRUE if ok else EXIT_FALSE


def _qbf(args, out) -> int:
    text = sys.stdin.read() if args.file == "-" else Path(args.file).read_text()
    try:
        alpha = qbf.parse_qdimacs(text)
    except ValueError as e:
        raise ModelError(str(e)) from None
    truth = qbf.eval_qbf(alpha)
    reduced = qbf.reduction_check(alpha)
    if args.machine:
        out.write(f"result={'true' if truth else 'false'} reduction={'true' if reduced else 'false'}\n")
    else:
        out.write(f"oracle: {'TRUE' if truth else 'FALSE'}\n")
        out.write(f"reduction: {'TRUE' if reduced else 'FALSE'}\n")
    return EXIT_TRUE if truth == reduced else EXIT_FALSE


def _axioms(args, out) -> int:
    names = None
    if args.schema:
        known = set(axioms.SELA_SCHEMAS) | set(axioms.DROPPED_SCHEMAS) | {"NM_a_flipped"}
        bad = [s for s in args.schema if s not in known]
        if bad:
            raise UsageError(f"unknown schema {bad[0]!r}; choose from {', '.join(sorted(known))}")
        names = args.schema
    report = axioms.soundness_suite(args.seed, args.trials, names, validities=names is None)
    for line in report.lines():
        out.write(line + "\n")
    for name, cases in report.counterexamples.items():
        _, um, s = cases[0]
        out.write(f"counterexample for {name} at {um.model.states[s]}:\n")
        out.write(json.dumps(model_to_dict(um)) + "\n")
    if args.machine:
        out.write(f"result={'true' if report.ok else 'false'}\n")
    return EXIT_TRUE if report.ok else EXIT_FALSE


def _dump_ets(args, out) -> int:
    um = _read_model(args.model)
    if args.actions:
        e = ets.build_circ(um.model, um.uncertainty, _actions(args.actions, um))
    else:
        e = ets.build_bullet(um.model, um.uncertainty)
    out.write(ets.dump_ets(e) + "\n")
    return EXIT_TRUE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epdl", description="Epistemic PDL model checking and conformant planning.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, goal=False):
        p.add_argument("--model", required=True, help="model file, or fixture:NAME")
        p.add_argument("--machine", action="store_true", help="print one result=... line")
        if goal:
            p.add_argument("--goal", required=True)
            p.add_argument("--actions", help="comma-separated action set (default: all)")

    p = sub.add_parser("check", help="model-check a formula")
    common(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--point")
    p.add_argument("--engine", choices=["direct", "contextual", "ets"])
    p.add_argument("--dump-ets", metavar="PATH", help="also write the bullet ETS to PATH")
    p.set_defaults(run=_check)

    p = sub.add_parser("plan", help="find a shortest conformant plan")
    common(p, goal=True)
    p.set_defaults(run=_plan)

    p = sub.add_parser("verify", help="verify a given plan")
    common(p, goal=True)
    p.add_argument("--plan", required=True, help="actions separated by spaces or commas")
    p.set_defaults(run=_verify)

    p = sub.add_parser("qbf", help="cross-check a QBF against its model-checking reduction")
    p.add_argument("file", help="QDIMACS-like clause file, or - for stdin")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(run=_qbf)

    p = sub.add_parser("axioms", help="random soundness check of the axiom schemata")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--schema", action="append", help="restrict to a schema (repeatable)")
    p.add_argument("--machine", action="store_true")
    p.set_defaults(run=_axioms)

    p = sub.add_parser("dump-ets", help="print the reachable ETS of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--actions", help="build the guarded planning variant over these actions")
    p.set_defaults(run=_dump_ets)
    return parser


def run(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "run", None):
            raise UsageError("a subcommand is required")
        return args.run(args, out)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except StarNotSupported as e:
        err.write(f"error: {e}\n")
        return EXIT_STAR
    except (ParseError, ModelError) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
