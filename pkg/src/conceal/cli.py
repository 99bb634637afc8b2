"""``conceal`` command line front end.

Exit codes: 0 the analysis ran (the verdict is in the payload), 1 usage
error, 2 invalid input, 3 refused by the size guard of the exponential
constructions.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .automata import load_system, require_valid, validate
from .defense import (
    CONSTRAINED,
    EXACT,
    IDENTITY,
    UNCONSTRAINED,
    Strategy,
    build_defensive_verifier,
    check_necessary,
    check_sufficient,
    e_verifier_of,
    extract_strategy,
    load_defense,
    reduce_e_verifier,
    simulate_defense,
)
from .diagnoser import Classification, build_diagnoser, classify, is_concealable
from .dot import export_dot
from .errors import (
    ConcealError,
    HorizonTooLarge,
    InvalidSystem,
    NoFeasibleAction,
    NotEnforceable,
    SizeLimitExceeded,
)
from .exact import e_diagnoser_of, extract_exact_strategy, reduce_e_diagnoser
from .oracle import brute_concealability, brute_defense_game
from .verifier import check_unconstrained, classify_cycles, verifier_of

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SIZE = 0, 1, 2, 3
DEFAULT_SIZE_LIMIT = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _emit_json(payload, out):
    out.write(json.dumps(payload, indent=2) + "\n")


def _size_limit(args):
    if args.size_limit is not None:
        return args.size_limit
    raw = os.environ.get("CONCEAL_SIZE_LIMIT")
    if raw is None:
        return DEFAULT_SIZE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise UsageError("CONCEAL_SIZE_LIMIT must be an integer, got %r" % raw)


def _guard(system, args):
    limit = _size_limit(args)
    if len(system.states) > limit:
        raise SizeLimitExceeded(
            "system has %d states, above the limit of %d for the diagnoser-based check"
            % (len(system.states), limit)
        )


def _load(args, need_defense=False):
    system = load_system(args.system)
    spec = None
    if getattr(args, "defense", None):
        spec = load_defense(args.defense).check(system)
    elif need_defense:
        raise UsageError("a defense file is required here")
    return system, spec


def _graph_payload(states, initial, edges):
    return {
        "initial": str(initial),
        "states": [{"name": str(x), "classification": str(classify(x))} for x in states],
        "transitions": [{"from": str(a), "event": e, "to": str(b)} for a, e, b in edges],
    }


# -- subcommands --------------------------------------------------------------


def cmd_validate(args, out):
    _emit_json(validate(load_system(args.system)).to_dict(), out)


def cmd_diagnoser(args, out):
    diag = build_diagnoser(load_system(args.system))
    edges = [(q, e, r) for q in diag.states for e, r in diag.out(q)]
    _emit_json(_graph_payload(diag.states, diag.initial, edges), out)


def cmd_verifier(args, out):
    ver = verifier_of(load_system(args.system))
    edges = [(v, e, w) for v in ver.states for e, w in ver.out(v)]
    _emit_json(_graph_payload(ver.states, ver.initial, edges), out)


def cmd_check(args, out):
    _emit_json(is_concealable(load_system(args.system)).to_dict(), out)


def cmd_diagnosable(args, out):
    system = require_valid(load_system(args.system))
    cycles = classify_cycles(verifier_of(system, check=False))[Classification.UNCERTAIN]
    _emit_json(
        {
            "diagnosable": not cycles,
            "uncertain_cycles": [[str(v) for v in c] for c in cycles],
        },
        out,
    )


def cmd_enforce(args, out):
    if args.mode == "unconstrained":
        system = load_system(args.system)
        _emit_json(check_unconstrained(system).to_dict(), out)
        return
    system, spec = _load(args, need_defense=True)
    require_valid(system)
    if args.mode == "exact":
        _guard(system, args)
        reduced = reduce_e_diagnoser(e_diagnoser_of(system, spec))
        payload = {
            "enforceable": not reduced.empty,
            "reduced_states": [str(x) for x in reduced.states],
            "pruned": [str(x) for x in reduced.pruned],
        }
        if not reduced.empty:
            payload["strategy"] = extract_exact_strategy(reduced).to_dict()
        _emit_json(payload, out)
        return
    ev = e_verifier_of(system, spec)
    if args.mode == "necessary":
        _emit_json(check_necessary(ev).to_dict(), out)
        return
    reduced = reduce_e_verifier(ev)
    verdict = check_sufficient(reduced)
    payload = verdict.to_dict()
    if verdict.enforceable:
        payload["strategy"] = extract_strategy(reduced).to_dict()
    _emit_json(payload, out)


def _read_trace(path):
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def cmd_defend(args, out):
    system, spec = _load(args)
    require_valid(system)
    trace = _read_trace(args.trace)
    mode = args.strategy or (CONSTRAINED if spec is not None else UNCONSTRAINED)
    payload = {"strategy": mode, "trace": trace}
    try:
        if mode == IDENTITY:
            strategy = Strategy.identity()
        elif mode == UNCONSTRAINED:
            strategy = extract_strategy(check_unconstrained(system).safe_lasso)
        elif spec is None:
            raise UsageError("--strategy %s needs a defense file" % mode)
        elif mode == EXACT:
            _guard(system, args)
            strategy = extract_exact_strategy(reduce_e_diagnoser(e_diagnoser_of(system, spec)))
        else:
            strategy = extract_strategy(reduce_e_verifier(e_verifier_of(system, spec)))
        report = simulate_defense(system, strategy, trace)
    except NotEnforceable as exc:
        payload.update({"defended": False, "reason": str(exc)})
    except NoFeasibleAction as exc:
        payload.update({"defended": False, "reason": str(exc)})
    except ValueError as exc:
        raise InvalidSystem(str(exc))
    else:
        payload["defended"] = True
        payload.update(report.to_dict())
    _emit_json(payload, out)


def cmd_oracle(args, out):
    system, spec = _load(args)
    payload = brute_concealability(system, args.horizon).to_dict()
    if spec is not None:
        payload["defense_game"] = str(brute_defense_game(system, spec, args.horizon))
    _emit_json(payload, out)


def cmd_export(args, out):
    what = args.what
    system, spec = _load(args, need_defense=what not in ("diagnoser", "verifier"))
    if what == "diagnoser":
        construction = build_diagnoser(system)
    elif what == "verifier":
        construction = verifier_of(system)
    elif what == "dverifier":
        construction = build_defensive_verifier(verifier_of(system), spec)
    elif what == "everifier":
        construction = e_verifier_of(system, spec)
    elif what == "reduced":
        construction = reduce_e_verifier(e_verifier_of(system, spec))
    else:
        _guard(system, args)
        construction = reduce_e_diagnoser(e_diagnoser_of(system, spec))
    text = export_dot(construction, show_infeasible=args.show_infeasible, show_pruned=args.show_pruned)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def build_parser():
    parser = _Parser(prog="conceal", description="Secret-event concealment analyses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, defense=None):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("system", help="system JSON file")
        if defense == "optional":
            p.add_argument("defense", nargs="?", help="defense JSON file")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the modelling assumptions")
    add("diagnoser", cmd_diagnoser, "print the diagnoser as JSON")
    add("verifier", cmd_verifier, "print the verifier as JSON")
    add("check", cmd_check, "concealability verdict with secret-cycle witnesses")
    add("diagnosable", cmd_diagnosable, "diagnosability of the secret event")

    p = add("enforce", cmd_enforce, "enforceability checks", defense="optional")
    p.add_argument("--mode", required=True, choices=["unconstrained", "necessary", "sufficient", "exact"])
    p.add_argument("--size-limit", type=int, default=None)

    p = add("defend", cmd_defend, "replay a trace through a defense strategy", defense="optional")
    p.add_argument("--trace", required=True, help="file with one event per line")
    p.add_argument("--strategy", choices=[UNCONSTRAINED, CONSTRAINED, EXACT, IDENTITY], default=None)
    p.add_argument("--size-limit", type=int, default=None)

    p = add("oracle", cmd_oracle, "brute-force cross-checks", defense="optional")
    p.add_argument("--horizon", type=int, default=8)

    p = add("export", cmd_export, "DOT rendering of a construction", defense="optional")
    p.add_argument(
        "--what",
        required=True,
        choices=["diagnoser", "verifier", "dverifier", "everifier", "reduced", "ediagnoser"],
    )
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--show-infeasible", action="store_true")
    p.add_argument("--show-pruned", action="store_true")
    p.add_argument("--size-limit", type=int, default=None)
    return parser


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except UsageError as exc:
        err.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    except HorizonTooLarge as exc:
        err.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    except SizeLimitExceeded as exc:
        err.write("refused: %s\n" % exc)
        return EXIT_SIZE
    except InvalidSystem as exc:
        err.write("invalid input: %s\n" % exc)
        for finding in exc.findings:
            err.write("  - %s\n" % finding)
        return EXIT_INPUT
    except (ConcealError, OSError, ValueError) as exc:
        err.write("invalid input: %s\n" % exc)
        return EXIT_INPUT
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
