"""Command-line front end.

Exit codes: 0 proved/ok/holds, 1 refuted/rejected/fails, 2 inconclusive,
3 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .canonical import OracleUnknown, ValidityOracle, canonical_counter_model, saturate
from .closure import fl_set, ordered
from .cyclic import check_cyclic_proof
from .game import BudgetExceeded, NotPDL, Proof, decide
from .kernel import check_proof
from .kripke import (
    EnumerationBudgetExceeded, ModelFormatError, find_countermodel_bounded, read_model,
    sequent_holds_at, write_model,
)
from .prooffile import ProofFormatError, read_proof, write_proof
from .syntax import ParseError, Sequent, length, parse_formula, parse_sequent, render

OK, FAIL, INCONCLUSIVE, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        n = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _text(arg: str) -> str:
    """A file's contents when ``arg`` names a file, else ``arg`` itself."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _sequent(arg: str) -> Sequent:
    text = "\n".join(line for line in _text(arg).splitlines() if not line.lstrip().startswith("#"))
    return parse_sequent(text.strip())


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdlkit", description="Decide, check and model-check PDL sequents.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=_positive, default=10**7, help="game node budget")
    common.add_argument("--bound", type=_positive, default=3, help="model search bound")
    common.add_argument("--system", choices=["gtpdl", "cgtpdl", "cgpdl"], default="cgpdl")
    common.add_argument("--out", help="write the artifact to this path")
    common.add_argument("--format", choices=["text"], default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("decide", parents=[common], help="solve the game for a sequent")
    p.add_argument("sequent")
    p = sub.add_parser("check-proof", parents=[common], help="check a proof file")
    p.add_argument("proof")
    p = sub.add_parser("model-check", parents=[common], help="evaluate a sequent on a model file")
    p.add_argument("model")
    p.add_argument("sequent")
    p = sub.add_parser("closure", parents=[common], help="print the Fischer-Ladner closure")
    p.add_argument("formula")
    p = sub.add_parser("countermodel", parents=[common], help="bounded countermodel search")
    p.add_argument("sequent")
    p = sub.add_parser("canonical", parents=[common], help="saturate and build the canonical model")
    p.add_argument("sequent")
    p.add_argument("--max-fl", type=_positive, default=4, help="largest closure size accepted")
    return parser


def _decide(args) -> int:
    if args.system != "cgpdl":
        raise UsageError("decide runs the CGPDL game; use --system cgpdl")
    s = _sequent(args.sequent)
    try:
        result = decide(s, args.budget)
    except BudgetExceeded:
        print(f"INCONCLUSIVE(budget {args.budget})")
        return INCONCLUSIVE
    except NotPDL as exc:
        raise UsageError(str(exc)) from None
    if isinstance(result, Proof):
        text = write_proof(result.preproof)
        problems = check_cyclic_proof("CGPDL", read_proof(text))
        if problems or read_proof(text).tree.conclusion != s:
            raise AssertionError(f"emitted proof does not re-verify: {problems[:1]}")
        print("PROVED")
        _emit(text, args.out)
        return OK
    text = write_model(result.model, result.state)
    model, state = read_model(text)
    if sequent_holds_at(model, state, s):
        raise AssertionError("emitted model does not refute the sequent")
    print(f"REFUTED ({len(model.states)} states, at {state})")
    _emit(text, args.out)
    return FAIL


def _check_proof(args) -> int:
    p = read_proof(_text(args.proof))
    system = args.system.upper()
    if system == "GTPDL":
        problems = check_proof(system, p.tree)
        if p.companions:
            problems = [*problems, "GTPDL proofs have no companions"]
    else:
        problems = check_cyclic_proof(system, p)
    if problems:
        print(f"REJECTED: {problems[0]}")
        return FAIL
    print(f"OK ({system}, conclusion {p.tree.conclusion})")
    return OK


def _model_check(args) -> int:
    model, designated = read_model(_text(args.model))
    s = _sequent(args.sequent)
    states = [designated] if designated is not None else list(model.states)
    for w in states:
        if not sequent_holds_at(model, w, s):
            print(f"FAILS at {w}")
            return FAIL
    where = designated if designated is not None else f"all {len(states)} states"
    print(f"HOLDS at {where}")
    return OK


def _closure(args) -> int:
    text = _text(args.formula).strip()
    if "|-" in text:
        s = parse_sequent(text)
        formulas, size = s.formulas, sum(length(f) for f in s.formulas)
    else:
        f = parse_formula(text)
        formulas, size = [f], length(f)
    closure = fl_set(formulas)
    print(f"|FL| = {len(closure)}, length = {size}")
    for g in ordered(closure):
        print(render(g))
    return OK


def _countermodel(args) -> int:
    s = _sequent(args.sequent)
    try:
        found = find_countermodel_bounded(s, args.bound)
    except EnumerationBudgetExceeded as exc:
        print(f"INCONCLUSIVE({exc})")
        return INCONCLUSIVE
    if found is None:
        exact = args.bound >= 2 ** len(fl_set(s.formulas))
        print(f"NONE up to {args.bound} states" + ("" if exact else " (not conclusive)"))
        return OK if exact else INCONCLUSIVE
    model, state = found
    print(f"FOUND ({len(model.states)} states, at {state})")
    _emit(write_model(model, state), args.out)
    return FAIL


def _canonical(args) -> int:
    s = _sequent(args.sequent)
    size = len(fl_set(s.formulas))
    if size > args.max_fl:
        raise UsageError(f"|FL| = {size} exceeds --max-fl {args.max_fl}")
    oracle = ValidityOracle(args.bound)
    label = "heuristic" if oracle.heuristic_for(s) else "exact"
    try:
        if not oracle.invalid(s):
            print(f"VALID ({label}, bound {args.bound})")
            return OK if label == "exact" else INCONCLUSIVE
        sat = saturate(s, oracle)
        model, state = canonical_counter_model(sat, oracle)
    except OracleUnknown as exc:
        print(f"INCONCLUSIVE(oracle: {exc})")
        return INCONCLUSIVE
    print(f"SATURATED {sat.sequent}")
    print(f"CANONICAL ({label}, {len(model.states)} states, at {state})")
    _emit(write_model(model, state), args.out)
    return FAIL


_COMMANDS = {
    "decide": _decide, "check-proof": _check_proof, "model-check": _model_check,
    "closure": _closure, "countermodel": _countermodel, "canonical": _canonical,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # proof trees are built and printed recursively
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ProofFormatError, ModelFormatError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
