"""Command-line front end.

Exit codes: 0 affirmative, 1 negative, 2 usage or input error, 3 a search
limit was reached before a verdict.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from itertools import chain
from pathlib import Path

from . import calculus, grammar, proofnet, prover
from .calculus import LOGICS, get_logic
from .core import (
    ParseError,
    PolarityError,
    balanced,
    enumerate_sequents,
    format_formula,
    format_sequent,
    parse_sequent,
)
from .prover import PROVABLE, RESOURCE_EXCEEDED, SearchLimits

OK, NO, USAGE, LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_limits(text: str | None) -> SearchLimits:
    """``visited=N,time=S,connectives=K``; omitted keys keep their defaults."""
    if not text:
        return SearchLimits()
    keys = {"visited": "max_visited_sequents", "time": "time_budget", "connectives": "max_connectives"}
    values = {}
    for part in text.split(","):
        k, sep, v = part.partition("=")
        k = k.strip()
        if not sep or k not in keys:
            raise UsageError(f"bad --limits item {part!r}; use visited=N,time=S,connectives=K")
        try:
            values[keys[k]] = float(v) if k == "time" else int(v)
        except ValueError:
            raise UsageError(f"bad number in --limits item {part!r}") from None
    try:
        return SearchLimits(**values)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _logic(name: str):
    try:
        return get_logic(name)
    except (KeyError, ValueError):
        raise UsageError(f"unknown logic {name!r}; choose from {', '.join(LOGICS)}") from None


def _sequent(text: str | None):
    if not text:
        raise UsageError("--sequent is required")
    try:
        return parse_sequent(text)
    except (ParseError, PolarityError) as e:
        raise UsageError(f"bad sequent: {e}") from None


def bundled_lexicons() -> list[str]:
    return sorted(p.name for p in resources.files("hlg").joinpath("data").iterdir() if p.name.endswith(".lex"))


def _lexicon(path: str | None, goal: str | None):
    if not path:
        raise UsageError("--lexicon is required")
    p = Path(path)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    elif path in bundled_lexicons():
        text = resources.files("hlg").joinpath("data").joinpath(path).read_text(encoding="utf-8")
    else:
        raise UsageError(f"no lexicon at {path!r} (bundled: {', '.join(bundled_lexicons())})")
    try:
        lex = grammar.parse_lexicon(text)
        return lex.with_goal(goal) if goal else lex
    except ValueError as e:
        raise UsageError(f"bad lexicon: {e}") from None


def _emit(out, args, text: str, record: dict) -> None:
    if args.format == "structured":
        out.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _sentence_text(words) -> str:
    return " ".join(words)


# -- commands ------------------------------------------------------------------


def cmd_prove(args, out) -> int:
    logic = _logic(args.logic[0] if args.logic else "hlg")
    goal = _sequent(args.sequent)
    limits = parse_limits(args.limits)
    if args.cut:
        r = prover.prove_with_analytic_cut(goal, logic, limits)
    else:
        r = prover.prove(goal, logic, limits)
    want_tree = r.provable and args.derivation == "full"
    lines = [f"{r.status}: {format_sequent(goal)} in {logic.name}" + (f" ({r.limit})" if r.limit else "")]
    if want_tree:
        lines.append(prover.to_text(r.derivation))
    record = {
        "command": "prove",
        "logic": logic.name,
        "sequent": format_sequent(goal),
        "status": r.status,
        "limit": r.limit,
        "derivation": prover.to_dict(r.derivation) if want_tree else None,
    }
    _emit(out, args, "\n".join(lines), record)
    return {PROVABLE: OK, RESOURCE_EXCEEDED: LIMIT}.get(r.status, NO)


def cmd_parse(args, out) -> int:
    logic = _logic(args.logic[0] if args.logic else "hlg")
    lex = _lexicon(args.lexicon, args.goal)
    words = [w for chunk in args.words for w in chunk.split()]
    if not words:
        raise UsageError("give the sentence to parse")
    missing = lex.unknown(words)
    if missing:
        _emit(out, args, f"rejected: no lexical entry for {', '.join(missing)}",
              {"command": "parse", "status": "rejected", "unknown": missing})
        return NO
    limits = parse_limits(args.limits)
    try:
        w = grammar.recognize(lex, words, logic, limits)
    except grammar.Undecided as e:
        _emit(out, args, f"undecided: {_sentence_text(words)} ({len(e.cells)} cell(s) hit a limit)",
              {"command": "parse", "status": "undecided", "cells": len(e.cells)})
        return LIMIT
    if w is None:
        _emit(out, args, f"rejected: {_sentence_text(words)} in {logic.name}",
              {"command": "parse", "status": "rejected", "logic": logic.name, "sentence": words})
        return NO
    lines = [
        f"accepted: {_sentence_text(words)} in {logic.name}",
        "types: " + "; ".join(f"{x} := {format_formula(t)}" for x, t in zip(words, w.assignment)),
        "bracketing: " + grammar.format_bracketing(w.bracketing, words),
    ]
    if args.derivation == "full":
        lines.append(prover.to_text(w.derivation))
    record = {
        "command": "parse",
        "status": "accepted",
        "logic": logic.name,
        "sentence": words,
        "assignment": [format_formula(t) for t in w.assignment],
        "bracketing": grammar.format_bracketing(w.bracketing, words),
        "derivation": prover.to_dict(w.derivation) if args.derivation == "full" else None,
    }
    _emit(out, args, "\n".join(lines), record)
    return OK


def _sorted_strings(strings):
    return sorted(strings, key=lambda s: (len(s), s))


def cmd_sample(args, out) -> int:
    logic = _logic(args.logic[0] if args.logic else "hlg")
    lex = _lexicon(args.lexicon, args.goal)
    s = grammar.sample_language(lex, logic, args.max_len, parse_limits(args.limits))
    lines = [f"{len(s.recognized)} sentence(s) up to length {args.max_len} in {logic.name}"]
    lines += [_sentence_text(x) for x in _sorted_strings(s.recognized)]
    if s.undecided:
        lines.append(f"{len(s.undecided)} undecided:")
        lines += ["? " + _sentence_text(x) for x in _sorted_strings(s.undecided)]
    record = {
        "command": "sample",
        "logic": logic.name,
        "max_len": args.max_len,
        "recognized": [list(x) for x in _sorted_strings(s.recognized)],
        "undecided": [list(x) for x in _sorted_strings(s.undecided)],
    }
    _emit(out, args, "\n".join(lines), record)
    if s.undecided:
        return LIMIT
    return OK if s.recognized else NO


def cmd_compare(args, out) -> int:
    names = args.logic or []
    if len(names) != 2:
        raise UsageError("compare needs exactly two --logic options")
    a, b = _logic(names[0]), _logic(names[1])
    lex = _lexicon(args.lexicon, args.goal)
    c = grammar.compare_languages(lex, a, b, args.max_len, parse_limits(args.limits))
    text = f"{c.verdict}: {a.name} vs {b.name} up to length {args.max_len}"
    if c.divergent is not None:
        side = a.name if c.divergent in c.first.recognized else b.name
        text += f"\nfirst divergent: {_sentence_text(c.divergent)} (only in {side})"
    if c.undecided:
        text += f"\n{len(c.undecided)} undecided string(s)"
    record = {
        "command": "compare",
        "logics": [a.name, b.name],
        "max_len": args.max_len,
        "verdict": c.verdict,
        "divergent": list(c.divergent) if c.divergent else None,
        "sizes": [len(c.first.recognized), len(c.second.recognized)],
        "undecided": len(c.undecided),
    }
    _emit(out, args, text, record)
    return {"equal": OK, "divergent": NO}.get(c.verdict, LIMIT)


def cmd_net(args, out) -> int:
    logic = _logic(args.logic[0] if args.logic else "lg")
    goal = _sequent(args.sequent)
    r = prover.prove(goal, logic, parse_limits(args.limits))
    if r.status == RESOURCE_EXCEEDED:
        _emit(out, args, f"resource_exceeded ({r.limit})", {"command": "net", "status": r.status, "limit": r.limit})
        return LIMIT
    if not r.provable:
        _emit(out, args, f"unprovable: {format_sequent(goal)} in {logic.name}; no structure",
              {"command": "net", "status": r.status})
        return NO
    ps = proofnet.to_proof_structure(r.derivation)
    v = proofnet.verdict(ps)
    links = ", ".join(f"{k}={n}" for k, n in sorted(v["links"].items()))
    text = (
        f"{'planar' if v['planar'] else 'non-planar'}: genus {v['genus']}, crossings {v['crossings']}, "
        f"{v['vertices']} vertices, links {links}"
    )
    if args.graph:
        text += "\n" + proofnet.to_dot(ps)
    record = {"command": "net", "logic": logic.name, "sequent": format_sequent(goal), **v}
    if args.graph:
        record["dot"] = proofnet.to_dot(ps)
    _emit(out, args, text, record)
    return OK if v["planar"] else NO


def cmd_enumerate(args, out) -> int:
    names = args.logic or ["lg", "hlg"]
    logics = [_logic(n) for n in names]
    atoms = [a.strip() for a in args.atoms.split(",") if a.strip()]
    rows = enumerate_sequents(atoms, args.max_conn, args.max_leaves)
    try:
        first = next(rows)  # the generator validates the atoms up front
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = chain([first], rows)
    limits = parse_limits(args.limits)
    provers = [prover.Prover(L, limits) for L in logics]
    marks = {PROVABLE: "+", prover.UNPROVABLE: "-", RESOURCE_EXCEEDED: "?"}
    if args.format != "structured":
        out.write("\t".join(L.name for L in logics) + "\tsequent\n")
    exceeded = False
    for q in rows:
        if balanced(q):
            verdicts = [p.prove(q).status for p in provers]
        else:
            verdicts = [prover.UNPROVABLE] * len(provers)  # count invariant
        exceeded |= RESOURCE_EXCEEDED in verdicts
        if args.provable_only and PROVABLE not in verdicts:
            continue
        if args.format == "structured":
            rec = {"sequent": format_sequent(q), "verdicts": dict(zip((L.name for L in logics), verdicts))}
            out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        else:
            out.write("\t".join(marks[v] for v in verdicts) + "\t" + format_sequent(q) + "\n")
    return LIMIT if exceeded else OK


def cmd_rules(args, out) -> int:
    table = calculus.rule_table()
    if args.format == "structured":
        out.write(json.dumps(table, ensure_ascii=False, sort_keys=True) + "\n")
        return OK
    for rec in table:
        prem = " ; ".join(rec["premises"]) if rec["premises"] else "-"
        arrow = "<=>" if rec["bidirectional"] else "==>"
        out.write(f"{rec['name']}\t{prem} {arrow} {rec['conclusion']}\t[{','.join(rec['logics'])}]\n")
    return OK


COMMANDS = {
    "prove": cmd_prove,
    "parse": cmd_parse,
    "sample": cmd_sample,
    "compare": cmd_compare,
    "net": cmd_net,
    "enumerate": cmd_enumerate,
    "rules": cmd_rules,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hlg", description="Proof search, parsing and planarity for the Lambek-Grishin calculi.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, logic=True):
        if logic:
            p.add_argument("--logic", action="append", choices=sorted(LOGICS), help="logic (repeat for compare/enumerate)")
        p.add_argument("--limits", help="search limits, e.g. visited=100000,time=5")
        p.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("prove", help="decide a sequent")
    common(p)
    p.add_argument("--sequent", required=True)
    p.add_argument("--derivation", choices=("full", "none"), default="full")
    p.add_argument("--cut", action="store_true", help="also allow analytic cuts")

    p = sub.add_parser("parse", help="recognize a sentence")
    common(p)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--goal")
    p.add_argument("--derivation", choices=("full", "none"), default="full")
    p.add_argument("words", nargs="+")

    for name, helptext in (("sample", "list recognized strings"), ("compare", "compare two sampled languages")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--lexicon", required=True)
        p.add_argument("--goal")
        p.add_argument("--max-len", type=int, default=5)

    p = sub.add_parser("net", help="proof structure and planarity of a found derivation")
    common(p)
    p.add_argument("--sequent", required=True)
    p.add_argument("--graph", action="store_true", help="append the structure as Graphviz DOT")

    p = sub.add_parser("enumerate", help="verdict table over generated sequents")
    common(p)
    p.add_argument("--atoms", default="a,b")
    p.add_argument("--max-conn", type=int, default=2)
    p.add_argument("--max-leaves", type=int)
    p.add_argument("--provable-only", action="store_true")

    p = sub.add_parser("rules", help="dump the rule table")
    common(p, logic=False)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        if getattr(args, "max_len", 1) < 1 or getattr(args, "max_conn", 0) < 0:
            raise UsageError("lengths and bounds must be positive")
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        sys.stderr.write(f"hlg {args.command}: {e}\n")
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
