"""Acceptance suite: one PASS/FAIL line per criterion, printed in the run summary.

The sweeps are exhaustive at desk scale and take a few minutes in total.
"""

import time
from importlib import resources

import pytest

from conftest import ACCEPTANCE
from hlg.calculus import HLG, HLGDOT, LG, LOGICS, RuleInstance
from hlg.core import PURE, Leaf, Node, Sequent, balanced, enumerate_sequents, erase, format_sequent, parse_sequent
from hlg.grammar import compare_languages, parse_lexicon, recognize, sentence_sequent
from hlg.proofnet import planar_linking, structure_genus, to_proof_structure
from hlg.prover import (
    RESOURCE_EXCEEDED,
    UNLIMITED,
    Derivation,
    Prover,
    check_derivation,
    erase_derivation,
    prove_with_analytic_cut,
    to_text,
)

pytestmark = pytest.mark.slow

LIFT = parse_sequent("(s -< s) >- (np \\ s) |- np \\ s")


def report(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    print(ACCEPTANCE[-1])
    assert ok, detail


def bundled(name: str):
    return parse_lexicon(resources.files("hlg").joinpath("data").joinpath(name).read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def table3():
    return list(enumerate_sequents(["a", "b"], 3))


def test_criterion_1_cross_serial_sentences():
    cases = [("dutch.lex", "ik cecilia dn zag voeren"), ("dutch-merged.lex", "ik cecilia henk dn zag helpen voeren")]
    notes, ok = [], True
    for lex, sentence in cases:
        start = time.monotonic()
        lexicon = bundled(lex)
        w = recognize(lexicon, sentence.split(), HLG)
        took = time.monotonic() - start
        good = w is not None and took < 60 and check_derivation(
            w.derivation, HLG, sentence_sequent(w.assignment, w.bracketing, lexicon.goal))
        ok &= good
        notes.append(f"'{sentence}' {'accepted' if w else 'rejected'} in {took:.2f}s")
    report(1, ok, "; ".join(notes))


def test_criterion_2_lifted_verb():
    lg = Prover(LG, UNLIMITED).prove(LIFT)
    hlg = Prover(HLG, UNLIMITED).prove(LIFT)
    dot = Prover(HLGDOT, UNLIMITED).prove(LIFT)
    g = structure_genus(to_proof_structure(lg.derivation)) if lg.provable else None
    ok = lg.provable and hlg.status == dot.status == "unprovable" and g is not None and g >= 1
    report(2, ok, f"LG {lg.status}, HLG {hlg.status}, HLG• {dot.status}, LG structure genus {g}")


def test_criterion_3_planarity_matches_hlg():
    start = time.monotonic()
    lg, hlg = Prover(LG), Prover(HLG)
    agree = total = 0
    disagreements = []
    for q in enumerate_sequents(["a", "b"], 4):
        if not balanced(q) or not lg.prove(q).provable:
            continue
        total += 1
        if (planar_linking(q, LG) is not None) == hlg.prove(q).provable:
            agree += 1
        else:
            disagreements.append(q)
    took = time.monotonic() - start
    detail = f"{agree}/{total} LG-provable sequents agree ({took:.0f}s)"
    if disagreements:
        detail += "; first disagreements: " + ", ".join(format_sequent(q) for q in disagreements[:3])
    report(3, agree == total > 0, detail)


def test_criterion_4_hlg_and_hlg_dot_agree():
    notes, ok = [], True
    for name in ("dutch.lex", "scope.lex", "dutch-mirror.lex"):
        c = compare_languages(bundled(name), HLG, HLGDOT, 7)
        ok &= c.verdict == "equal" and not c.undecided
        notes.append(f"{name} {c.verdict} ({len(c.first.recognized)} strings, {len(c.undecided)} undecided)")
    report(4, ok, "; ".join(notes))


def test_criterion_5_analytic_cut_adds_nothing(table3):
    rows = 0
    mismatches = []
    for logic in (LG, HLG, HLGDOT):
        plain = Prover(logic)
        for q in table3:
            rows += 1
            a = plain.prove(q).status
            b = prove_with_analytic_cut(q, logic).status
            if a != b:
                mismatches.append((logic.name, q, a, b))
    report(5, not mismatches, f"{rows - len(mismatches)}/{rows} verdicts agree over LG, HLG, HLG•")


def _pure(s):
    if type(s) is Leaf:
        return s
    return Node(s.family, PURE, _pure(s.left), _pure(s.right))


def test_criterion_6_erasure_embedding(table3):
    hlg, lg = Prover(HLG), Prover(LG)
    goals = []
    for q in table3:
        goals.append(q)
        pure = Sequent(_pure(q.ant), _pure(q.suc))
        if pure != q:
            goals.append(pure)
    provable = embedded = 0
    for q in goals:
        r = hlg.prove(q)
        if not r.provable:
            continue
        provable += 1
        if lg.prove(erase(q)).provable and check_derivation(erase_derivation(r.derivation), LG):
            embedded += 1
    report(6, embedded == provable > 0, f"{embedded}/{provable} HLG-provable sequents embed into LG")


def _mutants(d: Derivation):
    for target in d.nodes():
        bad_rule = "Rp(b)" if target.rule == "Rp(a)" else "Rp(a)"
        wrong = parse_sequent("b |- b") if target.conclusion != parse_sequent("b |- b") else parse_sequent("a |- a")
        for inst in (RuleInstance(bad_rule, target.conclusion, target.instance.premises),
                     RuleInstance(target.rule, wrong, target.instance.premises)):
            yield _swap(d, target, Derivation(inst, target.children))


def _swap(d, old, new):
    if d is old:
        return new
    return Derivation(d.instance, tuple(_swap(c, old, new) for c in d.children))


def test_criterion_7_soundness_and_determinism(table3):
    outputs = checked = 0
    mutants = rejected = 0
    stable = True
    for key, logic in LOGICS.items():
        first, second = Prover(logic), Prover(logic)
        for q in table3:
            r = first.prove(q)
            if r.status == RESOURCE_EXCEEDED:
                stable = False
            if not r.provable:
                continue
            outputs += 1
            checked += check_derivation(r.derivation, logic, q)
            stable &= to_text(r.derivation) == to_text(second.prove(q).derivation)
            if key == "lg":
                for m in _mutants(r.derivation):
                    mutants += 1
                    rejected += not check_derivation(m, logic, q)
    ok = checked == outputs > 0 and rejected == mutants > 0 and stable
    report(7, ok, f"{checked}/{outputs} derivations check; repeat runs identical: {stable}; "
                  f"{rejected}/{mutants} mutants rejected")


def test_criterion_8_termination():
    start = time.monotonic()
    provers = [Prover(L) for L in (LG, HLG, HLGDOT)]
    rows = exceeded = unsound = 0
    for q in enumerate_sequents(["a", "b"], 4, 4):
        rows += 1
        for p in provers:
            r = p.prove(q)
            exceeded += r.status == RESOURCE_EXCEEDED
            if r.provable and not check_derivation(r.derivation, p.logic, q):
                unsound += 1
    took = time.monotonic() - start
    ok = exceeded == 0 and unsound == 0 and took < 600
    report(8, ok, f"{rows} sequents x 3 logics in {took:.0f}s, {exceeded} resource_exceeded, {unsound} unchecked")
