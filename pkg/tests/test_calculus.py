import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import any_sequents, sequents
from hlg.calculus import (
    AX,
    GRISHIN,
    HLG,
    HLG0,
    HLGDOT,
    LG,
    LG0,
    LOGICS,
    NL,
    RULES,
    STRUCTURAL,
    WDRP,
    WK,
    WRP,
    RuleInstance,
    apply,
    check,
    get_logic,
    matches,
    premises_of,
    rule_table,
)
from hlg.core import SOLID, count, erase, leaves, parse_sequent, size, validate_sequent

NON_CUT = [r for r in RULES if r != "Cut"]


def q(text):
    return parse_sequent(text)


def test_axiom():
    assert premises_of(AX, q("a |- a")) == [()]
    assert premises_of(AX, q("(a / b) |- (a / b)")) == [()]
    assert premises_of(AX, q("a |- b")) == []


def test_rewrite_left_prod():
    assert premises_of("Rewrite(prod)", q("(a * b) |- c")) == [(q("a .*. b |- c"),)]


def test_rewrite_right_under():
    assert premises_of("Rewrite(under)", q("c |- (a \\ b)")) == [(q("c |- a .\\. b"),)]


def test_mon_under_forward():
    assert apply("Mon(under)", [q("a |- b"), q("c |- d")]) == [q("(b \\ c) |- a .\\. d")]


def test_mon_needs_solid_root():
    assert premises_of("Mon(prod)", q("a o*o b |- (a * b)")) == []
    assert premises_of("Mon(prod)", q("a .*. b |- (a * b)")) == [(q("a |- a"), q("b |- b"))]


def test_weakening_forward_and_backward():
    assert apply("Wk(prod)", [q("a .*. b |- y")]) == [q("a o*o b |- y")]
    assert premises_of("Wk(prod)", q("a o*o b |- y")) == [(q("a .*. b |- y"),)]
    assert premises_of("Wk(prod)", q("a .*. b |- y")) == []


def test_residuation_both_forms():
    got = apply("Rp(a)", [q("a .*. b |- c")])
    assert got == [q("b |- a .\\. c")]
    assert apply("Rp(b)", [q("a .*. b |- c")]) == [q("a |- c ./. b")]
    assert apply("Drp(a)", [q("c |- b .+. a")]) == [q("c .-<. a |- b")]
    assert apply("Drp(b)", [q("c |- b .+. a")]) == [q("b .>-. c |- a")]


def test_display_rules_are_involutive():
    for rule, text in [("Rp(a)", "a .*. b |- c"), ("Rp(b)", "a .*. b |- c"),
                       ("Drp(a)", "c |- b .+. a"), ("Drp(b)", "c |- b .+. a"),
                       ("WRp(a)", "a o*o b |- c"), ("WDrp(b)", "c |- b o+o a")]:
        start = q(text)
        (mid,) = apply(rule, [start])
        assert start in apply(rule, [mid])


def test_grishin_lower_sequents():
    upper = q("a .*. b |- c .+. d")
    assert apply("G1", [upper]) == [q("c .>-. a |- d ./. b")]
    assert apply("G2", [upper]) == [q("c .>-. b |- a .\\. d")]
    assert apply("G3", [upper]) == [q("b .-<. d |- a .\\. c")]
    assert apply("G4", [upper]) == [q("a .-<. d |- c ./. b")]
    assert premises_of("G1", q("a .*. b |- c .+. d")) == []  # strictly upward


def test_g2l_reconstructed_example():
    goal = q("(s -< s) .>-. (np \\ s) |- np o\\o s")
    assert premises_of("G2L", goal) == [(q("np o*o (np \\ s) |- (s -< s) .+. s"),)]


@pytest.mark.parametrize("rule,upper,lower", [
    ("G1R", "a o*o b |- c .+. d", "c o>-o a |- d ./. b"),
    ("G2R", "a .*. b |- c o+o d", "c o>-o b |- a .\\. d"),
    ("G3R", "a o*o b |- c .+. d", "b o-<o d |- a .\\. c"),
    ("G4L", "a o*o b |- c .+. d", "a .-<. d |- c o/o b"),
    ("G4R", "a .*. b |- c o+o d", "a o-<o d |- c ./. b"),
])
def test_grishin_dot_patterns(rule, upper, lower):
    assert apply(rule, [q(upper)]) == [q(lower)]


def test_check_respects_logic_membership():
    g2r = RuleInstance("G2R", q("c o>-o b |- a .\\. d"), (q("a .*. b |- c o+o d"),))
    assert matches(g2r)
    assert check(g2r, HLGDOT)
    assert not check(g2r, HLG)
    assert check(RuleInstance(AX, q("(a * b) |- (a * b)"), ()), NL)
    bad_wk = RuleInstance("Wk(prod)", q("a .*. b |- y"), (q("a .*. b |- y"),))
    assert not matches(bad_wk)


def test_logic_inclusions():
    assert NL.rules <= LG0.rules <= LG.rules
    assert HLG0.rules <= HLG.rules and HLG0.rules <= HLGDOT.rules
    assert {"G1", "G2L", "G3", "G4L"} <= HLG.rules
    assert "G2" not in HLG.rules and "G2R" not in HLG.rules
    assert all("Cut" not in L.rules for L in LOGICS.values())
    assert get_logic("HLG•") is HLGDOT
    with pytest.raises(ValueError):
        get_logic("ll")


def test_rule_table_covers_every_rule():
    table = rule_table()
    assert [r["name"] for r in table] == list(RULES)
    rp = next(r for r in table if r["name"] == "Rp(a)")
    assert rp["bidirectional"] and rp["kind"] == "structural"
    assert "hlg" in next(r for r in table if r["name"] == "G2L")["logics"]


# -- properties ------------------------------------------------------------


@settings(max_examples=300)
@given(any_sequents, st.sampled_from(NON_CUT))
def test_premises_are_valid_and_adjoint(goal, rule):
    for prem in premises_of(rule, goal):
        assert all(validate_sequent(p) for p in prem)
        if rule != AX:
            assert goal in apply(rule, prem)
        assert matches(RuleInstance(rule, goal, prem))


@settings(max_examples=300)
@given(any_sequents, st.sampled_from([r for r in NON_CUT if r != AX]))
def test_forward_steps_are_adjoint(prem, rule):
    # single-premise forward steps; Mon is covered by the backward property
    for concl in apply(rule, [prem]):
        assert (prem,) in premises_of(rule, concl)


@settings(max_examples=300)
@given(any_sequents, st.sampled_from(NON_CUT))
def test_count_invariant_is_preserved(goal, rule):
    for prem in premises_of(rule, goal):
        total: dict = {}
        for p in prem:
            for k, v in count(p).items():
                total[k] = total.get(k, 0) + v
        if rule == AX:
            assert not count(goal)
        else:
            assert {k: v for k, v in total.items() if v} == count(goal)


@settings(max_examples=300)
@given(any_sequents, st.sampled_from(sorted(STRUCTURAL)))
def test_structural_rules_keep_leaves_and_size(goal, rule):
    for (p,) in premises_of(rule, goal):
        assert sorted(map(str, leaves(p.ant) + leaves(p.suc))) == sorted(map(str, leaves(goal.ant) + leaves(goal.suc)))
        assert size(p) == size(goal)


@settings(max_examples=300)
@given(any_sequents, st.sampled_from(sorted(HLGDOT.rules | HLG.rules)))
def test_erasure_maps_instances_into_lg(goal, rule):
    mapped = {"WRp(a)": "Rp(a)", "WRp(b)": "Rp(b)", "WDrp(a)": "Drp(a)", "WDrp(b)": "Drp(b)"}
    for prem in premises_of(rule, goal):
        if rule in WK:
            assert erase(prem[0]) == erase(goal)
            continue
        target = mapped.get(rule, rule.rstrip("LR") if rule in GRISHIN else rule)
        inst = RuleInstance(target, erase(goal), tuple(erase(p) for p in prem))
        assert check(inst, LG)


@given(sequents(dots=(SOLID,)))
def test_pure_rules_never_fire_on_solid_goals(goal):
    for rule in WRP + WDRP + WK + ("G1R", "G2L", "G2R", "G3R", "G4L", "G4R"):
        assert premises_of(rule, goal) == []
