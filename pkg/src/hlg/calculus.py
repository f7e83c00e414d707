"""Rule schemas of NL, LG0, LG, HLG0, HLG and HLG-dot.

Every rule acts at the root of a sequent. ``premises_of`` reads a rule
bottom-up (goal to premise lists), ``apply`` top-down. Display rules are
bidirectional; Grishin rules only run from upper to lower sequent, and
weakening only turns a solid root into a pure one.

Schemas, with ``d`` a dot kind (solid for Rp/Drp, pure for WRp/WDrp)::

    Rp(a)   A d*d B |- C   <=>  B |- A d\\d C
    Rp(b)   A d*d B |- C   <=>  A |- C d/d B
    Drp(a)  C |- B d+d A   <=>  C d-<d A |- B
    Drp(b)  C |- B d+d A   <=>  B d>-d C |- A

    Grishin, upper sequent  A * B |- C + D
    G1  C >- A |- D / B        G2  C >- B |- A \\ D
    G3  B -< D |- A \\ C        G4  A -< D |- C / B

with the dot pattern of each variant in ``GRISHIN``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

from .core import (
    CHILD_POLARITY,
    COPROD,
    FAMILIES,
    IN,
    INPUT_FAMILIES,
    LDIFF,
    OVER,
    PROD,
    PURE,
    RDIFF,
    SOLID,
    UNDER,
    Atom,
    Compound,
    Leaf,
    Node,
    Sequent,
    format_sequent,
    subformulas,
    validate_sequent,
)

AX = "Ax"
CUT = "Cut"


def mon(family: str) -> str:
    return f"Mon({family})"


def rewrite(family: str) -> str:
    return f"Rewrite({family})"


def wk(family: str) -> str:
    return f"Wk({family})"


MON = tuple(mon(f) for f in FAMILIES)
REWRITE = tuple(rewrite(f) for f in FAMILIES)
WK = tuple(wk(f) for f in FAMILIES)
RP = ("Rp(a)", "Rp(b)")
DRP = ("Drp(a)", "Drp(b)")
WRP = ("WRp(a)", "WRp(b)")
WDRP = ("WDrp(a)", "WDrp(b)")

# name -> (shape, upper prod dot, upper coprod dot, lower antecedent dot, lower succedent dot)
S, P = SOLID, PURE
GRISHIN = {
    "G1": (1, S, S, S, S),
    "G2": (2, S, S, S, S),
    "G3": (3, S, S, S, S),
    "G4": (4, S, S, S, S),
    "G1L": (1, S, S, S, S),
    "G1R": (1, P, S, P, S),
    "G2L": (2, P, S, S, P),
    "G2R": (2, S, P, P, S),
    "G3L": (3, S, S, S, S),
    "G3R": (3, P, S, P, S),
    "G4L": (4, P, S, S, P),
    "G4R": (4, S, P, P, S),
}
GRISHIN_LG = ("G1", "G2", "G3", "G4")
GRISHIN_HLG = ("G1", "G2L", "G3", "G4L")
GRISHIN_DOT = ("G1L", "G1R", "G2L", "G2R", "G3L", "G3R", "G4L", "G4R")

RULES: tuple[str, ...] = (
    (AX, CUT) + MON + REWRITE + RP + DRP + WRP + WDRP + WK + GRISHIN_LG
    + ("G1L", "G1R", "G2L", "G2R", "G3L", "G3R", "G4L", "G4R")
)
RULE_ORDER = {r: i for i, r in enumerate(RULES)}
LOGICAL = frozenset((AX,) + MON + REWRITE)
STRUCTURAL = frozenset(RULES) - LOGICAL - {CUT}


def is_logical(rule: str) -> bool:
    return rule in LOGICAL


@dataclass(frozen=True)
class Logic:
    name: str
    rules: frozenset

    def __contains__(self, rule: str) -> bool:
        return rule in self.rules

    def with_rules(self, extra: Iterable[str], name: str | None = None) -> "Logic":
        return Logic(name or "custom", self.rules | frozenset(extra))

    def without(self, removed: Iterable[str], name: str | None = None) -> "Logic":
        return Logic(name or "custom", self.rules - frozenset(removed))


NL = Logic(
    "NL",
    frozenset({AX, mon(PROD), mon(OVER), mon(UNDER), *RP, rewrite(PROD), rewrite(OVER), rewrite(UNDER)}),
)
LG0 = Logic("LG0", frozenset({AX, *MON, *REWRITE, *RP, *DRP}))
LG = Logic("LG", LG0.rules | frozenset(GRISHIN_LG))
HLG0 = Logic("HLG0", LG0.rules | frozenset({*WRP, *WDRP, *WK}))
HLG = Logic("HLG", HLG0.rules | frozenset(GRISHIN_HLG))
HLGDOT = Logic("HLGdot", HLG0.rules | frozenset(GRISHIN_DOT))

LOGICS = {"nl": NL, "lg0": LG0, "lg": LG, "hlg0": HLG0, "hlg": HLG, "hlg-dot": HLGDOT}


def get_logic(name: str) -> Logic:
    key = name.lower().replace("_", "-")
    if key in ("hlgdot", "hlg•"):
        key = "hlg-dot"
    try:
        return LOGICS[key]
    except KeyError:
        raise ValueError(f"unknown logic {name!r}; choose from {', '.join(LOGICS)}") from None


def logic_name(logic: Logic) -> str:
    for key, lg in LOGICS.items():
        if lg == logic:
            return key
    return logic.name


# -- display rules ----------------------------------------------------------


def _rp_a(q: Sequent, d: str) -> list[Sequent]:
    out = []
    a = q.ant
    if type(a) is Node and a.family == PROD and a.dot == d:
        out.append(Sequent(a.right, Node(UNDER, d, a.left, q.suc)))
    s = q.suc
    if type(s) is Node and s.family == UNDER and s.dot == d:
        out.append(Sequent(Node(PROD, d, s.left, q.ant), s.right))
    return out


def _rp_b(q: Sequent, d: str) -> list[Sequent]:
    out = []
    a = q.ant
    if type(a) is Node and a.family == PROD and a.dot == d:
        out.append(Sequent(a.left, Node(OVER, d, q.suc, a.right)))
    s = q.suc
    if type(s) is Node and s.family == OVER and s.dot == d:
        out.append(Sequent(Node(PROD, d, q.ant, s.right), s.left))
    return out


def _drp_a(q: Sequent, d: str) -> list[Sequent]:
    out = []
    s = q.suc
    if type(s) is Node and s.family == COPROD and s.dot == d:
        out.append(Sequent(Node(RDIFF, d, q.ant, s.right), s.left))
    a = q.ant
    if type(a) is Node and a.family == RDIFF and a.dot == d:
        out.append(Sequent(a.left, Node(COPROD, d, q.suc, a.right)))
    return out


def _drp_b(q: Sequent, d: str) -> list[Sequent]:
    out = []
    s = q.suc
    if type(s) is Node and s.family == COPROD and s.dot == d:
        out.append(Sequent(Node(LDIFF, d, s.left, q.ant), s.right))
    a = q.ant
    if type(a) is Node and a.family == LDIFF and a.dot == d:
        out.append(Sequent(a.right, Node(COPROD, d, a.left, q.suc)))
    return out


_DISPLAY = {
    "Rp(a)": (_rp_a, SOLID),
    "Rp(b)": (_rp_b, SOLID),
    "Drp(a)": (_drp_a, SOLID),
    "Drp(b)": (_drp_b, SOLID),
    "WRp(a)": (_rp_a, PURE),
    "WRp(b)": (_rp_b, PURE),
    "WDrp(a)": (_drp_a, PURE),
    "WDrp(b)": (_drp_b, PURE),
}


# -- Grishin ----------------------------------------------------------------


def _grishin_lower(shape: int, a, b, c, d, da: str, ds: str) -> Sequent:
    if shape == 1:
        return Sequent(Node(LDIFF, da, c, a), Node(OVER, ds, d, b))
    if shape == 2:
        return Sequent(Node(LDIFF, da, c, b), Node(UNDER, ds, a, d))
    if shape == 3:
        return Sequent(Node(RDIFF, da, b, d), Node(UNDER, ds, a, c))
    return Sequent(Node(RDIFF, da, a, d), Node(OVER, ds, c, b))


_LOWER_FAMILIES = {1: (LDIFF, OVER), 2: (LDIFF, UNDER), 3: (RDIFF, UNDER), 4: (RDIFF, OVER)}


def _grishin_up(rule: str, q: Sequent) -> list[Sequent]:
    shape, dp, dc, da, ds = GRISHIN[rule]
    x, y = q.ant, q.suc
    fa, fs = _LOWER_FAMILIES[shape]
    if not (type(x) is Node and type(y) is Node and x.family == fa and y.family == fs
            and x.dot == da and y.dot == ds):
        return []
    if shape == 1:    # C >- A |- D / B
        c, a, d, b = x.left, x.right, y.left, y.right
    elif shape == 2:  # C >- B |- A \ D
        c, b, a, d = x.left, x.right, y.left, y.right
    elif shape == 3:  # B -< D |- A \ C
        b, d, a, c = x.left, x.right, y.left, y.right
    else:             # A -< D |- C / B
        a, d, c, b = x.left, x.right, y.left, y.right
    return [Sequent(Node(PROD, dp, a, b), Node(COPROD, dc, c, d))]


def _grishin_down(rule: str, q: Sequent) -> list[Sequent]:
    shape, dp, dc, da, ds = GRISHIN[rule]
    x, y = q.ant, q.suc
    if not (type(x) is Node and type(y) is Node and x.family == PROD and y.family == COPROD
            and x.dot == dp and y.dot == dc):
        return []
    return [_grishin_lower(shape, x.left, x.right, y.left, y.right, da, ds)]


# -- weakening ----------------------------------------------------------------


def _wk_up(family: str, q: Sequent) -> list[Sequent]:
    if family in INPUT_FAMILIES:
        a = q.ant
        if type(a) is Node and a.family == family and a.dot == PURE:
            return [Sequent(Node(family, SOLID, a.left, a.right), q.suc)]
    else:
        s = q.suc
        if type(s) is Node and s.family == family and s.dot == PURE:
            return [Sequent(q.ant, Node(family, SOLID, s.left, s.right))]
    return []


def _wk_down(family: str, q: Sequent) -> list[Sequent]:
    if family in INPUT_FAMILIES:
        a = q.ant
        if type(a) is Node and a.family == family and a.dot == SOLID:
            return [Sequent(Node(family, PURE, a.left, a.right), q.suc)]
    else:
        s = q.suc
        if type(s) is Node and s.family == family and s.dot == SOLID:
            return [Sequent(q.ant, Node(family, PURE, s.left, s.right))]
    return []


# -- logical rules ----------------------------------------------------------


def _mon_up(family: str, q: Sequent) -> list[tuple[Sequent, Sequent]]:
    if family in INPUT_FAMILIES:
        st, fl = q.ant, q.suc
    else:
        fl, st = q.ant, q.suc
    if not (type(st) is Node and st.family == family and st.dot == SOLID and type(fl) is Leaf):
        return []
    f = fl.formula
    if type(f) is not Compound or f.conn != family:
        return []
    lp, rp = CHILD_POLARITY[family]
    p1 = Sequent(st.left, Leaf(f.left)) if lp == IN else Sequent(Leaf(f.left), st.left)
    p2 = Sequent(st.right, Leaf(f.right)) if rp == IN else Sequent(Leaf(f.right), st.right)
    return [(p1, p2)]


def _mon_down(family: str, p1: Sequent, p2: Sequent) -> list[Sequent]:
    lp, rp = CHILD_POLARITY[family]
    parts = []
    for p, pol in ((p1, lp), (p2, rp)):
        if pol == IN:
            if type(p.suc) is not Leaf:
                return []
            parts.append((p.ant, p.suc.formula))
        else:
            if type(p.ant) is not Leaf:
                return []
            parts.append((p.suc, p.ant.formula))
    st = Node(family, SOLID, parts[0][0], parts[1][0])
    fl = Leaf(Compound(family, parts[0][1], parts[1][1]))
    return [Sequent(st, fl) if family in INPUT_FAMILIES else Sequent(fl, st)]


def _rewrite_up(family: str, q: Sequent) -> list[Sequent]:
    side = q.ant if family in INPUT_FAMILIES else q.suc
    if type(side) is not Leaf:
        return []
    f = side.formula
    if type(f) is not Compound or f.conn != family:
        return []
    st = Node(family, SOLID, Leaf(f.left), Leaf(f.right))
    return [Sequent(st, q.suc) if family in INPUT_FAMILIES else Sequent(q.ant, st)]


def _rewrite_down(family: str, q: Sequent) -> list[Sequent]:
    side = q.ant if family in INPUT_FAMILIES else q.suc
    if not (type(side) is Node and side.family == family and side.dot == SOLID
            and type(side.left) is Leaf and type(side.right) is Leaf):
        return []
    fl = Leaf(Compound(family, side.left.formula, side.right.formula))
    return [Sequent(fl, q.suc) if family in INPUT_FAMILIES else Sequent(q.ant, fl)]


rewrite_premises = _rewrite_up
mon_premises = _mon_up


def _family_arg(rule: str) -> str:
    return rule[rule.index("(") + 1:-1]


# -- public surface -----------------------------------------------------------


def structural_up(rule: str) -> Callable[[Sequent], list[Sequent]]:
    """Backward step function of a single-premise structural rule."""
    if rule in _DISPLAY:
        fn, d = _DISPLAY[rule]
        return lambda q: fn(q, d)
    if rule in GRISHIN:
        return lambda q: _grishin_up(rule, q)
    if rule in WK:
        fam = _family_arg(rule)
        return lambda q: _wk_up(fam, q)
    raise ValueError(f"{rule} is not a structural rule")


def premises_of(rule: str, goal: Sequent, cut_formulas: Iterable = None) -> list[tuple[Sequent, ...]]:
    """All premise lists from which ``rule`` concludes ``goal``.

    Cut needs candidate cut formulas; by default the subformulas of the goal.
    """
    if rule == AX:
        a, s = goal
        if type(a) is Leaf and a == s:
            return [()]
        return []
    if rule == CUT:
        if cut_formulas is None:
            cut_formulas = _goal_subformulas(goal)
        return [(Sequent(goal.ant, Leaf(f)), Sequent(Leaf(f), goal.suc)) for f in cut_formulas]
    if rule in MON:
        return _mon_up(_family_arg(rule), goal)
    if rule in REWRITE:
        return [(p,) for p in _rewrite_up(_family_arg(rule), goal)]
    if rule in STRUCTURAL:
        return [(p,) for p in structural_up(rule)(goal)]
    raise ValueError(f"unknown rule {rule!r}")


def apply(rule: str, premises: tuple[Sequent, ...] | list[Sequent]) -> list[Sequent]:
    """All conclusions ``rule`` draws from the ordered ``premises``."""
    premises = tuple(premises)
    if rule == AX:
        return []  # Ax has no premises and infinitely many conclusions
    if rule == CUT:
        if len(premises) != 2:
            return []
        (x, a), (b, y) = premises
        if type(a) is Leaf and a == b:
            return [Sequent(x, y)]
        return []
    if rule in MON:
        if len(premises) != 2:
            return []
        return _mon_down(_family_arg(rule), *premises)
    if len(premises) != 1:
        return []
    (p,) = premises
    if rule in REWRITE:
        return _rewrite_down(_family_arg(rule), p)
    if rule in _DISPLAY:
        fn, d = _DISPLAY[rule]
        return fn(p, d)
    if rule in GRISHIN:
        return _grishin_down(rule, p)
    if rule in WK:
        return _wk_down(_family_arg(rule), p)
    raise ValueError(f"unknown rule {rule!r}")


def _goal_subformulas(goal: Sequent) -> list:
    from .core import leaves

    found = set()
    for f in leaves(goal.ant) + leaves(goal.suc):
        found |= subformulas(f)
    return sorted(found, key=lambda f: (len(str(f)), str(f)))


class RuleInstance(NamedTuple):
    rule: str
    conclusion: Sequent
    premises: tuple


def matches(inst: RuleInstance) -> bool:
    """Schema check, independent of any logic."""
    if inst.rule not in RULE_ORDER:
        return False
    seqs = (inst.conclusion,) + tuple(inst.premises)
    if not all(type(q) is Sequent and validate_sequent(q) for q in seqs):
        return False
    if inst.rule == AX:
        return not inst.premises and bool(premises_of(AX, inst.conclusion))
    return inst.conclusion in apply(inst.rule, inst.premises)


def check(inst: RuleInstance, logic: Logic) -> bool:
    return inst.rule in logic.rules and matches(inst)


# -- rule table -------------------------------------------------------------


def _meta(name: str) -> Leaf:
    return Leaf(Atom(name))


def _schema_example(rule: str) -> tuple[list[Sequent], Sequent] | None:
    """Render a rule on metavariables; used for the documentation dump."""
    A, B, C, D, X, Y = (_meta(n) for n in "ABCDXY")
    if rule == AX:
        return [], Sequent(A, A)
    if rule == CUT:
        return [Sequent(X, A), Sequent(A, Y)], Sequent(X, Y)
    if rule in MON:
        fam = _family_arg(rule)
        lp, rp = CHILD_POLARITY[fam]
        p1 = Sequent(X, A) if lp == IN else Sequent(A, X)
        p2 = Sequent(Y, B) if rp == IN else Sequent(B, Y)
        return [p1, p2], _mon_down(fam, p1, p2)[0]
    if rule in REWRITE:
        fam = _family_arg(rule)
        st = Node(fam, SOLID, A, B)
        p = Sequent(st, Y) if fam in INPUT_FAMILIES else Sequent(X, st)
        return [p], _rewrite_down(fam, p)[0]
    if rule in _DISPLAY:
        fn, d = _DISPLAY[rule]
        p = (Sequent(Node(PROD, d, A, B), C) if "Rp" in rule else Sequent(C, Node(COPROD, d, B, A)))
        return [p], fn(p, d)[0]
    if rule in GRISHIN:
        _, dp, dc, _, _ = GRISHIN[rule]
        p = Sequent(Node(PROD, dp, A, B), Node(COPROD, dc, C, D))
        return [p], _grishin_down(rule, p)[0]
    if rule in WK:
        fam = _family_arg(rule)
        st = Node(fam, SOLID, A, B)
        p = Sequent(st, Y) if fam in INPUT_FAMILIES else Sequent(X, st)
        return [p], _wk_down(fam, p)[0]
    return None


def rule_table() -> list[dict]:
    """One record per rule: name, kind, schema text, logics containing it."""
    rows = []
    for rule in RULES:
        prem, concl = _schema_example(rule)
        bidirectional = rule in _DISPLAY
        rows.append({
            "name": rule,
            "kind": "cut" if rule == CUT else ("logical" if rule in LOGICAL else "structural"),
            "premises": [format_sequent(p) for p in prem],
            "conclusion": format_sequent(concl),
            "bidirectional": bidirectional,
            "logics": [k for k, lg in LOGICS.items() if rule in lg.rules],
        })
    return rows
