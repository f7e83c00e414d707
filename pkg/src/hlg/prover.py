"""Cut-free backward proof search with checkable derivations.

The search is stratified by the number of formula connectives in a sequent.
Structural rules (display, Grishin read lower-to-upper, weakening read
pure-to-solid) keep that number fixed and permute a finite set of
structures, so the set of sequents they reach from a goal is finite and is
explored breadth first. Logical rules (Ax, Rewrite, Mon) leave the stratum
and recurse on strictly smaller premises. Provability is memoized per
sequent, and a fully explored closure marks every member unprovable.
Sequents whose count image is unbalanced are refuted without search.
"""

from __future__ import annotations

import json
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from . import calculus
from .calculus import AX, CUT, MON, REWRITE, RULE_ORDER, STRUCTURAL, Logic, RuleInstance
from .core import INPUT_FAMILIES, Compound, Leaf, Node, Sequent, count, format_sequent, leaves, parse_sequent, size, subformulas

PROVABLE, UNPROVABLE, RESOURCE_EXCEEDED = "provable", "unprovable", "resource_exceeded"


@dataclass(frozen=True)
class SearchLimits:
    max_visited_sequents: int = 2_000_000
    max_connectives: int = 64
    time_budget: float = 120.0

    def __post_init__(self):
        if self.max_visited_sequents <= 0 or self.max_connectives <= 0 or self.time_budget <= 0:
            raise ValueError("search limits must be positive")


UNLIMITED = SearchLimits(max_visited_sequents=10**12, max_connectives=10**6, time_budget=1e9)


@dataclass(frozen=True)
class Derivation:
    instance: RuleInstance
    children: tuple = ()

    @property
    def rule(self) -> str:
        return self.instance.rule

    @property
    def conclusion(self) -> Sequent:
        return self.instance.conclusion

    def nodes(self) -> Iterator["Derivation"]:
        yield self
        for c in self.children:
            yield from c.nodes()

    def rules_used(self) -> set[str]:
        return {n.rule for n in self.nodes()}

    def __len__(self) -> int:
        return sum(1 for _ in self.nodes())


@dataclass
class SearchResult:
    status: str
    derivation: Derivation | None = None
    limit: str | None = None
    visited: int = 0

    @property
    def provable(self) -> bool:
        return self.status == PROVABLE


class ResourceExceeded(Exception):
    def __init__(self, limit: str):
        super().__init__(limit)
        self.limit = limit


class Prover:
    """Reusable search state for one logic; the memo survives across goals."""

    def __init__(self, logic: Logic, limits: SearchLimits = SearchLimits(), cut_formulas=None):
        self.logic = logic
        self.limits = limits
        self.cut_formulas = cut_formulas
        rules = sorted(logic.rules, key=RULE_ORDER.__getitem__)
        self._structural = [(r, calculus.structural_up(r)) for r in rules if r in STRUCTURAL]
        self._rewrite = frozenset(r for r in rules if r in REWRITE)
        self._mon = frozenset(r for r in rules if r in MON)
        self._has_ax = AX in logic.rules
        # sequent -> (rule, premises) when provable, None when refuted
        self.memo: dict[Sequent, tuple | None] = {}
        self.visited = 0
        self._deadline = None
        self._budget_end = 0
        self._by_roots: dict = {}

    # -- search ---------------------------------------------------------------

    def prove(self, goal: Sequent) -> SearchResult:
        if size(goal) > self.limits.max_connectives:
            return SearchResult(RESOURCE_EXCEEDED, limit="max_connectives")
        self._deadline = time.monotonic() + self.limits.time_budget
        start = self.visited
        self._budget_end = start + self.limits.max_visited_sequents
        try:
            ok = self._provable(goal)
        except ResourceExceeded as e:
            return SearchResult(RESOURCE_EXCEEDED, limit=e.limit, visited=self.visited - start)
        finally:
            self._deadline = None
        if not ok:
            return SearchResult(UNPROVABLE, visited=self.visited - start)
        return SearchResult(PROVABLE, self.derivation(goal), visited=self.visited - start)

    def _tick(self):
        self.visited += 1
        if self.visited > self._budget_end:
            raise ResourceExceeded("max_visited_sequents")
        if self.visited & 1023 == 0 and time.monotonic() > self._deadline:
            raise ResourceExceeded("time")

    def _logical_step(self, q: Sequent):
        """First (rule, premises) leaving the stratum whose premises are all provable."""
        a, s = q
        if self._has_ax and type(a) is Leaf and a == s:
            return AX, ()
        # Shape decides which Rewrite and Mon rules can match at all.
        rewrites = []
        if type(a) is Leaf and type(a.formula) is Compound and a.formula.conn in INPUT_FAMILIES:
            rewrites.append(a.formula.conn)
        if type(s) is Leaf and type(s.formula) is Compound and s.formula.conn not in INPUT_FAMILIES:
            rewrites.append(s.formula.conn)
        for fam in sorted(rewrites, key=lambda f: RULE_ORDER[calculus.rewrite(f)]):
            if calculus.rewrite(fam) in self._rewrite:
                for p in calculus.rewrite_premises(fam, q):
                    if self._provable(p):
                        return calculus.rewrite(fam), (p,)
        if type(a) is Node and type(s) is Leaf:
            fam = a.family
        elif type(s) is Node and type(a) is Leaf:
            fam = s.family
        else:
            fam = None
        if fam is not None and calculus.mon(fam) in self._mon:
            for prem in calculus.mon_premises(fam, q):
                if all(self._provable(p) for p in prem):
                    return calculus.mon(fam), prem
        if self.cut_formulas is not None:
            n_ant, n_suc = size(q.ant), size(q.suc)
            for f in self.cut_formulas:
                k = size(Leaf(f))
                # keep both cut premises below the conclusion's measure
                if k < n_ant and k < n_suc:
                    prem = (Sequent(q.ant, Leaf(f)), Sequent(Leaf(f), q.suc))
                    if all(self._provable(p) for p in prem):
                        return CUT, prem
        return None

    def _provable(self, goal: Sequent) -> bool:
        memo = self.memo
        if goal in memo:
            return memo[goal] is not None
        if count(goal):
            # every rule preserves the count image, so this closure holds no proof
            memo[goal] = None
            return False
        parent: dict[Sequent, tuple | None] = {goal: None}
        queue = deque([goal])
        while queue:
            q = queue.popleft()
            known = memo.get(q, False)
            if known is None:
                continue  # refuted earlier, and so is everything it reaches
            if known is False:
                self._tick()
                step = self._logical_step(q)
                if step is not None:
                    memo[q] = step
            if q in memo:
                self._record_path(q, parent)
                return True
            for rule, up in self._structural_for(q):
                for p in up(q):
                    if p not in parent:
                        parent[p] = (q, rule)
                        queue.append(p)
        for q in parent:
            memo[q] = None
        return False

    def _structural_for(self, q: Sequent):
        """Structural rules that can fire on ``q``; they look only at the two root nodes."""
        a, s = q
        key = (None if type(a) is Leaf else (a.family, a.dot), None if type(s) is Leaf else (s.family, s.dot))
        rules = self._by_roots.get(key)
        if rules is None:
            rules = self._by_roots[key] = [(r, up) for r, up in self._structural if up(q)]
        return rules

    def _record_path(self, found: Sequent, parent: dict) -> None:
        q = found
        while parent[q] is not None:
            prev, rule = parent[q]
            if prev not in self.memo:
                self.memo[prev] = (rule, (q,))
            q = prev

    def derivation(self, goal: Sequent) -> Derivation:
        step = self.memo[goal]
        rule, prem = step
        children = tuple(self.derivation(p) for p in prem)
        return Derivation(RuleInstance(rule, goal, tuple(prem)), children)


def prove(goal: Sequent, logic: Logic, limits: SearchLimits = SearchLimits()) -> SearchResult:
    return Prover(logic, limits).prove(goal)


def analytic_cut_formulas(goal: Sequent) -> list:
    found = set()
    for f in leaves(goal.ant) + leaves(goal.suc):
        found |= subformulas(f)
    return sorted(found, key=lambda f: (size(Leaf(f)), str(f)))


def prove_with_analytic_cut(goal: Sequent, logic: Logic, limits: SearchLimits = SearchLimits()) -> SearchResult:
    """Search that may also cut on subformulas of ``goal``.

    A cut is tried only when both of its premises are smaller than the
    sequent being cut, which keeps the search well founded.
    """
    cut_logic = logic.with_rules({CUT}, name=logic.name + "+cut")
    return Prover(cut_logic, limits, cut_formulas=analytic_cut_formulas(goal)).prove(goal)


# -- independent checking ---------------------------------------------------


def diagnose(d: Derivation, logic: Logic, goal: Sequent | None = None) -> str | None:
    """Describe the first bad node (pre-order), or None when ``d`` checks.

    With ``goal``, the root must also conclude exactly that sequent.
    """
    if goal is not None and d.conclusion != goal:
        return f"root: proves {format_sequent(d.conclusion)}, expected {format_sequent(goal)}"
    stack = [(d, "root")]
    while stack:
        node, where = stack.pop()
        inst = node.instance
        if not isinstance(inst, RuleInstance):
            return f"{where}: not a rule instance"
        if inst.rule not in logic.rules:
            return f"{where}: rule {inst.rule} is not in {logic.name}"
        if not calculus.matches(inst):
            return f"{where}: {inst.rule} does not match {format_sequent(inst.conclusion)}"
        if len(node.children) != len(inst.premises):
            return f"{where}: {len(inst.premises)} premises but {len(node.children)} subproofs"
        for i, (c, p) in enumerate(zip(node.children, inst.premises)):
            if c.conclusion != p:
                return f"{where}.{i}: subproof proves {format_sequent(c.conclusion)}, expected {format_sequent(p)}"
        for i, c in reversed(list(enumerate(node.children))):
            stack.append((c, f"{where}.{i}"))
    return None


def check_derivation(d: Derivation, logic: Logic, goal: Sequent | None = None) -> bool:
    return diagnose(d, logic, goal) is None


# -- serialization ------------------------------------------------------------


def to_text(d: Derivation, indent: int = 0) -> str:
    """One line per node: ``[rule] conclusion``, children indented two spaces."""
    lines = []

    def walk(n: Derivation, depth: int):
        lines.append(f"{'  ' * depth}[{n.rule}] {format_sequent(n.conclusion)}")
        for c in n.children:
            walk(c, depth + 1)

    walk(d, indent)
    return "\n".join(lines)


def from_text(text: str) -> Derivation:
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        depth = (len(line) - len(line.lstrip(" "))) // 2
        body = line.strip()
        if not body.startswith("[") or "]" not in body:
            raise ValueError(f"bad derivation line: {line!r}")
        rule, seq = body[1:].split("]", 1)
        rows.append((depth, rule, parse_sequent(seq.strip())))
    pos = 0

    def build(depth: int) -> Derivation:
        nonlocal pos
        d0, rule, seq = rows[pos]
        if d0 != depth:
            raise ValueError(f"unexpected indentation at node {pos}")
        pos += 1
        kids = []
        while pos < len(rows) and rows[pos][0] == depth + 1:
            kids.append(build(depth + 1))
        return Derivation(RuleInstance(rule, seq, tuple(k.conclusion for k in kids)), tuple(kids))

    if not rows:
        raise ValueError("empty derivation")
    d = build(rows[0][0])
    if pos != len(rows):
        raise ValueError(f"trailing lines after node {pos}")
    return d


def to_dict(d: Derivation) -> dict:
    return {
        "rule": d.rule,
        "conclusion": format_sequent(d.conclusion),
        "children": [to_dict(c) for c in d.children],
    }


def from_dict(obj: dict) -> Derivation:
    kids = tuple(from_dict(c) for c in obj.get("children", ()))
    seq = parse_sequent(obj["conclusion"])
    return Derivation(RuleInstance(obj["rule"], seq, tuple(k.conclusion for k in kids)), kids)


def to_json(d: Derivation) -> str:
    return json.dumps(to_dict(d), ensure_ascii=False)


def from_json(text: str) -> Derivation:
    return from_dict(json.loads(text))


_ERASED_RULE = {
    "WRp(a)": "Rp(a)", "WRp(b)": "Rp(b)", "WDrp(a)": "Drp(a)", "WDrp(b)": "Drp(b)",
    "G1L": "G1", "G1R": "G1", "G2L": "G2", "G2R": "G2",
    "G3L": "G3", "G3R": "G3", "G4L": "G4", "G4R": "G4",
}


def erase_derivation(d: Derivation) -> Derivation:
    """Image of an HLG-family derivation in LG: pure dots become solid.

    Weakening steps collapse to identities and are dropped.
    """
    from .core import erase

    if d.rule in calculus.WK:
        return erase_derivation(d.children[0])
    kids = tuple(erase_derivation(c) for c in d.children)
    rule = _ERASED_RULE.get(d.rule, d.rule)
    inst = RuleInstance(rule, erase(d.conclusion), tuple(k.conclusion for k in kids))
    return Derivation(inst, kids)
