"""Categorial grammars over the calculi: lexicons, recognition, sampled languages.

A string ``w1 ... wn`` is recognized when, for some choice of lexical types
and some bracketing, the product of the types proves the goal atom. Logics
with purely structural rules build that product from pure nodes, the
others from solid ones.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from . import calculus
from .calculus import Logic
from .core import (
    PROD,
    PURE,
    SOLID,
    Atom,
    Formula,
    Leaf,
    Node,
    ParseError,
    Sequent,
    atom,
    atoms_of,
    count,
    parse_formula,
    rename_atoms,
)
from .prover import RESOURCE_EXCEEDED, Derivation, Prover, SearchLimits

log = logging.getLogger(__name__)

GOAL_KEY = "goal"


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Lexicon:
    """Words with their nonempty, ordered type lists, plus the goal atom."""

    entries: dict[str, tuple[Formula, ...]]
    goal: Atom

    def __post_init__(self):
        if not self.entries:
            raise LexiconError("lexicon has no entries")
        names = {self.goal.name}
        for word, types in self.entries.items():
            if not types:
                raise LexiconError(f"word {word!r} has no types")
            for t in types:
                names |= atoms_of(t)
        clash = sorted(set(self.entries) & names)
        if clash:
            raise LexiconError(f"words must not double as atoms: {', '.join(clash)}")

    @property
    def words(self) -> list[str]:
        return sorted(self.entries)

    def types(self, word: str) -> tuple[Formula, ...]:
        return self.entries[word]

    def unknown(self, words: Iterable[str]) -> list[str]:
        return [w for w in words if w not in self.entries]

    def with_goal(self, goal: str) -> "Lexicon":
        return Lexicon(self.entries, atom(goal))

    def renamed(self, mapping: dict[str, str]) -> "Lexicon":
        """Rename atoms throughout, merging types that become identical."""
        entries = {}
        for w, ts in self.entries.items():
            out: list[Formula] = []
            for t in ts:
                r = rename_atoms(t, mapping)
                if r not in out:
                    out.append(r)
            entries[w] = tuple(out)
        return Lexicon(entries, rename_atoms(self.goal, mapping))


def parse_lexicon(text: str) -> Lexicon:
    """Read ``goal: <atom>`` and ``word: <formula>`` lines; ``#`` starts a comment."""
    goal = None
    entries: dict[str, list[Formula]] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if not sep or not key or not rest or any(c.isspace() for c in key):
            raise LexiconError(f"line {n}: expected 'word: formula'")
        if key == GOAL_KEY:
            if goal is not None:
                raise LexiconError(f"line {n}: goal given twice")
            try:
                goal = atom(rest)
            except ValueError as e:
                raise LexiconError(f"line {n}: {e}") from None
            continue
        try:
            f = parse_formula(rest)
        except ParseError as e:
            raise LexiconError(f"line {n}: {e}") from None
        types = entries.setdefault(key, [])
        if f not in types:
            types.append(f)
    if goal is None:
        raise LexiconError("missing 'goal:' line")
    return Lexicon({w: tuple(ts) for w, ts in entries.items()}, goal)


def load_lexicon(path: str | Path) -> Lexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def format_lexicon(lex: Lexicon) -> str:
    lines = [f"{GOAL_KEY}: {lex.goal.name}"]
    for w in lex.words:
        lines += [f"{w}: {t}" for t in lex.entries[w]]
    return "\n".join(lines) + "\n"


# -- bracketings ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _trees(lo: int, hi: int) -> tuple:
    if hi - lo == 1:
        return (lo,)
    out = []
    for mid in range(lo + 1, hi):
        for left in _trees(lo, mid):
            for right in _trees(mid, hi):
                out.append((left, right))
    return tuple(out)


def bracketings(n: int) -> list:
    """Binary trees over positions ``0..n-1`` in order; ints are leaves, pairs are nodes."""
    if n < 1:
        raise ValueError("need at least one leaf")
    return list(_trees(0, n))


def format_bracketing(tree, words: Sequence[str] | None = None) -> str:
    if isinstance(tree, int):
        return words[tree] if words is not None else str(tree)
    return f"({format_bracketing(tree[0], words)} {format_bracketing(tree[1], words)})"


def uses_pure_products(logic: Logic) -> bool:
    return any(r in logic.rules for r in calculus.WRP + calculus.WDRP + calculus.WK)


def sentence_sequent(types: Sequence[Formula], tree, goal: Atom, dot: str = PURE) -> Sequent:
    def build(t):
        if isinstance(t, int):
            return Leaf(types[t])
        return Node(PROD, dot, build(t[0]), build(t[1]))

    return Sequent(build(tree), Leaf(goal))


# -- recognition -----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    words: tuple[str, ...]
    assignment: tuple[Formula, ...]
    bracketing: object
    derivation: Derivation

    @property
    def sequent(self) -> Sequent:
        return self.derivation.conclusion


class Undecided(Exception):
    """No witness found, and some cells hit a search limit."""

    def __init__(self, words, cells):
        super().__init__(f"{' '.join(words)}: {len(cells)} undecided cell(s)")
        self.words = tuple(words)
        self.cells = cells  # (assignment, bracketing, limit)


def _balanced(types: Sequence[Formula], goal: Atom) -> bool:
    total: dict[str, int] = {}
    for t in types:
        for k, v in count(t).items():
            total[k] = total.get(k, 0) + v
    total[goal.name] = total.get(goal.name, 0) - 1
    return not any(total.values())


def _recognize_types(options, goal, logic, prover, words):
    dot = PURE if uses_pure_products(logic) else SOLID
    trees = bracketings(len(options))
    undecided = []
    for assignment in product(*options):
        # the count image ignores bracketing, so one check covers every tree
        if not _balanced(assignment, goal):
            continue
        for tree in trees:
            r = prover.prove(sentence_sequent(assignment, tree, goal, dot))
            if r.provable:
                return Witness(tuple(words), tuple(assignment), tree, r.derivation)
            if r.status == RESOURCE_EXCEEDED:
                undecided.append((tuple(assignment), tree, r.limit))
    if undecided:
        raise Undecided(words, undecided)
    return None


def recognize(
    lex: Lexicon,
    words: Sequence[str],
    logic: Logic,
    limits: SearchLimits = SearchLimits(),
    prover: Prover | None = None,
) -> Witness | None:
    """First witness in (assignment, bracketing) order, or None.

    Raises Undecided when nothing was found but some cell ran out of budget.
    """
    words = list(words)
    if not words:
        raise ValueError("a sentence has at least one word")
    missing = lex.unknown(words)
    if missing:
        log.warning("no lexical entry for %s", ", ".join(missing))
        return None
    prover = prover or Prover(logic, limits)
    return _recognize_types([lex.types(w) for w in words], lex.goal, logic, prover, words)


# -- languages -------------------------------------------------------------------


@dataclass(frozen=True)
class LanguageSample:
    logic: str
    max_len: int
    recognized: frozenset
    undecided: frozenset

    @property
    def complete(self) -> bool:
        return not self.undecided


def word_classes(lex: Lexicon) -> list[tuple[str, ...]]:
    """Words grouped by identical type sets; classes sorted by their first word."""
    groups: dict[frozenset, list[str]] = {}
    for w in lex.words:
        groups.setdefault(frozenset(lex.entries[w]), []).append(w)
    return sorted(tuple(ws) for ws in groups.values())


def sample_language(
    lex: Lexicon,
    logic: Logic,
    max_len: int,
    limits: SearchLimits = SearchLimits(),
) -> LanguageSample:
    """Every string up to ``max_len`` words that ``logic`` recognizes.

    Words with the same types are interchangeable, so each class string is
    decided once and then expanded to its words.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    classes = word_classes(lex)
    prover = Prover(logic, limits)
    yes, unknown = set(), set()
    for n in range(1, max_len + 1):
        for pattern in product(range(len(classes)), repeat=n):
            reps = [classes[c][0] for c in pattern]
            try:
                ok = recognize(lex, reps, logic, limits, prover) is not None
                bucket = yes if ok else None
            except Undecided:
                bucket = unknown
            if bucket is not None:
                bucket.update(product(*(classes[c] for c in pattern)))
    return LanguageSample(logic.name, max_len, frozenset(yes), frozenset(unknown))


def _string_order(s: tuple[str, ...]):
    return (len(s), s)


@dataclass(frozen=True)
class Comparison:
    verdict: str  # equal | divergent | inconclusive
    first: LanguageSample
    second: LanguageSample
    divergent: tuple[str, ...] | None = None
    undecided: frozenset = field(default_factory=frozenset)

    @property
    def equal(self) -> bool:
        return self.verdict == "equal"


def compare_languages(
    lex: Lexicon,
    logic_a: Logic,
    logic_b: Logic,
    max_len: int,
    limits: SearchLimits = SearchLimits(),
) -> Comparison:
    """Equal, the shortest-then-lexicographically-first divergent string, or inconclusive.

    A string counts as divergent only when both logics decided it.
    """
    a = sample_language(lex, logic_a, max_len, limits)
    b = sample_language(lex, logic_b, max_len, limits)
    undecided = a.undecided | b.undecided
    diff = sorted((a.recognized ^ b.recognized) - undecided, key=_string_order)
    if diff:
        return Comparison("divergent", a, b, diff[0], undecided)
    if undecided:
        return Comparison("inconclusive", a, b, None, undecided)
    return Comparison("equal", a, b)
