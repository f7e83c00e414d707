"""Formulas, structures and sequents of the Lambek-Grishin family.

Values are plain immutable named tuples so they hash and compare quickly;
that matters because the prover keys its memo tables on them.

Text syntax (fully parenthesized, whitespace insignificant)::

    formula   := atom | '(' formula fop formula ')'
    structure := formula | '(' structure sop structure ')'
    sequent   := side '|-' side

``fop`` is one of ``* \\ / + -< >-``; ``sop`` wraps it in solid dots
(``.*.``) or pure dots (``o*o``). Outermost parentheses may be dropped on
either side of a sequent and around a whole formula.
"""

from __future__ import annotations

import re
from typing import Iterator, NamedTuple, Sequence, Union

# Families. Formula connectives reuse the same names.
PROD, UNDER, OVER, COPROD, RDIFF, LDIFF = "prod", "under", "over", "coprod", "rdiff", "ldiff"
FAMILIES = (PROD, UNDER, OVER, COPROD, RDIFF, LDIFF)
INPUT_FAMILIES = frozenset({PROD, RDIFF, LDIFF})
OUTPUT_FAMILIES = frozenset({COPROD, UNDER, OVER})

SOLID, PURE = "solid", "pure"
DOTS = (SOLID, PURE)

IN, OUT = "in", "out"
ANTECEDENT, SUCCEDENT = "antecedent", "succedent"

# Required polarity of (left child, right child) for each family.
CHILD_POLARITY = {
    PROD: (IN, IN),
    RDIFF: (IN, OUT),
    LDIFF: (OUT, IN),
    COPROD: (OUT, OUT),
    UNDER: (IN, OUT),
    OVER: (OUT, IN),
}

SYMBOL = {PROD: "*", UNDER: "\\", OVER: "/", COPROD: "+", RDIFF: "-<", LDIFF: ">-"}
FAMILY_OF_SYMBOL = {v: k for k, v in SYMBOL.items()}

ATOM_RE = re.compile(r"[a-z][a-z0-9']*\Z")
RESERVED_ATOMS = frozenset({"o"})


class Atom(NamedTuple):
    name: str

    def __str__(self) -> str:
        return self.name


class Compound(NamedTuple):
    conn: str
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Atom, Compound]


class Leaf(NamedTuple):
    formula: Formula

    def __str__(self) -> str:
        return format_formula(self.formula)


class Node(NamedTuple):
    family: str
    dot: str
    left: "Structure"
    right: "Structure"

    def __str__(self) -> str:
        return format_structure(self)


Structure = Union[Leaf, Node]


class Sequent(NamedTuple):
    ant: Structure
    suc: Structure

    def __str__(self) -> str:
        return format_sequent(self)


class ParseError(ValueError):
    """Malformed text; ``pos`` is the character offset of the problem."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class PolarityError(ValueError):
    """A structural node sits where its family is not allowed."""


class NoSuchCase(ValueError):
    pass


# -- constructors -----------------------------------------------------------


def atom(name: str) -> Atom:
    if not ATOM_RE.match(name) or name in RESERVED_ATOMS:
        raise ValueError(f"invalid atom name {name!r}")
    return Atom(name)


def prod(a, b):
    return Compound(PROD, a, b)


def under(divisor, result):
    """``divisor \\ result``."""
    return Compound(UNDER, divisor, result)


def over(result, divisor):
    """``result / divisor``."""
    return Compound(OVER, result, divisor)


def coprod(a, b):
    return Compound(COPROD, a, b)


def rdiff(a, b):
    return Compound(RDIFF, a, b)


def ldiff(a, b):
    """``a >- b``; arguments in written order."""
    return Compound(LDIFF, a, b)


def node(family: str, left: Structure, right: Structure, dot: str = SOLID) -> Node:
    return Node(family, dot, left, right)


def leaf(f: Formula) -> Leaf:
    return Leaf(f)


# -- polarity ---------------------------------------------------------------


def polarity(s: Structure) -> str | None:
    """``in``/``out`` for a node, None for a leaf (fits either side)."""
    if type(s) is Leaf:
        return None
    return IN if s.family in INPUT_FAMILIES else OUT


def _valid(s: Structure, want: str) -> bool:
    if type(s) is Leaf:
        return True
    if (want == IN) != (s.family in INPUT_FAMILIES):
        return False
    lp, rp = CHILD_POLARITY[s.family]
    return _valid(s.left, lp) and _valid(s.right, rp)


def validate(side: str, s: Structure) -> bool:
    """True iff ``s`` is a well-formed input (antecedent) or output (succedent) structure."""
    return _valid(s, IN if side == ANTECEDENT else OUT)


def validate_sequent(q: Sequent) -> bool:
    return _valid(q.ant, IN) and _valid(q.suc, OUT)


_INFER = {
    (ANTECEDENT, IN, IN): PROD,
    (ANTECEDENT, IN, OUT): RDIFF,
    (ANTECEDENT, OUT, IN): LDIFF,
    (SUCCEDENT, OUT, OUT): COPROD,
    (SUCCEDENT, IN, OUT): UNDER,
    (SUCCEDENT, OUT, IN): OVER,
}


def infer_family(side: str, left_polarity: str, right_polarity: str) -> str:
    """The unique family that may join children of the given polarities on ``side``."""
    try:
        return _INFER[side, left_polarity, right_polarity]
    except KeyError:
        raise NoSuchCase(f"no {side} structure joins ({left_polarity}, {right_polarity})") from None


def erase(x):
    """Replace every pure dot by a solid one (structures and sequents)."""
    if type(x) is Sequent:
        return Sequent(erase(x.ant), erase(x.suc))
    if type(x) is Leaf:
        return x
    return Node(x.family, SOLID, erase(x.left), erase(x.right))


def has_pure(x) -> bool:
    if type(x) is Sequent:
        return has_pure(x.ant) or has_pure(x.suc)
    if type(x) is Leaf:
        return False
    return x.dot == PURE or has_pure(x.left) or has_pure(x.right)


def connectives(f: Formula) -> int:
    if type(f) is Atom:
        return 0
    return 1 + connectives(f.left) + connectives(f.right)


def leaves(s: Structure) -> list[Formula]:
    """Leaf formulas left to right."""
    if type(s) is Leaf:
        return [s.formula]
    return leaves(s.left) + leaves(s.right)


def size(x) -> int:
    """Formula connectives over a structure or sequent (the prover's measure)."""
    if type(x) is Sequent:
        return size(x.ant) + size(x.suc)
    if type(x) is Leaf:
        return connectives(x.formula)
    return size(x.left) + size(x.right)


def count_nodes(x) -> int:
    if type(x) is Sequent:
        return count_nodes(x.ant) + count_nodes(x.suc)
    if type(x) is Leaf:
        return 0
    return 1 + count_nodes(x.left) + count_nodes(x.right)


def atoms_of(x) -> set[str]:
    if type(x) is Sequent:
        return atoms_of(x.ant) | atoms_of(x.suc)
    if type(x) is Leaf:
        return atoms_of(x.formula)
    if type(x) is Atom:
        return {x.name}
    return atoms_of(x.left) | atoms_of(x.right)


def subformulas(f: Formula) -> set[Formula]:
    if type(f) is Atom:
        return {f}
    return {f} | subformulas(f.left) | subformulas(f.right)


# -- printing ---------------------------------------------------------------


def format_formula(f: Formula) -> str:
    if type(f) is Atom:
        return f.name
    return f"({format_formula(f.left)} {SYMBOL[f.conn]} {format_formula(f.right)})"


def _op(family: str, dot: str) -> str:
    d = "." if dot == SOLID else "o"
    return d + SYMBOL[family] + d


def format_structure(s: Structure, top: bool = True) -> str:
    if type(s) is Leaf:
        return format_formula(s.formula)
    body = f"{format_structure(s.left, False)} {_op(s.family, s.dot)} {format_structure(s.right, False)}"
    return body if top else f"({body})"


def format_sequent(q: Sequent) -> str:
    return f"{format_structure(q.ant)} |- {format_structure(q.suc)}"


def show(x) -> str:
    """Print any core value in the text syntax."""
    if type(x) is Sequent:
        return format_sequent(x)
    if type(x) in (Leaf, Node):
        return format_structure(x)
    return format_formula(x)


# -- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<turnstile>\|-)
  | (?P<sop>[.o](?:\*|\\|/|\+|-<|>-)[.o])
  | (?P<fop>\*|\\|/|\+|-<|>-)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<atom>[a-z][a-z0-9']*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "sop" and value[0] != value[-1]:
            raise ParseError(f"mismatched dots in {value!r}", pos)
        if kind == "atom" and value in RESERVED_ATOMS:
            raise ParseError(f"reserved name {value!r}", pos)
        if kind != "ws":
            out.append((kind, value, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", tok[2])
        self.i += 1
        return tok

    def operand(self, allow_struct: bool) -> Structure:
        kind, value, pos = self.peek()
        if kind == "atom":
            self.i += 1
            return Leaf(Atom(value))
        if kind == "lpar":
            self.i += 1
            s = self.binary(allow_struct)
            self.take("rpar")
            return s
        raise ParseError(f"expected atom or '(', found {value or 'end of input'!r}", pos)

    def binary(self, allow_struct: bool) -> Structure:
        left = self.operand(allow_struct)
        kind, value, pos = self.peek()
        if kind == "fop":
            self.i += 1
            right = self.operand(allow_struct)
            if type(left) is not Leaf or type(right) is not Leaf:
                raise ParseError("formula connective applied to a structure", pos)
            return Leaf(Compound(FAMILY_OF_SYMBOL[value], left.formula, right.formula))
        if kind == "sop":
            if not allow_struct:
                raise ParseError(f"structural connective {value!r} inside a formula", pos)
            self.i += 1
            right = self.operand(allow_struct)
            dot = SOLID if value[0] == "." else PURE
            return Node(FAMILY_OF_SYMBOL[value[1:-1]], dot, left, right)
        return left

    def side(self, allow_struct: bool = True) -> Structure:
        return self.binary(allow_struct)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    s = p.side(allow_struct=False)
    p.take("eof")
    return s.formula


def parse_structure(text: str, side: str | None = None) -> Structure:
    p = _Parser(text)
    s = p.side()
    p.take("eof")
    if side is not None:
        _check_polarity(s, IN if side == ANTECEDENT else OUT, side)
    return s


def _check_polarity(s: Structure, want: str, where: str) -> None:
    if type(s) is Leaf:
        return
    if (want == IN) != (s.family in INPUT_FAMILIES):
        raise PolarityError(
            f"{format_structure(s)!r}: {s.family} node cannot form an "
            f"{'input' if want == IN else 'output'} structure ({where})"
        )
    lp, rp = CHILD_POLARITY[s.family]
    _check_polarity(s.left, lp, where)
    _check_polarity(s.right, rp, where)


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    ant = p.side()
    p.take("turnstile")
    suc = p.side()
    p.take("eof")
    _check_polarity(ant, IN, ANTECEDENT)
    _check_polarity(suc, OUT, SUCCEDENT)
    return Sequent(ant, suc)


def make_sequent(ant: Structure, suc: Structure) -> Sequent:
    """Build a sequent, rejecting polarity violations."""
    _check_polarity(ant, IN, ANTECEDENT)
    _check_polarity(suc, OUT, SUCCEDENT)
    return Sequent(ant, suc)


# -- counting and enumeration -------------------------------------------------


def count(x) -> dict[str, int]:
    """Abelian-group image: products and coproducts add, the four slashes subtract.

    Every rule of every logic here preserves ``count(ant) == count(suc)``,
    so an unbalanced sequent is unprovable everywhere.
    """
    acc: dict[str, int] = {}
    _count(x, 1, acc)
    return {k: v for k, v in acc.items() if v}


def _count(x, sign: int, acc: dict) -> None:
    t = type(x)
    if t is Atom:
        acc[x.name] = acc.get(x.name, 0) + sign
        return
    if t is Leaf:
        _count(x.formula, sign, acc)
        return
    if t is Sequent:
        _count(x.ant, sign, acc)
        _count(x.suc, -sign, acc)
        return
    fam = x.conn if t is Compound else x.family
    if fam in (PROD, COPROD):
        _count(x.left, sign, acc)
        _count(x.right, sign, acc)
    elif fam in (UNDER, LDIFF):  # the right side is the result
        _count(x.left, -sign, acc)
        _count(x.right, sign, acc)
    else:  # OVER, RDIFF: the left side is the result
        _count(x.left, sign, acc)
        _count(x.right, -sign, acc)


def balanced(q: Sequent) -> bool:
    return not count(q)


def formulas_of_size(atoms: Sequence[str], k: int, _cache: dict | None = None) -> list[Formula]:
    """Every formula over ``atoms`` with exactly ``k`` connectives, in a fixed order."""
    cache = {} if _cache is None else _cache
    key = ("f", k)
    if key not in cache:
        if k == 0:
            cache[key] = [Atom(a) for a in atoms]
        else:
            out = []
            for fam in FAMILIES:
                for i in range(k):
                    for l in formulas_of_size(atoms, i, cache):
                        for r in formulas_of_size(atoms, k - 1 - i, cache):
                            out.append(Compound(fam, l, r))
            cache[key] = out
    return cache[key]


_FAMILIES_BY_POLARITY = {IN: (PROD, RDIFF, LDIFF), OUT: (COPROD, UNDER, OVER)}


def structures_of_size(atoms: Sequence[str], pol: str, k: int, _cache: dict | None = None) -> list[Structure]:
    """Solid polarity-valid structures whose formula connectives plus nodes total ``k``."""
    cache = {} if _cache is None else _cache
    key = ("s", pol, k)
    if key not in cache:
        out = [Leaf(f) for f in formulas_of_size(atoms, k, cache)]
        for fam in _FAMILIES_BY_POLARITY[pol]:
            lp, rp = CHILD_POLARITY[fam]
            for i in range(k):
                for l in structures_of_size(atoms, lp, i, cache):
                    for r in structures_of_size(atoms, rp, k - 1 - i, cache):
                        out.append(Node(fam, SOLID, l, r))
        cache[key] = out
    return cache[key]


def _canonical(q: Sequent, atoms: Sequence[str]) -> bool:
    """True when atoms first occur in the order given (one sequent per renaming class)."""
    want = 0
    seen = set()
    for name in _atom_stream(q):
        if name not in seen:
            if name != atoms[want]:
                return False
            seen.add(name)
            want += 1
    return True


def _atom_stream(x):
    t = type(x)
    if t is Atom:
        yield x.name
    elif t is Leaf:
        yield from _atom_stream(x.formula)
    elif t is Sequent:
        yield from _atom_stream(x.ant)
        yield from _atom_stream(x.suc)
    else:
        yield from _atom_stream(x.left)
        yield from _atom_stream(x.right)


def enumerate_sequents(atoms: Sequence[str], max_connectives: int, max_leaves: int | None = None) -> Iterator[Sequent]:
    """Polarity-valid solid sequents up to atom renaming.

    Connectives count formula connectives and structural nodes together.
    Order: total size, then antecedent size, then generation order.
    """
    atoms = list(atoms)
    if len(set(atoms)) != len(atoms) or not atoms:
        raise ValueError("atoms must be distinct and non-empty")
    for a in atoms:
        atom(a)
    cache: dict = {}
    for n in range(max_connectives + 1):
        for i in range(n + 1):
            ants = structures_of_size(atoms, IN, i, cache)
            sucs = structures_of_size(atoms, OUT, n - i, cache)
            for x in ants:
                nx = len(leaves(x)) if max_leaves is not None else 0
                if max_leaves is not None and nx >= max_leaves:
                    continue
                for y in sucs:
                    if max_leaves is not None and nx + len(leaves(y)) > max_leaves:
                        continue
                    q = Sequent(x, y)
                    if _canonical(q, atoms):
                        yield q


def rename_atoms(x, mapping: dict[str, str]):
    """Apply an atom renaming to a formula, structure or sequent."""
    t = type(x)
    if t is Atom:
        return Atom(mapping.get(x.name, x.name))
    if t is Compound:
        return Compound(x.conn, rename_atoms(x.left, mapping), rename_atoms(x.right, mapping))
    if t is Leaf:
        return Leaf(rename_atoms(x.formula, mapping))
    if t is Sequent:
        return Sequent(rename_atoms(x.ant, mapping), rename_atoms(x.suc, mapping))
    return Node(x.family, x.dot, rename_atoms(x.left, mapping), rename_atoms(x.right, mapping))
