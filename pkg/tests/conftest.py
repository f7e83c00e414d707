from hypothesis import strategies as st

from hlg.core import (
    CHILD_POLARITY,
    FAMILIES,
    IN,
    OUT,
    PURE,
    SOLID,
    Atom,
    Compound,
    Leaf,
    Node,
    Sequent,
)

ATOMS = st.sampled_from([Atom("a"), Atom("b"), Atom("np"), Atom("s")])

formulas = st.recursive(
    ATOMS,
    lambda sub: st.builds(Compound, st.sampled_from(FAMILIES), sub, sub),
    max_leaves=6,
)

_BY_POL = {IN: ("prod", "rdiff", "ldiff"), OUT: ("coprod", "under", "over")}


def structures(pol: str, dots=(SOLID,), depth: int = 3):
    """Polarity-valid structures of the given polarity."""
    leaf = st.builds(Leaf, formulas)
    if depth == 0:
        return leaf

    @st.composite
    def node(draw):
        fam = draw(st.sampled_from(_BY_POL[pol]))
        lp, rp = CHILD_POLARITY[fam]
        dot = draw(st.sampled_from(dots))
        return Node(fam, dot, draw(structures(lp, dots, depth - 1)), draw(structures(rp, dots, depth - 1)))

    return st.one_of(leaf, node())


def sequents(dots=(SOLID,), depth: int = 3):
    return st.builds(Sequent, structures(IN, dots, depth), structures(OUT, dots, depth))


any_sequents = sequents(dots=(SOLID, PURE))


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
