"""Proof structures of cut-free derivations and their planarity.

A proof structure has one vertex per formula occurrence (the two sides of
an axiom are identified) and one three-port link per connective the
derivation consumes: Rewrite steps give cotensor links, Mon steps give
tensor links, or pure_tensor links when the structural node they consume
descends from a pure node of the end sequent.

Each link has a fixed cyclic order of its ports. Writing ``v`` for the main
formula and ``A``, ``B`` for its written-left and written-right immediate
subformulas, the order is ``(v, A, B)`` when ``v`` sits in output position
and ``(v, B, A)`` in input position. The end sequent closes the picture
with a boundary cycle through the hypotheses left to right and then the
conclusions right to left. Output substructures nested in either side are
also read right to left, which keeps the cycle invariant under display
steps. The structure is planar when the combinatorial map made of links,
boundary and vertex-edges has genus 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb
from typing import NamedTuple

from . import calculus
from .calculus import AX, CUT, LG, MON, REWRITE, STRUCTURAL, Logic, RuleInstance
from .core import (
    CHILD_POLARITY,
    Atom,
    IN,
    INPUT_FAMILIES,
    OUT,
    PURE,
    SOLID,
    Compound,
    Formula,
    Leaf,
    Node,
    Sequent,
    format_formula,
    rename_atoms,
)
from .prover import UNLIMITED, Derivation, Prover, SearchLimits

TENSOR, COTENSOR, PURE_TENSOR = "tensor", "cotensor", "pure_tensor"


class Occ(NamedTuple):
    """A labelled formula occurrence; stands in for a formula inside leaves."""

    id: int
    formula: Formula


@dataclass(frozen=True)
class Link:
    type: str
    family: str
    main: int
    premises: tuple[int, ...]
    conclusions: tuple[int, ...]
    rotation: tuple[int, int, int]


@dataclass
class ProofStructure:
    vertices: dict[int, Formula]
    links: list[Link]
    hypotheses: list[int]
    conclusions: list[int]
    boundary: list[int] = field(default_factory=list)

    def link_counts(self) -> dict[str, int]:
        out = {TENSOR: 0, COTENSOR: 0, PURE_TENSOR: 0}
        for lk in self.links:
            out[lk.type] += 1
        return out

    def retyped(self) -> "ProofStructure":
        """Copy with every pure_tensor link turned into a tensor link."""
        links = [
            Link(TENSOR, lk.family, lk.main, lk.premises, lk.conclusions, lk.rotation)
            if lk.type == PURE_TENSOR else lk
            for lk in self.links
        ]
        return ProofStructure(dict(self.vertices), links, list(self.hypotheses), list(self.conclusions),
                              list(self.boundary))


class MalformedMap(ValueError):
    pass


# -- combinatorial maps -------------------------------------------------------


@dataclass
class CombinatorialMap:
    """Darts ``0..2E-1``; dart ``d`` and ``d ^ 1`` form one edge.

    ``rotation[n]`` lists the darts around node ``n`` in cyclic order.
    """

    rotation: list[list[int]]
    n_darts: int = field(default=-1)

    def __post_init__(self):
        if self.n_darts < 0:
            self.n_darts = sum(len(r) for r in self.rotation)
        self.check()

    def check(self) -> None:
        seen = sorted(d for r in self.rotation for d in r)
        if self.n_darts % 2 or seen != list(range(self.n_darts)):
            raise MalformedMap("rotations must use every dart 0..2E-1 exactly once")

    def sigma(self) -> list[int]:
        nxt = [0] * self.n_darts
        for r in self.rotation:
            for i, d in enumerate(r):
                nxt[d] = r[(i + 1) % len(r)]
        return nxt

    def node_of(self) -> list[int]:
        owner = [0] * self.n_darts
        for n, r in enumerate(self.rotation):
            for d in r:
                owner[d] = n
        return owner

    def faces(self) -> list[list[int]]:
        sig = self.sigma()
        seen = [False] * self.n_darts
        out = []
        for start in range(self.n_darts):
            if seen[start]:
                continue
            face = []
            d = start
            while not seen[d]:
                seen[d] = True
                face.append(d)
                d = sig[d ^ 1]
            out.append(face)
        return out

    def components(self) -> list[set[int]]:
        """Node sets of the connected components that carry at least one edge."""
        owner = self.node_of()
        parent = list(range(len(self.rotation)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in range(0, self.n_darts, 2):
            a, b = find(owner[d]), find(owner[d ^ 1])
            if a != b:
                parent[a] = b
        comps: dict[int, set[int]] = {}
        for n, r in enumerate(self.rotation):
            if r:
                comps.setdefault(find(n), set()).add(n)
        return list(comps.values())


def genus(m: CombinatorialMap) -> int:
    """Sum over components of the Euler genus ``(2 - V + E - F) / 2``."""
    owner = m.node_of()
    total = 0
    face_comp: dict[int, int] = {}
    comps = m.components()
    comp_of = {n: i for i, c in enumerate(comps) for n in c}
    for f in m.faces():
        c = comp_of[owner[f[0]]]
        face_comp[c] = face_comp.get(c, 0) + 1
    for i, c in enumerate(comps):
        v = len(c)
        e = sum(len(m.rotation[n]) for n in c) // 2
        twice = 2 - v + e - face_comp.get(i, 0)
        if twice < 0 or twice % 2:
            raise MalformedMap(f"Euler characteristic inconsistent in component {i}")
        total += twice // 2
    return total


def _interleaved(m: CombinatorialMap, sig: list[int], start: int, tree: set[int]) -> list[tuple[int, int]]:
    """Crossing chord pairs of the one-node map left after contracting ``tree``."""
    order = []
    d = start
    while True:
        if (d >> 1) in tree:
            d = sig[d ^ 1]
        else:
            order.append(d >> 1)
            d = sig[d]
        if d == start:
            break
    pos: dict[int, list[int]] = {}
    for i, e in enumerate(order):
        pos.setdefault(e, []).append(i)
    chords = sorted((e, p) for e, p in pos.items() if len(p) == 2)
    out = []
    for (e1, (a1, b1)), (e2, (a2, b2)) in combinations(chords, 2):
        if (a1 < a2 < b1) != (a1 < b2 < b1):
            out.append((e1, e2))
    return out


def _spanning_trees(m: CombinatorialMap, comp: set[int], owner: list[int], cap: int):
    """All spanning trees of a component when few enough, else BFS trees from every root."""
    edges = sorted({d >> 1 for n in comp for d in m.rotation[n]})
    k = len(comp) - 1
    if comb(len(edges), k) <= cap:
        for subset in combinations(edges, k):
            parent = {n: n for n in comp}

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            ok = True
            for e in subset:
                a, b = find(owner[2 * e]), find(owner[2 * e + 1])
                if a == b:
                    ok = False
                    break
                parent[a] = b
            if ok:
                yield set(subset)
        return
    for root in sorted(comp):
        tree, seen, frontier = set(), {root}, [root]
        while frontier:
            nxt = []
            for n in frontier:
                for d in m.rotation[n]:
                    other = owner[d ^ 1]
                    if other not in seen:
                        seen.add(other)
                        tree.add(d >> 1)
                        nxt.append(other)
            frontier = nxt
        yield tree


def knots(m: CombinatorialMap, cap: int = 20000) -> list[tuple[int, int]]:
    """Pairs of edges that cross in a best contraction of the map.

    Each component is contracted along the spanning tree leaving the fewest
    interleaved chords (exhaustive when affordable). Empty exactly when the
    map is planar; otherwise a diagnostic only.
    """
    owner = m.node_of()
    sig = m.sigma()
    found = []
    for comp in m.components():
        start = next((m.rotation[n][0] for n in sorted(comp) if m.rotation[n]), None)
        if start is None:
            continue
        best = None
        for tree in _spanning_trees(m, comp, owner, cap):
            c = _interleaved(m, sig, start, tree)
            if best is None or len(c) < len(best):
                best = c
                if not c:
                    break
        found += best or []
    return found


def crossings(m: CombinatorialMap) -> int:
    return len(knots(m))


# -- building structures ----------------------------------------------------------


class _Builder:
    def __init__(self):
        self.next_id = 0
        self.formula: dict[int, Formula] = {}
        self.polarity: dict[int, str] = {}
        self.parent_link: dict[int, int] = {}
        self.uf: dict[int, int] = {}
        self.links: list[tuple] = []  # (type, family, main, left, right)
        self.node_origin: dict[Node, str] = {}

    def occ(self, f: Formula, pol: str) -> Occ:
        i = self.next_id
        self.next_id += 1
        self.formula[i] = f
        self.polarity[i] = pol
        self.uf[i] = i
        return Occ(i, f)

    def find(self, i: int) -> int:
        while self.uf[i] != i:
            self.uf[i] = self.uf[self.uf[i]]
            i = self.uf[i]
        return i

    def label(self, s, pol: str):
        if type(s) is Leaf:
            return Leaf(self.occ(s.formula, pol))
        lp, rp = CHILD_POLARITY[s.family]
        out = Node(s.family, s.dot, self.label(s.left, lp), self.label(s.right, rp))
        self.node_origin[out] = s.dot
        return out


def _strip(s):
    if type(s) is Leaf:
        return Leaf(s.formula.formula)
    return Node(s.family, s.dot, _strip(s.left), _strip(s.right))


def _strip_seq(q: Sequent) -> Sequent:
    return Sequent(_strip(q.ant), _strip(q.suc))


def _root_nodes(q: Sequent) -> list[Node]:
    return [x for x in (q.ant, q.suc) if type(x) is Node]


def _all_nodes(s, acc: set):
    if type(s) is Node:
        acc.add(s)
        _all_nodes(s.left, acc)
        _all_nodes(s.right, acc)


def _carry_origins(b: _Builder, rule: str, concl: Sequent, prem: Sequent) -> None:
    """Map node provenance from a labelled conclusion onto its labelled premise."""
    before, after = set(), set()
    for side in concl:
        _all_nodes(side, before)
    for side in prem:
        _all_nodes(side, after)
    gone = [n for n in _root_nodes(concl) if n not in after]
    new = [n for n in _root_nodes(prem) if n not in before]
    # Removed nodes may sit one level down for display rules; collect them too.
    gone += [n for n in before - after if n not in gone]
    new += [n for n in after - before if n not in new]
    if len(gone) != len(new):
        raise ValueError(f"cannot track structural nodes through {rule}")
    if len(gone) == 2:
        # Grishin steps: match by dot when dots differ, otherwise by side.
        g_dots = [n.dot for n in gone]
        n_dots = [n.dot for n in new]
        if g_dots[0] != g_dots[1] and sorted(g_dots) == sorted(n_dots):
            pairs = [(g, next(n for n in new if n.dot == g.dot)) for g in gone]
        else:
            pairs = list(zip(gone, new))
    else:
        pairs = list(zip(gone, new))
    for g, n in pairs:
        b.node_origin[n] = b.node_origin.get(g, g.dot)


def to_proof_structure(d: Derivation) -> ProofStructure:
    """Proof structure of a checked cut-free derivation."""
    b = _Builder()
    end = d.conclusion
    root = Sequent(b.label(end.ant, IN), b.label(end.suc, OUT))

    def walk(node: Derivation, q: Sequent):
        rule = node.rule
        if rule == CUT:
            raise ValueError("proof structures are built from cut-free derivations only")
        if rule == AX:
            p, c = q.ant.formula, q.suc.formula
            b.uf[b.find(c.id)] = b.find(p.id)
            return
        if rule in REWRITE:
            fam = rule[rule.index("(") + 1:-1]
            v = (q.ant if fam in INPUT_FAMILIES else q.suc).formula
            lp, rp = CHILD_POLARITY[fam]
            a, c = b.occ(v.formula.left, lp), b.occ(v.formula.right, rp)
            st = Node(fam, SOLID, Leaf(a), Leaf(c))
            b.node_origin[st] = SOLID
            b.links.append((COTENSOR, fam, v.id, a.id, c.id))
            prem = Sequent(st, q.suc) if fam in INPUT_FAMILIES else Sequent(q.ant, st)
            walk(node.children[0], prem)
            return
        if rule in MON:
            fam = rule[rule.index("(") + 1:-1]
            st, fl = (q.ant, q.suc) if fam in INPUT_FAMILIES else (q.suc, q.ant)
            v = fl.formula
            lp, rp = CHILD_POLARITY[fam]
            # subformula polarity: a structure child in input position faces a succedent formula
            a = b.occ(v.formula.left, OUT if lp == IN else IN)
            c = b.occ(v.formula.right, OUT if rp == IN else IN)
            kind = PURE_TENSOR if b.node_origin.get(st, SOLID) == PURE else TENSOR
            b.links.append((kind, fam, v.id, a.id, c.id))
            p1 = Sequent(st.left, Leaf(a)) if lp == IN else Sequent(Leaf(a), st.left)
            p2 = Sequent(st.right, Leaf(c)) if rp == IN else Sequent(Leaf(c), st.right)
            walk(node.children[0], p1)
            walk(node.children[1], p2)
            return
        if rule in STRUCTURAL:
            target = node.instance.premises[0]
            for cand in calculus.structural_up(rule)(q):
                if _strip_seq(cand) == target:
                    _carry_origins(b, rule, q, cand)
                    walk(node.children[0], cand)
                    return
            raise ValueError(f"derivation step {rule} does not match its conclusion")
        raise ValueError(f"unknown rule {rule}")

    walk(d, root)
    return _assemble(b, root)


def _assemble(b: _Builder, root: Sequent) -> ProofStructure:
    hyps = [b.find(o.id) for o in _leaf_occs(root.ant)]
    concls = [b.find(o.id) for o in _leaf_occs(root.suc)]
    links = []
    for kind, fam, main, left, right in b.links:
        m, l, r = b.find(main), b.find(left), b.find(right)
        pol_main = b.polarity[main]
        prem, conc = [], []
        for port, occ in ((m, main), (l, left), (r, right)):
            is_main = occ == main
            pol = b.polarity[occ]
            if (is_main and pol == IN) or (not is_main and pol == OUT):
                prem.append(port)
            else:
                conc.append(port)
        rot = (m, l, r) if pol_main == OUT else (m, r, l)
        links.append(Link(kind, fam, m, tuple(prem), tuple(conc), rot))
    used = set(hyps) | set(concls)
    for lk in links:
        used.update(lk.rotation)
    vertices = {v: b.formula[v] for v in sorted(used)}
    ring = [b.find(o.id) for o in boundary_order(root)]
    return ProofStructure(vertices, links, hyps, concls, ring)


def _read(s, pol: str) -> list:
    """Leaves of ``s`` in boundary order; output structures read right to left."""
    if type(s) is Leaf:
        return [s.formula]
    lp, rp = CHILD_POLARITY[s.family]
    if pol == IN:
        return _read(s.left, lp) + _read(s.right, rp)
    return _read(s.right, rp) + _read(s.left, lp)


def boundary_order(q: Sequent) -> list:
    """Clockwise order of the leaves of ``q`` around the disk.

    Display steps and the Grishin rules G1/G3 preserve this cyclic order;
    G2/G4 permute it.
    """
    return _read(q.ant, IN) + _read(q.suc, OUT)


def _leaf_occs(s) -> list[Occ]:
    if type(s) is Leaf:
        return [s.formula]
    return _leaf_occs(s.left) + _leaf_occs(s.right)


# -- planarity ------------------------------------------------------------------


def to_map(ps: ProofStructure) -> CombinatorialMap:
    """Nodes are the links plus one boundary node; each vertex becomes an edge.

    Every vertex has exactly two attachments (boundary ports count), so
    vertex ``v`` yields darts ``2k`` and ``2k+1`` for its ``k``-th position.
    """
    ends: dict[int, list[tuple[int, int]]] = {v: [] for v in ps.vertices}
    boundary = len(ps.links)
    rotation: list[list[int]] = [[] for _ in range(len(ps.links) + 1)]
    # Seen from the outer node the clockwise boundary order is reversed.
    ring = ps.boundary or ps.hypotheses + ps.conclusions[::-1]
    for pos, v in enumerate(reversed(ring)):
        ends[v].append((boundary, pos))
    for k, lk in enumerate(ps.links):
        for pos, v in enumerate(lk.rotation):
            ends[v].append((k, pos))
    index = {v: i for i, v in enumerate(ps.vertices)}
    placed: list[list[tuple[int, int]]] = [[] for _ in rotation]
    for v, e in ends.items():
        if len(e) != 2:
            raise MalformedMap(f"vertex {v} ({format_formula(ps.vertices[v])}) has {len(e)} attachments")
        for j, (n, pos) in enumerate(e):
            placed[n].append((pos, 2 * index[v] + j))
    for n, items in enumerate(placed):
        rotation[n] = [d for _, d in sorted(items)]
    return CombinatorialMap(rotation, 2 * len(ps.vertices))


def structure_genus(ps: ProofStructure) -> int:
    return genus(to_map(ps))


def check_planarity(ps: ProofStructure) -> bool:
    return structure_genus(ps) == 0


def verdict(ps: ProofStructure) -> dict:
    m = to_map(ps)
    g = genus(m)
    return {
        "planar": g == 0,
        "genus": g,
        "crossings": crossings(m),
        "vertices": len(ps.vertices),
        "links": ps.link_counts(),
    }


def to_dot(ps: ProofStructure, name: str = "proof_structure") -> str:
    """Graphviz description: formula vertices, typed link nodes, rotations as labels."""
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for v, f in ps.vertices.items():
        role = []
        if v in ps.hypotheses:
            role.append(f"h{ps.hypotheses.index(v)}")
        if v in ps.conclusions:
            role.append(f"c{ps.conclusions.index(v)}")
        tag = f" [{','.join(role)}]" if role else ""
        label = (format_formula(f) + tag).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  v{v} [shape=plaintext, label="{label}"];')
    shapes = {TENSOR: "circle", COTENSOR: "doublecircle", PURE_TENSOR: "point"}
    for k, lk in enumerate(ps.links):
        rot = " ".join(f"v{x}" for x in lk.rotation)
        lines.append(f'  l{k} [shape={shapes[lk.type]}, label="{lk.family}", type="{lk.type}", rotation="{rot}"];')
        for p in lk.premises:
            lines.append(f"  v{p} -> l{k};")
        for c in lk.conclusions:
            lines.append(f"  l{k} -> v{c};")
    lines.append("}")
    return "\n".join(lines)


# -- axiom linkings -------------------------------------------------------------


def _formula_atoms(f: Formula, pol: str, acc: list) -> None:
    if type(f) is not Compound:
        acc.append((f.name, pol))
        return
    lp, rp = CHILD_POLARITY[f.conn]
    family_pol = IN if f.conn in INPUT_FAMILIES else OUT
    if pol != family_pol:
        lp, rp = (OUT if lp == IN else IN), (OUT if rp == IN else IN)
    _formula_atoms(f.left, lp, acc)
    _formula_atoms(f.right, rp, acc)


def _structure_atoms(s, pol: str, acc: list) -> None:
    if type(s) is Leaf:
        _formula_atoms(s.formula, pol, acc)
        return
    lp, rp = CHILD_POLARITY[s.family]
    _structure_atoms(s.left, lp, acc)
    _structure_atoms(s.right, rp, acc)


def atom_occurrences(q: Sequent) -> list[tuple[str, str]]:
    """(atom, polarity) for every atom occurrence of ``q``, left to right."""
    acc: list = []
    _structure_atoms(q.ant, IN, acc)
    _structure_atoms(q.suc, OUT, acc)
    return acc


def linkings(q: Sequent) -> list[tuple[tuple[int, int], ...]]:
    """Every pairing of input with output occurrences of the same atom.

    A pair ``(i, j)`` joins occurrence ``i`` (input) to ``j`` (output);
    indices follow :func:`atom_occurrences`.
    """
    occ = atom_occurrences(q)
    groups = []
    for name in sorted({a for a, _ in occ}):
        ins = [i for i, (a, p) in enumerate(occ) if a == name and p == IN]
        outs = [i for i, (a, p) in enumerate(occ) if a == name and p == OUT]
        if len(ins) != len(outs):
            return []
        groups.append([tuple(zip(ins, perm)) for perm in permutations(outs)])
    return [tuple(sorted(sum(choice, ()))) for choice in product(*groups)]


def _relabel(x, names: list[str], pos: list[int]):
    t = type(x)
    if t is Atom:
        i = pos[0]
        pos[0] += 1
        return Atom(names[i])
    if t is Compound:
        return Compound(x.conn, _relabel(x.left, names, pos), _relabel(x.right, names, pos))
    if t is Leaf:
        return Leaf(_relabel(x.formula, names, pos))
    if t is Sequent:
        return Sequent(_relabel(x.ant, names, pos), _relabel(x.suc, names, pos))
    return Node(x.family, x.dot, _relabel(x.left, names, pos), _relabel(x.right, names, pos))


def _rename_derivation(d: Derivation, mapping: dict[str, str]) -> Derivation:
    kids = tuple(_rename_derivation(c, mapping) for c in d.children)
    inst = RuleInstance(d.rule, rename_atoms(d.conclusion, mapping), tuple(k.conclusion for k in kids))
    return Derivation(inst, kids)


def linked_derivations(q: Sequent, logic: Logic = LG, limits: SearchLimits = UNLIMITED):
    """One derivation of ``q`` for every axiom linking that ``logic`` can realize.

    Each linking is forced by giving its pairs fresh atom names; a derivation
    of the renamed sequent maps back to one of ``q`` with exactly that
    linking. Yields ``(linking, derivation)``; raises ValueError when a
    search hits its limits, since a missing linking would bias the verdict.
    """
    occ = atom_occurrences(q)
    prover = Prover(logic, limits)
    for link in linkings(q):
        names = [""] * len(occ)
        back = {}
        for k, (i, j) in enumerate(link):
            fresh = f"x{k}"
            names[i] = names[j] = fresh
            back[fresh] = occ[i][0]
        r = prover.prove(_relabel(q, names, [0]))
        if r.status == "resource_exceeded":
            raise ValueError(f"search limit {r.limit} reached while linking {link}")
        if r.provable:
            yield link, _rename_derivation(r.derivation, back)


def planar_linking(q: Sequent, logic: Logic = LG, limits: SearchLimits = UNLIMITED):
    """First realizable linking whose proof structure is planar, or None."""
    for link, d in linked_derivations(q, logic, limits):
        if check_planarity(to_proof_structure(d)):
            return link, d
    return None
