import math
from dataclasses import replace
from importlib import resources
from itertools import combinations, product

import pytest

from hlg.calculus import HLG, LG, STRUCTURAL, structural_up
from hlg.core import balanced, enumerate_sequents, parse_sequent
from hlg.grammar import parse_lexicon, recognize
from hlg.proofnet import (
    COTENSOR,
    PURE_TENSOR,
    TENSOR,
    CombinatorialMap,
    MalformedMap,
    atom_occurrences,
    boundary_order,
    check_planarity,
    crossings,
    genus,
    linked_derivations,
    linkings,
    planar_linking,
    structure_genus,
    to_dot,
    to_map,
    to_proof_structure,
    verdict,
)
from hlg.prover import erase_derivation, prove

LIFT = parse_sequent("(s -< s) >- (np \\ s) |- np \\ s")


def drawn(points, edges):
    """Rotation system read off a straight-line drawing, clockwise."""
    around = {i: [] for i in range(len(points))}
    for e, (u, v) in enumerate(edges):
        around[u].append((v, 2 * e))
        around[v].append((u, 2 * e + 1))
    rotation = []
    for u, items in around.items():
        x0, y0 = points[u]
        items.sort(key=lambda t: -math.atan2(points[t[0]][1] - y0, points[t[0]][0] - x0))
        rotation.append([d for _, d in items])
    return CombinatorialMap(rotation)


def test_genus_of_small_maps():
    assert genus(drawn([(0, 0), (1, 0)], [(0, 1)])) == 0
    tetra = drawn([(0, 0), (4, 0), (2, 4), (2, 1)], list(combinations(range(4), 2)))
    assert genus(tetra) == 0 and crossings(tetra) == 0
    pentagon = [(math.cos(2 * math.pi * k / 5), math.sin(2 * math.pi * k / 5)) for k in range(5)]
    k5 = drawn(pentagon, list(combinations(range(5), 2)))
    assert genus(k5) >= 1 and crossings(k5) >= 1


def test_malformed_maps_are_rejected():
    with pytest.raises(MalformedMap):
        CombinatorialMap([[0, 1], [1]])
    with pytest.raises(MalformedMap):
        CombinatorialMap([[0, 1, 2]])


def test_identity_axiom_structure():
    ps = to_proof_structure(prove(parse_sequent("a |- a"), LG).derivation)
    assert len(ps.vertices) == 1 and not ps.links
    assert check_planarity(ps)


def test_application_gives_one_pure_tensor_link():
    d = prove(parse_sequent("(a / b) o*o b |- a"), HLG).derivation
    ps = to_proof_structure(d)
    assert len(ps.vertices) == 3
    assert ps.link_counts() == {TENSOR: 0, COTENSOR: 0, PURE_TENSOR: 1}
    assert check_planarity(ps)
    assert ps.retyped().link_counts()[TENSOR] == 1
    erased = to_proof_structure(erase_derivation(d))
    assert erased.link_counts()[TENSOR] == 1 and check_planarity(erased)


def test_lifted_verb_structure_is_not_planar():
    ps = to_proof_structure(prove(LIFT, LG).derivation)
    v = verdict(ps)
    assert not v["planar"] and v["genus"] >= 1
    assert v["crossings"] == 1
    assert v["links"][COTENSOR] >= 1 and v["links"][TENSOR] >= 1


def test_lifted_verb_has_no_planar_linking():
    assert planar_linking(LIFT, LG) is None
    assert len(list(linked_derivations(LIFT, LG))) >= 1


def _orientations(ps):
    """Every way of flipping the cyclic order of individual links."""
    for flips in product((False, True), repeat=len(ps.links)):
        links = [
            replace(lk, rotation=(lk.rotation[0], lk.rotation[2], lk.rotation[1])) if f else lk
            for lk, f in zip(ps.links, flips)
        ]
        yield replace(ps, links=links)


def test_cross_serial_structure_crosses_under_every_orientation():
    text = resources.files("hlg").joinpath("data").joinpath("dutch.lex").read_text(encoding="utf-8")
    w = recognize(parse_lexicon(text), "ik cecilia dn zag voeren".split(), HLG)
    for d in (w.derivation, erase_derivation(w.derivation)):
        ps = to_proof_structure(d)
        assert len(ps.links) == 6
        assert min(structure_genus(p) for p in _orientations(ps)) == 1


def test_boundary_follows_the_sequent():
    q = parse_sequent("(a .*. ((b .+. c) .>-. d)) |- e")
    assert [f.name for f in boundary_order(q)] == ["a", "c", "b", "d", "e"]


def test_boundary_is_display_invariant():
    def ring(q):
        names = [str(f) for f in boundary_order(q)]
        k = names.index(min(names))
        return names[k:] + names[:k]

    q = parse_sequent("a .*. (b .>-. c) |- d .+. e")
    for rule in sorted(STRUCTURAL):
        if rule.startswith(("Rp", "Drp", "G1", "G3")) and not rule.endswith(("L", "R")):
            for p in structural_up(rule)(q):
                assert ring(p) == ring(q), rule


def test_linkings_pair_polarities():
    q = parse_sequent("a .*. (a \\ a) |- a")
    occ = atom_occurrences(q)
    assert [p for _, p in occ] == ["in", "out", "in", "out"]
    assert len(linkings(q)) == 2
    assert linkings(parse_sequent("a |- b")) == []


def test_dot_output_mentions_every_link():
    ps = to_proof_structure(prove(LIFT, LG).derivation)
    text = to_dot(ps)
    assert text.startswith("digraph") and text.rstrip().endswith("}")
    assert text.count('type="') == len(ps.links)


def test_map_has_one_edge_per_vertex():
    ps = to_proof_structure(prove(LIFT, LG).derivation)
    m = to_map(ps)
    assert m.n_darts == 2 * len(ps.vertices)
    assert len(m.rotation) == len(ps.links) + 1


def test_planar_iff_hlg_on_three_connectives():
    rows = [q for q in enumerate_sequents(["a", "b"], 3) if balanced(q)]
    for q in rows:
        if not prove(q, LG).provable:
            continue
        assert (planar_linking(q, LG) is not None) == prove(q, HLG).provable, q
