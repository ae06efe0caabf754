"""Graph model, the .eg text format and its JSON twin."""

import os

import pytest

from epigraph.graph import (
    dump_eg,
    eg_from_json,
    eg_to_json,
    load_eg,
    parse_eg,
    validate_graph,
)
from epigraph.lang import RestrictedValueSet

PI3 = RestrictedValueSet.parse("0,0.5,1")

SIMPLE = """
arguments:
A
B

edges:
B -> A [-]

constraints:
p(B) > 0.5 -> p(A) < 0.5
"""


def test_parse_simple():
    eg = parse_eg(SIMPLE)
    assert eg.args == ("A", "B")
    assert eg.graph.arcs == frozenset({("B", "A")})
    assert eg.graph.labels[("B", "A")] == frozenset({"-"})
    assert len(eg.constraints) == 1


def test_roundtrip_text_and_json():
    eg = parse_eg(SIMPLE)
    assert parse_eg(dump_eg(eg)) == eg
    assert eg_from_json(eg_to_json(eg)) == eg


def test_load_party(graphs_dir):
    eg = load_eg(os.path.join(graphs_dir, "party.eg"))
    assert len(eg.args) == 6
    assert eg.graph.parents("A") == {"B", "C", "D"}
    assert eg.graph.parents("B", "-") == {"E"}
    assert validate_graph(eg) == []


def test_load_dental(graphs_dir):
    eg = load_eg(os.path.join(graphs_dir, "dental.eg"))
    assert len(eg.args) == 9
    assert len(eg.graph.arcs) == 8
    assert len(eg.constraints) == 5


def test_pc_line(graphs_dir):
    eg = load_eg(os.path.join(graphs_dir, "cafx.eg"))
    assert eg.pc is not None
    assert eg.constraints == ()


def test_direct_rels():
    eg = parse_eg(SIMPLE)
    assert eg.graph.direct_rels("B") == {"A"}
    assert eg.graph.direct_rels("A") == {"B"}


def test_connected_pairs(graphs_dir):
    eg = load_eg(os.path.join(graphs_dir, "coverage1.eg"))
    pairs = eg.graph.connected_pairs()
    # every argument reaches every other through undirected paths
    assert len(pairs) == 12


def test_validate_flags_problems():
    eg = parse_eg("""
arguments:
A

edges:
A -> A []

constraints:
p(#t) = 1
""")
    issues = validate_graph(eg)
    assert any("no label" in i for i in issues)
    assert any("self-loop" in i for i in issues)
    assert any("no arguments" in i for i in issues)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="line 3"):
        parse_eg("arguments:\nA\nA -> B [-]\n")
    with pytest.raises(ValueError, match="unknown argument"):
        parse_eg("arguments:\nA\n\nedges:\nA -> B [-]\n")
