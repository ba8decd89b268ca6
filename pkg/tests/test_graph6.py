from __future__ import annotations

import io

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minorpoly.graph import SimpleGraph, enumerate_connected_graphs
from minorpoly.graph6 import Graph6Error, from_graph6, read_graph6_lines, to_graph6

from oracles import to_nx


@st.composite
def graphs(draw, max_n: int = 20):
    n = draw(st.integers(0, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=40)) if pairs else []
    return SimpleGraph(range(1, n + 1), chosen)


def test_petersen_matches_networkx():
    g = SimpleGraph.petersen()
    assert to_graph6(g) == "IheA@GUAo"
    ref = nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert to_graph6(g) == ref


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_round_trip_and_networkx_agreement(g):
    text = to_graph6(g)
    assert from_graph6(text) == g
    assert to_graph6(from_graph6(text)) == text
    assert text == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()


def test_large_order_prefix():
    g = SimpleGraph(range(1, 70), [(1, 69)])
    text = to_graph6(g)
    assert text.startswith("~")
    assert from_graph6(text) == g


def test_header_accepted():
    assert from_graph6(">>graph6<<A_") == SimpleGraph.complete(2)


@pytest.mark.parametrize("bad", ["", "A", "A_ _", "A`", "B\x7f"])
def test_malformed(bad):
    with pytest.raises(Graph6Error):
        from_graph6(bad)


def test_reader_reports_line_numbers():
    stream = io.StringIO("A_\n\nBw\nnot graph6!\n")
    with pytest.raises(Graph6Error) as info:
        list(read_graph6_lines(stream))
    assert info.value.line == 4


def test_corpus_round_trip():
    for g in enumerate_connected_graphs(6):
        assert from_graph6(to_graph6(g)) == g
