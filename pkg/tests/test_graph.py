from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minorpoly.errors import DomainError, ResourceError
from minorpoly.graph import (
    ElementaryOp,
    SimpleGraph,
    bounded_induced_family,
    canonical_form,
    clique_number,
    contract_edge,
    delete_edge,
    enumerate_connected_graphs,
    induced,
    is_isomorphic,
    neighborhood,
)

from oracles import brute_clique_number, connected_graphs_atlas, to_nx

# the eight-vertex example graph used throughout
H_EDGES = [(1, 2), (2, 3), (2, 4), (2, 5), (1, 6), (1, 7), (1, 8), (2, 8), (3, 6)]
H = SimpleGraph(range(1, 9), H_EDGES)


@st.composite
def graphs(draw, max_n: int = 7):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph(range(1, n + 1), chosen)


def test_neighborhood_examples():
    assert neighborhood(H, 2) == {1, 3, 4, 5, 8}
    assert neighborhood(SimpleGraph.complete(1), 1) == frozenset()
    c5 = SimpleGraph.cycle(5)
    assert neighborhood(c5, 1) == {2, 5}
    with pytest.raises(DomainError):
        neighborhood(H, 99)


def test_contract_keeps_v_b_and_merges_neighbours():
    c = contract_edge(H, (2, 1))
    assert 2 not in c.vertices
    assert c.neighbors(1) == {3, 4, 5, 6, 7, 8}
    assert contract_edge(SimpleGraph.complete(2), (2, 1)) == SimpleGraph([1])
    c4 = SimpleGraph.cycle(4)
    assert is_isomorphic(contract_edge(c4, (1, 2)), SimpleGraph.complete(3))
    with pytest.raises(DomainError):
        contract_edge(c4, (1, 3))


def test_delete_edge_examples():
    d = delete_edge(H, (2, 1))
    assert d.neighbors(2) == {3, 4, 5, 8}
    p3 = SimpleGraph.path(3)
    assert delete_edge(p3, (2, 3)) == SimpleGraph([1, 2], [(1, 2)])
    assert delete_edge(p3, (2, 3), keep_isolated=True).vertices == {1, 2, 3}
    c4 = SimpleGraph.cycle(4)
    d4 = delete_edge(c4, (1, 2))
    assert d4.vertices == c4.vertices and is_isomorphic(d4, SimpleGraph.path(4))


def test_induced_examples():
    assert induced(H, {1, 2, 4, 7}).edges() == [(1, 2), (1, 7), (2, 4)]
    assert induced(H, {3, 5, 6, 8}).edges() == [(3, 6)]
    assert induced(H, H.vertices) == H
    with pytest.raises(DomainError):
        induced(H, {1, 42})


def test_bounded_induced_family_examples():
    b3 = {1, 2, 3, 6, 8}
    assert bounded_induced_family(H, b3, 3) == [induced(H, b3)]
    fam = bounded_induced_family(H, b3, 2)
    five_cycle = SimpleGraph(b3, [(2, 3), (1, 6), (1, 8), (2, 8), (3, 6)])
    path = SimpleGraph(b3, [(2, 3), (1, 2), (1, 8), (3, 6)])
    assert five_cycle in fam and path in fam
    k3 = SimpleGraph.complete(3)
    assert bounded_induced_family(k3, k3.vertices, 2) == [k3]


@settings(max_examples=60, deadline=None)
@given(graphs(6), st.integers(0, 3), st.data())
def test_bounded_family_members_are_edge_maximal(g, l, data):
    a = data.draw(st.sets(st.sampled_from(g.sorted_vertices()), min_size=1))
    base = induced(g, a)
    fam = bounded_induced_family(g, a, l)
    assert fam
    for member in fam:
        assert member.vertices == base.vertices
        assert set(member.edges()) <= set(base.edges())
        assert member.max_degree() <= l if member.n else True
        for u, v in set(base.edges()) - set(member.edges()):
            assert member.degree(u) >= l or member.degree(v) >= l


def test_clique_number_examples():
    assert clique_number(SimpleGraph.complete(5)) == 5
    assert clique_number(SimpleGraph.cycle(5)) == 2
    assert clique_number(SimpleGraph.petersen()) == 2


@settings(max_examples=80, deadline=None)
@given(graphs(7))
def test_clique_number_matches_brute_force(g):
    assert clique_number(g) == brute_clique_number(g)


@settings(max_examples=80, deadline=None)
@given(graphs(7))
def test_operation_dichotomy_and_symmetry(g):
    for u in g.vertices:
        for v in g.neighbors(u):
            assert u in g.neighbors(v)
    for a, b in g.edges():
        c = contract_edge(g, (a, b))
        assert c.n == g.n - 1
        assert all(x != y for x, y in c.edges())
        d = delete_edge(g, (a, b))
        assert d.n in (g.n, g.n - 1, g.n - 2)
        if g.degree(a) > 1 or g.degree(b) > 1:
            assert d.n in (g.n, g.n - 1)


@settings(max_examples=60, deadline=None)
@given(graphs(7), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(g, rnd):
    labels = g.sorted_vertices()
    shuffled = labels[:]
    rnd.shuffle(shuffled)
    offset = {v: 100 + w for v, w in zip(labels, shuffled)}
    assert canonical_form(g.relabel(offset)) == canonical_form(g)


@settings(max_examples=60, deadline=None)
@given(graphs(6), graphs(6))
def test_isomorphism_agrees_with_networkx(g, h):
    assert is_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_enumeration_counts():
    counts = [0] * 8
    for g in enumerate_connected_graphs(7):
        counts[g.n] += 1
    assert counts[1:] == [1, 1, 2, 6, 21, 112, 853]
    assert len(list(enumerate_connected_graphs(1))) == 1
    assert len(list(enumerate_connected_graphs(3))) == 4
    assert len(list(enumerate_connected_graphs(4))) == 10


def test_enumeration_matches_atlas_up_to_isomorphism():
    ours = list(enumerate_connected_graphs(6))
    atlas = connected_graphs_atlas(6)
    assert len(ours) == len(atlas) == 143
    keys = {canonical_form(g) for g in ours}
    assert len(keys) == len(ours)
    for h in atlas:
        mapping = {v: i + 1 for i, v in enumerate(sorted(h.nodes))}
        g = SimpleGraph(mapping.values(), [(mapping[u], mapping[v]) for u, v in h.edges])
        assert canonical_form(g) in keys
    assert all(g.is_connected() for g in ours)


def test_enumeration_budget():
    with pytest.raises(ResourceError):
        list(enumerate_connected_graphs(6, candidate_cap=10))


def test_elementary_op_round_trip():
    op = ElementaryOp("contract", 2, 1, removed=2)
    assert ElementaryOp.from_json(op.to_json()) == op
    assert op.apply(H) == contract_edge(H, (2, 1))
    with pytest.raises(DomainError):
        ElementaryOp("delete", 1, 2, removed=1)
