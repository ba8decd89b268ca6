from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minorpoly.coloring import (
    ColorAssignment,
    ColorSet,
    brooks_bound_check,
    chromatic_number,
    extend_pendant_coloring,
    find_coloring,
    is_proper,
    recolor,
    transfer_contraction_coloring,
)
from minorpoly.errors import DomainError
from minorpoly.graph import SimpleGraph, contract_edge, delete_edge, enumerate_connected_graphs

from oracles import brute_chromatic_number, from_nx

H = SimpleGraph(range(1, 9), [(1, 2), (2, 3), (2, 4), (2, 5), (1, 6), (1, 7), (1, 8), (2, 8), (3, 6)])


def std(t: int) -> ColorSet:
    return ColorSet.standard(t, 11)


def test_colorsets():
    assert std(3).values == (1, 2, 3)
    assert ColorSet.shifted(3, 5, 7).values == (1, 2, 5)
    assert ColorSet.shifted(2, 4, 5).complement() == (0, 2, 3)
    with pytest.raises(DomainError):
        ColorSet.standard(5, 5)
    with pytest.raises(DomainError):
        ColorSet.shifted(3, 3, 7)
    with pytest.raises(DomainError):
        ColorSet.standard(2, 9)


def test_is_proper_examples():
    k2 = SimpleGraph.complete(2)
    assert is_proper(k2, {1: 1, 2: 2})
    assert not is_proper(k2, {1: 1, 2: 1})
    assert is_proper(SimpleGraph.cycle(5), dict(zip(range(1, 6), [1, 2, 1, 2, 3])))
    with pytest.raises(DomainError):
        is_proper(k2, {1: 1})


def test_find_coloring_examples():
    k3 = SimpleGraph.complete(3)
    assert find_coloring(k3, std(3)) is not None
    assert find_coloring(k3, std(2)) is None
    c = find_coloring(SimpleGraph.petersen(), std(3))
    assert c is not None and is_proper(SimpleGraph.petersen(), c)


def test_chromatic_examples():
    for t in range(1, 6):
        assert chromatic_number(SimpleGraph.complete(t)) == t
    assert chromatic_number(SimpleGraph.cycle(5)) == 3
    assert chromatic_number(SimpleGraph.petersen()) == 3


def test_chromatic_number_matches_brute_force_n6():
    for g in enumerate_connected_graphs(6):
        chi = chromatic_number(g)
        assert chi == brute_chromatic_number(g)
        assert chi <= g.max_degree() + 1
        for t in range(1, g.n + 1):
            assert (find_coloring(g, ColorSet.standard(t, 7 if t < 7 else 11)) is not None) == (t >= chi)


def test_transfer_examples():
    k2 = SimpleGraph.complete(2)
    out = transfer_contraction_coloring(k2, (2, 1), ColorAssignment({1: 1}, std(1)))
    assert out.colors == {1: 1, 2: 1}
    c = find_coloring(contract_edge(H, (2, 1)), std(4))
    lifted = transfer_contraction_coloring(H, (2, 1), c)
    assert is_proper(delete_edge(H, (2, 1), keep_isolated=True), lifted)
    p3 = SimpleGraph.path(3)
    c = ColorAssignment({1: 1, 3: 2}, std(2))
    lifted = transfer_contraction_coloring(p3, (2, 3), c)
    assert is_proper(delete_edge(p3, (2, 3), keep_isolated=True), lifted)
    with pytest.raises(DomainError):
        transfer_contraction_coloring(k2, (2, 1), ColorAssignment({2: 1}, std(1)))


def test_transfer_exhaustive_n6():
    for g in enumerate_connected_graphs(6):
        for a, b in g.edges():
            for e in ((a, b), (b, a)):
                c = find_coloring(contract_edge(g, e), std(g.n))
                out = transfer_contraction_coloring(g, e, c)
                assert is_proper(delete_edge(g, e, keep_isolated=True), out)


def test_extend_pendant_examples():
    k2 = SimpleGraph.complete(2)
    out = extend_pendant_coloring(k2, 2, ColorAssignment({1: 1}, std(2)))
    assert out.colors == {1: 1, 2: 2}
    star = SimpleGraph.star(3)
    center = next(v for v in star.vertices if star.degree(v) == 3)
    leaf = next(v for v in star.vertices if star.degree(v) == 1)
    rest = {v: 1 for v in star.vertices if v not in (leaf,)}
    rest[center] = 2
    out = extend_pendant_coloring(star, leaf, ColorAssignment(rest, std(2)))
    assert out.colors[leaf] == 1 and is_proper(star, out)
    with pytest.raises(DomainError):
        extend_pendant_coloring(k2, 2, ColorAssignment({1: 1}, std(1)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_extend_random_tree(seed):
    tree = from_nx(nx.random_labeled_tree(6, seed=seed))
    leaf = min(v for v in tree.vertices if tree.degree(v) == 1)
    rest = SimpleGraph(tree.vertices - {leaf}, [e for e in tree.edges() if leaf not in e])
    partial = find_coloring(rest, std(2))
    out = extend_pendant_coloring(tree, leaf, partial)
    assert is_proper(tree, out)


def test_brooks_examples():
    assert brooks_bound_check(SimpleGraph.complete(4))
    assert brooks_bound_check(SimpleGraph.cycle(5))
    assert brooks_bound_check(SimpleGraph.petersen())
    with pytest.raises(DomainError):
        brooks_bound_check(SimpleGraph([1, 2]))


def test_recolor_beta_to_t():
    rng = random.Random(7)
    for g in enumerate_connected_graphs(5):
        t = chromatic_number(g)
        beta = rng.choice([b for b in range(t + 1, 11)])
        shifted = ColorSet.shifted(t, beta, 11)
        c = find_coloring(g, shifted)
        assert c is not None
        back = recolor(c, beta, t, std(t))
        assert is_proper(g, back) and back.uses_only_colorset()
