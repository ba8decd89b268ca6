"""Labeled simple graphs with one-edge elementary operations.

Vertex labels are positive integers and are global across a minor sequence:
once a contraction removes a label it never comes back.  Graph values are
immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Literal, Mapping

from .errors import DomainError, ResourceError

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class SimpleGraph:
    """Finite simple graph over integer vertex labels."""

    __slots__ = ("_adj", "_hash")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self._adj: dict[int, frozenset[int]] = {v: frozenset(ns) for v, ns in adj.items()}
        self._hash: int | None = None

    @classmethod
    def _from_adj(cls, adj: Mapping[int, Iterable[int]]) -> SimpleGraph:
        g = cls.__new__(cls)
        g._adj = {v: frozenset(ns) for v, ns in adj.items()}
        g._hash = None
        return g

    # named families --------------------------------------------------------
    @classmethod
    def complete(cls, n: int, start: int = 1) -> SimpleGraph:
        vs = range(start, start + n)
        return cls(vs, combinations(vs, 2))

    @classmethod
    def cycle(cls, n: int) -> SimpleGraph:
        vs = list(range(1, n + 1))
        return cls(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> SimpleGraph:
        return cls(range(1, n + 1), [(i, i + 1) for i in range(1, n)])

    @classmethod
    def star(cls, leaves: int) -> SimpleGraph:
        return cls(range(1, leaves + 2), [(1, i) for i in range(2, leaves + 2)])

    @classmethod
    def petersen(cls) -> SimpleGraph:
        outer = [(i, i % 5 + 1) for i in range(1, 6)]
        spokes = [(i, i + 5) for i in range(1, 6)]
        inner = [(i + 5, (i + 1) % 5 + 6) for i in range(1, 6)]
        return cls(range(1, 11), outer + spokes + inner)

    # queries ----------------------------------------------------------------
    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    def sorted_vertices(self) -> list[int]:
        return sorted(self._adj)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def edges(self) -> list[Edge]:
        return sorted((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise DomainError(f"vertex {v} not in graph") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for start in sorted(self._adj):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_complete(self) -> bool:
        k = len(self._adj)
        return all(len(ns) == k - 1 for ns in self._adj.values())

    def is_odd_cycle(self) -> bool:
        k = len(self._adj)
        return (
            k >= 3
            and k % 2 == 1
            and all(len(ns) == 2 for ns in self._adj.values())
            and self.is_connected()
        )

    def relabel(self, mapping: Mapping[int, int]) -> SimpleGraph:
        return SimpleGraph(
            (mapping[v] for v in self._adj),
            ((mapping[u], mapping[v]) for u, v in self.edges()),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._adj), tuple(self.edges())))
        return self._hash

    def __repr__(self) -> str:
        return f"SimpleGraph(vertices={self.sorted_vertices()}, edges={self.edges()})"


# elementary operations ------------------------------------------------------


def neighborhood(g: SimpleGraph, v: int) -> frozenset[int]:
    return g.neighbors(v)


def _require_edge(g: SimpleGraph, u: int, v: int) -> None:
    if not g.has_edge(u, v):
        raise DomainError(f"({u}, {v}) is not an edge")


def contract_edge(g: SimpleGraph, e: tuple[int, int]) -> SimpleGraph:
    """Contract ``e = (v_s, v_b)``, deleting ``v_s`` and keeping ``v_b``.

    ``v_b`` inherits every neighbour of ``v_s`` it did not already have.
    """
    v_s, v_b = e
    _require_edge(g, v_s, v_b)
    adj = {v: set(ns) for v, ns in g._adj.items() if v != v_s}
    for w in g._adj[v_s]:
        adj[w].discard(v_s)
        if w != v_b:
            adj[w].add(v_b)
            adj[v_b].add(w)
    return SimpleGraph._from_adj(adj)


def delete_edge(g: SimpleGraph, e: tuple[int, int], keep_isolated: bool = False) -> SimpleGraph:
    """Remove edge ``e``; endpoints left isolated are deleted unless ``keep_isolated``."""
    u, v = e
    _require_edge(g, u, v)
    adj = {x: set(ns) for x, ns in g._adj.items()}
    adj[u].discard(v)
    adj[v].discard(u)
    if not keep_isolated:
        for x in (u, v):
            if not adj[x]:
                del adj[x]
    return SimpleGraph._from_adj(adj)


def induced(g: SimpleGraph, a: Iterable[int]) -> SimpleGraph:
    keep = frozenset(a)
    missing = keep - g.vertices
    if missing:
        raise DomainError(f"vertices {sorted(missing)} not in graph")
    return SimpleGraph._from_adj({v: g._adj[v] & keep for v in keep})


@dataclass(frozen=True)
class ElementaryOp:
    """One edge contraction or deletion.

    For a contraction, ``removed`` names the endpoint that disappears.
    """

    kind: Literal["contract", "delete"]
    v_s: int
    v_b: int
    removed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("contract", "delete"):
            raise DomainError(f"unknown operation kind {self.kind!r}")
        if self.v_s == self.v_b:
            raise DomainError("edge endpoints must differ")
        if self.kind == "contract" and self.removed not in (self.v_s, self.v_b):
            raise DomainError("contraction must remove one of the edge endpoints")
        if self.kind == "delete" and self.removed is not None:
            raise DomainError("deletion does not choose a removed vertex")

    @property
    def edge(self) -> Edge:
        return (self.v_s, self.v_b)

    def kept(self) -> int:
        return self.v_b if self.removed == self.v_s else self.v_s

    def apply(self, g: SimpleGraph) -> SimpleGraph:
        if self.kind == "contract":
            return contract_edge(g, (self.removed, self.kept()))
        return delete_edge(g, self.edge)

    def to_json(self) -> dict:
        return {"kind": self.kind, "v_s": self.v_s, "v_b": self.v_b, "removed": self.removed}

    @classmethod
    def from_json(cls, data: Mapping) -> ElementaryOp:
        return cls(data["kind"], int(data["v_s"]), int(data["v_b"]),
                   None if data.get("removed") is None else int(data["removed"]))


# degree-bounded induced families ---------------------------------------------


def bounded_induced_family(g: SimpleGraph, a: Iterable[int], l: int) -> list[SimpleGraph]:
    """All edge-maximal spanning subgraphs of ``g[a]`` with maximum degree at most ``l``.

    Returned in lexicographic order of their edge lists.
    """
    if l < 0:
        raise DomainError("degree bound must be non-negative")
    sub = induced(g, a)
    if sub.max_degree() <= l:
        return [sub]
    edges = sub.edges()
    deg = {v: 0 for v in sub.vertices}
    chosen: list[Edge] = []
    excluded: list[Edge] = []
    found: list[tuple[Edge, ...]] = []

    def rec(i: int) -> None:
        if i == len(edges):
            if all(deg[u] >= l or deg[v] >= l for u, v in excluded):
                found.append(tuple(chosen))
            return
        u, v = edges[i]
        if deg[u] < l and deg[v] < l:
            deg[u] += 1
            deg[v] += 1
            chosen.append((u, v))
            rec(i + 1)
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
        excluded.append((u, v))
        rec(i + 1)
        excluded.pop()

    rec(0)
    return [SimpleGraph(sub.vertices, es) for es in sorted(found)]


# cliques --------------------------------------------------------------------


def clique_number(g: SimpleGraph) -> int:
    """Size of a largest clique, by branch and bound on candidate sets."""
    adj = g._adj
    best = 0

    def expand(size: int, cand: set[int]) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        for v in sorted(cand, key=lambda x: -len(adj[x] & cand)):
            if size + len(cand) <= best:
                return
            expand(size + 1, cand & adj[v])
            cand = cand - {v}

    expand(0, set(adj))
    return best


# canonical forms and enumeration -------------------------------------------


def canonical_ordering(g: SimpleGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Vertex order minimising the upper-triangle adjacency string, and that string.

    The string lists bit (i, j), i < j, column by column, which is the graph6
    bit order; the minimum over all orderings is an isomorphism invariant.
    Partial orderings are grown one column at a time and only those achieving
    the smallest column survive, so the result is exact.
    """
    adj = g._adj
    verts = sorted(adj)
    frontier: list[tuple[int, ...]] = [()]
    bits: list[int] = []
    for k in range(len(verts)):
        best: tuple[int, ...] | None = None
        nxt: list[tuple[int, ...]] = []
        for order in frontier:
            placed = set(order)
            for v in verts:
                if v in placed:
                    continue
                nv = adj[v]
                col = tuple(1 if order[i] in nv else 0 for i in range(k))
                if best is None or col < best:
                    best = col
                    nxt = [order + (v,)]
                elif col == best:
                    nxt.append(order + (v,))
        frontier = nxt
        bits.extend(best or ())
    return frontier[0], tuple(bits)


def canonical_form(g: SimpleGraph) -> tuple[int, tuple[int, ...]]:
    return g.n, canonical_ordering(g)[1]


def canonical_graph(g: SimpleGraph) -> SimpleGraph:
    """Isomorphic copy labelled 1..n along the canonical ordering."""
    order, _ = canonical_ordering(g)
    return g.relabel({v: i + 1 for i, v in enumerate(order)})


def is_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    return canonical_form(g) == canonical_form(h)


DEFAULT_CANDIDATE_CAP = 250_000


def enumerate_connected_graphs(n_max: int, candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> Iterator[SimpleGraph]:
    """One representative per isomorphism class of connected graphs on 1..n_max vertices.

    Graphs on n vertices are grown from the (n-1)-vertex classes by adding a
    vertex with a non-empty neighbourhood; every connected graph has a
    non-cut vertex, so nothing is missed.  Representatives are labelled
    1..n canonically and yielded by size, then by canonical string.
    """
    if not 1 <= n_max <= 10:
        raise DomainError("n_max must lie in 1..10")
    level = [SimpleGraph([1])]
    yield level[0]
    spent = 0
    for n in range(2, n_max + 1):
        found: dict[tuple[int, ...], SimpleGraph] = {}
        for base in level:
            old = base.sorted_vertices()
            for r in range(1, n):
                for nbrs in combinations(old, r):
                    spent += 1
                    if spent > candidate_cap:
                        raise ResourceError(f"graph enumeration exceeded {candidate_cap} candidates")
                    cand = SimpleGraph(old + [n], base.edges() + [(u, n) for u in nbrs])
                    order, key = canonical_ordering(cand)
                    if key not in found:
                        found[key] = cand.relabel({v: i + 1 for i, v in enumerate(order)})
        level = [found[k] for k in sorted(found)]
        yield from level
