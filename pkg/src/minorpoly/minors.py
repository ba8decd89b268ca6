"""Clique minors, Hadwiger numbers and explicit minor sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import DomainError, ResourceError
from .graph import ElementaryOp, SimpleGraph, canonical_form, clique_number

DEFAULT_NODE_CAP = 5_000_000


def clique_minor_model(
    g: SimpleGraph, t: int, node_cap: int = DEFAULT_NODE_CAP
) -> list[frozenset[int]] | None:
    """Branch sets of a K_t minor, or None.

    Vertices are visited in ascending order and each is left out, added to
    an open branch set, or opens a new one (sets are unordered, so a new set
    is only opened at the end).  A branch is cut when the open sets plus the
    vertices still to come cannot reach t sets.
    """
    if t < 1:
        raise DomainError("t must be positive")
    verts = g.sorted_vertices()
    n = len(verts)
    if t > n or g.m < t * (t - 1) // 2:
        return None
    if t == 1:
        return [frozenset([verts[0]])]
    adj = g.adjacency()
    blocks: list[set[int]] = []
    nodes = 0

    def connected(block: set[int]) -> bool:
        start = next(iter(block))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in block and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(block)

    def complete_model() -> bool:
        if not all(connected(b) for b in blocks):
            return False
        for i in range(t):
            reach = set().union(*(adj[u] for u in blocks[i]))
            for j in range(i + 1, t):
                if reach.isdisjoint(blocks[j]):
                    return False
        return True

    def rec(i: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceError(f"clique-minor search exceeded {node_cap} nodes")
        if len(blocks) + (n - i) < t:
            return False
        if i == n:
            return complete_model()
        v = verts[i]
        for b in blocks:
            b.add(v)
            if rec(i + 1):
                return True
            b.discard(v)
        if len(blocks) < t:
            blocks.append({v})
            if rec(i + 1):
                return True
            blocks.pop()
        return rec(i + 1)

    if rec(0):
        return [frozenset(b) for b in blocks]
    return None


def has_clique_minor(g: SimpleGraph, t: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return clique_minor_model(g, t, node_cap) is not None


def hadwiger_number(g: SimpleGraph, node_cap: int = DEFAULT_NODE_CAP) -> int:
    if g.n == 0:
        raise DomainError("Hadwiger number of the empty graph is undefined")
    t = max(clique_number(g), 1)
    while has_clique_minor(g, t + 1, node_cap):
        t += 1
    return t


@dataclass(frozen=True)
class MinorSequence:
    source: SimpleGraph
    target_t: int
    steps: tuple[tuple[ElementaryOp, SimpleGraph], ...]

    @property
    def ops(self) -> list[ElementaryOp]:
        return [op for op, _ in self.steps]

    def graphs(self) -> list[SimpleGraph]:
        """M_0 (the source) through the final complete graph."""
        return [self.source] + [g for _, g in self.steps]

    @property
    def final(self) -> SimpleGraph:
        return self.steps[-1][1] if self.steps else self.source

    def validate(self) -> None:
        cur = self.source
        for op, stored in self.steps:
            before = cur.n
            cur = op.apply(cur)
            if cur != stored:
                raise DomainError(f"replaying {op} does not reproduce the stored graph")
            drop = before - cur.n
            if op.kind == "contract" and drop != 1 or op.kind == "delete" and drop not in (0, 1):
                raise DomainError(f"{op} changed the order by {drop}")
        if not (cur.n == self.target_t and cur.is_complete()):
            raise DomainError(f"sequence ends at {cur!r}, not K_{self.target_t}")

    def ops_json(self) -> list[dict]:
        return [op.to_json() for op in self.ops]

    @classmethod
    def replay(cls, source: SimpleGraph, t: int, ops: list[ElementaryOp]) -> MinorSequence:
        steps = []
        cur = source
        for op in ops:
            cur = op.apply(cur)
            steps.append((op, cur))
        seq = cls(source, t, tuple(steps))
        seq.validate()
        return seq


def _candidate_ops(g: SimpleGraph, deletion_first: bool) -> list[ElementaryOp]:
    contractions = []
    deletions = []
    for a, b in g.edges():
        contractions.append(ElementaryOp("contract", b, a, removed=b))
        contractions.append(ElementaryOp("contract", a, b, removed=a))
        deletions.append(ElementaryOp("delete", a, b))
    return deletions + contractions if deletion_first else contractions + deletions


def find_minor_sequence(
    g: SimpleGraph,
    t: int,
    variant: int = 0,
    node_cap: int = DEFAULT_NODE_CAP,
) -> MinorSequence:
    """A sequence of single-edge operations turning ``g`` into K_t.

    Variant 0 tries contractions before deletions, edges ascending.  Odd
    variants try deletions first; ``variant // 2`` skips that many viable
    choices at the first step, which makes different variants diverge.
    Every intermediate graph stays connected, so a deletion loses at most
    one (pendant) vertex.  Dead ends are memoised by canonical form.
    """
    if not has_clique_minor(g, t, node_cap):
        raise DomainError(f"graph has no K_{t} minor")
    if not g.is_connected():
        raise DomainError("minor sequences are built for connected graphs")
    deletion_first = variant % 2 == 1
    skip_first = variant // 2
    dead: set[tuple] = set()
    budget = [node_cap]

    def done(h: SimpleGraph) -> bool:
        return h.n == t and h.is_complete()

    def viable(h: SimpleGraph) -> bool:
        return (
            h.n >= t
            and h.m >= t * (t - 1) // 2
            and h.is_connected()
            and has_clique_minor(h, t, node_cap)
        )

    def dfs(h: SimpleGraph, depth: int) -> list[tuple[ElementaryOp, SimpleGraph]] | None:
        if done(h):
            return []
        key = canonical_form(h)
        if key in dead:
            return None
        skipped = 0
        for op in _candidate_ops(h, deletion_first):
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceError(f"minor-sequence search exceeded {node_cap} nodes")
            nxt = op.apply(h)
            if not viable(nxt):
                continue
            if depth == 0 and skipped < skip_first:
                skipped += 1
                continue
            rest = dfs(nxt, depth + 1)
            if rest is not None:
                return [(op, nxt)] + rest
        dead.add(key)
        return None

    steps = dfs(g, 0)
    if steps is None:
        raise DomainError(f"variant {variant} has no K_{t} sequence")
    return MinorSequence(g, t, tuple(steps))


def minor_sequences(g: SimpleGraph, t: int, k: int, node_cap: int = DEFAULT_NODE_CAP) -> list[MinorSequence]:
    """Up to ``k`` pairwise distinct sequences, from successive variants."""
    out: list[MinorSequence] = []
    seen: set[tuple] = set()
    for variant in range(4 * k):
        if len(out) == k:
            break
        try:
            seq = find_minor_sequence(g, t, variant, node_cap)
        except DomainError:
            continue
        key = tuple(seq.ops)
        if key not in seen:
            seen.add(key)
            out.append(seq)
    return out


def iter_sequence_steps(seq: MinorSequence) -> Iterator[tuple[int, SimpleGraph, ElementaryOp, SimpleGraph]]:
    """Yield ``(i, M_{i-1}, o_i, M_i)`` for i = 1..q+1."""
    prev = seq.source
    for i, (op, cur) in enumerate(seq.steps, start=1):
        yield i, prev, op, cur
        prev = cur
