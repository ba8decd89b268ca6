"""Exact vertex colouring with colours drawn from Z_p.

Colours are field elements rather than abstract labels because the
polynomial encoding evaluates at them.  All searches are deterministic:
vertices in ascending label order, colours in ascending value order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Mapping

from .errors import DomainError
from .ffpoly import is_prime
from .graph import SimpleGraph, contract_edge, delete_edge


@dataclass(frozen=True)
class ColorSet:
    """Standard {1..t} or shifted {1..t-1} u {beta}, inside Z_p."""

    kind: Literal["standard", "shifted"]
    t: int
    p: int
    beta: int | None = None

    def __post_init__(self) -> None:
        if self.t < 1:
            raise DomainError("a colour set needs t >= 1")
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.kind == "standard":
            if self.beta is not None:
                raise DomainError("standard colour sets carry no beta")
            if self.t >= self.p:
                raise DomainError(f"{{1..{self.t}}} does not fit inside Z_{self.p} \\ {{0}}")
        elif self.kind == "shifted":
            if self.beta is None or not self.t < self.beta < self.p:
                raise DomainError(f"beta must lie in Z_{self.p} \\ {{0..{self.t}}}")
        else:
            raise DomainError(f"unknown colour set kind {self.kind!r}")

    @classmethod
    def standard(cls, t: int, p: int) -> ColorSet:
        return cls("standard", t, p)

    @classmethod
    def shifted(cls, t: int, beta: int, p: int) -> ColorSet:
        return cls("shifted", t, p, beta)

    @property
    def values(self) -> tuple[int, ...]:
        if self.kind == "standard":
            return tuple(range(1, self.t + 1))
        return tuple(range(1, self.t)) + (self.beta,)

    def complement(self) -> tuple[int, ...]:
        """Z_p minus the colour set, ascending; the annihilator's roots."""
        inside = set(self.values)
        return tuple(x for x in range(self.p) if x not in inside)

    def __contains__(self, x: object) -> bool:
        return x in self.values

    def __len__(self) -> int:
        return self.t

    def to_json(self) -> dict:
        return {"kind": self.kind, "t": self.t, "p": self.p, "beta": self.beta}


@dataclass(frozen=True)
class ColorAssignment:
    colors: Mapping[int, int]
    colorset: ColorSet | None = field(default=None, compare=False)

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def uses_only_colorset(self) -> bool:
        return self.colorset is None or all(c in self.colorset for c in self.colors.values())

    def to_json(self) -> dict[str, int]:
        return {str(v): self.colors[v] for v in sorted(self.colors)}


def is_proper(g: SimpleGraph, c: ColorAssignment | Mapping[int, int]) -> bool:
    colors = c.colors if isinstance(c, ColorAssignment) else c
    missing = [v for v in g.sorted_vertices() if v not in colors]
    if missing:
        raise DomainError(f"vertices {missing} are uncoloured")
    return all(colors[u] != colors[v] for u, v in g.edges())


def find_coloring(g: SimpleGraph, cs: ColorSet) -> ColorAssignment | None:
    """First proper colouring over ``cs`` in lexicographic order, or None."""
    order = g.sorted_vertices()
    palette = cs.values
    colors: dict[int, int] = {}

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        taken = {colors[w] for w in g.neighbors(v) if w in colors}
        for c in palette:
            if c not in taken:
                colors[v] = c
                if rec(i + 1):
                    return True
                del colors[v]
        return False

    return ColorAssignment(dict(colors), cs) if rec(0) else None


def _palette_prime(t: int) -> int:
    q = t + 1
    while not is_prime(q):
        q += 1
    return q


def chromatic_number(g: SimpleGraph) -> int:
    if g.n == 0:
        raise DomainError("chromatic number of the empty graph is undefined here")
    t = 1
    while find_coloring(g, ColorSet.standard(t, _palette_prime(t))) is None:
        t += 1
    return t


def is_t_colorable(g: SimpleGraph, t: int) -> bool:
    if g.n == 0:
        return True
    return find_coloring(g, ColorSet.standard(t, _palette_prime(t))) is not None


def transfer_contraction_coloring(
    h: SimpleGraph, e: tuple[int, int], coloring_of_contraction: ColorAssignment
) -> ColorAssignment:
    """Lift a colouring of ``h / e`` (v_s removed) to ``h`` minus the edge e.

    ``v_s`` takes the colour of ``v_b``; every other vertex keeps its colour.
    """
    v_s, v_b = e
    contracted = contract_edge(h, e)
    if not is_proper(contracted, coloring_of_contraction):
        raise DomainError("input colouring is not proper on the contracted graph")
    colors = dict(coloring_of_contraction.colors)
    colors[v_s] = colors[v_b]
    lifted = ColorAssignment(colors, coloring_of_contraction.colorset)
    assert is_proper(delete_edge(h, e, keep_isolated=True), lifted)
    return lifted


def extend_pendant_coloring(h: SimpleGraph, v_s: int, partial: ColorAssignment) -> ColorAssignment:
    """Colour the degree-one vertex ``v_s`` with the least colour its neighbour lacks."""
    if h.degree(v_s) != 1:
        raise DomainError(f"vertex {v_s} has degree {h.degree(v_s)}, not 1")
    cs = partial.colorset
    if cs is None:
        raise DomainError("partial colouring must carry its colour set")
    if len(cs) < 2:
        raise DomainError("a pendant edge cannot be coloured with one colour")
    rest = SimpleGraph(h.vertices - {v_s}, [e for e in h.edges() if v_s not in e])
    if not is_proper(rest, partial):
        raise DomainError("partial colouring is not proper on h - v_s")
    (nbr,) = h.neighbors(v_s)
    colors = {v: partial.colors[v] for v in rest.vertices}
    colors[v_s] = next(c for c in cs.values if c != colors[nbr])
    return ColorAssignment(colors, cs)


def brooks_bound_check(g: SimpleGraph) -> bool:
    """Brooks: connected g is complete, an odd cycle, or has chi <= max degree."""
    if not g.is_connected():
        raise DomainError("Brooks check needs a connected graph")
    if g.is_complete() or g.is_odd_cycle():
        return True
    return chromatic_number(g) <= g.max_degree()


def recolor(c: ColorAssignment, old: int, new: int, target: ColorSet | None = None) -> ColorAssignment:
    """Replace colour ``old`` with ``new`` everywhere."""
    return ColorAssignment(
        {v: new if x == old else x for v, x in c.colors.items()},
        target if target is not None else c.colorset,
    )
