"""Polynomial encodings of colourability over Z_p.

Every graph polynomial here is a product of linear factors: an edge factor
``(v_c - v_d)`` for each ordered adjacent pair, and for each vertex an
annihilator ``prod (v_c - l)`` over the field elements outside the colour
set.  Products are kept as factor lists and only expanded (and Fermat
reduced) on demand, because with the large prime the expansion is out of
reach while evaluation stays cheap.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Sequence

from .coloring import ColorAssignment, ColorSet
from .errors import DomainError, ResourceError
from .ffpoly import (
    DEFAULT_EVAL_CAP,
    DEFAULT_TERM_CAP,
    FieldPoly,
    Monomial,
    Multiplicity,
    coefficient_profile,
    divide_linear,
    fermat_reduce,
    linear_factor_multiplicity,
    next_prime_above,
    product,
)
from .graph import SimpleGraph, delete_edge

Mode = Literal["strict", "small"]


def strict_prime(g: SimpleGraph) -> int:
    """Least prime above 2 * maxdeg^2 * n."""
    return next_prime_above(2 * g.max_degree() ** 2 * g.n)


def least_small_prime(t: int) -> int:
    """Least prime p >= t + 2, so that Z_p has a spare element outside {0..t}."""
    return next_prime_above(t + 1)


@dataclass(frozen=True)
class EncodingContext:
    """A graph with its colour count, prime and colour set.

    ``ref_n`` and ``ref_delta`` describe the graph the prime was chosen for,
    which for a minor is the original graph rather than the minor itself.
    """

    graph: SimpleGraph
    t: int
    p: int
    colorset: ColorSet
    mode: Mode
    ref_n: int
    ref_delta: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise DomainError("t must be at least 1")
        if self.colorset.p != self.p or self.colorset.t != self.t:
            raise DomainError("colour set does not match (t, p)")
        if self.mode == "strict":
            bound = 2 * self.ref_delta ** 2 * self.ref_n
            if self.p <= bound:
                raise DomainError(f"strict mode needs p > {bound}, got {self.p}")
        elif self.mode == "small":
            if self.p < self.t + 2:
                raise DomainError(f"small-prime mode needs p >= t + 2 = {self.t + 2}")
        else:
            raise DomainError(f"unknown mode {self.mode!r}")

    @classmethod
    def strict(cls, g: SimpleGraph, t: int, reference: SimpleGraph | None = None) -> EncodingContext:
        ref = reference if reference is not None else g
        p = strict_prime(ref)
        return cls(g, t, p, ColorSet.standard(t, p), "strict", ref.n, ref.max_degree())

    @classmethod
    def small(cls, g: SimpleGraph, t: int, p: int | None = None, beta: int | None = None,
              reference: SimpleGraph | None = None) -> EncodingContext:
        ref = reference if reference is not None else g
        p = least_small_prime(t) if p is None else p
        cs = ColorSet.standard(t, p) if beta is None else ColorSet.shifted(t, beta, p)
        return cls(g, t, p, cs, "small", ref.n, ref.max_degree())

    def with_graph(self, g: SimpleGraph) -> EncodingContext:
        return EncodingContext(g, self.t, self.p, self.colorset, self.mode, self.ref_n, self.ref_delta)

    def shifted(self, beta: int) -> EncodingContext:
        return EncodingContext(self.graph, self.t, self.p, ColorSet.shifted(self.t, beta, self.p),
                               self.mode, self.ref_n, self.ref_delta)

    def standard(self) -> EncodingContext:
        return EncodingContext(self.graph, self.t, self.p, ColorSet.standard(self.t, self.p),
                               self.mode, self.ref_n, self.ref_delta)

    def to_json(self) -> dict:
        return {"t": self.t, "p": self.p, "mode": self.mode, "colorset": self.colorset.to_json()}


@dataclass(frozen=True)
class Factor:
    kind: Literal["edge", "annihilator", "link", "split"]
    vertex: int
    poly: FieldPoly


_EXPANSIONS: dict[tuple, FieldPoly] = {}
_EXPANSION_SLOTS = 64


def _remember(key: tuple, value: FieldPoly) -> None:
    # small FIFO cache; the pipeline re-expands the same products several times
    if len(_EXPANSIONS) >= _EXPANSION_SLOTS:
        del _EXPANSIONS[next(iter(_EXPANSIONS))]
    _EXPANSIONS[key] = value


@dataclass(frozen=True)
class FactoredPoly:
    """A product of factors, with the variables it is considered over."""

    p: int
    factors: tuple[Factor, ...]
    over: frozenset[int] = field(default_factory=frozenset)

    @property
    def variables(self) -> list[int]:
        vs = set(self.over)
        for f in self.factors:
            vs.update(f.poly.variables())
        return sorted(vs)

    def times(self, *extra: Factor) -> FactoredPoly:
        return FactoredPoly(self.p, self.factors + tuple(extra), self.over)

    def without(self, pred) -> FactoredPoly:
        return FactoredPoly(self.p, tuple(f for f in self.factors if not pred(f)), self.over)

    def evaluate(self, point) -> int:
        evs = self.__dict__.get("_evs")
        if evs is None:
            evs = [_fast_eval(f.poly) for f in self.factors]
            object.__setattr__(self, "_evs", evs)
        acc = 1
        p = self.p
        for ev in evs:
            acc = acc * ev(point) % p
            if not acc:
                return 0
        return acc

    def __call__(self, point) -> int:
        return self.evaluate(point)

    def expand(self, reduce: bool = True, exclude: Iterable[int] = (),
               term_cap: int = DEFAULT_TERM_CAP) -> FieldPoly:
        key = (self.p, tuple(f.poly for f in self.factors), reduce, tuple(sorted(exclude)))
        hit = _EXPANSIONS.get(key)
        if hit is None:
            hit = product(key[1], self.p, reduce, exclude, term_cap)
            _remember(key, hit)
        return hit

    def factor_multiset(self) -> Counter:
        return Counter(f.poly.body_text() for f in self.factors)

    def dump(self) -> str:
        """One factor per line in canonical text form, after a modulus header."""
        return "\n".join([f"p={self.p}"] + [f.poly.body_text() for f in self.factors])


def annihilator_roots(cs: ColorSet) -> tuple[int, ...]:
    """Roots of the annihilator: l = t+1..p (l = p read as 0) for {1..t}."""
    if cs.kind == "standard":
        return tuple(l % cs.p for l in range(cs.t + 1, cs.p + 1))
    return cs.complement()


def annihilator(p: int, v: int, cs: ColorSet) -> tuple[Factor, ...]:
    return tuple(Factor("annihilator", v, FieldPoly.linear(p, v, l)) for l in annihilator_roots(cs))


def graph_factors(
    g: SimpleGraph, cs: ColorSet, skip_annihilator: Iterable[int] = ()
) -> FactoredPoly:
    """prod over v_c of (prod over neighbours (v_c - v_d)) * annihilator(v_c)."""
    p = cs.p
    skip = frozenset(skip_annihilator)
    out: list[Factor] = []
    for c in g.sorted_vertices():
        for d in sorted(g.neighbors(c)):
            out.append(Factor("edge", c, FieldPoly.difference(p, c, d)))
        if c not in skip:
            out.extend(annihilator(p, c, cs))
    return FactoredPoly(p, tuple(out), g.vertices)


def build_P(ctx: EncodingContext) -> FactoredPoly:
    if ctx.colorset.kind != "standard":
        raise DomainError("build_P needs the standard colour set")
    return graph_factors(ctx.graph, ctx.colorset)


def build_P_hat(ctx: EncodingContext) -> FactoredPoly:
    if ctx.colorset.kind != "shifted":
        raise DomainError("build_P_hat needs a shifted colour set")
    return graph_factors(ctx.graph, ctx.colorset)


def _oriented_edge(ctx: EncodingContext, e: tuple[int, int]) -> tuple[int, int]:
    v_s, v_b = e
    if not ctx.graph.has_edge(v_s, v_b):
        raise DomainError(f"({v_s}, {v_b}) is not an edge")
    return v_s, v_b


def build_H(ctx: EncodingContext, e: tuple[int, int], keep_isolated: bool = False) -> FactoredPoly:
    """The graph product for the graph with edge ``e`` deleted.

    By default a deletion that isolates an endpoint drops that vertex, as
    edge deletion does; ``keep_isolated`` keeps the full vertex set.
    """
    _oriented_edge(ctx, e)
    return graph_factors(delete_edge(ctx.graph, e, keep_isolated), ctx.colorset)


def build_S(ctx: EncodingContext, e: tuple[int, int], keep_isolated: bool = False) -> FactoredPoly:
    """H times the single factor (v_s - v_b)."""
    v_s, v_b = _oriented_edge(ctx, e)
    h = build_H(ctx, e, keep_isolated)
    return FactoredPoly(h.p, h.factors + (Factor("link", v_s, FieldPoly.difference(ctx.p, v_s, v_b)),),
                        h.over | {v_s, v_b})


build_S_hat = build_S


def build_Q(ctx: EncodingContext, e: tuple[int, int], keep_isolated: bool = True) -> FactoredPoly:
    """S with the annihilator of v_s removed."""
    v_s, _ = _oriented_edge(ctx, e)
    s = build_S(ctx, e, keep_isolated)
    return s.without(lambda f: f.kind == "annihilator" and f.vertex == v_s)


# nonzero-point search ---------------------------------------------------------


def _fast_eval(poly: FieldPoly):
    """A point -> value function, specialised for linear polynomials."""
    p = poly.p
    const = 0
    lin = []
    for m, c in poly.terms.items():
        if not m:
            const = c
        elif len(m) == 1 and m[0][1] == 1:
            lin.append((m[0][0], c))
        else:
            return poly
    if len(lin) == 1:
        (v, c), = lin
        return lambda pt: (c * pt[v] + const) % p
    if len(lin) == 2 and not const:
        (u, a), (w, b) = lin
        return lambda pt: (a * pt[u] + b * pt[w]) % p
    return lambda pt: (const + sum(c * pt[v] for v, c in lin)) % p


def _domain_values(domain: ColorSet | Sequence[int]) -> tuple[int, ...]:
    return domain.values if isinstance(domain, ColorSet) else tuple(domain)


def nonzero_points(
    f: FactoredPoly | FieldPoly,
    domain: ColorSet | Sequence[int],
    variables: Iterable[int] | None = None,
    eval_cap: int = DEFAULT_EVAL_CAP,
) -> Iterator[dict[int, int]]:
    """Every point of domain^variables where ``f`` is nonzero, lexicographically.

    Variables are assigned in ascending order; a factor is evaluated as soon
    as all its variables are assigned and a zero prunes the whole subtree.
    Univariate factors are tabulated over the domain once.  ``eval_cap``
    bounds the number of search nodes.
    """
    if isinstance(f, FieldPoly):
        f = FactoredPoly(f.p, (Factor("link", 0, f),))
    p = f.p
    values = _domain_values(domain)
    vs = sorted(set(f.variables) | set(variables or ()))
    pos = {v: i for i, v in enumerate(vs)}
    tables: list[dict[int, int]] = [dict.fromkeys(values, 1) for _ in vs]
    multi: list[list] = [[] for _ in vs]
    for fac in f.factors:
        fvars = fac.poly.variables()
        if not fvars:
            if fac.poly.terms.get((), 0) % p == 0:
                return
            continue
        ev = _fast_eval(fac.poly)
        if len(fvars) == 1:
            v = fvars[0]
            tab = tables[pos[v]]
            for x in values:
                if tab[x]:
                    tab[x] = tab[x] * ev({v: x}) % p
        else:
            multi[max(pos[v] for v in fvars)].append(ev)
    point: dict[int, int] = {}
    nodes = 0

    def rec(i: int) -> Iterator[dict[int, int]]:
        nonlocal nodes
        if i == len(vs):
            yield dict(point)
            return
        v = vs[i]
        for x in values:
            nodes += 1
            if nodes > eval_cap:
                raise ResourceError(f"nonzero-point search exceeded {eval_cap} nodes")
            if not tables[i][x]:
                continue
            point[v] = x
            if all(ev(point) for ev in multi[i]):
                yield from rec(i + 1)
            del point[v]

    yield from rec(0)


def exists_nonzero_on(
    f: FactoredPoly | FieldPoly,
    domain: ColorSet | Sequence[int],
    variables: Iterable[int] | None = None,
    eval_cap: int = DEFAULT_EVAL_CAP,
) -> ColorAssignment | None:
    """Lexicographically least point of domain^n with a nonzero value, or None."""
    for point in nonzero_points(f, domain, variables, eval_cap):
        return ColorAssignment(point, domain if isinstance(domain, ColorSet) else None)
    return None


# the shifted-colour pipeline ---------------------------------------------------


@dataclass(frozen=True)
class SplitSets:
    m1: frozenset[int]
    m2: frozenset[int]
    v_s: int

    def to_json(self) -> dict:
        return {"m1": sorted(self.m1), "m2": sorted(self.m2), "v_s": self.v_s}


def split_factor(p: int, v: int, t: int) -> Factor:
    return Factor("split", v, FieldPoly.linear(p, v, t))


def select_M1(
    ctx: EncodingContext,
    e: tuple[int, int],
    term_cap: int = DEFAULT_TERM_CAP,
) -> SplitSets:
    """Greedily append factors (v - t), ascending, while the reduced product stays nonzero.

    The vertices appended form M_1; the rest (other than v_s) form M_2.
    For every v in M_2, G'(v - t) reduces to zero.
    """
    if ctx.mode != "small":
        raise DomainError("symbolic zero tests need small-prime mode")
    v_s, _ = _oriented_edge(ctx, e)
    qpoly = build_Q(ctx, e)
    q = qpoly.expand(term_cap=term_cap)
    if q.is_zero():
        raise DomainError("Q' is identically zero; no split exists")
    m1 = []
    cur = q
    for v in ctx.graph.sorted_vertices():
        if v == v_s:
            continue
        cand = product([cur, FieldPoly.linear(ctx.p, v, ctx.t)], ctx.p, term_cap=term_cap)
        if not cand.is_zero():
            cur = cand
            m1.append(v)
    m2 = ctx.graph.vertices - set(m1) - {v_s}
    # cur is exactly the reduced expansion of build_G_poly for this split
    g = qpoly.times(*(split_factor(ctx.p, v, ctx.t) for v in m1))
    _remember((ctx.p, tuple(f.poly for f in g.factors), True, ()), cur)
    return SplitSets(frozenset(m1), frozenset(m2), v_s)


def build_G_poly(ctx: EncodingContext, e: tuple[int, int], split: SplitSets) -> FactoredPoly:
    """Q times (v - t) for every v in M_1."""
    q = build_Q(ctx, e)
    return q.times(*(split_factor(ctx.p, v, ctx.t) for v in sorted(split.m1)))


@dataclass(frozen=True)
class JPoly:
    vertex: int
    poly: FieldPoly
    monomial: Monomial
    choice: int
    degree: int
    degree_bound: int

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "poly": self.poly.body_text(),
            "monomial": [list(x) for x in self.monomial],
            "choice": self.choice,
            "degree": self.degree,
            "degree_bound": self.degree_bound,
        }


def j_candidates(
    ctx: EncodingContext, gpoly: FactoredPoly, v_c: int, v_s: int, term_cap: int = DEFAULT_TERM_CAP
) -> list[tuple[Monomial, FieldPoly]]:
    """Per monomial free of v_c, in canonical order: the coefficient of G with
    every other variable reduced, kept only when it reduces to nonzero.

    For v_c other than v_s the coefficient includes v_c's annihilator, which
    is split off before expanding so it multiplies the coefficient unreduced.
    """
    if v_c == v_s:
        ann: tuple[Factor, ...] = ()
        rest = gpoly
    else:
        ann = tuple(f for f in gpoly.factors if f.kind == "annihilator" and f.vertex == v_c)
        rest = gpoly.without(lambda f: f.kind == "annihilator" and f.vertex == v_c)
    partial = rest.expand(reduce=True, exclude=[v_c], term_cap=term_cap)
    ann_poly = product((f.poly for f in ann), ctx.p, reduce=False)
    out = []
    for mono, coeff in coefficient_profile(partial, v_c).items():
        j = product([coeff, ann_poly], ctx.p, reduce=False)
        if not fermat_reduce(j).is_zero():
            out.append((mono, j))
    return out


def build_J(
    ctx: EncodingContext,
    gpoly: FactoredPoly,
    v_c: int,
    v_s: int,
    choice: int = 0,
    term_cap: int = DEFAULT_TERM_CAP,
) -> JPoly:
    """The univariate coefficient of the ``choice``-th nonzero monomial (canonical order)."""
    cands = j_candidates(ctx, gpoly, v_c, v_s, term_cap)
    if not cands:
        raise DomainError(f"every coefficient in the grouping by v{v_c} vanishes")
    if choice >= len(cands):
        raise DomainError(f"only {len(cands)} nonzero monomials in the grouping by v{v_c}")
    mono, j = cands[choice]
    delta = ctx.graph.max_degree()
    bound = 2 * delta if v_c == v_s else 2 * delta + ctx.p - ctx.t
    return JPoly(v_c, j, mono, choice, j.degree_in(v_c), bound)


@dataclass(frozen=True)
class BetaSearch:
    beta: int | None
    g_reduced: FieldPoly
    j_polys: dict[int, JPoly]
    checks: dict[int, dict[str, str]]

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "j": {str(v): j.to_json() for v, j in sorted(self.j_polys.items())},
            "checks": {str(b): c for b, c in sorted(self.checks.items())},
        }


def beta_conditions(
    beta: int,
    g_reduced: FieldPoly,
    j_polys: dict[int, JPoly],
    split: SplitSets,
) -> dict[str, str]:
    """Multiplicity of (v - beta) in J(v) and G' for each v in M_2 and for v_s."""
    out = {}
    for v in sorted(split.m2) + [split.v_s]:
        out[f"J{v}"] = linear_factor_multiplicity(j_polys[v].poly, v, beta).value
        out[f"G{v}"] = linear_factor_multiplicity(g_reduced, v, beta).value
    return out


def beta_qualifies(conds: dict[str, str], split: SplitSets) -> bool:
    want = {f"{k}{v}": Multiplicity.SIMPLE.value for v in split.m2 for k in "JG"}
    want.update({f"J{split.v_s}": Multiplicity.NONE.value, f"G{split.v_s}": Multiplicity.NONE.value})
    return conds == want


def find_beta(
    ctx: EncodingContext,
    gpoly: FactoredPoly,
    split: SplitSets,
    choice: int = 0,
    term_cap: int = DEFAULT_TERM_CAP,
) -> BetaSearch:
    """Least beta in Z_p \\ {0..t} making (v - beta) a simple factor of J(v) and G'
    for every v in M_2 while dividing neither J(v_s) nor G'."""
    if ctx.mode != "small":
        raise DomainError("beta search needs small-prime mode")
    g_red = gpoly.expand(term_cap=term_cap)
    if g_red.is_zero():
        raise DomainError("G' is identically zero")
    j_polys = {
        v: build_J(ctx, gpoly, v, split.v_s, choice, term_cap)
        for v in sorted(split.m2) + [split.v_s]
    }
    checks = {}
    found = None
    for beta in range(ctx.t + 1, ctx.p):
        conds = beta_conditions(beta, g_red, j_polys, split)
        checks[beta] = conds
        if found is None and beta_qualifies(conds, split):
            found = beta
    return BetaSearch(found, g_red, j_polys, checks)


@dataclass(frozen=True)
class KPoly:
    poly: FieldPoly | None
    exact: bool
    failed_vertex: int | None = None
    remainder: FieldPoly | None = None


def build_K_poly(
    ctx: EncodingContext,
    g_reduced: FieldPoly,
    split: SplitSets,
    beta: int,
    term_cap: int = DEFAULT_TERM_CAP,
) -> KPoly:
    """(G' / prod_{M_2}(v - beta)) * prod_{M_2}(v - t) * prod_{l not in {1..t-1, beta}} (v_s - l).

    Each division is an exact single-variable quotient; a non-simple factor
    or a nonzero remainder is reported instead of raised.
    """
    p, t = ctx.p, ctx.t
    cur = g_reduced
    for v in sorted(split.m2):
        if cur.is_zero() or linear_factor_multiplicity(cur, v, beta) != Multiplicity.SIMPLE:
            return KPoly(None, False, v, None)
        cur, rem = divide_linear(cur, v, beta)
        if not rem.is_zero():
            return KPoly(None, False, v, rem)
    keep = set(range(1, t)) | {beta}
    extra = [FieldPoly.linear(p, v, t) for v in sorted(split.m2)]
    extra += [FieldPoly.linear(p, split.v_s, l) for l in range(p) if l not in keep]
    return KPoly(product([cur] + extra, p, term_cap=term_cap), True)
