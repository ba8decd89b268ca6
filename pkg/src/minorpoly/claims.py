"""Executable checks for each statement, with JSON-serialisable verdicts.

Every check returns ``ClaimReport`` values.  A report records enough of its
instance (edge, operation prefix, stage, ...) in ``params.extra`` for
``rerun`` to rebuild it from the report alone, which is what ``replay``
relies on.
"""

from __future__ import annotations

import enum
import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Iterable, Iterator

from .coloring import (
    ColorAssignment,
    ColorSet,
    chromatic_number,
    extend_pendant_coloring,
    find_coloring,
    is_proper,
    recolor,
    transfer_contraction_coloring,
)
from .encoding import (
    EncodingContext,
    build_G_poly,
    build_H,
    build_K_poly,
    build_P,
    build_Q,
    build_S,
    exists_nonzero_on,
    find_beta,
    least_small_prime,
    nonzero_points,
    select_M1,
    strict_prime,
)
from .errors import DomainError, ResourceError
from .ffpoly import (
    DEFAULT_EVAL_CAP,
    DEFAULT_TERM_CAP,
    FieldPoly,
    is_prime,
    is_zero_semantic,
    next_prime_above,
    product,
    substitute,
)
from .graph import (
    ElementaryOp,
    SimpleGraph,
    bounded_induced_family,
    clique_number,
    contract_edge,
    delete_edge,
    induced,
)
from .graph6 import from_graph6, to_graph6
from .minors import (
    DEFAULT_NODE_CAP,
    MinorSequence,
    find_minor_sequence,
    hadwiger_number,
    has_clique_minor,
    minor_sequences,
)

SCHEMA = "claim-report"
SCHEMA_VERSION = 1


class ClaimId(str, enum.Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    H1 = "H1"
    T31 = "T31"
    T32 = "T32"
    T33 = "T33"
    COR_HADWIGER = "COR_HADWIGER"
    COR_4COLOR = "COR_4COLOR"


class Verdict(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


PIPELINE_CLAIMS = frozenset({ClaimId.C3, ClaimId.C4, ClaimId.T31, ClaimId.T32, ClaimId.T33})

PIPELINE_STAGES = (
    ("q_nonzero", ClaimId.C4),
    ("split", ClaimId.T31),
    ("factored_form", ClaimId.T31),
    ("beta", ClaimId.T32),
    ("k_equals_s_hat", ClaimId.T33),
    ("shifted_witness", ClaimId.C3),
    ("recolor", ClaimId.C3),
)


@dataclass
class ClaimReport:
    claim: ClaimId
    graph_g6: str
    verdict: Verdict
    t: int | None = None
    p: int | None = None
    mode: str | None = None
    sequence: int | None = None
    extra: dict = field(default_factory=dict)
    vacuous: bool = False
    witness: Any = None
    reason: str | None = None
    wall_ms: float | None = None

    def __post_init__(self) -> None:
        self.claim = ClaimId(self.claim)
        self.verdict = Verdict(self.verdict)
        if self.verdict == Verdict.FAIL and self.witness is None:
            raise DomainError("a FAIL report needs a witness")
        if self.verdict == Verdict.SKIP and not self.reason:
            raise DomainError("a SKIP report needs a reason")

    def to_json(self) -> dict:
        return {
            "record": "report",
            "claim": self.claim.value,
            "graph": self.graph_g6,
            "params": {
                "t": self.t,
                "p": self.p,
                "mode": self.mode,
                "sequence": self.sequence,
                "extra": self.extra,
            },
            "verdict": self.verdict.value,
            "vacuous": self.vacuous,
            "witness": self.witness,
            "reason": self.reason,
            "wall_ms": self.wall_ms,
        }

    def to_line(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> ClaimReport:
        if data.get("record") != "report":
            raise DomainError("not a report record")
        try:
            params = data["params"]
            return cls(
                claim=ClaimId(data["claim"]),
                graph_g6=data["graph"],
                verdict=Verdict(data["verdict"]),
                t=params.get("t"),
                p=params.get("p"),
                mode=params.get("mode"),
                sequence=params.get("sequence"),
                extra=params.get("extra") or {},
                vacuous=bool(data.get("vacuous", False)),
                witness=data.get("witness"),
                reason=data.get("reason"),
                wall_ms=data.get("wall_ms"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed report: {exc}") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class Budgets:
    term_cap: int = DEFAULT_TERM_CAP
    node_cap: int = DEFAULT_NODE_CAP
    eval_cap: int = DEFAULT_EVAL_CAP
    subset_cap: int = 32
    pipeline_max_n: int = 4


DEFAULT_BUDGETS = Budgets()


def _palette(t: int) -> ColorSet:
    return ColorSet.standard(t, next_prime_above(t))


def _coloring(g: SimpleGraph, t: int) -> ColorAssignment | None:
    if g.n == 0:
        return ColorAssignment({}, _palette(t))
    return find_coloring(g, _palette(t))


def _skip(claim: ClaimId, g6: str, reason: str, **kw) -> ClaimReport:
    return ClaimReport(claim, g6, Verdict.SKIP, reason=reason, **kw)


def _verdict(ok: bool) -> Verdict:
    return Verdict.PASS if ok else Verdict.FAIL


# edge-level lemmas ------------------------------------------------------------


def verify_L1(h: SimpleGraph, e: tuple[int, int]) -> ClaimReport:
    """For every t, a t-colouring of h/e lifts to a proper colouring of h minus e."""
    g6 = to_graph6(h)
    extra = {"edge": list(e)}
    if not h.has_edge(*e):
        raise DomainError(f"{e} is not an edge")
    hc = contract_edge(h, e)
    minus = delete_edge(h, e, keep_isolated=True)
    checked = []
    for t in range(1, h.n + 1):
        c = _coloring(hc, t)
        if c is None:
            continue
        colors = dict(c.colors)
        colors[e[0]] = colors[e[1]]
        if not is_proper(minus, colors):
            return ClaimReport(ClaimId.L1, g6, Verdict.FAIL, t=t, extra=extra,
                               witness={"t": t, "coloring": ColorAssignment(colors).to_json()})
        # the library routine must agree with the inline lift
        transfer_contraction_coloring(h, e, c)
        checked.append(t)
    return ClaimReport(ClaimId.L1, g6, Verdict.PASS, extra=extra, vacuous=not checked,
                       witness={"colorable_t": checked})


def verify_L2_L3(h: SimpleGraph, e: tuple[int, int], budgets: Budgets = DEFAULT_BUDGETS) -> ClaimReport:
    """Deleting e keeps t-colourability transferable back to h.

    When no vertex is lost (L2) the H polynomial must have a nonzero point
    over {1..t}; when the pendant v_s is lost (L3) the colouring of the rest
    must extend to v_s.
    """
    g6 = to_graph6(h)
    if not h.has_edge(*e):
        raise DomainError(f"{e} is not an edge")
    hd = delete_edge(h, e)
    lost = h.n - hd.n
    extra: dict = {"edge": list(e)}
    if lost == 2:
        extra["branch"] = "degenerate"
        return ClaimReport(ClaimId.L3, g6, Verdict.PASS, extra=extra, vacuous=True,
                           witness={"note": "both endpoints isolated"})
    if lost == 1:
        v_s = e[0] if h.degree(e[0]) == 1 else e[1]
        extra.update(branch="pendant", v_s=v_s)
        checked = []
        for t in range(2, h.n + 1):
            c = _coloring(hd, t)
            if c is None:
                continue
            ext = extend_pendant_coloring(h, v_s, c)
            if not is_proper(h, ext):
                return ClaimReport(ClaimId.L3, g6, Verdict.FAIL, t=t, extra=extra,
                                   witness={"t": t, "coloring": ext.to_json()})
            checked.append(t)
        return ClaimReport(ClaimId.L3, g6, Verdict.PASS, extra=extra, vacuous=not checked,
                           witness={"colorable_t": checked})
    extra["branch"] = "kept"
    p = strict_prime(h)
    checked = []
    for t in range(1, h.n + 1):
        if _coloring(hd, t) is None:
            continue
        ctx = EncodingContext.strict(h, t)
        try:
            pt = exists_nonzero_on(build_H(ctx, e), ctx.colorset, h.vertices, budgets.eval_cap)
        except ResourceError as exc:
            return _skip(ClaimId.L2, g6, str(exc), p=p, mode="strict", extra=extra)
        if pt is None:
            return ClaimReport(ClaimId.L2, g6, Verdict.FAIL, t=t, p=p, mode="strict", extra=extra,
                               witness={"t": t, "note": "H has no nonzero point over {1..t}"})
        checked.append(t)
    return ClaimReport(ClaimId.L2, g6, Verdict.PASS, p=p, mode="strict", extra=extra,
                       vacuous=not checked, witness={"colorable_t": checked})


# sequence-level checks --------------------------------------------------------


def oriented_edge(op: ElementaryOp, g: SimpleGraph) -> tuple[int, int]:
    """(v_s, v_b) for an operation applied to g: v_s is the vertex that goes away, if any."""
    if op.kind == "contract":
        return op.removed, op.kept()
    a, b = op.edge
    if g.degree(a) == 1 and g.degree(b) != 1:
        return a, b
    if g.degree(b) == 1 and g.degree(a) != 1:
        return b, a
    return a, b


def _prefix_graph(source: SimpleGraph, ops: list[ElementaryOp]) -> SimpleGraph:
    cur = source
    for op in ops:
        cur = op.apply(cur)
    return cur


def verify_L4(
    source: SimpleGraph,
    ops: list[ElementaryOp],
    t: int,
    p: int | None = None,
    sequence: int | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> ClaimReport:
    """At the last operation of ``ops``: S(alpha) != 0 implies P(alpha) != 0 on {1..t}^n.

    The prime defaults to the strict prime of ``source``.
    """
    g6 = to_graph6(source)
    prev = _prefix_graph(source, ops[:-1])
    op = ops[-1]
    e = oriented_edge(op, prev)
    extra = {"ops": [o.to_json() for o in ops], "step": len(ops), "edge": list(e)}
    if p is None:
        ctx = EncodingContext.strict(prev, t, reference=source)
    else:
        ctx = EncodingContext.small(prev, t, p, reference=source)
    mode = ctx.mode
    kw = dict(t=t, p=ctx.p, mode=mode, sequence=sequence, extra=extra)
    s = build_S(ctx, e, keep_isolated=True)
    pp = build_P(ctx)
    count = 0
    try:
        for alpha in nonzero_points(s, ctx.colorset, prev.vertices, budgets.eval_cap):
            count += 1
            if not pp.evaluate(alpha):
                return ClaimReport(ClaimId.L4, g6, Verdict.FAIL, witness={
                    "alpha": {str(v): alpha[v] for v in sorted(alpha)}}, **kw)
    except ResourceError as exc:
        return _skip(ClaimId.L4, g6, str(exc), **kw)
    return ClaimReport(ClaimId.L4, g6, Verdict.PASS, vacuous=count == 0,
                       witness={"nonzero_points": count}, **kw)


def verify_L5(
    source: SimpleGraph,
    ops: list[ElementaryOp],
    t: int,
    sequence: int | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> ClaimReport:
    """Without a K_{t+1} minor, no t+1 vertices induce a clique.

    Cross-checked through the encoding: a (t+1)-subset admits a nonzero
    point of its own graph polynomial over {1..t} unless it induces K_{t+1}.
    """
    g6 = to_graph6(source)
    m = _prefix_graph(source, ops)
    extra = {"ops": [o.to_json() for o in ops], "index": len(ops)}
    kw: dict = dict(t=t, sequence=sequence, extra=extra)
    try:
        if has_clique_minor(m, t + 1, budgets.node_cap):
            return ClaimReport(ClaimId.L5, g6, Verdict.PASS, vacuous=True,
                               witness={"note": f"K_{t + 1} minor present"}, **kw)
        omega = clique_number(m)
        p = strict_prime(source)
        kw.update(p=p, mode="strict")
        for y in combinations(m.sorted_vertices(), t + 1):
            sub = induced(m, y)
            ctx = EncodingContext.strict(sub, t, reference=source)
            has_point = exists_nonzero_on(build_P(ctx), ctx.colorset, y, budgets.eval_cap) is not None
            if has_point == sub.is_complete():
                return ClaimReport(ClaimId.L5, g6, Verdict.FAIL, witness={
                    "subset": list(y), "complete": sub.is_complete(), "nonzero_point": has_point}, **kw)
    except ResourceError as exc:
        return _skip(ClaimId.L5, g6, str(exc), **kw)
    return ClaimReport(ClaimId.L5, g6, _verdict(omega <= t),
                       witness={"clique_number": omega}, **kw)


def verify_L6(
    source: SimpleGraph,
    ops: list[ElementaryOp],
    t: int,
    sequence: int | None = None,
    seed: int = 0,
    budgets: Budgets = DEFAULT_BUDGETS,
) -> ClaimReport:
    """Every edge-maximal degree-<=t spanning subgraph of every m[A] is t-colourable.

    All nonempty subsets are tried when 2^n <= subset_cap; otherwise
    subset_cap subsets are drawn with an RNG seeded from (seed, graph6).
    """
    g6 = to_graph6(source)
    m = _prefix_graph(source, ops)
    extra: dict = {"ops": [o.to_json() for o in ops], "index": len(ops)}
    kw: dict = dict(t=t, sequence=sequence, extra=extra)
    try:
        if has_clique_minor(m, t + 1, budgets.node_cap):
            return ClaimReport(ClaimId.L6, g6, Verdict.PASS, vacuous=True,
                               witness={"note": f"K_{t + 1} minor present"}, **kw)
    except ResourceError as exc:
        return _skip(ClaimId.L6, g6, str(exc), **kw)
    verts = m.sorted_vertices()
    total = 2 ** len(verts) - 1
    if 2 ** len(verts) <= budgets.subset_cap:
        subsets = [
            tuple(v for i, v in enumerate(verts) if mask >> i & 1) for mask in range(1, 2 ** len(verts))
        ]
        sampled = False
    else:
        rng = random.Random(f"{seed}:{to_graph6(m)}")
        masks = sorted(rng.sample(range(1, 2 ** len(verts)), min(budgets.subset_cap, total)))
        subsets = [tuple(v for i, v in enumerate(verts) if mask >> i & 1) for mask in masks]
        sampled = True
        extra["seed"] = seed
    extra["coverage"] = {"subsets": len(subsets), "of": total, "sampled": sampled}
    members = 0
    for a in subsets:
        for sub in bounded_induced_family(m, a, t):
            members += 1
            if _coloring(sub, t) is None:
                return ClaimReport(ClaimId.L6, g6, Verdict.FAIL, witness={
                    "subset": list(a), "member_edges": [list(x) for x in sub.edges()]}, **kw)
    return ClaimReport(ClaimId.L6, g6, Verdict.PASS, witness={"members": members}, **kw)


def verify_H1_absence(seq: MinorSequence, sequence: int | None = None) -> ClaimReport:
    """No step turns a non-t-colourable graph into a t-colourable one."""
    g6 = to_graph6(seq.source)
    t = seq.target_t
    extra = {"ops": seq.ops_json()}
    graphs = seq.graphs()
    colorable = [_coloring(x, t) is not None for x in graphs]
    for i in range(1, len(graphs)):
        if colorable[i] and not colorable[i - 1]:
            return ClaimReport(ClaimId.H1, g6, Verdict.FAIL, t=t, sequence=sequence, extra=extra,
                               witness={"step": i, "op": seq.ops[i - 1].to_json()})
    return ClaimReport(ClaimId.H1, g6, Verdict.PASS, t=t, sequence=sequence, extra=extra,
                       vacuous=not seq.steps, witness={"steps": len(seq.steps)})


def verify_C1(seq: MinorSequence, sequence: int | None = None) -> ClaimReport:
    """The final K_t of the sequence is t-colourable."""
    g6 = to_graph6(seq.source)
    t = seq.target_t
    c = _coloring(seq.final, t)
    ok = c is not None and is_proper(seq.final, c)
    return ClaimReport(ClaimId.C1, g6, _verdict(ok), t=t, sequence=sequence,
                       extra={"ops": seq.ops_json()},
                       witness=c.to_json() if c else {"note": "no colouring of the final graph"})


# graph-level checks -----------------------------------------------------------


def verify_chi_le_h(g: SimpleGraph, budgets: Budgets = DEFAULT_BUDGETS) -> ClaimReport:
    g6 = to_graph6(g)
    try:
        h = hadwiger_number(g, budgets.node_cap)
    except ResourceError as exc:
        return _skip(ClaimId.COR_HADWIGER, g6, str(exc))
    chi = chromatic_number(g)
    return ClaimReport(ClaimId.COR_HADWIGER, g6, _verdict(chi <= h), t=h,
                       witness={"chi": chi, "h": h})


def verify_four_color(g: SimpleGraph, budgets: Budgets = DEFAULT_BUDGETS) -> ClaimReport:
    """Graphs with h <= 4 have chi <= 4."""
    g6 = to_graph6(g)
    try:
        h = hadwiger_number(g, budgets.node_cap)
    except ResourceError as exc:
        return _skip(ClaimId.COR_4COLOR, g6, str(exc))
    if h > 4:
        return ClaimReport(ClaimId.COR_4COLOR, g6, Verdict.PASS, vacuous=True, witness={"h": h})
    chi = chromatic_number(g)
    return ClaimReport(ClaimId.COR_4COLOR, g6, _verdict(chi <= 4), witness={"chi": chi, "h": h})


def verify_C2(g: SimpleGraph, budgets: Budgets = DEFAULT_BUDGETS) -> ClaimReport:
    """P_0 has a nonzero point over {1..h} with the strict prime."""
    g6 = to_graph6(g)
    try:
        h = hadwiger_number(g, budgets.node_cap)
        ctx = EncodingContext.strict(g, h)
        pt = exists_nonzero_on(build_P(ctx), ctx.colorset, g.vertices, budgets.eval_cap)
    except ResourceError as exc:
        return _skip(ClaimId.C2, g6, str(exc))
    kw = dict(t=h, p=ctx.p, mode="strict")
    if pt is None:
        return ClaimReport(ClaimId.C2, g6, Verdict.FAIL, witness={"note": "P_0 vanishes on K^n"}, **kw)
    return ClaimReport(ClaimId.C2, g6, _verdict(is_proper(g, pt)), witness=pt.to_json(), **kw)


# the shifted-colour pipeline ----------------------------------------------------


def factored_form_holds(ctx: EncodingContext, g_red: FieldPoly, m2: Iterable[int],
                        term_cap: int = DEFAULT_TERM_CAP) -> bool:
    """G' == (-1)^|M2| prod_{v in M2} prod_{l != t} (v - l) * G'|_{M2 = t} after reduction."""
    p, t = ctx.p, ctx.t
    r = g_red
    m2 = sorted(m2)
    for v in m2:
        r = substitute(r, v, t)
    factors = [r, FieldPoly.constant(p, (-1) ** len(m2))]
    factors += [FieldPoly.linear(p, v, l) for v in m2 for l in range(p) if l != t]
    return product(factors, p, term_cap=term_cap) == g_red


def verify_claim3_pipeline(
    g: SimpleGraph,
    e: tuple[int, int],
    t: int,
    p: int | None = None,
    budgets: Budgets = DEFAULT_BUDGETS,
    stop_after: str | None = None,
) -> list[ClaimReport]:
    """Run the stages in order; one report per stage.

    A stage whose precondition is not met (Q' == 0, no beta) is reported as
    vacuous, a budget overrun as SKIP for that stage and every later one.
    ``stop_after`` truncates the run, which leaves earlier verdicts unchanged.
    """
    g6 = to_graph6(g)
    p = least_small_prime(t) if p is None else p
    reports: list[ClaimReport] = []

    def emit(stage: str, verdict: Verdict, witness: Any = None, vacuous: bool = False,
             reason: str | None = None, **more) -> None:
        claim = dict(PIPELINE_STAGES)[stage]
        extra = {"edge": list(e), "stage": stage, **more}
        reports.append(ClaimReport(claim, g6, verdict, t=t, p=p, mode="small", extra=extra,
                                   vacuous=vacuous, witness=witness, reason=reason))

    names = [s for s, _ in PIPELINE_STAGES]
    if stop_after is not None:
        names = names[: names.index(stop_after) + 1]

    def rest_vacuous(after: str, why: str) -> None:
        for stage in names[names.index(after) + 1:]:
            emit(stage, Verdict.PASS, {"note": why}, vacuous=True)

    def rest_skip(at: str, why: str) -> None:
        for stage in names[names.index(at):]:
            emit(stage, Verdict.SKIP, reason=why)

    if p < t + 2 or not is_prime(p):
        rest_skip(names[0], f"pipeline needs a prime p >= t + 2 = {t + 2}, got {p}")
        return reports
    ctx = EncodingContext.small(g, t, p)
    cap = budgets.term_cap
    stage = names[0]
    try:
        # C4: Q' is not identically zero
        q_red = build_Q(ctx, e).expand(term_cap=cap)
        semantic = None
        if p ** len(q_red.variables()) <= budgets.eval_cap:
            semantic = not is_zero_semantic(q_red, budgets.eval_cap)
        q_ok = not q_red.is_zero()
        if semantic is not None and semantic != q_ok:
            raise AssertionError("symbolic and semantic zero tests disagree")
        emit(stage, Verdict.PASS if q_ok else Verdict.FAIL,
             {"terms": len(q_red.terms), "semantic_nonzero": semantic})
        if not q_ok:
            rest_vacuous(stage, "Q' is identically zero")
            return reports
        if len(names) == 1:
            return reports

        # T31: greedy split and its postconditions
        stage = "split"
        split = select_M1(ctx, e, cap)
        gpoly = build_G_poly(ctx, e, split)
        g_red = gpoly.expand(term_cap=cap)
        post = not g_red.is_zero() and all(
            product([g_red, FieldPoly.linear(p, v, t)], p, term_cap=cap).is_zero() for v in split.m2
        )
        partition = split.m1 | split.m2 | {split.v_s} == g.vertices and not split.m1 & split.m2
        emit(stage, _verdict(post and partition), split.to_json())
        if stage == names[-1]:
            return reports

        stage = "factored_form"
        emit(stage, _verdict(factored_form_holds(ctx, g_red, split.m2, cap)), split.to_json())
        if stage == names[-1]:
            return reports

        if not split.m2:
            # every other vertex avoids colour t; v_s takes it
            stage = "beta"
            pt = exists_nonzero_on(gpoly, range(p), g.vertices, budgets.eval_cap)
            colors = dict(pt.colors) if pt else {}
            if colors:
                colors[split.v_s] = t
            ok = bool(colors) and all(1 <= c <= t for c in colors.values()) and is_proper(g, colors)
            emit(stage, _verdict(ok), {"shortcut": True, "coloring": ColorAssignment(colors).to_json()},
                 vacuous=True, branch="empty_m2")
            rest_vacuous(stage, "M2 is empty; t-colouring found directly")
            return reports

        # T32: beta
        stage = "beta"
        bs = find_beta(ctx, gpoly, split, term_cap=cap)
        bound_ok = all(j.degree <= j.degree_bound for j in bs.j_polys.values())
        w = bs.to_json()
        w["degree_bounds_hold"] = bound_ok
        emit(stage, _verdict(bs.beta is not None and bound_ok), w)
        if bs.beta is None:
            rest_vacuous(stage, "no qualifying beta")
            return reports
        if stage == names[-1]:
            return reports
        beta = bs.beta

        # T33: K equals S-hat
        stage = "k_equals_s_hat"
        kp = build_K_poly(ctx, bs.g_reduced, split, beta, cap)
        s_hat = build_S(ctx.shifted(beta), e, keep_isolated=True).expand(term_cap=cap)
        if not kp.exact:
            emit(stage, Verdict.FAIL, {"beta": beta, "division_failed_at": kp.failed_vertex,
                                      "remainder": kp.remainder.body_text() if kp.remainder else None})
        else:
            same = kp.poly == s_hat
            emit(stage, _verdict(same), {
                "beta": beta,
                "k_terms": len(kp.poly.terms),
                "s_hat_terms": len(s_hat.terms),
                "difference_terms": len((kp.poly - s_hat).terms),
            })
        if stage == names[-1]:
            return reports

        # C3: a colouring from the shifted colour set
        stage = "shifted_witness"
        shifted = ColorSet.shifted(t, beta, p)
        sctx = ctx.shifted(beta)
        s_hat_f = build_S(sctx, e, keep_isolated=True)
        alpha = exists_nonzero_on(s_hat_f, shifted, g.vertices, budgets.eval_cap)
        ok = alpha is not None and is_proper(g, alpha)
        wit: dict = {"beta": beta, "alpha": alpha.to_json() if alpha else None}
        if alpha is not None and kp.exact:
            wit["k_nonzero_at_alpha"] = bool(kp.poly(alpha.colors))
        emit(stage, _verdict(ok), wit)
        if stage == names[-1]:
            return reports

        stage = "recolor"
        if alpha is None:
            emit(stage, Verdict.PASS, {"note": "no shifted witness"}, vacuous=True)
            return reports
        re = recolor(alpha, beta, t, ColorSet.standard(t, p))
        pval = build_P(ctx).evaluate(re.colors)
        emit(stage, _verdict(is_proper(g, re) and bool(pval) and re.uses_only_colorset()),
             {"beta": beta, "coloring": re.to_json()})
    except ResourceError as exc:
        rest_skip(stage, str(exc))
    return reports


# orchestration -----------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    claims: frozenset[ClaimId] = frozenset(ClaimId)
    prime: int | None = None
    sequences: int = 3
    seed: int = 0
    budgets: Budgets = DEFAULT_BUDGETS
    timings: bool = False

    def to_json(self) -> dict:
        return {
            "claims": sorted(c.value for c in self.claims),
            "prime": self.prime,
            "sequences": self.sequences,
            "seed": self.seed,
            "budgets": {
                "term_cap": self.budgets.term_cap,
                "node_cap": self.budgets.node_cap,
                "eval_cap": self.budgets.eval_cap,
                "subset_cap": self.budgets.subset_cap,
                "pipeline_max_n": self.budgets.pipeline_max_n,
            },
        }


def _timed(fn: Callable[[], ClaimReport | list[ClaimReport]], timings: bool) -> list[ClaimReport]:
    start = time.perf_counter()
    out = fn()
    reports = out if isinstance(out, list) else [out]
    if timings:
        ms = round((time.perf_counter() - start) * 1000, 3)
        for r in reports:
            r.wall_ms = ms
    return reports


def graph_reports(g: SimpleGraph, config: SuiteConfig) -> list[ClaimReport]:
    """All requested reports for one graph, in a fixed order."""
    want = config.claims
    b = config.budgets
    out: list[ClaimReport] = []

    def run(fn: Callable[[], ClaimReport | list[ClaimReport]]) -> None:
        out.extend(r for r in _timed(fn, config.timings) if r.claim in want)

    g6 = to_graph6(g)
    if ClaimId.COR_HADWIGER in want:
        run(lambda: verify_chi_le_h(g, b))
    if ClaimId.COR_4COLOR in want:
        run(lambda: verify_four_color(g, b))
    if ClaimId.C2 in want:
        run(lambda: verify_C2(g, b))
    edges = g.edges()
    if ClaimId.L1 in want:
        for a, c in edges:
            for e in ((a, c), (c, a)):
                run(lambda e=e: verify_L1(g, e))
    if want & {ClaimId.L2, ClaimId.L3}:
        for e in edges:
            run(lambda e=e: verify_L2_L3(g, e, b))

    seq_claims = {ClaimId.L4, ClaimId.L5, ClaimId.L6, ClaimId.H1, ClaimId.C1}
    pipeline = want & PIPELINE_CLAIMS
    if not (want & seq_claims or pipeline):
        return out
    try:
        h = hadwiger_number(g, b.node_cap)
        seqs = minor_sequences(g, h, config.sequences, b.node_cap) if want & seq_claims else []
    except ResourceError as exc:
        for claim in sorted(want & (seq_claims | PIPELINE_CLAIMS)):
            out.append(_skip(claim, g6, str(exc)))
        return out
    for j, seq in enumerate(seqs):
        if ClaimId.C1 in want:
            run(lambda: verify_C1(seq, j))
        if ClaimId.H1 in want:
            run(lambda: verify_H1_absence(seq, j))
        if ClaimId.L4 in want:
            ops = seq.ops
            for i in range(1, len(ops) + 1):
                run(lambda i=i: verify_L4(g, ops[:i], h, config.prime, j, b))
    if seqs and want & {ClaimId.L5, ClaimId.L6}:
        ops = seqs[0].ops
        for i in range(len(ops) + 1):
            if ClaimId.L5 in want:
                run(lambda i=i: verify_L5(g, ops[:i], h, 0, b))
            if ClaimId.L6 in want:
                run(lambda i=i: verify_L6(g, ops[:i], h, 0, config.seed, b))
    if pipeline:
        if g.n > b.pipeline_max_n:
            for claim in sorted(pipeline):
                out.append(_skip(claim, g6, f"pipeline limited to n <= {b.pipeline_max_n}",
                                 t=h, mode="small"))
        else:
            for a, c in edges:
                for e in ((a, c), (c, a)):
                    run(lambda e=e: verify_claim3_pipeline(g, e, h, config.prime, b))
    return out


def _graph_lines(args: tuple[str, SuiteConfig]) -> list[str]:
    g6, config = args
    return [r.to_line() for r in graph_reports(from_graph6(g6), config)]


def run_suite(
    corpus: Iterable[SimpleGraph],
    config: SuiteConfig,
    jobs: int = 1,
) -> Iterator[ClaimReport]:
    """Reports for every graph, in corpus order whatever the worker count."""
    for line in run_suite_lines(corpus, config, jobs):
        yield ClaimReport.from_json(json.loads(line))


def run_suite_lines(corpus: Iterable[SimpleGraph], config: SuiteConfig, jobs: int = 1) -> Iterator[str]:
    tasks = ((to_graph6(g), config) for g in corpus)
    if jobs <= 1:
        for task in tasks:
            yield from _graph_lines(task)
        return
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves input order, so the merge is deterministic
        for lines in pool.map(_graph_lines, tasks, chunksize=4):
            yield from lines


def header_record(config: SuiteConfig, extra: dict | None = None) -> dict:
    cfg = config.to_json()
    if extra:
        cfg.update(extra)
    return {"record": "header", "schema": SCHEMA, "version": SCHEMA_VERSION, "config": cfg}


def rerun(report: ClaimReport, config: SuiteConfig | None = None) -> ClaimReport | None:
    """Re-execute the instance a report describes; None when it cannot be rebuilt."""
    config = config or SuiteConfig()
    b = config.budgets
    g = from_graph6(report.graph_g6)
    x = report.extra
    ops = [ElementaryOp.from_json(o) for o in x.get("ops", [])]
    c = report.claim
    if c == ClaimId.L1:
        return verify_L1(g, tuple(x["edge"]))
    if c in (ClaimId.L2, ClaimId.L3):
        return verify_L2_L3(g, tuple(x["edge"]), b)
    if c == ClaimId.L4:
        p = report.p if report.mode == "small" else None
        return verify_L4(g, ops, report.t, p, report.sequence, b)
    if c == ClaimId.L5:
        return verify_L5(g, ops, report.t, report.sequence, b)
    if c == ClaimId.L6:
        return verify_L6(g, ops, report.t, report.sequence, x.get("seed", config.seed), b)
    if c in (ClaimId.H1, ClaimId.C1):
        seq = MinorSequence.replay(g, report.t, ops)
        return (verify_H1_absence if c == ClaimId.H1 else verify_C1)(seq, report.sequence)
    if c == ClaimId.COR_HADWIGER:
        return verify_chi_le_h(g, b)
    if c == ClaimId.COR_4COLOR:
        return verify_four_color(g, b)
    if c == ClaimId.C2:
        return verify_C2(g, b)
    if c in PIPELINE_CLAIMS:
        stage = x.get("stage")
        if stage is None:
            return None
        for r in verify_claim3_pipeline(g, tuple(x["edge"]), report.t, report.p, b, stop_after=stage):
            if r.extra.get("stage") == stage:
                return r
    return None


def first_sequence(g: SimpleGraph, node_cap: int = DEFAULT_NODE_CAP) -> MinorSequence:
    return find_minor_sequence(g, hadwiger_number(g, node_cap), 0, node_cap)
