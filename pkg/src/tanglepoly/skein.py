"""The invariant of colored classical and singular links, two ways.

``state_sum`` resolves every classical crossing into three states
(oriented smoothing with merged colors, singular vertex with merged
colors, singular vertex with colors kept):

    [L+] = -w/(t+1) [smooth, merged] - w/(t+1) [vertex, merged] + w [vertex, kept]
    [L-] = -t/(w(t+1)) [smooth, merged] - t/(w(t+1)) [vertex, merged] + 1/w [vertex, kept]

and evaluates the resulting colored 4-valent graphs with the graphical
calculus.  ``skein_recursive`` never leaves the classical world: it
unknots a descending diagram by the defining skein relations (the
same-color relation and its two-color extension), terminating on
(color classes, crossings, first-bad-position).  The two engines are
independent implementations of the same invariant and are checked
against each other.

Singular crossings are resolved by either of two equivalent relations
(``Rel1`` via positive crossings, ``Rel2`` via negative ones); their
agreement is itself a theorem that the verification suite exercises.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .algebra import ONE, RationalFunction, named_constant, rf
from .canonical import canonical_form
from .diagram import (
    ColoredDiagram,
    DiagramError,
    IN_SLOTS,
    singularized_node,
    smooth_node,
    switched_node,
    vertex_filled,
)
from .grapheval import LinearCombination, evaluate_graph, state_base_value, unlink_value

__all__ = [
    "SkeinTerm",
    "expand_crossing",
    "resolve_singular",
    "state_sum",
    "skein_recursive",
    "invariant",
    "EngineDisagreement",
]


@dataclass
class SkeinTerm:
    weight: RationalFunction
    state: ColoredDiagram


class EngineDisagreement(AssertionError):
    """The two evaluation engines disagreed: a correctness bug."""

    def __init__(self, message, diagram=None):
        super().__init__(message)
        self.diagram = diagram


def _strand_in_arcs(cd: ColoredDiagram, index: int):
    node = cd.diagram.nodes[index]
    i0, i1 = IN_SLOTS[node.kind]
    return node.arcs[i0], node.arcs[i1]


def expand_crossing(term: SkeinTerm, index: int):
    """Resolve one classical crossing into its three states."""
    cd = term.state
    node = cd.diagram.nodes[index]
    if node.kind == "V":
        raise DiagramError("expand_crossing needs a classical crossing")
    a_in, b_in = _strand_in_arcs(cd, index)
    merged = cd.merged(a_in, b_in)
    smooth = smooth_node(merged, index)
    vertex_m = merged.replace_node(index, singularized_node(node))
    vertex_k = cd.replace_node(index, singularized_node(node))
    if node.kind == "X+":
        c_s = named_constant("EXPAND_POS_SMOOTH")
        c_m = named_constant("EXPAND_POS_VERTEX_MERGED")
        c_k = named_constant("EXPAND_POS_VERTEX_KEPT")
    else:
        c_s = named_constant("EXPAND_NEG_SMOOTH")
        c_m = named_constant("EXPAND_NEG_VERTEX_MERGED")
        c_k = named_constant("EXPAND_NEG_VERTEX_KEPT")
    w = term.weight
    return [
        SkeinTerm(w * c_s, smooth),
        SkeinTerm(w * c_m, vertex_m),
        SkeinTerm(w * c_k, vertex_k),
    ]


def resolve_singular(term: SkeinTerm, index: int, strategy: str = "Rel1"):
    """Resolve one singular crossing into three classical terms.

    Rel1: [V] = 1/w [+, kept] + 1/t [smooth, merged] + 1/(tw) [+, merged]
    Rel2: [V] = w [-, kept] + t [smooth, merged] + tw [-, merged]
    """
    cd = term.state
    node = cd.diagram.nodes[index]
    if node.kind != "V":
        raise DiagramError("resolve_singular needs a singular crossing")
    a_in, b_in = _strand_in_arcs(cd, index)
    merged = cd.merged(a_in, b_in)
    smooth = smooth_node(merged, index)
    if strategy == "Rel1":
        sign, c_k, c_s, c_m = "X+", rf("1/w"), rf("1/t"), rf("1/(t*w)")
    elif strategy == "Rel2":
        sign, c_k, c_s, c_m = "X-", rf("w"), rf("t"), rf("t*w")
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    filled_k = cd.replace_node(index, vertex_filled(node, sign))
    filled_m = merged.replace_node(index, vertex_filled(node, sign))
    w = term.weight
    return [
        SkeinTerm(w * c_k, filled_k),
        SkeinTerm(w * c_s, smooth),
        SkeinTerm(w * c_m, filled_m),
    ]


# ---------------------------------------------------------------------------
# State sum
# ---------------------------------------------------------------------------


def state_sum(cd: ColoredDiagram, memo: Optional[dict] = None) -> RationalFunction:
    """Expand all classical crossings, then evaluate the graph states."""
    if memo is None:
        memo = {}
    pending = [SkeinTerm(ONE, cd)]
    states = LinearCombination()
    while pending:
        term = pending.pop()
        classical = term.state.diagram.classical_nodes()
        if classical:
            pending.extend(expand_crossing(term, classical[0]))
        else:
            states.add(term.weight, term.state)
    total = None
    for weight, graph in states.items():
        piece = weight * evaluate_graph(graph, memo)
        total = piece if total is None else total + piece
    if total is None:
        raise DiagramError("empty diagram has no invariant")
    return total


# ---------------------------------------------------------------------------
# Descending-diagram recursion
# ---------------------------------------------------------------------------


def _traversal(cd: ColoredDiagram):
    """Visit order of node passes: components by least arc, from their least arc."""
    d = cd.diagram
    visits = []
    for comp in d.components():
        if isinstance(comp, tuple):
            continue
        start = min(comp)
        arc = start
        while True:
            ni, slot = d.head[arc]
            visits.append((ni, slot))
            arc = d.nodes[ni].arcs[d.nodes[ni].opposite(slot)]
            if arc == start:
                break
    return visits


def _first_bad(cd: ColoredDiagram):
    """Position and node of the first under-first crossing visit, if any."""
    seen: set = set()
    for pos, (ni, slot) in enumerate(_traversal(cd)):
        if ni in seen:
            continue
        seen.add(ni)
        kind = cd.diagram.nodes[ni].kind
        if kind == "V":
            raise DiagramError("recursive engine needs a classical diagram")
        over_first = (kind == "X+" and slot == 3) or (kind == "X-" and slot == 1)
        if not over_first:
            return pos, ni
    return None


def _descending_value(cd: ColoredDiagram) -> RationalFunction:
    counts: dict = {}
    for comp in cd.diagram.components():
        if isinstance(comp, tuple):
            col = cd.loop_color[comp[1]]
        else:
            col = cd.arc_color[min(comp)]
        root = cd.partition.find(col)
        counts[root] = counts.get(root, 0) + 1
    return unlink_value(counts.values())


def skein_recursive(cd: ColoredDiagram, memo: Optional[dict] = None) -> RationalFunction:
    """The invariant by descending-diagram skein recursion (classical only)."""
    if memo is None:
        memo = {}
    return _recurse(cd, memo)


def _recurse(cd: ColoredDiagram, memo: dict) -> RationalFunction:
    key = canonical_form(cd)
    if key in memo:
        return memo[key]
    bad = _first_bad(cd)
    if bad is None:
        value = _descending_value(cd)
        memo[key] = value
        return value
    _, ni = bad
    node = cd.diagram.nodes[ni]
    a_in, b_in = _strand_in_arcs(cd, ni)
    same = cd.partition.same(cd.arc_color[a_in], cd.arc_color[b_in])
    switched = cd.replace_node(ni, switched_node(node))
    merged = cd.merged(a_in, b_in)
    smooth_m = smooth_node(merged, ni)
    terms = []
    if same:
        if node.kind == "X+":
            # F+ = t w^2 F- + w(t-1) F0
            terms = [(rf("t*w^2"), switched), (rf("w*(t-1)"), smooth_m)]
        else:
            # F- = 1/(t w^2) F+ + (1-t)/(t w) F0
            terms = [(rf("1/(t*w^2)"), switched), (rf("(1-t)/(t*w)"), smooth_m)]
    else:
        switched_m = merged.replace_node(ni, switched_node(node))
        same_m = merged
        if node.kind == "X+":
            # F+(a,b) = w^2 F-(a,b) + w(t-1/t) F0(m) + t w^2 F-(m) - 1/t F+(m)
            terms = [
                (rf("w^2"), switched),
                (rf("w*(t-t^-1)"), smooth_m),
                (rf("t*w^2"), switched_m),
                (rf("-1/t"), same_m),
            ]
        else:
            # F-(a,b) = 1/w^2 F+(a,b) - (t-1/t)/w F0(m) - t F-(m) + 1/(t w^2) F+(m)
            terms = [
                (rf("1/w^2"), switched),
                (rf("-(t-t^-1)/w"), smooth_m),
                (rf("-t"), same_m),
                (rf("1/(t*w^2)"), switched_m),
            ]
    total = None
    for coeff, child in terms:
        piece = coeff * _recurse(child, memo)
        total = piece if total is None else total + piece
    memo[key] = total
    return total


# ---------------------------------------------------------------------------
# Public entry point
# ---------------------------------------------------------------------------


def invariant(cd: ColoredDiagram, engine: str = "state-sum") -> RationalFunction:
    """The invariant of a colored (possibly singular) diagram.

    engine: "state-sum" (default), "recursive", or "both" (errors on
    disagreement, which would indicate a bug).
    """
    if engine in ("state-sum", "StateSum"):
        return state_sum(cd)
    if engine in ("recursive", "Recursive"):
        return _recursive_full(cd)
    if engine in ("both", "Both"):
        a = state_sum(cd)
        b = _recursive_full(cd)
        if a != b:
            raise EngineDisagreement(
                f"engines disagree: state-sum {a} vs recursive {b}", cd
            )
        return a
    raise ValueError(f"unknown engine {engine!r}")


def _recursive_full(cd: ColoredDiagram, strategy: str = "Rel1") -> RationalFunction:
    """Recursive engine on arbitrary diagrams: resolve vertices first."""
    pending = [SkeinTerm(ONE, cd)]
    classical = []
    while pending:
        term = pending.pop()
        vertices = term.state.diagram.singular_nodes()
        if vertices:
            pending.extend(resolve_singular(term, vertices[0], strategy))
        else:
            classical.append(term)
    memo: dict = {}
    total = None
    for term in classical:
        piece = term.weight * skein_recursive(term.state, memo)
        total = piece if total is None else total + piece
    if total is None:
        raise DiagramError("empty diagram has no invariant")
    return total
