"""Canonical byte encodings of colored diagrams.

Two colored diagrams get the same encoding exactly when they differ by
an arc relabeling, a node reordering, and a bijection of color labels
that respects the merge partition.  Node tuples themselves carry no
rotational freedom (each kind has a unique valid presentation), so
canonicalization reduces to a minimum-BFS code per connected component,
minimized over start nodes, with color classes numbered by first
appearance.

Used as the memoization key of both evaluation engines and for eager
like-term collection in linear combinations.
"""

from __future__ import annotations

from itertools import permutations

from .diagram import ColoredDiagram, DiagramError, IN_SLOTS, KINDS

__all__ = ["canonical_form"]

_KIND_ID = {k: i for i, k in enumerate(KINDS)}

# Safety valve against pathological symmetry blowup; desk-size states
# stay far below this.
_MAX_CANDIDATES = 100_000


def _component_nodes(cd: ColoredDiagram):
    return cd.diagram.node_components()


def _bfs_code(cd: ColoredDiagram, start: int, members: set):
    """Structure code and visit data for one BFS, rooted at ``start``.

    Returns ``(code, arc_order)`` where ``code`` is a flat int tuple and
    ``arc_order`` lists original arc ids by first touch.
    """
    d = cd.diagram
    arc_ids: dict = {}
    arc_order = []

    def aid(a):
        if a not in arc_ids:
            arc_ids[a] = len(arc_ids)
            arc_order.append(a)
        return arc_ids[a]

    seen = {start}
    queue = [start]
    code = []
    while queue:
        ni = queue.pop(0)
        node = d.nodes[ni]
        code.append(_KIND_ID[node.kind])
        for a in node.arcs:
            code.append(aid(a))
        for a in node.arcs:
            for endpoint in (d.head[a][0], d.tail[a][0]):
                if endpoint in members and endpoint not in seen:
                    seen.add(endpoint)
                    queue.append(endpoint)
    return tuple(code), arc_order


def _component_candidates(cd: ColoredDiagram, members):
    """Minimal structure code of a component and the color-root sequences
    of every start achieving it."""
    member_set = set(members)
    best = None
    seqs = []
    for start in members:
        code, arc_order = _bfs_code(cd, start, member_set)
        roots = tuple(cd.partition.find(cd.arc_color[a]) for a in arc_order)
        if best is None or code < best:
            best = code
            seqs = [roots]
        elif code == best:
            seqs.append(roots)
    return best, seqs


def canonical_form(cd: ColoredDiagram) -> bytes:
    """Canonical encoding of a colored diagram (classical and/or singular)."""
    comps = _component_nodes(cd)
    cands = [_component_candidates(cd, members) for members in comps]
    order = sorted(range(len(cands)), key=lambda i: cands[i][0])

    # Permute only within groups of structurally identical components.
    groups = []
    for i in order:
        if groups and cands[groups[-1][-1]][0] == cands[i][0]:
            groups[-1].append(i)
        else:
            groups.append([i])

    total = 1
    for g in groups:
        total *= _factorial(len(g))
    for _, seqs in cands:
        total *= len(seqs)
    if total > _MAX_CANDIDATES:
        raise DiagramError("canonical form search space too large")

    loop_roots = [cd.partition.find(c) for c in cd.loop_color.values()]

    best = None
    for ordering in _orderings(groups):
        for root_seqs in _start_choices(cands, ordering):
            ids: dict = {}
            color_code = []
            for seq in root_seqs:
                for r in seq:
                    if r not in ids:
                        ids[r] = len(ids)
                    color_code.append(ids[r])
            loop_code = _encode_loops(loop_roots, ids)
            candidate = (
                tuple(cands[i][0] for i in ordering),
                tuple(color_code),
                loop_code,
            )
            if best is None or candidate < best:
                best = candidate
    if best is None:  # no nodes at all
        ids = {}
        best = ((), (), _encode_loops(loop_roots, ids))
    return repr(best).encode()


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _orderings(groups):
    def rec(i):
        if i == len(groups):
            yield []
            return
        for perm in permutations(groups[i]):
            for rest in rec(i + 1):
                yield list(perm) + rest
    return rec(0)


def _start_choices(cands, ordering):
    def rec(i):
        if i == len(ordering):
            yield []
            return
        for seq in cands[ordering[i]][1]:
            for rest in rec(i + 1):
                yield [seq] + rest
    return rec(0)


def _encode_loops(loop_roots, ids) -> tuple:
    seen = sorted(ids[r] for r in loop_roots if r in ids)
    fresh = {}
    for r in loop_roots:
        if r not in ids:
            fresh[r] = fresh.get(r, 0) + 1
    # Fresh classes are interchangeable; canonicalize by group size.
    fresh_sizes = sorted(fresh.values(), reverse=True)
    return (tuple(seen), tuple(fresh_sizes))
