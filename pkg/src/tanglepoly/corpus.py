"""Bundled diagrams and seeded random generation.

Random diagrams are closures of random singular braid words, so every
generated PD code is planar-realizable by construction.  Letters are
``+i`` / ``-i`` for classical generators at position ``i`` (1-based) and
``("v", i)`` for a transverse vertex on the same strand pair.
"""

from __future__ import annotations

import random
from typing import Iterable, Optional, Sequence

from .diagram import ColoredDiagram, ColorPartition, Diagram, DiagramError, Node

__all__ = [
    "braid_closure",
    "named_diagrams",
    "get_named",
    "random_word",
    "random_colored_diagram",
    "random_state_graph",
    "with_colors",
]


def braid_closure(word: Sequence, strands: int,
                  colors: Optional[Sequence[int]] = None) -> ColoredDiagram:
    """Trace closure of a singular braid word.

    Generators act on strand pairs (i, i+1): ``+i`` crosses left over
    right, ``-i`` right over left, ``("v", i)`` is a vertex.
    """
    if strands < 1:
        raise DiagramError("need at least one strand")
    tops = list(range(strands))
    next_arc = strands
    nodes = []
    for letter in word:
        if isinstance(letter, tuple):
            kind, pos = letter
            if kind != "v":
                raise DiagramError(f"unknown braid letter {letter!r}")
        else:
            kind, pos = ("+", letter) if letter > 0 else ("-", -letter)
        if not 1 <= pos < strands:
            raise DiagramError(f"generator position {pos} out of range")
        a, b = tops[pos - 1], tops[pos]
        p, q = next_arc, next_arc + 1
        next_arc += 2
        if kind == "+":
            nodes.append(Node("X+", (b, q, p, a)))
        elif kind == "-":
            nodes.append(Node("X-", (a, b, q, p)))
        else:
            nodes.append(Node("V", (a, b, q, p)))
        tops[pos - 1], tops[pos] = p, q

    rename = {}
    loops = []
    for j in range(strands):
        if tops[j] == j:
            loops.append(len(loops))
        else:
            rename[tops[j]] = j
    closed = [Node(n.kind, tuple(rename.get(a, a) for a in n.arcs)) for n in nodes]
    diagram = Diagram(closed, loops)
    return with_colors(diagram, colors)


def with_colors(diagram: Diagram, colors: Optional[Sequence[int]] = None) -> ColoredDiagram:
    """Attach a coloration given as a label per component (defaults to all distinct)."""
    n = len(diagram.components())
    if colors is None:
        colors = list(range(n))
    if len(colors) != n:
        raise DiagramError(f"need {n} colors, got {len(colors)}")
    return ColoredDiagram.from_coloration(diagram, dict(enumerate(colors)))


# ---------------------------------------------------------------------------
# Named corpus
# ---------------------------------------------------------------------------


def _curl_graph() -> ColoredDiagram:
    return with_colors(Diagram([Node("V", (0, 1, 1, 0))]))


_NAMED = {
    "unknot": lambda: with_colors(Diagram([], [0])),
    "unknot_kink_pos": lambda: braid_closure([1], 2),
    "unknot_kink_neg": lambda: braid_closure([-1], 2),
    "unlink2": lambda: with_colors(Diagram([], [0, 1])),
    "unlink2_same": lambda: with_colors(Diagram([], [0, 1]), [0, 0]),
    "unlink3": lambda: with_colors(Diagram([], [0, 1, 2])),
    "hopf_pos": lambda: braid_closure([1, 1], 2),
    "hopf_pos_same": lambda: braid_closure([1, 1], 2, [0, 0]),
    "hopf_neg": lambda: braid_closure([-1, -1], 2),
    "trefoil_right": lambda: braid_closure([1, 1, 1], 2),
    "trefoil_left": lambda: braid_closure([-1, -1, -1], 2),
    "figure8": lambda: braid_closure([1, -2, 1, -2], 3),
    "solomon": lambda: braid_closure([1, 1, 1, 1], 2),
    "solomon_same": lambda: braid_closure([1, 1, 1, 1], 2, [0, 0]),
    "cinquefoil": lambda: braid_closure([1] * 5, 2),
    "knot5_2": lambda: braid_closure([1, 1, 1, 2, -1, 2], 3),
    "knot6_1": lambda: braid_closure([1, 1, 2, -1, -3, 2, -3], 4),
    "borromean": lambda: braid_closure([1, -2, 1, -2, 1, -2], 3),
    "borromean_2col": lambda: braid_closure([1, -2, 1, -2, 1, -2], 3, [0, 0, 1]),
    "whitehead": lambda: braid_closure([1, 1, 2, -1, 2], 3),
    "singular_hopf": lambda: braid_closure([("v", 1), 1], 2),
    "singular_hopf_same": lambda: braid_closure([("v", 1), 1], 2, [0, 0]),
    "singular_trefoil": lambda: braid_closure([("v", 1), 1, 1], 2),
    "singular_figure8": lambda: braid_closure([("v", 1), -2, 1, -2], 3),
    "curl_graph": _curl_graph,
    "bigon_graph": lambda: braid_closure([("v", 1), ("v", 1)], 2),
    "bigon_graph_same": lambda: braid_closure([("v", 1), ("v", 1)], 2, [0, 0]),
    "triple_theta": lambda: braid_closure([("v", 1), ("v", 1), ("v", 1)], 2),
    "vertex_hopf_mixed": lambda: braid_closure([("v", 1), ("v", 2), 1, -2], 3),
}


def named_diagrams():
    return sorted(_NAMED)


def get_named(name: str) -> ColoredDiagram:
    try:
        return _NAMED[name]()
    except KeyError:
        raise DiagramError(f"unknown corpus diagram {name!r}") from None


# ---------------------------------------------------------------------------
# Random generation
# ---------------------------------------------------------------------------


def random_word(rng: random.Random, strands: int, length: int,
                vertex_prob: float = 0.0):
    word = []
    for _ in range(length):
        pos = rng.randint(1, strands - 1)
        if vertex_prob and rng.random() < vertex_prob:
            word.append(("v", pos))
        else:
            word.append(pos if rng.random() < 0.5 else -pos)
    return word


def random_colored_diagram(rng: random.Random, max_crossings: int = 6,
                           min_crossings: int = 1, max_strands: int = 4,
                           vertex_prob: float = 0.0) -> ColoredDiagram:
    """A random colored (possibly singular) diagram with a random coloration."""
    strands = rng.randint(2, max_strands)
    length = rng.randint(min_crossings, max_crossings)
    word = random_word(rng, strands, length, vertex_prob)
    cd = braid_closure(word, strands)
    n = len(cd.diagram.components())
    k = rng.randint(1, n)
    colors = [rng.randrange(k) for _ in range(n)]
    return with_colors(cd.diagram, colors)


def random_state_graph(rng: random.Random, max_vertices: int = 5,
                       min_vertices: int = 1, max_strands: int = 4) -> ColoredDiagram:
    """A random colored 4-valent planar graph (vertices only)."""
    strands = rng.randint(2, max_strands)
    length = rng.randint(min_vertices, max_vertices)
    word = [("v", rng.randint(1, strands - 1)) for _ in range(length)]
    cd = braid_closure(word, strands)
    n = len(cd.diagram.components())
    k = rng.randint(1, n)
    colors = [rng.randrange(k) for _ in range(n)]
    return with_colors(cd.diagram, colors)
