"""Oriented colored link and singular-link diagrams as extended PD codes.

A diagram is a list of 4-valent nodes plus a list of crossingless free
loops.  Every node stores its four incident arcs counterclockwise.  The
slot conventions (all tuples counterclockwise):

- ``X+ a b c d``: ``a`` = incoming under-strand, ``b`` = outgoing
  over-strand, ``c`` = outgoing under-strand, ``d`` = incoming
  over-strand.  Strands run ``a -> c`` (under) and ``d -> b`` (over).
- ``X- a b c d``: ``a`` = incoming under, ``b`` = incoming over, ``c`` =
  outgoing under, ``d`` = outgoing over.  Strands ``a -> c``, ``b -> d``.
- ``V a b c d`` (singular crossing / rigid 4-valent vertex): ``a``, ``b``
  incoming, ``c``, ``d`` outgoing, strands ``a -> c`` and ``b -> d``.
  Exactly one rotation of a transverse vertex has its two incoming slots
  first, so this presentation is unique and needs no global inference.

Orientations are implicit: each arc id must occur exactly once in an
incoming slot and exactly once in an outgoing slot.  Free loops are
first-class because surgeries constantly produce crossingless circles
that plain PD codes cannot express.

Faces are computed from the rotation system (walking with the face on
the left), which is what move generation and the graph calculus use to
find 1-, 2- and 3-gons.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

__all__ = [
    "Node",
    "Diagram",
    "DiagramError",
    "ColorPartition",
    "ColoredDiagram",
    "parse_diagram",
    "serialize_diagram",
    "diagram_to_json",
    "diagram_from_json",
    "components",
    "oriented_smoothing",
    "switch_crossing",
    "make_singular",
]

KINDS = ("X+", "X-", "V")

#: slot indices holding incoming / outgoing arcs, per node kind
IN_SLOTS = {"X+": (0, 3), "X-": (0, 1), "V": (0, 1)}
OUT_SLOTS = {"X+": (1, 2), "X-": (2, 3), "V": (2, 3)}

#: oriented smoothing: pairs (incoming slot -> outgoing slot) to join
SMOOTH_JOINS = {"X+": ((0, 1), (3, 2)), "X-": ((0, 3), (1, 2)), "V": ((0, 3), (1, 2))}


class DiagramError(ValueError):
    """Raised for malformed PD data or invalid surgery sites."""


@dataclass(frozen=True)
class Node:
    kind: str
    arcs: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DiagramError(f"unknown node kind {self.kind!r}")
        if len(self.arcs) != 4:
            raise DiagramError(f"node needs 4 arcs, got {self.arcs!r}")

    def opposite(self, slot: int) -> int:
        return (slot + 2) % 4

    def slots_of(self, arc: int):
        return tuple(i for i, a in enumerate(self.arcs) if a == arc)

    def is_classical(self) -> bool:
        return self.kind != "V"


def switched_node(node: Node) -> Node:
    """The same geometric crossing with over and under strands exchanged."""
    a, b, c, d = node.arcs
    if node.kind == "X+":
        return Node("X-", (d, a, b, c))
    if node.kind == "X-":
        return Node("X+", (b, c, d, a))
    raise DiagramError("cannot switch a singular crossing")


def singularized_node(node: Node) -> Node:
    """Replace a classical crossing by the transverse vertex with the same strands."""
    a, b, c, d = node.arcs
    if node.kind == "X+":
        return Node("V", (d, a, b, c))
    if node.kind == "X-":
        return Node("V", (a, b, c, d))
    raise DiagramError("node is already singular")


def vertex_filled(node: Node, sign: str) -> Node:
    """Replace a vertex by the classical crossing of the given sign on its strands."""
    if node.kind != "V":
        raise DiagramError("can only fill a singular crossing")
    a, b, c, d = node.arcs
    if sign == "X+":
        return Node("X+", (b, c, d, a))
    if sign == "X-":
        return Node("X-", (a, b, c, d))
    raise DiagramError(f"bad crossing sign {sign!r}")


class Diagram:
    """Immutable diagram: nodes plus free loops, with derived arc tables."""

    __slots__ = ("nodes", "loops", "head", "tail", "_components")

    def __init__(self, nodes: Sequence[Node], loops: Sequence[int] = ()):
        self.nodes = tuple(nodes)
        self.loops = tuple(loops)
        head: dict = {}
        tail: dict = {}
        for ni, node in enumerate(self.nodes):
            for slot in IN_SLOTS[node.kind]:
                arc = node.arcs[slot]
                if arc in head:
                    raise DiagramError(f"arc {arc} has two heads")
                head[arc] = (ni, slot)
            for slot in OUT_SLOTS[node.kind]:
                arc = node.arcs[slot]
                if arc in tail:
                    raise DiagramError(f"arc {arc} has two tails")
                tail[arc] = (ni, slot)
        if set(head) != set(tail):
            bad = set(head).symmetric_difference(tail)
            raise DiagramError(f"arcs without matching head/tail: {sorted(bad)}")
        if len(set(self.loops)) != len(self.loops):
            raise DiagramError("duplicate free-loop identifiers")
        self.head = head
        self.tail = tail
        self._components = None

    # -- basic structure -------------------------------------------------

    @property
    def arcs(self):
        return self.head.keys()

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self.nodes == other.nodes
            and self.loops == other.loops
        )

    def __hash__(self):
        return hash((self.nodes, self.loops))

    def __repr__(self):
        return f"<Diagram {len(self.nodes)} nodes, {len(self.loops)} loops>"

    def next_arc(self, arc: int) -> int:
        """The arc reached by walking forward through one node."""
        ni, slot = self.head[arc]
        node = self.nodes[ni]
        return node.arcs[node.opposite(slot)]

    def classical_nodes(self):
        return [i for i, n in enumerate(self.nodes) if n.kind != "V"]

    def singular_nodes(self):
        return [i for i, n in enumerate(self.nodes) if n.kind == "V"]

    # -- components -------------------------------------------------------

    def components(self):
        """Strand components (frozensets of arcs, by min arc) then free loops."""
        if self._components is None:
            seen = set()
            comps = []
            for arc in sorted(self.head):
                if arc in seen:
                    continue
                orbit = []
                a = arc
                while a not in seen:
                    seen.add(a)
                    orbit.append(a)
                    a = self.next_arc(a)
                comps.append(frozenset(orbit))
            comps.sort(key=min)
            self._components = comps
        return list(self._components) + [("loop", k) for k in sorted(self.loops)]

    def component_of_arc(self, arc: int) -> int:
        for i, comp in enumerate(self.components()):
            if not isinstance(comp, tuple) and arc in comp:
                return i
        raise DiagramError(f"arc {arc} not in any component")

    # -- faces --------------------------------------------------------------

    def node_components(self):
        """Connected components of the node set (indices), via shared arcs."""
        if not self.nodes:
            return []
        adj: dict = {}
        ends: dict = {}
        for ni, node in enumerate(self.nodes):
            for a in node.arcs:
                ends.setdefault(a, set()).add(ni)
        for nis in ends.values():
            for u in nis:
                for v in nis:
                    if u != v:
                        adj.setdefault(u, set()).add(v)
        seen: set = set()
        out = []
        for start in range(len(self.nodes)):
            if start in seen:
                continue
            stack, comp = [start], set()
            while stack:
                u = stack.pop()
                if u in comp:
                    continue
                comp.add(u)
                stack.extend(adj.get(u, ()))
            seen |= comp
            out.append(sorted(comp))
        return out

    def faces(self):
        """Faces of the rotation system: orbits of darts ``(arc, direction)``.

        Walking keeps the face on the left of the travel direction; a face
        is the cyclic tuple of its darts.  Each dart lies on exactly one
        face, and V - E + F = 2 holds per connected node component.
        """
        darts = []
        for a in self.head:
            darts.append((a, 1))
            darts.append((a, -1))
        unvisited = set(darts)
        faces = []
        while unvisited:
            start = min(unvisited)
            face = []
            cur = start
            while True:
                face.append(cur)
                unvisited.discard(cur)
                arc, direction = cur
                ni, slot = self.head[arc] if direction == 1 else self.tail[arc]
                node = self.nodes[ni]
                nxt_slot = (slot - 1) % 4
                nxt_arc = node.arcs[nxt_slot]
                nxt_dir = 1 if nxt_slot in OUT_SLOTS[node.kind] else -1
                cur = (nxt_arc, nxt_dir)
                if cur == start:
                    break
            faces.append(tuple(face))
        return faces

    def dart_end(self, dart):
        """(node, slot) where the dart arrives."""
        arc, direction = dart
        return self.head[arc] if direction == 1 else self.tail[arc]


# ---------------------------------------------------------------------------
# Color bookkeeping
# ---------------------------------------------------------------------------


class ColorPartition:
    """An immutable mergeable partition of color labels (union-find semantics)."""

    __slots__ = ("parent",)

    def __init__(self, labels: Iterable[int] = (), parent: Optional[Mapping[int, int]] = None):
        if parent is not None:
            self.parent = dict(parent)
        else:
            self.parent = {l: l for l in labels}

    def find(self, label: int) -> int:
        p = self.parent
        while p.get(label, label) != label:
            label = p[label]
        return label

    def merge(self, a: int, b: int) -> "ColorPartition":
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return self
        lo, hi = min(ra, rb), max(ra, rb)
        parent = {l: (lo if r == hi else r) for l, r in
                  ((l, self.find(l)) for l in self.parent)}
        parent.setdefault(lo, lo)
        return ColorPartition(parent=parent)

    def with_labels(self, labels: Iterable[int]) -> "ColorPartition":
        parent = dict(self.parent)
        for l in labels:
            parent.setdefault(l, l)
        return ColorPartition(parent=parent)

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)

    def classes(self):
        out: dict = {}
        for l in self.parent:
            out.setdefault(self.find(l), set()).add(l)
        return sorted(frozenset(v) for v in out.values())

    def key(self) -> tuple:
        return tuple(sorted((l, self.find(l)) for l in self.parent))

    def __eq__(self, other):
        return isinstance(other, ColorPartition) and self.classes() == other.classes()

    def __repr__(self):
        return f"<ColorPartition {self.classes()}>"


class ColoredDiagram:
    """A diagram with a color label on every arc and free loop, plus the
    mergeable partition of labels accumulated by skein expansions."""

    __slots__ = ("diagram", "arc_color", "loop_color", "partition")

    def __init__(self, diagram: Diagram, arc_color: Mapping[int, int],
                 loop_color: Mapping[int, int], partition: ColorPartition):
        self.diagram = diagram
        self.arc_color = dict(arc_color)
        self.loop_color = dict(loop_color)
        self.partition = partition
        if set(self.arc_color) != set(diagram.head):
            raise DiagramError("arc colors must cover exactly the arcs")
        if set(self.loop_color) != set(diagram.loops):
            raise DiagramError("loop colors must cover exactly the free loops")

    @staticmethod
    def from_coloration(diagram: Diagram, coloration: Mapping[int, int]) -> "ColoredDiagram":
        """Build from a map component-index -> color label."""
        comps = diagram.components()
        if set(coloration) != set(range(len(comps))):
            raise DiagramError(
                f"coloration must assign components 0..{len(comps) - 1}, got {sorted(coloration)}"
            )
        arc_color: dict = {}
        loop_color: dict = {}
        for idx, comp in enumerate(comps):
            if isinstance(comp, tuple):
                loop_color[comp[1]] = coloration[idx]
            else:
                for a in comp:
                    arc_color[a] = coloration[idx]
        labels = set(coloration.values())
        return ColoredDiagram(diagram, arc_color, loop_color, ColorPartition(labels))

    def coloration(self) -> dict:
        """Induced map component-index -> color label."""
        out = {}
        for idx, comp in enumerate(self.diagram.components()):
            if isinstance(comp, tuple):
                out[idx] = self.loop_color[comp[1]]
            else:
                out[idx] = self.arc_color[min(comp)]
        return out

    def color_class_of_arc(self, arc: int) -> int:
        return self.partition.find(self.arc_color[arc])

    def merged(self, arc_a: int, arc_b: int) -> "ColoredDiagram":
        """Unite the color classes of the two arcs' strands."""
        part = self.partition.merge(self.arc_color[arc_a], self.arc_color[arc_b])
        return ColoredDiagram(self.diagram, self.arc_color, self.loop_color, part)

    def replace_node(self, index: int, node: Node) -> "ColoredDiagram":
        nodes = list(self.diagram.nodes)
        nodes[index] = node
        return ColoredDiagram(Diagram(nodes, self.diagram.loops),
                              self.arc_color, self.loop_color, self.partition)

    # -- the surgery workhorse ---------------------------------------------

    def remove_and_join(self, dead_nodes: Iterable[int], joins: Sequence[tuple],
                        dead_arcs: Iterable[int] = ()) -> "ColoredDiagram":
        """Delete nodes and reconnect strands.

        Each join ``(p, q)`` splices incoming arc ``p`` onto outgoing arc
        ``q``; chains resolve transitively, and a join whose two sides are
        already the same arc closes into a new free loop.  ``dead_arcs``
        are arcs (e.g. a removed curl) that vanish outright.
        """
        dead_nodes = set(dead_nodes)
        dead_arcs = set(dead_arcs)
        rename: dict = {}

        def resolve(a):
            while a in rename:
                a = rename[a]
            return a

        new_loop_colors = []
        for p, q in joins:
            p, q = resolve(p), resolve(q)
            if p == q:
                new_loop_colors.append(self.arc_color[p])
                dead_arcs.add(p)
            else:
                rename[q] = p

        nodes = []
        arc_color = {}
        for ni, node in enumerate(self.diagram.nodes):
            if ni in dead_nodes:
                continue
            arcs = tuple(resolve(a) for a in node.arcs)
            nodes.append(Node(node.kind, arcs))
            for a in arcs:
                # A surviving arc keeps the label of its join representative,
                # which is always an original arc of the diagram.
                arc_color[a] = self.arc_color[a]

        loops = list(self.diagram.loops)
        loop_color = dict(self.loop_color)
        next_loop = max(loops, default=-1) + 1
        for col in new_loop_colors:
            loops.append(next_loop)
            loop_color[next_loop] = col
            next_loop += 1
        return ColoredDiagram(Diagram(nodes, loops), arc_color, loop_color, self.partition)

    def fresh_arcs(self, count: int):
        start = max(self.diagram.head, default=-1) + 1
        return list(range(start, start + count))

    def relabeled(self) -> "ColoredDiagram":
        """Contiguously renumber arcs and loops (cosmetic, for serialization)."""
        arc_map = {a: i for i, a in enumerate(sorted(self.diagram.head))}
        nodes = [Node(n.kind, tuple(arc_map[a] for a in n.arcs)) for n in self.diagram.nodes]
        loop_map = {k: i for i, k in enumerate(sorted(self.diagram.loops))}
        arc_color = {arc_map[a]: c for a, c in self.arc_color.items()}
        loop_color = {loop_map[k]: c for k, c in self.loop_color.items()}
        return ColoredDiagram(Diagram(nodes, sorted(loop_map.values())),
                              arc_color, loop_color, self.partition)


# ---------------------------------------------------------------------------
# Spec-level surgery operations (structure only)
# ---------------------------------------------------------------------------


def oriented_smoothing(d: Diagram, index: int) -> Diagram:
    """Remove node ``index``, reconnecting strands by the oriented smoothing."""
    cd = _plain(d)
    return smooth_node(cd, index).diagram


def switch_crossing(d: Diagram, index: int) -> Diagram:
    node = d.nodes[index]
    nodes = list(d.nodes)
    nodes[index] = switched_node(node)
    return Diagram(nodes, d.loops)


def make_singular(d: Diagram, index: int) -> Diagram:
    node = d.nodes[index]
    nodes = list(d.nodes)
    nodes[index] = singularized_node(node)
    return Diagram(nodes, d.loops)


def smooth_node(cd: ColoredDiagram, index: int) -> ColoredDiagram:
    """Oriented smoothing on a colored diagram (colors ride along)."""
    if not cd.diagram.nodes:
        raise DiagramError("no node to smooth")
    node = cd.diagram.nodes[index]
    joins = [(node.arcs[i], node.arcs[o]) for i, o in SMOOTH_JOINS[node.kind]]
    return cd.remove_and_join({index}, joins)


def _plain(d: Diagram) -> ColoredDiagram:
    arc_color = {a: 0 for a in d.head}
    loop_color = {k: 0 for k in d.loops}
    return ColoredDiagram(d, arc_color, loop_color, ColorPartition({0}))


def components(d: Diagram):
    return d.components()


# ---------------------------------------------------------------------------
# Text and JSON formats
# ---------------------------------------------------------------------------


def parse_diagram(text: str) -> ColoredDiagram:
    """Parse the line-based format.

    Lines: ``X+ a b c d``, ``X- a b c d``, ``V a b c d``, ``O k`` (free
    loop), ``color <component-index> <label>``; ``#`` starts a comment.
    Components lacking a ``color`` line get fresh distinct colors.
    """
    nodes = []
    loops = []
    colors: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head, rest = parts[0], parts[1:]
        try:
            if head in KINDS:
                if len(rest) != 4:
                    raise DiagramError("expected 4 arc labels")
                nodes.append(Node(head, tuple(int(x) for x in rest)))
            elif head == "O":
                if len(rest) != 1:
                    raise DiagramError("expected 1 loop identifier")
                loops.append(int(rest[0]))
            elif head == "color":
                if len(rest) != 2:
                    raise DiagramError("expected component index and label")
                colors[int(rest[0])] = rest[1]
            else:
                raise DiagramError(f"unknown directive {head!r}")
        except (ValueError, DiagramError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise DiagramError(f"line {lineno}: {msg}") from None
    try:
        diagram = Diagram(nodes, loops)
    except DiagramError as exc:
        raise DiagramError(f"invalid diagram: {exc}") from None
    n_comp = len(diagram.components())
    label_ids: dict = {}
    coloration = {}
    for idx in range(n_comp):
        if idx in colors:
            label = colors[idx]
            coloration[idx] = label_ids.setdefault(label, len(label_ids) + 1000)
        else:
            coloration[idx] = 2000 + idx
    unknown = set(colors) - set(range(n_comp))
    if unknown:
        raise DiagramError(f"color lines reference missing components {sorted(unknown)}")
    return ColoredDiagram.from_coloration(diagram, coloration)


def serialize_diagram(cd: ColoredDiagram) -> str:
    """Inverse of :func:`parse_diagram` (up to color label renaming)."""
    lines = []
    for node in cd.diagram.nodes:
        lines.append(f"{node.kind} {' '.join(str(a) for a in node.arcs)}")
    for k in cd.diagram.loops:
        lines.append(f"O {k}")
    names: dict = {}
    for idx, label in sorted(cd.coloration().items()):
        root = cd.partition.find(label)
        name = names.setdefault(root, f"c{len(names)}")
        lines.append(f"color {idx} {name}")
    return "\n".join(lines) + "\n"


def diagram_to_json(cd: ColoredDiagram) -> str:
    data = {
        "nodes": [[n.kind, *n.arcs] for n in cd.diagram.nodes],
        "loops": list(cd.diagram.loops),
        "colors": {str(i): cd.partition.find(l) for i, l in cd.coloration().items()},
    }
    return json.dumps(data, sort_keys=True)


def diagram_from_json(text: str) -> ColoredDiagram:
    try:
        data = json.loads(text)
        nodes = [Node(entry[0], tuple(int(a) for a in entry[1:])) for entry in data["nodes"]]
        loops = [int(k) for k in data.get("loops", ())]
        colors = {int(i): int(l) for i, l in data.get("colors", {}).items()}
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise DiagramError(f"bad JSON diagram: {exc}") from None
    diagram = Diagram(nodes, loops)
    n_comp = len(diagram.components())
    coloration = {i: colors.get(i, 2000 + i) for i in range(n_comp)}
    return ColoredDiagram.from_coloration(diagram, coloration)
