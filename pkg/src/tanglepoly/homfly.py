"""Independent HOMFLY-PT engine and the specialization check.

Convention: l*P(L+) + l^-1*P(L-) + m*P(L0) = 0 with P(unknot) = 1, so
P(n-component unlink) = (-(l + l^-1)/m)^(n-1).  On knots and on links
whose components all share one color, the link invariant coincides with
P after the substitution

    l = i/(w*s),   m = i*(1 - s^2)/s        (s^2 = t).

The recursion uses the same descending-diagram strategy and tie-breaking
as the main recursive engine, so the two skein trees are structurally
comparable; only the coefficient field differs.
"""

from __future__ import annotations

from typing import Optional

from .algebra import LM_RING, RationalFunction, rf, rf_equals, rf_substitute
from .canonical import canonical_form
from .diagram import ColoredDiagram, DiagramError, smooth_node, switched_node
from .skein import _first_bad, _strand_in_arcs, invariant

__all__ = ["homfly_polynomial", "substitution_check", "HOMFLY_SUBSTITUTION"]

HOMFLY_SUBSTITUTION = {
    "l": rf("i/(w*s)"),
    "m": rf("i*(1-s^2)/s"),
}

_L_UNLINK = rf("-(l + l^-1)/m", LM_RING)


def _monochrome(cd: ColoredDiagram) -> ColoredDiagram:
    arc_color = {a: 0 for a in cd.diagram.head}
    loop_color = {k: 0 for k in cd.diagram.loops}
    from .diagram import ColorPartition

    return ColoredDiagram(cd.diagram, arc_color, loop_color, ColorPartition({0}))


def homfly_polynomial(cd: ColoredDiagram, memo: Optional[dict] = None) -> RationalFunction:
    """HOMFLY-PT polynomial in l, m of a classical diagram (colors ignored)."""
    if cd.diagram.singular_nodes():
        raise DiagramError("HOMFLY-PT is defined for classical diagrams only")
    if memo is None:
        memo = {}
    return _homfly(_monochrome(cd), memo)


def _homfly(cd: ColoredDiagram, memo: dict) -> RationalFunction:
    key = canonical_form(cd)
    if key in memo:
        return memo[key]
    bad = _first_bad(cd)
    if bad is None:
        n = len(cd.diagram.components())
        value = _L_UNLINK ** (n - 1)
    else:
        _, ni = bad
        node = cd.diagram.nodes[ni]
        switched = cd.replace_node(ni, switched_node(node))
        smoothed = smooth_node(cd, ni)
        if node.kind == "X+":
            # P+ = -l^-2 P- - l^-1 m P0
            value = rf("-l^-2", LM_RING) * _homfly(switched, memo) \
                + rf("-m/l", LM_RING) * _homfly(smoothed, memo)
        else:
            # P- = -l^2 P+ - l m P0
            value = rf("-l^2", LM_RING) * _homfly(switched, memo) \
                + rf("-l*m", LM_RING) * _homfly(smoothed, memo)
    memo[key] = value
    return value


def substitution_check(cd: ColoredDiagram, engine: str = "state-sum") -> bool:
    """Verify the invariant against the specialized HOMFLY-PT polynomial.

    Only meaningful when every component carries one color class; other
    inputs are rejected.
    """
    roots = set()
    for idx, label in cd.coloration().items():
        roots.add(cd.partition.find(label))
    if len(roots) > 1:
        raise DiagramError("substitution check needs a single-colored link")
    p = homfly_polynomial(cd)
    specialized = rf_substitute(p, HOMFLY_SUBSTITUTION)
    return rf_equals(specialized, invariant(cd, engine))
