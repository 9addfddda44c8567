"""The Find / OFind relabelling walks.

Both walks only need ``tree.point`` and ``tree.incident(v)``, which returns the
labels of the edges at ``v`` in increasing order together with the matching
neighbours.  The same code therefore runs on finite trees and on the lazily
grown infinite trees of :mod:`minfact.kesten`.

``find_k`` assigns ``1..k``.  ``ofind_k`` assigns ``0, -1, ..., -k`` (``k + 1``
labels, which is what makes ``ofind`` followed by ``find`` cover a tree with
``n`` vertices when run with ``floor((n-1)/2)`` and ``floor(n/2)``).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

from .errors import BudgetExceeded, CapacityError, LabellingError
from .trees import ELTree, EVTree


@dataclass(frozen=True)
class Walk:
    """One labelling walk from the vertex labelled ``src`` to the vertex getting ``dst``.

    ``edges[j]`` is the label of the edge between ``vertices[j]`` and
    ``vertices[j + 1]``; increasing for Find walks, decreasing for OFind walks.
    """

    src: int
    dst: int
    vertices: tuple
    edges: tuple

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass
class WalkTrace:
    walks: list[Walk] = field(default_factory=list)
    closed: bool = False  # an OFind run wrapped back onto the point

    def by_src(self) -> dict[int, Walk]:
        return {w.src: w for w in self.walks}

    def walk_to(self, label: int) -> Walk:
        for w in self.walks:
            if w.dst == label:
                return w
        raise KeyError(label)

    def dump(self) -> str:
        """One line per walk: start label, walk length, vertex ids, edge labels."""
        lines = []
        for w in self.walks:
            verts = " ".join(str(v) for v in w.vertices)
            edges = " ".join(_fmt(x) for x in w.edges)
            lines.append(f"{w.src}, {w.length}, [{verts}], [{edges}]")
        return "\n".join(lines) + ("\n" if lines else "")


def _fmt(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def walk(tree, start, increasing: bool, budget: float = math.inf) -> tuple[list, list]:
    """Follow the greedy monotone path from ``start`` until it gets stuck.

    Increasing walks cross, at each step, the smallest incident edge label
    larger than the previous one (the first step takes the smallest edge).
    Decreasing walks are the mirror image.
    """
    verts = [start]
    edges = []
    v = start
    x = None
    steps = 0
    while True:
        labs, nbrs = tree.incident(v)
        if increasing:
            j = 0 if x is None else bisect_right(labs, x)
            if j >= len(labs):
                break
        else:
            j = (len(labs) if x is None else bisect_left(labs, x)) - 1
            if j < 0:
                break
        x = labs[j]
        v = nbrs[j]
        verts.append(v)
        edges.append(x)
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"walk from {start!r} exceeded {budget} steps",
                                 partial=(verts, edges))
    return verts, edges


def _start_labels(t, vlabels):
    labels = dict(getattr(t, "vlabels", {}) if vlabels is None else vlabels)
    if labels.get(t.point, 1) != 1:
        raise LabellingError("the pointed vertex must carry label 1")
    labels[t.point] = 1
    return labels


def run_find(t, k: int, labels: dict, budget: float = math.inf,
             owner: dict | None = None, first: int = 1) -> WalkTrace:
    """Assign ``first+1..k`` in place in ``labels`` (a vertex -> label dict).

    ``owner`` (label -> vertex) is kept in sync when supplied so callers can
    look vertices up by label.
    """
    owner = {lab: v for v, lab in labels.items()} if owner is None else owner
    trace = WalkTrace()
    for i in range(first, k):
        src = owner[i]
        verts, edges = walk(t, src, True, budget)
        end = verts[-1]
        if end in labels:
            raise LabellingError(f"Find would relabel vertex {end!r} ({labels[end]} -> {i + 1})")
        labels[end] = i + 1
        owner[i + 1] = end
        trace.walks.append(Walk(i, i + 1, tuple(verts), tuple(edges)))
    return trace


def run_ofind(t, k: int, labels: dict, budget: float = math.inf,
              owner: dict | None = None, allow_closure: bool = False,
              first: int = 1) -> WalkTrace:
    """Assign ``first-1, ..., -k`` in place (by default ``0, -1, ..., -k``).

    With ``allow_closure`` the last walk may end back on the point; this is the
    situation of a full run on a finite tree, where every vertex is already
    labelled and the walk closes the cycle.
    """
    owner = {lab: v for v, lab in labels.items()} if owner is None else owner
    trace = WalkTrace()
    for j in range(first, -k, -1):
        src = owner[j]
        verts, edges = walk(t, src, False, budget)
        end = verts[-1]
        trace.walks.append(Walk(j, j - 1, tuple(verts), tuple(edges)))
        if end in labels:
            if allow_closure and j - 1 == -k and end == t.point:
                trace.closed = True
                break
            raise LabellingError(f"OFind would relabel vertex {end!r} ({labels[end]} -> {j - 1})")
        labels[end] = j - 1
        owner[j - 1] = end
    return trace


def find_k(t: ELTree, k: int, vlabels: dict | None = None) -> tuple[EVTree, WalkTrace]:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > t.n:
        raise CapacityError(f"cannot assign {k} labels on {t.n} vertices")
    labels = _start_labels(t, vlabels)
    trace = run_find(t, k, labels)
    return EVTree(t.point, t.edges, labels, vertices=t.vertices), trace


def ofind_k(t: ELTree, k: int, vlabels: dict | None = None) -> tuple[EVTree, WalkTrace]:
    """Labels ``0..-k``.  On a tree with ``n`` vertices ``k = n - 1`` is allowed: the
    last walk then returns to the point, which keeps its label 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k + 1 > t.n:
        raise CapacityError(f"cannot assign {k + 1} nonpositive labels on {t.n} vertices")
    labels = _start_labels(t, vlabels)
    trace = run_ofind(t, k, labels, allow_closure=(k + 1 == t.n))
    return EVTree(t.point, t.edges, labels, vertices=t.vertices), trace


def full_relabel(t: ELTree) -> tuple[EVTree, WalkTrace, WalkTrace]:
    """OFind with ``floor((n-1)/2)`` then Find with ``floor(n/2)``; labels every vertex.

    Returns the labelled tree and both traces (OFind first).
    """
    n = t.n
    if n < 2:
        raise CapacityError("need at least two vertices")
    labels = _start_labels(t, None)
    owner = {1: t.point}
    otrace = run_ofind(t, (n - 1) // 2, labels, owner=owner)
    ftrace = run_find(t, n // 2, labels, owner=owner)
    return EVTree(t.point, t.edges, labels, vertices=t.vertices), otrace, ftrace
