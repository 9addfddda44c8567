"""Plane trees, pointed edge-labelled trees, vertex labellings and labelled balls."""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

Vertex = Hashable


class PlaneTree:
    """Rooted ordered tree with nodes addressed by Neveu words (tuples of positive ints).

    ``labels`` maps a non-root word to the label of the edge towards its parent;
    ``vlabels`` optionally maps words to integer vertex labels.
    """

    def __init__(self, kids: Mapping[tuple, int], labels: Mapping[tuple, object] | None = None,
                 vlabels: Mapping[tuple, int] | None = None):
        self.kids = {tuple(u): int(k) for u, k in kids.items()}
        if () not in self.kids:
            raise ValueError("a plane tree contains the empty word")
        for u, k in self.kids.items():
            if k < 0:
                raise ValueError(f"negative child count at {u}")
            if u and (u[:-1] not in self.kids or u[-1] > self.kids[u[:-1]] or u[-1] < 1):
                raise ValueError(f"word {u} is not attached to its parent")
            for j in range(1, k + 1):
                if u + (j,) not in self.kids:
                    raise ValueError(f"missing child {u + (j,)}")
        self.labels = dict(labels or {})
        self.vlabels = dict(vlabels or {})

    @classmethod
    def from_nested(cls, spec) -> "PlaneTree":
        """Build from ``[(label, subtree), ...]`` lists, ``subtree`` in the same format."""
        kids, labels = {}, {}

        def visit(u, children):
            kids[u] = len(children)
            for j, (lab, sub) in enumerate(children, start=1):
                labels[u + (j,)] = lab
                visit(u + (j,), sub)

        visit((), spec)
        return cls(kids, labels)

    def __len__(self) -> int:
        return len(self.kids)

    def nodes(self) -> list[tuple]:
        return sorted(self.kids, key=lambda u: (len(u), u))

    def height(self) -> int:
        return max(len(u) for u in self.kids)


class ELTree:
    """Pointed non-plane tree with distinct edge labels.

    Vertices are arbitrary hashable ids. ``edges`` is a sequence of
    ``(u, v, label)``.  Incident edges are kept sorted by label so the
    labelling walks can do binary searches.
    """

    def __init__(self, point: Vertex, edges: Iterable[Sequence], vertices: Iterable[Vertex] = ()):
        self.point = point
        self.edges = tuple((u, v, lab) for u, v, lab in edges)
        verts = {point}
        verts.update(vertices)
        adj: dict = {}
        for u, v, lab in self.edges:
            if u == v:
                raise ValueError(f"loop at {u}")
            verts.add(u)
            verts.add(v)
            adj.setdefault(u, []).append((lab, v))
            adj.setdefault(v, []).append((lab, u))
        if len(verts) != len(self.edges) + 1:
            raise ValueError("edge count does not match a tree on these vertices")
        labs = [e[2] for e in self.edges]
        if len(set(labs)) != len(labs):
            raise ValueError("edge labels must be distinct")
        self._vertices = frozenset(verts)
        self._adj = {}
        for v in verts:
            inc = sorted(adj.get(v, []), key=lambda p: p[0])
            self._adj[v] = ([p[0] for p in inc], [p[1] for p in inc])
        if len(self._bfs()) != len(verts):
            raise ValueError("graph is not connected")

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    def incident(self, v: Vertex) -> tuple[list, list]:
        """Incident edge labels (sorted) and the matching neighbours."""
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v][0])

    def edge_label(self, u: Vertex, v: Vertex):
        for lab, w in zip(*self._adj[u]):
            if w == v:
                return lab
        raise KeyError((u, v))

    def _bfs(self) -> dict:
        dist = {self.point: 0}
        queue = deque([self.point])
        while queue:
            u = queue.popleft()
            for w in self._adj[u][1]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distances(self) -> dict:
        return self._bfs()

    def parents(self) -> dict:
        """Parent of every non-point vertex when the tree is rooted at the point."""
        par = {}
        queue = deque([self.point])
        seen = {self.point}
        while queue:
            u = queue.popleft()
            for w in self._adj[u][1]:
                if w not in seen:
                    seen.add(w)
                    par[w] = u
                    queue.append(w)
        return par

    def path(self, u: Vertex, v: Vertex) -> list:
        par = self.parents()

        def up(x):
            out = [x]
            while x != self.point:
                x = par[x]
                out.append(x)
            return out

        pu, pv = up(u), up(v)
        common = set(pu) & set(pv)
        a = next(x for x in pu if x in common)
        return pu[:pu.index(a) + 1] + pv[:pv.index(a)][::-1]

    def with_vlabels(self, vlabels: Mapping) -> "EVTree":
        return EVTree(self.point, self.edges, vlabels, vertices=self._vertices)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(point={self.point!r}, n={self.n})"


class EVTree(ELTree):
    """Edge-labelled tree with a partial injective integer vertex labelling."""

    def __init__(self, point: Vertex, edges: Iterable[Sequence], vlabels: Mapping | None = None,
                 vertices: Iterable[Vertex] = ()):
        super().__init__(point, edges, vertices)
        vl = dict(vlabels or {})
        for v in vl:
            if v not in self._vertices:
                raise ValueError(f"vertex label on unknown vertex {v!r}")
        if len(set(vl.values())) != len(vl):
            raise ValueError("vertex labels must be pairwise distinct")
        self.vlabels = vl

    def vertex_of(self, label: int) -> Vertex:
        for v, lab in self.vlabels.items():
            if lab == label:
                return v
        raise KeyError(label)

    def inverse_labels(self) -> dict:
        return {lab: v for v, lab in self.vlabels.items()}


def shape(t: PlaneTree) -> EVTree:
    """Forget the planar order; vertex ids are the Neveu words, the root is pointed."""
    edges = [(u[:-1], u, t.labels.get(u)) for u in t.nodes() if u]
    if any(e[2] is None for e in edges):
        # unlabelled trees get placeholder labels following the breadth-first order
        edges = [(a, b, j) for j, (a, b, _) in enumerate(edges, start=1)]
    return EVTree((), edges, t.vlabels, vertices=t.kids)


@dataclass(frozen=True)
class Ball:
    tree: EVTree
    h: int


def ball(t: ELTree, h: int) -> Ball:
    """Restriction of ``t`` to the closed ``h``-neighbourhood of its point."""
    if h < 0:
        raise ValueError("radius must be nonnegative")
    dist = t.distances()
    keep = {v for v, d in dist.items() if d <= h}
    edges = [e for e in t.edges if e[0] in keep and e[1] in keep]
    vl = getattr(t, "vlabels", {})
    return Ball(EVTree(t.point, edges, {v: x for v, x in vl.items() if v in keep}, vertices=keep), h)


def _canonical(t: EVTree, mode: str, table: dict) -> int:
    """Integer id of the pointed labelled shape of ``t``.

    Subtree classes are interned in ``table``, so two trees compared through
    the same table get equal ids iff they are isomorphic.  Flat ids avoid deep
    nested tuples, which Python cannot compare on long paths.
    """
    if mode == "compatible":
        order = sorted(e[2] for e in t.edges)
        key = lambda lab: bisect_left(order, lab)
    elif mode == "exact":
        key = lambda lab: lab
    else:
        raise ValueError(f"unknown mode {mode!r}")

    # iterative post-order so deep paths do not hit the recursion limit
    par = t.parents()
    order_v = [t.point]
    for v in order_v:
        order_v.extend(w for w in t.incident(v)[1] if par.get(w) == v)
    enc = {}
    for v in reversed(order_v):
        labs, nbrs = t.incident(v)
        kids = sorted((key(lab), enc[w]) for lab, w in zip(labs, nbrs) if par.get(w) == v)
        enc[v] = table.setdefault((t.vlabels.get(v), tuple(kids)), len(table))
    return enc[t.point]


def balls_agree(b1: Ball, b2: Ball, mode: str = "exact") -> bool:
    """Pointed label-respecting isomorphism test.

    Vertex labels must match exactly; edge labels exactly (``mode='exact'``)
    or only through their relative order (``mode='compatible'``).
    """
    if b1.h != b2.h:
        raise ValueError("balls of different radii")
    table = {}
    return _canonical(b1.tree, mode, table) == _canonical(b2.tree, mode, table)


def isomorphic(t1: ELTree, t2: ELTree, mode: str = "exact") -> bool:
    """Whole-tree version of :func:`balls_agree`."""
    a = t1 if isinstance(t1, EVTree) else t1.with_vlabels({})
    b = t2 if isinstance(t2, EVTree) else t2.with_vlabels({})
    table = {}
    return _canonical(a, mode, table) == _canonical(b, mode, table)


def scale_edge_labels(t: ELTree, alpha):
    if not alpha > 0:
        raise ValueError(f"scaling factor must be positive, got {alpha}")
    edges = [(u, v, lab * alpha) for u, v, lab in t.edges]
    if isinstance(t, EVTree):
        return EVTree(t.point, edges, t.vlabels, vertices=t.vertices)
    return ELTree(t.point, edges, vertices=t.vertices)

