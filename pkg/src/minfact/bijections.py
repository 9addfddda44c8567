"""Tree encodings of minimal factorizations and the face-duality bijection.

* ``moszkowski_forward`` / ``moszkowski_inverse``: factorization <-> pointed
  edge-labelled tree (edge ``k`` is the ``k``-th transposition, the point is
  the old vertex 1).
* ``phi`` / ``phi_inverse``: pointed edge-labelled tree <-> Cayley tree.
* ``compute_faces`` / ``gy_dual``: the circular chord drawing of a
  factorization, its faces, its dual tree and the bijection ``B``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CrossingChordsError, FactorizationError
from .factorization import Factorization, is_minimal, label_range
from .labelling import find_k
from .trees import ELTree, EVTree


# ---------------------------------------------------------------- Cayley trees

@dataclass(frozen=True)
class CayleyTree:
    """Labelled tree on ``{1..n}``; ``edges`` holds sorted pairs."""

    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(tuple(sorted(e)) for e in self.edges)
        if len(edges) != self.n - 1:
            raise ValueError(f"a tree on {self.n} vertices has {self.n - 1} edges")
        seen = {1}
        adj = self.adjacency(edges)
        stack = [1]
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != set(range(1, self.n + 1)):
            raise ValueError("edges do not span {1..n} as a tree")
        object.__setattr__(self, "edges", edges)

    @staticmethod
    def adjacency(edges) -> dict:
        adj: dict = {}
        for a, b in edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        return adj

    def parents(self, root: int = 1) -> dict[int, int]:
        adj = self.adjacency(self.edges)
        par = {}
        stack = [root]
        seen = {root}
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    par[w] = u
                    stack.append(w)
        return par

    @classmethod
    def from_parents(cls, n: int, parent: dict[int, int]) -> "CayleyTree":
        return cls(n, frozenset((v, p) for v, p in parent.items()))


def prufer_decode(seq: Sequence[int], n: int) -> CayleyTree:
    """Decode a Prüfer sequence of length ``n - 2`` over ``{1..n}``."""
    if n < 2 or len(seq) != n - 2:
        raise ValueError(f"Prüfer sequence for n={n} must have length {n - 2}")
    degree = [1] * (n + 1)
    for x in seq:
        if not 1 <= x <= n:
            raise ValueError(f"entry {x} outside 1..{n}")
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return CayleyTree(n, frozenset(edges))


def prufer_encode(t: CayleyTree) -> tuple[int, ...]:
    n = t.n
    adj = {v: set(ws) for v, ws in CayleyTree.adjacency(t.edges).items()}
    leaves = [v for v in range(1, n + 1) if len(adj.get(v, ())) == 1]
    heapq.heapify(leaves)
    out = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (nb,) = adj[leaf]
        out.append(nb)
        adj[nb].discard(leaf)
        del adj[leaf]
        if len(adj[nb]) == 1:
            heapq.heappush(leaves, nb)
    return tuple(out)


def phi(t: ELTree) -> CayleyTree:
    """Point gets 1, any other vertex gets (label of the edge towards the point) + 1."""
    n = t.n
    if sorted(e[2] for e in t.edges) != list(range(1, n)):
        raise ValueError("phi needs edge labels exactly 1..n-1")
    par = t.parents()
    name = {t.point: 1}
    for v, p in par.items():
        name[v] = t.edge_label(v, p) + 1
    return CayleyTree(n, frozenset((name[v], name[p]) for v, p in par.items()))


def phi_inverse(c: CayleyTree) -> ELTree:
    """Pointed at 1; vertex ids are the Cayley labels; edge above ``v`` labelled ``v - 1``."""
    par = c.parents(1)
    return ELTree(1, [(v, par[v], v - 1) for v in sorted(par)], vertices=range(1, c.n + 1))


# ------------------------------------------------------- factorizations <-> trees

def factorization_tree(F: Factorization) -> EVTree:
    """``Tree(F)``: vertices are the labels, edge ``k`` joins the entries of ``tau_k``."""
    edges = [(a, b, k) for k, (a, b) in enumerate(F.taus, start=1)]
    try:
        return EVTree(1, edges, {x: x for x in F.labels}, vertices=F.labels)
    except ValueError as exc:
        raise FactorizationError(f"transpositions do not form a tree: {exc}") from None


def denes_to_factorization(t: EVTree) -> Factorization:
    """Read the transpositions off a fully labelled tree, edge ``k`` giving position ``k``."""
    n = t.n
    labs = sorted(e[2] for e in t.edges)
    if labs != list(range(1, n)):
        raise FactorizationError("edge labels must be exactly 1..n-1")
    values = sorted(t.vlabels.get(v) for v in t.vertices if v in t.vlabels)
    if len(values) != n:
        raise FactorizationError("every vertex needs a label")
    if values == list(label_range(n)):
        tilde = False
    elif values == list(label_range(n, tilde=True)):
        tilde = True
    else:
        raise FactorizationError(f"vertex labels {values} are neither 1..n nor recentered")
    vl = t.vlabels
    taus = [None] * (n - 1)
    for u, v, k in t.edges:
        taus[k - 1] = (vl[u], vl[v])
    return Factorization(n, tuple(taus), tilde=tilde)


def moszkowski_forward(F: Factorization) -> ELTree:
    """Pointed edge-labelled tree of ``F``; vertex ids are the (now meaningless) labels."""
    if F.tilde:
        raise TypeError("expects a plain factorization")
    if not is_minimal(F):
        raise FactorizationError(f"{F} is not a minimal factorization")
    tr = factorization_tree(F)
    return ELTree(tr.point, tr.edges, vertices=tr.vertices)


def moszkowski_inverse(t: ELTree) -> Factorization:
    if sorted(e[2] for e in t.edges) != list(range(1, t.n)):
        raise FactorizationError("edge labels must be exactly 1..n-1")
    labelled, _ = find_k(t, t.n, vlabels={})
    F = denes_to_factorization(labelled)
    if not is_minimal(F):
        raise AssertionError("Find did not produce a minimal factorization")
    return F


def factorization_from_parents(n: int, parent: Sequence[int]) -> Factorization:
    """``moszkowski_inverse(phi_inverse(c))`` computed directly from the parent array of ``c``.

    ``parent[v]`` is the parent of ``v`` (rooted at 1) for ``v = 2..n``.  The
    transpositions ``(k+1, parent[k+1])`` multiply to some ``n``-cycle
    ``s``; the unique relabelling fixing 1 that turns it into ``(1 2 ... n)``
    sends ``s^j(1)`` to ``j + 1``.
    """
    img = list(range(n + 1))  # img[y] = x currently sent to y, so img = s^-1 at the end
    for v in range(2, n + 1):
        p = parent[v]
        img[v], img[p] = img[p], img[v]
    psi = [0] * (n + 1)
    psi[1] = 1
    x = 1
    for j in range(n, 1, -1):
        x = img[x]
        psi[x] = j
    return Factorization(n, tuple((psi[v], psi[parent[v]]) for v in range(2, n + 1)))


# --------------------------------------------------------- circular embedding

@dataclass(frozen=True)
class Face:
    arc: int              # the face contains the boundary arc (arc, arc + 1)
    edges: tuple          # chord labels met after the arc, in traversal order
    vertices: tuple       # circle positions visited, starting at arc


@dataclass(frozen=True)
class CircularEmbedding:
    n: int
    chords: tuple         # (a, b, label) with a < b
    rotation: dict        # vertex -> incident chord labels in rotation order
    faces: tuple          # Face per arc 1..n

    def face(self, j: int) -> Face:
        return self.faces[j - 1]


def compute_faces(F: Factorization) -> CircularEmbedding:
    """Draw ``Tree(F)`` with vertex ``j`` at angle ``-2 pi (j - 1) / n`` and list its faces.

    Around each vertex ``v`` the darts are ordered by an integer key: the arc
    to ``v + 1`` has key 1, the chord to ``w`` has key ``2 ((w - v) mod n)``,
    the arc to ``v - 1`` has key ``2n - 1``.  Faces are traced by entering
    ``v`` and leaving along the dart just before the entering one.
    """
    if F.tilde:
        raise TypeError("expects a plain factorization")
    n = F.n
    tree = factorization_tree(F)
    chords = tuple((a, b, k) for k, (a, b) in enumerate(F.taus, start=1))

    def key(v, w):
        return 2 * ((w - v) % n)

    rot = {}
    for v in range(1, n + 1):
        labs, nbrs = tree.incident(v)
        darts = sorted((key(v, w), w, lab) for lab, w in zip(labs, nbrs))
        rot[v] = darts

    def nxt(v, u):
        # dart leaving v just before the dart v->u (cyclically by key);
        # None means the arc v -> v+1 (key 1)
        k_in = 2 * n - 1 if u is None else key(v, u)
        best = None
        for kk, w, lab in reversed(rot[v]):
            if kk < k_in:
                best = (w, lab)
                break
        return best

    used = set()
    faces = []
    for j in range(1, n + 1):
        v = j % n + 1
        verts = [j, v]
        labs = []
        came = None  # arrived at v along the arc from j
        steps = 0
        while True:
            step = nxt(v, came)
            if step is None:
                # next dart is the forward arc out of v
                if v != j:
                    raise CrossingChordsError(f"face at arc {j} contains two arcs")
                break
            w, lab = step
            if (v, w) in used:
                raise CrossingChordsError(f"chord dart {v}->{w} traversed twice")
            used.add((v, w))
            labs.append(lab)
            came, v = v, w
            verts.append(v)
            steps += 1
            if steps > 2 * n:
                raise CrossingChordsError("face traversal did not close")
        if any(x <= y for x, y in zip(labs, labs[1:])):
            raise FactorizationError(f"labels around the face at arc {j} do not decrease: {labs}")
        faces.append(Face(j, tuple(labs), tuple(verts[:-1])))
    if len(used) != 2 * (n - 1):
        raise CrossingChordsError("some chord sides belong to no inner face")
    rotation = {v: tuple(lab for _, _, lab in rot[v]) for v in rot}
    return CircularEmbedding(n, chords, rotation, tuple(faces))


@dataclass(frozen=True)
class DualResult:
    dual: ELTree
    symmetrized: ELTree
    image: Factorization


def gy_dual(F: Factorization) -> DualResult:
    """Dual tree on the faces (dual vertex ``j`` = face at arc ``(j, j+1)``),
    its symmetrization ``l -> n - l``, and the factorization read off it."""
    emb = compute_faces(F)
    n = F.n
    side = {}
    for face in emb.faces:
        for lab in face.edges:
            side.setdefault(lab, []).append(face.arc)
    edges = []
    for lab in range(1, n):
        a, b = side[lab]
        edges.append((a, b, lab))
    dual = ELTree(1, edges, vertices=range(1, n + 1))
    sym = ELTree(1, [(a, b, n - lab) for a, b, lab in edges], vertices=range(1, n + 1))
    taus = [None] * (n - 1)
    for a, b, lab in sym.edges:
        taus[lab - 1] = (a, b)
    image = Factorization(n, tuple(taus))
    if not is_minimal(image):
        raise AssertionError(f"dual readout {image} is not minimal")
    return DualResult(dual, sym, image)


def gy_bijection(F: Factorization) -> Factorization:
    return gy_dual(F).image


def all_cayley_trees(n: int) -> Iterable[CayleyTree]:
    from itertools import product
    for seq in product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(seq, n)
