"""Lazy Kesten tree for critical Poisson(1) offspring and the limiting labelling.

Nodes are integers; node 0 is the root.  A node is expanded (its offspring
drawn) the first time anything asks for its neighbours.  Special nodes (the
spine) have ``1 + Poisson(1)`` children, one of them special, chosen
uniformly; normal nodes have ``Poisson(1)`` children.  Edge labels are i.i.d.
uniform on ``[0, 1]``.

Labelling runs OFind down to ``-K`` and Find up to ``K + 1`` exactly as on
finite trees.  Vertices met in the middle of those walks carry labels far
outside ``[-K, K+1]`` whose size is heavy tailed, so they are resolved by a
second pass that walks only along the paths leading to them and accounts for
every other normal fringe subtree in one step: a Find walk entering such a
subtree through an edge ``y`` labels all of it with consecutive labels and
comes back out through ``y``, so it suffices to know the subtree's size.  For
subtrees that were never expanded that size is drawn from the Borel(1) law
(total progeny of a Poisson(1) Galton-Watson tree).  Once a run has been
resolved the tree is frozen.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, LabellingError, ResourceError, UnresolvedLabelError
from .factorization import StepTrajectory
from .labelling import WalkTrace, run_find, run_ofind, walk
from .random_gen import as_generator

POISSON_MAX = 20
POISSON_CDF = np.cumsum([math.exp(-1) / math.factorial(k) for k in range(POISSON_MAX + 1)]).tolist()
DEFAULT_STEP_BUDGET = 10**6


def _borel_log_pmf(m: int) -> float:
    return -m + (m - 1) * math.log(m) - math.lgamma(m + 1)


def _proposal_pmf(m: int) -> float:
    # P(floor(U^-2) = m) = m^-1/2 - (m+1)^-1/2, written to avoid cancellation
    return -math.expm1(-0.5 * math.log1p(1.0 / m)) / math.sqrt(m)


# sup_m p(m) / q(m); the ratio tends to 2/sqrt(2 pi) < 1 and peaks at m = 1
BOREL_ENVELOPE = max(math.exp(_borel_log_pmf(m)) / _proposal_pmf(m) for m in range(1, 2000))


class LazyKestenTree:
    """Growable Kesten tree.

    By default all draws come from one stream in expansion order.  With
    ``addressed=True`` each node draws its offspring from a stream keyed by
    its Neveu address, so the tree no longer depends on the order in which
    nodes are explored (slower; used to compare exploration strategies).
    """

    def __init__(self, rng=None, max_nodes: int = 10**7, addressed: bool = False):
        self._g = as_generator(rng)
        self._buf: list = []
        self._pos = 0
        self.parent = [-1]
        self.plabel = [math.nan]
        self.special = [True]
        self.kids: list = [None]
        self._inc: list = [None]
        self.virtual: dict[int, int] = {}  # node -> drawn fringe size (never expanded)
        self.frozen = False
        self.max_nodes = max_nodes
        self._labels_seen: set = set()
        self.addressed = addressed
        self.address: list = [()]
        if addressed:
            self._seed = int(self._g.integers(2**63))

    point = 0

    def __len__(self) -> int:
        return len(self.parent)

    def uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._g.random(256).tolist()
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def _node_uniform(self, v: int):
        if not self.addressed:
            return self.uniform
        ss = np.random.SeedSequence(self._seed, spawn_key=self.address[v])
        it = iter(np.random.Generator(np.random.PCG64(ss)).random(64).tolist())
        return it.__next__

    def poisson(self, u=None) -> int:
        return min(bisect_right(POISSON_CDF, self.uniform() if u is None else u), POISSON_MAX)

    def borel(self) -> int:
        """Exact Borel(1) draw by rejection from ``floor(U^-2)``."""
        while True:
            u = self.uniform()
            if u == 0.0:
                continue
            m = int(u ** -2)
            accept = math.exp(_borel_log_pmf(m)) / (BOREL_ENVELOPE * _proposal_pmf(m))
            if self.uniform() < accept:
                return m

    def expand(self, v: int) -> list[int]:
        kids = self.kids[v]
        if kids is not None:
            return kids
        if self.frozen:
            raise RuntimeError("tree is frozen; cannot draw new offspring")
        if v in self.virtual:
            raise RuntimeError(f"node {v} was accounted for by a drawn subtree size")
        draw = self._node_uniform(v)
        if self.special[v]:
            k = 1 + self.poisson(draw())
            spine = min(int(draw() * k), k - 1)
        else:
            k = self.poisson(draw())
            spine = -1
        if len(self.parent) + k > self.max_nodes:
            raise ResourceError(f"more than {self.max_nodes} nodes")
        kids = []
        for j in range(k):
            lab = draw()
            if lab in self._labels_seen or lab == 0.0:
                raise AssertionError(f"edge label collision at {lab!r}")
            self._labels_seen.add(lab)
            kids.append(len(self.parent))
            self.parent.append(v)
            self.plabel.append(lab)
            self.special.append(j == spine)
            self.kids.append(None)
            self._inc.append(None)
            self.address.append(self.address[v] + (j + 1,))
        self.kids[v] = kids
        return kids

    def incident(self, v: int) -> tuple[list, list]:
        inc = self._inc[v]
        if inc is None:
            pairs = [(self.plabel[w], w) for w in self.expand(v)]
            if v != 0:
                pairs.append((self.plabel[v], self.parent[v]))
            pairs.sort()
            inc = ([p[0] for p in pairs], [p[1] for p in pairs])
            self._inc[v] = inc
        return inc

    def degree(self, v: int) -> int:
        return len(self.incident(v)[0])

    def spine_child(self, v: int) -> int:
        return next(w for w in self.expand(v) if self.special[w])

    def ancestors(self, v: int) -> list[int]:
        out = []
        while v != -1:
            out.append(v)
            v = self.parent[v]
        return out

    def depth(self, v: int) -> int:
        return len(self.ancestors(v)) - 1

    def fringe_size(self, v: int, expand: bool = False) -> int:
        """Size of the subtree under a normal node.

        Unexpanded parts get Borel draws, or are expanded for real with
        ``expand=True``."""
        if self.special[v]:
            raise ValueError("subtrees of spine nodes are infinite")
        total = 0
        stack = [v]
        while stack:
            u = stack.pop()
            if u in self.virtual:
                total += self.virtual[u]
            elif self.kids[u] is None and not expand:
                s = self.borel()
                self.virtual[u] = s
                total += s
            else:
                total += 1
                stack.extend(self.expand(u))
        return total


def kesten_expand(t: LazyKestenTree, v: int) -> list[int]:
    return t.expand(v)


def kesten_side(t: LazyKestenTree, v: int) -> bool:
    """True if ``v`` receives a label from Find (positive), False if from OFind.

    With ``u`` the nearest spine ancestor of ``v``, compare the labels of the
    edge above ``u`` (l0, infinite at the root), the edge from ``u`` towards
    ``v`` (l1, infinite if ``v = u``) and the spine edge below ``u`` (l2):
    Find wins exactly when (l0, l1, l2) is in cyclic increasing order.
    """
    if v == 0:
        return True
    child = None
    u = v
    while not t.special[u]:
        child = u
        u = t.parent[u]
    inf = math.inf
    l0 = inf if u == 0 else t.plabel[u]
    l1 = inf if child is None else t.plabel[child]
    l2 = t.plabel[t.spine_child(u)]
    return (l0 < l1 < l2) or (l1 < l2 < l0) or (l2 < l0 < l1)


@dataclass
class LimitRun:
    tree: LazyKestenTree
    K: int
    labels: dict
    owner: dict
    ofind: WalkTrace
    find: WalkTrace
    A: int = 0
    candidates: dict = field(default_factory=dict)  # vertex -> its increasing greedy walk
    needed: frozenset = frozenset()
    resolved: bool = False
    steps: int = 0

    def label(self, v: int) -> int:
        try:
            return self.labels[v]
        except KeyError:
            raise UnresolvedLabelError(f"vertex {v} has no label yet") from None

    def vertex(self, i: int) -> int:
        try:
            return self.owner[i]
        except KeyError:
            raise UnresolvedLabelError(f"label {i} not assigned (K={self.K})") from None


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.steps = 0

    def tick(self, where):
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(f"step budget {self.budget} exhausted while {where}")


def _walk_vertices(trace: WalkTrace) -> set:
    out = set()
    for w in trace.walks:
        out.update(w.vertices[1:-1])
    return out


def _entering_candidates(t: LazyKestenTree, owner: dict, A: int, budget: int) -> dict:
    """Vertices whose increasing greedy walk meets a vertex labelled in ``[-A, A]``.

    Such a walk, read backwards from the vertex it meets, is a decreasing
    path, so candidates are first collected by a decreasing search.
    """
    W = {owner[i] for i in range(-A, A + 1)}
    reach = set(W)
    stack = [(w, math.inf) for w in W]
    ctr = _Counter(budget)
    while stack:
        v, x = stack.pop()
        labs, nbrs = t.incident(v)
        for lab, w in zip(labs[:bisect_left(labs, x)], nbrs):
            ctr.tick("collecting entering candidates")
            reach.add(w)
            stack.append((w, lab))
    out = {}
    for u in reach:
        verts, _ = walk(t, u, True, budget)
        if any(v in W for v in verts):
            out[u] = tuple(verts)
    return out


def _resolve(run: LimitRun, budget: int, expand_fringes: bool = False) -> None:
    t = run.tree
    labels, owner = run.labels, run.owner
    todo = [v for v in run.needed if v not in labels]
    if not todo:
        return
    marked = set()
    for v in list(todo) + list(labels):
        while v != -1 and v not in marked:
            marked.add(v)
            v = t.parent[v]
    plus = {v for v in todo if kesten_side(t, v)}
    minus = set(todo) - plus
    ctr = _Counter(budget)

    def advance(pending, increasing):
        c = max(owner) if increasing else min(owner)
        while pending:
            v = owner[c]
            x = None
            while True:
                labs, nbrs = t.incident(v)
                if increasing:
                    j = 0 if x is None else bisect_right(labs, x)
                    if j >= len(labs):
                        break
                else:
                    j = (len(labs) if x is None else bisect_left(labs, x)) - 1
                    if j < 0:
                        break
                y, w = labs[j], nbrs[j]
                ctr.tick("resolving labels")
                x = y
                if t.parent[w] == v and not t.special[w] and w not in marked:
                    s = t.fringe_size(w, expand_fringes)
                    c = c + s if increasing else c - s
                else:
                    v = w
            c = c + 1 if increasing else c - 1
            if v in labels:
                raise LabellingError(f"vertex {v} labelled twice ({labels[v]} and {c})")
            labels[v] = c
            owner[c] = v
            pending.discard(v)

    advance(plus, True)
    advance(minus, False)
    run.steps += ctr.steps


def limit_labels(t: LazyKestenTree, K: int, step_budget: int = DEFAULT_STEP_BUDGET,
                 resolve: bool = True, A: int | None = None,
                 expand_fringes: bool = False) -> LimitRun:
    """Assign ``-K..K+1`` on the lazy tree, then (``resolve``) the labels of every
    vertex met by those walks and of the candidates for the entering set with
    radius ``A`` (default ``K``).

    ``expand_fringes`` replaces the Borel size draws by actual expansion."""
    if K < 1:
        raise ValueError("K must be >= 1")
    A = K if A is None else A
    if not 0 <= A <= K:
        raise ValueError(f"A={A} must lie in 0..K")
    labels = {0: 1}
    owner = {1: 0}
    run = LimitRun(t, K, labels, owner, WalkTrace(), WalkTrace(), A)
    try:
        run.ofind = run_ofind(t, K, labels, step_budget, owner=owner)
        run.find = run_find(t, K + 1, labels, step_budget, owner=owner)
        if A:
            run.candidates = _entering_candidates(t, owner, A, step_budget)
        run.needed = frozenset((_walk_vertices(run.ofind) | _walk_vertices(run.find)
                                | set(run.candidates)) - set(labels))
        if resolve:
            _resolve(run, step_budget, expand_fringes)
            run.resolved = True
            t.frozen = True
    except BudgetExceeded as exc:
        exc.partial = run
        raise
    return run


class LimitTrajectory(StepTrajectory):
    """Limiting trajectory on ``[0, 1]``; jumps at the crossed edge labels."""

    sentinel = 2

    @property
    def closed_breakpoints(self) -> tuple:
        return tuple(self.breakpoints) + (self.sentinel,)


def limit_walk(run: LimitRun, i: int) -> tuple[tuple, tuple]:
    """Vertices and crossed labels of the path from vertex ``i`` to vertex ``i + 1``."""
    if not -run.K <= i <= run.K:
        raise UnresolvedLabelError(f"trajectory {i} needs K >= {abs(i)} (K={run.K})")
    if i >= 1:
        w = run.find.by_src()[i]
        return w.vertices, w.edges
    w = run.ofind.walk_to(i)
    return w.vertices[::-1], w.edges[::-1]


def limit_trajectory(run: LimitRun, i: int) -> LimitTrajectory:
    verts, edges = limit_walk(run, i)
    values = tuple(run.label(v) for v in verts)
    return LimitTrajectory(i, (0,) + tuple(edges), values, horizon=1)


def limit_entering_indices(run: LimitRun, A: int) -> frozenset[int]:
    """``{i : min_t |X_i(t)| <= A}``."""
    if not 1 <= A <= run.A:
        raise ValueError(f"run prepared for A <= {run.A}, got {A}")
    W = {run.owner[i] for i in range(-A, A + 1)}
    return frozenset(run.label(u) for u, path in run.candidates.items()
                     if any(v in W for v in path))


@dataclass(frozen=True)
class LocalStats:
    root_degree: int
    distance_12: int
    degree_2: int
    stays_positive: bool


def kesten_local_stats(t: LazyKestenTree, step_budget: int = DEFAULT_STEP_BUDGET) -> LocalStats:
    """Root degree, distance from 1 to 2, degree of 2, and whether the path
    from 1 to 2 only meets positively labelled vertices (Find_2 suffices)."""
    labels = {0: 1}
    trace = run_find(t, 2, labels, step_budget)
    w = trace.walks[0]
    v2 = w.vertices[-1]
    positive = all(kesten_side(t, v) for v in w.vertices[1:-1])
    return LocalStats(t.degree(0), w.length, t.degree(v2), positive)
