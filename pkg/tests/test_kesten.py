import math

import numpy as np
import pytest

from minfact.errors import BudgetExceeded, ResourceError, UnresolvedLabelError
from minfact.kesten import (
    LazyKestenTree,
    _borel_log_pmf,
    kesten_side,
    limit_entering_indices,
    limit_labels,
    limit_trajectory,
)
from minfact.labelling import run_find, run_ofind
from minfact.random_gen import RandomSource


def tree(seed, stream=0, **kw):
    return LazyKestenTree(RandomSource(seed, stream).generator(), **kw)


def test_borel_sampler_pmf():
    t = tree(1)
    N = 40000
    draws = np.array([t.borel() for _ in range(N)])
    for m in range(1, 6):
        p = math.exp(_borel_log_pmf(m))
        z = ((draws == m).mean() - p) / math.sqrt(p * (1 - p) / N)
        assert abs(z) < 4, (m, z)
    # exact pmf sums to one (slowly: tail ~ m^-3/2)
    assert abs(sum(math.exp(_borel_log_pmf(m)) for m in range(1, 20000)) - 1) < 0.01


def test_offspring_laws():
    N = 20000
    spine, normal = [], []
    for s in range(N // 1000):
        g = RandomSource(3, s).generator()
        for _ in range(1000):
            t = LazyKestenTree(g)
            kids = t.expand(0)
            spine.append(len(kids))
            normal.append(len(t.expand(next(w for w in kids if not t.special[w]))) if len(kids) > 1 else None)
    spine = np.array(spine)
    for k in range(1, 5):
        p = math.exp(-1) / math.factorial(k - 1)
        assert abs(((spine == k).mean() - p) / math.sqrt(p * (1 - p) / N)) < 4
    normal = np.array([x for x in normal if x is not None])
    for k in range(0, 4):
        p = math.exp(-1) / math.factorial(k)
        M = len(normal)
        assert abs(((normal == k).mean() - p) / math.sqrt(p * (1 - p) / M)) < 4


def test_single_spine():
    t = tree(5)
    v = 0
    for _ in range(50):
        kids = t.expand(v)
        assert sum(t.special[w] for w in kids) == 1
        v = t.spine_child(v)
    assert t.depth(v) == 50


def test_addressed_order_independent():
    a, b = tree(9, addressed=True), tree(9, addressed=True)
    # breadth first on a, depth-first along the spine on b
    frontier = [0]
    for _ in range(4):
        frontier = [w for v in frontier for w in a.expand(v)]
    v = 0
    for _ in range(4):
        for w in b.expand(v):
            b.expand(w)
        v = b.spine_child(v)
    pa = {a.address[v]: a.plabel[v] for v in range(1, len(a))}
    pb = {b.address[v]: b.plabel[v] for v in range(1, len(b))}
    common = set(pa) & set(pb)
    assert len(common) > 5
    assert all(pa[x] == pb[x] for x in common)


def test_side_rule_against_brute_force():
    """Fringe-skipping labels agree with labelling every vertex by walking."""
    checked = 0
    for s in range(40):
        ta = tree(2, s, addressed=True, max_nodes=20000)
        try:
            ra = limit_labels(ta, 2, expand_fringes=True)
        except ResourceError:
            continue
        tb = tree(2, s, addressed=True, max_nodes=40000)
        rb = limit_labels(tb, 2, resolve=False)
        labels, owner = rb.labels, rb.owner
        pend = set(rb.needed)
        plus = {v for v in pend if kesten_side(tb, v)}
        hi, lo = 3, -2
        try:
            while plus - set(labels):
                run_find(tb, hi + 1, labels, owner=owner, first=hi)
                hi += 1
            while (pend - plus) - set(labels):
                run_ofind(tb, -lo + 1, labels, owner=owner, first=lo)
                lo -= 1
        except ResourceError:
            continue
        idx = {x: i for i, x in enumerate(tb.address)}
        for v in ra.needed:
            assert ra.labels[v] == labels[idx[ta.address[v]]]
        checked += 1
    assert checked >= 30


def test_limit_run_contract():
    g = RandomSource(4).generator()
    for _ in range(300):
        run = limit_labels(LazyKestenTree(g), 3)
        assert len(set(run.labels.values())) == len(run.labels)
        for i in range(-3, 4):
            X = limit_trajectory(run, i)
            assert X(0) == i and X(1) == i + 1
            assert all(a < b for a, b in zip(X.breakpoints, X.breakpoints[1:]))
            assert all(0 < b < 1 for b in X.breakpoints[1:])
        E = limit_entering_indices(run, 2)
        assert set(range(-2, 3)) <= E


def test_frozen_and_unresolved():
    run = limit_labels(tree(6), 2)
    t = run.tree
    assert t.frozen
    fresh = next(v for v in range(len(t)) if t.kids[v] is None and v not in t.virtual)
    with pytest.raises(RuntimeError):
        t.expand(fresh)
    with pytest.raises(UnresolvedLabelError):
        run.vertex(99)
    with pytest.raises(UnresolvedLabelError):
        limit_trajectory(run, 5)


def test_budget_exceeded_carries_partial():
    hit = False
    for s in range(50):
        try:
            limit_labels(tree(8, s), 3, step_budget=3)
        except BudgetExceeded as exc:
            assert exc.partial is not None and exc.partial.K == 3
            hit = True
            break
    assert hit


def test_bad_arguments():
    with pytest.raises(ValueError):
        limit_labels(tree(1), 0)
    with pytest.raises(ValueError):
        limit_labels(tree(1), 2, A=3)
    run = limit_labels(tree(1), 2, A=1)
    with pytest.raises(ValueError):
        limit_entering_indices(run, 2)
