import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURE_F, brute_force_factorizations, factorizations
from minfact.bijections import (
    CayleyTree,
    all_cayley_trees,
    compute_faces,
    denes_to_factorization,
    factorization_from_parents,
    factorization_tree,
    gy_bijection,
    gy_dual,
    moszkowski_forward,
    moszkowski_inverse,
    phi,
    phi_inverse,
    prufer_decode,
    prufer_encode,
)
from minfact.errors import FactorizationError
from minfact.factorization import Factorization, is_minimal, to_tilde, touch_move_counts, trajectory
from minfact.trees import ELTree


@st.composite
def prufer(draw, min_n=2, max_n=15):
    n = draw(st.integers(min_n, max_n))
    return n, tuple(draw(st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2)))


@given(prufer())
def test_prufer_round_trip(args):
    n, seq = args
    c = prufer_decode(seq, n)
    assert len(c.edges) == n - 1
    assert prufer_encode(c) == seq


@given(prufer())
def test_phi_round_trip(args):
    n, seq = args
    c = prufer_decode(seq, n)
    assert phi(phi_inverse(c)) == c


@given(factorizations())
def test_moszkowski_round_trip(F):
    assert moszkowski_inverse(moszkowski_forward(F)) == F


@given(prufer(max_n=12))
def test_fast_relabel_matches_find(args):
    n, seq = args
    c = prufer_decode(seq, n)
    par = c.parents(1)
    parent = [0, 0] + [par[v] for v in range(2, n + 1)]
    assert factorization_from_parents(n, parent) == moszkowski_inverse(phi_inverse(c))


@given(prufer(min_n=3, max_n=30))
def test_compiled_kernels_match(args):
    from minfact._fast import factorization_array, local_stats

    n, seq = args
    arr = np.array(seq, dtype=np.int32)
    F = moszkowski_inverse(phi_inverse(prufer_decode(seq, n)))
    got = factorization_array(arr, n)
    assert Factorization(n, tuple((int(a), int(b)) for a, b in got)) == F
    if n >= 4:
        Ft = to_tilde(F)
        touch, move = touch_move_counts(Ft)
        t1, m1, t2, pos = local_stats(arr, n)
        assert (t1, m1, t2) == (touch[1], move[1], touch[2])
        assert bool(pos) == (trajectory(Ft, 1).minimum() >= 1)


def test_enumeration_matches_brute_force():
    for n in (2, 3, 4, 5):
        from_trees = {moszkowski_inverse(phi_inverse(c)).taus for c in all_cayley_trees(n)}
        brute = {tuple(tuple(sorted(t)) for t in taus) for taus in brute_force_factorizations(n)}
        assert from_trees == brute and len(brute) == n ** (n - 2)


def test_denes_rejects_bad_labels():
    t = factorization_tree(FIXTURE_F)
    bad = t.with_vlabels({v: v + 100 for v in t.vertices})
    with pytest.raises(FactorizationError):
        denes_to_factorization(bad)
    with pytest.raises(FactorizationError):
        moszkowski_forward(Factorization(3, ((1, 2), (1, 2))))


def test_tilde_denes():
    Ft = to_tilde(FIXTURE_F)
    assert denes_to_factorization(factorization_tree(Ft)) == Ft


@given(factorizations(min_n=2, max_n=14))
def test_faces_partition_chords(F):
    emb = compute_faces(F)
    assert len(emb.faces) == F.n
    seen = []
    for face in emb.faces:
        seen.extend(face.edges)
        assert list(face.edges) == sorted(face.edges, reverse=True)
    # each chord borders exactly two faces
    assert sorted(seen) == sorted(list(range(1, F.n)) * 2)


@given(factorizations(min_n=2, max_n=14))
def test_gy_dual_properties(F):
    res = gy_dual(F)
    G = res.image
    assert is_minimal(G)
    # the dual is a tree: ELTree construction validates it
    assert isinstance(res.dual, ELTree) and res.dual.n == F.n
    tF, mF = touch_move_counts(F)
    tG, mG = touch_move_counts(G)
    n = F.n
    for i in range(1, n + 1):
        assert mF[i] == tG[i]
        assert tF[i] == mG[n if i == 1 else i - 1]


def test_gy_is_injective_small():
    for n in range(2, 7):
        images = {gy_bijection(moszkowski_inverse(phi_inverse(c))) for c in all_cayley_trees(n)}
        assert len(images) == n ** (n - 2)


def test_crossing_chords_rejected():
    from minfact.errors import CrossingChordsError
    F = Factorization(4, ((1, 3), (2, 4), (1, 2)))
    with pytest.raises((CrossingChordsError, FactorizationError)):
        compute_faces(F)


def test_cayley_validation():
    with pytest.raises(ValueError):
        CayleyTree(3, frozenset({(1, 2), (2, 1)}))
    with pytest.raises(ValueError):
        prufer_decode((5,), 3)
