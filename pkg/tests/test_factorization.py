import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURE_F, brute_force_factorizations, factorizations
from minfact.errors import FactorizationError
from minfact.factorization import (
    Factorization,
    StepTrajectory,
    entering_indices,
    from_tilde,
    full_cycle,
    is_minimal,
    move_set,
    partial_product,
    to_tilde,
    touch_move_counts,
    touch_set,
    trajectories,
    trajectory,
)


def naive_trajectory(F, i):
    """Image of i after each prefix, time 0..n-1."""
    out = [i]
    for k in range(1, F.n):
        perm = {x: x for x in F.labels}
        for a, b in F.taus[:k]:
            perm = {x: (b if y == a else a if y == b else y) for x, y in perm.items()}
        out.append(perm[i])
    return out


def test_fixture_is_minimal():
    assert is_minimal(FIXTURE_F)
    assert partial_product(FIXTURE_F, 9) == full_cycle(10)


def test_minimality_matches_brute_force():
    n = 4
    good = {taus for taus in brute_force_factorizations(n)}
    from itertools import combinations, product
    trans = list(combinations(range(1, n + 1), 2))
    for taus in product(trans, repeat=n - 1):
        assert is_minimal(Factorization(n, taus)) == (taus in good)


def test_shape_validation():
    with pytest.raises(FactorizationError):
        Factorization(3, ((1, 2),))
    with pytest.raises(FactorizationError):
        Factorization(3, ((1, 1), (2, 3)))
    with pytest.raises(FactorizationError):
        Factorization(3, ((1, 2), (2, 4)))
    with pytest.raises(FactorizationError):
        Factorization(1, ())


def test_full_cycle_tilde():
    c = full_cycle(5, tilde=True)
    # -2 -> -1 -> 0 -> 1 -> 2 -> -2 in tilde alphabet
    assert c == {-2: -1, -1: 0, 0: 1, 1: 2, 2: -2}


def test_tilde_fixture():
    Ft = to_tilde(FIXTURE_F)
    assert Ft.taus == ((-2, -1), (-4, 5), (1, 5), (2, 3), (-2, 1), (2, 5), (-3, -2), (4, 5), (0, 1))
    assert is_minimal(Ft)
    assert from_tilde(Ft) == FIXTURE_F
    with pytest.raises(TypeError):
        to_tilde(Ft)
    with pytest.raises(TypeError):
        from_tilde(FIXTURE_F)


@given(factorizations())
def test_tilde_round_trip(F):
    Ft = to_tilde(F)
    assert is_minimal(Ft)
    assert from_tilde(Ft) == F


@given(factorizations())
def test_trajectories_match_naive(F):
    trajs = trajectories(F)
    for i, X in trajs.items():
        naive = naive_trajectory(F, i)
        assert [X(k) for k in range(F.n)] == naive
        assert X(F.n) == X(F.n - 1)
        assert X.end == full_cycle(F.n, F.tilde)[i]


@given(factorizations())
def test_touch_and_move_sets(F):
    touch, move = touch_move_counts(F)
    for i in F.labels:
        T, M = touch_set(F, i), move_set(F, i)
        assert len(T) == touch[i] and len(M) == move[i]
        naive = naive_trajectory(F, i)
        assert tuple(k for k in range(1, F.n) if naive[k] != naive[k - 1]) == M.indices
        assert all(i in F.taus[k - 1] for k in T)
        # every trajectory moves at least once (it must reach i+1)
        assert move[i] >= 1 and touch[i] >= 1
    assert sum(touch.values()) == sum(move.values()) == 2 * (F.n - 1)


def test_fixture_sets():
    assert touch_set(FIXTURE_F, 1).indices == (3, 5, 9)
    # trajectory of 1: 1 -> 5 (k=3) -> 2 (k=6)
    X = trajectory(FIXTURE_F, 1)
    assert X.breakpoints == (0, 3, 6) and X.values == (1, 5, 2)
    assert move_set(FIXTURE_F, 1).indices == (3, 6)


@given(factorizations(min_n=4))
def test_entering_indices(F):
    Ft = to_tilde(F)
    for A in range(1, Ft.n // 2 + 1):
        E = entering_indices(Ft, A)
        assert set(range(-A, A + 1)) & set(Ft.labels) <= E
        for i in Ft.labels:
            assert (i in E) == any(abs(v) <= A for v in naive_trajectory(Ft, i))
    with pytest.raises(ValueError):
        entering_indices(Ft, 0)
    with pytest.raises(TypeError):
        entering_indices(F, 1)


def test_step_trajectory_validation():
    with pytest.raises(ValueError):
        StepTrajectory(1, (0, 2), (2, 3))
    with pytest.raises(ValueError):
        StepTrajectory(1, (0, 0), (1, 2))
    with pytest.raises(ValueError):
        StepTrajectory(1, (0, 1), (1, 1))
    X = StepTrajectory(1, (0, 2), (1, -3), horizon=4)
    assert X(1) == 1 and X(2) == -3 and X.minimum() == -3 and X.min_abs() == 1
    with pytest.raises(ValueError):
        X(5)


@given(st.integers(2, 8))
def test_partial_product_bounds(n):
    F = Factorization(n, tuple((1, j) for j in range(2, n + 1)))
    assert is_minimal(F)
    with pytest.raises(IndexError):
        partial_product(F, n)
