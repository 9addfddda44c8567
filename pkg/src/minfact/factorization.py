"""Transposition sequences, minimality, recentering, trajectories and index sets.

Permutations are multiplied left to right: ``t1 t2 ... tk`` applies ``t1``
first.  A factorization of size ``n`` lives either on the plain alphabet
``1..n`` or on the recentered ("tilde") alphabet ``-(n-1)//2 .. n//2``.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import FactorizationError


def transposition(a: int, b: int) -> tuple[int, int]:
    """Canonical (sorted) form of the transposition swapping ``a`` and ``b``."""
    a, b = int(a), int(b)
    if a == b:
        raise FactorizationError(f"degenerate transposition ({a},{b})")
    return (a, b) if a < b else (b, a)


def label_range(n: int, tilde: bool = False) -> range:
    if tilde:
        return range(-((n - 1) // 2), n // 2 + 1)
    return range(1, n + 1)


def tilde_label(a: int, n: int) -> int:
    return a - n if a > n / 2 else a


def plain_label(a: int, n: int) -> int:
    return a + n if a <= 0 else a


@dataclass(frozen=True)
class Factorization:
    """A sequence of ``n - 1`` transpositions on the plain or recentered alphabet.

    Construction checks the shape only; use :func:`is_minimal` for the product.
    """

    n: int
    taus: tuple[tuple[int, int], ...]
    tilde: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise FactorizationError(f"size must be >= 2, got {self.n}")
        taus = tuple(transposition(*t) for t in self.taus)
        if len(taus) != self.n - 1:
            raise FactorizationError(
                f"expected {self.n - 1} transpositions, got {len(taus)}")
        lo, hi = self.labels[0], self.labels[-1]
        for t in taus:
            if not (lo <= t[0] and t[1] <= hi):
                raise FactorizationError(f"transposition {t} outside labels {lo}..{hi}")
        object.__setattr__(self, "taus", taus)

    @property
    def labels(self) -> range:
        return label_range(self.n, self.tilde)

    def __len__(self) -> int:
        return len(self.taus)

    def __iter__(self):
        return iter(self.taus)

    def __str__(self) -> str:
        return "(" + " ".join(f"({a},{b})" for a, b in self.taus) + ")"


def _check_label(F: Factorization, i: int) -> None:
    if i not in F.labels:
        raise FactorizationError(f"label {i} outside {F.labels[0]}..{F.labels[-1]}")


def partial_product(F: Factorization, k: int) -> dict[int, int]:
    """Left-to-right product of the first ``k`` transpositions, as a mapping."""
    if not 0 <= k <= len(F.taus):
        raise IndexError(f"k={k} outside 0..{len(F.taus)}")
    lo = F.labels[0]
    # holder[y - lo] = the x currently sent to y
    holder = list(F.labels)
    for a, b in F.taus[:k]:
        holder[a - lo], holder[b - lo] = holder[b - lo], holder[a - lo]
    return {x: y for y, x in zip(F.labels, holder)}


def full_cycle(n: int, tilde: bool = False) -> dict[int, int]:
    """The cycle ``x -> x + 1`` on the alphabet, wrapping at the top."""
    labels = label_range(n, tilde)
    return {x: (x + 1 if x != labels[-1] else labels[0]) for x in labels}


def is_minimal(F: Factorization) -> bool:
    return partial_product(F, len(F.taus)) == full_cycle(F.n, F.tilde)


def to_tilde(F: Factorization) -> Factorization:
    if F.tilde:
        raise TypeError("factorization is already recentered")
    n = F.n
    return Factorization(n, tuple((tilde_label(a, n), tilde_label(b, n)) for a, b in F.taus),
                         tilde=True)


def from_tilde(F: Factorization) -> Factorization:
    if not F.tilde:
        raise TypeError("factorization is not recentered")
    n = F.n
    return Factorization(n, tuple((plain_label(a, n), plain_label(b, n)) for a, b in F.taus))


@dataclass(frozen=True)
class StepTrajectory:
    """Piecewise-constant integer path: ``values[j]`` holds on ``[breakpoints[j], breakpoints[j+1])``.

    ``horizon`` is ``n`` for finite trajectories (time ``0..n``) and ``1`` for
    limiting ones (time ``[0, 1]``).
    """

    start: int
    breakpoints: tuple = (0,)
    values: tuple = ()
    horizon: float = 1

    def __post_init__(self):
        if not self.values:
            object.__setattr__(self, "values", (self.start,))
        if len(self.values) != len(self.breakpoints):
            raise ValueError("one value per breakpoint expected")
        if self.values[0] != self.start:
            raise ValueError("trajectory must start at its index")
        if any(b0 >= b1 for b0, b1 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must increase")
        if any(v0 == v1 for v0, v1 in zip(self.values, self.values[1:])):
            raise ValueError("consecutive values must differ")

    def __call__(self, t) -> int:
        if not 0 <= t <= self.horizon:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        return self.values[bisect_right(self.breakpoints, t) - 1]

    @property
    def jumps(self) -> int:
        return len(self.values) - 1

    @property
    def end(self) -> int:
        return self.values[-1]

    def minimum(self) -> int:
        return min(self.values)

    def min_abs(self) -> int:
        return min(abs(v) for v in self.values)


def trajectories(F: Factorization, indices: Iterable[int] | None = None) -> dict[int, StepTrajectory]:
    """All requested trajectories in a single sweep over ``F``.

    The value at time ``k`` is the image of ``i`` under ``t1 ... tk``; the
    value at time ``n`` repeats the one at ``n - 1``.
    """
    labels = F.labels
    lo = labels[0]
    wanted = set(labels) if indices is None else set(indices)
    for i in wanted:
        _check_label(F, i)
    who = list(labels)  # who[y - lo]: the i currently sent to y
    brk: dict[int, list] = {i: [0] for i in wanted}
    val: dict[int, list] = {i: [i] for i in wanted}
    for k, (a, b) in enumerate(F.taus, start=1):
        ia, ib = who[a - lo], who[b - lo]
        who[a - lo], who[b - lo] = ib, ia
        if ia in wanted:
            brk[ia].append(k)
            val[ia].append(b)
        if ib in wanted:
            brk[ib].append(k)
            val[ib].append(a)
    return {i: StepTrajectory(i, tuple(brk[i]), tuple(val[i]), horizon=F.n) for i in sorted(wanted)}


def trajectory(F: Factorization, i: int) -> StepTrajectory:
    return trajectories(F, [i])[i]


@dataclass(frozen=True)
class IndexSet:
    kind: str  # "touch" or "move"
    i: int
    indices: tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)


def touch_set(F: Factorization, i: int) -> IndexSet:
    """Positions ``k`` (1-based) whose transposition contains ``i``."""
    _check_label(F, i)
    return IndexSet("touch", i, tuple(k for k, t in enumerate(F.taus, start=1) if i in t))


def move_set(F: Factorization, i: int) -> IndexSet:
    """Positions ``k`` at which the trajectory of ``i`` jumps."""
    return IndexSet("move", i, trajectory(F, i).breakpoints[1:])


def touch_move_counts(F: Factorization) -> tuple[dict[int, int], dict[int, int]]:
    """``#T_i`` and ``#M_i`` for every label, in one pass."""
    labels = F.labels
    lo = labels[0]
    touch = [0] * len(labels)
    move = [0] * len(labels)
    who = list(labels)
    for a, b in F.taus:
        touch[a - lo] += 1
        touch[b - lo] += 1
        ia, ib = who[a - lo], who[b - lo]
        who[a - lo], who[b - lo] = ib, ia
        move[ia - lo] += 1
        move[ib - lo] += 1
    return ({x: touch[x - lo] for x in labels}, {x: move[x - lo] for x in labels})


def entering_indices(F: Factorization, A: int) -> frozenset[int]:
    """Indices ``i`` whose trajectory visits ``[-A, A]`` at some time ``0..n-1``."""
    if not F.tilde:
        raise TypeError("entering indices are defined on recentered factorizations")
    if not 1 <= A <= F.n / 2:
        raise ValueError(f"A={A} outside 1..{F.n / 2}")
    return frozenset(i for i, X in trajectories(F).items() if X.min_abs() <= A)


def parse_taus(pairs: Sequence[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    return tuple(transposition(a, b) for a, b in pairs)
