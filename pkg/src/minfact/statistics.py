"""Exhaustive enumeration, exact identities, limit-law closed forms and Monte Carlo checks."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bijections import factorization_from_parents, gy_bijection, prufer_decode
from .errors import ResourceError
from .factorization import Factorization, touch_move_counts
from .random_gen import RandomSource

ENUMERATION_CAP = 9
CHUNK = 1000  # replicas per random stream in Monte Carlo runs


# ------------------------------------------------------------------ enumeration

def _check_cap(n: int, max_n: int = ENUMERATION_CAP) -> None:
    if not 2 <= n <= min(max_n, ENUMERATION_CAP):
        raise ResourceError(f"enumeration needs 2 <= n <= {min(max_n, ENUMERATION_CAP)}, got n={n}")


def _factorizations_with_prefix(n: int, prefix: tuple) -> Iterator[Factorization]:
    rest = n - 2 - len(prefix)
    for tail in product(range(1, n + 1), repeat=rest):
        c = prufer_decode(prefix + tail, n)
        par = c.parents(1)
        yield factorization_from_parents(n, [0, 0] + [par[v] for v in range(2, n + 1)])


def enumerate_factorizations(n: int, max_n: int = ENUMERATION_CAP) -> Iterator[Factorization]:
    """Every minimal factorization of ``(1..n)`` once, in Prüfer order."""
    _check_cap(n, max_n)
    if n == 2:
        yield Factorization(2, ((1, 2),))
        return
    for first in range(1, n + 1):
        yield from _factorizations_with_prefix(n, (first,))


def _stat_value(spec, n, touch, move):
    kind, i = spec
    if i == "n":
        i = n
    return (touch if kind == "T" else move)[i]


def parse_stat(s) -> tuple:
    """``"T1"`` -> ``("T", 1)``; ``"Mn"`` -> ``("M", "n")``."""
    if isinstance(s, tuple):
        return s
    kind, rest = s[0].upper(), s[1:]
    if kind not in "TM" or not rest:
        raise ValueError(f"bad statistic {s!r}")
    return (kind, "n" if rest == "n" else int(rest))


def _tally_prefix(args) -> Counter:
    n, prefix, specs = args
    out: Counter = Counter()
    for F in _factorizations_with_prefix(n, prefix):
        touch, move = touch_move_counts(F)
        out[tuple(_stat_value(s, n, touch, move) for s in specs)] += 1
    return out


def tally(n: int, stats: Sequence, workers: int = 1, max_n: int = ENUMERATION_CAP) -> Counter:
    """Exact counts of the statistic tuple over all of the size-``n`` factorizations."""
    _check_cap(n, max_n)
    specs = tuple(parse_stat(s) for s in stats)
    for kind, i in specs:
        if i != "n" and not 1 <= i <= n:
            raise ValueError(f"index {i} outside 1..{n}")
    if n == 2:
        return _tally_n2(specs)
    jobs = [(n, (first,), specs) for first in range(1, n + 1)]
    total: Counter = Counter()
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            parts = pool.map(_tally_prefix, jobs)
    else:
        parts = map(_tally_prefix, jobs)
    for part in parts:
        total.update(part)
    return total


def _tally_n2(specs) -> Counter:
    F = Factorization(2, ((1, 2),))
    touch, move = touch_move_counts(F)
    return Counter({tuple(_stat_value(s, 2, touch, move) for s in specs): 1})


def exact_distribution(n: int, stats: Sequence, workers: int = 1) -> dict[tuple, Fraction]:
    counts = tally(n, stats, workers)
    total = n ** (n - 2)
    if sum(counts.values()) != total:
        raise AssertionError("enumeration did not produce n^(n-2) items")
    return {k: Fraction(v, total) for k, v in sorted(counts.items())}


@dataclass(frozen=True)
class BivariatePGP:
    """``coeffs[(a, b)] = P(X = a, Y = b)`` as exact fractions."""

    n: int
    coeffs: dict

    def __post_init__(self):
        if sum(self.coeffs.values()) != 1:
            raise ValueError("coefficients must sum to 1")
        if any(c < 0 for c in self.coeffs.values()):
            raise ValueError("negative coefficient")

    def marginal(self, axis: int) -> dict:
        out: dict = {}
        for key, c in self.coeffs.items():
            out[key[axis]] = out.get(key[axis], 0) + c
        return dict(sorted(out.items()))

    def nonzero(self) -> dict:
        return {k: c for k, c in self.coeffs.items() if c}

    def __eq__(self, other) -> bool:
        return isinstance(other, BivariatePGP) and self.n == other.n and self.nonzero() == other.nonzero()

    def evaluate(self, x, y):
        return sum(c * x**a * y**b for (a, b), c in self.coeffs.items())


def exact_joint_pgp(n: int, stat_pair=("T1", "M1"), workers: int = 1) -> BivariatePGP:
    if len(stat_pair) != 2:
        raise ValueError("a bivariate polynomial needs two statistics")
    return BivariatePGP(n, exact_distribution(n, stat_pair, workers))


def conjecture_pgp(n: int) -> BivariatePGP:
    """Coefficients of ``xy ((n - 2 + x + y) / n)^(n - 2)``."""
    if n < 2:
        raise ValueError("n >= 2")
    m = n - 2
    coeffs = {}
    for p in range(m + 1):
        for q in range(m + 1 - p):
            r = m - p - q
            mult = math.factorial(m) // (math.factorial(p) * math.factorial(q) * math.factorial(r))
            coeffs[(1 + p, 1 + q)] = Fraction(mult * m**r, n**m)
    return BivariatePGP(n, coeffs)


@dataclass
class Verification:
    name: str
    n: int
    ok: bool
    count: int
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "n": self.n, "ok": self.ok, "count": self.count, **self.details}


def verify_conjecture(n: int, workers: int = 1) -> Verification:
    exact = exact_joint_pgp(n, ("T1", "M1"), workers)
    conj = conjecture_pgp(n)
    keys = set(exact.coeffs) | set(conj.coeffs)
    diffs = {k: exact.coeffs.get(k, 0) - conj.coeffs.get(k, 0) for k in keys}
    bad = {f"{a},{b}": str(d) for (a, b), d in sorted(diffs.items()) if d}
    maxdev = max((abs(d) for d in diffs.values()), default=0)
    return Verification("conjecture", n, not bad, n ** (n - 2),
                        {"max_deviation": str(maxdev), "mismatches": bad})


def symmetry_tuples(n: int, k: int) -> tuple[list, list, list]:
    """The three statistic tuples whose laws coincide."""
    first = []
    for i in range(1, k + 1):
        first += [("T", i), ("M", i)]
    second = [("M", n)]
    for i in range(1, k + 1):
        second.append(("T", i))
        if i < k:
            second.append(("M", i))
    third = []
    for i in range(k, 0, -1):
        third += [("M", i), ("T", i)]
    return first, second, third


def verify_symmetry(n: int, k: int, workers: int = 1) -> Verification:
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    specs = symmetry_tuples(n, k)
    flat = [s for group in specs for s in group]
    counts = tally(n, flat, workers)
    m = 2 * k
    dists = []
    for g in range(3):
        c: Counter = Counter()
        for key, v in counts.items():
            c[key[g * m:(g + 1) * m]] += v
        dists.append(c)
    ok = dists[0] == dists[1] == dists[2]
    return Verification("symmetry", n, ok, n ** (n - 2), {"k": k, "support": len(dists[0])})


def verify_horizontal_symmetry(n: int, j: int, workers: int = 1) -> Verification:
    if not 1 <= j <= n:
        raise ValueError(f"j={j} outside 1..{n}")
    counts = tally(n, [("T", 1), ("M", j), ("M", n + 1 - j)], workers)
    a: Counter = Counter()
    b: Counter = Counter()
    for (t, mj, mk), v in counts.items():
        a[(t, mj)] += v
        b[(t, mk)] += v
    return Verification("horizontal_symmetry", n, a == b, n ** (n - 2), {"j": j})


def verify_new_bijection(n: int) -> Verification:
    """Moves of ``i`` in ``F`` equal touches of ``i`` in ``B(F)``; touches of ``i``
    in ``F`` equal moves of ``i - 1`` (``n`` when ``i = 1``) in ``B(F)``; ``B`` injective."""
    seen = set()
    failures = []
    count = 0
    for F in enumerate_factorizations(n):
        count += 1
        G = gy_bijection(F)
        seen.add(G.taus)
        tF, mF = touch_move_counts(F)
        tG, mG = touch_move_counts(G)
        for i in range(1, n + 1):
            prev = n if i == 1 else i - 1
            if mF[i] != tG[i] or tF[i] != mG[prev]:
                failures.append(str(F))
                break
    ok = not failures and len(seen) == count
    return Verification("new_bijection", n, ok, count,
                        {"injective": len(seen) == count, "failures": failures[:5]})


# ------------------------------------------------------------------ closed forms

def limit_pmf(kind: str, *args: int) -> float:
    """Limit probabilities.

    ``marginal_T(j)``: ``e^-1 / (j-1)!`` (also the law of the moves of 1);
    ``joint_deg_dist(i, h)``: ``e^-2 / ((i-1)! (h-1)!)``;
    ``joint_TT(i, j)``: limit of ``P(#T1 = i, #T2 = j)``;
    ``stays_positive()``: ``1 - 1/e``.
    """
    if any(int(a) != a or a < 1 for a in args):
        raise ValueError(f"arguments must be positive integers, got {args}")
    lf = lambda m: math.lgamma(m + 1)
    if kind == "marginal_T":
        (j,) = args
        return math.exp(-1 - lf(j - 1))
    if kind == "joint_deg_dist":
        i, h = args
        return math.exp(-2 - lf(i - 1) - lf(h - 1))
    if kind == "joint_TT":
        i, j = args
        s = i + j
        return math.exp(-2) * ((s - 2) * math.exp(-lf(s - 1)) + (s - 1) * math.exp(-lf(i) - lf(j))
                               - (s - 1) * math.exp(-lf(s)))
    if kind == "stays_positive":
        if args:
            raise ValueError("stays_positive takes no arguments")
        return 1 - math.exp(-1)
    raise ValueError(f"unknown kind {kind!r}")


# ------------------------------------------------------------------ Monte Carlo

@dataclass(frozen=True)
class MCEstimate:
    cell: tuple
    estimate: float
    samples: int
    se: float
    target: float
    z: float
    seed: int

    def as_dict(self) -> dict:
        return {"cell": list(self.cell), "estimate": self.estimate, "samples": self.samples,
                "se": self.se, "target": self.target, "z": self.z, "seed": self.seed}


@dataclass
class MCReport:
    statistic: str
    source: str
    n: int | None
    samples: int
    seed: int
    estimates: list

    @property
    def max_abs_z(self) -> float:
        return max(abs(e.z) for e in self.estimates)

    def ok(self, bound: float = 4.0) -> bool:
        return self.max_abs_z < bound


def _finite_chunk(args) -> np.ndarray:
    from ._fast import local_stats
    from .random_gen import random_prufer

    n, seed, chunk, count = args
    g = RandomSource(seed, chunk).generator()
    out = np.empty((count, 4), dtype=np.int64)
    for r in range(count):
        out[r] = local_stats(random_prufer(n, g), n)
    return out


def _kesten_chunk(args) -> np.ndarray:
    from .kesten import LazyKestenTree, kesten_local_stats

    _, seed, chunk, count = args
    g = RandomSource(seed, chunk).generator()
    out = np.empty((count, 4), dtype=np.int64)
    for r in range(count):
        s = kesten_local_stats(LazyKestenTree(g))
        out[r] = (s.root_degree, s.distance_12, s.degree_2, s.stays_positive)
    return out


def mc_sample(source: str, samples: int, seed: int, n: int | None = None,
              workers: int = 1) -> np.ndarray:
    """``(samples, 4)`` array of (#T1, #M1, #T2, stays_positive).

    For the ``kesten`` source these are the root degree, the distance from 1
    to 2, the degree of 2 and the sign condition along that path.  Replica
    ``r`` uses stream ``r // CHUNK``, so results do not depend on ``workers``.
    """
    if source == "finite":
        if n is None or n < 4:
            raise ValueError("finite source needs n >= 4")
        fn = _finite_chunk
    elif source == "kesten":
        fn = _kesten_chunk
    else:
        raise ValueError(f"unknown source {source!r}")
    jobs = []
    for c in range(0, samples, CHUNK):
        jobs.append((n, seed, c // CHUNK, min(CHUNK, samples - c)))
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            parts = pool.map(fn, jobs)
    else:
        parts = [fn(j) for j in jobs]
    return np.concatenate(parts) if parts else np.empty((0, 4), dtype=np.int64)


STATISTICS = ("stays_positive", "T1_marginal", "M1_marginal", "T1_M1_joint", "T1_T2_joint",
              "deg_dist_joint")


def _estimate(cell, hits, N, target, seed, null_var=None) -> MCEstimate:
    p = hits / N
    se = math.sqrt(p * (1 - p) / N)
    null = math.sqrt((target * (1 - target) if null_var is None else null_var) / N)
    z = (p - target) / null if null > 0 else (0.0 if p == target else math.inf)
    return MCEstimate(tuple(cell), p, N, se, target, z, seed)


def evaluate(statistic: str, data: np.ndarray, seed: int, cells: Iterable | None = None) -> list[MCEstimate]:
    N = len(data)
    t1, m1, t2, pos = data[:, 0], data[:, 1], data[:, 2], data[:, 3]
    out = []
    if statistic == "stays_positive":
        out.append(_estimate((), int(pos.sum()), N, limit_pmf("stays_positive"), seed))
    elif statistic in ("T1_marginal", "M1_marginal"):
        col = t1 if statistic == "T1_marginal" else m1
        for j in (cells or range(1, 7)):
            out.append(_estimate((j,), int((col == j).sum()), N, limit_pmf("marginal_T", j), seed))
    elif statistic in ("T1_M1_joint", "T1_T2_joint", "deg_dist_joint"):
        other = t2 if statistic == "T1_T2_joint" else m1
        for i, h in (cells or product(range(1, 5), repeat=2)):
            hits = int(((t1 == i) & (other == h)).sum())
            if statistic == "T1_M1_joint":
                target = limit_pmf("joint_deg_dist", i, h)
            elif statistic == "T1_T2_joint":
                target = limit_pmf("joint_TT", i, h)
            else:
                # joint vs product of empirical marginals; under independence the
                # difference has variance a(1-a)b(1-b)/N to first order
                a, b = float((t1 == i).mean()), float((other == h).mean())
                out.append(_estimate((i, h), hits, N, a * b, seed, a * (1 - a) * b * (1 - b)))
                continue
            out.append(_estimate((i, h), hits, N, target, seed))
    else:
        raise ValueError(f"unknown statistic {statistic!r}; expected one of {STATISTICS}")
    return out


def mc_limit_check(statistic: str, samples: int, seed: int, source: str = "kesten",
                   n: int | None = None, workers: int = 1, cells=None,
                   data: np.ndarray | None = None) -> MCReport:
    if data is None:
        data = mc_sample(source, samples, seed, n, workers)
    return MCReport(statistic, source, n, len(data), seed, evaluate(statistic, data, seed, cells))
