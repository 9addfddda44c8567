"""Random sources and uniform samplers for Cayley trees and minimal factorizations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bijections import CayleyTree, moszkowski_inverse, phi_inverse, prufer_decode
from .factorization import Factorization

DEFAULT_SEED = 20180611


@dataclass(frozen=True)
class RandomSource:
    """``(seed, stream)`` pair; the same pair always yields the same PCG64 stream."""

    seed: int = DEFAULT_SEED
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RandomSource):
        return rng.generator()
    return RandomSource(DEFAULT_SEED if rng is None else int(rng)).generator()


def random_prufer(n: int, rng, size: int | None = None) -> np.ndarray:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    g = as_generator(rng)
    shape = (n - 2,) if size is None else (size, n - 2)
    return g.integers(1, n + 1, size=shape, dtype=np.int32)


def sample_cayley(n: int, rng) -> CayleyTree:
    """Uniform labelled tree on ``{1..n}`` from a uniform Prüfer sequence."""
    return prufer_decode([int(x) for x in random_prufer(n, rng)], n)


def sample_uniform_factorization(n: int, rng) -> Factorization:
    """Uniform element of the minimal factorizations of ``(1..n)``:
    Cayley tree, then ``phi_inverse``, then the inverse tree map."""
    return moszkowski_inverse(phi_inverse(sample_cayley(n, rng)))


def sample_uniform_factorizations(n: int, count: int, rng) -> list[Factorization]:
    """Batch version; draws all Prüfer sequences at once, then decodes each."""
    seqs = random_prufer(n, rng, size=count)
    return [moszkowski_inverse(phi_inverse(prufer_decode(s.tolist(), n))) for s in seqs]


def sample_fast(n: int, rng) -> Factorization:
    """Same law as :func:`sample_uniform_factorization`, via the compiled kernels."""
    from ._fast import factorization_array

    arr = factorization_array(random_prufer(n, rng), n)
    return Factorization(n, tuple((int(a), int(b)) for a, b in arr))
