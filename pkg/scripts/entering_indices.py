"""Entering-index sets of a uniform recentered factorization and of the limit
object, one JSON line per replica, plus the mean set sizes.

    python3 scripts/entering_indices.py --n 2000 --A 2 --samples 500
"""

from __future__ import annotations

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass

from minfact.factorization import entering_indices, to_tilde
from minfact.kesten import LazyKestenTree, limit_entering_indices, limit_labels
from minfact.random_gen import DEFAULT_SEED, RandomSource, sample_fast


@dataclass
class EnteringConfig:
    n: int = 2000
    A: int = 2
    samples: int = 500
    seed: int = DEFAULT_SEED
    output: str = "entering.jsonl"


def main(cfg: EnteringConfig) -> None:
    g_fin = RandomSource(cfg.seed, 0).generator()
    g_lim = RandomSource(cfg.seed, 1).generator()
    sizes = {"finite": Counter(), "limit": Counter()}
    with open(cfg.output, "w", newline="\n") as fh:
        for r in range(cfg.samples):
            E = sorted(entering_indices(to_tilde(sample_fast(cfg.n, g_fin)), cfg.A))
            run = limit_labels(LazyKestenTree(g_lim), cfg.A, A=cfg.A)
            L = sorted(limit_entering_indices(run, cfg.A))
            sizes["finite"][len(E)] += 1
            sizes["limit"][len(L)] += 1
            fh.write(json.dumps({"replica": r, "finite": E, "limit": L}) + "\n")
    for src, c in sizes.items():
        mean = sum(k * v for k, v in c.items()) / cfg.samples
        print(f"{src:6s} mean |I_A| = {mean:.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(EnteringConfig()).items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=type(default), default=default)
    main(EnteringConfig(**vars(p.parse_args())))
