"""Trajectory data for plotting: all trajectories of one uniform factorization
of size n (recentered), and the limiting trajectories |i| <= K on a Kesten tree.

    python3 scripts/trajectories.py --n 60 --K 10 --prefix traj
writes traj_finite.csv (i,k,value) and traj_limit.csv (i,t,value).
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import asdict, dataclass

from minfact import io as mio
from minfact.factorization import to_tilde, trajectories
from minfact.kesten import LazyKestenTree, limit_labels, limit_trajectory
from minfact.random_gen import DEFAULT_SEED, RandomSource, sample_uniform_factorization


@dataclass
class TrajectoryConfig:
    n: int = 60
    K: int = 10
    seed: int = DEFAULT_SEED
    prefix: str = "traj"


def main(cfg: TrajectoryConfig) -> None:
    F = to_tilde(sample_uniform_factorization(cfg.n, RandomSource(cfg.seed)))
    with open(f"{cfg.prefix}_finite.csv", "w", newline="\n") as fh:
        fh.write(mio.trajectories_csv(trajectories(F)))
    run = limit_labels(LazyKestenTree(RandomSource(cfg.seed, 1).generator()), cfg.K, A=0)
    with open(f"{cfg.prefix}_limit.csv", "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "t", "value"])
        for i in range(-cfg.K, cfg.K + 1):
            X = limit_trajectory(run, i)
            for t, v in zip(X.breakpoints, X.values):
                w.writerow([i, repr(t), v])
    print(f"wrote {cfg.prefix}_finite.csv ({cfg.n} trajectories) and {cfg.prefix}_limit.csv "
          f"({2 * cfg.K + 1} trajectories, {len(run.tree)} tree nodes)")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in asdict(TrajectoryConfig()).items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=type(default), default=default)
    main(TrajectoryConfig(**vars(p.parse_args())))
