"""``minfact`` command line.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import io as mio
from .bijections import compute_faces, gy_dual, moszkowski_forward
from .errors import ResourceError
from .factorization import to_tilde, trajectories
from .labelling import find_k, full_relabel, ofind_k
from .random_gen import DEFAULT_SEED, RandomSource, sample_uniform_factorization

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
STAT_NAMES = {
    "stays-positive": "stays_positive",
    "T1-marginal": "T1_marginal",
    "M1-marginal": "M1_marginal",
    "T1-M1-joint": "T1_M1_joint",
    "T1-T2-joint": "T1_T2_joint",
    "deg-dist-joint": "deg_dist_joint",
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    k: int | None = None
    A: int | None = None
    samples: int = 1
    seed: int = DEFAULT_SEED
    workers: int = 1
    format: str = "json"
    output: str | None = None
    stat: str | None = None
    stat_pair: str | None = None
    max_n: int = 9
    step_budget: int = 10**6
    input: str | None = None


def default_seed() -> int:
    env = os.environ.get("MINFACT_SEED")
    return int(env) if env else DEFAULT_SEED


FORMATS = {
    "enumerate": ("json", "csv"),
    "sample": ("json",),
    "trajectories": ("csv", "json"),
    "dual": ("json", "dot"),
    "relabel": ("json", "dot"),
    "verify-conjecture": ("json",),
    "verify-symmetry": ("json",),
    "limit-sample": ("json",),
    "limit-stats": ("json", "csv"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minfact", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in FORMATS:
        s = sub.add_parser(name)
        s.add_argument("--n", type=int)
        s.add_argument("--k", type=int)
        s.add_argument("--A", type=int)
        s.add_argument("--samples", type=int, default=1)
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--workers", type=int, default=1)
        s.add_argument("--format", default=FORMATS[name][0])
        s.add_argument("--output")
        s.add_argument("--stat")
        s.add_argument("--stat-pair", dest="stat_pair")
        s.add_argument("--max-n", dest="max_n", type=int, default=9)
        s.add_argument("--step-budget", dest="step_budget", type=int, default=10**6)
        s.add_argument("--input", help="factorization JSON file instead of sampling")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    if d["seed"] is None:
        d["seed"] = default_seed()
    return RunConfig(**d)


class UsageError(Exception):
    pass


def _need(cfg: RunConfig, *names):
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(f"{cfg.command} needs --{name.replace('_', '-')}")


def _factorization(cfg: RunConfig):
    if cfg.input:
        with open(cfg.input) as fh:
            return mio.factorization_from_json(fh.read())
    _need(cfg, "n")
    if cfg.n < 2:
        raise UsageError("--n must be >= 2")
    return sample_uniform_factorization(cfg.n, RandomSource(cfg.seed))


def cmd_enumerate(cfg: RunConfig) -> tuple[str, int]:
    from .statistics import _check_cap, enumerate_factorizations, exact_distribution

    _need(cfg, "n")
    _check_cap(cfg.n, cfg.max_n)
    if cfg.stat_pair:
        stats = [s.strip() for s in cfg.stat_pair.split(",")]
        dist = exact_distribution(cfg.n, stats, cfg.workers)
        rows = [{"statistic": "/".join(stats), "value": key, "probability": p,
                 "source": "exact", "n_or_limit": cfg.n} for key, p in dist.items()]
        if cfg.format == "csv":
            return mio.histogram_csv(rows), EXIT_OK
        return "".join(mio.dumps({"value": list(r["value"]), "probability": r["probability"]}) + "\n"
                       for r in rows), EXIT_OK
    lines = []
    for F in enumerate_factorizations(cfg.n, cfg.max_n):
        if cfg.format == "csv":
            lines.append(" ".join(f"{a}-{b}" for a, b in F.taus))
        else:
            lines.append(mio.dumps(mio.factorization_to_json(F)))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_sample(cfg: RunConfig) -> tuple[str, int]:
    _need(cfg, "n")
    if cfg.n < 2:
        raise UsageError("--n must be >= 2")
    g = RandomSource(cfg.seed).generator()
    out = [mio.dumps(mio.factorization_to_json(sample_uniform_factorization(cfg.n, g)))
           for _ in range(cfg.samples)]
    return "\n".join(out) + "\n", EXIT_OK


def cmd_trajectories(cfg: RunConfig) -> tuple[str, int]:
    F = _factorization(cfg)
    Ft = F if F.tilde else to_tilde(F)
    idx = None
    if cfg.A is not None:
        idx = [i for i in Ft.labels if abs(i) <= cfg.A]
    trajs = trajectories(Ft, idx)
    if cfg.format == "csv":
        return mio.trajectories_csv(trajs), EXIT_OK
    return mio.dumps({"factorization": mio.factorization_to_json(Ft),
                      "trajectories": [{"i": i, "breaks": list(X.breakpoints[1:]), "values": list(X.values)}
                                       for i, X in trajs.items()]}) + "\n", EXIT_OK


def cmd_dual(cfg: RunConfig) -> tuple[str, int]:
    F = _factorization(cfg)
    res = gy_dual(F)
    if cfg.format == "dot":
        return mio.dual_to_dot(F, res), EXIT_OK
    edges = lambda t: [[a, b, lab] for a, b, lab in sorted(t.edges, key=lambda e: e[2])]
    return mio.dumps({
        "factorization": mio.factorization_to_json(F),
        "faces": mio.face_report(compute_faces(F)),
        "dual": edges(res.dual),
        "symmetrized": edges(res.symmetrized),
        "image": mio.factorization_to_json(res.image),
    }) + "\n", EXIT_OK


def cmd_relabel(cfg: RunConfig) -> tuple[str, int]:
    F = _factorization(cfg)
    t = moszkowski_forward(F)
    if cfg.k is None:
        tree, otrace, ftrace = full_relabel(t)
        traces = {"ofind": otrace.dump(), "find": ftrace.dump()}
    else:
        tree, ftrace = find_k(t, cfg.k)
        _, otrace = ofind_k(t, min(cfg.k, t.n - 1))
        traces = {"ofind": otrace.dump(), "find": ftrace.dump()}
    if cfg.format == "dot":
        return mio.tree_to_dot(tree), EXIT_OK
    return mio.dumps({"tree": mio.tree_to_json(tree), "traces": traces}) + "\n", EXIT_OK


def cmd_verify_conjecture(cfg: RunConfig) -> tuple[str, int]:
    from .statistics import _check_cap, verify_conjecture

    _need(cfg, "n")
    _check_cap(cfg.n, cfg.max_n)
    res = verify_conjecture(cfg.n, cfg.workers)
    msg = (f"exact match, {res.count} factorizations" if res.ok
           else f"MISMATCH at n={cfg.n}: {res.details['mismatches']}")
    print(msg, file=sys.stderr)
    return mio.dumps(mio.verification_report([res])) + "\n", EXIT_OK if res.ok else EXIT_FAIL


def cmd_verify_symmetry(cfg: RunConfig) -> tuple[str, int]:
    from .statistics import _check_cap, verify_horizontal_symmetry, verify_symmetry

    _need(cfg, "n")
    _check_cap(cfg.n, cfg.max_n)
    ks = [cfg.k] if cfg.k else list(range(1, min(3, cfg.n) + 1))
    results = [verify_symmetry(cfg.n, k, cfg.workers) for k in ks]
    results += [verify_horizontal_symmetry(cfg.n, j, cfg.workers) for j in range(1, cfg.n + 1)]
    report = mio.verification_report(results)
    return mio.dumps(report) + "\n", EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_limit_sample(cfg: RunConfig) -> tuple[str, int]:
    from .kesten import LazyKestenTree, limit_labels
    from .statistics import CHUNK

    K = cfg.k or 3
    A = cfg.A if cfg.A is not None else 0
    if A > K:
        raise UsageError("--A must not exceed --k")
    lines = []
    for r in range(cfg.samples):
        g = RandomSource(cfg.seed, r // CHUNK).generator() if r % CHUNK == 0 else g
        run = limit_labels(LazyKestenTree(g), K, cfg.step_budget, A=A)
        lines.append(mio.dumps(mio.limit_run_to_json(run, A=A)))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_limit_stats(cfg: RunConfig) -> tuple[str, int]:
    from .statistics import mc_limit_check

    _need(cfg, "stat")
    if cfg.stat not in STAT_NAMES:
        raise UsageError(f"--stat must be one of {', '.join(STAT_NAMES)}")
    source = "finite" if cfg.n else "kesten"
    rep = mc_limit_check(STAT_NAMES[cfg.stat], cfg.samples, cfg.seed, source, cfg.n, cfg.workers)
    code = EXIT_OK if rep.ok() else EXIT_FAIL
    if cfg.format == "csv":
        rows = [{"statistic": rep.statistic, "value": e.cell or ("event",), "probability": e.estimate,
                 "source": source, "n_or_limit": cfg.n or "limit"} for e in rep.estimates]
        return mio.histogram_csv(rows), code
    return mio.dumps({"statistic": rep.statistic, "source": source, "n": cfg.n,
                      "samples": rep.samples, "seed": rep.seed, "ok": rep.ok(),
                      "estimates": [e.as_dict() for e in rep.estimates]}) + "\n", code


COMMANDS = {
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
    "trajectories": cmd_trajectories,
    "dual": cmd_dual,
    "relabel": cmd_relabel,
    "verify-conjecture": cmd_verify_conjecture,
    "verify-symmetry": cmd_verify_symmetry,
    "limit-sample": cmd_limit_sample,
    "limit-stats": cmd_limit_stats,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = config_from_args(ns)
    try:
        if cfg.format not in FORMATS[cfg.command]:
            raise UsageError(f"{cfg.command} supports --format {'/'.join(FORMATS[cfg.command])}")
        if cfg.workers < 1 or cfg.samples < 1:
            raise UsageError("--workers and --samples must be >= 1")
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"minfact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"minfact: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    if cfg.output:
        with open(cfg.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
