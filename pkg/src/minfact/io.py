"""Serialization: JSON for factorizations, trees and runs; CSV for trajectories and histograms; DOT."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Mapping

from .bijections import CircularEmbedding, DualResult
from .factorization import Factorization, StepTrajectory
from .trees import ELTree, EVTree


def dumps(obj) -> str:
    """Canonical JSON (sorted keys, no spaces) so repeated runs are byte-identical."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def _default(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def factorization_to_json(F: Factorization) -> dict:
    return {"n": F.n, "tilde": F.tilde, "taus": [list(t) for t in F.taus]}


def factorization_from_json(d: Mapping | str) -> Factorization:
    if isinstance(d, str):
        d = json.loads(d)
    return Factorization(int(d["n"]), tuple(tuple(t) for t in d["taus"]), bool(d.get("tilde", False)))


def _vid(v) -> str | int:
    return v if isinstance(v, int) else str(v)


def tree_to_json(t: ELTree) -> dict:
    vl = getattr(t, "vlabels", {})
    return {
        "point": _vid(t.point),
        "edges": [{"u": _vid(u), "v": _vid(v), "label": lab}
                  for u, v, lab in sorted(t.edges, key=lambda e: e[2])],
        "vlabels": {str(_vid(v)): lab for v, lab in sorted(vl.items(), key=lambda p: p[1])},
    }


def tree_from_json(d: Mapping | str) -> EVTree:
    if isinstance(d, str):
        d = json.loads(d)

    def key(x):
        return int(x) if isinstance(x, str) and x.lstrip("-").isdigit() else x

    edges = [(key(e["u"]), key(e["v"]), e["label"]) for e in d["edges"]]
    vl = {key(v): lab for v, lab in d.get("vlabels", {}).items()}
    return EVTree(key(d["point"]), edges, vl)


def tree_to_dot(t: ELTree, name: str = "tree") -> str:
    vl = getattr(t, "vlabels", {})
    lines = [f"graph {name} {{"]
    for v in sorted(t.vertices, key=str):
        attrs = [f'label="{vl[v]}"' if v in vl else 'label=""']
        if v == t.point:
            attrs.append("shape=doublecircle")
        lines.append(f'  "{v}" [{", ".join(attrs)}];')
    for u, v, lab in sorted(t.edges, key=lambda e: e[2]):
        lines.append(f'  "{u}" -- "{v}" [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dual_to_dot(F: Factorization, dual: DualResult) -> str:
    """Primal chords (solid) and symmetrized dual edges (dashed) in one picture."""
    lines = ["graph dual {"]
    for j in range(1, F.n + 1):
        lines.append(f'  p{j} [label="{j}"];')
        lines.append(f'  d{j} [label="d{j}", shape=box];')
    for k, (a, b) in enumerate(F.taus, start=1):
        lines.append(f'  p{a} -- p{b} [label="{k}"];')
    for a, b, lab in sorted(dual.symmetrized.edges, key=lambda e: e[2]):
        lines.append(f'  d{a} -- d{b} [label="{lab}", style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def trajectories_csv(trajs: Mapping[int, StepTrajectory]) -> str:
    """Columns ``i,k,value``; one row per breakpoint."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "k", "value"])
    for i in sorted(trajs):
        X = trajs[i]
        for k, v in zip(X.breakpoints, X.values):
            w.writerow([i, k, v])
    return buf.getvalue()


def face_report(emb: CircularEmbedding) -> list[dict]:
    return [{"arc": f.arc, "edges": list(f.edges)} for f in emb.faces]


def limit_run_to_json(run, indices: Iterable[int] | None = None, A: int | None = None) -> dict:
    from .kesten import limit_entering_indices, limit_trajectory

    idx = range(-run.K, run.K + 1) if indices is None else indices
    trajs = []
    for i in idx:
        X = limit_trajectory(run, i)
        trajs.append({"i": i, "breaks": list(X.breakpoints[1:]), "values": list(X.values)})
    out = {
        "K": run.K,
        "vlabels": {str(v): lab for v, lab in sorted(run.labels.items(), key=lambda p: p[1])},
        "trajectories": trajs,
    }
    if A:
        out["A"] = A
        out["entering"] = sorted(limit_entering_indices(run, A))
    return out


def histogram_csv(rows: Iterable[Mapping]) -> str:
    """Rows with keys ``statistic``, ``value`` (tuple), ``probability``, ``source``, ``n_or_limit``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["statistic", "value", "probability", "source", "n_or_limit"])
    for r in rows:
        value = r["value"]
        if isinstance(value, (tuple, list)):
            value = ";".join(str(x) for x in value)
        p = r["probability"]
        w.writerow([r["statistic"], value, repr(float(p)) if not isinstance(p, Fraction) else str(p),
                    r["source"], r["n_or_limit"]])
    return buf.getvalue()


def verification_report(results: Iterable) -> dict:
    items = [r.as_dict() for r in results]
    return {"ok": all(r["ok"] for r in items), "results": items}
