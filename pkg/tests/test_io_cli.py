import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import FIXTURE_F, factorizations
from minfact import io as mio
from minfact.bijections import factorization_tree, gy_dual
from minfact.cli import RunConfig, build_parser, config_from_args, run
from minfact.factorization import is_minimal, to_tilde, trajectories
from minfact.random_gen import DEFAULT_SEED


def cli(args, capsys):
    code = run(args)
    out, err = capsys.readouterr()
    return code, out, err


@given(factorizations())
def test_json_round_trip(F):
    G = mio.factorization_from_json(mio.dumps(mio.factorization_to_json(F)))
    assert G == F and is_minimal(G)
    Ft = to_tilde(F)
    assert mio.factorization_from_json(mio.dumps(mio.factorization_to_json(Ft))) == Ft


def test_tree_json_round_trip():
    t = factorization_tree(to_tilde(FIXTURE_F))
    back = mio.tree_from_json(mio.dumps(mio.tree_to_json(t)))
    assert back.vlabels == t.vlabels and set(back.edges) == set(t.edges)


def test_trajectory_csv():
    text = mio.trajectories_csv(trajectories(FIXTURE_F, [1]))
    rows = list(csv.reader(io.StringIO(text)))
    assert rows == [["i", "k", "value"], ["1", "0", "1"], ["1", "3", "5"], ["1", "6", "2"]]


def test_dot_outputs():
    assert mio.tree_to_dot(factorization_tree(FIXTURE_F)).startswith("graph tree {")
    dot = mio.dual_to_dot(FIXTURE_F, gy_dual(FIXTURE_F))
    assert dot.count("style=dashed") == 9


def test_histogram_csv_header():
    text = mio.histogram_csv([{"statistic": "T1", "value": (2,), "probability": 0.5,
                               "source": "kesten", "n_or_limit": "limit"}])
    assert text.splitlines()[0] == "statistic,value,probability,source,n_or_limit"


def test_config_defaults(monkeypatch):
    ns = build_parser().parse_args(["sample", "--n", "5"])
    assert config_from_args(ns).seed == DEFAULT_SEED
    monkeypatch.setenv("MINFACT_SEED", "42")
    assert config_from_args(ns).seed == 42
    assert isinstance(config_from_args(ns), RunConfig)


def test_enumerate_count(capsys):
    code, out, _ = cli(["enumerate", "--n", "4", "--format", "json"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 16
    assert all(is_minimal(mio.factorization_from_json(x)) for x in lines)


def test_enumerate_stat_pair(capsys):
    code, out, _ = cli(["enumerate", "--n", "5", "--stat-pair", "T1,M1", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    from fractions import Fraction
    assert sum(Fraction(r["probability"]) for r in rows) == 1


def test_verify_conjecture_message(capsys):
    code, out, err = cli(["verify-conjecture", "--n", "6"], capsys)
    assert code == 0 and "exact match, 1296 factorizations" in err
    assert json.loads(out)["ok"] is True


def test_verify_symmetry(capsys):
    code, out, _ = cli(["verify-symmetry", "--n", "5"], capsys)
    assert code == 0 and json.loads(out)["ok"]


def test_usage_and_resource_codes(capsys):
    assert cli(["nope"], capsys)[0] == 2
    assert cli(["sample"], capsys)[0] == 2
    assert cli(["sample", "--n", "4", "--format", "dot"], capsys)[0] == 2
    assert cli(["limit-stats", "--stat", "bogus"], capsys)[0] == 2
    assert cli(["enumerate", "--n", "12"], capsys)[0] == 3
    assert cli(["enumerate", "--n", "8", "--max-n", "7"], capsys)[0] == 3
    assert cli(["limit-sample", "--k", "3", "--step-budget", "1", "--samples", "20"], capsys)[0] == 3


def test_verification_failure_code(capsys, monkeypatch):
    import minfact.statistics as st

    real = st.conjecture_pgp

    # perturb one coefficient pair while keeping the total mass
    def perturbed(n):
        p = real(n)
        keys = sorted(p.coeffs)
        c = dict(p.coeffs)
        eps = c[keys[0]] / 2
        c[keys[0]] -= eps
        c[keys[1]] += eps
        return st.BivariatePGP(n, c)

    monkeypatch.setattr(st, "conjecture_pgp", perturbed)
    code, out, err = cli(["verify-conjecture", "--n", "4"], capsys)
    assert code == 1 and "MISMATCH" in err
    assert json.loads(out)["results"][0]["mismatches"]


@pytest.mark.parametrize("args", [
    ["sample", "--n", "9", "--samples", "5", "--seed", "3"],
    ["trajectories", "--n", "12", "--seed", "3"],
    ["dual", "--n", "10", "--seed", "4"],
    ["relabel", "--n", "10", "--seed", "4", "--format", "dot"],
    ["limit-sample", "--k", "3", "--A", "2", "--samples", "4", "--seed", "1"],
])
def test_determinism(args, capsys, tmp_path):
    outs = []
    for j in range(2):
        p = tmp_path / f"o{j}"
        assert run(args + ["--output", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] and outs[0]


def test_input_file(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text(mio.dumps(mio.factorization_to_json(FIXTURE_F)))
    code, out, _ = cli(["dual", "--input", str(p)], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["image"]["taus"] == [[9, 10], [3, 4], [6, 7], [1, 3], [6, 9], [2, 3], [1, 6], [5, 6], [8, 9]]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "minfact", "enumerate", "--n", "3"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and len(r.stdout.splitlines()) == 3
