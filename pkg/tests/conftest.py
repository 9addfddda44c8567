import os
from itertools import combinations, product

from hypothesis import settings, strategies as st

from minfact.bijections import phi_inverse, prufer_decode, moszkowski_inverse
from minfact.factorization import Factorization

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SLOW = os.environ.get("MINFACT_SLOW") == "1"


def compose_ltr(n, taus):
    """Left-to-right product of transpositions as a dict, computed naively."""
    perm = {x: x for x in range(1, n + 1)}
    for a, b in taus:
        # apply perm first, then (a b)
        perm = {x: (b if y == a else a if y == b else y) for x, y in perm.items()}
    return perm


def brute_force_factorizations(n):
    """All (n-1)-tuples of transpositions of {1..n} whose product is (1 2 ... n)."""
    target = {x: x % n + 1 for x in range(1, n + 1)}
    trans = list(combinations(range(1, n + 1), 2))
    return [taus for taus in product(trans, repeat=n - 1) if compose_ltr(n, taus) == target]


@st.composite
def factorizations(draw, min_n=2, max_n=12):
    n = draw(st.integers(min_n, max_n))
    seq = draw(st.lists(st.integers(1, n), min_size=n - 2, max_size=n - 2))
    return moszkowski_inverse(phi_inverse(prufer_decode(seq, n)))


# Fixture factorization used throughout the examples (n = 10).
FIXTURE_F = Factorization(10, ((8, 9), (5, 6), (1, 5), (2, 3), (1, 8), (2, 5), (7, 8), (4, 5), (1, 10)))


# One line per acceptance criterion, printed at the end of the run.
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
