"""Compiled kernels for large-n sampling.

A uniform minimal factorization of size ``n`` is built from a uniform Prüfer
sequence: decode it to a Cayley tree, root the tree at 1, and relabel with
the unique map fixing 1 that turns the product of ``(v, parent(v))``,
``v = 2..n``, into the cycle ``(1 2 ... n)``.  The pure-Python route
(``phi_inverse`` then Find) gives the same answer and is used to test these.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def prufer_parents(seq, n):
    """Parent array (index 1..n, ``parent[1] = 0``) of the decoded tree rooted at 1."""
    degree = np.ones(n + 1, dtype=np.int32)
    degree[0] = 0
    for x in seq:
        degree[x] += 1
    up = np.zeros(n + 1, dtype=np.int32)  # rooted at n during decoding
    ptr = 1
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for x in seq:
        up[leaf] = x
        degree[leaf] -= 1
        degree[x] -= 1
        if degree[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    up[leaf] = n
    up[n] = 0
    # reverse the path from 1 to n to re-root at 1
    prev = 0
    v = 1
    while v != 0:
        nxt = up[v]
        up[v] = prev
        prev = v
        v = nxt
    return up


@njit(cache=True)
def relabel_from_parents(parent, n):
    """``psi`` with ``psi[1] = 1`` such that ``(psi[v], psi[parent[v]])``, v=2..n, is minimal."""
    img = np.arange(n + 1, dtype=np.int32)
    for v in range(2, n + 1):
        p = parent[v]
        t = img[v]
        img[v] = img[p]
        img[p] = t
    psi = np.zeros(n + 1, dtype=np.int32)
    psi[1] = 1
    x = 1
    for j in range(n, 1, -1):
        x = img[x]
        psi[x] = j
    return psi


@njit(cache=True)
def factorization_array(seq, n):
    """Transpositions as an ``(n - 1, 2)`` array of plain labels."""
    parent = prufer_parents(seq, n)
    psi = relabel_from_parents(parent, n)
    out = np.empty((n - 1, 2), dtype=np.int32)
    for v in range(2, n + 1):
        out[v - 2, 0] = psi[v]
        out[v - 2, 1] = psi[parent[v]]
    return out


@njit(cache=True)
def local_stats(seq, n):
    """(#T1, #M1, #T2, stays_positive) of the recentered factorization.

    Label 1 and 2 are unchanged by recentering (for n >= 4), and the
    trajectory of 1 stays positive iff its plain position never exceeds n/2.
    """
    parent = prufer_parents(seq, n)
    psi = relabel_from_parents(parent, n)
    half = n // 2
    pos = 1
    moves = 0
    t1 = 0
    t2 = 0
    positive = 1
    for v in range(2, n + 1):
        a = psi[v]
        b = psi[parent[v]]
        if a == 1 or b == 1:
            t1 += 1
        if a == 2 or b == 2:
            t2 += 1
        if pos == a:
            pos = b
            moves += 1
        elif pos == b:
            pos = a
            moves += 1
        else:
            continue
        if pos > half:
            positive = 0
    return t1, moves, t2, positive
