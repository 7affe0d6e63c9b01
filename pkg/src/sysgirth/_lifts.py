"""Cyclic voltage lifts of small 4-regular base graphs.

Given a base graph B and voltages in Z_N on its edges, the lift has vertices
(v, i) for v in B and i in Z_N, and each base edge u -> v with voltage t
yields the N edges (u, i) -- (v, i + t).  A cycle of the lift projects to a
closed non-backtracking walk of B whose voltage sum vanishes, and conversely.
So the lift has girth >= g exactly when every cyclically reduced closed walk
of length < g has nonzero voltage sum mod N, which is a finite list of linear
conditions that local search can satisfy when N is large enough.

Walks whose integer coefficient vector is zero (for instance the theta-shaped
walks P Q^-1 R P^-1 Q R^-1 of a base with two triangles on a common edge)
lift to cycles for every voltage choice, so they cap the attainable girth.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .graphs import MultiGraph, circulant

MAX_BASE_ORDER = 64
# below this many voltages per walk condition the search practically never
# succeeds, so such sizes are not attempted
_MIN_RATIO = 0.04


def base_graph(b: int) -> MultiGraph:
    """The base used for lifts of order divisible by b: the square of the b-cycle."""
    return circulant(b, [1, 2])


def closed_walks(base: MultiGraph, maxlen: int):
    """Coefficient vectors of cyclically non-backtracking closed walks of
    length <= maxlen, one per vector up to sign.

    Returns (C, lengths, structural) where C has one row per vector,
    ``lengths`` is the shortest walk giving each row, and ``structural`` is
    the length of the shortest walk with zero integer vector (or None).
    """
    m = base.m
    darts = []
    for e, (u, v) in enumerate(base.edges):
        darts.append((u, v, e, 1))
        darts.append((v, u, e, -1))
    leaving: list[list[int]] = [[] for _ in range(base.n)]
    for d, (t, _, _, _) in enumerate(darts):
        leaving[t].append(d)
    found: dict[tuple[int, ...], int] = {}
    structural = None
    coef = [0] * m

    # each closed walk is seen from a rotation starting at its smallest dart
    def dfs(d0: int, start: int, d: int, L: int) -> None:
        nonlocal structural
        _, h, e, s = darts[d]
        coef[e] += s
        if h == start and d0 != d ^ 1:
            key = tuple(coef)
            if not any(key):
                if structural is None or L < structural:
                    structural = L
            else:
                k = max(key, tuple(-c for c in key))
                if found.get(k, L + 1) > L:
                    found[k] = L
        if L < maxlen:
            for d2 in leaving[h]:
                if d2 >= d0 and d2 != d ^ 1:
                    dfs(d0, start, d2, L + 1)
        coef[e] -= s

    for d0 in range(len(darts)):
        dfs(d0, darts[d0][0], d0, 1)
    keys = list(found)
    C = np.array(keys, dtype=np.int64).reshape(len(keys), m)
    return C, np.array([found[k] for k in keys], dtype=np.int64), structural


@lru_cache(maxsize=64)
def _walks_for(b: int, maxlen: int):
    return closed_walks(base_graph(b), maxlen)


def lift(base: MultiGraph, N: int, voltages) -> MultiGraph:
    edges = []
    for e, (u, v) in enumerate(base.edges):
        t = int(voltages[e])
        edges.extend((u * N + i, v * N + (i + t) % N) for i in range(N))
    return MultiGraph(base.n * N, tuple(edges))


def find_voltages(C: np.ndarray, N: int, rng: np.random.Generator,
                  pinned: np.ndarray | None = None, steps: int = 400):
    """Voltages v in Z_N with C v != 0 in every row, and pinned . v == 0 if
    given.  Min-conflicts local search; None when the step budget runs out."""
    m = C.shape[1]
    C = C % N
    v = rng.integers(N, size=m)
    if pinned is not None:
        z = pinned % N
        unit = np.flatnonzero((z == 1) | (z == N - 1))
        if len(unit) == 0:
            return None
        dep = int(unit[0])  # the voltage solved for from the others
        sign = 1 if z[dep] == 1 else -1

        def solve(v):
            rest = (z @ v - z[dep] * v[dep]) % N
            v[dep] = (-rest * sign) % N
        solve(v)
    S = (C @ v) % N
    values = np.arange(N)
    for _ in range(steps):
        bad = np.flatnonzero(S == 0)
        if len(bad) == 0:
            return v
        row = int(rng.choice(bad))
        cols = np.flatnonzero(C[row])
        if pinned is not None:
            cols = cols[cols != dep]
        if len(cols) == 0:
            return None
        e = int(rng.choice(cols))
        delta = (values - v[e]) % N
        trial = S[:, None] + np.outer(C[:, e], delta)
        if pinned is not None:
            trial += np.outer(C[:, dep], (-sign * z[e] * delta) % N)
        cost = (trial % N == 0).sum(axis=0)
        v[e] = int(rng.choice(np.flatnonzero(cost == cost.min())))
        if pinned is not None:
            solve(v)
        S = (C @ v) % N
    return None


def _factorizations(size: int, g: int):
    for b in range(5, min(size, MAX_BASE_ORDER) + 1):
        if size % b == 0:
            yield b, size // b


def lift_with_base(b: int, N: int, g: int, rng: np.random.Generator, exact: bool = False,
                   seeds: int = 2) -> tuple[MultiGraph, str] | None:
    """A connected simple lift of C_b(1,2) of order b*N with girth >= g
    (== g when ``exact``), or None."""
    C, lengths, structural = _walks_for(b, g if exact else g - 1)
    if structural is not None and structural < g:
        return None
    short = lengths < g
    rows = C[short]
    if len(rows) > 0 and N < _MIN_RATIO * len(rows):
        return None
    # an exact g-cycle comes for free from a zero walk of length g,
    # otherwise one walk of length g is pinned to voltage zero
    pins: list[np.ndarray | None] = [None]
    if exact and structural != g:
        longest = np.flatnonzero(~short)
        if len(longest) == 0:
            return None
        picks = rng.choice(longest, size=min(seeds, len(longest)), replace=False)
        pins = [C[int(i)] for i in picks]
    base = base_graph(b)
    for pin in pins:
        for _ in range(seeds):
            v = find_voltages(rows, N, rng, pin)
            if v is None:
                continue
            graph = lift(base, N, v)
            if graph.is_connected():
                return graph, f"Z_{N} lift of C_{b}(1,2), voltages {v.tolist()}"
    return None


def lift_component(size: int, g: int, rng: np.random.Generator, exact: bool = False,
                   seeds: int = 2) -> tuple[MultiGraph, str] | None:
    """Try every factorization size = b * N with a usable base order b."""
    for b, N in _factorizations(size, g):
        found = lift_with_base(b, N, g, rng, exact, seeds)
        if found is not None:
            return found
    return None


def smallest_exact_lift(g: int, min_size: int, rng: np.random.Generator,
                        bases=(5, 6, 8)) -> tuple[int, int, MultiGraph, str] | None:
    """Binary search, per base order b, for the least N whose lift of girth
    exactly g is found; returns (b, N, graph, description) of the smallest."""
    best = None
    for b in bases:
        C, lengths, structural = _walks_for(b, g - 1)
        if structural is not None and structural < g:
            continue
        lo = max(1, -(-min_size // b), math.ceil(_MIN_RATIO * len(C)))
        hi = lo
        hit = None
        while hit is None and hi <= 64 * lo + 64:
            hit = lift_with_base(b, hi, g, rng, exact=True)
            if hit is None:
                lo, hi = hi + 1, 2 * hi
        if hit is None:
            continue
        while lo < hi:  # invariant: hi succeeds with graph ``hit``
            mid = (lo + hi) // 2
            found = lift_with_base(b, mid, g, rng, exact=True)
            if found is None:
                lo = mid + 1
            else:
                hi, hit = mid, found
        if best is None or b * hi < best[0] * best[1]:
            best = (b, hi, *hit)
    return best
