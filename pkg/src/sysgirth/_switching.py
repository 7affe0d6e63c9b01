"""Randomized search for simple 4-regular graphs with girth >= g.

Used as the fallback component generator when no voltage lift of the right
size is available.  The graph is grown greedily (each new edge joins two
vertices far apart) and whatever short cycles remain are removed by double
edge switches.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .graphs import MultiGraph


class _Adj:
    """Mutable multigraph with slot-indexed edges, for switching."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.edges: list[tuple[int, int]] = []
        self.pos: dict[tuple[int, int], list[int]] = {}

    def add(self, u: int, v: int) -> None:
        self.adj[u].append(v)
        self.adj[v].append(u)
        key = (min(u, v), max(u, v))
        self.pos.setdefault(key, []).append(len(self.edges))
        self.edges.append(key)

    def slot(self, u: int, v: int) -> int:
        return self.pos[(min(u, v), max(u, v))][0]

    def replace(self, i: int, u: int, v: int) -> None:
        a, b = self.edges[i]
        self.adj[a].remove(b)
        self.adj[b].remove(a)
        self.pos[(a, b)].remove(i)
        if not self.pos[(a, b)]:
            del self.pos[(a, b)]
        key = (min(u, v), max(u, v))
        self.adj[u].append(v)
        self.adj[v].append(u)
        self.pos.setdefault(key, []).append(i)
        self.edges[i] = key

    def ball(self, a: int, radius: int) -> np.ndarray:
        inside = np.zeros(self.n, dtype=bool)
        inside[a] = True
        frontier = [a]
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for w in self.adj[v]:
                    if not inside[w]:
                        inside[w] = True
                        nxt.append(w)
            frontier = nxt
        return inside

    def short_cycle(self, root: int, g: int) -> list[tuple[int, int]] | None:
        """Edges of some cycle of length < g seen from root, or None."""
        adj = self.adj
        if root in adj[root]:
            return [(root, root)]
        seen: set[int] = set()
        for w in adj[root]:
            if w in seen:
                return [(root, w), (root, w)]
            seen.add(w)
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            dv = dist[v]
            if 2 * dv + 1 >= g:
                break
            skipped = False
            for w in adj[v]:
                if w == parent[v] and not skipped:
                    skipped = True
                    continue
                if w in dist:
                    if dv + dist[w] + 1 < g:
                        edges = [(v, w)]
                        for x in (v, w):
                            while parent[x] != -1:
                                edges.append((parent[x], x))
                                x = parent[x]
                        return edges
                else:
                    dist[w] = dv + 1
                    parent[w] = v
                    queue.append(w)
        return None

    def near(self, a: int, b: int, limit: int) -> bool:
        """Is there an a-b path of length <= limit avoiding one copy of ab?"""
        if a == b:
            return True
        dist = {a: 0}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            dv = dist[v]
            if dv >= limit:
                break
            skipped = False
            for w in self.adj[v]:
                if not skipped and {v, w} == {a, b}:
                    skipped = True
                    continue
                if w == b:
                    return True
                if w not in dist:
                    dist[w] = dv + 1
                    queue.append(w)
        return False


def _greedy(n: int, g: int, rng: np.random.Generator) -> _Adj:
    G = _Adj(n)
    free = np.full(n, 4)
    while free.any():
        v = int(rng.choice(np.flatnonzero(free == free.max())))
        far = np.flatnonzero((free > 0) & ~G.ball(v, g - 2))
        if len(far) == 0:
            far = np.flatnonzero(free > 0)
            if len(far) > 1:
                far = far[far != v]
        w = int(rng.choice(far[free[far] == free[far].max()]))
        G.add(v, w)
        free[v] -= 1
        free[w] -= 1
    return G


def _switch_out(G: _Adj, i: int, a: int, b: int, g: int,
                rng: np.random.Generator, attempts: int) -> bool:
    """Switch edge slot i = ab with some cd to ac, bd, creating no cycle
    shorter than g.  Candidates with c near a or d near b are skipped."""
    E = np.array(G.edges)
    in_a = G.ball(a, g - 2)
    in_b = G.ball(b, g - 2)
    fwd = ~in_a[E[:, 0]] & ~in_b[E[:, 1]]
    rev = ~in_a[E[:, 1]] & ~in_b[E[:, 0]]
    fwd[i] = rev[i] = False
    cand = np.concatenate([np.flatnonzero(fwd) * 2, np.flatnonzero(rev) * 2 + 1])
    for t in rng.permutation(cand)[:attempts]:
        j = int(t) // 2
        c, d = G.edges[j]
        if t % 2:
            c, d = d, c
        if c == d:
            continue
        G.replace(i, a, c)
        G.replace(j, b, d)
        if not G.near(a, c, g - 2) and not G.near(b, d, g - 2):
            return True
        G.replace(i, a, b)
        G.replace(j, c, d)
    return False


def _kick(G: _Adj, i: int, a: int, b: int, rng: np.random.Generator) -> None:
    m = len(G.edges)
    while True:
        j = int(rng.integers(m))
        c, d = G.edges[j]
        if len({a, b, c, d}) == 4 - (a == b):
            G.replace(i, a, c)
            G.replace(j, b, d)
            return


def switching_girth_graph(n: int, g: int, rng: np.random.Generator,
                          budget: int | None = None) -> MultiGraph | None:
    """Connected simple 4-regular graph on n vertices with girth >= g, or
    None when the step budget runs out."""
    if n < 5:
        return None
    G = _greedy(n, g, rng)
    budget = 5 * n if budget is None else budget
    steps = 0
    clean = False
    while not clean:
        clean = True
        for root in range(n):
            while (cycle := G.short_cycle(root, g)) is not None:
                clean = False
                steps += 1
                if steps > budget:
                    return None
                for k in rng.permutation(len(cycle)):
                    a, b = cycle[k]
                    if _switch_out(G, G.slot(a, b), a, b, g, rng, 50):
                        break
                else:
                    a, b = cycle[int(rng.integers(len(cycle)))]
                    _kick(G, G.slot(a, b), a, b, rng)
    graph = MultiGraph(n, tuple(G.edges))
    comps = graph.components()
    while len(comps) > 1:
        # a switch across two components merges them; any new cycle uses both
        # new edges, so it is longer than either component's girth
        first, second = set(comps[0]), set(comps[1])
        i = next(k for k, e in enumerate(G.edges) if e[0] in first)
        j = next(k for k, e in enumerate(G.edges) if e[0] in second)
        (a, b), (c, d) = G.edges[i], G.edges[j]
        G.replace(i, a, c)
        G.replace(j, b, d)
        graph = MultiGraph(n, tuple(G.edges))
        comps = graph.components()
    return graph
