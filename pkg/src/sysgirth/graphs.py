"""Finite multigraphs: regularity, 2-factorization, girth, cycle counts, splicing.

Vertices are ``0..n-1``.  Edges are unordered pairs stored as ``(u, v)`` with
``u <= v``; repeats encode multiplicity and ``(v, v)`` is a loop.  A loop is a
cycle of length 1 and a pair of parallel edges is a cycle of length 2.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np
import scipy.sparse as sp

MAX_SPECTRUM_CUTOFF = 12


class GraphError(ValueError):
    pass


class OddDegreeError(GraphError):
    def __init__(self, vertex: int, degree: int):
        super().__init__(f"vertex {vertex} has degree {degree}")
        self.vertex = vertex
        self.degree = degree


class ForestError(GraphError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("need at least one vertex")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.append((u, v) if u <= v else (v, u))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_regular(self, d: int = 4) -> bool:
        return all(x == d for x in self.degrees())

    def incidence(self) -> list[list[tuple[int, int]]]:
        """``inc[v]`` lists ``(neighbour, edge_index)``; a loop appears twice."""
        inc: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append((v, i))
            inc[v].append((u, i))
        return inc

    def components(self) -> list[list[int]]:
        inc = self.incidence()
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [], [s]
            while queue:
                v = queue.pop()
                comp.append(v)
                for w, _ in inc[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def multiset(self) -> Counter:
        return Counter(self.edges)

    def relabel(self, offset: int, n: int) -> "MultiGraph":
        return MultiGraph(n, tuple((u + offset, v + offset) for u, v in self.edges))

    # serialization

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MultiGraph":
        return cls(int(d["n"]), tuple(tuple(e) for e in d["edges"]))

    @classmethod
    def from_json(cls, s: str) -> "MultiGraph":
        return cls.from_dict(json.loads(s))

    @classmethod
    def from_edgelist(cls, text: str, n: int | None = None) -> "MultiGraph":
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise GraphError(f"bad edge line {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if n is None:
            n = 1 + max((max(e) for e in edges), default=0)
        return cls(n, tuple(edges))


def load_graph(path: str | Path) -> MultiGraph:
    """Read graph JSON, or a plain edge list with one pair per line.

    JSON may be a bare graph or any document with the graph under a
    ``"graph"`` key (the output of ``sysgirth graph build``)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            return MultiGraph.from_dict(doc.get("graph", doc))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise GraphError(f"malformed graph JSON in {path}: {exc}") from exc
    try:
        return MultiGraph.from_edgelist(text)
    except ValueError as exc:
        raise GraphError(f"malformed edge list in {path}: {exc}") from exc


def circulant(n: int, steps) -> MultiGraph:
    steps = sorted(set(int(s) for s in steps))
    for s in steps:
        if not 0 < s < n / 2:
            raise GraphError(f"step {s} out of range for n={n}")
    return MultiGraph(n, tuple((i, (i + s) % n) for s in steps for i in range(n)))


def complete_graph(n: int) -> MultiGraph:
    return MultiGraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


# --- 2-factorization ------------------------------------------------------

@dataclass(frozen=True)
class TwoFactorization:
    graph: MultiGraph
    factor1: tuple[int, ...]  # edge indices
    factor2: tuple[int, ...]
    # orientation of every edge as (tail, head), indexed like graph.edges
    orientation: tuple[tuple[int, int], ...] = field(repr=False)

    def validate(self) -> None:
        g = self.graph
        if sorted(self.factor1 + self.factor2) != list(range(g.m)):
            raise AssertionError("factors do not partition the edges")
        for f in (self.factor1, self.factor2):
            deg = [0] * g.n
            for i in f:
                u, v = g.edges[i]
                deg[u] += 1
                deg[v] += 1
            if any(d != 2 for d in deg):
                raise AssertionError("factor is not a spanning 2-regular subgraph")


def _euler_orientation(g: MultiGraph) -> list[tuple[int, int]]:
    """Orient every edge along an Euler circuit of its component (Hierholzer)."""
    inc = g.incidence()
    used = [False] * g.m
    ptr = [0] * g.n
    orient: list[tuple[int, int] | None] = [None] * g.m
    for s in range(g.n):
        if ptr[s] == len(inc[s]):
            continue
        stack = [(s, -1)]
        while stack:
            v, _ = stack[-1]
            while ptr[v] < len(inc[v]) and used[inc[v][ptr[v]][1]]:
                ptr[v] += 1
            if ptr[v] == len(inc[v]):
                stack.pop()
                continue
            w, e = inc[v][ptr[v]]
            used[e] = True
            orient[e] = (v, w)
            stack.append((w, e))
    return orient  # type: ignore[return-value]


def two_factorize(g: MultiGraph) -> TwoFactorization:
    """Split a 4-regular multigraph into two spanning 2-regular factors.

    Orient along Euler circuits (in = out = 2 everywhere), then split the
    bipartite tail/head incidence, which is 2-regular, into two perfect
    matchings by alternating around its even cycles.
    """
    for v, d in enumerate(g.degrees()):
        if d % 2:
            raise OddDegreeError(v, d)
        if d != 4:
            raise GraphError(f"vertex {v} has degree {d}; only 4-regular input is supported")
    orient = _euler_orientation(g)
    # bipartite graph: left copy = tail, right copy = head
    out_edges: list[list[int]] = [[] for _ in range(g.n)]
    in_edges: list[list[int]] = [[] for _ in range(g.n)]
    for e, (t, h) in enumerate(orient):
        out_edges[t].append(e)
        in_edges[h].append(e)
    side = [-1] * g.m
    for e0 in range(g.m):
        if side[e0] != -1:
            continue
        e, s = e0, 0
        while side[e] == -1:
            side[e] = s
            h = orient[e][1]
            a, b = in_edges[h]
            e2 = b if a == e else a  # other edge entering the same head
            side[e2] = 1 - s
            t = orient[e2][0]
            a, b = out_edges[t]
            e = b if a == e2 else a  # other edge leaving that tail
        if side[e] != s:  # pragma: no cover - even cycles make this impossible
            raise AssertionError("odd alternating cycle")
    f1 = tuple(e for e in range(g.m) if side[e] == 0)
    f2 = tuple(e for e in range(g.m) if side[e] == 1)
    tf = TwoFactorization(g, f1, f2, tuple(orient))
    tf.validate()
    return tf


# --- girth ----------------------------------------------------------------

@dataclass(frozen=True)
class Circuit:
    vertices: tuple[int, ...]  # v0, v1, ..., v_{L-1}; edge i joins v_i and v_{i+1}
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def validate(self, g: MultiGraph) -> None:
        L = len(self.edges)
        if L == 0 or len(self.vertices) != L:
            raise AssertionError("empty or malformed circuit")
        if len(set(self.edges)) != L:
            raise AssertionError("circuit repeats an edge")
        if L > 2 and len(set(self.vertices)) != L:
            raise AssertionError("cycle repeats a vertex")
        for i, e in enumerate(self.edges):
            a, b = self.vertices[i], self.vertices[(i + 1) % L]
            if tuple(sorted((a, b))) != g.edges[e]:
                raise AssertionError(f"edge {e} does not join {a} and {b}")


def _short_multi_cycle(g: MultiGraph) -> Circuit | None:
    first: dict[tuple[int, int], int] = {}
    two = None
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            return Circuit((u,), (i,))
        if two is None and (u, v) in first:
            two = Circuit((u, v), (first[(u, v)], i))
        first.setdefault((u, v), i)
    return two


def _bfs_cycle(inc, root: int, bound: int) -> tuple[int, Circuit] | None:
    """Shortest cycle found by BFS from ``root`` of length < bound (simple
    graph part).  Any cycle of length L < bound through root is found, and
    whatever is returned is a genuine cycle."""
    dist = {root: 0}
    parent = {root: (-1, -1)}
    queue = deque([root])
    best = None
    while queue:
        v = queue.popleft()
        dv = dist[v]
        if 2 * dv + 1 >= bound:
            break
        pe = parent[v][1]
        for w, e in inc[v]:
            if e == pe:
                continue
            if w not in dist:
                dist[w] = dv + 1
                parent[w] = (v, e)
                queue.append(w)
            else:
                L = dv + dist[w] + 1
                if L < bound:
                    bound = L
                    best = (v, w, e)
    if best is None:
        return None
    v, w, e = best
    # climb both tree paths to their meeting point
    pv, pw = [v], [w]
    ev, ew = [], []
    a, b = v, w
    while a != b:
        if dist[a] >= dist[b]:
            p, pe = parent[a]
            ev.append(pe)
            a = p
            pv.append(a)
        else:
            p, pe = parent[b]
            ew.append(pe)
            b = p
            pw.append(b)
    # pv: v .. lca, pw: w .. lca
    verts = list(reversed(pv)) + pw[:-1]  # lca .. v, w .. (child of lca)
    edges = list(reversed(ev)) + [e] + ew
    return bound, Circuit(tuple(verts), tuple(edges))


def shortest_cycle(g: MultiGraph, bound: int | None = None) -> Circuit | None:
    """A minimal cycle, or None if there is no cycle shorter than ``bound``."""
    c = _short_multi_cycle(g)
    if c is not None:
        return c
    inc = g.incidence()
    best: Circuit | None = None
    limit = bound if bound is not None else g.n + 1
    for r in range(g.n):
        found = _bfs_cycle(inc, r, limit)
        if found is not None:
            limit, best = found
            if limit == 3:
                break
    return best


def girth_with_witness(g: MultiGraph) -> tuple[int, Circuit]:
    c = shortest_cycle(g)
    if c is None:
        raise ForestError("graph has no cycle")
    return len(c), c


def girth(g: MultiGraph) -> int:
    return girth_with_witness(g)[0]


def shortest_other_cycle(g: MultiGraph, circuit: Circuit) -> int | None:
    """Length of a shortest cycle different from ``circuit`` (None if there
    is none).  A cycle containing every edge of another cycle is that cycle,
    so each competitor misses some edge of ``circuit``."""
    best = None
    for e in set(circuit.edges):
        rest = MultiGraph(g.n, tuple(x for i, x in enumerate(g.edges) if i != e))
        c = shortest_cycle(rest, best)
        if c is not None:
            best = len(c)
    return best


# --- cycle counts ---------------------------------------------------------

@dataclass
class LengthSpectrum:
    cutoff: int
    counts: dict[int, int]
    witnesses: dict[int, Circuit]

    def present(self) -> list[int]:
        return sorted(L for L, c in self.counts.items() if c > 0)

    @property
    def girth(self) -> int | None:
        p = self.present()
        return p[0] if p else None

    @property
    def two_girth(self) -> int | None:
        p = self.present()
        return p[1] if len(p) > 1 else None


def _simple_multiplicities(g: MultiGraph):
    mult: Counter = Counter(e for e in g.edges if e[0] != e[1])
    nbrs: list[list[int]] = [[] for _ in range(g.n)]
    for (u, v) in mult:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for lst in nbrs:
        lst.sort()
    return mult, nbrs


def _distances_above(nbrs, s: int, radius: int) -> dict[int, int]:
    """BFS distances from s within the vertices >= s, up to radius."""
    dist = {s: 0}
    frontier = [s]
    for r in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for w in nbrs[v]:
                if w > s and w not in dist:
                    dist[w] = r
                    nxt.append(w)
        frontier = nxt
    return dist


def length_spectrum(g: MultiGraph, cutoff: int) -> LengthSpectrum:
    """Exact numbers of cycles of every length <= cutoff.

    A cycle of length >= 3 is a closed walk on distinct vertices, counted once
    per choice of parallel edges and up to rotation and reflection.  Loops
    count as cycles of length 1 and each pair of parallel edges as a cycle of
    length 2.
    """
    if cutoff > MAX_SPECTRUM_CUTOFF:
        raise GraphError(f"cutoff {cutoff} exceeds {MAX_SPECTRUM_CUTOFF}")
    counts = {L: 0 for L in range(1, cutoff + 1)}
    witnesses: dict[int, Circuit] = {}
    idx: dict[tuple[int, int], list[int]] = {}
    for i, e in enumerate(g.edges):
        idx.setdefault(e, []).append(i)
    if cutoff >= 1:
        for e, ids in idx.items():
            if e[0] == e[1]:
                counts[1] += len(ids)
                witnesses.setdefault(1, Circuit((e[0],), (ids[0],)))
    if cutoff >= 2:
        for e, ids in idx.items():
            if e[0] != e[1] and len(ids) > 1:
                counts[2] += comb(len(ids), 2)
                witnesses.setdefault(2, Circuit(e, (ids[0], ids[1])))
    mult, nbrs = _simple_multiplicities(g)

    def m(a, b):
        return mult[(a, b) if a < b else (b, a)]

    # each cycle is found twice (two directions) from its smallest vertex
    raw = {L: 0 for L in range(3, cutoff + 1)}

    def extend(s, path, on_path, wt, dist):
        v = path[-1]
        for w in nbrs[v]:
            if w <= s or w in on_path:
                continue
            dw = dist.get(w)
            if dw is None or len(path) + dw > cutoff:
                continue  # cannot get back to s in time
            wt2 = wt * m(v, w)
            path.append(w)
            L = len(path)
            if L >= 3 and (min(w, s), max(w, s)) in mult:
                raw[L] += wt2 * m(w, s)
                if L not in witnesses:
                    es = tuple(idx[tuple(sorted((path[i], path[(i + 1) % L])))][0]
                               for i in range(L))
                    witnesses[L] = Circuit(tuple(path), es)
            if L < cutoff:
                on_path.add(w)
                extend(s, path, on_path, wt2, dist)
                on_path.discard(w)
            path.pop()

    if cutoff >= 3:
        for s in range(g.n):
            extend(s, [s], {s}, 1, _distances_above(nbrs, s, cutoff // 2))
    for L in raw:
        counts[L] = raw[L] // 2
    return LengthSpectrum(cutoff, counts, witnesses)


def short_cycle_counts(g: MultiGraph) -> dict[int, int]:
    """Cycle counts for lengths 1..4 from adjacency-matrix traces.

    Independent of :func:`length_spectrum`; used for large sample batches.
    """
    counts = {1: 0, 2: 0}
    off = []
    for (u, v), k in Counter(g.edges).items():
        if u == v:
            counts[1] += k
        else:
            counts[2] += comb(k, 2)
            off.append((u, v, k))
    if off:
        u, v, k = (np.array(x) for x in zip(*off))
        A = sp.coo_matrix((np.r_[k, k].astype(np.int64), (np.r_[u, v], np.r_[v, u])),
                          shape=(g.n, g.n)).tocsr()
    else:
        A = sp.csr_matrix((g.n, g.n), dtype=np.int64)
    A2 = A @ A
    counts[3] = int(A2.multiply(A).sum()) // 6
    tr4 = int(A2.multiply(A2).sum())
    sq = A.multiply(A)
    s = np.asarray(sq.sum(axis=1)).ravel()
    back = int((s ** 2).sum())  # walks i-j-i-k-i
    # walks i-j-k-j-i with k != i
    other = int((sq @ s).sum()) - int(sq.multiply(sq).sum())
    counts[4] = (tr4 - back - other) // 8
    return counts


def two_girth(g: MultiGraph, cutoff: int | None = None) -> int | None:
    """Second smallest cycle length.

    When the shortest cycle is unique this is exact without any cutoff (see
    :func:`shortest_other_cycle`).  Otherwise cycles are enumerated up to
    ``cutoff`` and None means "greater than cutoff".
    """
    gval, c = girth_with_witness(g)
    second = shortest_other_cycle(g, c)
    if second is None or second > gval:
        return second
    if cutoff is None:
        cutoff = min(MAX_SPECTRUM_CUTOFF, gval + 4)
    return length_spectrum(g, cutoff).two_girth


# --- splice ---------------------------------------------------------------

def splice(g1: MultiGraph, e1: int, g2: MultiGraph, e2: int) -> MultiGraph:
    """Cut edge ``e1`` of g1 and ``e2`` of g2 and join their four ends to one
    new vertex.  Vertices of g2 are shifted by ``g1.n``; the new vertex is
    last."""
    if not 0 <= e1 < g1.m:
        raise GraphError(f"edge {e1} not in first graph")
    if not 0 <= e2 < g2.m:
        raise GraphError(f"edge {e2} not in second graph")
    n = g1.n + g2.n + 1
    v = n - 1
    a, b = g1.edges[e1]
    c, d = g2.edges[e2]
    c, d = c + g1.n, d + g1.n
    edges = [e for i, e in enumerate(g1.edges) if i != e1]
    edges += [(x + g1.n, y + g1.n) for i, (x, y) in enumerate(g2.edges) if i != e2]
    edges += [(a, v), (b, v), (c, v), (d, v)]
    return MultiGraph(n, tuple(edges))


def _edge_off(g: MultiGraph, circuit: Circuit) -> int:
    avoid = set(circuit.edges)
    for i in range(g.m):
        if i not in avoid:
            return i
    raise GraphError("every edge lies on the minimal cycle")


def splice_girth_safe(g1: MultiGraph, g2: MultiGraph) -> MultiGraph:
    """Splice along edges chosen off a minimal cycle of each input, which
    keeps the girth equal to the smaller input girth."""
    _, c1 = girth_with_witness(g1)
    _, c2 = girth_with_witness(g2)
    return splice(g1, _edge_off(g1, c1), g2, _edge_off(g2, c2))
