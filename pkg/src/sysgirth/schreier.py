"""Coset actions of the free group F2 = <x, y> and the graphs they draw.

A transitive action of F2 on n points is the same thing as a subgroup of
index n (the stabilizer of a base point) and as a connected 4-regular
Schreier graph with its edges split into an x-factor and a y-factor.  Points
are the integers 0..n-1 in memory and coincide with graph vertex labels; the
JSON form is 1-indexed.  Words act on the right, letter by letter from the
left, and the capital letters X, Y act by the inverse permutations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graphs import GraphError, MultiGraph, girth_with_witness, two_factorize
from .words import reduce

TOWER_SIZE_LIMIT = 10_000_000

_INV = {"x": "X", "X": "x", "y": "Y", "Y": "y"}


class ActionError(ValueError):
    pass


class NoStabilizerError(LookupError):
    """No nontrivial reduced word up to the cutoff fixes the base point."""

    def __init__(self, cutoff: int):
        super().__init__(f"no nontrivial stabilizing word of length <= {cutoff}")
        self.cutoff = cutoff


def _as_perm(images, n: int, name: str) -> np.ndarray:
    p = np.asarray(images, dtype=np.int64)
    if p.shape != (n,) or (n and (p.min() < 0 or p.max() >= n)):
        raise ActionError(f"{name} is not a map of {{0..{n - 1}}} to itself")
    if len(np.unique(p)) != n:
        raise ActionError(f"{name} is not a bijection")
    p.setflags(write=False)
    return p


@dataclass(frozen=True, eq=False)
class SchreierAction:
    """Right action of F2 on n points by two permutations.

    The stabilizer of ``base`` is the subgroup the action stands for, so the
    action must be transitive; this is checked on construction.
    """

    n: int
    perm_x: np.ndarray
    perm_y: np.ndarray
    base: int = 0
    _inverses: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ActionError("an action needs at least one point")
        object.__setattr__(self, "perm_x", _as_perm(self.perm_x, self.n, "perm_x"))
        object.__setattr__(self, "perm_y", _as_perm(self.perm_y, self.n, "perm_y"))
        if not 0 <= self.base < self.n:
            raise ActionError(f"base point {self.base} out of range")
        inv = {}
        for c, p in (("x", self.perm_x), ("y", self.perm_y)):
            q = np.empty_like(p)
            q[p] = np.arange(self.n)
            q.setflags(write=False)
            inv[c] = p
            inv[c.upper()] = q
        object.__setattr__(self, "_inverses", inv)
        if len(self.orbit()) != self.n:
            raise ActionError("action is not transitive")

    def perm(self, letter: str) -> np.ndarray:
        return self._inverses[letter]

    def orbit(self, point: int | None = None) -> list[int]:
        start = self.base if point is None else point
        seen = np.zeros(self.n, dtype=bool)
        seen[start] = True
        order = [start]
        for p in order:
            for c in "xXyY":
                q = int(self._inverses[c][p])
                if not seen[q]:
                    seen[q] = True
                    order.append(q)
        return order

    def act(self, word: str, point: int | None = None) -> int:
        p = self.base if point is None else point
        for c in word:
            p = int(self._inverses[c][p])
        return p

    def to_dict(self) -> dict:
        return {"n": self.n, "x": [int(v) + 1 for v in self.perm_x],
                "y": [int(v) + 1 for v in self.perm_y], "base": self.base + 1}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SchreierAction":
        try:
            n = int(d["n"])
            return cls(n, [int(v) - 1 for v in d["x"]], [int(v) - 1 for v in d["y"]],
                       int(d.get("base", 1)) - 1)
        except (KeyError, TypeError) as exc:
            raise ActionError(f"malformed action: {exc}") from exc

    @classmethod
    def from_json(cls, s: str) -> "SchreierAction":
        return cls.from_dict(json.loads(s))


def contains(a: SchreierAction, w: str) -> bool:
    """Does w lie in the subgroup, i.e. fix the base point?"""
    return a.act(w) == a.base


def _factor_permutation(g: MultiGraph, factor) -> np.ndarray:
    """Orient each circuit of a 2-factor starting from its lowest vertex
    towards the lower of that vertex's two circuit neighbours, and return
    the successor map."""
    inc: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e in factor:
        u, v = g.edges[e]
        inc[u].append((v, e))
        if u != v:
            inc[v].append((u, e))
    succ = np.full(g.n, -1, dtype=np.int64)
    for s in range(g.n):
        if succ[s] != -1:
            continue
        if g.edges[inc[s][0][1]] == (s, s):  # a loop is a fixed point
            succ[s] = s
            continue
        (w, e), _ = sorted(inc[s])
        prev_e, v = e, s
        while True:
            succ[v] = w
            if w == s:
                break
            # the other edge of the factor at w
            (a, ea), (b, eb) = inc[w]
            nxt, ne = (b, eb) if ea == prev_e else (a, ea)
            v, w, prev_e = w, nxt, ne
    return succ


def graph_to_action(g: MultiGraph, base: int | None = None) -> SchreierAction:
    """Read a connected 4-regular multigraph as a coset action.

    The two factors of a 2-factorization become x and y.  Unless ``base`` is
    given, the base point is a vertex of a shortest cycle, which makes the
    shortest nontrivial subgroup element exactly as long as the girth.
    """
    if not g.is_regular(4):
        raise GraphError("graph is not 4-regular")
    if not g.is_connected():
        raise GraphError("graph is not connected")
    tf = two_factorize(g)
    px = _factor_permutation(g, tf.factor1)
    py = _factor_permutation(g, tf.factor2)
    if base is None:
        base = min(girth_with_witness(g)[1].vertices)
    return SchreierAction(g.n, px, py, base)


def action_to_graph(a: SchreierAction) -> MultiGraph:
    """The Schreier graph: an edge p -- p.s for every point p and generator s."""
    edges = [(p, int(a.perm_x[p])) for p in range(a.n)]
    edges += [(p, int(a.perm_y[p])) for p in range(a.n)]
    return MultiGraph(a.n, tuple(edges))


def shortest_stabilizer(a: SchreierAction, cutoff: int, avoid_x_powers: bool = False) -> str | None:
    """A shortest nontrivial reduced word fixing the base, of length at most
    ``cutoff``, or None.

    Breadth-first search over states (point, last letter), so no word ever
    cancels against itself.  With ``avoid_x_powers`` the search is restricted
    to words that use y or Y, i.e. to subgroup elements outside <x>.
    """
    perms = {c: a.perm(c) for c in "xXyY"}
    start = (a.base, "", False)
    parent: dict[tuple, tuple] = {start: None}
    frontier = [start]
    for depth in range(1, cutoff + 1):
        nxt = []
        for state in frontier:
            p, last, used_y = state
            for c in "xXyY":
                if last and c == _INV[last]:
                    continue
                q = int(perms[c][p])
                uy = used_y or c in "yY"
                if q == a.base and (uy or not avoid_x_powers):
                    word = [c]
                    s = state
                    while s != start:
                        word.append(s[1])
                        s = parent[s]
                    return "".join(reversed(word))
                key = (q, c, uy if avoid_x_powers else False)
                if key not in parent:
                    parent[key] = state
                    nxt.append(key)
        frontier = nxt
        if not frontier:
            break
    return None


def min_subgroup_length(a: SchreierAction, cutoff: int) -> tuple[int, str]:
    """Length and witness of a shortest nontrivial element of the subgroup."""
    w = shortest_stabilizer(a, cutoff)
    if w is None:
        raise NoStabilizerError(cutoff)
    if reduce(w) != w or not contains(a, w):
        raise AssertionError(f"witness {w!r} is not a reduced stabilizing word")
    return len(w), w


# --- permutation tower ----------------------------------------------------

def _block_cycle(m: int) -> list[int]:
    """Row order 0 -> 1 -> 3 -> ... -> 2m-1 -> 2m -> 2m-2 -> ... -> 2 -> 0."""
    return [0] + list(range(1, 2 * m, 2)) + list(range(2 * m, 0, -2))


def _block_perm(N: int, start: int, width: int, m: int) -> np.ndarray:
    """Permutation of {0..N-1} acting on the 1-indexed interval
    [start+1, start+(2m+1)*width], seen as rows 0..2m of the given width,
    by cycling the rows; identity elsewhere."""
    p = np.arange(N, dtype=np.int64)
    rows = _block_cycle(m)
    cols = np.arange(width)
    for i, r in enumerate(rows):
        s = rows[(i + 1) % len(rows)]
        p[start + r * width + cols] = start + s * width + cols
    return p


def tower_bounds(k: int, m: int, r: int) -> tuple[list[int], list[int]]:
    ls, ns = [0], [k]
    for _ in range(r):
        w = ns[-1] - ls[-1]
        ls.append(ls[-1] + (2 * m + 1) * w)
        ns.append(ns[-1] + (2 * m + 1) * 2 * m * w)
    return ls, ns


def support(p: np.ndarray) -> np.ndarray:
    """1-indexed support of a 0-indexed permutation."""
    return np.flatnonzero(p != np.arange(len(p))) + 1


@dataclass(frozen=True, eq=False)
class PermTower:
    """Permutations sigma_0..sigma_r and tau_1..tau_r of {1..n_r} with
    interval supports, stored 0-indexed on n_r points.  ``tau_parts[0]`` is
    the identity tau_0."""

    k: int
    m: int
    r: int
    sigma_parts: list
    tau_parts: list
    l_bounds: list
    n_bounds: list

    @property
    def degree(self) -> int:
        return self.n_bounds[-1]

    def sigma(self) -> np.ndarray:
        return _compose_disjoint(self.sigma_parts)

    def tau(self) -> np.ndarray:
        return _compose_disjoint(self.tau_parts)


def _compose_disjoint(parts) -> np.ndarray:
    out = np.arange(len(parts[0]), dtype=np.int64)
    for p in parts:
        moved = p != np.arange(len(p))
        out[moved] = p[moved]
    return out


def perm_tower(k: int, m: int, r: int) -> PermTower:
    if k < 1 or m < 1 or r < 1:
        raise ValueError("k, m and r must be positive")
    ls, ns = tower_bounds(k, m, r)
    if ns[-1] > TOWER_SIZE_LIMIT:
        raise ValueError(f"tower has n_r = {ns[-1]} points, above the limit {TOWER_SIZE_LIMIT}")
    N = ns[-1]
    sigma0 = np.arange(N, dtype=np.int64)
    sigma0[:k] = np.roll(np.arange(k), -1)
    sigmas, taus = [sigma0], [np.arange(N, dtype=np.int64)]
    for i in range(r):
        w = ns[i] - ls[i]
        taus.append(_block_perm(N, ls[i], w, m))
        sigmas.append(_block_perm(N, ns[i], 2 * m * w, m))
    return PermTower(k, m, r, sigmas, taus, ls, ns)


def _interval(a: int, b: int) -> set[int]:
    return set(range(a, b + 1))


def check_tower(t: PermTower) -> dict:
    """Exhaustively check supports, the two stepping relations for all
    0 < |l| <= m, the recurrences and pairwise disjointness.

    The stepping relations are checked as stated (``relation_tau_steps``,
    ``relation_sigma_steps``) and in the form the construction satisfies:
    tau_r only has to push points of supp(sigma_{r-1}) outside
    supp(tau_{r-1}) into supp(sigma_r), since it fixes the rest; and for
    k = 1 the one-point cycle sigma_0 = (1) is given the nominal support {1}.

    Returns a dict of named booleans.  The recurrences are checked against
    the explicit interval lengths, not against themselves.
    """
    k, m, r = t.k, t.m, t.r
    ls, ns = t.l_bounds, t.n_bounds
    N = t.degree
    res = {}
    supp_s = [set(support(p).tolist()) for p in t.sigma_parts]
    supp_t = [set(support(p).tolist()) for p in t.tau_parts]
    res["sigma0_is_k_cycle"] = supp_s[0] == (_interval(1, k) if k > 1 else set())
    res["supports"] = all(
        supp_s[i] == _interval(ns[i - 1] + 1, ns[i]) and supp_t[i] == _interval(ls[i - 1] + 1, ls[i])
        for i in range(1, r + 1))
    res["ordering"] = all(ns[i] > ls[i] > ns[i - 1] for i in range(1, r + 1))
    res["recurrence_l"] = all(
        ls[i + 1] == ls[i] + (2 * m + 1) * (ns[i] - ls[i]) for i in range(r))
    res["recurrence_n"] = all(
        ns[i + 1] == ns[i] + (2 * m + 1) * (2 * m) * (ns[i] - ls[i]) for i in range(r))
    res["disjoint"] = all(not (supp_s[i] & supp_s[j]) for i in range(r + 1) for j in range(i)) and \
        all(not (supp_t[i] & supp_t[j]) for i in range(1, r + 1) for j in range(1, i))

    def powers(p):
        out = {}
        fwd = np.arange(N)
        bwd = np.arange(N)
        inv = np.empty_like(p)
        inv[p] = np.arange(N)
        for l in range(1, m + 1):
            fwd = p[fwd]
            bwd = inv[bwd]
            out[l], out[-l] = fwd, bwd
        return out

    def stepping(src_of, dst_of, parts):
        ok = True
        for i in range(1, r + 1):
            pw = powers(parts[i])
            src = np.array(sorted(src_of(i)), dtype=np.int64) - 1
            dst = np.zeros(N + 1, dtype=bool)
            dst[list(dst_of(i))] = True
            for l in pw:
                if len(src) and not dst[pw[l][src] + 1].all():
                    ok = False
        return ok

    # sigma_0 read as the cycle (1..k) even when k = 1 and it moves nothing
    nominal = [_interval(1, k)] + supp_s[1:]
    rel1 = stepping(lambda i: supp_s[i - 1], lambda i: supp_s[i], t.tau_parts)
    rel2 = stepping(lambda i: supp_t[i] - supp_s[i - 1], lambda i: supp_s[i] - supp_t[i],
                    t.sigma_parts)
    res["relation_tau_steps_restricted"] = stepping(
        lambda i: nominal[i - 1] - supp_t[i - 1], lambda i: supp_s[i], t.tau_parts)
    res["relation_sigma_steps_nominal"] = stepping(
        lambda i: supp_t[i] - nominal[i - 1], lambda i: supp_s[i] - supp_t[i], t.sigma_parts)
    res["relation_tau_steps"] = rel1
    res["relation_sigma_steps"] = rel2
    # used by the final argument: supp(sigma_{i-1}) minus supp(tau_{i-1}) lies in supp(tau_i)
    res["chain_inclusion"] = all(
        (supp_s[i - 1] - supp_t[i - 1]) <= supp_t[i] for i in range(1, r + 1))
    return res


def closed_form_degree(k: int, b: int) -> dict:
    """N_k for m = r = b, three ways.

    ``printed`` is the expression ((4b^2)^b - 1)/(4b - 1) (2b+1)(2b);
    ``geometric`` sums the recurrences as a geometric series of ratio 4b^2,
    k + k(2b+1)(2b)((4b^2)^b - 1)/(4b^2 - 1); ``recurrence`` iterates them.
    """
    q = 4 * b * b
    printed = (q ** b - 1) / (4 * b - 1) * (2 * b + 1) * (2 * b)
    geometric = k + k * (2 * b + 1) * (2 * b) * (q ** b - 1) // (q - 1)
    _, ns = tower_bounds(k, b, b)
    return {"printed": printed, "geometric": geometric, "recurrence": ns[-1]}


def stabilizer_action_Hk(t: PermTower) -> SchreierAction:
    """The action of F2 with x -> product of sigma parts, y -> product of tau
    parts, based at point 1 (index 0)."""
    return SchreierAction(t.degree, t.sigma(), t.tau(), 0)


def min_x_power(a: SchreierAction, limit: int) -> int | None:
    """Least j in 1..limit with x^j in the subgroup."""
    p = a.base
    for j in range(1, limit + 1):
        p = int(a.perm_x[p])
        if p == a.base:
            return j
    return None
