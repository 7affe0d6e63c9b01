"""Constructions of 4-regular graphs with prescribed order, girth and 2-girth.

Every constructor returns a :class:`Certified` pair: the graph together with
a :class:`GirthCertificate` computed from the graph itself, never from the
construction's theory.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import _kernels, _lifts
from ._seeding import rng_for
from ._switching import switching_girth_graph
from .graphs import (
    Circuit,
    LengthSpectrum,
    MultiGraph,
    complete_graph,
    girth_with_witness,
    length_spectrum,
    short_cycle_counts,
    splice_girth_safe,
    two_girth,
)

# length_spectrum on large graphs is only affordable up to about this cutoff
SPECTRUM_PREFIX_MAX = 8
DEFAULT_MAX_TRIES = 100_000


class InfeasibleError(ValueError):
    """Raised when an (n, g) request is below what the construction can reach."""

    def __init__(self, message: str, threshold: int | None = None):
        super().__init__(message)
        self.threshold = threshold


class PreconditionError(ValueError):
    pass


class TriesExhaustedError(RuntimeError):
    def __init__(self, tries: int, acceptance: float):
        super().__init__(
            f"no acceptable graph in {tries} tries "
            f"(estimated acceptance probability per try {acceptance:.3g})")
        self.tries = tries
        self.acceptance = acceptance


def poisson_mean(i: int) -> float:
    """Limiting mean number of i-cycles in a random 4-regular pairing-model graph."""
    return 3 ** i / (2 * i)


# --- certificates ------------------------------------------------------------

@dataclass
class GirthCertificate:
    n: int
    girth: int
    witness: Circuit
    spectrum_prefix: LengthSpectrum
    connected: bool
    regular_degree: int | None
    two_girth: int | None = None
    seed: int | None = None
    construction: str = ""
    extra: dict = field(default_factory=dict)

    @classmethod
    def compute(cls, graph: MultiGraph, *, seed: int | None = None, construction: str = "",
                with_two_girth: bool = False, extra: dict | None = None) -> "GirthCertificate":
        g, witness = girth_with_witness(graph)
        degs = set(graph.degrees())
        return cls(
            n=graph.n,
            girth=g,
            witness=witness,
            spectrum_prefix=length_spectrum(graph, min(g, SPECTRUM_PREFIX_MAX)),
            connected=graph.is_connected(),
            regular_degree=degs.pop() if len(degs) == 1 else None,
            two_girth=two_girth(graph) if with_two_girth else None,
            seed=seed,
            construction=construction,
            extra=dict(extra or {}),
        )

    def validate(self, graph: MultiGraph) -> None:
        """Recompute everything from scratch and compare; AssertionError on mismatch."""
        fresh = GirthCertificate.compute(graph, with_two_girth=self.two_girth is not None)
        assert graph.n == self.n, f"vertex count {graph.n} != {self.n}"
        assert fresh.girth == self.girth, f"girth {fresh.girth} != {self.girth}"
        assert fresh.connected == self.connected, "connectivity differs"
        assert fresh.regular_degree == self.regular_degree, "degree differs"
        assert fresh.spectrum_prefix.counts == self.spectrum_prefix.counts, "spectrum differs"
        if self.two_girth is not None:
            assert fresh.two_girth == self.two_girth, \
                f"2-girth {fresh.two_girth} != {self.two_girth}"
        assert len(self.witness) == self.girth
        self.witness.validate(graph)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "girth": self.girth,
            "two_girth": self.two_girth,
            "connected": self.connected,
            "regular_degree": self.regular_degree,
            "seed": self.seed,
            "construction": self.construction,
            "witness": {"vertices": list(self.witness.vertices),
                        "edges": list(self.witness.edges)},
            "spectrum_prefix": {str(k): v for k, v in self.spectrum_prefix.counts.items()},
            **self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class Certified(NamedTuple):
    graph: MultiGraph
    certificate: GirthCertificate


def certify(graph: MultiGraph, **kwargs) -> Certified:
    return Certified(graph, GirthCertificate.compute(graph, **kwargs))


# --- components ------------------------------------------------------------------

def moore_bound(g: int) -> int:
    """Fewest vertices a 4-regular graph of girth g can have."""
    r = (g - 1) // 2
    if g % 2:
        return 2 * 3 ** r - 1
    return 3 ** (g // 2) - 1


def n_min(g: int) -> int:
    """Smallest n for which the two-piece splice construction is not ruled
    out: both pieces must beat the Moore bound, plus the splice vertex.

    Requests at or above this threshold are attempted; the search may still
    fail close to it, and then reports the same threshold.
    """
    if g < 3:
        raise ValueError("girth must be at least 3")
    return 2 * moore_bound(g) + 1


def complete_bipartite_44() -> MultiGraph:
    return MultiGraph(8, tuple((i, j) for i in range(4) for j in range(4, 8)))


def _component(size: int, g: int, rng: np.random.Generator, exact: bool = False,
               attempts: int = 3) -> tuple[MultiGraph, str] | None:
    """A connected simple 4-regular graph on ``size`` vertices with girth
    >= g (exactly g when ``exact``)."""
    if size < 5:
        return None
    if g <= 3 and exact and size == 5:
        return complete_graph(5), "K5"
    if g == 4 and exact and size == 8:
        return complete_bipartite_44(), "K_{4,4}"
    found = _lifts.lift_component(size, g, rng, exact=exact)
    if found is not None:
        return found
    for _ in range(attempts):
        graph = switching_girth_graph(size, g, rng)
        if graph is None:
            continue
        if exact and girth_with_witness(graph)[0] != g:
            continue
        return graph, "edge-switching search"
    return None


def _filler(size: int, g: int, rng: np.random.Generator, attempts: int):
    """Filler pieces of girth >= g whose splice has exactly ``size`` vertices:
    one piece if possible, else two lifts joined by a splice."""
    found = _component(size, g, rng, attempts=attempts)
    if found is not None:
        return [found]
    for N1 in range(size // 10, 0, -1):
        first = 5 * N1
        second = size - 1 - first
        if second < first:
            continue
        if not any(True for _ in _lifts._factorizations(second, g)):
            continue
        a = _lifts.lift_with_base(5, N1, g, rng)
        if a is None:
            return None
        b = _component(second, g, rng, attempts=0)
        return None if b is None else [a, b]
    return None


@lru_cache(maxsize=None)
def _smallest_gadget(g: int, min_size: int, seed: int) -> tuple[int, int, MultiGraph, str]:
    """(b, N, graph, description) of the smallest exact-girth gadget found;
    b = N = 0 for the complete graphs used at girth 3 and 4."""
    if g == 3 and min_size <= 5:
        return 0, 0, complete_graph(5), "K5"
    if g == 4 and min_size <= 8:
        return 0, 0, complete_bipartite_44(), "K_{4,4}"
    found = _lifts.smallest_exact_lift(g, max(min_size, moore_bound(g)), rng_for(seed, 1))
    if found is None:  # pragma: no cover - the search always succeeds eventually
        raise InfeasibleError(f"no exact girth-{g} gadget found", moore_bound(g))
    return found


def _gadgets(g: int, seed: int, rng: np.random.Generator, count: int):
    """The smallest gadget, then a few larger ones on the same base."""
    b, N, graph, how = _smallest_gadget(g, 0, seed)
    yield graph, how
    if b == 0:
        b, N = 5, 1
    for extra in range(1, count):
        found = _lifts.lift_with_base(b, N + max(extra, N * extra // 8), g, rng, exact=True)
        if found is not None:
            yield found


def exact_girth_gadget(g: int, min_size: int = 0, seed: int = 0) -> Certified:
    """Smallest connected simple 4-regular graph of girth exactly g that the
    search finds with at least ``min_size`` vertices.

    K5 for g = 3 and K_{4,4} for g = 4; for larger g a cyclic lift of a
    small circulant in which one closed walk of length g is forced to lift
    to a cycle.
    """
    if g < 3:
        raise ValueError("girth must be at least 3")
    graph, how = _smallest_gadget(g, min_size, seed)[2:]
    return certify(graph, seed=seed, construction=f"exact girth gadget: {how}")


# --- LPS-style Cayley graphs ---------------------------------------------------------

def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % d for d in range(2, math.isqrt(q) + 1))


def _normalize(M: tuple[int, int, int, int], q: int) -> tuple[int, int, int, int]:
    lead = next(x for x in M if x % q)
    inv = pow(lead, -1, q)
    return tuple(x * inv % q for x in M)


def lps_like(q: int) -> Certified:
    """Cayley graph of PGL(2, q) with the four generators coming from the
    integer quaternions 0 + i ± j ± k of norm 3.

    Each generator is an involution in PGL(2, q), so the graph is simple and
    4-regular.  When 3 is a square mod q the generators lie in PSL(2, q)
    and the component of the identity is the Cayley graph of PSL(2, q),
    of half the order; the certificate records which group was reached.
    """
    if not _is_prime(q) or q < 5:
        raise ValueError(f"q = {q} must be an odd prime >= 5")
    x, y = next((x, y) for x in range(q) for y in range(q) if (x * x + y * y + 1) % q == 0)
    gens = []
    for a2 in (1, -1):
        for a3 in (1, -1):
            a0, a1 = 0, 1
            M = (a0 + a1 * x + a3 * y, -a1 * y + a2 + a3 * x,
                 -a1 * y - a2 + a3 * x, a0 - a1 * x - a3 * y)
            gens.append(_normalize(tuple(c % q for c in M), q))

    def mul(A, B):
        return _normalize(((A[0] * B[0] + A[1] * B[2]) % q, (A[0] * B[1] + A[1] * B[3]) % q,
                           (A[2] * B[0] + A[3] * B[2]) % q, (A[2] * B[1] + A[3] * B[3]) % q), q)

    identity = (1, 0, 0, 1)
    index = {identity: 0}
    order = [identity]
    edges = set()
    for A in order:  # grows while iterating: breadth-first closure
        i = index[A]
        for S in gens:
            B = mul(A, S)
            if B not in index:
                index[B] = len(order)
                order.append(B)
            j = index[B]
            edges.add((min(i, j), max(i, j)))
    graph = MultiGraph(len(order), tuple(sorted(edges)))
    full = q * (q - 1) * (q + 1)
    group = "PGL(2,q)" if len(order) == full else "PSL(2,q)"
    return certify(graph, construction=f"LPS-style Cayley graph on {group}, q={q}",
                   extra={"group": group, "q": q, "order": len(order)})


# --- splice pipeline ------------------------------------------------------------------

def _lps_terms(limit: int) -> list[int]:
    terms = []
    p = 3
    while p * (p - 1) * (p + 1) + 1 <= limit:
        if _is_prime(p):
            terms.append(p * (p - 1) * (p + 1) + 1)
        p += 2
    return terms[::-1]


def decompose_remainder(m: int, K: int = 8) -> list[int]:
    """Write m as a sum of at most K terms p(p-1)(p+1)+1 (p an odd prime),
    largest terms first.

    The search is greedy with backtracking, so the first decomposition found
    is the one whose sorted term list is lexicographically largest.
    """
    terms = _lps_terms(m)

    def search(rest: int, start: int, left: int) -> list[int] | None:
        if rest == 0:
            return []
        if left == 0:
            return None
        for i in range(start, len(terms)):
            t = terms[i]
            if t <= rest and t * left >= rest:
                tail = search(rest - t, i, left - 1)
                if tail is not None:
                    return [t] + tail
        return None

    found = search(m, 0, K) if m > 0 else None
    if found is None:
        raise InfeasibleError(f"{m} is not a sum of at most {K} terms p(p-1)(p+1)+1",
                              min(terms[-1:], default=25))
    return found


def _prime_of_term(t: int) -> int:
    p = 3
    while p * (p - 1) * (p + 1) + 1 < t:
        p += 2
    return p


def build_girth_graph(n: int, g: int, seed: int = 0, lps_fillers: bool = False,
                      max_terms: int = 8) -> Certified:
    """A connected 4-regular graph on exactly n vertices with girth exactly g.

    Below the splicing threshold n_min(g) (and above the Moore bound) a single
    component of exact girth is searched for instead.  Otherwise an exact-girth gadget H is spliced with filler graphs of girth >= g;
    each splice adds one vertex, so |H * F| = |H| + |F| + 1.  By default a
    single filler of the complementary size is used.  With
    ``lps_fillers`` the remainder n - |H| is split into terms
    p(p-1)(p+1)+1 by :func:`decompose_remainder`, and each term becomes an
    LPS-style graph on p(p-1)(p+1) vertices when that graph has the right
    order and girth >= g, otherwise a lift of the same order.
    """
    threshold = n_min(g)
    if n < moore_bound(g):
        raise InfeasibleError(
            f"(n={n}, g={g}) is infeasible: a 4-regular graph of girth {g} has at least "
            f"{moore_bound(g)} vertices", moore_bound(g))
    rng = rng_for(seed, 2)
    if n < threshold:
        # too small to splice; a single exact-girth component may still exist
        single = _single_component(n, g, seed, rng)
        if single is None:
            raise InfeasibleError(
                f"(n={n}, g={g}): no single component found and splicing needs n >= "
                f"{threshold}", threshold)
        return single
    gadgets = list(_gadgets(g, seed, rng, count=6))
    # lifts are fast and predictable; the switching search is the last resort
    for switching in (0, 2):
        for gadget, how in gadgets:
            rest = n - gadget.n
            if rest - 1 < max(5, moore_bound(g)):
                break
            if lps_fillers:
                pieces = _lps_filler_pieces(rest, g, rng, max_terms, switching)
            else:
                pieces = _filler(rest - 1, g, rng, switching)
            if pieces is None:
                continue
            graph = gadget
            parts = [f"gadget({gadget.n}): {how}"]
            for piece, piece_how in pieces:
                graph = splice_girth_safe(graph, piece)
                parts.append(f"filler({piece.n}): {piece_how}")
            cert = GirthCertificate.compute(graph, seed=seed, construction="; ".join(parts))
            assert graph.n == n and cert.girth == g and cert.connected
            assert cert.regular_degree == 4
            return Certified(graph, cert)
    single = _single_component(n, g, seed, rng)
    if single is not None:
        return single
    raise InfeasibleError(
        f"(n={n}, g={g}): no gadget/filler split found (threshold {threshold})", threshold)


def _single_component(n: int, g: int, seed: int, rng) -> Certified | None:
    found = _component(n, g, rng, exact=True, attempts=2)
    if found is None:
        return None
    graph, how = found
    return certify(graph, seed=seed, construction=f"single component: {how}")


def _lps_filler_pieces(remainder: int, g: int, rng, max_terms: int, switching: int):
    try:
        terms = decompose_remainder(remainder, max_terms)
    except InfeasibleError:
        return None
    pieces = []
    for t in terms:
        p = _prime_of_term(t)
        piece = None
        if p >= 5:
            graph, cert = lps_like(p)
            if graph.n == t - 1 and cert.girth >= g:
                piece = (graph, cert.construction)
        if piece is None:
            piece = _component(t - 1, g, rng, attempts=switching)
        if piece is None:
            return None
        pieces.append(piece)
    return pieces


# --- random models ------------------------------------------------------------------

@dataclass(frozen=True)
class SamplerConfig:
    n: int
    seed: int = 0
    max_tries: int = DEFAULT_MAX_TRIES

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _pairing_edges(n: int, rng: np.random.Generator) -> np.ndarray:
    """Edge array, shape (2n, 2), of a uniform pairing of 4n points."""
    return (rng.permutation(4 * n) // 4).reshape(2 * n, 2)


def pairing_model_sample(config: SamplerConfig, index: int = 0) -> MultiGraph:
    """The ``index``-th pairing-model multigraph for this seed."""
    edges = _pairing_edges(config.n, rng_for(config.seed, index))
    return MultiGraph(config.n, tuple(map(tuple, edges.tolist())))


@dataclass
class CycleStats:
    samples: int
    mean: dict[int, float]
    variance: dict[int, float]
    stderr: dict[int, float]
    target: dict[int, float]

    def to_dict(self) -> dict:
        return {"samples": self.samples,
                **{k: {str(i): v for i, v in getattr(self, k).items()}
                   for k in ("mean", "variance", "stderr", "target")}}


def cycle_stats(config: SamplerConfig, samples: int, cutoff: int) -> CycleStats:
    """Empirical moments of the i-cycle counts X_i, 1 <= i <= cutoff, over
    ``samples`` pairing-model graphs."""
    if not 1 <= cutoff <= 8:
        raise ValueError("cutoff must be between 1 and 8")
    data = np.zeros((samples, cutoff))
    for s in range(samples):
        graph = pairing_model_sample(config, s)
        if cutoff <= 4:
            counts = short_cycle_counts(graph)
        else:
            counts = length_spectrum(graph, cutoff).counts
        data[s] = [counts[i] for i in range(1, cutoff + 1)]
    mean = data.mean(axis=0)
    var = data.var(axis=0, ddof=1) if samples > 1 else np.zeros(cutoff)
    idx = range(1, cutoff + 1)
    return CycleStats(
        samples,
        {i: float(mean[i - 1]) for i in idx},
        {i: float(var[i - 1]) for i in idx},
        {i: float(math.sqrt(var[i - 1] / samples)) for i in idx},
        {i: poisson_mean(i) for i in idx},
    )


def theta_acceptance(k: int, l: int) -> float:
    """Limiting probability that a uniform simple 4-regular graph has a
    k-cycle and no other cycle of length <= l."""
    others = sum(poisson_mean(i) for i in range(3, l + 1) if i != k)
    return math.exp(-others) * (1 - math.exp(-poisson_mean(k)))


def sample_theta(n: int, k: int, l: int, config: SamplerConfig | None = None) -> Certified:
    """Rejection sampler for connected simple 4-regular graphs with girth
    exactly k and no other cycle of length <= l.

    One try is one uniform simple 4-regular graph (pairings with loops or
    double edges are abandoned and not counted).  Tries are processed in
    batches, and batch b draws from stream b of the seed, so the result
    depends only on the configuration.
    """
    config = config or SamplerConfig(n)
    if config.n != n:
        raise ValueError("config.n differs from n")
    if k < 3 or l < k:
        raise ValueError("need k >= 3 and l >= k")
    acceptance = theta_acceptance(k, l)
    tries = 0
    stream = 0
    while tries < config.max_tries:
        # one buffer of uniforms per stream, enough for about a thousand
        # pairing attempts (around two dozen simple graphs)
        uniforms = rng_for(config.seed, stream).random(2048 * n)
        stream += 1
        edges, _ = _kernels.simple_pairings(n, uniforms, 1024)
        edges = edges[: config.max_tries - tries]
        x3, x4 = _kernels.triangle_square_counts(edges, n)
        keep = np.ones(len(edges), dtype=bool)
        for i, x in ((3, x3), (4, x4)):
            if i == k:
                keep &= x > 0
            elif i <= l:
                keep &= x == 0
        for j in np.flatnonzero(keep):
            graph = MultiGraph(n, tuple(map(tuple, edges[j].tolist())))
            if length_spectrum(graph, l).present() != [k] or not graph.is_connected():
                continue
            cert = GirthCertificate.compute(
                graph, seed=config.seed, construction="rejection sampling",
                with_two_girth=True,
                extra={"tries": tries + int(j) + 1, "acceptance_estimate": acceptance})
            return Certified(graph, cert)
        tries += len(edges)
    raise TriesExhaustedError(tries, acceptance)


# --- planting ---------------------------------------------------------------------------

def _separated_edges(graph: MultiGraph, k: int, separation: int, candidates=None) -> list[int]:
    """Greedily pick k edges (among ``candidates`` if given) pairwise at
    distance > separation (distance between edges = least distance between
    their endpoints)."""
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    INF = graph.n + 1
    dist = np.full(graph.n, INF)
    chosen: list[int] = []
    for i in range(graph.m) if candidates is None else candidates:
        u, v = graph.edges[i]
        if len(chosen) == k:
            break
        if dist[u] <= separation or dist[v] <= separation:
            continue
        chosen.append(i)
        frontier = [u, v]
        dist[u] = dist[v] = 0
        d = 0
        while frontier and d < separation:
            d += 1
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if dist[y] > d:
                        dist[y] = d
                        nxt.append(y)
            frontier = nxt
    if len(chosen) < k:
        raise PreconditionError(f"cannot find {k} edges pairwise at distance > {separation}")
    return chosen


def plant_unique_short_cycle(X: MultiGraph, k: int, separation: int) -> Certified:
    """Subdivide k far-apart edges of X and join the k new vertices in a
    cycle.

    The new k-cycle is then the unique shortest cycle: any other cycle
    either runs through X (length >= girth(X)), or uses a subdivided edge
    (length >= girth(X) + 1), or travels between two new vertices through X
    (length > separation + 2).
    """
    if k < 3:
        raise PreconditionError("k must be at least 3")
    if not X.is_regular(4) or not X.is_connected():
        raise PreconditionError("X must be connected and 4-regular")
    gx = girth_with_witness(X)[0]
    if gx <= max(k, separation + 2):
        raise PreconditionError(
            f"girth(X) = {gx} must exceed max(k, separation + 2) = {max(k, separation + 2)}")
    picks = _separated_edges(X, k, separation)
    n = X.n
    removed = set(picks)
    edges = [e for i, e in enumerate(X.edges) if i not in removed]
    for j, i in enumerate(picks):
        a, b = X.edges[i]
        edges += [(a, n + j), (n + j, b)]
    edges += [(n + j, n + (j + 1) % k) for j in range(k)]
    graph = MultiGraph(n + k, tuple(edges))
    cert = GirthCertificate.compute(
        graph, construction=f"planted {k}-cycle, separation {separation}",
        with_two_girth=True, extra={"planted_vertices": list(range(n, n + k)),
                                    "subdivided_edges": [list(X.edges[i]) for i in picks]})
    assert cert.girth == k
    assert cert.two_girth is None or cert.two_girth > min(gx, separation)
    return Certified(graph, cert)

