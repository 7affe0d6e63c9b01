"""End-to-end runs from graphs to subgroups of the surface group.

Each pipeline builds the combinatorial objects, pulls the subgroup back to
the genus-2 surface group, and records every checked fact as a named
assertion in a JSON-ready report.  The asymptotic constants of the
underlying theorems are never asserted; only the exact facts they rest on.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .baumslag import PsiMap, k_from_girth, preimage_action, short_stabilizers
from .constructors import (
    InfeasibleError, PreconditionError, SamplerConfig, _separated_edges, build_girth_graph,
    sample_theta, theta_acceptance,
)
from .geometry import genus_of_cover, load_rep, systole_upper_bound, translation_length
from .graphs import (
    MultiGraph, girth_with_witness, length_spectrum, shortest_other_cycle,
)
from .schreier import (
    SchreierAction, action_to_graph, graph_to_action, min_subgroup_length,
    perm_tower, shortest_stabilizer, stabilizer_action_Hk,
)
from .words import length_A

# l_B radius of the exhaustive "no short stabilizer" sweeps
MAX_SWEEP_RADIUS = 5
# radius of the ball searched for the geometric systole bound
BOUND_RADIUS = 3


@dataclass
class PipelineReport:
    name: str
    parameters: dict
    seed: int | None = None
    intermediates: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    seconds: float = 0.0

    def check(self, name: str, statement: str, passed: bool, **detail) -> bool:
        self.assertions.append({"name": name, "statement": statement,
                                "passed": bool(passed), **detail})
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(a["passed"] for a in self.assertions)

    def failures(self) -> list[str]:
        return [a["name"] for a in self.assertions if not a["passed"]]

    def to_dict(self) -> dict:
        return {"name": self.name, "parameters": self.parameters, "seed": self.seed,
                "intermediates": self.intermediates, "bounds": self.bounds,
                "assertions": self.assertions, "passed": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _no_short_stabilizer(report: PipelineReport, action, k: int) -> None:
    radius = min(k - 1, MAX_SWEEP_RADIUS)
    found = short_stabilizers(action, radius) if radius >= 1 else []
    report.check(
        "no_short_stabilizer",
        "no nontrivial surface-group element of word length < k lies in the pulled-back subgroup",
        not found, radius=radius, exhaustive=radius == k - 1, found=found[:5])


def pipeline_main(n: int, a: int, seed: int = 0) -> PipelineReport:
    """Degree-n cover whose subgroup contains an element of free length a and
    no element of surface length below k = floor(sqrt(a/63)) (at least 1)."""
    t0 = time.perf_counter()
    report = PipelineReport("main", {"n": n, "a": a}, seed)
    built = build_girth_graph(n, a, seed)
    graph = built.graph
    report.intermediates["graph"] = {"n": graph.n, "girth": built.certificate.girth,
                                     "construction": built.certificate.construction}
    gamma = graph_to_action(graph)
    length, w0 = min_subgroup_length(gamma, a)
    k_raw = k_from_girth(a)
    k = max(1, k_raw)
    psi = PsiMap(k)
    lam = preimage_action(psi, gamma)
    report.intermediates.update({
        "action": gamma.to_dict(), "gamma0": w0, "k": k,
        "k_below_threshold": k_raw < 1, "psi_exponent": psi.l})
    report.check("girth", "the graph has girth a", built.certificate.girth == a,
                 girth=built.certificate.girth)
    report.check("min_length_equals_girth",
                 "the shortest nontrivial element of the free-group subgroup has length a",
                 length == a, length=length)
    report.check("index", "the pulled-back subgroup has index n", lam.orbit_size() == n,
                 index=lam.orbit_size())
    report.check("gamma0_in_preimage",
                 "the shortest free-group element gamma0 lies in the pulled-back subgroup "
                 "with free length a",
                 lam.contains(w0) and length_A(w0) == a, word=w0)
    _no_short_stabilizer(report, lam, k)
    genus = genus_of_cover(n)
    report.check("genus", "the cover of the genus-2 surface has genus n + 1",
                 genus == n + 1, genus=genus)
    rep = load_rep()
    bound = systole_upper_bound(rep, lam, min(BOUND_RADIUS, a), extra_words=[w0])
    report.bounds["systole_upper_bound"] = bound.to_dict()
    report.check("geometric_bound_attached",
                 "a stabilizing element certifies a finite systole upper bound",
                 np.isfinite(bound.upper_bound) and bound.upper_bound > 0)
    report.seconds = time.perf_counter() - t0
    return report


# --- constant systole -------------------------------------------------------------

def plant_in_action(action: SchreierAction, k: int, separation: int) -> SchreierAction:
    """Insert k new points w_1..w_k on k far-apart y-edges p -> p.y (so that
    p.y = w_i and w_i.y = old p.y) and let x cycle them.  The Schreier graph
    gains a unique k-cycle made of x-edges, and x^k fixes the new base w_1
    whatever the surrounding graph is."""
    n = action.n
    graph = action_to_graph(action)  # edges n..2n-1 are the y-edges p -> p.y
    picks = _separated_edges(graph, k, separation, candidates=range(n, 2 * n))
    px = np.concatenate([action.perm_x, n + (np.arange(k) + 1) % k])
    py = np.concatenate([action.perm_y, np.zeros(k, dtype=np.int64)])
    for j, i in enumerate(picks):
        p = i - n
        py[n + j] = action.perm_y[p]
        py[p] = n + j
    return SchreierAction(n + k, px, py, n)


def _host_graph(size: int, want: int, floor: int, seed: int) -> MultiGraph:
    """Connected 4-regular graph on ``size`` vertices of girth as close to
    ``want`` as the constructions reach, but at least ``floor``."""
    for g in range(want, floor - 1, -1):
        try:
            return build_girth_graph(size, g, seed).graph
        except InfeasibleError:
            continue
    raise InfeasibleError(f"no host graph of girth >= {floor} on {size} vertices")


def pipeline_constant_systole(k: int, l: int, sizes, seed: int = 0,
                              method: str = "auto") -> PipelineReport:
    """Covers of growing degree whose subgroups all have shortest element
    length k and no other cycle length up to l.

    ``method`` is "rejection" (uniform random graphs conditioned on the
    short-cycle pattern), "planting" (a k-cycle planted into a graph of
    large girth, at the level of the action), or "auto" (rejection when its
    acceptance rate is not tiny).
    """
    if k < 3:
        raise PreconditionError("k must be at least 3")
    if l < k:
        raise PreconditionError(f"l = {l} is smaller than k = {k}")
    if method == "auto":
        method = "rejection" if theta_acceptance(k, l) > 1e-6 else "planting"
    if method not in ("rejection", "planting"):
        raise ValueError(f"unknown method {method!r}")
    t0 = time.perf_counter()
    report = PipelineReport("constant_systole",
                            {"k": k, "l": l, "sizes": list(sizes), "method": method}, seed)
    psi = PsiMap(k)
    witnesses = []
    for n in sizes:
        info: dict = {"n": n}
        if method == "rejection":
            cert = sample_theta(n, k, l, SamplerConfig(n, seed))
            graph = cert.graph
            gamma = graph_to_action(graph)
            info["tries"] = cert.certificate.extra["tries"]
            spectrum = length_spectrum(graph, l)
            second_ok = spectrum.present() == [k]
            info["lengths_up_to_l"] = spectrum.present()
        else:
            host = _host_graph(n - k, l + 3, k + 3, seed)
            hg = girth_with_witness(host)[0]
            base_action = graph_to_action(host)
            action = None
            for sep in range(hg - 3, 0, -1):
                try:
                    action = plant_in_action(base_action, k, sep)
                    break
                except PreconditionError:
                    continue
            if action is None:
                raise PreconditionError(f"cannot plant a {k}-cycle in the host of size {n - k}")
            gamma = action
            graph = action_to_graph(gamma)
            info.update({"host_girth": hg, "separation": sep})
        g, circuit = girth_with_witness(graph)
        other = shortest_other_cycle(graph, circuit)
        length, w = min_subgroup_length(gamma, k)
        lam = preimage_action(psi, gamma)
        info.update({"girth": g, "second_cycle_length": other, "witness": w,
                     "index": lam.orbit_size()})
        if method == "planting":
            second_ok = other is None or other > l
        report.check(f"min_length[{n}]", "the shortest subgroup element has length k",
                     length == k and g == k, length=length)
        report.check(f"second_length[{n}]",
                     "every cycle of the Schreier graph other than the shortest is longer than l",
                     second_ok, second=other)
        report.check(f"index[{n}]", "the pulled-back subgroup has index n", lam.orbit_size() == n)
        report.check(f"witness_in_preimage[{n}]", "the witness lies in the pulled-back subgroup",
                     lam.contains(w))
        witnesses.append(w)
        report.intermediates[str(n)] = info
    if method == "planting":
        report.check("identical_witnesses",
                     "the shortest witnesses are the same word for every size, so their "
                     "closed geodesics have the same length",
                     len(set(witnesses)) == 1, witnesses=witnesses)
        rep = load_rep()
        report.bounds["witness_translation_length"] = translation_length(
            rep.word_matrix(witnesses[0]))
    report.seconds = time.perf_counter() - t0
    return report


# --- x^k systole ------------------------------------------------------------------

def pipeline_xk_systole(k: int, m: int, r: int, depth: int = 8, psi_k: int = 1) -> PipelineReport:
    """Subgroup of the surface group from the permutation tower: x^k is its
    shortest power of x and no element outside <x> is short.

    ``psi_k`` is the retraction parameter, a desk-scale stand-in for the
    enormous value the full argument needs; ``depth`` bounds the search for
    stabilizing free words outside <x>.
    """
    t0 = time.perf_counter()
    report = PipelineReport("xk_systole", {"k": k, "m": m, "r": r, "depth": depth,
                                            "psi_k": psi_k})
    tower = perm_tower(k, m, r)
    H = stabilizer_action_Hk(tower)
    psi = PsiMap(psi_k)
    G = preimage_action(psi, H)
    report.intermediates.update({"l_bounds": tower.l_bounds, "n_bounds": tower.n_bounds,
                                 "degree": tower.degree})
    report.check("degree", "the tower acts on n_r points", G.orbit_size() == tower.degree,
                 degree=G.orbit_size())
    report.check("xk_in", "x^k lies in the subgroup", G.contains("x" * k))
    report.check("smaller_powers_out", "x^j is outside the subgroup for 0 < j < k",
                 not any(G.contains("x" * j) for j in range(1, k)))
    w = shortest_stabilizer(H, depth, avoid_x_powers=True)
    guaranteed = min(m, r)
    report.intermediates["shortest_outside_x"] = w
    report.check("no_short_element_outside_x",
                 f"no free-group element outside <x> of length <= {depth} lies in H_k",
                 w is None, found=w)
    w_guar = shortest_stabilizer(H, guaranteed, avoid_x_powers=True)
    report.check("no_element_outside_x_up_to_min_m_r",
                 "no free-group element outside <x> of length <= min(m, r) lies in H_k",
                 w_guar is None, bound=guaranteed)
    rep = load_rep()
    tx = translation_length(rep.word_matrix("x"))
    bound = systole_upper_bound(rep, G, 1, extra_words=["x" * k])
    report.bounds.update({"systole_upper_bound": bound.to_dict(), "k_times_tx": k * tx})
    report.check("geometric_bound",
                 "the cover's systole is at most k times the translation length of x",
                 bound.upper_bound <= k * tx + 1e-9)
    report.seconds = time.perf_counter() - t0
    return report

