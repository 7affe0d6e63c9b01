"""Acceptance criteria, one test per criterion.

Each test records a line "[PASS|FAIL] <id> <what> | tolerance | seconds"
that the terminal summary echoes.  Criteria that cannot be met at desk
scale are marked ``xfail(strict=True)``: they run in full and are expected
to fail, so an unexpected pass is reported as an error.
"""

import math
import random
import time

import networkx as nx
import pytest

from sysgirth.baumslag import (
    PsiMap, relator_image, trivial_surface_action, verify_ball_injectivity,
)
from sysgirth.constructors import (
    SamplerConfig, build_girth_graph, cycle_stats, pairing_model_sample,
    plant_unique_short_cycle, poisson_mean, sample_theta,
)
from sysgirth.geometry import (
    BOLZA_SYSTOLE, load_rep, systole_upper_bound, translation_length,
)
from sysgirth.graphs import MultiGraph, girth, two_factorize, two_girth
from sysgirth.pipelines import pipeline_constant_systole, pipeline_main, pipeline_xk_systole
from sysgirth.schreier import (
    check_tower, graph_to_action, min_subgroup_length, min_x_power, perm_tower,
    stabilizer_action_Hk, tower_bounds,
)
from sysgirth.words import in_cyclic_u, reduce, sandwich_normalize, u_power

REQUIRED_TOWER_CHECKS = (
    "sigma0_is_k_cycle", "supports", "ordering", "recurrence_l", "recurrence_n", "disjoint",
    "relation_tau_steps_restricted", "relation_sigma_steps_nominal", "chain_inclusion",
)


class Criterion:
    def __init__(self, log, cid, what, tolerance, limit):
        self.log, self.cid, self.what = log, cid, what
        self.tolerance, self.limit = tolerance, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def finish(self, passed, detail=""):
        seconds = time.perf_counter() - self.t0
        in_time = seconds < self.limit
        ok = passed and in_time
        line = (f"[{'PASS' if ok else 'FAIL'}] {self.cid:>3} {self.what} | "
                f"tolerance: {self.tolerance} | {seconds:.1f}s (limit {self.limit:g}s)")
        if detail:
            line += f" | {detail}"
        self.log.append(line)
        assert passed, f"{self.cid}: {detail}"
        assert in_time, f"{self.cid}: {seconds:.1f}s exceeds {self.limit}s"

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None and exc_type is not AssertionError:
            self.log.append(f"[FAIL] {self.cid:>3} {self.what} | raised {exc_type.__name__}: {exc}")
        return False


def test_c01_two_factorization(acceptance_log):
    with Criterion(acceptance_log, "C1", "200 pairing-model multigraphs 2-factorize",
                   "exact", 10) as c:
        rng = random.Random(1)
        bad = 0
        for s in range(200):
            g = pairing_model_sample(SamplerConfig(rng.randint(1, 500), s))
            tf = two_factorize(g)
            try:
                tf.validate()
            except AssertionError:
                bad += 1
        c.finish(bad == 0, f"{bad} invalid")


def test_c02_min_length_equals_girth(acceptance_log):
    with Criterion(acceptance_log, "C2", "min subgroup length equals girth on 120 graphs",
                   "exact", 60) as c:
        mismatches = 0
        checked = 0
        seed = 0
        while checked < 100:
            n = 10 + (seed * 7) % 191
            h = nx.random_regular_graph(4, n, seed=seed)
            seed += 1
            if not nx.is_connected(h):
                continue
            g = MultiGraph(n, tuple(h.edges()))
            mismatches += min_subgroup_length(graph_to_action(g), 30)[0] != girth(g)
            checked += 1
        for i in range(20):
            n, gg = [(50, 3), (60, 4), (80, 5), (150, 6), (200, 7)][i % 5]
            built = build_girth_graph(n + 10 * (i // 5), gg, seed=i)
            mismatches += min_subgroup_length(graph_to_action(built.graph), 30)[0] != gg
        c.finish(mismatches == 0, f"{mismatches} mismatches")


def test_c03_build_girth_graph_grid(acceptance_log):
    with Criterion(acceptance_log, "C3", "build_girth_graph on the (n, g) grid",
                   "exact n and girth", 300) as c:
        bad = []
        cases = 0
        for n in (50, 100, 500, 1000, 2000):
            for g in range(3, int(math.log2(n)) + 1):
                built = build_girth_graph(n, g, seed=0)
                built.certificate.validate(built.graph)
                cases += 1
                if built.graph.n != n or built.certificate.girth != g:
                    bad.append((n, g))
        c.finish(not bad, f"{cases} cases, failures {bad}")


def test_c04_poisson_means(acceptance_log):
    with Criterion(acceptance_log, "C4", "short-cycle means at n=1000 over 5000 samples",
                   "|X3-4.5|<=0.2, |X4-10.125|<=0.4", 300) as c:
        stats = cycle_stats(SamplerConfig(1000, 0), 5000, 4)
        d3 = abs(stats.mean[3] - poisson_mean(3))
        d4 = abs(stats.mean[4] - poisson_mean(4))
        c.finish(d3 <= 0.2 and d4 <= 0.4,
                 f"mean X3 = {stats.mean[3]:.4f}, mean X4 = {stats.mean[4]:.4f}")


def test_c05a_theta_sampler(acceptance_log):
    with Criterion(acceptance_log, "C5a", "sample_theta(n=100, k=3, l=4)",
                   "<= 1e5 tries, certificate", 120) as c:
        built = sample_theta(100, 3, 4, SamplerConfig(100, 0))
        built.certificate.validate(built.graph)
        tries = built.certificate.extra["tries"]
        ok = (tries <= 100_000 and built.certificate.girth == 3
              and two_girth(built.graph) > 4 and built.graph.is_connected())
        c.finish(ok, f"tries {tries}")


@pytest.mark.xfail(strict=True, reason="2-girth > 20 needs a host of girth > 20, "
                   "which has more than 3^10 vertices; n = 500 is far too small")
def test_c05b_planting_to_two_girth_above_20(acceptance_log):
    with Criterion(acceptance_log, "C5b", "plant k=3 with 2-girth > 20 at n ~ 500",
                   "exact", 120) as c:
        host = build_girth_graph(497, 8, seed=0).graph
        graph, cert = plant_unique_short_cycle(host, 3, 4)
        second = two_girth(graph)
        c.finish(cert.girth == 3 and second > 20, f"girth {cert.girth}, 2-girth {second}")


def test_c06_sandwich(acceptance_log):
    with Criterion(acceptance_log, "C6", "1000 sandwich decompositions",
                   "exact recombination, gamma' != 1", 10) as c:
        rng = random.Random(6)
        done = bad = 0
        while done < 1000:
            m, l = rng.randint(3, 6), rng.randint(4, 8)
            e1, e2 = rng.choice((1, -1)), rng.choice((1, -1))
            g = reduce("".join(rng.choice("xXyY") for _ in range(rng.randint(1, l))))
            if not g or in_cyclic_u(g):
                continue
            s = sandwich_normalize(m, l, e1, e2, g)
            lhs = reduce(u_power(e1 * m * l) + g + u_power(e2 * m * l))
            bad += not (s.core and u_power(s.left) + s.core + u_power(s.right) == lhs)
            done += 1
        c.finish(bad == 0, f"{bad} failures")


def test_c07_psi_injectivity(acceptance_log):
    with Criterion(acceptance_log, "C7", "psi_k injective on balls, k=2..5; relator, k<=20",
                   "zero violations, |psi(w)| <= 63 k l_B(w)", 600) as c:
        detail = []
        ok = True
        for k in (2, 3, 4, 5):
            r = verify_ball_injectivity(PsiMap(k), k)
            ok &= r["violations"] == 0
            detail.append(f"k={k}: {r['elements_checked']} elements, {r['violations']} violations")
        ok &= all(relator_image(PsiMap(k)) == "" for k in range(1, 21))
        c.finish(ok, "; ".join(detail))


def test_c08_perm_tower(acceptance_log):
    with Criterion(acceptance_log, "C8", "tower relations for k<=4, m<=3, r<=3, n_r<=1e5",
                   "exact", 60) as c:
        cases, bad = 0, []
        for k in range(1, 5):
            for m in range(1, 4):
                for r in range(1, 4):
                    if tower_bounds(k, m, r)[1][-1] > 100_000:
                        continue
                    t = perm_tower(k, m, r)
                    checks = check_tower(t)
                    power = min_x_power(stabilizer_action_Hk(t), 2 * k)
                    cases += 1
                    if not all(checks[n] for n in REQUIRED_TOWER_CHECKS) or power != k:
                        bad.append((k, m, r))
        c.finish(not bad, f"{cases} towers, failures {bad}")


def test_c09_main_pipeline(acceptance_log):
    with Criterion(acceptance_log, "C9", "pipeline_main on {50, 200} x {4, 6}",
                   "all assertions", 300) as c:
        failed = {}
        for n in (50, 200):
            for a in (4, 6):
                report = pipeline_main(n, a, seed=0)
                if not report.passed:
                    failed[(n, a)] = report.failures()
        c.finish(not failed, f"failures {failed}")


def test_c10_bolza_value(acceptance_log):
    with Criterion(acceptance_log, "C10", "Bolza systole value",
                   "1e-5 (trace), 1e-4 (trivial cover)", 60) as c:
        t = 2 + 2 * math.sqrt(2)
        from_trace = 2 * math.acosh(t / 2)
        rep = load_rep()
        bound = systole_upper_bound(rep, trivial_surface_action(), 1).upper_bound
        tx = translation_length(rep.word_matrix("x"))
        ok = (abs(from_trace - 3.05714) <= 1e-5 and abs(bound - from_trace) <= 1e-4
              and abs(tx - BOLZA_SYSTOLE) <= 1e-9)
        c.finish(ok, f"from trace {from_trace:.8f}, bound {bound:.8f}")


def test_c11_constant_systole(acceptance_log):
    with Criterion(acceptance_log, "C11", "planting k=3, l=20 at sizes 200 and 400",
                   "identical witness words", 120) as c:
        report = pipeline_constant_systole(3, 20, [200, 400], seed=0, method="planting")
        names = {a["name"]: a for a in report.assertions}
        seconds = [report.intermediates[s]["second_cycle_length"] for s in ("200", "400")]
        ok = names["identical_witnesses"]["passed"] and all(
            names[f"min_length[{s}]"]["passed"] for s in (200, 400))
        c.finish(ok, f"witnesses {names['identical_witnesses']['witnesses']}, "
                     f"second cycle lengths {seconds} (not above 20)")


@pytest.mark.xfail(strict=True, reason="y^(2m+1) fixes the base, so H_k contains y^5 for "
                   "m = 2; only lengths <= min(m, r) are excluded")
def test_c12_xk_systole(acceptance_log):
    with Criterion(acceptance_log, "C12", "pipeline_xk_systole(3, 2, 2)",
                   "exact", 120) as c:
        report = pipeline_xk_systole(3, 2, 2, depth=8)
        c.finish(report.passed, f"failures {report.failures()}, shortest outside <x>: "
                                f"{report.intermediates['shortest_outside_x']}")
