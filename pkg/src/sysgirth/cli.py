"""Command line interface.

Every command prints a JSON document (and writes it to ``--out`` when
given).  Exit status: 0 when every check passes, 1 when a check fails, 2 for
usage errors, unreadable inputs and infeasible parameters.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import baumslag, constructors, geometry, graphs, pipelines, schreier

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_graph(path: str) -> graphs.MultiGraph:
    try:
        return graphs.load_graph(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read graph {path!r}: {exc}") from exc


def _load_action(path: str) -> schreier.SchreierAction:
    try:
        return schreier.SchreierAction.from_json(Path(path).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read action {path!r}: {exc}") from exc


def _action_from(args) -> schreier.SchreierAction:
    if getattr(args, "action", None):
        return _load_action(args.action)
    if getattr(args, "graph", None):
        return schreier.graph_to_action(_load_graph(args.graph))
    raise UsageError("give --graph or --action")


def _with_graph(cert: constructors.Certified) -> dict:
    return {"certificate": cert.certificate.to_dict(), "graph": cert.graph.to_dict()}


# --- commands: each returns (document, passed) -------------------------------------

def cmd_graph_build(a):
    cert = constructors.build_girth_graph(a.n, a.g, a.seed, lps_fillers=a.lps_fillers)
    return _with_graph(cert), True


def cmd_graph_sample(a):
    g = constructors.pairing_model_sample(constructors.SamplerConfig(a.n, a.seed), a.index)
    return {"seed": a.seed, "index": a.index, "graph": g.to_dict()}, True


def cmd_graph_theta(a):
    cfg = constructors.SamplerConfig(a.n, a.seed, a.max_tries)
    return _with_graph(constructors.sample_theta(a.n, a.k, a.l, cfg)), True


def cmd_graph_plant(a):
    X = _load_graph(a.graph)
    return _with_graph(constructors.plant_unique_short_cycle(X, a.k, a.separation)), True


def cmd_schreier_from_graph(a):
    return schreier.graph_to_action(_load_graph(a.graph)).to_dict(), True


def cmd_schreier_min_length(a):
    action = _action_from(a)
    length, w = schreier.min_subgroup_length(action, a.cutoff)
    doc = {"length": length, "witness": w, "contains": schreier.contains(action, w)}
    if a.graph:
        g = graphs.girth(_load_graph(a.graph))
        doc["girth"] = g
        return doc, g == length and doc["contains"]
    return doc, doc["contains"]


def cmd_psi_verify(a):
    psi = baumslag.PsiMap(a.k)
    report = baumslag.verify_ball_injectivity(psi, a.radius or a.k)
    report["relator_image_trivial"] = baumslag.relator_image(psi) == ""
    return report, report["violations"] == 0 and report["relator_image_trivial"]


def cmd_psi_apply(a):
    psi = baumslag.PsiMap(a.k)
    img = baumslag.psi_apply(psi, a.word)
    return {"k": a.k, "word": a.word, "image": img, "length": len(img)}, True


def cmd_tower_build(a):
    t = schreier.perm_tower(a.k, a.m, a.r)
    doc = {"k": a.k, "m": a.m, "r": a.r, "l_bounds": t.l_bounds, "n_bounds": t.n_bounds}
    if a.with_action:
        doc["action"] = schreier.stabilizer_action_Hk(t).to_dict()
    return doc, True


def cmd_tower_check(a):
    t = schreier.perm_tower(a.k, a.m, a.r)
    checks = schreier.check_tower(t)
    action = schreier.stabilizer_action_Hk(t)
    power = schreier.min_x_power(action, max(a.k, 1) * 2)
    doc = {"l_bounds": t.l_bounds, "n_bounds": t.n_bounds, "checks": checks,
           "min_x_power": power, "closed_form": schreier.closed_form_degree(a.k, a.m)}
    required = [v for name, v in checks.items()
                if name not in ("relation_tau_steps", "relation_sigma_steps")]
    return doc, all(required) and power == a.k


def cmd_pipeline_a(a):
    r = pipelines.pipeline_main(a.n, a.a, a.seed)
    return r.to_dict(), r.passed


def cmd_pipeline_b(a):
    sizes = [int(s) for s in a.sizes.split(",")]
    r = pipelines.pipeline_constant_systole(a.k, a.l, sizes, a.seed, a.method)
    return r.to_dict(), r.passed


def cmd_pipeline_c(a):
    r = pipelines.pipeline_xk_systole(a.k, a.m, a.r, a.depth, a.psi_k)
    return r.to_dict(), r.passed


def cmd_geom_bound(a):
    rep = geometry.load_rep(a.rep)
    extra = []
    if a.graph or a.action:
        gamma = _action_from(a)
        action = baumslag.preimage_action(baumslag.PsiMap(a.psi_k), gamma)
        # F2 words fix the base of the pullback exactly when they fix it in gamma
        extra.append(schreier.min_subgroup_length(gamma, a.word_cutoff)[1])
    else:
        action = baumslag.trivial_surface_action()
    return geometry.systole_upper_bound(rep, action, a.cutoff, extra).to_dict(), True


def cmd_geom_ms_constants(a):
    rep = geometry.load_rep(a.rep)
    ms = geometry.estimate_milnor_schwarz(rep, a.radius)
    return ms._asdict(), ms.q >= 1


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write the JSON result to this file")

    p = argparse.ArgumentParser(prog="sysgirth", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help_):
        sp = group.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    g = groups.add_parser("graph", help="graph constructions").add_subparsers(dest="cmd", required=True)
    s = sub(g, "build", cmd_graph_build, "4-regular graph with n vertices and girth g")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--lps-fillers", action="store_true",
                   help="fill with LPS-sized pieces instead of a single filler")
    s = sub(g, "sample", cmd_graph_sample, "pairing-model random multigraph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--index", type=int, default=0)
    s = sub(g, "theta", cmd_graph_theta, "random graph with girth k and no other cycle <= l")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--max-tries", type=int, default=constructors.DEFAULT_MAX_TRIES)
    s = sub(g, "plant", cmd_graph_plant, "plant a unique short cycle")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--separation", type=int, required=True)

    g = groups.add_parser("schreier", help="coset actions").add_subparsers(dest="cmd", required=True)
    s = sub(g, "from-graph", cmd_schreier_from_graph, "coset action of a 4-regular graph")
    s.add_argument("--graph", required=True)
    s = sub(g, "min-length", cmd_schreier_min_length, "shortest subgroup element")
    s.add_argument("--graph")
    s.add_argument("--action")
    s.add_argument("--cutoff", type=int, default=16)

    g = groups.add_parser("psi", help="retractions onto F2").add_subparsers(dest="cmd", required=True)
    s = sub(g, "verify", cmd_psi_verify, "check injectivity on a ball")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--radius", type=int)
    s = sub(g, "apply", cmd_psi_apply, "image of a surface word")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--word", required=True)

    g = groups.add_parser("tower", help="permutation towers").add_subparsers(dest="cmd", required=True)
    for name, func in (("build", cmd_tower_build), ("check", cmd_tower_check)):
        s = sub(g, name, func, f"{name} a tower")
        s.add_argument("--k", type=int, required=True)
        s.add_argument("--m", type=int, required=True)
        s.add_argument("--r", type=int, required=True)
        if name == "build":
            s.add_argument("--with-action", action="store_true")

    g = groups.add_parser("pipeline", help="end-to-end runs").add_subparsers(dest="cmd", required=True)
    s = sub(g, "a", cmd_pipeline_a, "cover from a girth-a graph on n vertices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s = sub(g, "b", cmd_pipeline_b, "constant shortest length across sizes")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    s.add_argument("--method", choices=["auto", "rejection", "planting"], default="auto")
    s = sub(g, "c", cmd_pipeline_c, "cover where x^k is the shortest power of x")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--psi-k", type=int, default=1)

    g = groups.add_parser("geom", help="hyperbolic geometry").add_subparsers(dest="cmd", required=True)
    s = sub(g, "bound", cmd_geom_bound, "systole upper bound of a cover")
    s.add_argument("--graph")
    s.add_argument("--action")
    s.add_argument("--psi-k", type=int, default=1)
    s.add_argument("--cutoff", type=int, default=2, help="surface word length searched")
    s.add_argument("--word-cutoff", type=int, default=32,
                   help="free word length searched for the shortest subgroup element")
    s.add_argument("--rep", help="representation config JSON (default: Bolza)")
    s = sub(g, "ms-constants", cmd_geom_ms_constants, "empirical Milnor-Schwarz constants")
    s.add_argument("--radius", type=int, default=3)
    s.add_argument("--rep")
    return p


_USAGE_ERRORS = (UsageError, constructors.InfeasibleError, constructors.PreconditionError,
                 baumslag.PsiPreconditionError, graphs.GraphError, schreier.ActionError,
                 geometry.RepError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, passed = args.func(args)
    except (constructors.TriesExhaustedError, schreier.NoStabilizerError, LookupError) as exc:
        doc, passed = {"error": str(exc), "kind": type(exc).__name__}, False
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(doc, indent=2, default=float)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
