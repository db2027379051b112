"""Command-line interface.

Exit codes: 0 success, 2 parameter error, 3 resource limit (cap or time
limit), 4 reproduction-suite failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bounds import best_upper_bound
from .cayley import make_graph
from .cliques import SolverConfig, is_maximal_clique, max_clique
from .errors import ParameterError, ResourceLimitError
from .subspace import maximal_subspace_clique, peisert_quartic_dichotomy
from .suite import all_passed, run_suite

EXIT_OK, EXIT_PARAM, EXIT_RESOURCE, EXIT_SUITE = 0, 2, 3, 4


def _family_args(parser: argparse.ArgumentParser):
    parser.add_argument("--family", choices=["gp", "peisert", "custom"], required=True)
    parser.add_argument("-p", type=int, required=True, help="odd prime characteristic")
    parser.add_argument("-s", type=int, default=1, help="extension degree")
    parser.add_argument("-d", type=int, help="power for the gp family")
    parser.add_argument("-m", type=int, help="class modulus for the custom family")
    parser.add_argument("--classes", help="comma-separated allowed classes for the custom family")


def _graph(args):
    classes = None
    if args.classes is not None:
        classes = [int(c) for c in args.classes.split(",") if c.strip()]
    return make_graph(args.family, args.p, args.s, d=args.d, m=args.m, classes=classes)


def _emit(obj):
    print(json.dumps(obj, sort_keys=True))


def cmd_graph(args) -> int:
    graph = _graph(args)
    if args.export:
        ext = {"dimacs": "dimacs", "json": "json", "edge-list": "edges"}[args.export]
        path = args.output or f"{args.family}_{graph.q}.{ext}"
        data = graph.export(args.export)
        with open(path, "wb") as fh:
            fh.write(data)
    _emit(graph.descriptor())
    return EXIT_OK


def cmd_omega(args) -> int:
    graph = _graph(args)
    cfg = SolverConfig.from_env(time_limit=args.time_limit, threads=args.threads,
                                symmetry=args.symmetry)
    cert = max_clique(graph, cfg)
    _emit(cert.to_dict())
    return EXIT_OK if cert.complete else EXIT_RESOURCE


def cmd_maximal(args) -> int:
    graph = _graph(args)
    field = graph.field
    t = args.subfield
    out = {"graph": graph.descriptor(), "subfield_degree": t}
    if args.family == "peisert" and field.s % 4 == 0 and t == field.s // 4:
        res = peisert_quartic_dichotomy(field)
        out["verdict"] = "maximal" if res.outcome == "maximal" else "not maximal"
        out["witness"] = res.witness
        out["dichotomy"] = res.to_dict()
    else:
        maximal, witness = is_maximal_clique(graph, field.subfield_elements(t))
        out["verdict"] = "maximal" if maximal else "not maximal"
        out["witness"] = witness
        if args.grow:
            out["growth"] = maximal_subspace_clique(graph, t).to_dict()
    _emit(out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    _emit(best_upper_bound(args.p**args.s, args.d, args.p).to_dict())
    return EXIT_OK


def cmd_suite(args) -> int:
    def report(res):
        mark = {True: "PASS", False: "FAIL", None: "INFO"}[res.passed]
        print(f"{mark} {res.claim}: computed={json.dumps(res.computed, sort_keys=True)} "
              f"({res.elapsed_ms:.0f} ms)", file=sys.stderr)
        print(res.to_json())

    results = run_suite(args.tier, ledger=args.ledger, on_result=report)
    return EXIT_OK if all_passed(results) else EXIT_SUITE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayleycliques", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="build a graph, print its descriptor, optionally export it")
    _family_args(p)
    p.add_argument("--export", choices=["dimacs", "json", "edge-list"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("omega", help="exact clique number with a certificate")
    _family_args(p)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--threads", type=int)
    p.add_argument("--symmetry", choices=["orbit", "vertex", "none"])
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("maximal", help="is the subfield F_{p^t} a maximal clique")
    _family_args(p)
    p.add_argument("--subfield", type=int, required=True, help="subfield degree t")
    p.add_argument("--grow", action="store_true", help="also grow a maximal subspace clique")
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("bounds", help="upper bounds on omega(GP(p^s, d))")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-s", type=int, default=1)
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("suite", aliases=["paper-suite"], help="rerun every reproduced computational claim")
    p.add_argument("--tier", choices=["fast", "full"], default="fast")
    p.add_argument("--ledger", default=os.environ.get("CAYLEYCLIQUES_LEDGER"))
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
