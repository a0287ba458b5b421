"""Command-line interface; results go to stdout as JSON, logs to stderr."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .butterfly import corollary2_pipeline, has_butterfly_minor
from .coloring import dichromatic_number
from .decomposition import GROWTH_MODES, certify_decomposition
from .digraph import complete_digraph
from .errors import InvalidInputError, set_checks
from .explore import explore
from .fileio import (
    CertificateDocument,
    butterfly_document,
    decomposition_document,
    dicoloring_document,
    digraph_to_json,
    read_digraph,
    serialize_digraph,
    serialize_graph,
    strong_model_document,
    subdivision_document,
    to_dot,
    verify_document,
)
from .generators import KINDS, generate, lower_bound_butterfly
from .strong import strong_minor_bound, theorem1_pipeline
from .subdivision import corollary3_pipeline

log = logging.getLogger("dirminor")


def _emit(obj):
    text = obj.to_json() if isinstance(obj, CertificateDocument) else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)


def _dot(args, D, groups=None):
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(D, groups))
        log.info("wrote %s", args.dot)


def cmd_dichromatic(args):
    D = read_digraph(args.file)
    k, witness = dichromatic_number(D)
    _dot(args, D, witness.classes())
    _emit(dicoloring_document(witness))
    return 0


def cmd_decompose(args):
    D = read_digraph(args.file)
    cert = certify_decomposition(D, mode=args.growth)
    log.info("%d parts, quotient chromatic number %d, %d repairs",
             cert.partition.m, cert.k, len(cert.repairs))
    _dot(args, D, cert.partition.parts)
    _emit(decomposition_document(cert))
    return 0


def cmd_strong_minor(args):
    D = read_digraph(args.file)
    model = theorem1_pipeline(D, args.t)
    if model is None:
        _emit({"kind": "no-certificate", "result": "not forced", "t": args.t,
               "bound": strong_minor_bound(args.t)})
        return 1
    _dot(args, D, model.branch_sets)
    _emit(strong_model_document(model, extra={"pipeline": "quotient-clique", "t": args.t}))
    return 0


def cmd_butterfly(args):
    D = read_digraph(args.file)
    trace = corollary2_pipeline(D, args.t)
    if trace is None:
        _emit({"kind": "no-certificate", "result": "not forced", "t": args.t})
        return 1
    _dot(args, D, trace.provenance)
    _emit(butterfly_document(trace, args.t, extra={"pipeline": "arborescence-contraction"}))
    return 0


def cmd_subdivide(args):
    D = read_digraph(args.host)
    F = read_digraph(args.pattern)
    emb = corollary3_pipeline(D, F)
    if emb is None:
        _emit({"kind": "no-certificate", "result": "no strong model of the pattern"})
        return 1
    _emit(subdivision_document(emb))
    return 0


def cmd_verify(args):
    inputs = {"digraph": read_digraph(args.input)} if args.input else None
    ok_all = True
    results = []
    for path in args.certificates:
        with open(path) as fh:
            doc = CertificateDocument.from_json(fh.read())
        ok, msg = verify_document(doc, inputs)
        ok_all &= ok
        results.append({"certificate": path, "kind": doc.kind, "verified": ok, "message": msg})
    _emit({"kind": "verification", "results": results, "verified": ok_all})
    return 0 if ok_all else 1


def cmd_lower_bound(args):
    D = lower_bound_butterfly(args.t)
    report = {"kind": "lower-bound", "t": args.t, "digraph": digraph_to_json(D)}
    ok = True
    if args.t == 3:
        k, _ = dichromatic_number(D)
        free = not has_butterfly_minor(D, complete_digraph(args.t))
        report.update(dichromatic_number=k, butterfly_free=free)
        ok = k == args.t and free
    _dot(args, D)
    _emit(report)
    return 0 if ok else 1


def cmd_explore(args):
    report = explore(args.t, args.max_n, seed=args.seed, exhaustive=args.exhaustive,
                     trials=args.trials, minor=args.minor)
    found = report.pop("counterexamples")
    report["kind"] = "explore"
    report["counterexamples"] = [digraph_to_json(D) for D in found]
    report["result"] = "counterexample candidates found" if found else "none found in range"
    _emit(report)
    return 0


def cmd_generate(args):
    obj = generate(args.kind, n=args.n, p=args.p, t=args.t, seed=args.seed)
    if hasattr(obj, "arcs"):
        sys.stdout.write(serialize_digraph(obj))
    else:
        sys.stdout.write(serialize_graph(obj))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="dirminor", description=__doc__)
    parser.add_argument("--verify-all", dest="verify_all", action="store_true", default=True,
                        help="re-check every internal assertion (default)")
    parser.add_argument("--no-verify-all", dest="verify_all", action="store_false",
                        help="skip the internal re-checks (faster)")
    parser.add_argument("--dot", metavar="PATH", help="also write a Graphviz rendering")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dichromatic", help="exact dichromatic number with witness")
    p.add_argument("file")
    p.set_defaults(func=cmd_dichromatic)

    p = sub.add_parser("decompose", help="partition certificate bounding the dichromatic number")
    p.add_argument("file")
    p.add_argument("--growth", choices=GROWTH_MODES, default="exact")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("strong-minor", help="strong bidirected K_t model, if forced")
    p.add_argument("file")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_strong_minor)

    p = sub.add_parser("butterfly", help="butterfly trace to a bidirected K_t, if forced")
    p.add_argument("file")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_butterfly)

    p = sub.add_parser("subdivide", help="subdivision of a subcubic pattern")
    p.add_argument("host")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("verify", help="re-verify certificate documents")
    p.add_argument("certificates", nargs="+")
    p.add_argument("--input", help="digraph file the certificates must refer to")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lower-bound", help="K_{t+2} minus a 5-cycle, bioriented")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("explore", help="look for digraphs with large dichromatic number and no K_t minor")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--minor", choices=("strong", "butterfly"), default="strong")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("generate", help="write a generated digraph or graph file")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--t", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    set_checks(args.verify_all)
    try:
        return args.func(args)
    except (InvalidInputError, OSError) as exc:
        log.error("%s", exc)
        return 2
