"""Edge-list files, JSON certificate documents, and certificate re-verification.

Digraph files::

    # comments start with '#'
    n m
    u v        (m lines, 0-indexed)

The undirected variant uses the same layout with one line per edge.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import __version__
from .butterfly import ButterflyTrace, verify_trace
from .coloring import AcyclicColoring, ProperColoring, find_monochromatic_cycle, is_k_dicolorable
from .decomposition import DecompositionCertificate, MaximalPartition, verify_decomposition
from .digraph import Digraph, Graph, biorient, complete_digraph
from .errors import InvalidInputError, ParseError
from .models import StrongMinorModel, verify_strong_model
from .subdivision import SubdivisionEmbedding, verify_subdivision

CERTIFICATE_KINDS = ("decomposition", "strong-model", "butterfly-trace", "subdivision", "dicoloring")


# -- edge-list files --------------------------------------------------------------


def _parse_pairs(text: str, what: str):
    header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("header counts must be non-negative", lineno)
            header = (a, b)
            continue
        n = header[0]
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno)
        if a == b:
            raise ParseError(f"loop at vertex {a}", lineno)
        pairs.append((a, b, lineno))
    if header is None:
        raise ParseError("missing 'n m' header")
    if len(pairs) != header[1]:
        raise ParseError(f"header announces {header[1]} {what}s, found {len(pairs)}")
    return header[0], pairs


def parse_digraph(text: str) -> Digraph:
    n, pairs = _parse_pairs(text, "arc")
    arcs = set()
    for a, b, lineno in pairs:
        if (a, b) in arcs:
            raise ParseError(f"duplicate arc ({a}, {b})", lineno)
        arcs.add((a, b))
    return Digraph(n, frozenset(arcs))


def parse_graph(text: str) -> Graph:
    n, pairs = _parse_pairs(text, "edge")
    edges = set()
    for a, b, lineno in pairs:
        e = (min(a, b), max(a, b))
        if e in edges:
            raise ParseError(f"duplicate edge ({a}, {b})", lineno)
        edges.add(e)
    return Graph(n, frozenset(edges))


def serialize_digraph(D: Digraph) -> str:
    lines = [f"{D.n} {len(D.arcs)}"] + [f"{u} {v}" for u, v in D.sorted_arcs()]
    return "\n".join(lines) + "\n"


def serialize_graph(G: Graph) -> str:
    lines = [f"{G.n} {len(G.edges)}"] + [f"{u} {v}" for u, v in G.sorted_edges()]
    return "\n".join(lines) + "\n"


def read_digraph(path) -> Digraph:
    with open(path) as fh:
        return parse_digraph(fh.read())


def digest(*digraphs) -> str:
    h = hashlib.sha256()
    for D in digraphs:
        h.update(serialize_digraph(D).encode())
    return "sha256:" + h.hexdigest()


def to_dot(D: Digraph, groups=None, name="D") -> str:
    """Graphviz source; ``groups`` (list of vertex sets) become clusters."""
    lines = [f"digraph {name} {{"]
    for i, group in enumerate(groups or []):
        lines.append(f"  subgraph cluster_{i} {{ label=\"{i}\"; " + " ".join(str(v) for v in sorted(group)) + "; }")
    for v in range(D.n):
        lines.append(f"  {v};")
    for u, v in D.sorted_arcs():
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- JSON documents ---------------------------------------------------------------


def digraph_to_json(D: Digraph) -> dict:
    return {"n": D.n, "arcs": [list(a) for a in D.sorted_arcs()]}


def digraph_from_json(obj) -> Digraph:
    try:
        arcs = [tuple(a) for a in obj["arcs"]]
        if len(set(arcs)) != len(arcs):
            raise InvalidInputError("duplicate arcs")
        return Digraph(int(obj["n"]), frozenset(arcs))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed digraph object: {exc}") from None


@dataclass
class CertificateDocument:
    kind: str
    inputs: dict          # name -> digraph JSON
    input_digest: str
    payload: dict
    tool_version: str = __version__
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        obj = {
            "kind": self.kind,
            "tool_version": self.tool_version,
            "input_digest": self.input_digest,
            "inputs": self.inputs,
            "payload": self.payload,
        }
        if self.extra:
            obj["extra"] = self.extra
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CertificateDocument":
        try:
            obj = json.loads(text)
            doc = cls(
                kind=obj["kind"],
                inputs=obj["inputs"],
                input_digest=obj["input_digest"],
                payload=obj["payload"],
                tool_version=obj["tool_version"],
                extra=obj.get("extra", {}),
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from None
        if doc.kind not in CERTIFICATE_KINDS:
            raise ParseError(f"unknown certificate kind {doc.kind!r}")
        return doc

    def input_digraphs(self) -> dict:
        return {name: digraph_from_json(obj) for name, obj in self.inputs.items()}


def _sets(sets):
    return [sorted(s) for s in sets]


def _doc(kind, inputs: dict, payload, extra=None):
    ordered = [inputs[k] for k in sorted(inputs)]
    return CertificateDocument(
        kind=kind,
        inputs={k: digraph_to_json(v) for k, v in inputs.items()},
        input_digest=digest(*ordered),
        payload=payload,
        extra=extra or {},
    )


def dicoloring_document(coloring: AcyclicColoring, optimal: bool = True) -> CertificateDocument:
    return _doc(
        "dicoloring",
        {"digraph": coloring.digraph},
        {"k": coloring.k, "colors": list(coloring.colors), "optimal": optimal},
    )


def decomposition_document(cert: DecompositionCertificate) -> CertificateDocument:
    P = cert.partition
    return _doc(
        "decomposition",
        {"digraph": cert.digraph},
        {
            "parts": _sets(P.parts),
            "part_color": list(P.part_color),
            "quotient_edges": [list(e) for e in cert.quotient.sorted_edges()],
            "quotient_colors": list(cert.quotient_coloring.colors),
            "k": cert.k,
            "lifted_colors": list(cert.lifted.colors),
            "history": [list(h) for h in cert.history],
            "repairs": len(cert.repairs),
        },
    )


def strong_model_document(model: StrongMinorModel, strengthened=False, extra=None) -> CertificateDocument:
    return _doc(
        "strong-model",
        {"digraph": model.host},
        {
            "pattern": digraph_to_json(model.pattern),
            "branch_sets": _sets(model.branch_sets),
            "strengthened": strengthened,
        },
        extra,
    )


def butterfly_document(trace: ButterflyTrace, t: int, extra=None) -> CertificateDocument:
    return _doc(
        "butterfly-trace",
        {"digraph": trace.initial},
        {
            "t": t,
            "steps": [[kind, list(x) if isinstance(x, tuple) else x] for kind, x in trace.steps],
            "final": digraph_to_json(trace.final),
            "provenance": _sets(trace.provenance),
        },
        extra,
    )


def subdivision_document(emb: SubdivisionEmbedding) -> CertificateDocument:
    return _doc(
        "subdivision",
        {"host": emb.host, "pattern": emb.pattern},
        {
            "branch_vertex": list(emb.branch_vertex),
            "arc_paths": [[list(a), list(p)] for a, p in emb.arc_paths],
        },
    )


# -- re-verification --------------------------------------------------------------


def _verify_payload(doc: CertificateDocument) -> str:
    """Return an empty string when the payload checks out, else the reason."""
    ins = doc.input_digraphs()
    p = doc.payload
    if doc.kind == "dicoloring":
        D = ins["digraph"]
        k = int(p["k"])
        colors = [int(c) for c in p["colors"]]
        if len(colors) != D.n or any(not 0 <= c < max(k, 1) for c in colors):
            return "colour vector malformed"
        if find_monochromatic_cycle(D, colors) is not None:
            return "a colour class contains a directed cycle"
        if p.get("optimal"):
            if (k == 0) != (D.n == 0):
                return "only the empty digraph has dichromatic number 0"
            if k >= 2 and is_k_dicolorable(D, k - 1) is not None:
                return f"digraph is {k - 1}-dicolourable, so k={k} is not optimal"
        return ""
    if doc.kind == "decomposition":
        D = ins["digraph"]
        P = MaximalPartition(D, tuple(frozenset(x) for x in p["parts"]), tuple(p["part_color"]))
        G = Graph(len(p["parts"]), frozenset(tuple(e) for e in p["quotient_edges"]))
        k = int(p["k"])
        f = ProperColoring(G, tuple(p["quotient_colors"]), k)
        lifted = AcyclicColoring(D, tuple(p["lifted_colors"]), 2 * k)
        cert = DecompositionCertificate(
            D, P, G, f, lifted, StrongMinorModel(D, biorient(G), P.parts),
            tuple(tuple(h) for h in p.get("history", ())),
        )
        hist = cert.history
        if any(not (a < b) for a, b in zip(hist, hist[1:])):
            return "part-size history is not strictly increasing"
        return "" if verify_decomposition(cert) else "decomposition invariants fail"
    if doc.kind == "strong-model":
        D = ins["digraph"]
        H = digraph_from_json(p["pattern"])
        model = StrongMinorModel(D, H, tuple(frozenset(b) for b in p["branch_sets"]))
        return "" if verify_strong_model(model, bool(p.get("strengthened"))) else "model invalid"
    if doc.kind == "butterfly-trace":
        D = ins["digraph"]
        steps = tuple(
            (kind, tuple(x) if isinstance(x, list) else int(x)) for kind, x in p["steps"]
        )
        trace = ButterflyTrace(
            D, steps, digraph_from_json(p["final"]), tuple(frozenset(g) for g in p["provenance"])
        )
        pattern = complete_digraph(int(p["t"]))
        return "" if verify_trace(trace, pattern) else "trace does not replay to the pattern"
    if doc.kind == "subdivision":
        emb = SubdivisionEmbedding(
            ins["host"],
            ins["pattern"],
            tuple(p["branch_vertex"]),
            tuple((tuple(a), tuple(path)) for a, path in p["arc_paths"]),
        )
        return "" if verify_subdivision(emb) else "subdivision invalid"
    return f"unknown kind {doc.kind!r}"


def verify_document(doc: CertificateDocument, inputs: dict = None):
    """Re-check ``doc``; returns ``(ok, message)``.

    ``inputs`` optionally maps input names to digraphs read from disk; they
    must match the embedded inputs' digest.
    """
    try:
        embedded = doc.input_digraphs()
        expected = digest(*[embedded[k] for k in sorted(embedded)])
        if expected != doc.input_digest:
            return False, "input digest does not match embedded input"
        if inputs:
            for name, D in inputs.items():
                if embedded.get(name) != D:
                    return False, f"input {name!r} differs from the certificate's input"
        reason = _verify_payload(doc)
    except (InvalidInputError, KeyError, TypeError, ValueError) as exc:
        return False, f"malformed payload: {exc}"
    return (not reason), (reason or "ok")
