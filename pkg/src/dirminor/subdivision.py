"""Explicit subdivisions of subcubic digraphs from strong minor models.

Each pattern vertex ``u`` gets a branch vertex ``b(u)`` inside its branch set
and, for each incident pattern arc, a path inside the branch set joining
``b(u)`` to the arc's terminal there.  Gluing those paths along the host arcs
that realise the pattern arcs gives a subdivision of the pattern.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .digraph import Digraph, shortest_path_mask, to_mask
from .errors import InvalidInputError, ensure
from .models import StrongMinorModel, verify_strong_model

# Reported-only constants: the dichromatic number that guarantees every
# subcubic pattern on n vertices, and the minimum degree used on the way.
SUBDIVISION_FACTOR = 22
MIN_DEGREE_FACTOR = 10.5


def threshold(n: int) -> int:
    return SUBDIVISION_FACTOR * n


def is_subcubic(F: Digraph) -> bool:
    for v in range(F.n):
        out, inn = F.out_masks[v], F.in_masks[v]
        if out & inn:
            return False
        if out.bit_count() > 2 or inn.bit_count() > 2 or (out | inn).bit_count() > 3:
            return False
    return True


@dataclass(frozen=True)
class PathSystem:
    """Branch vertex and per-arc paths for one pattern vertex.

    ``paths`` pairs each incident pattern arc with a host path: from ``b(u)``
    to the terminal when ``u`` is the arc's tail, from the terminal to
    ``b(u)`` when it is the head.
    """

    u: int
    branch_vertex: int
    paths: tuple  # ((arc, path), ...) in construction order e_1..e_d
    reduced: bool = False

    @property
    def degree(self) -> int:
        return len(self.paths)

    def path_for(self, arc) -> tuple:
        return dict(self.paths)[tuple(arc)]


def reverse_path_system(ps: PathSystem) -> PathSystem:
    return PathSystem(
        ps.u,
        ps.branch_vertex,
        tuple(((b, a), tuple(reversed(p))) for (a, b), p in ps.paths),
        ps.reduced,
    )


@dataclass(frozen=True)
class SubdivisionEmbedding:
    host: Digraph
    pattern: Digraph
    branch_vertex: tuple
    arc_paths: tuple  # ((pattern arc, host path), ...) sorted by arc

    def path_for(self, arc) -> tuple:
        return dict(self.arc_paths)[tuple(arc)]


def choose_terminals(model: StrongMinorModel) -> dict:
    """Per pattern arc, the lexicographically least host arc realising it."""
    terminals = {}
    for a, b in sorted(model.pattern.arcs):
        arcs = model.realizing_arcs(a, b)
        if not arcs:
            raise InvalidInputError(f"pattern arc ({a}, {b}) is not realised")
        terminals[(a, b)] = arcs[0]
    return terminals


def _path(D, src, dst, within):
    path = shortest_path_mask(D, 1 << src, 1 << dst, within)
    if path is None:
        raise InvalidInputError(f"no path {src} -> {dst} inside branch set")
    return tuple(path)


def _internally_disjoint(paths) -> bool:
    for i, p in enumerate(paths):
        if len(set(p)) != len(p):
            return False
        inner = set(p[1:-1])
        for j, q in enumerate(paths):
            if i != j and inner & set(q):
                return False
    return True


def _system(D: Digraph, X: int, ins, outs):
    """Branch vertex and paths for one vertex, arcs given with their terminals.

    ``ins``/``outs`` are lists of ``(arc, terminal)``.  Returns
    ``(b, [(arc, path)...], reduced)`` or ``None`` when the case needs the
    reversal symmetry.
    """
    d = len(ins) + len(outs)
    if d == 0:
        return (X & -X).bit_length() - 1, [], False
    if d == 1:
        arc, v1 = (ins or outs)[0]
        return v1, [(arc, (v1,))], False
    if d == 2:
        if not ins:
            return None
        (e1, v1) = ins[0]
        rest = ins[1:] + outs
        (e2, v2) = rest[0]
        if outs:
            p2 = _path(D, v1, v2, X)
        else:
            p2 = _path(D, v2, v1, X)
        return v1, [(e1, (v1,)), (e2, p2)], False
    if d == 3:
        if len(ins) != 1:
            return None
        (e1, v1), (e2, v2), (e3, v3) = ins[0], outs[0], outs[1]
        p12 = _path(D, v1, v2, X)
        p13 = _path(D, v1, v3, X)
        on12 = {v: i for i, v in enumerate(p12)}
        # first vertex of p12 met when walking p13 backwards from v3
        j = next(j for j in range(len(p13) - 1, -1, -1) if p13[j] in on12)
        b = p13[j]
        i = on12[b]
        return b, [(e1, p12[: i + 1]), (e2, p12[i:]), (e3, p13[j:])], False
    raise InvalidInputError(f"vertex of total degree {d} in a subcubic pattern")


def build_path_system(D: Digraph, model: StrongMinorModel, u: int,
                      terminals: Optional[dict] = None) -> PathSystem:
    """Branch vertex ``b(u)`` and internally disjoint paths for pattern vertex ``u``.

    Cases that need the in/out mirror (no in-arc at degree two, in-degree two
    at degree three) are solved on the reversed host and reversed back.
    """
    F = model.pattern
    if model.host != D:
        raise InvalidInputError("model host differs from D")
    if not is_subcubic(F):
        raise InvalidInputError("pattern is not subcubic")
    if terminals is None:
        terminals = choose_terminals(model)
    Xset = model.branch_sets[u]
    X = to_mask(Xset)
    ins = [((a, u), terminals[(a, u)][1]) for a in F.in_neighbors(u)]
    outs = [((u, b), terminals[(u, b)][0]) for b in F.out_neighbors(u)]
    for _, v in ins + outs:
        if v not in Xset:
            raise InvalidInputError(f"terminal {v} not in branch set of {u}")
    got = _system(D, X, ins, outs)
    if got is not None:
        b, paths, _ = got
        ps = PathSystem(u, b, tuple(paths), False)
    else:
        rins = [((b_, a_), v) for (a_, b_), v in outs]
        routs = [((b_, a_), v) for (a_, b_), v in ins]
        b, paths, _ = _system(D.reverse(), X, rins, routs)
        ps = reverse_path_system(PathSystem(u, b, tuple(paths), True))
        ps = PathSystem(ps.u, ps.branch_vertex, ps.paths, True)
    _check_path_system(D, Xset, ps)
    return ps


def _check_path_system(D, Xset, ps: PathSystem):
    b = ps.branch_vertex
    ensure(b in Xset, "branch vertex outside its branch set")
    for (tail, head), path in ps.paths:
        ensure(all(v in Xset for v in path), "path leaves the branch set")
        ensure(all(D.has_arc(path[i], path[i + 1]) for i in range(len(path) - 1)),
               "path uses a missing arc")
        if tail == ps.u:
            ensure(path[0] == b, "out-path does not start at the branch vertex")
        else:
            ensure(path[-1] == b, "in-path does not end at the branch vertex")
    ensure(_internally_disjoint([p for _, p in ps.paths]), "paths are not internally disjoint")


def build_subdivision(D: Digraph, model: StrongMinorModel, terminals: Optional[dict] = None,
                      systems: Optional[list] = None) -> SubdivisionEmbedding:
    """Glue the per-vertex path systems along the chosen realising arcs.

    If ``systems`` is a list it receives the per-vertex ``PathSystem`` objects.
    """
    F = model.pattern
    if not is_subcubic(F):
        raise InvalidInputError("pattern is not subcubic")
    if not verify_strong_model(model) or model.host != D:
        raise InvalidInputError("model fails verification")
    if terminals is None:
        terminals = choose_terminals(model)
    per_vertex = [build_path_system(D, model, u, terminals) for u in range(F.n)]
    if systems is not None:
        systems.extend(per_vertex)
    arc_paths = []
    for a, b in sorted(F.arcs):
        first = per_vertex[a].path_for((a, b))
        second = per_vertex[b].path_for((a, b))
        arc_paths.append(((a, b), tuple(first) + tuple(second)))
    emb = SubdivisionEmbedding(
        D, F, tuple(ps.branch_vertex for ps in per_vertex), tuple(arc_paths)
    )
    ensure(verify_subdivision(emb), "assembled subdivision failed verification")
    return emb


def verify_subdivision(emb: SubdivisionEmbedding) -> bool:
    D, F = emb.host, emb.pattern
    branch = emb.branch_vertex
    if len(branch) != F.n or len(set(branch)) != F.n:
        return False
    if any(not (0 <= v < D.n) for v in branch):
        return False
    paths = dict(emb.arc_paths)
    if set(paths) != set(F.arcs) or len(paths) != len(emb.arc_paths):
        return False
    branch_set = set(branch)
    seen_internal = set()
    for (a, b), path in emb.arc_paths:
        if len(path) < 2 or path[0] != branch[a] or path[-1] != branch[b]:
            return False
        if len(set(path)) != len(path):
            return False
        if not all(D.has_arc(path[i], path[i + 1]) for i in range(len(path) - 1)):
            return False
        inner = set(path[1:-1])
        if inner & branch_set or inner & seen_internal:
            return False
        seen_internal |= inner
    return True


def corollary3_pipeline(D: Digraph, F: Digraph) -> Optional[SubdivisionEmbedding]:
    """Subdivision of ``F`` in ``D`` through an exact strong ``F``-model search."""
    from .strong import find_strong_model

    if not is_subcubic(F):
        raise InvalidInputError("pattern is not subcubic")
    model = find_strong_model(D, F)
    if model is None:
        return None
    return build_subdivision(D, model)
