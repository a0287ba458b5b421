"""Butterfly contractions, certified traces, and bidirected-clique extraction.

An arc ``(u, v)`` is butterfly-contractible when ``v`` is the only
out-neighbour of ``u`` or ``u`` the only in-neighbour of ``v``.  Contracting
it merges the endpoints; the merged vertex keeps index ``min(u, v)`` and the
vertices above ``max(u, v)`` shift down by one.  Parallel arcs collapse and
the loop a digon would leave behind is dropped.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .digraph import Digraph, are_isomorphic, canonical_form, complete_digraph, to_mask
from .errors import ContractViolationError, InternalConsistencyError, InvalidInputError, ensure, checks_enabled
from .models import StrongMinorModel, verify_strong_model

DELETE_VERTEX = "delete-vertex"
DELETE_ARC = "delete-arc"
CONTRACT_ARC = "contract-arc"
STEP_KINDS = (DELETE_VERTEX, DELETE_ARC, CONTRACT_ARC)


def is_contractible(D: Digraph, e) -> bool:
    u, v = e
    if not D.has_arc(u, v):
        raise InvalidInputError(f"({u}, {v}) is not an arc")
    return D.out_masks[u] == 1 << v or D.in_masks[v] == 1 << u


def _shift(n, removed, keep_as=None):
    """Index map after removing ``removed`` (optionally merging it into ``keep_as``)."""
    mapping = []
    for x in range(n):
        if x == removed:
            mapping.append(keep_as)
        else:
            mapping.append(x - 1 if x > removed else x)
    return mapping


def contract(D: Digraph, e):
    """Return ``(D/e, mapping)`` where ``mapping[old] = new`` vertex index."""
    u, v = e
    if not is_contractible(D, e):
        raise ContractViolationError(f"arc ({u}, {v}) is not butterfly-contractible")
    lo, hi = min(u, v), max(u, v)
    mapping = _shift(D.n, hi, lo)
    arcs = set()
    for a, b in D.arcs:
        x, y = mapping[a], mapping[b]
        if x != y:
            arcs.add((x, y))
    return Digraph(D.n - 1, frozenset(arcs)), mapping


def delete_vertex(D: Digraph, v: int):
    if not 0 <= v < D.n:
        raise InvalidInputError(f"vertex {v} out of range")
    mapping = _shift(D.n, v)
    arcs = frozenset((mapping[a], mapping[b]) for a, b in D.arcs if a != v and b != v)
    return Digraph(D.n - 1, arcs), mapping


def delete_arc(D: Digraph, e) -> Digraph:
    e = tuple(e)
    if e not in D.arcs:
        raise InvalidInputError(f"{e} is not an arc")
    return Digraph(D.n, D.arcs - {e})


def apply_step(D: Digraph, step):
    """Apply one trace step; returns ``(new digraph, index mapping)``."""
    kind, what = step
    if kind == DELETE_VERTEX:
        return delete_vertex(D, what)
    if kind == DELETE_ARC:
        return delete_arc(D, what), list(range(D.n))
    if kind == CONTRACT_ARC:
        return contract(D, tuple(what))
    raise InvalidInputError(f"unknown step kind {kind!r}")


@dataclass(frozen=True)
class ButterflyTrace:
    """Delete/contract steps (in current labels) turning ``initial`` into ``final``.

    ``provenance[i]`` holds the initial vertices merged into final vertex ``i``.
    """

    initial: Digraph
    steps: tuple
    final: Digraph
    provenance: tuple


def replay(initial: Digraph, steps):
    """Re-run ``steps``; contract steps raise if their arc is not contractible then."""
    D = initial
    groups = [frozenset([v]) for v in range(initial.n)]
    for step in steps:
        D, mapping = apply_step(D, step)
        merged = [set() for _ in range(D.n)]
        for old, new in enumerate(mapping):
            if new is not None:
                merged[new] |= groups[old]
        groups = [frozenset(g) for g in merged]
    return D, tuple(groups)


def verify_trace(trace: ButterflyTrace, pattern: Optional[Digraph] = None) -> bool:
    try:
        final, provenance = replay(trace.initial, trace.steps)
    except InvalidInputError:
        return False
    if final != trace.final or provenance != trace.provenance:
        return False
    if pattern is not None and are_isomorphic(final, pattern) is None:
        return False
    return True


class _TraceBuilder:
    def __init__(self, D: Digraph):
        self.initial = D
        self.current = D
        self.label = list(range(D.n))  # initial vertex -> current index or None
        self.steps = []

    def apply(self, step):
        self.current, mapping = apply_step(self.current, step)
        self.label = [None if x is None else mapping[x] for x in self.label]
        self.steps.append(step)

    def delete_vertex(self, v_initial):
        self.apply((DELETE_VERTEX, self.label[v_initial]))

    def delete_arc(self, a, b):
        self.apply((DELETE_ARC, (self.label[a], self.label[b])))

    def current_arc(self, a, b):
        return self.label[a], self.label[b]

    def finish(self) -> ButterflyTrace:
        groups = [set() for _ in range(self.current.n)]
        for v, x in enumerate(self.label):
            if x is not None:
                groups[x].add(v)
        return ButterflyTrace(
            self.initial, tuple(self.steps), self.current, tuple(frozenset(g) for g in groups)
        )


@dataclass(frozen=True)
class ArborescencePair:
    """Roots and spanning arborescences for one pair ``(X_minus, X_plus)``.

    ``in_tree`` arcs point towards ``root_minus`` and are listed in BFS
    discovery order; ``out_tree`` arcs point away from ``root_plus``.
    """

    minus: frozenset
    plus: frozenset
    root_minus: int
    root_plus: int
    in_tree: tuple
    out_tree: tuple

    def arcs(self) -> list:
        return list(self.in_tree) + [(self.root_minus, self.root_plus)] + list(self.out_tree)


def _bfs_tree(D: Digraph, root: int, part: frozenset, inward: bool) -> list:
    seen = {root}
    frontier = [root]
    tree = []
    while frontier:
        nxt = []
        for y in frontier:
            nbrs = D.in_neighbors(y) if inward else D.out_neighbors(y)
            for x in nbrs:
                if x in part and x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    tree.append((x, y) if inward else (y, x))
        frontier = nxt
    if seen != set(part):
        raise InvalidInputError("branch set is not strongly connected")
    return tree


def pair_branch_sets(model: StrongMinorModel):
    """Deterministic pairing: sort by minimum vertex, pair consecutive sets, lower one is X_minus."""
    sets = sorted(model.branch_sets, key=min)
    return [(sets[2 * i], sets[2 * i + 1]) for i in range(len(sets) // 2)]


def _check_clique_model(model: StrongMinorModel) -> int:
    H = model.pattern
    if H.n % 2 or H != complete_digraph(H.n):
        raise InvalidInputError("model pattern must be a bidirected complete digraph on 2t vertices")
    if not verify_strong_model(model):
        raise InvalidInputError("model fails verification")
    return H.n // 2


def build_arborescences(model: StrongMinorModel) -> list:
    _check_clique_model(model)
    D = model.host
    pairs = []
    for minus, plus in pair_branch_sets(model):
        roots = sorted((u, v) for u, v in D.arcs if u in minus and v in plus)
        r_minus, r_plus = roots[0]
        pair = ArborescencePair(
            minus=minus,
            plus=plus,
            root_minus=r_minus,
            root_plus=r_plus,
            in_tree=tuple(_bfs_tree(D, r_minus, minus, inward=True)),
            out_tree=tuple(_bfs_tree(D, r_plus, plus, inward=False)),
        )
        ensure(len(pair.in_tree) == len(minus) - 1, "in-arborescence is not spanning")
        ensure(len(pair.out_tree) == len(plus) - 1, "out-arborescence is not spanning")
        pairs.append(pair)
    return pairs


def extract_butterfly(model: StrongMinorModel) -> ButterflyTrace:
    """Contract a strong bidirected ``K_2t`` model down to a bidirected ``K_t``.

    Keeps only the arborescence arcs, the root arcs, and arcs from each
    ``X_i_plus`` to every ``X_j_minus`` (``i != j``); then contracts every tree
    arc, checking contractibility before each step.
    """
    t = _check_clique_model(model)
    D = model.host
    pairs = build_arborescences(model)
    tree_arcs = []
    for p in pairs:
        tree_arcs.extend(p.arcs())
    keep = set(tree_arcs)
    for i, pi in enumerate(pairs):
        for j, pj in enumerate(pairs):
            if i != j:
                keep |= {(u, v) for u, v in D.arcs if u in pi.plus and v in pj.minus}

    builder = _TraceBuilder(D)
    used = model.used_vertices()
    for v in sorted(set(range(D.n)) - used, reverse=True):
        builder.delete_vertex(v)
    for a, b in sorted(D.arcs):
        if a in used and b in used and (a, b) not in keep:
            builder.delete_arc(a, b)

    order = []
    for p in pairs:
        order.extend(reversed(p.in_tree))  # leaves first
        order.append((p.root_minus, p.root_plus))
        order.extend(p.out_tree)  # root first
    for idx, (a, b) in enumerate(order):
        e = builder.current_arc(a, b)
        if not is_contractible(builder.current, e):
            raise InternalConsistencyError(f"tree arc ({a}, {b}) is not contractible when reached")
        builder.apply((CONTRACT_ARC, e))
        if checks_enabled():
            for a2, b2 in order[idx + 1:]:
                if not is_contractible(builder.current, builder.current_arc(a2, b2)):
                    raise InternalConsistencyError(
                        f"contracting ({a}, {b}) made tree arc ({a2}, {b2}) non-contractible"
                    )
    trace = builder.finish()
    ensure(trace.final.n == t, "extraction left the wrong number of vertices")
    ensure(trace.final == complete_digraph(t) or are_isomorphic(trace.final, complete_digraph(t)) is not None,
           "extraction did not end in a bidirected complete digraph")
    expected = [p.minus | p.plus for p in pairs]
    ensure(sorted(trace.provenance, key=min) == sorted(expected, key=min),
           "final vertices do not correspond to the merged pairs")
    if checks_enabled():
        ensure(verify_trace(trace), "extraction trace does not replay")
    return trace


# -- exhaustive butterfly-minor search --------------------------------------------


def _contains_spanning(D: Digraph, H: Digraph) -> bool:
    """Whether some bijection maps every arc of ``H`` onto an arc of ``D`` (same n)."""
    if len(H.arcs) > len(D.arcs):
        return False
    n = H.n
    order = sorted(range(n), key=lambda h: -(H.out_degree(h) + H.in_degree(h)))
    image = {}
    used = set()

    def rec(i):
        if i == n:
            return True
        h = order[i]
        for x in range(n):
            if x in used:
                continue
            if D.out_degree(x) < H.out_degree(h) or D.in_degree(x) < H.in_degree(h):
                continue
            ok = all(
                (not H.has_arc(h, g) or D.has_arc(x, y)) and (not H.has_arc(g, h) or D.has_arc(y, x))
                for g, y in image.items()
            )
            if not ok:
                continue
            image[h] = x
            used.add(x)
            if rec(i + 1):
                return True
            del image[h]
            used.discard(x)
        return False

    return rec(0)


def has_butterfly_minor(D: Digraph, H: Digraph) -> bool:
    """Exact search over delete/contract sequences, memoised up to isomorphism."""
    nH, aH = H.n, len(H.arcs)
    failed = set()

    def search(G: Digraph) -> bool:
        if G.n < nH or len(G.arcs) < aH:
            return False
        if G.n == nH:
            return _contains_spanning(G, H)
        key = canonical_form(G)
        if key in failed:
            return False
        for e in sorted(G.arcs):
            if is_contractible(G, e) and search(contract(G, e)[0]):
                return True
        for v in range(G.n):
            if search(delete_vertex(G, v)[0]):
                return True
        for e in sorted(G.arcs):
            if search(delete_arc(G, e)):
                return True
        failed.add(key)
        return False

    return search(D)


def corollary2_pipeline(D: Digraph, t: int) -> Optional[ButterflyTrace]:
    """Butterfly trace to a bidirected ``K_t`` via a strong ``K_2t`` model, if one is forced."""
    from .strong import m_chi, theorem1_pipeline

    if t < 1:
        raise InvalidInputError(f"t must be >= 1, got {t}")
    m_chi(2 * t)
    model = theorem1_pipeline(D, 2 * t)
    if model is None:
        return None
    return extract_butterfly(model)
