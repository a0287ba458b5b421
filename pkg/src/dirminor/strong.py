"""Strong minors: exact search, transitivity, and the bidirected-clique pipeline."""
from __future__ import annotations

import itertools
from typing import Optional

from .decomposition import DecompositionCertificate, certify_decomposition
from .digraph import (
    Digraph,
    Graph,
    biorient,
    complete_digraph,
    is_strongly_connected_mask,
    iter_bits,
    reach_mask,
    to_mask,
)
from .errors import InternalConsistencyError, InvalidInputError, UnsupportedParameterError, ensure
from .models import (
    StrongMinorModel,
    UndirectedMinorModel,
    verify_strong_model,
    verify_undirected_model,
)

# Hadwiger's conjecture is proven for t <= 6, so the least chromatic number
# forcing a K_t minor is exactly t there.  Larger t is not known exactly.
HADWIGER_KNOWN = {t: t for t in range(1, 7)}


def m_chi(t: int) -> int:
    if t < 1:
        raise InvalidInputError(f"t must be >= 1, got {t}")
    if t not in HADWIGER_KNOWN:
        raise UnsupportedParameterError(f"m_chi({t}) is not known exactly (t <= 6 only)")
    return HADWIGER_KNOWN[t]


def strong_minor_bound(t: int) -> int:
    """Dichromatic number that forces a strong bidirected K_t minor."""
    return 2 * m_chi(t) - 1


def butterfly_minor_bound(t: int) -> int:
    """Dichromatic number that forces a butterfly bidirected K_t minor."""
    return 2 * m_chi(2 * t) - 1


def _is_complete_bidirected(H: Digraph) -> bool:
    return len(H.arcs) == H.n * (H.n - 1)


def strongly_connected_subsets(D: Digraph, within: Optional[int] = None) -> list:
    """All non-empty strongly connected vertex masks, smallest first."""
    within = D.all_mask if within is None else within
    vertices = list(iter_bits(within))
    found = []
    for size in range(1, len(vertices) + 1):
        for combo in itertools.combinations(vertices, size):
            mask = to_mask(combo)
            if is_strongly_connected_mask(D, mask):
                found.append(mask)
    return found


def find_strong_model(D: Digraph, H: Digraph) -> Optional[StrongMinorModel]:
    """Exact backtracking search for a strong ``H``-model in ``D``.

    Branch sets are chosen pattern vertex by pattern vertex among the
    strongly connected subsets of ``D``; each choice must realise the pattern
    arcs to the already placed sets.  For bidirected complete patterns the
    branch sets are forced into increasing order of minimum vertex.
    """
    if H.n == 0:
        return StrongMinorModel(D, H, ())
    if H.n > D.n:
        return None
    sc_sets = strongly_connected_subsets(D)
    out, inn = D.out_masks, D.in_masks

    def out_of(mask):
        r = 0
        for v in iter_bits(mask):
            r |= out[v]
        return r

    def in_of(mask):
        r = 0
        for v in iter_bits(mask):
            r |= inn[v]
        return r

    symmetric = _is_complete_bidirected(H)
    # place high-degree pattern vertices first, then stay adjacent to placed ones
    order = []
    remaining = set(range(H.n))
    while remaining:
        def key(h):
            linked = sum(1 for g in order if H.has_arc(h, g) or H.has_arc(g, h))
            return (-linked, -(H.out_degree(h) + H.in_degree(h)), h)

        h = min(remaining, key=key)
        order.append(h)
        remaining.discard(h)
    if symmetric:
        order = list(range(H.n))
    assigned = {}
    reach_out = {}
    reach_in = {}

    def rec(i, used, last_min):
        if i == len(order):
            return True
        h = order[i]
        left = len(order) - i
        if D.n - used.bit_count() < left:
            return False
        need_to = [g for g in order[:i] if H.has_arc(h, g)]
        need_from = [g for g in order[:i] if H.has_arc(g, h)]
        for X in sc_sets:
            if X & used:
                continue
            if symmetric and (X & -X) <= last_min:
                continue
            if D.n - (used | X).bit_count() < left - 1:
                continue
            xo = out_of(X)
            if any(not (xo & assigned[g]) for g in need_to):
                continue
            xi = in_of(X)
            if any(not (xi & assigned[g]) for g in need_from):
                continue
            assigned[h] = X
            if rec(i + 1, used | X, X & -X):
                return True
            del assigned[h]
        return False

    if not rec(0, 0, 0):
        return None
    model = StrongMinorModel(D, H, tuple(sorted(iter_bits(assigned[h])) for h in range(H.n)))
    ensure(verify_strong_model(model), "strong-model search produced an invalid model")
    return model


def find_clique_minor(G: Graph, t: int) -> Optional[UndirectedMinorModel]:
    """Exact search for a K_t-minor model; branch sets ordered by minimum vertex."""
    K = Graph(t, frozenset(itertools.combinations(range(t), 2)))
    if t == 0:
        return UndirectedMinorModel(G, K, ())
    if t > G.n:
        return None
    adj = G.adj_masks
    vertices = list(range(G.n))
    connected = []
    for size in range(1, G.n + 1):
        for combo in itertools.combinations(vertices, size):
            mask = to_mask(combo)
            if reach_mask(adj, mask & -mask, mask) == mask:
                connected.append(mask)
    nbr = {}
    for mask in connected:
        r = 0
        for v in iter_bits(mask):
            r |= adj[v]
        nbr[mask] = r & ~mask
    chosen = []

    def rec(used, last_min):
        if len(chosen) == t:
            return True
        left = t - len(chosen)
        for X in connected:
            low = X & -X
            if low <= last_min or X & used:
                continue
            if G.n - (used | X).bit_count() < left - 1:
                continue
            if any(not (nbr[X] & Y) for Y in chosen):
                continue
            chosen.append(X)
            if rec(used | X, low):
                return True
            chosen.pop()
        return False

    if not rec(0, 0):
        return None
    model = UndirectedMinorModel(G, K, tuple(sorted(iter_bits(X)) for X in chosen))
    ensure(verify_undirected_model(model), "clique-minor search produced an invalid model")
    return model


def promote_to_bioriented(model: UndirectedMinorModel, D: Digraph) -> StrongMinorModel:
    """Reuse an undirected minor model's branch sets as a strong model in ``D``.

    ``D`` must carry a digon for every host edge the model relies on.
    """
    G, H = model.host, model.pattern
    if D.n != G.n:
        raise InvalidInputError("digraph and graph have different vertex counts")
    digon = [0] * D.n
    for u, v in D.arcs:
        if D.has_arc(v, u):
            digon[u] |= 1 << v
    masks = [to_mask(b) for b in model.branch_sets]
    for b, mask in zip(model.branch_sets, masks):
        # connectivity via digon edges that are also host edges
        adj = [digon[v] & G.adj_masks[v] for v in range(D.n)]
        if reach_mask(adj, mask & -mask, mask) != mask:
            raise InvalidInputError("branch set is not connected through digons of D")
    for a, b in H.edges:
        if not any(digon[u] & G.adj_masks[u] & masks[b] for u in model.branch_sets[a]):
            raise InvalidInputError(f"pattern edge ({a}, {b}) has no digon in D")
    strong = StrongMinorModel(D, biorient(H), model.branch_sets)
    ensure(verify_strong_model(strong), "promoted model failed verification")
    return strong


def compose_models(outer: StrongMinorModel, inner: StrongMinorModel) -> StrongMinorModel:
    """Model of ``outer.pattern`` in ``inner.host`` via the middle digraph."""
    if outer.host != inner.pattern:
        raise InvalidInputError("outer model's host must equal inner model's pattern")
    branch = []
    for X in outer.branch_sets:
        union = set()
        for m in X:
            union |= inner.branch_sets[m]
        branch.append(sorted(union))
    composite = StrongMinorModel(inner.host, outer.pattern, tuple(branch))
    ensure(verify_strong_model(composite), "composed model failed verification")
    return composite


def theorem1_pipeline(D: Digraph, t: int,
                      certificate: Optional[DecompositionCertificate] = None
                      ) -> Optional[StrongMinorModel]:
    """Strong bidirected ``K_t`` model forced through the quotient graph, if any.

    Decomposes ``D``; when the quotient's chromatic number reaches ``m_chi(t)``
    its ``K_t`` minor is lifted back to ``D``.  Returns ``None`` otherwise (no
    claim is made in that case).
    """
    need = m_chi(t)
    cert = certificate if certificate is not None else certify_decomposition(D)
    if cert.digraph != D:
        raise InvalidInputError("certificate belongs to a different digraph")
    if cert.k < need:
        return None
    clique = find_clique_minor(cert.quotient, t)
    if clique is None:
        raise InternalConsistencyError(
            f"graph with chromatic number {cert.k} >= {need} has no K_{t} minor"
        )
    outer = promote_to_bioriented(clique, biorient(cert.quotient))
    model = compose_models(outer, cert.model)
    ensure(model.pattern == complete_digraph(t), "pipeline produced the wrong pattern")
    return model
