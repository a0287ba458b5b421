"""Digraph and graph types plus the connectivity primitives everything else uses.

Vertices are the integers ``0..n-1``.  Internally most algorithms work on
bitmasks (bit ``v`` set means vertex ``v`` is present), which keeps the
exponential searches in the rest of the package cheap at desk scale.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .errors import InvalidInputError


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def mask_to_set(mask: int) -> frozenset:
    return frozenset(iter_bits(mask))


@dataclass(frozen=True)
class Digraph:
    """Simple loopless digraph on ``0..n-1``; a digon is two opposite arcs."""

    n: int
    arcs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInputError(f"negative vertex count {self.n}")
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if u == v:
                raise InvalidInputError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInputError(f"arc ({u}, {v}) out of range for n={self.n}")
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(cls, n, arcs):
        return cls(n, frozenset(arcs))

    @cached_property
    def out_masks(self) -> tuple:
        out = [0] * self.n
        for u, v in self.arcs:
            out[u] |= 1 << v
        return tuple(out)

    @cached_property
    def in_masks(self) -> tuple:
        inn = [0] * self.n
        for u, v in self.arcs:
            inn[v] |= 1 << u
        return tuple(inn)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def has_arc(self, u, v) -> bool:
        return (u, v) in self.arcs

    def out_neighbors(self, v) -> list:
        return list(iter_bits(self.out_masks[v]))

    def in_neighbors(self, v) -> list:
        return list(iter_bits(self.in_masks[v]))

    def out_degree(self, v) -> int:
        return self.out_masks[v].bit_count()

    def in_degree(self, v) -> int:
        return self.in_masks[v].bit_count()

    def num_arcs(self) -> int:
        return len(self.arcs)

    def sorted_arcs(self) -> list:
        return sorted(self.arcs)

    def reverse(self) -> "Digraph":
        return Digraph(self.n, frozenset((v, u) for u, v in self.arcs))

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.sorted_arcs()})"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``0..n-1``; edges stored as ``(min, max)``."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInputError(f"negative vertex count {self.n}")
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidInputError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInputError(f"edge ({u}, {v}) out of range for n={self.n}")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))

    @cached_property
    def adj_masks(self) -> tuple:
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def has_edge(self, u, v) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v) -> list:
        return list(iter_bits(self.adj_masks[v]))

    def degree(self, v) -> int:
        return self.adj_masks[v].bit_count()

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


def check_vertices(n: int, vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if not (isinstance(v, int) and 0 <= v < n):
            raise InvalidInputError(f"vertex {v!r} out of range for n={n}")
        mask |= 1 << v
    return mask


def induced_subdigraph(D: Digraph, S: Iterable[int]):
    """Return ``(D[S], vertices)`` where ``vertices[i]`` is the host label of new vertex ``i``."""
    mask = check_vertices(D.n, S)
    vertices = tuple(iter_bits(mask))
    index = {v: i for i, v in enumerate(vertices)}
    arcs = frozenset(
        (index[u], index[v]) for u, v in D.arcs if u in index and v in index
    )
    return Digraph(len(vertices), arcs), vertices


# -- reachability and strong connectivity -------------------------------------


def reach_mask(adj, start: int, within: int) -> int:
    """All vertices of ``within`` reachable from ``start`` (inclusive) along ``adj``."""
    seen = start & within
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def is_strongly_connected_mask(D: Digraph, mask: int) -> bool:
    if mask == 0:
        return True
    start = mask & -mask
    return (
        reach_mask(D.out_masks, start, mask) == mask
        and reach_mask(D.in_masks, start, mask) == mask
    )


def scc(D: Digraph) -> list:
    """Strongly connected components (Tarjan, iterative), sorted by minimum vertex."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = 0
    components = []
    for root in range(D.n):
        if root in index:
            continue
        work = [(root, iter(D.out_neighbors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, children = work[-1]
            advanced = False
            for w in children:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(D.out_neighbors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    components.sort(key=min)
    return components


def is_strongly_connected(D: Digraph) -> bool:
    return is_strongly_connected_mask(D, D.all_mask)


def is_acyclic_mask(D: Digraph, mask: int) -> bool:
    remaining = mask
    inn = D.in_masks
    while remaining:
        sources = 0
        for v in iter_bits(remaining):
            if inn[v] & remaining == 0:
                sources |= 1 << v
        if not sources:
            return False
        remaining &= ~sources
    return True


def creates_cycle(D: Digraph, acyclic_mask: int, v: int) -> bool:
    """Whether adding ``v`` to the acyclic set ``acyclic_mask`` closes a directed cycle."""
    within = acyclic_mask & ~(1 << v)
    targets = D.in_masks[v] & within
    if not targets:
        return False
    start = D.out_masks[v] & within
    if not start:
        return False
    return reach_mask(D.out_masks, start, within) & targets != 0


def is_acyclic(D: Digraph) -> bool:
    return is_acyclic_mask(D, D.all_mask)


def is_acyclic_set(D: Digraph, S: Iterable[int]) -> bool:
    return is_acyclic_mask(D, check_vertices(D.n, S))


def shortest_path_mask(D: Digraph, sources: int, targets: int, within: int):
    """Shortest directed path from any source to any target inside ``within``.

    BFS visits out-neighbours in increasing order, so ties go to the lowest
    next vertex.  Returns a vertex list or ``None``.
    """
    sources &= within
    if not sources:
        return None
    parent = {v: None for v in iter_bits(sources)}
    frontier = sorted(parent)
    while frontier:
        for v in frontier:
            if targets >> v & 1:
                path = [v]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
        nxt = []
        for v in frontier:
            for w in iter_bits(D.out_masks[v] & within):
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    return None


def shortest_path(D: Digraph, source: int, target: int, within: Optional[Iterable[int]] = None):
    mask = D.all_mask if within is None else check_vertices(D.n, within)
    return shortest_path_mask(D, 1 << source, 1 << target, mask)


# -- conversions ----------------------------------------------------------------


def biorient(G: Graph) -> Digraph:
    arcs = set()
    for u, v in G.edges:
        arcs.add((u, v))
        arcs.add((v, u))
    return Digraph(G.n, frozenset(arcs))


def underlying_graph(D: Digraph) -> Graph:
    return Graph(D.n, frozenset(D.arcs))


def digon_graph(D: Digraph) -> Graph:
    return Graph(D.n, frozenset((u, v) for u, v in D.arcs if u < v and (v, u) in D.arcs))


def complete_digraph(t: int) -> Digraph:
    """The bidirected complete digraph on ``t`` vertices."""
    return Digraph(t, frozenset((u, v) for u in range(t) for v in range(t) if u != v))


def relabel(D: Digraph, perm) -> Digraph:
    """Apply ``v -> perm[v]``."""
    return Digraph(D.n, frozenset((perm[u], perm[v]) for u, v in D.arcs))


# -- isomorphism ------------------------------------------------------------------


def _vertex_invariants(D: Digraph) -> list:
    out, inn = D.out_masks, D.in_masks
    base = [
        (out[v].bit_count(), inn[v].bit_count(), (out[v] & inn[v]).bit_count())
        for v in range(D.n)
    ]
    # one round of refinement: the multisets of neighbour invariants
    return [
        (
            base[v],
            tuple(sorted(base[w] for w in iter_bits(out[v]))),
            tuple(sorted(base[w] for w in iter_bits(inn[v]))),
        )
        for v in range(D.n)
    ]


def are_isomorphic(D1: Digraph, D2: Digraph) -> Optional[dict]:
    """Arc-preserving bijection ``D1 -> D2`` or ``None``."""
    if D1.n != D2.n or len(D1.arcs) != len(D2.arcs):
        return None
    inv1 = _vertex_invariants(D1)
    inv2 = _vertex_invariants(D2)
    if sorted(inv1) != sorted(inv2):
        return None
    n = D1.n
    candidates = {
        v: [w for w in range(n) if inv2[w] == inv1[v]] for v in range(n)
    }
    # most constrained vertices first, then neighbours of already placed ones
    order = sorted(range(n), key=lambda v: (len(candidates[v]), v))
    mapping = {}
    used = set()

    def consistent(v, w):
        for x, y in mapping.items():
            if D1.has_arc(v, x) != D2.has_arc(w, y):
                return False
            if D1.has_arc(x, v) != D2.has_arc(y, w):
                return False
        return True

    def extend(i):
        if i == n:
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if not extend(0):
        return None
    result = dict(mapping)
    if relabel(D1, [result[v] for v in range(n)]) != D2:
        raise AssertionError("isomorphism search returned a non-isomorphism")
    return result


def canonical_form(D: Digraph):
    """Hashable isomorphism-invariant key: ``(n, code)``.

    Vertices are grouped into cells by refined degree invariants; all
    permutations inside cells are tried and the smallest adjacency code
    wins.  Exhaustive within cells, so intended for n <= ~8.
    """
    n = D.n
    if n == 0:
        return (0, 0)
    inv = _vertex_invariants(D)
    keys = sorted(set(inv))
    cells = [[v for v in range(n) if inv[v] == key] for key in keys]
    arcs = list(D.arcs)
    best = None
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        position = [0] * n
        pos = 0
        for cell in choice:
            for v in cell:
                position[v] = pos
                pos += 1
        code = 0
        for u, v in arcs:
            code |= 1 << (position[u] * n + position[v])
        if best is None or code < best:
            best = code
    return (n, best)


def from_canonical_form(key) -> Digraph:
    n, code = key
    arcs = [(b // n, b % n) for b in iter_bits(code)] if n else []
    return Digraph(n, frozenset(arcs))
