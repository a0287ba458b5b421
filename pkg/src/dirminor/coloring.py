"""Exact dichromatic and chromatic number solvers with witness colourings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .digraph import (
    Digraph,
    Graph,
    creates_cycle,
    is_acyclic_mask,
    iter_bits,
    shortest_path_mask,
)
from .errors import InvalidInputError


@dataclass(frozen=True)
class AcyclicColoring:
    """A colouring of ``digraph`` whose colour classes induce acyclic subdigraphs."""

    digraph: Digraph
    colors: tuple
    k: int

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != self.digraph.n:
            raise InvalidInputError("colouring must assign every vertex exactly one colour")
        if any(c < 0 or c >= self.k for c in colors):
            raise InvalidInputError(f"colour out of range 0..{self.k - 1}")
        if find_monochromatic_cycle(self.digraph, colors) is not None:
            raise InvalidInputError("colour classes are not all acyclic")

    def classes(self) -> list:
        return [frozenset(v for v, c in enumerate(self.colors) if c == i) for i in range(self.k)]

    def num_used(self) -> int:
        return len(set(self.colors))


@dataclass(frozen=True)
class ProperColoring:
    graph: Graph
    colors: tuple
    k: int

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != self.graph.n:
            raise InvalidInputError("colouring must assign every vertex exactly one colour")
        if any(c < 0 or c >= self.k for c in colors):
            raise InvalidInputError(f"colour out of range 0..{self.k - 1}")
        for u, v in self.graph.edges:
            if colors[u] == colors[v]:
                raise InvalidInputError(f"edge ({u}, {v}) is monochromatic")


def is_proper_coloring(G: Graph, colors: Sequence[int]) -> bool:
    return len(colors) == G.n and all(colors[u] != colors[v] for u, v in G.edges)


# -- dichromatic number -----------------------------------------------------------


def _degree_order(D: Digraph) -> list:
    return sorted(range(D.n), key=lambda v: (-(D.out_degree(v) + D.in_degree(v)), v))


class _AcyclicPartitioner:
    """Partition vertex sets into few acyclic sets.

    Recursion: the pivot (first vertex of the degree order still present)
    goes into some inclusion-maximal acyclic subset of the remaining set;
    enlarging a class never hurts because dichromatic number is monotone
    under taking induced subdigraphs.  Failures are memoised per remaining
    vertex set.
    """

    def __init__(self, D: Digraph):
        self.D = D
        self.order = _degree_order(D)
        self.failed = {}  # mask -> largest k known infeasible
        self.solved = {}  # mask -> class list

    def maximal_acyclic_sets(self, S: int, pivot: int):
        D = self.D
        rest = [w for w in self.order if S >> w & 1 and w != pivot]

        def rec(i, A, skipped):
            if i == len(rest):
                for w in skipped:
                    if not creates_cycle(D, A | (1 << w), w):
                        return
                yield A
                return
            w = rest[i]
            bigger = A | (1 << w)
            if creates_cycle(D, bigger, w):
                # stays impossible as A grows
                yield from rec(i + 1, A, skipped)
            else:
                yield from rec(i + 1, bigger, skipped)
                yield from rec(i + 1, A, skipped + (w,))

        yield from rec(0, 1 << pivot, ())

    def solve(self, S: int, k: int) -> Optional[list]:
        if S == 0:
            return []
        if k <= 0:
            return None
        known = self.solved.get(S)
        if known is not None and len(known) <= k:
            return known
        if self.failed.get(S, 0) >= k:
            return None
        if is_acyclic_mask(self.D, S):
            self.solved[S] = [S]
            return [S]
        if k == 1:
            self.failed[S] = max(self.failed.get(S, 0), 1)
            return None
        pivot = next(v for v in self.order if S >> v & 1)
        for A in self.maximal_acyclic_sets(S, pivot):
            rest = self.solve(S & ~A, k - 1)
            if rest is not None:
                result = [A] + rest
                self.solved[S] = result
                return result
        self.failed[S] = max(self.failed.get(S, 0), k)
        return None


def _classes_to_colors(n, classes):
    colors = [0] * n
    for c, mask in enumerate(classes):
        for v in iter_bits(mask):
            colors[v] = c
    return colors


def acyclic_partition_mask(D: Digraph, mask: int, k: int) -> Optional[list]:
    """At most ``k`` acyclic vertex sets covering ``mask`` (as bitmasks), or ``None``."""
    return _AcyclicPartitioner(D).solve(mask, k)


def is_k_dicolorable(D: Digraph, k: int) -> Optional[AcyclicColoring]:
    if k <= 0:
        raise InvalidInputError(f"k must be positive, got {k}")
    classes = acyclic_partition_mask(D, D.all_mask, k)
    if classes is None:
        return None
    return AcyclicColoring(D, tuple(_classes_to_colors(D.n, classes)), k)


def dichromatic_number(D: Digraph):
    """Return ``(k, witness)`` with ``k`` the exact dichromatic number."""
    if D.n == 0:
        return 0, AcyclicColoring(D, (), 0)
    solver = _AcyclicPartitioner(D)
    k = 1
    while True:
        classes = solver.solve(D.all_mask, k)
        if classes is not None:
            assert len(classes) == k
            return k, AcyclicColoring(D, tuple(_classes_to_colors(D.n, classes)), k)
        k += 1


def dichromatic_number_mask(D: Digraph, mask: int) -> int:
    solver = _AcyclicPartitioner(D)
    k = 0
    while solver.solve(mask, k) is None:
        k += 1
    return k


# -- 2-dicolourings, the decomposition's inner loop ------------------------------


def two_dicoloring_mask(D: Digraph, mask: int):
    """Acyclic ``(A0, A1)`` split of ``mask`` or ``None``."""
    classes = _AcyclicPartitioner(D).solve(mask, 2)
    if classes is None:
        return None
    classes = classes + [0] * (2 - len(classes))
    return classes[0], classes[1]


def extend_two_dicoloring(D: Digraph, A0: int, A1: int, new: Sequence[int]):
    """Extend an acyclic split to the vertices ``new``.

    Tries to keep the old colours and place the new vertices by
    backtracking; falls back to solving the whole set from scratch.
    """

    def rec(i, a0, a1):
        if i == len(new):
            return a0, a1
        v = new[i]
        bit = 1 << v
        if not creates_cycle(D, a0 | bit, v):
            got = rec(i + 1, a0 | bit, a1)
            if got:
                return got
        if not creates_cycle(D, a1 | bit, v):
            got = rec(i + 1, a0, a1 | bit)
            if got:
                return got
        return None

    got = rec(0, A0, A1)
    if got is not None:
        return got
    full = A0 | A1
    for v in new:
        full |= 1 << v
    return two_dicoloring_mask(D, full)


# -- chromatic number ----------------------------------------------------------------


def _k_colorable(G: Graph, k: int) -> Optional[list]:
    n = G.n
    order = sorted(range(n), key=lambda v: (-G.degree(v), v))
    colors = [-1] * n
    adj = G.adj_masks

    def rec(i, used):
        if i == n:
            return True
        v = order[i]
        forbidden = {colors[w] for w in iter_bits(adj[v])}
        for c in range(used):
            if c not in forbidden:
                colors[v] = c
                if rec(i + 1, used):
                    return True
        if used < k:
            colors[v] = used
            if rec(i + 1, used + 1):
                return True
        colors[v] = -1
        return False

    return list(colors) if rec(0, 0) else None


def _greedy_clique_size(G: Graph) -> int:
    best = 1 if G.n else 0
    adj = G.adj_masks
    for v in range(G.n):
        clique = 1 << v
        cand = adj[v]
        while cand:
            w = max(iter_bits(cand), key=lambda x: (adj[x] & cand).bit_count())
            clique |= 1 << w
            cand &= adj[w]
        best = max(best, clique.bit_count())
    return best


def chromatic_number(G: Graph):
    """Return ``(k, witness)`` with ``k`` the exact chromatic number."""
    if G.n == 0:
        return 0, ProperColoring(G, (), 0)
    k = _greedy_clique_size(G)
    while True:
        colors = _k_colorable(G, k)
        if colors is not None:
            return k, ProperColoring(G, tuple(colors), k)
        k += 1


def is_k_colorable(G: Graph, k: int) -> Optional[ProperColoring]:
    if k <= 0:
        raise InvalidInputError(f"k must be positive, got {k}")
    colors = _k_colorable(G, k)
    return None if colors is None else ProperColoring(G, tuple(colors), k)


# -- monochromatic cycles --------------------------------------------------------------


def find_monochromatic_cycle(D: Digraph, colors: Sequence[int]) -> Optional[list]:
    """A shortest directed cycle whose vertices share one colour, or ``None``.

    Returned as ``[c0, ..., cL-1]`` with arcs ``c_i -> c_{i+1}`` and
    ``c_{L-1} -> c0``.  Being shortest, it has no chords inside its class.
    """
    if len(colors) != D.n:
        raise InvalidInputError("colouring must cover every vertex")
    classes = {}
    for v, c in enumerate(colors):
        classes[c] = classes.get(c, 0) | (1 << v)
    best = None
    for s in range(D.n):
        within = classes[colors[s]]
        start = D.out_masks[s] & within
        if not start:
            continue
        if start >> s & 1:  # pragma: no cover - loops are excluded by Digraph
            return [s]
        path = shortest_path_mask(D, start, D.in_masks[s] & within, within & ~(1 << s))
        if path is None:
            continue
        cycle = [s] + path
        if best is None or len(cycle) < len(best):
            best = cycle
            if len(best) == 2:
                break
    return best


def is_acyclic_coloring(D: Digraph, colors: Sequence[int]) -> bool:
    return len(colors) == D.n and find_monochromatic_cycle(D, colors) is None
