"""Reduce the dichromatic number of a digraph to a chromatic number.

The vertex set is peeled into an ordered partition ``X_1, ..., X_m`` where
each part is strongly connected, 2-dicolourable and (ideally) inclusion-wise
maximal inside what is left.  The quotient graph joins two parts when arcs
run both ways between them.  A proper ``k``-colouring of the quotient, paired
with each part's own 2-colouring, gives a ``2k``-colouring of the digraph.

When a part is not maximal the lifted colouring can contain a monochromatic
cycle.  ``repair_step`` turns such a cycle into a strictly larger part, so
``certify_decomposition`` simply repeats until the lifted colouring is
acyclic.  Each repair enlarges one part without touching earlier ones, so
the tuple of part sizes increases lexicographically and the loop ends.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

from .coloring import (
    AcyclicColoring,
    ProperColoring,
    chromatic_number,
    extend_two_dicoloring,
    find_monochromatic_cycle,
    is_proper_coloring,
    two_dicoloring_mask,
)
from .digraph import (
    Digraph,
    Graph,
    biorient,
    check_vertices,
    is_acyclic_mask,
    is_strongly_connected_mask,
    iter_bits,
    mask_to_set,
    reach_mask,
    shortest_path_mask,
    to_mask,
)
from .errors import InternalConsistencyError, InvalidInputError, ensure
from .models import StrongMinorModel, verify_strong_model

log = logging.getLogger(__name__)

GROWTH_MODES = ("exact", "greedy", "none")
EXACT_LIMIT = 14


@dataclass(frozen=True)
class MaximalPartition:
    """Ordered parts with a per-part acyclic 2-colouring.

    ``part_color[v]`` is 0 or 1, the colour of ``v`` inside its own part.
    """

    digraph: Digraph
    parts: tuple
    part_color: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(frozenset(p) for p in self.parts))
        object.__setattr__(self, "part_color", tuple(self.part_color))

    @property
    def m(self) -> int:
        return len(self.parts)

    def part_of(self) -> list:
        owner = [-1] * self.digraph.n
        for i, part in enumerate(self.parts):
            for v in part:
                owner[v] = i
        return owner

    def sizes(self) -> tuple:
        return tuple(len(p) for p in self.parts)

    def is_valid(self) -> bool:
        """Every structural invariant except maximality."""
        D = self.digraph
        seen = 0
        for part in self.parts:
            mask = to_mask(part)
            if not part or mask & seen:
                return False
            seen |= mask
            if not is_strongly_connected_mask(D, mask):
                return False
            for c in (0, 1):
                cls = to_mask(v for v in part if self.part_color[v] == c)
                if not is_acyclic_mask(D, cls):
                    return False
        return seen == D.all_mask and all(c in (0, 1) for c in self.part_color)


@dataclass(frozen=True)
class RepairContext:
    """Everything one repair step derived from a monochromatic cycle."""

    cycle: tuple
    i0: int
    u: int
    w: tuple
    v: int
    s: int
    x: int
    new_part: frozenset
    new_coloring: tuple  # (class 0, class 1) inside new_part


@dataclass(frozen=True)
class DecompositionCertificate:
    digraph: Digraph
    partition: MaximalPartition
    quotient: Graph
    quotient_coloring: ProperColoring
    lifted: AcyclicColoring
    model: StrongMinorModel
    history: tuple = field(default=())  # part-size tuples, one per iteration
    repairs: tuple = field(default=())

    @property
    def k(self) -> int:
        return self.quotient_coloring.k


# -- growing parts -------------------------------------------------------------------


def _extend(D, col, new):
    got = extend_two_dicoloring(D, col[0], col[1], list(new))
    return got


def _greedy_grow(D: Digraph, R: int, X: int, col):
    """Absorb single vertices, or a vertex plus a shortest return path, while possible."""
    out, inn = D.out_masks, D.in_masks
    while True:
        outside = R & ~X
        into_x = 0   # outside vertices with an arc into X
        from_x = 0   # outside vertices with an arc from X
        for z in iter_bits(outside):
            if out[z] & X:
                into_x |= 1 << z
            if inn[z] & X:
                from_x |= 1 << z
        grown = False
        for w in iter_bits(outside):
            bit = 1 << w
            candidates = []
            if bit & into_x and bit & from_x:
                candidates.append([w])
            else:
                if bit & from_x:
                    path = shortest_path_mask(D, bit, into_x, outside)
                    if path:
                        candidates.append(path)
                if bit & into_x:
                    path = shortest_path_mask(D, from_x, bit, outside)
                    if path:
                        candidates.append(path)
            for new in candidates:
                got = _extend(D, col, new)
                if got is not None:
                    X |= to_mask(new)
                    col = got
                    grown = True
                    break
            if grown:
                break
        if not grown:
            return X, col


def _exact_closure_step(D: Digraph, R: int, X: int, col):
    """Find any strongly connected 2-dicolourable proper superset of X inside R."""
    region = reach_mask(D.out_masks, X, R) & reach_mask(D.in_masks, X, R)
    free = list(iter_bits(region & ~X))
    for size in range(1, len(free) + 1):
        for Z in itertools.combinations(free, size):
            Y = X | to_mask(Z)
            if not is_strongly_connected_mask(D, Y):
                continue
            got = _extend(D, col, Z)
            if got is not None:
                return Y, got
    return None


def _grow(D: Digraph, R: int, X: int, col, mode: str, exact_limit: int = EXACT_LIMIT):
    if mode == "none":
        return X, col
    while True:
        X, col = _greedy_grow(D, R, X, col)
        if mode != "exact":
            return X, col
        region = reach_mask(D.out_masks, X, R) & reach_mask(D.in_masks, X, R)
        if (region & ~X).bit_count() > exact_limit:
            return X, col
        step = _exact_closure_step(D, R, X, col)
        if step is None:
            return X, col
        X, col = step


def grow_part(D: Digraph, R, seed: int, mode: str = "exact", exact_limit: int = EXACT_LIMIT):
    """Grow a strongly connected, 2-dicolourable part of ``D[R]`` around ``seed``.

    Returns ``(part, (class0, class1))``.  In ``"exact"`` mode the result is
    inclusion-wise maximal whenever the candidate region has at most
    ``exact_limit`` vertices.
    """
    if mode not in GROWTH_MODES:
        raise InvalidInputError(f"unknown growth mode {mode!r}")
    Rmask = check_vertices(D.n, R)
    if not Rmask >> seed & 1:
        raise InvalidInputError(f"seed {seed} not in R")
    X, col = _grow(D, Rmask, 1 << seed, (1 << seed, 0), mode, exact_limit)
    return mask_to_set(X), (mask_to_set(col[0]), mask_to_set(col[1]))


def _partition_from_masks(D, parts, cols):
    part_color = [0] * D.n
    for col in cols:
        for v in iter_bits(col[1]):
            part_color[v] = 1
    return MaximalPartition(D, tuple(mask_to_set(p) for p in parts), tuple(part_color))


def _masks_from_partition(P: MaximalPartition):
    parts = [to_mask(p) for p in P.parts]
    cols = []
    for p in P.parts:
        c0 = to_mask(v for v in p if P.part_color[v] == 0)
        c1 = to_mask(v for v in p if P.part_color[v] == 1)
        cols.append((c0, c1))
    return parts, cols


def _build_from(D, remaining, parts, cols, mode, exact_limit):
    while remaining:
        seed = (remaining & -remaining).bit_length() - 1
        X, col = _grow(D, remaining, 1 << seed, (1 << seed, 0), mode, exact_limit)
        parts.append(X)
        cols.append(col)
        remaining &= ~X
    return parts, cols


def build_partition(D: Digraph, mode: str = "exact", exact_limit: int = EXACT_LIMIT) -> MaximalPartition:
    """Peel parts off the remaining vertices, each seeded at its lowest vertex."""
    if mode not in GROWTH_MODES:
        raise InvalidInputError(f"unknown growth mode {mode!r}")
    parts, cols = _build_from(D, D.all_mask, [], [], mode, exact_limit)
    return _partition_from_masks(D, parts, cols)


# -- quotient and lifting ------------------------------------------------------------


def quotient_graph(D: Digraph, P: MaximalPartition) -> Graph:
    owner = P.part_of()
    forward = set()
    for u, v in D.arcs:
        a, b = owner[u], owner[v]
        if a != b:
            forward.add((a, b))
    edges = {(a, b) for a, b in forward if a < b and (b, a) in forward}
    return Graph(P.m, frozenset(edges))


def lift_coloring(D: Digraph, P: MaximalPartition, f_G) -> tuple:
    """Vertex ``v`` in part ``i`` gets colour ``2 * f_G(i) + part_color(v)``."""
    colors = f_G.colors if isinstance(f_G, ProperColoring) else tuple(f_G)
    if not is_proper_coloring(quotient_graph(D, P), colors):
        raise InvalidInputError("quotient colouring is not proper")
    owner = P.part_of()
    return tuple(2 * colors[owner[v]] + P.part_color[v] for v in range(D.n))


# -- repair ----------------------------------------------------------------------------


def _is_cycle(D, C):
    if len(C) < 2 or len(set(C)) != len(C):
        return False
    return all(D.has_arc(C[i], C[(i + 1) % len(C)]) for i in range(len(C)))


def analyze_cycle(D: Digraph, P: MaximalPartition, C) -> RepairContext:
    """Derive the enlarged part from a monochromatic cycle of the lifted colouring."""
    owner = P.part_of()
    L = len(C)
    i0 = min(owner[c] for c in C)
    X0 = to_mask(P.parts[i0])
    if all(owner[c] == i0 for c in C):
        raise InternalConsistencyError(
            "monochromatic cycle inside one part: the part colouring was not acyclic"
        )
    # first exit from X_i0 along the cycle
    j = next(j for j in range(L) if owner[C[j]] == i0 and owner[C[(j + 1) % L]] != i0)
    u = C[j]
    w = []
    pos = (j + 1) % L
    while owner[C[pos]] != i0:
        ensure(owner[C[pos]] > i0, "cycle vertex in an earlier part than i0")
        w.append(C[pos])
        pos = (pos + 1) % L
    v = C[pos]
    out, inn = D.out_masks, D.in_masks
    s = next(i for i, z in enumerate(w, start=1) if out[z] & X0)
    ws = w[s - 1]
    x = (out[ws] & X0 & -(out[ws] & X0)).bit_length() - 1
    if inn[ws] & X0:
        raise InternalConsistencyError(
            f"vertex {ws} has arcs both to and from part {i0}; the quotient colouring "
            "should have separated their colours"
        )
    ensure(s >= 2, "s must be at least 2 once the in-neighbour case is excluded")
    absorbed = w[:s]
    new_part = X0 | to_mask(absorbed)
    c0 = to_mask(z for z in P.parts[i0] if P.part_color[z] == 0) | to_mask(w[: s - 1])
    c1 = to_mask(z for z in P.parts[i0] if P.part_color[z] == 1) | (1 << ws)
    ensure(is_strongly_connected_mask(D, new_part), "enlarged part is not strongly connected")
    ensure(
        is_acyclic_mask(D, c0) and is_acyclic_mask(D, c1),
        "extended 2-colouring of the enlarged part is not acyclic",
    )
    return RepairContext(
        cycle=tuple(C),
        i0=i0,
        u=u,
        w=tuple(w),
        v=v,
        s=s,
        x=x,
        new_part=mask_to_set(new_part),
        new_coloring=(mask_to_set(c0), mask_to_set(c1)),
    )


def repair_step(D: Digraph, P: MaximalPartition, C, mode: str = "none",
                exact_limit: int = EXACT_LIMIT):
    """Enlarge the earliest part met by the monochromatic cycle ``C``.

    Parts before ``i0`` are kept, ``X_i0`` absorbs ``w_1..w_s`` (and, unless
    ``mode`` is ``"none"``, keeps growing), later parts are kept until the
    first one that lost a vertex; from there on the remainder is rebuilt.
    Returns ``(new_partition, context)``.
    """
    C = list(C)
    if not _is_cycle(D, C):
        raise InvalidInputError("C is not a directed cycle of D")
    if not P.is_valid() or P.digraph != D:
        raise InvalidInputError("partition is not valid for D")
    G = quotient_graph(D, P)
    # monochromatic under some lifting means: all vertices of C share
    # part colour and their parts share a quotient colour; we only need the
    # first condition plus pairwise non-adjacency of their parts in G.
    owner = P.part_of()
    if len({P.part_color[c] for c in C}) != 1:
        raise InvalidInputError("C is not monochromatic")
    cparts = sorted({owner[c] for c in C})
    if any(G.has_edge(a, b) for a, b in itertools.combinations(cparts, 2)):
        raise InvalidInputError("C is not monochromatic under any proper quotient colouring")

    ctx = analyze_cycle(D, P, C)
    parts, cols = _masks_from_partition(P)
    i0 = ctx.i0
    kept = parts[:i0]
    kept_cols = cols[:i0]
    before = 0
    for p in kept:
        before |= p
    R = D.all_mask & ~before
    X = to_mask(ctx.new_part)
    col = (to_mask(ctx.new_coloring[0]), to_mask(ctx.new_coloring[1]))
    X, col = _grow(D, R, X, col, mode, exact_limit)
    kept.append(X)
    kept_cols.append(col)
    used = before | X
    for p, c in zip(parts[i0 + 1:], cols[i0 + 1:]):
        if p & X:
            break
        kept.append(p)
        kept_cols.append(c)
        used |= p
    kept, kept_cols = _build_from(D, D.all_mask & ~used, kept, kept_cols, mode, exact_limit)
    newP = _partition_from_masks(D, kept, kept_cols)
    ensure(newP.is_valid(), "repair produced an invalid partition")
    return newP, ctx


# -- certification ---------------------------------------------------------------------


def decomposition_model(D: Digraph, P: MaximalPartition, G: Graph) -> StrongMinorModel:
    return StrongMinorModel(D, biorient(G), P.parts)


def certify_decomposition(D: Digraph, mode: str = "exact",
                          exact_limit: int = EXACT_LIMIT) -> DecompositionCertificate:
    """Partition, colour the quotient exactly, lift, and repair until acyclic."""
    P = build_partition(D, mode, exact_limit)
    history = [P.sizes()]
    repairs = []
    while True:
        G = quotient_graph(D, P)
        k, f_G = chromatic_number(G)
        colors = lift_coloring(D, P, f_G)
        C = find_monochromatic_cycle(D, colors)
        if C is None:
            break
        log.debug("repairing monochromatic cycle %s", C)
        P, ctx = repair_step(D, P, C, mode, exact_limit)
        repairs.append(ctx)
        ensure(P.sizes() > history[-1], "part sizes did not increase lexicographically")
        history.append(P.sizes())
    lifted = AcyclicColoring(D, colors, 2 * k)
    model = decomposition_model(D, P, G)
    ensure(verify_strong_model(model), "decomposition model failed verification")
    return DecompositionCertificate(
        digraph=D,
        partition=P,
        quotient=G,
        quotient_coloring=f_G,
        lifted=lifted,
        model=model,
        history=tuple(history),
        repairs=tuple(repairs),
    )


def verify_decomposition(cert: DecompositionCertificate) -> bool:
    D, P, G = cert.digraph, cert.partition, cert.quotient
    if P.digraph != D or not P.is_valid():
        return False
    if quotient_graph(D, P) != G:
        return False
    f = cert.quotient_coloring
    if f.graph != G or not is_proper_coloring(G, f.colors):
        return False
    if cert.lifted.colors != lift_coloring(D, P, f):
        return False
    if cert.lifted.k > 2 * f.k or find_monochromatic_cycle(D, cert.lifted.colors) is not None:
        return False
    if cert.model.host != D or cert.model.pattern != biorient(G):
        return False
    if cert.model.branch_sets != P.parts:
        return False
    return verify_strong_model(cert.model)


def assert_maximality(D: Digraph, P: MaximalPartition) -> bool:
    """Exhaustive check that no part can be enlarged inside what follows it."""
    parts = [to_mask(p) for p in P.parts]
    for i, X in enumerate(parts):
        rest = 0
        for p in parts[i:]:
            rest |= p
        free = list(iter_bits(rest & ~X))
        for size in range(1, len(free) + 1):
            for Z in itertools.combinations(free, size):
                Y = X | to_mask(Z)
                if is_strongly_connected_mask(D, Y) and two_dicoloring_mask(D, Y) is not None:
                    return False
    return True
