"""Deterministic generators for digraphs, graphs and model inflations."""
from __future__ import annotations

import itertools
import random

from .digraph import Digraph, Graph, biorient, canonical_form, complete_digraph
from .errors import InvalidInputError

KINDS = (
    "complete",
    "bidirected-complete",
    "random-digraph",
    "random-graph",
    "random-tournament",
    "directed-cycle",
    "bidirected-cycle",
    "lower-bound-butterfly",
)


def _check_p(p):
    if p is None or not (0.0 <= p <= 1.0):
        raise InvalidInputError(f"probability must lie in [0, 1], got {p!r}")


def _check_n(n):
    if n is None or n < 0:
        raise InvalidInputError(f"vertex count must be a non-negative integer, got {n!r}")


def lower_bound_butterfly(t: int) -> Digraph:
    """Biorientation of K_{t+2} with the 5-cycle 0-1-2-3-4-0 removed."""
    if t < 3:
        raise InvalidInputError(f"lower_bound_butterfly needs t >= 3, got {t}")
    n = t + 2
    removed = {frozenset((i, (i + 1) % 5)) for i in range(5)}
    edges = [
        (u, v) for u, v in itertools.combinations(range(n), 2) if frozenset((u, v)) not in removed
    ]
    return biorient(Graph(n, frozenset(edges)))


def generate(kind: str, n: int = None, p: float = None, t: int = None, seed=None):
    """Build a member of the named family; output is a pure function of the arguments."""
    rng = random.Random(seed)
    if kind == "lower-bound-butterfly":
        if t is None:
            raise InvalidInputError("lower-bound-butterfly needs t")
        return lower_bound_butterfly(t)
    _check_n(n)
    if kind == "complete":
        return Graph(n, frozenset(itertools.combinations(range(n), 2)))
    if kind == "bidirected-complete":
        return complete_digraph(n)
    if kind == "random-digraph":
        _check_p(p)
        arcs = [
            (u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p
        ]
        return Digraph(n, frozenset(arcs))
    if kind == "random-graph":
        _check_p(p)
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
        return Graph(n, frozenset(edges))
    if kind == "random-tournament":
        arcs = [
            (u, v) if rng.random() < 0.5 else (v, u)
            for u, v in itertools.combinations(range(n), 2)
        ]
        return Digraph(n, frozenset(arcs))
    if kind == "directed-cycle":
        if n < 2:
            raise InvalidInputError("directed-cycle needs n >= 2")
        return Digraph(n, frozenset((i, (i + 1) % n) for i in range(n)))
    if kind == "bidirected-cycle":
        if n < 3:
            raise InvalidInputError("bidirected-cycle needs n >= 3")
        return biorient(Graph(n, frozenset((i, (i + 1) % n) for i in range(n))))
    raise InvalidInputError(f"unknown generator kind {kind!r}; expected one of {KINDS}")


def random_strong_arcs(vertices, rng, p=0.3):
    """Arcs making ``vertices`` strongly connected: a random spanning cycle plus noise."""
    vertices = list(vertices)
    if len(vertices) < 2:
        return set()
    order = vertices[:]
    rng.shuffle(order)
    arcs = {(order[i], order[(i + 1) % len(order)]) for i in range(len(order))}
    for u in vertices:
        for v in vertices:
            if u != v and rng.random() < p:
                arcs.add((u, v))
    return arcs


def random_inflation(H: Digraph, seed=None, max_size=4, inner_p=0.3, extra_vertices=0, noise=0.0):
    """Random digraph containing a strong ``H``-model, and that model's branch sets.

    Each pattern vertex becomes a random strongly connected digraph on
    ``1..max_size`` vertices, each pattern arc is realised by one random host
    arc.  Labels are shuffled.  Returns ``(D, branch_sets)``.
    """
    rng = random.Random(seed)
    sizes = [rng.randint(1, max_size) for _ in range(H.n)]
    total = sum(sizes) + extra_vertices
    labels = list(range(total))
    rng.shuffle(labels)
    branch = []
    pos = 0
    for size in sizes:
        branch.append(labels[pos:pos + size])
        pos += size
    arcs = set()
    for part in branch:
        arcs |= random_strong_arcs(part, rng, inner_p)
    for a, b in sorted(H.arcs):
        arcs.add((rng.choice(branch[a]), rng.choice(branch[b])))
    if noise:
        for u in range(total):
            for v in range(total):
                if u != v and rng.random() < noise:
                    arcs.add((u, v))
    return Digraph(total, frozenset(arcs)), tuple(frozenset(b) for b in branch)


# -- exhaustive enumeration ----------------------------------------------------


def nonisomorphic_digraphs(n: int) -> list:
    """One representative per isomorphism class of digraphs on ``n`` vertices.

    Built by vertex augmentation: every class on ``n`` vertices arises from a
    class on ``n-1`` vertices by attaching a new vertex.
    """
    if n == 0:
        return [Digraph(0)]
    classes = {canonical_form(Digraph(0)): Digraph(0)}
    for size in range(1, n + 1):
        new = size - 1
        nxt = {}
        for D in classes.values():
            base = list(D.arcs)
            # per old vertex: 0 none, 1 old->new, 2 new->old, 3 both
            for pattern in itertools.product(range(4), repeat=new):
                arcs = list(base)
                for v, code in enumerate(pattern):
                    if code & 1:
                        arcs.append((v, new))
                    if code & 2:
                        arcs.append((new, v))
                candidate = Digraph(size, frozenset(arcs))
                key = canonical_form(candidate)
                if key not in nxt:
                    nxt[key] = candidate
        classes = nxt
    return [classes[k] for k in sorted(classes)]


def subcubic_digraphs(max_n: int) -> list:
    """All subcubic digraphs (orientations) on ``1..max_n`` vertices up to isomorphism."""
    from .subdivision import is_subcubic

    found = {}
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for choice in itertools.product(range(3), repeat=len(pairs)):
            arcs = []
            for (u, v), c in zip(pairs, choice):
                if c == 1:
                    arcs.append((u, v))
                elif c == 2:
                    arcs.append((v, u))
            F = Digraph(n, frozenset(arcs))
            if not is_subcubic(F):
                continue
            key = canonical_form(F)
            if key not in found:
                found[key] = F
    return [found[k] for k in sorted(found)]
