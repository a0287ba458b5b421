"""Minor-model witnesses and their verifiers."""
from __future__ import annotations

from dataclasses import dataclass

from .digraph import Digraph, Graph, is_strongly_connected_mask, reach_mask, to_mask
from .errors import InvalidInputError


@dataclass(frozen=True)
class StrongMinorModel:
    """Branch sets in ``host`` witnessing that it contains ``pattern`` as a strong minor.

    ``branch_sets[h]`` is the set of host vertices for pattern vertex ``h``.
    Host vertices outside every branch set are simply unused.
    """

    host: Digraph
    pattern: Digraph
    branch_sets: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "branch_sets", tuple(frozenset(int(v) for v in b) for b in self.branch_sets)
        )
        if len(self.branch_sets) != self.pattern.n:
            raise InvalidInputError("need exactly one branch set per pattern vertex")

    @property
    def masks(self) -> list:
        return [to_mask(b) for b in self.branch_sets]

    def used_vertices(self) -> frozenset:
        return frozenset().union(*self.branch_sets) if self.branch_sets else frozenset()

    def arc_count(self, a: int, b: int) -> int:
        """Number of host arcs from branch set ``a`` to branch set ``b``."""
        A, B = self.branch_sets[a], self.branch_sets[b]
        return sum(1 for u, v in self.host.arcs if u in A and v in B)

    def realizing_arcs(self, a: int, b: int) -> list:
        A, B = self.branch_sets[a], self.branch_sets[b]
        return sorted((u, v) for u, v in self.host.arcs if u in A and v in B)


def verify_strong_model(model: StrongMinorModel, strengthened: bool = False) -> bool:
    D, H = model.host, model.pattern
    masks = []
    seen = 0
    for b in model.branch_sets:
        if not b or any(not (0 <= v < D.n) for v in b):
            return False
        mask = to_mask(b)
        if mask & seen:
            return False
        seen |= mask
        if not is_strongly_connected_mask(D, mask):
            return False
        masks.append(mask)
    out = D.out_masks
    for a, b in H.arcs:
        if not any(out[u] & masks[b] for u in model.branch_sets[a]):
            return False
        if strengthened:
            # at least two arcs each way between the two sets
            if model.arc_count(a, b) < 2 or model.arc_count(b, a) < 2:
                return False
    return True


@dataclass(frozen=True)
class UndirectedMinorModel:
    host: Graph
    pattern: Graph
    branch_sets: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "branch_sets", tuple(frozenset(int(v) for v in b) for b in self.branch_sets)
        )
        if len(self.branch_sets) != self.pattern.n:
            raise InvalidInputError("need exactly one branch set per pattern vertex")


def verify_undirected_model(model: UndirectedMinorModel) -> bool:
    G, H = model.host, model.pattern
    adj = G.adj_masks
    masks = []
    seen = 0
    for b in model.branch_sets:
        if not b or any(not (0 <= v < G.n) for v in b):
            return False
        mask = to_mask(b)
        if mask & seen:
            return False
        seen |= mask
        if reach_mask(adj, mask & -mask, mask) != mask:
            return False
        masks.append(mask)
    for a, b in H.edges:
        if not any(adj[u] & masks[b] for u in model.branch_sets[a]):
            return False
    return True
