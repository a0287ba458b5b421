import pytest
from hypothesis import given, settings, strategies as st

import oracles
from helpers import digraphs
from dirminor.butterfly import (
    CONTRACT_ARC,
    DELETE_ARC,
    DELETE_VERTEX,
    ButterflyTrace,
    build_arborescences,
    contract,
    corollary2_pipeline,
    extract_butterfly,
    has_butterfly_minor,
    is_contractible,
    pair_branch_sets,
    replay,
    verify_trace,
)
from dirminor.digraph import Digraph, are_isomorphic, complete_digraph
from dirminor.errors import ContractViolationError, InvalidInputError, UnsupportedParameterError
from dirminor.generators import generate, lower_bound_butterfly, random_inflation
from dirminor.models import StrongMinorModel

CYCLE3 = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))


def test_contractible_examples():
    assert is_contractible(Digraph(2, frozenset({(0, 1)})), (0, 1))
    for e in CYCLE3.arcs:
        assert is_contractible(CYCLE3, e)
    # 0 has out-neighbours 1, 2 and 2 has in-neighbours 0, 1
    D = Digraph(3, frozenset({(0, 1), (0, 2), (1, 2)}))
    assert not is_contractible(D, (0, 2))
    assert is_contractible(D, (0, 1))
    with pytest.raises(InvalidInputError):
        is_contractible(D, (2, 0))


def test_contract_examples():
    merged, mapping = contract(CYCLE3, (0, 1))
    assert merged == complete_digraph(2)
    assert mapping == [0, 0, 1]
    digon, _ = contract(complete_digraph(2), (0, 1))
    assert digon == Digraph(1)
    D = Digraph(3, frozenset({(0, 1), (0, 2), (1, 2)}))
    with pytest.raises(ContractViolationError):
        contract(D, (0, 2))


def test_replay_and_verify():
    steps = ((CONTRACT_ARC, (0, 1)), (DELETE_ARC, (1, 0)))
    final, prov = replay(CYCLE3, steps)
    assert final == Digraph(2, frozenset({(0, 1)}))
    assert prov == (frozenset({0, 1}), frozenset({2}))
    trace = ButterflyTrace(CYCLE3, steps, final, prov)
    assert verify_trace(trace)
    assert verify_trace(trace, Digraph(2, frozenset({(1, 0)})))
    assert not verify_trace(trace, complete_digraph(2))
    bogus = ButterflyTrace(CYCLE3, steps, complete_digraph(2), prov)
    assert not verify_trace(bogus)


def test_replay_rejects_illegal_contraction():
    D = Digraph(3, frozenset({(0, 1), (0, 2), (1, 2)}))
    trace = ButterflyTrace(D, ((CONTRACT_ARC, (0, 2)),), Digraph(2), ())
    assert not verify_trace(trace)
    with pytest.raises(InvalidInputError):
        replay(D, ((DELETE_VERTEX, 5),))


def test_pairing_is_by_minimum_vertex():
    D = complete_digraph(4)
    model = StrongMinorModel(D, complete_digraph(4), ({3}, {1}, {0}, {2}))
    assert pair_branch_sets(model) == [(frozenset({0}), frozenset({1})), (frozenset({2}), frozenset({3}))]


def test_arborescences_span_their_sets():
    for seed in range(10):
        D, branch = random_inflation(complete_digraph(4), seed=seed, max_size=4)
        model = StrongMinorModel(D, complete_digraph(4), branch)
        for pair in build_arborescences(model):
            assert len(pair.in_tree) == len(pair.minus) - 1
            assert len(pair.out_tree) == len(pair.plus) - 1
            assert D.has_arc(pair.root_minus, pair.root_plus)
            for a, b in pair.arcs():
                assert D.has_arc(a, b)


def test_extract_requires_even_clique_model():
    K3 = complete_digraph(3)
    with pytest.raises(InvalidInputError):
        extract_butterfly(StrongMinorModel(K3, K3, ({0}, {1}, {2})))


@pytest.mark.parametrize("t", [1, 2, 3])
def test_extract_from_complete_and_inflations(t):
    H = complete_digraph(2 * t)
    trace = extract_butterfly(StrongMinorModel(H, H, tuple({v} for v in range(2 * t))))
    assert verify_trace(trace, complete_digraph(t))
    for seed in range(8):
        D, branch = random_inflation(H, seed=seed, max_size=3, extra_vertices=2, noise=0.05)
        trace = extract_butterfly(StrongMinorModel(D, H, branch))
        assert verify_trace(trace, complete_digraph(t))
        assert trace.final.n == t
        assert sum(len(p) for p in trace.provenance) == sum(len(b) for b in branch)


def test_has_butterfly_minor_examples():
    K2 = complete_digraph(2)
    assert has_butterfly_minor(CYCLE3, K2)
    assert not has_butterfly_minor(Digraph(3, frozenset({(0, 1), (1, 2)})), K2)
    assert has_butterfly_minor(complete_digraph(4), complete_digraph(3))


def test_bioriented_five_cycle_has_no_butterfly_k3():
    D = lower_bound_butterfly(3)
    assert not has_butterfly_minor(D, complete_digraph(3))
    assert has_butterfly_minor(D, complete_digraph(2))


PATTERNS = [
    Digraph(1),
    Digraph(2, frozenset({(0, 1)})),
    complete_digraph(2),
    CYCLE3,
    Digraph(3, frozenset({(0, 1), (1, 2)})),
    Digraph(3, frozenset({(0, 1), (0, 2)})),
]


@settings(max_examples=80, deadline=None)
@given(digraphs(max_n=4), st.sampled_from(PATTERNS))
def test_butterfly_search_matches_bfs_oracle(D, H):
    assert has_butterfly_minor(D, H) == oracles.butterfly_minor_bfs(D.n, D.arcs, H.n, H.arcs)


def test_butterfly_pipeline():
    trace = corollary2_pipeline(complete_digraph(7), 2)
    assert trace is not None and verify_trace(trace, complete_digraph(2))
    assert verify_trace(corollary2_pipeline(complete_digraph(3), 1), Digraph(1))
    # dichromatic number 2 is below the forcing bound for t = 1
    assert corollary2_pipeline(CYCLE3, 1) is None
    assert corollary2_pipeline(Digraph(3, frozenset({(0, 1)})), 2) is None
    with pytest.raises(UnsupportedParameterError):
        corollary2_pipeline(complete_digraph(3), 4)


def test_extracted_final_is_isomorphic_to_clique():
    H = complete_digraph(6)
    D, branch = random_inflation(H, seed=99, max_size=4)
    trace = extract_butterfly(StrongMinorModel(D, H, branch))
    assert are_isomorphic(trace.final, complete_digraph(3)) is not None
    assert generate("bidirected-complete", n=3) == trace.final
