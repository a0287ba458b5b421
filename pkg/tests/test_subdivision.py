import pytest

from dirminor.digraph import Digraph, complete_digraph
from dirminor.errors import InvalidInputError
from dirminor.generators import random_inflation, subcubic_digraphs
from dirminor.models import StrongMinorModel
from dirminor.subdivision import (
    SubdivisionEmbedding,
    build_path_system,
    build_subdivision,
    choose_terminals,
    corollary3_pipeline,
    is_subcubic,
    reverse_path_system,
    threshold,
    verify_subdivision,
)

# host: directed triangle 0 -> 1 -> 2 -> 0 plus pendant arcs 3 -> 0, 1 -> 4, 2 -> 5
HOST = Digraph(6, frozenset({(0, 1), (1, 2), (2, 0), (3, 0), (1, 4), (2, 5)}))
# pattern: vertex 0 has one in-arc and two out-arcs
CLAW = Digraph(4, frozenset({(1, 0), (0, 2), (0, 3)}))
CLAW_MODEL = StrongMinorModel(HOST, CLAW, ({0, 1, 2}, {3}, {4}, {5}))


def arcs(*pairs):
    return frozenset(pairs)


def test_is_subcubic():
    assert is_subcubic(CLAW)
    assert not is_subcubic(complete_digraph(2))
    assert not is_subcubic(Digraph(4, arcs((0, 1), (0, 2), (0, 3))))
    assert not is_subcubic(Digraph(5, arcs((0, 1), (0, 2), (3, 0), (4, 0))))
    assert threshold(4) == 88


def test_claw_degree_three_case():
    ps = build_path_system(HOST, CLAW_MODEL, 0)
    assert not ps.reduced
    assert ps.branch_vertex == 1
    assert dict(ps.paths) == {(1, 0): (0, 1), (0, 2): (1,), (0, 3): (1, 2)}
    emb = build_subdivision(HOST, CLAW_MODEL)
    assert emb.branch_vertex == (1, 3, 4, 5)
    assert emb.path_for((1, 0)) == (3, 0, 1)
    assert emb.path_for((0, 3)) == (1, 2, 5)
    assert verify_subdivision(emb)


def test_reversed_claw_needs_reduction():
    model = StrongMinorModel(HOST.reverse(), CLAW.reverse(), CLAW_MODEL.branch_sets)
    ps = build_path_system(HOST.reverse(), model, 0)
    assert ps.reduced
    forward = build_path_system(HOST, CLAW_MODEL, 0)
    assert ps.branch_vertex == forward.branch_vertex
    assert reverse_path_system(ps).paths == forward.paths
    assert verify_subdivision(build_subdivision(HOST.reverse(), model))


def test_low_degree_cases():
    D = Digraph(4, arcs((0, 1), (1, 0), (1, 2), (2, 3), (3, 2)))
    F = Digraph(2, arcs((0, 1)))
    model = StrongMinorModel(D, F, ({0, 1}, {2, 3}))
    assert choose_terminals(model) == {(0, 1): (1, 2)}
    out_sys = build_path_system(D, model, 0)
    assert out_sys.branch_vertex == 1 and out_sys.degree == 1
    isolated = StrongMinorModel(D, Digraph(1), ({2, 3},))
    assert build_path_system(D, isolated, 0).branch_vertex == 2


def test_degree_two_cases():
    # directed path of three pattern vertices; middle one has an in- and an out-arc
    D = Digraph(5, arcs((0, 1), (1, 2), (2, 1), (2, 3), (3, 4)))
    F = Digraph(3, arcs((0, 1), (1, 2)))
    model = StrongMinorModel(D, F, ({0}, {1, 2}, {3, 4}))
    mid = build_path_system(D, model, 1)
    assert not mid.reduced and mid.branch_vertex == 1
    assert mid.path_for((1, 2)) == (1, 2)
    # two out-arcs only: solved via the reversed host
    F2 = Digraph(3, arcs((1, 0), (1, 2)))
    D2 = Digraph(4, arcs((1, 0), (1, 2), (2, 1), (2, 3)))
    m2 = StrongMinorModel(D2, F2, ({0}, {1, 2}, {3}))
    ps = build_path_system(D2, m2, 1)
    assert ps.reduced
    assert verify_subdivision(build_subdivision(D2, m2))


def test_verify_rejects_broken_embeddings():
    emb = build_subdivision(HOST, CLAW_MODEL)
    paths = dict(emb.arc_paths)
    shared = SubdivisionEmbedding(HOST, CLAW, (0, 3, 4, 5), emb.arc_paths)
    assert not verify_subdivision(shared)
    paths[(0, 3)] = (1, 5)
    missing_arc = SubdivisionEmbedding(HOST, CLAW, emb.branch_vertex, tuple(sorted(paths.items())))
    assert not verify_subdivision(missing_arc)
    dup = SubdivisionEmbedding(HOST, CLAW, (1, 1, 4, 5), emb.arc_paths)
    assert not verify_subdivision(dup)
    short = SubdivisionEmbedding(HOST, CLAW, emb.branch_vertex, emb.arc_paths[:2])
    assert not verify_subdivision(short)


def test_non_subcubic_and_foreign_models_rejected():
    with pytest.raises(InvalidInputError):
        build_subdivision(complete_digraph(2), StrongMinorModel(
            complete_digraph(2), complete_digraph(2), ({0}, {1})))
    with pytest.raises(InvalidInputError):
        build_path_system(HOST.reverse(), CLAW_MODEL, 0)
    with pytest.raises(InvalidInputError):
        corollary3_pipeline(HOST, complete_digraph(2))


def test_all_small_patterns_on_inflations():
    reduced = 0
    for F in subcubic_digraphs(4):
        for seed in range(4):
            D, branch = random_inflation(F, seed=seed, max_size=4, extra_vertices=1, noise=0.05)
            systems = []
            emb = build_subdivision(D, StrongMinorModel(D, F, branch), systems=systems)
            assert verify_subdivision(emb)
            reduced += sum(ps.reduced for ps in systems)
    assert reduced > 0


def test_subdivision_pipeline():
    emb = corollary3_pipeline(HOST, CLAW)
    assert emb is not None and verify_subdivision(emb)
    assert corollary3_pipeline(Digraph(3, arcs((0, 1))), Digraph(3, arcs((0, 1), (1, 2)))) is None
    cycle = Digraph(3, arcs((0, 1), (1, 2), (2, 0)))
    emb = corollary3_pipeline(complete_digraph(4), cycle)
    assert verify_subdivision(emb)
