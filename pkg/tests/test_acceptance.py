"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""
import itertools
import json
import random
import subprocess
import sys
import time

import oracles
from helpers import random_digraph, record
from dirminor.butterfly import (
    CONTRACT_ARC,
    apply_step,
    extract_butterfly,
    has_butterfly_minor,
    is_contractible,
    verify_trace,
)
from dirminor.coloring import chromatic_number, dichromatic_number, find_monochromatic_cycle
from dirminor.decomposition import assert_maximality, certify_decomposition
from dirminor.digraph import Digraph, biorient, complete_digraph
from dirminor.fileio import (
    butterfly_document,
    decomposition_document,
    dicoloring_document,
    strong_model_document,
    subdivision_document,
)
from dirminor.generators import (
    generate,
    lower_bound_butterfly,
    nonisomorphic_digraphs,
    random_inflation,
    subcubic_digraphs,
)
from dirminor.models import StrongMinorModel, verify_strong_model
from dirminor.strong import find_strong_model, theorem1_pipeline
from dirminor.subdivision import build_subdivision, verify_subdivision

DENSITIES = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]

# certificates gathered by the other criteria, re-verified by criterion 9
EMITTED = []


def test_criterion_1_oracle_agreement():
    start = time.perf_counter()
    rng = random.Random(101)
    corpus = [D for n in range(6) for D in nonisomorphic_digraphs(n)]
    corpus += [random_digraph(rng, rng.randint(1, 8), rng.random()) for _ in range(300)]
    bad = [D for D in corpus if dichromatic_number(D)[0] != oracles.dichromatic_by_partitions(D.n, D.arcs)]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record(1, ok, f"{len(corpus)} digraphs, {len(bad)} disagreements, {elapsed:.1f}s (< 300s)")
    assert ok


def test_criterion_2_biorientation_identity():
    rng = random.Random(202)
    bad = 0
    for _ in range(100):
        G = generate("random-graph", n=rng.randint(1, 9), p=rng.random(), seed=rng.randrange(2**32))
        if dichromatic_number(biorient(G))[0] != chromatic_number(G)[0]:
            bad += 1
    record(2, bad == 0, f"100 graphs, {bad} mismatches")
    assert bad == 0


def _check_certificate(D, cert, problems):
    chi = chromatic_number(cert.quotient)[0]
    if cert.k != chi:
        problems.append("quotient colouring not optimal")
    if find_monochromatic_cycle(D, cert.lifted.colors) is not None:
        problems.append("lifted colouring has a monochromatic cycle")
    if len(set(cert.lifted.colors)) > 2 * chi:
        problems.append("lifted colouring uses too many colours")
    if not verify_strong_model(cert.model) or cert.model.pattern != biorient(cert.quotient):
        problems.append("quotient model invalid")
    if dichromatic_number(D)[0] > 2 * chi:
        problems.append("dichromatic number above 2 chi(G)")
    hist = cert.history
    if any(not (a < b) for a, b in zip(hist, hist[1:])):
        problems.append("history not lexicographically increasing")


def test_criterion_3_decomposition_certificates():
    start = time.perf_counter()
    rng = random.Random(303)
    problems = []
    repairs = maximal_checked = 0
    for i in range(500):
        n = rng.randint(1, 12)
        p = DENSITIES[i % len(DENSITIES)]
        D = random_digraph(rng, n, p)
        cert = certify_decomposition(D)
        _check_certificate(D, cert, problems)
        # singleton seeding without growth drives the repair loop hard
        raw = certify_decomposition(D, mode="none")
        _check_certificate(D, raw, problems)
        repairs += len(raw.repairs) + len(cert.repairs)
        if n <= 10:
            maximal_checked += 1
            if not assert_maximality(D, cert.partition):
                problems.append("partition not maximal")
        if i % 50 == 0:
            EMITTED.append(decomposition_document(cert))
            EMITTED.append(decomposition_document(raw))
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 900
    record(3, ok, f"500 digraphs, {repairs} repairs, {maximal_checked} maximality checks, "
                  f"{len(problems)} problems, {elapsed:.1f}s (< 900s)")
    assert ok, problems[:5]


def _perturbed_dense_instances(rng, want):
    found = []
    attempts = 0
    while len(found) < want and attempts < 20 * want:
        attempts += 1
        n = rng.randint(6, 12)
        G = generate("random-graph", n=n, p=rng.uniform(0.65, 0.95), seed=rng.randrange(2**32))
        if chromatic_number(G)[0] < 5:
            continue
        arcs = set(biorient(G).arcs)
        # break a few digons and add stray arcs between non-adjacent pairs
        for u, v in rng.sample(sorted(G.edges), min(3, len(G.edges))):
            arcs.discard((u, v) if rng.random() < 0.5 else (v, u))
        for u, v in itertools.permutations(range(n), 2):
            if (u, v) not in arcs and (v, u) not in arcs and rng.random() < 0.3:
                arcs.add((u, v))
        D = Digraph(n, frozenset(arcs))
        if dichromatic_number(D)[0] >= 5:
            found.append(D)
    return found


def test_criterion_4_forced_strong_k3():
    rng = random.Random(404)
    instances = _perturbed_dense_instances(rng, 60)
    failures = 0
    for i, D in enumerate(instances):
        model = theorem1_pipeline(D, 3)
        if model is None or not verify_strong_model(model) or model.pattern != complete_digraph(3):
            failures += 1
        elif i % 10 == 0:
            EMITTED.append(strong_model_document(model))
    ok = len(instances) >= 50 and failures == 0
    record(4, ok, f"{len(instances)} instances with dichromatic number >= 5 (need >= 50), {failures} failures")
    assert ok


def _steps_contractible(trace):
    D = trace.initial
    for step in trace.steps:
        if step[0] == CONTRACT_ARC and not is_contractible(D, step[1]):
            return False
        D, _ = apply_step(D, step)
    return True


def test_criterion_5_butterfly_extraction():
    failures = 0
    contractions = 0
    for t in (1, 2, 3):
        H = complete_digraph(2 * t)
        for seed in range(100):
            D, branch = random_inflation(H, seed=1000 * t + seed, max_size=4,
                                         extra_vertices=seed % 3, noise=0.05)
            trace = extract_butterfly(StrongMinorModel(D, H, branch))
            contractions += sum(1 for s in trace.steps if s[0] == CONTRACT_ARC)
            if not (_steps_contractible(trace) and verify_trace(trace, complete_digraph(t))):
                failures += 1
            if seed % 25 == 0:
                EMITTED.append(butterfly_document(trace, t))
    record(5, failures == 0, f"300 inflations, {contractions} contractions, {failures} failures")
    assert failures == 0


def test_criterion_6_butterfly_lower_bound():
    start = time.perf_counter()
    D = lower_bound_butterfly(3)
    k, witness = dichromatic_number(D)
    free = not has_butterfly_minor(D, complete_digraph(3))
    # independent labelled search over all delete/contract sequences
    oracle_free = not oracles.butterfly_minor_bfs(D.n, D.arcs, 3, complete_digraph(3).arcs)
    elapsed = time.perf_counter() - start
    EMITTED.append(dicoloring_document(witness))
    ok = k == 3 and free and oracle_free and elapsed < 600
    record(6, ok, f"dichromatic number {k}, butterfly K3-free {free} (oracle {oracle_free}), "
                  f"{elapsed:.1f}s (< 600s)")
    assert ok


def test_criterion_7_subdivisions():
    failures = 0
    three_path = 0
    patterns = subcubic_digraphs(4)
    for F in patterns:
        for seed in range(25):
            D, branch = random_inflation(F, seed=seed, max_size=4, extra_vertices=seed % 2, noise=0.05)
            systems = []
            emb = build_subdivision(D, StrongMinorModel(D, F, branch), systems=systems)
            three_path += sum(1 for ps in systems if ps.degree == 3)
            if not verify_subdivision(emb):
                failures += 1
            if seed == 0 and F.n == 4:
                EMITTED.append(subdivision_document(emb))
    ok = failures == 0 and three_path >= 50
    record(7, ok, f"{len(patterns)} patterns x 25 inflations, {three_path} degree-3 systems "
                  f"(need >= 50), {failures} failures")
    assert ok


def test_criterion_8_strengthened_sharpness():
    K4, K3 = complete_digraph(4), complete_digraph(3)
    plain = find_strong_model(K4, K3)
    # every assignment of the four vertices to three sets or "unused"
    strengthened = []
    for labels in itertools.product(range(4), repeat=4):
        sets = [{v for v in range(4) if labels[v] == i} for i in range(3)]
        if all(sets) and verify_strong_model(StrongMinorModel(K4, K3, sets), strengthened=True):
            strengthened.append(sets)
    brute = oracles.strengthened_model_brute(4, K4.arcs, 3)
    ok = plain is not None and verify_strong_model(plain) and not strengthened and brute is None
    record(8, ok, f"strong model found: {plain is not None}, strengthened models: {len(strengthened)}")
    if plain is not None:
        EMITTED.append(strong_model_document(plain))
    assert ok


def test_criterion_9_certificates_reverify(tmp_path):
    if not EMITTED:
        # run standalone: produce a small set of certificates here
        D = generate("random-digraph", n=9, p=0.5, seed=9)
        EMITTED.append(decomposition_document(certify_decomposition(D)))
        EMITTED.append(dicoloring_document(dichromatic_number(D)[1]))
        EMITTED.append(strong_model_document(theorem1_pipeline(complete_digraph(6), 3)))
    paths = []
    for i, doc in enumerate(EMITTED):
        path = tmp_path / f"cert{i:03d}.json"
        path.write_text(doc.to_json())
        paths.append(str(path))
    proc = subprocess.run([sys.executable, "-m", "dirminor", "verify", *paths],
                          capture_output=True, text=True)
    report = json.loads(proc.stdout)
    verified = sum(1 for r in report["results"] if r["verified"])
    kinds = sorted({r["kind"] for r in report["results"]})
    ok = proc.returncode == 0 and verified == len(paths)
    record(9, ok, f"{verified}/{len(paths)} certificates re-verified in a fresh process ({', '.join(kinds)})")
    assert ok
