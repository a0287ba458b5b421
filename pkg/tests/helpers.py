"""Hypothesis strategies and small builders shared by the tests."""
import random

from hypothesis import strategies as st

from dirminor.digraph import Digraph, Graph


@st.composite
def digraphs(draw, max_n=7, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Digraph(n, frozenset(chosen))


@st.composite
def graphs(draw, max_n=7, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, frozenset(chosen))


def random_digraph(rng, n, p):
    return Digraph(n, frozenset((u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


def record(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed
