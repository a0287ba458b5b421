"""Search small digraphs for dichromatic number t+1 without a bidirected K_t minor."""
from __future__ import annotations

import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor

from .butterfly import has_butterfly_minor
from .coloring import is_k_dicolorable
from .digraph import Digraph, complete_digraph
from .errors import InvalidInputError
from .generators import generate, nonisomorphic_digraphs
from .strong import find_strong_model

log = logging.getLogger(__name__)


def worker_count() -> int:
    raw = os.environ.get("DIRMINOR_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InvalidInputError(f"DIRMINOR_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def evaluate(args):
    """``(qualifies, counterexample)`` for one candidate ``(D, t, minor)``."""
    D, t, minor = args
    if D.n < t + 1 or is_k_dicolorable(D, t) is not None:
        return False, False
    K = complete_digraph(t)
    if minor == "strong":
        found = find_strong_model(D, K) is not None
    else:
        found = has_butterfly_minor(D, K)
    return True, not found


def candidates(t, max_n, seed, exhaustive, trials):
    if exhaustive:
        for n in range(t + 1, max_n + 1):
            yield from nonisomorphic_digraphs(n)
        return
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(t + 1, max_n)
        p = rng.uniform(0.3, 0.95)
        yield generate("random-digraph", n=n, p=p, seed=rng.randrange(2**32))


def explore(t: int, max_n: int, seed: int = 0, exhaustive: bool = False, trials: int = 200,
            minor: str = "strong", workers: int = None) -> dict:
    if t < 1:
        raise InvalidInputError(f"t must be >= 1, got {t}")
    if minor not in ("strong", "butterfly"):
        raise InvalidInputError(f"minor must be 'strong' or 'butterfly', got {minor!r}")
    cands = list(candidates(t, max_n, seed, exhaustive, trials))
    jobs = [(D, t, minor) for D in cands]
    workers = workers or worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, jobs, chunksize=64))
    else:
        results = [evaluate(job) for job in jobs]
    qualifying = sum(1 for q, _ in results if q)
    found = sorted(
        (D for D, (_, bad) in zip(cands, results) if bad),
        key=lambda D: (D.n, D.sorted_arcs()),
    )
    log.info("checked %d digraphs, %d with dichromatic number >= %d", len(cands), qualifying, t + 1)
    return {
        "t": t,
        "max_n": max_n,
        "seed": seed,
        "exhaustive": exhaustive,
        "minor": minor,
        "checked": len(cands),
        "qualifying": qualifying,
        "counterexamples": found,
    }
