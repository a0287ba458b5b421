"""Certificate-producing algorithms for minors and colourings of digraphs."""

__version__ = "0.1.0"

from .digraph import Digraph, Graph, biorient, complete_digraph, digon_graph, underlying_graph  # noqa: E402
from .coloring import chromatic_number, dichromatic_number, find_monochromatic_cycle  # noqa: E402
from .decomposition import certify_decomposition  # noqa: E402
from .strong import find_strong_model, theorem1_pipeline  # noqa: E402
from .butterfly import corollary2_pipeline, extract_butterfly, has_butterfly_minor  # noqa: E402
from .subdivision import build_subdivision, corollary3_pipeline  # noqa: E402

__all__ = [
    "Digraph",
    "Graph",
    "biorient",
    "complete_digraph",
    "digon_graph",
    "underlying_graph",
    "chromatic_number",
    "dichromatic_number",
    "find_monochromatic_cycle",
    "certify_decomposition",
    "find_strong_model",
    "theorem1_pipeline",
    "corollary2_pipeline",
    "extract_butterfly",
    "has_butterfly_minor",
    "build_subdivision",
    "corollary3_pipeline",
]
