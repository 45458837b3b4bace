"""Contextual-valuation figures of merit for Kochen-Specker vector sets."""

from .catalog import BUILTIN_NAMES, VectorSet, load_builtin, parse_vector_set, serialize_vector_set
from .exact import ExactScalar, inner_product
from .graph import OrthoGraph, build_graph, clique_number, disjoint_union, enumerate_contexts
from .solver import (
    Label,
    SolveResult,
    brute_force_qs,
    ks_noncontextually_colorable,
    max_independent_set,
    min_context_transversal,
    solve_qs_exact,
    solve_qs_heuristic,
    triangle_free_bound,
    validate_labeling,
)

__version__ = "0.1.0"
