"""Minimum spanning tree with conflicting edge pairs.

Exact branch-and-bound, MST and greedy bounds, a flow-based MILP exporter,
a seeded instance generator and a benchmark harness.  The constrained
Kruskal and conflict scan kernels run compiled when the Cython extension
is built, and in pure Python otherwise (see ``mstc.BACKEND``).
"""
from ._backend import BACKEND
from .bnb import INFEASIBLE, OPTIMAL, TIME_LIMIT, SolveReport, SolveState, brute_force_oracle, solve
from .bounds import BoundResult, greedy_upper_bound, mst_lower_bound
from .conflicts import ConflictSet, Instance, is_feasible, propagate
from .errors import InputError, MstcError, ParseError
from .graph import Edge, Graph, SpanningTree, UnionFind, is_spanning_tree, kruskal_mst
from .instance_io import GeneratorSpec, generate, parse_instance, read_instance, write_instance
from .model import LpModel, build_flow_model, emit_lp, flow_certificate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "INFEASIBLE", "OPTIMAL", "TIME_LIMIT", "BoundResult", "ConflictSet", "Edge",
    "GeneratorSpec", "Graph", "InputError", "Instance", "LpModel", "MstcError", "ParseError",
    "SolveReport", "SolveState", "SpanningTree", "UnionFind", "brute_force_oracle",
    "build_flow_model", "emit_lp", "flow_certificate", "generate", "greedy_upper_bound",
    "is_feasible", "is_spanning_tree", "kruskal_mst", "mst_lower_bound", "parse_instance",
    "propagate", "read_instance", "solve", "write_instance",
]
