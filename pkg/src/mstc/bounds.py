"""Conflict-relaxed lower bound and a greedy conflict-aware upper bound."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ._backend import kernels
from .conflicts import Instance, is_feasible, propagate
from .graph import SpanningTree, edge_status
from .rng import SplitMix64

LOWER = "lower"
UPPER = "upper"

DEFAULT_RESTARTS = 32


@dataclass(frozen=True)
class BoundResult:
    value: int
    kind: str
    witness: Optional[SpanningTree] = None


def mst_lower_bound(
    instance: Instance, forced_in: Iterable[int] = (), forced_out: Iterable[int] = ()
) -> Optional[BoundResult]:
    """Cost of the constrained MST with conflicts dropped.

    Forced-in edges push their conflicting edges out first.  ``None`` means
    no spanning tree respects the forcing, which proves the node infeasible.
    """
    forced_in = frozenset(forced_in)
    graph = instance.graph
    graph.check_ids(forced_in)
    graph.check_ids(forced_out)
    closed, clash = propagate(instance, forced_in, forced_out)
    if clash:
        return None
    eu, ev = graph.endpoints
    ids = kernels.kruskal(graph.n, eu, ev, graph.sorted_order, edge_status(graph.m, forced_in, closed))
    if ids is None:
        return None
    tree = SpanningTree.from_ids(graph, ids)
    return BoundResult(tree.total_cost, LOWER, tree)


def _perturb(order: list[int], costs: np.ndarray, rng: SplitMix64) -> None:
    """Swap one adjacent pair in place, preferring pairs of equal cost."""
    if len(order) < 2:
        return
    ties = [k for k in range(len(order) - 1) if costs[order[k]] == costs[order[k + 1]]]
    k = ties[rng.below(len(ties))] if ties else rng.below(len(order) - 1)
    order[k], order[k + 1] = order[k + 1], order[k]


def greedy_upper_bound(
    instance: Instance, restarts: int = DEFAULT_RESTARTS, seed: int = 0
) -> Optional[BoundResult]:
    """Conflict-aware Kruskal with perturbed restarts.

    The first pass scans edges by ``(cost, id)`` and skips any edge that
    conflicts with one already taken.  If that gets stuck, restart ``r``
    (``r = 0 .. restarts-1``) swaps one more adjacent pair of the order, using
    ``SplitMix64(seed + r)``; swaps accumulate across restarts.  ``None`` is
    not an infeasibility proof.
    """
    graph = instance.graph
    eu, ev = graph.endpoints
    ptr, idx = instance.conflicts.csr
    order = graph.sorted_order
    ids = kernels.greedy_kruskal(graph.n, eu, ev, order, ptr, idx)
    if ids is None:
        work = order.tolist()
        costs = graph.costs
        for r in range(restarts):
            _perturb(work, costs, SplitMix64(seed + r))
            ids = kernels.greedy_kruskal(graph.n, eu, ev, np.asarray(work, dtype=np.int64), ptr, idx)
            if ids is not None:
                break
    if ids is None:
        return None
    tree = SpanningTree.from_ids(graph, ids)
    assert is_feasible(instance, tree).feasible
    return BoundResult(tree.total_cost, UPPER, tree)
