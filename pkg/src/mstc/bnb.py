"""Exact best-first branch-and-bound over conflict pairs, and a brute-force oracle.

Each node fixes some edges in and some out.  Its bound is the constrained
MST with conflicts ignored.  When that tree violates conflicts, the search
branches on the violated pair ``{e, f}`` with the largest combined cost:
one child drops ``e``, the other keeps ``e`` (which pushes every edge in
conflict with ``e``, ``f`` included, out of the child).
"""
from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from ._backend import BACKEND, kernels
from .conflicts import Instance, is_feasible, propagate
from .errors import InputError
from .graph import SpanningTree, UnionFind, edge_status, is_spanning_tree

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
TIME_LIMIT = "TimeLimit"

DEFAULT_TIME_LIMIT = 5010.0
DEFAULT_NODE_LIMIT = 50_000_000
DEFAULT_DFS_THRESHOLD = 1_000_000
ORACLE_MAX_EDGES = 20


@dataclass(frozen=True)
class SolveState:
    forced_in: frozenset
    forced_out: frozenset
    local_lb: int
    depth: int


@dataclass
class SolveReport:
    status: str
    lower_bound: Optional[int]
    upper_bound: Optional[int]
    incumbent: Optional[SpanningTree]
    elapsed_seconds: float
    nodes_explored: int
    time_limit_seconds: float
    metadata: dict = field(default_factory=dict)

    @property
    def cost(self) -> Optional[int]:
        return self.incumbent.total_cost if self.incumbent else None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["incumbent"] = list(self.incumbent.edge_ids) if self.incumbent else None
        d["cost"] = self.cost
        return d

    def comparable(self) -> dict:
        """Everything except wall-clock time, for determinism checks."""
        d = self.to_dict()
        d.pop("elapsed_seconds")
        return d


def _branch_pair(violations, pairs, costs) -> tuple[int, int]:
    best = None
    best_key = None
    for k in violations:
        a, b = pairs[k]
        key = -(costs[a] + costs[b])
        if best_key is None or key < best_key:
            best, best_key = (a, b), key
    a, b = best
    # keep/drop the costlier member; smaller id on ties
    return (a, b) if costs[a] >= costs[b] else (b, a)


def solve(
    instance: Instance,
    time_limit_seconds: float = DEFAULT_TIME_LIMIT,
    initial_ub: Optional[int] = None,
    *,
    incumbent: Optional[SpanningTree] = None,
    node_limit: int = DEFAULT_NODE_LIMIT,
    dfs_threshold: int = DEFAULT_DFS_THRESHOLD,
    progress: Optional[Callable[[int, Optional[int], Optional[int]], None]] = None,
    progress_interval: float = 5.0,
) -> SolveReport:
    """Solve to optimality, prove infeasibility, or stop at the time limit.

    ``initial_ub`` is a cost believed achievable; nodes whose bound exceeds it
    are pruned.  ``incumbent`` seeds the search with a known feasible tree.
    If the search exhausts without finding a tree after pruning on a bare
    ``initial_ub``, that value was wrong and the search reruns without it.
    """
    if not time_limit_seconds > 0:
        raise InputError(f"time limit must be positive, got {time_limit_seconds}")
    start = time.perf_counter()
    deadline = start + time_limit_seconds
    graph = instance.graph
    m = graph.m
    costs = graph.costs.tolist()
    eu, ev = graph.endpoints
    order = graph.sorted_order
    pa, pb = instance.conflicts.arrays
    pairs = instance.conflicts.pairs

    best_tree: Optional[SpanningTree] = None
    if incumbent is not None:
        if not (is_spanning_tree(graph, incumbent.edge_ids) and is_feasible(instance, incumbent).feasible):
            raise InputError("seed incumbent is not a conflict-free spanning tree")
        best_tree = SpanningTree.from_ids(graph, incumbent.edge_ids)

    nodes = 0
    cut_by_initial_ub = False
    dive_switches = 0
    max_open = 0

    def prunable(lb: int) -> bool:
        nonlocal cut_by_initial_ub
        if best_tree is not None and lb >= best_tree.total_cost:
            return True
        if initial_ub is not None and lb > initial_ub:
            if best_tree is None:
                cut_by_initial_ub = True
            return True
        return False

    def evaluate(fin: frozenset, fout: frozenset, depth: int):
        nonlocal nodes, best_tree
        nodes += 1
        closed, clash = propagate(instance, fin, fout)
        if clash:
            return None
        ids = kernels.kruskal(graph.n, eu, ev, order, edge_status(m, fin, closed))
        if ids is None:
            return None
        cost = sum(map(costs.__getitem__, ids))
        if prunable(cost):
            return None
        violations = kernels.violated_pairs(m, ids, pa, pb)
        if not violations:
            if best_tree is None or cost < best_tree.total_cost:
                best_tree = SpanningTree.from_ids(graph, ids)
            return None
        return SolveState(fin, closed, cost, depth), _branch_pair(violations, pairs, costs)

    heap: list = []
    stack: list = []
    counter = itertools.count()
    stopped_by = "exhausted"
    next_report = start + progress_interval

    root = evaluate(frozenset(), frozenset(), 0)
    if root is not None:
        state, pair = root
        heapq.heappush(heap, (state.local_lb, state.depth, next(counter), state, pair))

    while heap or stack:
        now = time.perf_counter()
        if now >= deadline:
            stopped_by = "time_limit"
            break
        if nodes >= node_limit:
            stopped_by = "node_limit"
            break
        if progress is not None and now >= next_report:
            next_report = now + progress_interval
            open_lbs = [x[0] for x in heap] + [x[0] for x in stack]
            progress(nodes, min(open_lbs), best_tree.total_cost if best_tree else None)
        max_open = max(max_open, len(heap) + len(stack))

        if stack:
            _, _, _, state, (e, _f) = stack.pop()
        else:
            _, _, _, state, (e, _f) = heapq.heappop(heap)
        if prunable(state.local_lb):
            continue
        children = (
            (state.forced_in, state.forced_out | {e}),
            (state.forced_in | {e}, state.forced_out),
        )
        for fin, fout in children:
            child = evaluate(fin, fout, state.depth + 1)
            if child is None:
                continue
            cstate, cpair = child
            entry = (cstate.local_lb, cstate.depth, next(counter), cstate, cpair)
            if stack or len(heap) > dfs_threshold:
                if not stack:
                    dive_switches += 1
                stack.append(entry)
            else:
                heapq.heappush(heap, entry)

    elapsed = time.perf_counter() - start
    meta = {
        "stopped_by": stopped_by,
        "dive_switches": dive_switches,
        "max_open_nodes": max_open,
        "backend": BACKEND,
    }

    if stopped_by == "exhausted":
        if best_tree is not None:
            c = best_tree.total_cost
            return SolveReport(OPTIMAL, c, c, best_tree, elapsed, nodes, time_limit_seconds, meta)
        if cut_by_initial_ub:
            remaining = time_limit_seconds - elapsed
            if remaining <= 0:
                return SolveReport(TIME_LIMIT, None, None, None, elapsed, nodes, time_limit_seconds, meta)
            rerun = solve(
                instance,
                remaining,
                None,
                node_limit=max(node_limit - nodes, 1),
                dfs_threshold=dfs_threshold,
                progress=progress,
                progress_interval=progress_interval,
            )
            rerun.elapsed_seconds = time.perf_counter() - start
            rerun.nodes_explored += nodes
            rerun.time_limit_seconds = time_limit_seconds
            rerun.metadata["initial_ub_rejected"] = initial_ub
            return rerun
        return SolveReport(INFEASIBLE, None, None, None, elapsed, nodes, time_limit_seconds, meta)

    open_lbs = [x[0] for x in heap] + [x[0] for x in stack]
    ub = best_tree.total_cost if best_tree else None
    lb = min(open_lbs + ([ub] if ub is not None else []))
    return SolveReport(TIME_LIMIT, lb, ub, best_tree, elapsed, nodes, time_limit_seconds, meta)


@dataclass(frozen=True)
class OracleResult:
    status: str
    cost: Optional[int] = None
    tree: Optional[SpanningTree] = None


def brute_force_oracle(instance: Instance, max_edges: int = ORACLE_MAX_EDGES) -> OracleResult:
    """Enumerate every ``(n-1)``-edge subset and keep the cheapest conflict-free spanning tree."""
    graph = instance.graph
    if graph.m > max_edges:
        raise InputError(f"oracle refuses {graph.m} edges (limit {max_edges})")
    conflict_mask = [0] * graph.m
    for a, b in instance.conflicts.pairs:
        conflict_mask[a] |= 1 << b
        conflict_mask[b] |= 1 << a
    ends = [(e.u, e.v) for e in graph.edges]
    costs = [e.cost for e in graph.edges]
    best = None
    best_ids = None
    for subset in itertools.combinations(range(graph.m), graph.n - 1):
        mask = 0
        for e in subset:
            mask |= 1 << e
        if any(conflict_mask[e] & mask for e in subset):
            continue
        uf = UnionFind(graph.n)
        if not all(uf.union(*ends[e]) for e in subset):
            continue
        cost = sum(costs[e] for e in subset)
        if best is None or cost < best:
            best, best_ids = cost, subset
    if best is None:
        return OracleResult(INFEASIBLE)
    return OracleResult(OPTIMAL, best, SpanningTree.from_ids(graph, best_ids))
