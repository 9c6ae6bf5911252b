"""Conflict pairs, instances, feasibility checks and forcing propagation."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from ._backend import kernels
from .errors import InputError
from .graph import Graph, SpanningTree


class ConflictSet:
    """Unordered edge pairs stored as ``(smaller id, larger id)``, sorted.

    ``adjacency[e]`` lists every edge in conflict with ``e`` in ascending order.
    ``duplicates`` counts input pairs dropped as repeats of an earlier pair.
    """

    def __init__(self, m: int, pairs: Iterable[tuple[int, int]] = ()):
        self.m = m
        seen = set()
        duplicates = 0
        for a, b in pairs:
            a, b = int(a), int(b)
            if not (0 <= a < m and 0 <= b < m):
                raise InputError(f"conflict ({a}, {b}) references an edge outside [0, {m})")
            if a == b:
                raise InputError(f"edge {a} cannot conflict with itself")
            key = (a, b) if a < b else (b, a)
            if key in seen:
                duplicates += 1
            seen.add(key)
        self.pairs: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        self.duplicates = duplicates
        adj: list[list[int]] = [[] for _ in range(m)]
        for a, b in self.pairs:
            adj[a].append(b)
            adj[b].append(a)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(x)) for x in adj)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair):
        a, b = pair
        return ((a, b) if a < b else (b, a)) in self._pair_set

    def __eq__(self, other):
        if not isinstance(other, ConflictSet):
            return NotImplemented
        return self.m == other.m and self.pairs == other.pairs

    def __repr__(self):
        return f"ConflictSet(m={self.m}, pairs={list(self.pairs)!r})"

    @cached_property
    def _pair_set(self):
        return frozenset(self.pairs)

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.pairs:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        arr = np.asarray(self.pairs, dtype=np.int64)
        return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form ``(ptr, idx)`` for the kernels."""
        ptr = np.zeros(self.m + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(x) for x in self.adjacency])
        idx = np.fromiter((f for x in self.adjacency for f in x), dtype=np.int64, count=int(ptr[-1]))
        return ptr, idx


@dataclass(frozen=True, eq=False)
class Instance:
    graph: Graph
    conflicts: ConflictSet
    name: str = ""

    def __post_init__(self):
        if self.conflicts.m != self.graph.m:
            raise InputError(
                f"conflict set built for {self.conflicts.m} edges, graph has {self.graph.m}"
            )

    @classmethod
    def build(cls, n, triples, pairs=(), name=""):
        graph = Graph.from_triples(n, triples)
        return cls(graph, ConflictSet(graph.m, pairs), name)

    @property
    def n(self):
        return self.graph.n

    @property
    def m(self):
        return self.graph.m

    @property
    def p(self):
        return len(self.conflicts)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.graph, self.conflicts, self.name) == (other.graph, other.conflicts, other.name)

    def __repr__(self):
        return f"Instance(name={self.name!r}, n={self.n}, m={self.m}, p={self.p})"


class Feasibility(NamedTuple):
    feasible: bool
    violations: list[tuple[int, int]]


def violated_pairs(instance: Instance, edge_ids: Iterable[int]) -> list[tuple[int, int]]:
    pa, pb = instance.conflicts.arrays
    hits = kernels.violated_pairs(instance.m, list(edge_ids), pa, pb)
    pairs = instance.conflicts.pairs
    return [pairs[k] for k in hits]


def is_feasible(instance: Instance, tree: SpanningTree | Iterable[int]) -> Feasibility:
    """Check that no conflict pair has both edges in ``tree``.

    Only conflicts are checked here; use :func:`mstc.graph.is_spanning_tree`
    for the tree structure.  Violations come back sorted by ``(min id, max id)``.
    """
    ids = tree.edge_ids if isinstance(tree, SpanningTree) else list(tree)
    instance.graph.check_ids(ids)
    bad = violated_pairs(instance, ids)
    return Feasibility(not bad, bad)


def propagate(
    instance: Instance, forced_in: Iterable[int], forced_out: Iterable[int]
) -> tuple[frozenset[int], bool]:
    """Close ``forced_out`` under conflicts of forced-in edges.

    Returns the closed set and whether it now overlaps ``forced_in``.  One
    pass is a fixpoint: pushing an edge out never forces another edge in.
    """
    forced_in = frozenset(forced_in)
    closed = set(forced_out)
    adjacency = instance.conflicts.adjacency
    for e in forced_in:
        closed.update(adjacency[e])
    return frozenset(closed), not closed.isdisjoint(forced_in)
