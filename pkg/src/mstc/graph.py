"""Graph types, disjoint sets and the constrained Kruskal relaxation."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from ._backend import kernels
from .errors import InputError


@dataclass(frozen=True, order=True)
class Edge:
    id: int
    u: int
    v: int
    cost: int

    def __post_init__(self):
        if self.u == self.v:
            raise InputError(f"edge {self.id}: self-loop on node {self.u}")
        if self.u > self.v:
            raise InputError(f"edge {self.id}: endpoints not canonical ({self.u} > {self.v})")
        if self.cost < 0:
            raise InputError(f"edge {self.id}: negative cost {self.cost}")

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


def make_edge(id: int, u: int, v: int, cost: int) -> Edge:
    """Build an edge, ordering the endpoints so that ``u < v``."""
    if u > v:
        u, v = v, u
    return Edge(id, u, v, cost)


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected weighted graph with ``n`` nodes and an indexed edge list."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"graph needs at least one node, got n={self.n}")
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for pos, e in enumerate(self.edges):
            if e.id != pos:
                raise InputError(f"edge id {e.id} does not match its position {pos}")
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise InputError(f"edge {e.id}: endpoint outside [0, {self.n})")
            if e.key in seen:
                raise InputError(f"edge {e.id}: duplicate edge {e.u}-{e.v}")
            seen.add(e.key)

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, tuple(make_edge(i, u, v, c) for i, (u, v, c) in enumerate(triples)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    # Arrays handed to the kernels; built once per graph.
    @cached_property
    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        eu = np.fromiter((e.u for e in self.edges), dtype=np.int64, count=self.m)
        ev = np.fromiter((e.v for e in self.edges), dtype=np.int64, count=self.m)
        return eu, ev

    @cached_property
    def costs(self) -> np.ndarray:
        return np.fromiter((e.cost for e in self.edges), dtype=np.int64, count=self.m)

    @cached_property
    def sorted_order(self) -> np.ndarray:
        """Edge ids sorted by ``(cost, id)``."""
        return np.lexsort((np.arange(self.m, dtype=np.int64), self.costs)).astype(np.int64)

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e.key: e.id for e in self.edges}

    def check_ids(self, ids: Iterable[int]) -> None:
        for e in ids:
            if not (isinstance(e, (int, np.integer)) and 0 <= e < self.m):
                raise InputError(f"invalid edge id {e!r} (graph has {self.m} edges)")


@dataclass(frozen=True)
class SpanningTree:
    edge_ids: tuple[int, ...]
    total_cost: int

    @classmethod
    def from_ids(cls, graph: Graph, ids: Iterable[int]) -> "SpanningTree":
        ids = tuple(sorted(int(e) for e in ids))
        return cls(ids, sum(graph.edges[e].cost for e in ids))

    def __len__(self):
        return len(self.edge_ids)

    def __contains__(self, edge_id):
        return edge_id in self.edge_ids


def is_spanning_tree(graph: Graph, ids: Iterable[int]) -> bool:
    """True when ``ids`` are ``n - 1`` distinct edges forming an acyclic, connected subgraph."""
    ids = list(ids)
    if len(ids) != graph.n - 1 or len(set(ids)) != len(ids):
        return False
    uf = UnionFind(graph.n)
    return all(uf.union(graph.edges[e].u, graph.edges[e].v) for e in ids)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path compression and union by size."""

    def __init__(self, n: int = 0):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def make(self) -> int:
        x = len(self.parent)
        self.parent.append(x)
        self.size.append(1)
        self.components += 1
        return x

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True


def edge_status(m: int, forced_in: Iterable[int] = (), forced_out: Iterable[int] = ()) -> bytearray:
    """Per-edge byte: 0 free, 1 forced in, 2 forced out."""
    status = bytearray(m)
    for e in forced_in:
        status[e] = 1
    for e in forced_out:
        status[e] = 2
    return status


def kruskal_mst(
    graph: Graph,
    forced_in: Iterable[int] = (),
    forced_out: Iterable[int] = (),
) -> Optional[SpanningTree]:
    """Minimum spanning tree containing ``forced_in`` and avoiding ``forced_out``.

    Conflicts are ignored.  Forced-in edges are joined first; among free
    edges ties are broken by ``(cost, id)``.  Returns ``None`` when the forced
    edges contain a cycle or the allowed edges do not connect the graph.
    """
    forced_in = set(forced_in)
    forced_out = set(forced_out)
    graph.check_ids(forced_in)
    graph.check_ids(forced_out)
    if forced_in & forced_out:
        raise InputError(f"edges both forced in and out: {sorted(forced_in & forced_out)}")
    return _kruskal(graph, edge_status(graph.m, forced_in, forced_out))


def _kruskal(graph: Graph, status: bytearray) -> Optional[SpanningTree]:
    eu, ev = graph.endpoints
    ids = kernels.kruskal(graph.n, eu, ev, graph.sorted_order, status)
    if ids is None:
        return None
    return SpanningTree.from_ids(graph, ids)
