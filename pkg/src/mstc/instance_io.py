"""Canonical instance text format and the seeded benchmark generator.

Format (ASCII, whitespace-separated integers, ``#`` lines are comments)::

    # name: 25-60-18-1        optional, restores Instance.name
    n m p
    u v cost                  m lines, edge ids 0..m-1 in file order
    e1 e2                     p lines, conflicting edge ids

With ``conflict_format="endpoints"`` conflict lines are ``i j k l``: the
edges ``{i, j}`` and ``{k, l}`` by their endpoints.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Optional

from .conflicts import ConflictSet, Instance
from .errors import InputError, ParseError
from .graph import Graph, make_edge
from .rng import SplitMix64

EDGE_IDS = "edges"
ENDPOINTS = "endpoints"

STREAM_EDGES = 0
STREAM_COSTS = 1
STREAM_CONFLICTS = 2


def _ints(tokens, lineno, expected):
    if len(tokens) != expected:
        raise ParseError(f"expected {expected} integers, found {len(tokens)}", lineno)
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def parse_instance(text: str, name: str = "", conflict_format: str = EDGE_IDS) -> Instance:
    if conflict_format not in (EDGE_IDS, ENDPOINTS):
        raise InputError(f"unknown conflict format {conflict_format!r}")
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("name:") and not rows:
                name = body[len("name:"):].strip()
            continue
        rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty instance: missing 'n m p' header", 1)

    lineno, tokens = rows[0]
    n, m, p = _ints(tokens, lineno, 3)
    if n < 1 or m < 0 or p < 0:
        raise ParseError(f"invalid header n={n} m={m} p={p}", lineno)
    width = 2 if conflict_format == EDGE_IDS else 4
    if len(rows) != 1 + m + p:
        last = rows[-1][0]
        raise ParseError(f"header promises {m} edges and {p} conflicts, found {len(rows) - 1} data lines", last)

    edges = []
    index = {}
    for k in range(m):
        lineno, tokens = rows[1 + k]
        u, v, cost = _ints(tokens, lineno, 3)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge {k}: node outside [0, {n})", lineno)
        if u == v:
            raise ParseError(f"edge {k}: self-loop on node {u}", lineno)
        if cost < 0:
            raise ParseError(f"edge {k}: negative cost {cost}", lineno)
        edge = make_edge(k, u, v, cost)
        if edge.key in index:
            raise ParseError(f"edge {k}: duplicate of edge {index[edge.key]} ({edge.u}-{edge.v})", lineno)
        index[edge.key] = k
        edges.append(edge)

    pairs = []
    for k in range(p):
        lineno, tokens = rows[1 + m + k]
        vals = _ints(tokens, lineno, width)
        if conflict_format == EDGE_IDS:
            a, b = vals
            if not (0 <= a < m and 0 <= b < m):
                raise ParseError(f"conflict references edge outside [0, {m})", lineno)
        else:
            i, j, kk, ll = vals
            try:
                a = index[(min(i, j), max(i, j))]
                b = index[(min(kk, ll), max(kk, ll))]
            except KeyError as exc:
                raise ParseError(f"conflict names a missing edge {exc.args[0]}", lineno) from None
        if a == b:
            raise ParseError(f"edge {a} listed in conflict with itself", lineno)
        pairs.append((a, b))

    graph = Graph(n, tuple(edges))
    return Instance(graph, ConflictSet(m, pairs), name)


def write_instance(instance: Instance) -> str:
    lines = []
    if instance.name:
        lines.append(f"# name: {instance.name}")
    lines.append(f"{instance.n} {instance.m} {instance.p}")
    lines.extend(f"{e.u} {e.v} {e.cost}" for e in instance.graph.edges)
    lines.extend(f"{a} {b}" for a, b in instance.conflicts.pairs)
    return "\n".join(lines) + "\n"


def read_instance(path, conflict_format: str = EDGE_IDS) -> Instance:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError:
        raise ParseError("instance file is not ASCII", None, str(path)) from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_instance(text, name=path.stem, conflict_format=conflict_format)
    except ParseError as exc:
        raise exc.with_source(str(path)) from None


def save_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_instance(instance))


def round_half_up(x: Decimal) -> int:
    return int(x.quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one random instance.

    Give exactly one of ``m`` / ``edge_density`` and of ``p`` /
    ``conflict_density``.  Densities are fractions of all possible node
    pairs and edge pairs respectively, rounded half up.
    """

    n: int
    m: Optional[int] = None
    edge_density: Optional[float] = None
    cost_range: tuple[int, int] = (1, 30)
    p: Optional[int] = None
    conflict_density: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if (self.m is None) == (self.edge_density is None):
            raise InputError("give exactly one of m and edge_density")
        if (self.p is None) == (self.conflict_density is None):
            raise InputError("give exactly one of p and conflict_density")

    @property
    def num_edges(self) -> int:
        if self.m is not None:
            return self.m
        return round_half_up(Decimal(str(self.edge_density)) * (self.n * (self.n - 1) // 2))

    @property
    def num_conflicts(self) -> int:
        if self.p is not None:
            return self.p
        m = self.num_edges
        return round_half_up(Decimal(str(self.conflict_density)) * (m * (m - 1) // 2))

    def validate(self) -> None:
        n, m, p = self.n, self.num_edges, self.num_conflicts
        lo, hi = self.cost_range
        if n < 1:
            raise InputError(f"need at least one node, got n={n}")
        if not n - 1 <= m <= n * (n - 1) // 2:
            raise InputError(f"m={m} outside [{n - 1}, {n * (n - 1) // 2}] for n={n}")
        if not 0 <= p <= m * (m - 1) // 2:
            raise InputError(f"p={p} outside [0, {m * (m - 1) // 2}] for m={m}")
        if not 0 <= lo <= hi:
            raise InputError(f"bad cost range [{lo}, {hi}]")
        if self.seed < 0:
            raise InputError("seed must be non-negative")


def _random_tree(n: int, rng: SplitMix64) -> list[tuple[int, int]]:
    """Uniform labelled spanning tree of ``K_n`` decoded from a random Pruefer sequence."""
    if n < 2:
        return []
    seq = [rng.below(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((min(a, b), max(a, b)))
    return edges


def _pairs_from_ranks(ranks: list[int], m: int) -> list[tuple[int, int]]:
    """Map ascending lexicographic ranks of pairs ``a < b < m`` back to pairs."""
    out = []
    a = 0
    start = 0  # rank of (a, a + 1)
    for t in ranks:
        while t >= start + (m - 1 - a):
            start += m - 1 - a
            a += 1
        out.append((a, a + 1 + t - start))
    return out


def generate(spec: GeneratorSpec) -> Instance:
    """Deterministic random instance for ``spec``.

    Steps: a uniform random spanning tree (Pruefer code), then the remaining
    edges sampled uniformly from the unused node pairs, all edges sorted by
    endpoints; costs drawn uniformly per edge in that order; conflict pairs
    sampled uniformly among all edge pairs.  Edges, costs and conflicts use
    separate :class:`SplitMix64` streams.
    """
    spec.validate()
    n, m, p = spec.n, spec.num_edges, spec.num_conflicts
    lo, hi = spec.cost_range

    edge_rng = SplitMix64.stream(spec.seed, STREAM_EDGES)
    tree = _random_tree(n, edge_rng)
    used = set(tree)
    candidates = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in used]
    extra = [candidates[k] for k in edge_rng.sample_indices(len(candidates), m - len(tree))]
    pairs_uv = sorted(tree + extra)

    cost_rng = SplitMix64.stream(spec.seed, STREAM_COSTS)
    edges = tuple(make_edge(k, u, v, cost_rng.integers(lo, hi)) for k, (u, v) in enumerate(pairs_uv))

    conflict_rng = SplitMix64.stream(spec.seed, STREAM_CONFLICTS)
    ranks = conflict_rng.sample_indices(m * (m - 1) // 2, p)
    conflicts = _pairs_from_ranks(ranks, m)

    return Instance(Graph(n, edges), ConflictSet(m, conflicts), f"{n}-{m}-{p}-{spec.seed}")
