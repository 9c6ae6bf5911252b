"""Single-commodity flow MILP for the conflict-constrained spanning tree, and LP-format output.

Variables, for every edge ``{i, j}`` with ``i < j``:

* ``x_i_j`` and ``x_j_i``: flow on the two arcs, continuous, ``>= 0``;
* ``y_i_j``: binary, 1 when the edge is in the tree.

Constraints, in emission order:

* one flow balance row per node: inflow - outflow equals ``1 - |V|`` at the
  root and ``+1`` elsewhere;
* two linking rows per edge: ``x_i_j <= (|V|-1) y_i_j`` and ``x_j_i <= (|V|-1) y_i_j``;
* one row ``y_e + y_f <= 1`` per unordered conflict pair.  Writing the
  conflict row once per ordered pair would double the count without
  changing the feasible set.

Although the balance system is sometimes described as multi-commodity, it
is a single aggregated commodity; this module builds exactly that.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .conflicts import Instance
from .errors import InputError

CONTINUOUS = "continuous"
BINARY = "binary"
INF = float("inf")

_SENSE_TEXT = {"<=": "<=", "=": "=", ">=": ">="}


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str = CONTINUOUS
    lower: float = 0.0
    upper: float = INF


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[float, str], ...]
    sense: str
    rhs: float

    def activity(self, values: Mapping[str, float]) -> float:
        return sum(coef * values.get(var, 0.0) for coef, var in self.terms)

    def satisfied(self, values: Mapping[str, float], tol: float = 1e-9) -> bool:
        lhs = self.activity(values)
        if self.sense == "<=":
            return lhs <= self.rhs + tol
        if self.sense == ">=":
            return lhs >= self.rhs - tol
        return abs(lhs - self.rhs) <= tol


@dataclass(frozen=True)
class LpModel:
    variables: tuple[Variable, ...]
    objective: tuple[tuple[float, str], ...]
    constraints: tuple[Constraint, ...]
    name: str = ""

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise InputError("duplicate variable names in model")
        declared = set(names)
        for con in self.constraints:
            for _, var in con.terms:
                if var not in declared:
                    raise InputError(f"constraint {con.name} uses undeclared variable {var}")
            if con.sense not in _SENSE_TEXT:
                raise InputError(f"constraint {con.name}: bad sense {con.sense!r}")
        for _, var in self.objective:
            if var not in declared:
                raise InputError(f"objective uses undeclared variable {var}")

    @property
    def binaries(self) -> list[Variable]:
        return [v for v in self.variables if v.kind == BINARY]

    def check(self, values: Mapping[str, float], tol: float = 1e-9) -> list[str]:
        """Names of violated constraints, bounds and integrality requirements."""
        bad = []
        for var in self.variables:
            val = values.get(var.name, 0.0)
            if val < var.lower - tol or val > var.upper + tol:
                bad.append(f"bound:{var.name}")
            if var.kind == BINARY and min(abs(val), abs(val - 1.0)) > tol:
                bad.append(f"integrality:{var.name}")
        bad.extend(con.name for con in self.constraints if not con.satisfied(values, tol))
        return bad

    def objective_value(self, values: Mapping[str, float]) -> float:
        return sum(coef * values.get(var, 0.0) for coef, var in self.objective)

    def matrix(self):
        """Dense arrays ``(c, A, senses, rhs, lower, upper, integrality)``.

        Column order follows ``variables``; ``integrality`` is 1 for binaries.
        Handy for feeding the model to array-based MILP solvers.
        """
        col = {v.name: k for k, v in enumerate(self.variables)}
        c = np.zeros(len(col))
        for coef, var in self.objective:
            c[col[var]] += coef
        A = np.zeros((len(self.constraints), len(col)))
        for r, con in enumerate(self.constraints):
            for coef, var in con.terms:
                A[r, col[var]] += coef
        senses = [con.sense for con in self.constraints]
        rhs = np.array([con.rhs for con in self.constraints], dtype=float)
        lower = np.array([v.lower for v in self.variables], dtype=float)
        upper = np.array([v.upper for v in self.variables], dtype=float)
        integrality = np.array([1 if v.kind == BINARY else 0 for v in self.variables])
        return c, A, senses, rhs, lower, upper, integrality


def arc_name(i: int, j: int) -> str:
    return f"x_{i}_{j}"


def edge_name(i: int, j: int) -> str:
    return f"y_{min(i, j)}_{max(i, j)}"


def build_flow_model(instance: Instance, root: int = 0) -> LpModel:
    graph = instance.graph
    n = graph.n
    if not (0 <= root < n):
        raise InputError(f"root {root} outside [0, {n})")
    big_m = n - 1

    variables = []
    for e in graph.edges:
        variables.append(Variable(arc_name(e.u, e.v)))
        variables.append(Variable(arc_name(e.v, e.u)))
    for e in graph.edges:
        variables.append(Variable(edge_name(e.u, e.v), BINARY, 0.0, 1.0))

    objective = tuple((e.cost, edge_name(e.u, e.v)) for e in graph.edges)

    incident: list[list[tuple[float, str]]] = [[] for _ in range(n)]
    for e in graph.edges:
        # inflow minus outflow at each endpoint
        incident[e.v].append((1, arc_name(e.u, e.v)))
        incident[e.u].append((-1, arc_name(e.u, e.v)))
        incident[e.u].append((1, arc_name(e.v, e.u)))
        incident[e.v].append((-1, arc_name(e.v, e.u)))

    rows: list[tuple[tuple[tuple[float, str], ...], str, float]] = []
    for i in range(n):
        rows.append((tuple(incident[i]), "=", 1 - n if i == root else 1))
    for e in graph.edges:
        y = edge_name(e.u, e.v)
        rows.append((((1, arc_name(e.u, e.v)), (-big_m, y)), "<=", 0))
        rows.append((((1, arc_name(e.v, e.u)), (-big_m, y)), "<=", 0))
    for a, b in instance.conflicts.pairs:
        ea, eb = graph.edges[a], graph.edges[b]
        rows.append((((1, edge_name(ea.u, ea.v)), (1, edge_name(eb.u, eb.v))), "<=", 1))

    constraints = tuple(
        Constraint(f"c{k}", terms, sense, rhs) for k, (terms, sense, rhs) in enumerate(rows)
    )
    return LpModel(tuple(variables), objective, constraints, instance.name)


def flow_certificate(instance: Instance, tree_ids: Sequence[int], root: int = 0) -> dict[str, float]:
    """Variable assignment induced by a spanning tree.

    ``y`` is 1 on tree edges; each tree arc pointing away from ``root``
    carries the number of nodes below it, which routes one unit from the
    root to every other node.
    """
    graph = instance.graph
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.n)]
    for e in tree_ids:
        edge = graph.edges[e]
        adj[edge.u].append((edge.v, e))
        adj[edge.v].append((edge.u, e))
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, _ in adj[u]:
            if v not in parent:
                parent[v] = u
                order.append(v)
                queue.append(v)
    if len(order) != graph.n:
        raise InputError("edge set does not span the graph")

    values = {v.name: 0.0 for v in build_flow_model(instance, root).variables}
    below = {u: 1 for u in order}
    for u in reversed(order[1:]):
        p = parent[u]
        below[p] += below[u]
        values[arc_name(p, u)] = float(below[u])
    for e in tree_ids:
        edge = graph.edges[e]
        values[edge_name(edge.u, edge.v)] = 1.0
    return values


def _fmt_num(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _fmt_terms(terms: Sequence[tuple[float, str]]) -> list[str]:
    out = []
    for k, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{_fmt_num(mag)} {var}"
        if k == 0:
            out.append(f"- {body}" if sign == "-" else body)
        else:
            out.append(f"{sign} {body}")
    return out


def _wrap(head: str, pieces: list[str], tail: str = "", width: int = 250) -> list[str]:
    lines = []
    line = head
    for piece in pieces:
        if len(line) + 1 + len(piece) > width and line.strip():
            lines.append(line)
            line = "   " + piece
        else:
            line = f"{line} {piece}" if line else piece
    if tail:
        line = f"{line} {tail}"
    lines.append(line)
    return lines


def emit_lp(model: LpModel) -> str:
    """Render ``model`` as LP-format text (LF line endings, deterministic)."""
    lines: list[str] = []
    if model.name:
        lines.append(f"\\ Problem: {model.name}")
    lines.append("Minimize")
    obj = _fmt_terms(model.objective) or ["0"]
    lines.extend(_wrap(" obj:", obj))
    lines.append("Subject To")
    first_var = model.variables[0].name if model.variables else None
    for con in model.constraints:
        terms = _fmt_terms(con.terms)
        if not terms and first_var is not None:
            # isolated node: keep the (unsatisfiable) row visible
            terms = [f"0 {first_var}"]
        tail = f"{_SENSE_TEXT[con.sense]} {_fmt_num(con.rhs)}"
        lines.extend(_wrap(f" {con.name}:", terms, tail))
    lines.append("Bounds")
    for var in model.variables:
        if var.kind == BINARY:
            continue
        if var.upper == INF:
            lines.append(f" {var.name} >= {_fmt_num(var.lower)}")
        else:
            lines.append(f" {_fmt_num(var.lower)} <= {var.name} <= {_fmt_num(var.upper)}")
    lines.append("Binaries")
    for var in model.binaries:
        lines.append(f" {var.name}")
    lines.append("End")
    return "\n".join(lines) + "\n"
