import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mstc import InputError, Instance, brute_force_oracle, build_flow_model, emit_lp, flow_certificate, generate
from mstc import GeneratorSpec, parse_instance, write_instance
from mstc.model import BINARY

from .conftest import DATA, SAMPLE7_SOLUTION, random_instance

scipy_optimize = pytest.importorskip("scipy.optimize")


def solve_with_milp(model):
    """Optimum of the emitted model via HiGHS, or None when infeasible."""
    from scipy.optimize import Bounds, LinearConstraint, milp

    c, A, senses, rhs, lower, upper, integrality = model.matrix()
    lo = np.where([s in ("=", ">=") for s in senses], rhs, -np.inf)
    hi = np.where([s in ("=", "<=") for s in senses], rhs, np.inf)
    res = milp(c, constraints=LinearConstraint(A, lo, hi), bounds=Bounds(lower, upper), integrality=integrality)
    if res.status == 2:
        return None
    assert res.success, res.message
    return round(res.fun)


def expected_counts(inst):
    return 3 * inst.m, inst.n + 2 * inst.m + inst.p


class TestStructure:
    def test_sample7_counts(self, sample7):
        model = build_flow_model(sample7)
        assert len(model.variables) == 24 + 12
        assert len(model.binaries) == 12
        assert len(model.constraints) == 7 + 24 + 3 == 34

    def test_two_node(self):
        inst = Instance.build(2, [(0, 1, 5)])
        model = build_flow_model(inst)
        assert model.objective == ((5, "y_0_1"),)
        root, other = model.constraints[0], model.constraints[1]
        assert set(root.terms) == {(1, "x_1_0"), (-1, "x_0_1")} and root.rhs == -1
        assert set(other.terms) == {(1, "x_0_1"), (-1, "x_1_0")} and other.rhs == 1
        linking = model.constraints[2:]
        assert [c.terms for c in linking] == [((1, "x_0_1"), (-1, "y_0_1")), ((1, "x_1_0"), (-1, "y_0_1"))]
        assert all(c.sense == "<=" and c.rhs == 0 for c in linking)

    def test_root_override(self, sample7):
        model = build_flow_model(sample7, root=4)
        assert [c.rhs for c in model.constraints[:7]] == [1, 1, 1, 1, -6, 1, 1]

    @pytest.mark.parametrize("root", [-1, 7])
    def test_bad_root(self, sample7, root):
        with pytest.raises(InputError):
            build_flow_model(sample7, root)


class TestEmit:
    def test_two_node_golden(self):
        text = emit_lp(build_flow_model(Instance.build(2, [(0, 1, 5)], name="two")))
        assert text == (DATA / "two_node.lp").read_text()

    def test_sample7_golden(self, sample7):
        text = emit_lp(build_flow_model(sample7))
        assert text == (DATA / "sample7.lp").read_text()
        body = text.split("Subject To\n")[1].split("Bounds\n")[0]
        conflict_rows = [ln for ln in body.splitlines() if ln.endswith("<= 1")]
        assert conflict_rows == [" c31: y_1_5 + y_4_6 <= 1", " c32: y_0_3 + y_2_3 <= 1", " c33: y_1_2 + y_1_4 <= 1"]

    def test_sections_and_line_endings(self, sample7):
        text = emit_lp(build_flow_model(sample7))
        heads = [ln for ln in text.splitlines() if ln and not ln.startswith((" ", "\\"))]
        assert heads == ["Minimize", "Subject To", "Bounds", "Binaries", "End"]
        assert "\r" not in text and text.endswith("End\n")
        text.encode("ascii")

    @pytest.mark.parametrize("seed", range(5))
    def test_reemit_after_round_trip(self, seed):
        inst = generate(GeneratorSpec(12, edge_density=0.4, conflict_density=0.04, seed=seed))
        again = parse_instance(write_instance(inst))
        assert emit_lp(build_flow_model(again)) == emit_lp(build_flow_model(inst))

    def test_long_rows_wrap(self):
        n = 80
        inst = Instance.build(n, [(0, j, 1) for j in range(1, n)])
        text = emit_lp(build_flow_model(inst))
        assert max(len(ln) for ln in text.splitlines()) <= 260
        # the root row continues on indented lines until its sense
        lines = text.splitlines()
        k = lines.index(next(ln for ln in lines if ln.startswith(" c0:")))
        assert lines[k + 1].startswith("   ")


class TestCertificate:
    def test_sample7_solution(self, sample7):
        model = build_flow_model(sample7)
        values = flow_certificate(sample7, SAMPLE7_SOLUTION)
        assert model.check(values) == []
        assert model.objective_value(values) == 13

    def test_non_spanning_rejected(self, sample7):
        with pytest.raises(InputError):
            flow_certificate(sample7, SAMPLE7_SOLUTION[:-1])

    def test_check_reports_conflict_row(self, sample7):
        model = build_flow_model(sample7)
        values = flow_certificate(sample7, SAMPLE7_SOLUTION)
        values["y_2_3"] = 1.0
        assert model.check(values) == ["c32"]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_counts_property(seed):
    inst = random_instance(random.Random(seed), n_range=(2, 12), max_edges=40, max_conflicts=40,
                           connected=seed % 3 != 0)
    model = build_flow_model(inst)
    nvars, ncons = expected_counts(inst)
    assert len(model.variables) == nvars and len(model.constraints) == ncons
    assert sum(v.kind == BINARY for v in model.variables) == inst.m


@pytest.mark.parametrize("seed", range(40))
def test_certificate_and_external_milp_agree_with_oracle(seed):
    rng = random.Random(1000 + seed)
    inst = random_instance(rng, n_range=(3, 7), max_edges=14, max_conflicts=12)
    model = build_flow_model(inst)
    oracle = brute_force_oracle(inst)
    if oracle.tree is not None:
        values = flow_certificate(inst, oracle.tree.edge_ids)
        assert model.check(values) == []
        assert model.objective_value(values) == oracle.cost
    assert solve_with_milp(model) == oracle.cost


@pytest.mark.parametrize("seed", range(10))
def test_milp_optimal_support_is_spanning_tree(seed):
    from scipy.optimize import Bounds, LinearConstraint, milp

    from mstc.graph import is_spanning_tree

    inst = random_instance(random.Random(2000 + seed), n_range=(4, 7), max_edges=14, max_conflicts=6)
    model = build_flow_model(inst)
    c, A, senses, rhs, lower, upper, integrality = model.matrix()
    lo = np.where([s in ("=", ">=") for s in senses], rhs, -np.inf)
    hi = np.where([s in ("=", "<=") for s in senses], rhs, np.inf)
    res = milp(c, constraints=LinearConstraint(A, lo, hi), bounds=Bounds(lower, upper), integrality=integrality)
    oracle = brute_force_oracle(inst)
    if oracle.tree is None:
        assert res.status == 2
        return
    names = [v.name for v in model.variables]
    chosen = [e.id for e in inst.graph.edges if res.x[names.index(f"y_{e.u}_{e.v}")] > 0.5]
    assert model.check(dict(zip(names, res.x)), tol=1e-6) == []
    # zero-cost edges could be added without changing the optimum
    if all(e.cost > 0 for e in inst.graph.edges):
        assert is_spanning_tree(inst.graph, chosen)
