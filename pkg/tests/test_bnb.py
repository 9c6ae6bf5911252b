import random

import pytest

from mstc import (
    INFEASIBLE,
    OPTIMAL,
    TIME_LIMIT,
    InputError,
    Instance,
    SpanningTree,
    brute_force_oracle,
    greedy_upper_bound,
    is_feasible,
    kruskal_mst,
    mst_lower_bound,
    solve,
)
from mstc import bnb as bnb_mod
from mstc.graph import is_spanning_tree

from .conftest import A, B, D, E, F, G, edge_id, random_instance


def check_report(inst, rep):
    if rep.status == OPTIMAL:
        assert rep.lower_bound == rep.upper_bound == rep.incumbent.total_cost
        assert is_feasible(inst, rep.incumbent).feasible
        assert is_spanning_tree(inst.graph, rep.incumbent.edge_ids)
    elif rep.status == INFEASIBLE:
        assert rep.lower_bound is None and rep.upper_bound is None and rep.incumbent is None
    else:
        if rep.lower_bound is not None and rep.upper_bound is not None:
            assert rep.lower_bound <= rep.upper_bound
        if rep.incumbent is not None:
            assert is_feasible(inst, rep.incumbent).feasible


class TestSolve:
    def test_sample7(self, sample7):
        rep = solve(sample7, 10)
        assert rep.status == OPTIMAL and rep.cost == 13
        ids = rep.incumbent.edge_ids
        assert edge_id(A, D) in ids and edge_id(B, E) in ids
        assert edge_id(F, B) not in ids and edge_id(E, G) not in ids
        check_report(sample7, rep)

    def test_conflict_free_solves_at_root(self):
        inst = random_instance(random.Random(3), max_conflicts=0)
        rep = solve(inst, 10)
        assert rep.status == OPTIMAL and rep.nodes_explored == 1
        assert rep.cost == kruskal_mst(inst.graph).total_cost

    def test_triangle_infeasible(self, triangle_allconf):
        rep = solve(triangle_allconf, 10)
        assert rep.status == INFEASIBLE
        check_report(triangle_allconf, rep)

    def test_disconnected_graph_infeasible(self):
        inst = Instance.build(4, [(0, 1, 1), (2, 3, 1)])
        assert solve(inst, 5).status == INFEASIBLE

    def test_requires_branching(self):
        # cheapest tree uses both conflicting edges 0 and 1
        inst = Instance.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 5)], [(0, 1)])
        rep = solve(inst, 5)
        assert rep.status == OPTIMAL and rep.cost == 6 and rep.nodes_explored > 1

    @pytest.mark.parametrize("limit", [0, -1.0])
    def test_time_limit_must_be_positive(self, sample7, limit):
        with pytest.raises(InputError):
            solve(sample7, limit)

    def test_seed_incumbent_validated(self, sample7):
        with pytest.raises(InputError):
            solve(sample7, 5, incumbent=SpanningTree((3, 7), 4))

    def test_seed_incumbent_used(self):
        inst = random_instance(random.Random(21), max_conflicts=10)
        ub = greedy_upper_bound(inst)
        plain = solve(inst, 10)
        seeded = solve(inst, 10, incumbent=ub.witness)
        assert plain.cost == seeded.cost
        assert seeded.nodes_explored <= plain.nodes_explored

    def test_wrong_initial_ub_falls_back(self):
        inst = Instance.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 5)], [(0, 1)])
        rep = solve(inst, 5, initial_ub=2)
        assert rep.status == OPTIMAL and rep.cost == 6
        assert rep.metadata["initial_ub_rejected"] == 2

    def test_exact_initial_ub(self):
        inst = Instance.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 5)], [(0, 1)])
        rep = solve(inst, 5, initial_ub=6)
        assert rep.status == OPTIMAL and rep.cost == 6


@pytest.mark.parametrize("seed", range(200))
def test_matches_oracle(seed):
    inst = random_instance(random.Random(seed), n_range=(4, 8), max_edges=16, max_conflicts=10,
                           connected=seed % 10 != 0)
    rep = solve(inst, 30)
    oracle = brute_force_oracle(inst)
    assert rep.status == oracle.status
    assert rep.cost == oracle.cost
    check_report(inst, rep)


@pytest.mark.parametrize("seed", range(60))
def test_dense_conflicts_match_oracle(seed):
    inst = random_instance(random.Random(10_000 + seed), n_range=(5, 8), max_edges=16,
                           max_conflicts=60, cost_range=(1, 5))
    rep = solve(inst, 30)
    oracle = brute_force_oracle(inst)
    assert (rep.status, rep.cost) == (oracle.status, oracle.cost)


class _FakeClock:
    """perf_counter stand-in that advances a fixed step per call."""

    def __init__(self, step):
        self.t = 0.0
        self.step = step

    def __call__(self):
        self.t += self.step
        return self.t


@pytest.mark.parametrize("seed", range(40))
def test_time_limit_bounds_are_valid(seed, monkeypatch):
    inst = random_instance(random.Random(500 + seed), n_range=(6, 8), max_edges=16, max_conflicts=30,
                           cost_range=(1, 9))
    oracle = brute_force_oracle(inst)
    monkeypatch.setattr(bnb_mod.time, "perf_counter", _FakeClock(1.0))
    rep = solve(inst, 3.5)
    check_report(inst, rep)
    if rep.status == TIME_LIMIT:
        assert rep.metadata["stopped_by"] == "time_limit"
        if oracle.status == OPTIMAL:
            assert rep.lower_bound <= oracle.cost
            if rep.upper_bound is not None:
                assert rep.upper_bound >= oracle.cost
    else:
        assert rep.status == oracle.status and rep.cost == oracle.cost


@pytest.mark.parametrize("seed", range(20))
def test_node_limit_stops_with_valid_bounds(seed):
    inst = random_instance(random.Random(800 + seed), n_range=(7, 8), max_edges=16, max_conflicts=40)
    oracle = brute_force_oracle(inst)
    rep = solve(inst, 30, node_limit=3)
    check_report(inst, rep)
    if rep.status == TIME_LIMIT:
        assert rep.metadata["stopped_by"] == "node_limit"
        if oracle.status == OPTIMAL:
            assert rep.lower_bound <= oracle.cost


@pytest.mark.parametrize("seed", range(20))
def test_depth_first_fallback_is_exact(seed):
    inst = random_instance(random.Random(900 + seed), n_range=(6, 8), max_edges=16, max_conflicts=40)
    rep = solve(inst, 30, dfs_threshold=0)
    oracle = brute_force_oracle(inst)
    assert (rep.status, rep.cost) == (oracle.status, oracle.cost)


@pytest.mark.parametrize("seed", range(30))
def test_children_bounds_not_below_parent(seed):
    inst = random_instance(random.Random(1200 + seed), max_conflicts=15)
    root = mst_lower_bound(inst)
    if root is None:
        return
    tree = root.witness.edge_ids
    viol = is_feasible(inst, tree).violations
    if not viol:
        return
    e, _ = bnb_mod._branch_pair(range(len(viol)), viol, inst.graph.costs.tolist())
    for fin, fout in (({e}, set()), (set(), {e})):
        child = mst_lower_bound(inst, fin, fout)
        if child is not None:
            assert child.value >= root.value


def test_branch_pair_choice():
    costs = [5, 1, 4, 4, 2]
    pairs = [(0, 1), (2, 3), (1, 4)]
    # combined costs 6, 8, 3 -> pair (2, 3); equal members -> smaller id kept/dropped
    assert bnb_mod._branch_pair([0, 1, 2], pairs, costs) == (2, 3)
    assert bnb_mod._branch_pair([0, 2], pairs, costs) == (0, 1)


def test_deterministic_reports():
    inst = random_instance(random.Random(77), n_range=(8, 8), max_edges=16, max_conflicts=30)
    first, second = solve(inst, 30), solve(inst, 30)
    assert first.comparable() == second.comparable()


def test_progress_callback(monkeypatch):
    inst = random_instance(random.Random(4), n_range=(8, 8), max_edges=16, max_conflicts=40)
    seen = []
    rep = solve(inst, 30, progress=lambda *a: seen.append(a), progress_interval=1e-9)
    if rep.nodes_explored > 2:
        assert seen


class TestOracle:
    def test_sample7(self, sample7):
        res = brute_force_oracle(sample7)
        assert (res.status, res.cost) == (OPTIMAL, 13)

    def test_k3(self):
        inst = Instance.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
        assert brute_force_oracle(inst).cost == 2

    def test_triangle(self, triangle_allconf):
        assert brute_force_oracle(triangle_allconf).status == INFEASIBLE

    def test_refuses_large(self):
        inst = Instance.build(8, [(i, j, 1) for i in range(8) for j in range(i + 1, 8)])
        with pytest.raises(InputError):
            brute_force_oracle(inst)
