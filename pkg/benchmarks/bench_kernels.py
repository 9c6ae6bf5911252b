"""Compare the compiled and pure-Python kernels.

Two parts:

* micro: the constrained Kruskal and conflict scan on generated graphs,
  calling both kernel modules directly;
* solve: full branch-and-bound runs, one subprocess per backend (the backend
  is chosen at import time via ``MSTC_PURE_PYTHON``).

Usage: python benchmarks/bench_kernels.py [--repeat N] [--solve-limit SECONDS]
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from mstc import GeneratorSpec, generate
from mstc import _kernels_py
from mstc.graph import edge_status

try:
    from mstc import _kernels as _compiled
except ImportError:
    _compiled = None

SOLVE_SPECS = [
    dict(n=25, edge_density=0.3, conflict_density=0.04, seed=1),
    dict(n=25, edge_density=0.4, conflict_density=0.07, seed=2),
    dict(n=50, edge_density=0.2, conflict_density=0.01, seed=3),
    dict(n=50, m=200, cost_range=(0, 500), p=199, seed=4),
]

_SOLVE_SNIPPET = """
import json, sys
from mstc import GeneratorSpec, generate, solve, BACKEND
out = []
for kw in json.loads(sys.argv[1]):
    if "cost_range" in kw:
        kw["cost_range"] = tuple(kw["cost_range"])
    inst = generate(GeneratorSpec(**kw))
    rep = solve(inst, float(sys.argv[2]))
    out.append(dict(name=inst.name, status=rep.status, cost=rep.cost, lb=rep.lower_bound,
                    nodes=rep.nodes_explored, seconds=rep.elapsed_seconds, backend=BACKEND))
print(json.dumps(out))
"""


def micro(repeat):
    rows = []
    for n, density in [(50, 0.2), (100, 0.4), (300, 0.02)]:
        inst = generate(GeneratorSpec(n, edge_density=density, conflict_density=0.01, seed=0))
        g = inst.graph
        eu, ev = g.endpoints
        rng = np.random.default_rng(0)
        status = edge_status(g.m, forced_out=rng.choice(g.m, g.m // 10, replace=False).tolist())
        tree = list(range(min(g.m, n - 1)))
        pa, pb = inst.conflicts.arrays
        for label, mod in [("python", _kernels_py), ("cython", _compiled)]:
            if mod is None:
                continue
            t_mst = min(timeit.repeat(lambda: mod.kruskal(g.n, eu, ev, g.sorted_order, status),
                                      number=20, repeat=repeat)) / 20
            t_scan = min(timeit.repeat(lambda: mod.violated_pairs(g.m, tree, pa, pb),
                                       number=20, repeat=repeat)) / 20
            rows.append((inst.name, label, t_mst * 1e6, t_scan * 1e6))
    print(f"{'instance':<22}{'backend':<9}{'kruskal us':>12}{'conflict scan us':>18}")
    for name, label, a, b in rows:
        print(f"{name:<22}{label:<9}{a:>12.1f}{b:>18.1f}")


def solve_runs(limit):
    results = {}
    for label, env_flag in [("python", "1"), ("cython", "")]:
        if label == "cython" and _compiled is None:
            continue
        env = dict(os.environ)
        env.pop("MSTC_PURE_PYTHON", None)
        if env_flag:
            env["MSTC_PURE_PYTHON"] = env_flag
        proc = subprocess.run(
            [sys.executable, "-c", _SOLVE_SNIPPET, json.dumps(SOLVE_SPECS), str(limit)],
            capture_output=True, text=True, env=env, check=True,
        )
        results[label] = json.loads(proc.stdout)
    print(f"\n{'instance':<22}{'backend':<9}{'status':<11}{'cost':>6}{'lb':>6}{'nodes':>9}{'seconds':>9}")
    for label, rows in results.items():
        for r in rows:
            print(f"{r['name']:<22}{r['backend']:<9}{r['status']:<11}{str(r['cost']):>6}{str(r['lb']):>6}"
                  f"{r['nodes']:>9}{r['seconds']:>9.2f}")
    if len(results) == 2:
        for py, cy in zip(results["python"], results["cython"]):
            if py["status"] == cy["status"] == "Optimal":
                assert py["cost"] == cy["cost"] and py["nodes"] == cy["nodes"], (py, cy)
            print(f"{py['name']:<22}speedup x{py['seconds'] / max(cy['seconds'], 1e-9):.1f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--solve-limit", type=float, default=60.0)
    parser.add_argument("--skip-solve", action="store_true")
    args = parser.parse_args()
    if _compiled is None:
        print("compiled kernels not built; showing pure-Python timings only")
    micro(args.repeat)
    if not args.skip_solve:
        solve_runs(args.solve_limit)


if __name__ == "__main__":
    main()
