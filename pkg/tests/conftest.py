import random
from pathlib import Path

import pytest

from mstc import Instance
from mstc import _kernels_py

DATA = Path(__file__).parent / "data"

# Small example graph: nodes a..g are 0..6 (a=0 b=1 c=2 d=3 e=4 f=5 g=6).
SAMPLE7_EDGES = [
    (0, 5, 3),  # 0  f-a
    (1, 5, 6),  # 1  f-b  green
    (0, 2, 1),  # 2  a-c
    (0, 3, 2),  # 3  a-d  red
    (0, 1, 1),  # 4  b-a
    (1, 2, 4),  # 5  b-c  blue
    (1, 4, 3),  # 6  b-e  blue
    (2, 3, 2),  # 7  c-d  red
    (2, 4, 4),  # 8  c-e
    (2, 6, 3),  # 9  c-g
    (3, 6, 5),  # 10 d-g
    (4, 6, 7),  # 11 e-g  green
]
SAMPLE7_CONFLICTS = [(3, 7), (5, 6), (1, 11)]
# known optimal tree: f-a, a-b, a-c, a-d, b-e, c-g
SAMPLE7_SOLUTION = (0, 2, 3, 4, 6, 9)
A, B, C, D, E, F, G = range(7)


def edge_id(u, v):
    key = (min(u, v), max(u, v))
    return next(k for k, (a, b, _) in enumerate(SAMPLE7_EDGES) if (a, b) == key)


@pytest.fixture
def sample7():
    return Instance.build(7, SAMPLE7_EDGES, SAMPLE7_CONFLICTS, "sample7")


@pytest.fixture
def triangle_allconf():
    return Instance.build(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [(0, 1), (0, 2), (1, 2)], "triangle-allconf")


@pytest.fixture
def data_dir():
    return DATA


def random_instance(rng: random.Random, n_range=(4, 8), max_edges=16, max_conflicts=10,
                    cost_range=(1, 20), connected=True, name=""):
    """Random small instance; with ``connected`` a random spanning tree is planted first."""
    n = rng.randint(*n_range)
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    cap = min(max_edges, len(all_pairs))
    m = rng.randint(n - 1 if connected else 1, cap)
    chosen = set()
    if connected:
        nodes = list(range(n))
        rng.shuffle(nodes)
        for k in range(1, n):
            a, b = nodes[k], nodes[rng.randrange(k)]
            chosen.add((min(a, b), max(a, b)))
    rest = [pr for pr in all_pairs if pr not in chosen]
    rng.shuffle(rest)
    chosen.update(rest[: m - len(chosen)])
    pairs = sorted(chosen)
    rng.shuffle(pairs)
    triples = [(u, v, rng.randint(*cost_range)) for u, v in pairs]
    edge_pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    p = min(rng.randint(0, max_conflicts), len(edge_pairs))
    conflicts = rng.sample(edge_pairs, p)
    return Instance.build(n, triples, conflicts, name)


def compiled_kernels():
    try:
        from mstc import _kernels
    except ImportError:
        return None
    return _kernels


KERNEL_BACKENDS = [pytest.param(_kernels_py, id="python")]
if compiled_kernels() is not None:
    KERNEL_BACKENDS.append(pytest.param(compiled_kernels(), id="cython"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    results = test_acceptance.RESULTS
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(results):
        passed, detail = results[label]
        status = "PASS" if passed else ("SKIP" if detail.startswith("skipped") else "FAIL")
        terminalreporter.write_line(f"[{status}] {label} :: {detail}")
