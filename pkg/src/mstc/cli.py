"""Command-line entry point: ``mstc <subcommand> ...``.

Exit codes: 0 success or optimal, 1 usage or input error, 2 infeasible
(proven, or a solution that fails ``check``), 3 time or node limit reached.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bench import MODES, BenchConfig, rows_to_csv, rows_to_json, rows_to_markdown, run_suite
from .bnb import DEFAULT_TIME_LIMIT, INFEASIBLE, OPTIMAL, TIME_LIMIT, brute_force_oracle, solve
from .bounds import DEFAULT_RESTARTS, greedy_upper_bound, mst_lower_bound
from .conflicts import is_feasible
from .errors import InputError, MstcError, ParseError
from .graph import SpanningTree, is_spanning_tree
from .instance_io import EDGE_IDS, ENDPOINTS, GeneratorSpec, generate, read_instance, write_instance
from .model import build_flow_model, emit_lp

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_TIME_LIMIT = 3

STATUS_EXIT = {OPTIMAL: EXIT_OK, INFEASIBLE: EXIT_INFEASIBLE, TIME_LIMIT: EXIT_TIME_LIMIT}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def read_solution(path) -> tuple[int, list[int]]:
    """Solution file: first line the cost, then one edge id per line."""
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append((lineno, int(line)))
        except ValueError:
            raise ParseError(f"expected one integer, got {line!r}", lineno, str(path)) from None
    if not values:
        raise ParseError("empty solution file", 1, str(path))
    return values[0][1], [v for _, v in values[1:]]


def format_solution(tree: SpanningTree) -> str:
    return "\n".join([str(tree.total_cost), *map(str, tree.edge_ids)]) + "\n"


def _write_out(text: str, output) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _print_kv(pairs) -> None:
    for key, value in pairs:
        print(f"{key}: {'' if value is None else value}")


def cmd_solve(args) -> int:
    inst = read_instance(args.instance, args.conflict_format)
    seed_tree = None
    if not args.no_heuristic:
        ub = greedy_upper_bound(inst, seed=args.seed)
        seed_tree = ub.witness if ub else None

    def progress(nodes, lb, ub):
        print(f"[mstc] nodes={nodes} lb={lb} ub={ub}", file=sys.stderr, flush=True)

    report = solve(
        inst,
        args.time_limit,
        incumbent=seed_tree,
        node_limit=args.node_limit,
        progress=progress if args.progress else None,
        progress_interval=args.progress or 5.0,
    )
    if args.solution and report.incumbent is not None:
        _write_out(format_solution(report.incumbent), args.solution)
    if args.json:
        d = report.to_dict()
        d["instance"] = inst.name
        print(json.dumps(d, indent=2, sort_keys=True))
    else:
        tree = report.incumbent
        _print_kv([
            ("instance", inst.name),
            ("status", report.status),
            ("cost", report.cost),
            ("lower_bound", report.lower_bound),
            ("upper_bound", report.upper_bound),
            ("nodes", report.nodes_explored),
            ("seconds", f"{report.elapsed_seconds:.3f}"),
            ("time_limit", report.time_limit_seconds),
            ("stopped_by", report.metadata.get("stopped_by")),
            ("tree", " ".join(map(str, tree.edge_ids)) if tree else None),
        ])
    return STATUS_EXIT[report.status]


def cmd_bound(args) -> int:
    inst = read_instance(args.instance, args.conflict_format)
    lo = mst_lower_bound(inst)
    up = greedy_upper_bound(inst, restarts=args.restarts, seed=args.seed)
    _print_kv([
        ("instance", inst.name),
        ("lower_bound", lo.value if lo else None),
        ("upper_bound", up.value if up else None),
        ("relaxation", "feasible" if lo else "infeasible"),
    ])
    return EXIT_OK if lo is not None else EXIT_INFEASIBLE


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        n=args.n,
        m=args.m,
        edge_density=args.edge_density,
        cost_range=(args.cost_min, args.cost_max),
        p=args.p,
        conflict_density=args.conflict_density,
        seed=args.seed,
    )
    inst = generate(spec)
    output = args.output
    if output is not None and Path(output).is_dir():
        output = Path(output) / f"{inst.name}.mstc"
    _write_out(write_instance(inst), output)
    if output not in (None, "-"):
        print(f"wrote {output} ({inst.name})", file=sys.stderr)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    inst = read_instance(args.instance, args.conflict_format)
    _write_out(emit_lp(build_flow_model(inst, args.root)), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    inst = read_instance(args.instance, args.conflict_format)
    claimed, ids = read_solution(args.solution)
    try:
        inst.graph.check_ids(ids)
    except InputError as exc:
        raise InputError(f"{args.solution}: {exc}") from None
    spanning = is_spanning_tree(inst.graph, ids)
    feas = is_feasible(inst, ids)
    cost = sum(inst.graph.edges[e].cost for e in ids)
    ok = spanning and feas.feasible and cost == claimed
    _print_kv([
        ("instance", inst.name),
        ("spanning_tree", "yes" if spanning else "no"),
        ("feasible", "yes" if feas.feasible else "no"),
        ("violations", " ".join(f"{a}-{b}" for a, b in feas.violations) or None),
        ("cost", cost),
        ("claimed_cost", claimed),
        ("valid", "yes" if ok else "no"),
    ])
    return EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance, args.conflict_format)
    res = brute_force_oracle(inst, max_edges=args.max_edges)
    _print_kv([
        ("instance", inst.name),
        ("status", res.status),
        ("cost", res.cost),
        ("tree", " ".join(map(str, res.tree.edge_ids)) if res.tree else None),
    ])
    return STATUS_EXIT[res.status]


def cmd_bench(args) -> int:
    config = BenchConfig(
        time_limit=args.time_limit,
        mode=args.mode,
        lp_dir=args.lp_dir,
        root=args.root,
        seed=args.seed,
        conflict_format=args.conflict_format,
        legacy_infeas_dev=args.legacy_infeas_dev,
        workers=args.workers,
    )
    rows, summary = run_suite(args.directory, config, args.reference)
    if args.json:
        text = json.dumps(rows_to_json(rows, summary), indent=2, sort_keys=True) + "\n"
    elif args.format == "md":
        text = rows_to_markdown(rows, summary)
    else:
        text = rows_to_csv(rows)
    _write_out(text, args.output)
    return EXIT_OK


def _positive_float(s):
    try:
        x = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mstc", description="Minimum spanning tree with conflicting edge pairs.")
    parser.add_argument("--version", action="version", version=f"mstc {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def instance_cmd(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("instance", help="instance file in canonical format")
        p.add_argument("--conflict-format", choices=[EDGE_IDS, ENDPOINTS], default=EDGE_IDS,
                       help="conflict lines as edge ids (default) or endpoint quadruples")
        return p

    p = instance_cmd("solve", "solve exactly with branch-and-bound")
    p.add_argument("--time-limit", type=_positive_float, default=DEFAULT_TIME_LIMIT,
                   help="seconds (default %(default)s)")
    p.add_argument("--solution", help="write the best tree here (cost, then edge ids)")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--seed", type=int, default=0, help="seed for the heuristic warm start")
    p.add_argument("--no-heuristic", action="store_true", help="skip the greedy warm start")
    p.add_argument("--node-limit", type=int, default=50_000_000)
    p.add_argument("--progress", type=_positive_float, metavar="SECONDS",
                   help="print a progress line to stderr at this interval")
    p.set_defaults(func=cmd_solve)

    p = instance_cmd("bound", "print the MST lower bound and greedy upper bound")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("generate", help="write a seeded random instance",
                       description="write a seeded random instance")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    edges = p.add_mutually_exclusive_group(required=True)
    edges.add_argument("--m", type=int, help="number of edges")
    edges.add_argument("--edge-density", type=float, help="fraction of node pairs joined")
    conf = p.add_mutually_exclusive_group(required=True)
    conf.add_argument("--p", type=int, help="number of conflict pairs")
    conf.add_argument("--conflict-density", type=float, help="fraction of edge pairs in conflict")
    p.add_argument("--cost-min", type=int, default=1)
    p.add_argument("--cost-max", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="file or directory (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = instance_cmd("export-lp", "write the flow MILP in LP format")
    p.add_argument("--root", type=int, default=0, help="flow source node (default 0)")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_export_lp)

    p = instance_cmd("check", "validate a solution file against an instance")
    p.add_argument("solution", help="solution file: cost, then one edge id per line")
    p.set_defaults(func=cmd_check)

    p = instance_cmd("oracle", "brute-force optimum for small instances")
    p.add_argument("--max-edges", type=int, default=20)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run a directory of instances and tabulate results",
                       description="run a directory of instances and tabulate results")
    p.add_argument("directory")
    p.add_argument("--mode", choices=MODES, default="exact")
    p.add_argument("--time-limit", type=_positive_float, default=DEFAULT_TIME_LIMIT)
    p.add_argument("--reference", help="CSV with columns name,bk_lb,bk_ub")
    p.add_argument("--format", choices=["csv", "md"], default="csv")
    p.add_argument("--json", action="store_true")
    p.add_argument("--lp-dir", help="output directory for --mode export-lp")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1, help="instances solved in parallel")
    p.add_argument("--legacy-infeas-dev", action="store_true",
                   help="report -100 deviations on infeasible rows")
    p.add_argument("--conflict-format", choices=[EDGE_IDS, ENDPOINTS], default=EDGE_IDS)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except MstcError as exc:
        print(f"mstc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
