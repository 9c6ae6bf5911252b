"""Batch runs over an instance directory with deviation metrics and table output.

Seconds are raw wall-clock on the local machine.  No cross-CPU
normalization is applied; scale by your own CPU ratio before comparing
with published timings.
"""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import fmean
from typing import Optional

from .bnb import DEFAULT_TIME_LIMIT, INFEASIBLE, OPTIMAL, solve
from .bounds import greedy_upper_bound, mst_lower_bound
from .errors import InputError, MstcError
from .instance_io import EDGE_IDS, read_instance
from .model import build_flow_model, emit_lp

EXACT = "exact"
HEURISTIC = "heuristic"
EXPORT_LP = "export-lp"
MODES = (EXACT, HEURISTIC, EXPORT_LP)

STATUS_INFEAS = "Infeas"
STATUS_ERROR = "Error"
CSV_HEADER = ["name", "n", "m", "p", "status", "lb", "ub", "seconds", "dev_lb", "dev_ub"]
INSTANCE_SUFFIXES = (".mstc", ".txt", ".dat")


def deviation_lb(lb: int, bk_lb: int) -> Optional[float]:
    """Percent gap of ``lb`` below the best-known lower bound (negative is an improvement)."""
    if bk_lb == 0:
        return None
    return 100.0 * (bk_lb - lb) / bk_lb


def deviation_ub(ub: int, bk_ub: int) -> Optional[float]:
    """Percent gap of ``ub`` above the best-known upper bound (negative is an improvement)."""
    if bk_ub == 0:
        return None
    return 100.0 * (ub - bk_ub) / bk_ub


@dataclass
class BenchRow:
    name: str
    n: Optional[int]
    m: Optional[int]
    p: Optional[int]
    status: str
    lb: Optional[int] = None
    ub: Optional[int] = None
    seconds: float = 0.0
    dev_lb: Optional[float] = None
    dev_ub: Optional[float] = None


@dataclass
class BenchConfig:
    time_limit: float = DEFAULT_TIME_LIMIT
    mode: str = EXACT
    lp_dir: Optional[Path] = None
    root: int = 0
    seed: int = 0
    conflict_format: str = EDGE_IDS
    legacy_infeas_dev: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown mode {self.mode!r}; choose from {', '.join(MODES)}")


@dataclass
class Summary:
    rows: int
    mean_dev_lb: Optional[float]
    mean_dev_ub: Optional[float]
    feasible_mean_dev_lb: Optional[float]
    feasible_mean_dev_ub: Optional[float]
    status_counts: dict = field(default_factory=dict)


def _r4(x):
    return None if x is None else round(x, 4)


def list_instances(directory) -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"{directory}: not a directory")
    return sorted(
        (f for f in directory.iterdir() if f.is_file() and f.suffix in INSTANCE_SUFFIXES),
        key=lambda f: f.stem,
    )


def load_reference(path) -> dict[str, tuple[Optional[int], Optional[int]]]:
    """Read a ``name,bk_lb,bk_ub`` CSV; blank cells mean unknown."""
    ref = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"name", "bk_lb", "bk_ub"} - set(reader.fieldnames or ())
        if missing:
            raise InputError(f"{path}: reference CSV lacks columns {sorted(missing)}")
        for lineno, rec in enumerate(reader, start=2):
            try:
                lb = int(rec["bk_lb"]) if rec["bk_lb"].strip() else None
                ub = int(rec["bk_ub"]) if rec["bk_ub"].strip() else None
            except ValueError:
                raise InputError(f"{path}:{lineno}: non-integer reference bound") from None
            ref[rec["name"].strip()] = (lb, ub)
    return ref


def run_instance(path, config: BenchConfig) -> BenchRow:
    path = Path(path)
    start = time.perf_counter()
    try:
        inst = read_instance(path, config.conflict_format)
    except MstcError as exc:
        return BenchRow(path.stem, None, None, None, f"{STATUS_ERROR}: {exc}")
    row = BenchRow(inst.name or path.stem, inst.n, inst.m, inst.p, "")
    try:
        if config.mode == EXACT:
            rep = solve(inst, config.time_limit)
            row.status = STATUS_INFEAS if rep.status == INFEASIBLE else rep.status
            row.lb, row.ub = rep.lower_bound, rep.upper_bound
        elif config.mode == HEURISTIC:
            lo = mst_lower_bound(inst)
            up = greedy_upper_bound(inst, seed=config.seed)
            if lo is None:
                row.status = STATUS_INFEAS
            else:
                row.lb = lo.value
                row.ub = up.value if up else None
                row.status = OPTIMAL if up is not None and up.value == lo.value else "Bounds"
        else:
            text = emit_lp(build_flow_model(inst, config.root))
            out_dir = Path(config.lp_dir) if config.lp_dir else path.parent
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"{path.stem}.lp").write_text(text, encoding="ascii")
            row.status = "Exported"
    except MstcError as exc:
        row.status = f"{STATUS_ERROR}: {exc}"
    row.seconds = round(time.perf_counter() - start, 4)
    return row


def apply_reference(row: BenchRow, ref, legacy_infeas_dev: bool = False) -> BenchRow:
    if ref is None:
        return row
    bk_lb, bk_ub = ref
    if row.status == STATUS_INFEAS:
        if legacy_infeas_dev:
            row.dev_lb = -100.0 if bk_lb else None
            row.dev_ub = -100.0 if bk_ub else None
        return row
    if row.lb is not None and bk_lb:
        row.dev_lb = _r4(deviation_lb(row.lb, bk_lb))
    if row.ub is not None and bk_ub:
        row.dev_ub = _r4(deviation_ub(row.ub, bk_ub))
    return row


def summarize(rows: list[BenchRow]) -> Summary:
    both = [r for r in rows if r.dev_lb is not None and r.dev_ub is not None]
    feasible = [r for r in both if r.status != STATUS_INFEAS]
    counts: dict[str, int] = {}
    for r in rows:
        key = r.status.split(":")[0]
        counts[key] = counts.get(key, 0) + 1

    def mean(vals):
        return _r4(fmean(vals)) if vals else None

    return Summary(
        len(rows),
        mean([r.dev_lb for r in both]),
        mean([r.dev_ub for r in both]),
        mean([r.dev_lb for r in feasible]),
        mean([r.dev_ub for r in feasible]),
        counts,
    )


def _run_one(args):
    path, config = args
    return run_instance(path, config)


def run_suite(directory, config: Optional[BenchConfig] = None, reference=None):
    """Run every instance file in ``directory``; rows come back sorted by name.

    ``reference`` is a mapping ``name -> (bk_lb, bk_ub)`` or a path to a
    reference CSV.
    """
    config = config or BenchConfig()
    if reference is not None and not isinstance(reference, dict):
        reference = load_reference(reference)
    paths = list_instances(directory)
    jobs = [(p, config) for p in paths]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_run_one, jobs))
    else:
        rows = [_run_one(j) for j in jobs]
    rows.sort(key=lambda r: r.name)
    if reference is not None:
        for r in rows:
            apply_reference(r, reference.get(r.name), config.legacy_infeas_dev)
    return rows, summarize(rows)


def _cell(value, digits=4):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow(
            [r.name, _cell(r.n), _cell(r.m), _cell(r.p), r.status, _cell(r.lb), _cell(r.ub),
             _cell(r.seconds), _cell(r.dev_lb), _cell(r.dev_ub)]
        )
    return buf.getvalue()


def rows_from_csv(text: str) -> list[BenchRow]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_HEADER:
        raise InputError(f"unexpected CSV header {reader.fieldnames}")

    def opt(cast, s):
        return cast(s) if s != "" else None

    return [
        BenchRow(
            rec["name"], opt(int, rec["n"]), opt(int, rec["m"]), opt(int, rec["p"]), rec["status"],
            opt(int, rec["lb"]), opt(int, rec["ub"]), float(rec["seconds"]),
            opt(float, rec["dev_lb"]), opt(float, rec["dev_ub"]),
        )
        for rec in reader
    ]


def rows_to_markdown(rows: list[BenchRow], summary: Optional[Summary] = None) -> str:
    head = ["name", "n", "m", "p", "status", "LB", "UB", "Sec", "Dev LB %", "Dev UB %"]
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for r in rows:
        cells = [r.name, _cell(r.n), _cell(r.m), _cell(r.p), r.status, _cell(r.lb), _cell(r.ub),
                 _cell(r.seconds, 2), _cell(r.dev_lb), _cell(r.dev_ub)]
        lines.append("| " + " | ".join(cells) + " |")
    if summary is not None:
        lines.append("| Averages |  |  |  |  |  |  |  | "
                     f"{_cell(summary.mean_dev_lb)} | {_cell(summary.mean_dev_ub)} |")
        lines.append("| Averages (excl. Infeas) |  |  |  |  |  |  |  | "
                     f"{_cell(summary.feasible_mean_dev_lb)} | {_cell(summary.feasible_mean_dev_ub)} |")
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[BenchRow], summary: Summary) -> dict:
    def clean(d):
        return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in d.items()}

    return {"rows": [clean(asdict(r)) for r in rows], "summary": asdict(summary)}
