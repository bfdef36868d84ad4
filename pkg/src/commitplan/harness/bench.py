"""Batch benchmark runner producing a resumable CSV and IPC-style summary tables.

Each suite task is run on its original and (optionally) compiled form.  Rows for
one task are written together, so a crash leaves at most one incomplete task,
which is discarded and re-run on resume.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Callable, Iterable

from ..compiler import compile_task
from ..plan_map import backward_map
from ..pddl_io import GroundingOptions, ground, parse_pddl, read_json_task
from ..search import Outcome, SearchLimits, SearchResult, solve_greedy, solve_optimal
from ..strips import Task, validate_plan
from .external import ExternalPlannerConfig, external_solve
from .metrics import DEFAULT_HORIZON, agl_score, sat_score

log = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
VARIANTS = ("original", "compiled")
ENGINES = ("optimal", "blind", "greedy", "external")


@dataclass(frozen=True)
class SuiteTask:
    task_id: str
    domain: str
    problem: Path
    kind: str = "json"  # "json" or "pddl"
    domain_file: Path | None = None


@dataclass(frozen=True)
class PlannerSpec:
    engine: str = "optimal"
    external: ExternalPlannerConfig | None = None

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine == "external" and self.external is None:
            raise ValueError("external engine needs an ExternalPlannerConfig")


@dataclass
class BenchRecord:
    schema_version: str
    task_id: str
    domain: str
    variant: str
    outcome: str
    cost: int | None
    plan_length: int | None
    t_parse: float
    t_ground: float
    t_compile: float
    t_search: float
    t_total: float
    expansions: int
    best_known: int | None
    sat_score: float
    agl_score: float
    error: str = ""

    @property
    def solved(self) -> bool:
        return self.outcome == Outcome.SOLVED.value

    def to_row(self) -> dict[str, str]:
        row = {}
        for k, v in asdict(self).items():
            if v is None:
                row[k] = ""
            elif isinstance(v, float):
                row[k] = f"{v:.6f}"
            else:
                row[k] = str(v)
        return row

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "BenchRecord":
        def opt_int(s):
            return int(s) if s != "" else None

        return cls(
            row["schema_version"], row["task_id"], row["domain"], row["variant"], row["outcome"],
            opt_int(row["cost"]), opt_int(row["plan_length"]),
            float(row["t_parse"]), float(row["t_ground"]), float(row["t_compile"]),
            float(row["t_search"]), float(row["t_total"]), int(row["expansions"]),
            opt_int(row["best_known"]), float(row["sat_score"]), float(row["agl_score"]), row["error"],
        )


CSV_HEADER = [f.name for f in fields(BenchRecord)]


def _find_domain(problem: Path) -> Path | None:
    stem = problem.stem
    for cand in (f"{stem}-domain.pddl", f"domain-{stem}.pddl", f"domain_{stem}.pddl", "domain.pddl"):
        p = problem.parent / cand
        if p.exists():
            return p
    return None


def discover_suite(suite_dir: str | os.PathLike) -> list[SuiteTask]:
    """JSON task files and PDDL problems (with a sibling domain file) under ``suite_dir``."""
    root = Path(suite_dir)
    out = []
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        rel = path.relative_to(root)
        domain = rel.parts[0] if len(rel.parts) > 1 else root.name
        task_id = rel.with_suffix("").as_posix()
        if path.suffix == ".json":
            out.append(SuiteTask(task_id, domain, path))
        elif path.suffix == ".pddl" and "domain" not in path.stem:
            out.append(SuiteTask(task_id, domain, path, "pddl", _find_domain(path)))
    return out


def _solve(planner: PlannerSpec, task: Task, limits: SearchLimits) -> SearchResult:
    if planner.engine == "optimal":
        return solve_optimal(task, limits, heuristic="hmax")
    if planner.engine == "blind":
        return solve_optimal(task, limits, heuristic="blind")
    if planner.engine == "greedy":
        return solve_greedy(task, limits)
    return external_solve(planner.external, task, limits)


def run_task(
    entry: SuiteTask,
    planner: PlannerSpec,
    limits: SearchLimits,
    variants: tuple[str, ...] = VARIANTS,
    best_known: int | None = None,
    clock: Callable[[], float] = time.perf_counter,
    horizon: float = DEFAULT_HORIZON,
) -> list[BenchRecord]:
    """Run every variant of one suite task; failures become error rows."""
    rows: list[dict] = []
    t_parse = t_ground = 0.0
    task = None
    try:
        t0 = clock()
        if entry.kind == "json":
            task_doc = entry.problem.read_text(encoding="utf-8")
            t1 = clock()
            task = read_json_task(task_doc)
            t2 = clock()
        else:
            if entry.domain_file is None:
                raise FileNotFoundError(f"no domain file for {entry.problem}")
            model = parse_pddl(entry.domain_file.read_text(encoding="utf-8"), entry.problem.read_text(encoding="utf-8"))
            t1 = clock()
            task = ground(model, GroundingOptions())
            t2 = clock()
        t_parse, t_ground = t1 - t0, t2 - t1
    except Exception as e:  # noqa: BLE001 - any input failure becomes a row
        for v in variants:
            rows.append(dict(variant=v, outcome="error", error=f"{type(e).__name__}: {e}"))

    if task is not None:
        for v in variants:
            row = dict(variant=v, t_parse=t_parse, t_ground=t_ground)
            try:
                target = task
                compiled = None
                if v == "compiled":
                    c0 = clock()
                    compiled = compile_task(task)
                    target = compiled.task
                    row["t_compile"] = clock() - c0
                s0 = clock()
                result = _solve(planner, target, limits)
                row["t_search"] = clock() - s0
                row["outcome"] = result.outcome.value
                row["expansions"] = result.stats.expansions
                if result.solved:
                    check = validate_plan(target, result.plan)
                    if not check.valid or check.cost != result.cost:
                        raise RuntimeError(f"planner produced an invalid plan: {check.failure}")
                    if compiled is not None and not validate_plan(task, backward_map(compiled, result.plan).plan):
                        raise RuntimeError("compiled plan does not map back to a plan for the original task")
                    row["cost"] = check.cost
                    row["plan_length"] = len(result.plan)
                elif result.limit:
                    row["error"] = f"limit: {result.limit}"
            except Exception as e:  # noqa: BLE001
                row["outcome"] = "error"
                row["error"] = f"{type(e).__name__}: {e}"
            rows.append(row)

    costs = [r["cost"] for r in rows if r.get("cost") is not None]
    if best_known is not None:
        costs.append(best_known)
    best = min(costs) if costs else None

    records = []
    for r in rows:
        t_total = r.get("t_parse", 0.0) + r.get("t_ground", 0.0) + r.get("t_compile", 0.0) + r.get("t_search", 0.0)
        solved = r.get("outcome") == Outcome.SOLVED.value
        records.append(BenchRecord(
            SCHEMA_VERSION, entry.task_id, entry.domain, r["variant"], r.get("outcome", "error"),
            r.get("cost"), r.get("plan_length"),
            r.get("t_parse", 0.0), r.get("t_ground", 0.0), r.get("t_compile", 0.0), r.get("t_search", 0.0),
            t_total, r.get("expansions", 0), best,
            sat_score(best, r.get("cost")) if solved else 0.0,
            agl_score(t_total, horizon) if solved else 0.0,
            r.get("error", ""),
        ))
    return records


def _run_unit(args) -> list[BenchRecord]:
    return run_task(*args)


def read_csv(path: str | os.PathLike) -> list[BenchRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is not None and reader.fieldnames != CSV_HEADER:
            raise ValueError(f"{path}: CSV header does not match schema version {SCHEMA_VERSION}")
        rows = list(reader)
    records = []
    for i, row in enumerate(rows):
        try:
            records.append(BenchRecord.from_row(row))
        except (TypeError, ValueError, KeyError):
            # a torn final line from an interrupted write is dropped; anything else is corruption
            if i != len(rows) - 1:
                raise ValueError(f"{path}: malformed row {i + 2}") from None
            log.warning("%s: dropping incomplete trailing row", path)
    return records


def _load_best(path: Path) -> dict[str, int]:
    if path.exists():
        return {k: int(v) for k, v in json.loads(path.read_text()).items()}
    return {}


def _save_best(path: Path, best: dict[str, int]) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(dict(sorted(best.items())), indent=2) + "\n")
    os.replace(tmp, path)


@dataclass
class BenchSummary:
    records: list[BenchRecord]
    table: str
    ran: int
    skipped: int


def run_benchmark(
    suite_dir: str | os.PathLike,
    planner: PlannerSpec,
    limits: SearchLimits,
    csv_out: str | os.PathLike,
    both_variants: bool = True,
    workers: int = 1,
    sidecar: str | os.PathLike | None = None,
    clock: Callable[[], float] = time.perf_counter,
    horizon: float = DEFAULT_HORIZON,
) -> BenchSummary:
    csv_path = Path(csv_out)
    best_path = Path(sidecar) if sidecar else csv_path.with_name(csv_path.name + ".best.json")
    variants = VARIANTS if both_variants else ("original",)
    suite = discover_suite(suite_dir)

    kept: list[BenchRecord] = []
    if csv_path.exists() and csv_path.stat().st_size > 0:
        previous = read_csv(csv_path)
        seen = defaultdict(set)
        for r in previous:
            seen[r.task_id].add(r.variant)
        complete = {t for t, vs in seen.items() if set(variants) <= vs}
        kept = [r for r in previous if r.task_id in complete]
    done_ids = {r.task_id for r in kept}

    # rewrite without any partially recorded task, then append
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
        writer.writeheader()
        for r in kept:
            writer.writerow(r.to_row())

    best = _load_best(best_path)
    todo = [e for e in suite if e.task_id not in done_ids]
    units = [(e, planner, limits, variants, best.get(e.task_id), clock, horizon) for e in todo]

    def results() -> Iterable[list[BenchRecord]]:
        if workers <= 1:
            for u in units:
                yield _run_unit(u)
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                yield from pool.map(_run_unit, units)

    new: list[BenchRecord] = []
    with open(csv_path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
        for recs in results():
            for r in recs:
                writer.writerow(r.to_row())
            fh.flush()
            os.fsync(fh.fileno())
            new.extend(recs)
            solved = [r.cost for r in recs if r.cost is not None]
            if solved:
                tid = recs[0].task_id
                best[tid] = min([*solved, *([best[tid]] if tid in best else [])])
                _save_best(best_path, best)
            log.info("%s: %s", recs[0].task_id, ", ".join(f"{r.variant}={r.outcome}" for r in recs))

    records = kept + new
    return BenchSummary(records, summary_table(records), len(todo), len(done_ids))


def aggregate(records: list[BenchRecord]) -> dict[str, dict[str, dict[str, float]]]:
    """Per-domain coverage, SAT and AGL sums, recomputed from record fields alone."""
    best: dict[str, int] = {}
    for r in records:
        for c in (r.cost, r.best_known):
            if c is not None:
                best[r.task_id] = min(best.get(r.task_id, c), c)
    tasks: dict[str, set[str]] = defaultdict(set)
    table: dict[str, dict[str, dict[str, float]]] = defaultdict(
        lambda: {v: {"coverage": 0, "sat": 0.0, "agl": 0.0} for v in VARIANTS}
    )
    for r in records:
        tasks[r.domain].add(r.task_id)
        cell = table[r.domain][r.variant]
        if r.solved:
            cell["coverage"] += 1
            cell["sat"] += sat_score(best[r.task_id], r.cost)
            cell["agl"] += agl_score(r.t_total)
    for d in table:
        table[d]["tasks"] = len(tasks[d])
    return dict(table)


def summary_table(records: list[BenchRecord]) -> str:
    """Text table shaped like the IPC comparison tables; ``*`` marks the better variant (ties: both)."""
    agg = aggregate(records)
    variants = [v for v in VARIANTS if any(r.variant == v for r in records)] or ["original"]

    def cells(row: dict, key: str, fmt: str) -> list[str]:
        vals = [round(row[v][key], 1) for v in variants]
        top = max(vals) if vals else 0
        return [(fmt.format(x) + ("*" if len(vals) > 1 and x == top else "")) for x in vals]

    head = ["Domain (#Tasks)"]
    for metric in ("Cov", "SAT", "AGL"):
        head += [f"{metric} {'P' if v == 'original' else 'Pc'}" for v in variants]
    lines = [head]
    total = {v: {"coverage": 0, "sat": 0.0, "agl": 0.0} for v in VARIANTS}
    ntasks = 0
    for d in sorted(agg):
        row = agg[d]
        ntasks += row["tasks"]
        for v in VARIANTS:
            for k in total[v]:
                total[v][k] += row[v][k]
        lines.append([f"{d} ({row['tasks']})", *cells(row, "coverage", "{:.0f}"),
                      *cells(row, "sat", "{:.1f}"), *cells(row, "agl", "{:.1f}")])
    lines.append([f"Total ({ntasks})", *cells(total, "coverage", "{:.0f}"),
                  *cells(total, "sat", "{:.1f}"), *cells(total, "agl", "{:.1f}")])
    widths = [max(len(r[i]) for r in lines) for i in range(len(head))]
    return "\n".join("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))) for r in lines)
