"""Command-line entry point: ``commitplan <subcommand> ...``.

Exit codes: 0 success, 1 unsolvable, 2 resource limit, 3 input error, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .compiler import CompilationError, CompilationOptions, compile_task
from .harness import ExternalPlannerConfig, PlannerSpec, external_solve, run_benchmark
from .harness.external import ExternalPlannerError
from .pddl_io import (
    GroundingError,
    GroundingOptions,
    NamingError,
    PDDLError,
    PDDLSyntaxError,
    PlanFileError,
    TaskFormatError,
    emit_pddl,
    ground,
    parse_pddl,
    parse_plan_file,
    read_any,
    write_json_compiled,
    write_json_task,
    write_plan_file,
)
from .plan_map import (
    AttributionError,
    CorruptProvenanceError,
    InvalidPlanError,
    backward_map,
    commit_achievers,
    forward_map,
    permanent_achievers,
)
from .search import Outcome, SearchLimits, solve_greedy, solve_optimal
from .compiler import CompiledTask
from .strips import validate_plan
from .taskgen import GenParams, generate

EXIT_OK, EXIT_UNSOLVABLE, EXIT_LIMIT, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3, 4
TIME_LIMIT_ENV = "COMMITPLAN_TIME_LIMIT"

INPUT_ERRORS = (
    TaskFormatError, PDDLSyntaxError, PDDLError, PlanFileError, FileNotFoundError, IsADirectoryError,
    CompilationError, GroundingError, NamingError, InvalidPlanError, CorruptProvenanceError,
)

log = logging.getLogger("commitplan")


class InputError(ValueError):
    pass


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _add_input(p: argparse.ArgumentParser, flag: str = "--in") -> None:
    p.add_argument(flag, dest="task_in", help="JSON task (strips-task/1 or commit-task/1)")
    p.add_argument("--domain", help="PDDL domain file")
    p.add_argument("--problem", help="PDDL problem file")
    p.add_argument("--reachability", action="store_true", help="prune by delete-relaxed reachability when grounding")


def _load_input(args, required: bool = True):
    if args.task_in:
        return read_any(_read(args.task_in))
    if args.domain or args.problem:
        if not (args.domain and args.problem):
            raise InputError("--domain and --problem must be given together")
        model = parse_pddl(_read(args.domain), _read(args.problem))
        return ground(model, GroundingOptions(relaxed_reachability=args.reachability))
    if required:
        raise InputError("no input task: use --in or --domain/--problem")
    return None


def _limits(args) -> SearchLimits:
    tl = args.time_limit
    if tl is None and os.environ.get(TIME_LIMIT_ENV):
        tl = float(os.environ[TIME_LIMIT_ENV])
    return SearchLimits(time_limit=tl, max_states=args.max_states, max_expansions=getattr(args, "max_expansions", None))


def _add_limits(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, help=f"seconds (default: ${TIME_LIMIT_ENV} or none)")
    p.add_argument("--max-states", type=int, help="memory guard: maximum stored states")
    p.add_argument("--max-expansions", type=int)


def _read_plan(task, path: str) -> tuple[int, ...]:
    parsed = parse_plan_file(_read(path))
    try:
        plan = task.plan_from_names(parsed.actions)
    except KeyError as e:
        raise InputError(f"plan names unknown action {e.args[0]!r}") from None
    if parsed.declared_cost is not None and parsed.declared_cost != task.plan_cost(plan):
        log.warning("declared plan cost %s differs from recomputed %s", parsed.declared_cost, task.plan_cost(plan))
    return plan


# -- subcommands --------------------------------------------------------------


def cmd_compile(args) -> int:
    task = _load_input(args)
    if isinstance(task, CompiledTask):
        raise InputError("input is already a compiled task")
    compiled = compile_task(task, CompilationOptions(max_subset_exponent=args.max_subset_exponent))
    if args.out_format == "json":
        _write(args.out, write_json_compiled(compiled))
        return EXIT_OK
    if not args.out:
        raise InputError("--out DIR is required for PDDL output")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pair = emit_pddl(compiled.task)
    (out / "domain.pddl").write_text(pair.domain_text, encoding="utf-8", newline="\n")
    (out / "problem.pddl").write_text(pair.problem_text, encoding="utf-8", newline="\n")
    sidecar = Path(args.sidecar) if args.sidecar else out / "provenance.json"
    doc = json.loads(write_json_compiled(compiled))
    doc_names = pair.names.to_json()
    sidecar.write_text(json.dumps({"compiled": doc, "pddl_names": doc_names}, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_solve(args) -> int:
    task = _load_input(args)
    if isinstance(task, CompiledTask):
        task = task.task
    elif args.compile:
        task = compile_task(task).task
    limits = _limits(args)
    if args.engine == "optimal":
        result = solve_optimal(task, limits, heuristic=args.heuristic)
    elif args.engine == "greedy":
        result = solve_greedy(task, limits)
    else:
        if not args.planner_cmd:
            raise InputError("--planner-cmd is required for the external engine")
        result = external_solve(ExternalPlannerConfig(args.planner_cmd), task, limits)
    if result.outcome is Outcome.SOLVED:
        if not validate_plan(task, result.plan):
            raise RuntimeError("planner returned an invalid plan")
        _write(args.plan_out, write_plan_file(task, result.plan))
        log.info("solved: cost %s, %s expansions", result.cost, result.stats.expansions)
        return EXIT_OK
    if result.outcome is Outcome.UNSOLVABLE:
        print("unsolvable", file=sys.stderr)
        return EXIT_UNSOLVABLE
    print(f"limit reached: {result.limit}", file=sys.stderr)
    return EXIT_LIMIT


def _base_and_compiled(args):
    task = read_any(_read(args.task)) if args.task else _load_input(args, required=False)
    compiled = read_any(_read(args.compiled)) if args.compiled else None
    if compiled is not None and not isinstance(compiled, CompiledTask):
        raise InputError("--compiled must be a commit-task/1 document")
    if isinstance(task, CompiledTask):
        compiled, task = task, task.base
    if task is None and compiled is not None:
        task = compiled.base
    if task is None:
        raise InputError("need a base task (--task or --domain/--problem) or --compiled")
    return task, compiled


def cmd_map_plan(args) -> int:
    task, compiled = _base_and_compiled(args)
    if args.direction == "forward":
        compiled = compiled or compile_task(task)
        plan = _read_plan(task, args.plan)
        result = forward_map(task, plan, compiled)
        target, source = compiled.task, task
    else:
        if compiled is None:
            raise InputError("backward mapping needs --compiled")
        plan = _read_plan(compiled.task, args.plan)
        check = validate_plan(compiled.task, plan)
        if not check.valid:
            raise InvalidPlanError(check.failure.message)
        result = backward_map(compiled, plan)
        target, source = compiled.base, compiled.task
    if args.plan_out:
        _write(args.plan_out, write_plan_file(target, result.plan))
    _write(None, json.dumps(result.to_json(source, target, args.direction), indent=2) + "\n")
    return EXIT_OK


def cmd_analyze(args) -> int:
    task, compiled = _base_and_compiled(args)
    if compiled is not None:
        plan_c = _read_plan(compiled.task, args.plan)
        base_plan = backward_map(compiled, plan_c).plan
        report = permanent_achievers(compiled.base, base_plan)
        doc = report.to_json(base_plan)
        doc["commit_achievers"] = {
            compiled.base.fluents[g]: k for g, k in commit_achievers(compiled, plan_c).items()
        }
    else:
        plan = _read_plan(task, args.plan)
        doc = permanent_achievers(task, plan).to_json(plan)
    _write(None, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_gen(args) -> int:
    params = GenParams(
        fluents=tuple(args.fluents), actions=tuple(args.actions), max_pre=args.max_pre,
        min_add=args.min_add, max_add=args.max_add, max_del=args.max_del, neg_pre_prob=args.neg_pre_prob,
        goals=tuple(args.goals), goal_init_prob=args.goal_init_prob, costs=tuple(args.costs), seed=args.seed,
    )
    _write(args.out, write_json_task(generate(params)))
    return EXIT_OK


def cmd_bench(args) -> int:
    external = ExternalPlannerConfig(args.planner_cmd) if args.engine == "external" else None
    if args.engine == "external" and not args.planner_cmd:
        raise InputError("--planner-cmd is required for the external engine")
    summary = run_benchmark(
        args.suite, PlannerSpec(args.engine, external), _limits(args), args.csv,
        both_variants=args.both_variants, workers=args.workers, sidecar=args.sidecar,
    )
    print(summary.table)
    print(f"\n{summary.ran} task(s) run, {summary.skipped} already recorded")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commitplan", description="Commit-action compilation toolkit for STRIPS tasks")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a task into its commit task")
    _add_input(p)
    p.add_argument("--out-format", choices=("json", "pddl"), default="json")
    p.add_argument("--out", help="output file (json) or directory (pddl); json defaults to stdout")
    p.add_argument("--sidecar", help="provenance JSON path for PDDL output (default: OUT/provenance.json)")
    p.add_argument("--max-subset-exponent", type=int, default=CompilationOptions().max_subset_exponent)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("solve", help="solve a task and print an IPC plan")
    _add_input(p)
    p.add_argument("--engine", choices=("optimal", "greedy", "external"), default="optimal")
    p.add_argument("--heuristic", choices=("hmax", "blind"), default="hmax")
    p.add_argument("--compile", action="store_true", help="solve the commit compilation of the input")
    p.add_argument("--planner-cmd", help="external planner template with {domain} {problem} {plan_out}")
    p.add_argument("--plan-out")
    _add_limits(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("map-plan", help="map a plan between a task and its commit task")
    p.add_argument("--direction", choices=("forward", "backward"), required=True)
    p.add_argument("--task", help="base task JSON")
    p.add_argument("--compiled", help="compiled task JSON")
    p.add_argument("--plan", required=True)
    p.add_argument("--plan-out")
    _add_input(p, "--in")
    p.set_defaults(func=cmd_map_plan)

    p = sub.add_parser("analyze", help="report permanent goal achievers of a plan")
    p.add_argument("--task", help="base task JSON")
    p.add_argument("--compiled", help="compiled task JSON; the plan is then a compiled plan")
    p.add_argument("--plan", required=True)
    _add_input(p, "--in")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", help="generate a random task")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fluents", type=int, nargs=2, default=(2, 8), metavar=("MIN", "MAX"))
    p.add_argument("--actions", type=int, nargs=2, default=(1, 8), metavar=("MIN", "MAX"))
    p.add_argument("--goals", type=int, nargs=2, default=(1, 3), metavar=("MIN", "MAX"))
    p.add_argument("--costs", type=int, nargs=2, default=(1, 3), metavar=("MIN", "MAX"))
    p.add_argument("--max-pre", type=int, default=2)
    p.add_argument("--min-add", type=int, default=1)
    p.add_argument("--max-add", type=int, default=2)
    p.add_argument("--max-del", type=int, default=2)
    p.add_argument("--neg-pre-prob", type=float, default=0.2)
    p.add_argument("--goal-init-prob", type=float, default=0.15)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a suite on original and compiled tasks")
    p.add_argument("--suite", required=True)
    p.add_argument("--csv", required=True)
    p.add_argument("--engine", choices=("optimal", "blind", "greedy", "external"), default="optimal")
    p.add_argument("--both-variants", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--planner-cmd")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sidecar", help="best-known cost JSON (default: CSV.best.json)")
    _add_limits(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (ExternalPlannerError, AttributionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
