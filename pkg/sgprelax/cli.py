"""
sgprelax command-line interface

    sgprelax parse <file>
    sgprelax relax <file|builtin:Pk> --level=ecpr|secpr [--cuts=...] [--override-bounds=...]
    sgprelax solve-conic <dumpfile> [--tol=1e-8]
    sgprelax sequential <file|builtin:Pk> [--eps=1e-6] [--max-iter=100] [--penalty=1e3]
    sgprelax bench [--all] [--format=table|csv] [--out=<path>]
    sgprelax fixtures

Exit codes: 0 success, 1 parse/input error, 2 solver failure, 3 no convergence.
"""
import argparse
import logging
import os
import sys
import time
from typing import List, Optional

from pydantic import ValidationError

from sgprelax import bench, fixtures, sequential
from sgprelax.config import configure_logging, get_seq_settings, get_solver_settings
from sgprelax.conic import read_conic
from sgprelax.corpus import load_bound_overrides, load_source
from sgprelax.exceptions import BadStatus, NotConverged, SgpRelaxError
from sgprelax.model import serialize
from sgprelax.relax import RelaxOptions
from sgprelax.schemas import (
    DEFAULT_CUTS,
    CutFamily,
    OutputFormat,
    RelaxLevel,
    RunConfig,
    SeqStatus,
    SolverMethod,
    SolveStatus,
    StepNorm,
)
from sgprelax.solver import format_result_line, solve

logger = logging.getLogger(__name__)


def parse_cuts(text: Optional[str]) -> List[CutFamily]:
    if text is None:
        return sorted(DEFAULT_CUTS)
    text = text.strip().lower()
    if text == "all":
        return list(CutFamily)
    if text in ("", "none"):
        return []
    return [CutFamily(part.strip()) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgprelax", description="Exponential-conic relaxations of signomial programs"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="Parse a .sgp file and print its canonical form")
    p.add_argument("source")

    def solver_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=None, help="Absolute and relative tolerance")
        p.add_argument("--max-solver-iter", type=int, default=None)
        p.add_argument("--time-limit", type=float, default=None)
        p.add_argument("--method", choices=[m.value for m in SolverMethod], default=None)

    p = sub.add_parser("relax", help="Build and solve a relaxation")
    p.add_argument("source")
    p.add_argument("--level", choices=[lvl.value for lvl in RelaxLevel], default=RelaxLevel.SECPR.value)
    p.add_argument("--cuts", default=None, help="Comma list of varhull,gammahull,monolb,monoub, or all")
    p.add_argument("--override-bounds", default=None, help="Named override set or CSV name,lo,hi")
    p.add_argument("--dump-conic", default=None, help="Write the conic problem to this path")
    solver_flags(p)

    p = sub.add_parser("solve-conic", help="Solve a conic dump file")
    p.add_argument("source")
    solver_flags(p)

    p = sub.add_parser("sequential", help="Run the sequential algorithm")
    p.add_argument("source")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--penalty", type=float, default=None)
    p.add_argument("--init-level", choices=[lvl.value for lvl in RelaxLevel], default=None)
    p.add_argument("--norm", choices=[n.value for n in StepNorm], default=None)
    p.add_argument("--trace", default=None, help="CSV path for the iteration trace")
    solver_flags(p)

    p = sub.add_parser("bench", help="Relaxation table over the built-in corpus")
    p.add_argument("--all", dest="include_all", action="store_true", help="Include P8")
    p.add_argument("--only", default="", help="Comma list of instance names")
    p.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat],
                   default=OutputFormat.TABLE.value)
    p.add_argument("--out", default=None)
    solver_flags(p)

    p = sub.add_parser("fixtures", help="Check the hard-coded relaxations")
    solver_flags(p)
    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    """Validate flags before any work starts"""
    tol = getattr(args, "tol", None)
    solver = get_solver_settings(
        eps_abs=tol,
        eps_rel=tol,
        max_iters=getattr(args, "max_solver_iter", None),
        time_limit=getattr(args, "time_limit", None),
        method=getattr(args, "method", None),
    )
    seq = get_seq_settings(
        eps=getattr(args, "eps", None),
        max_iters=getattr(args, "max_iter", None),
        w=getattr(args, "penalty", None),
        w_prime=getattr(args, "penalty", None),
        init_level=getattr(args, "init_level", None),
        norm=getattr(args, "norm", None),
        solver=solver,
    )
    only = [name for name in getattr(args, "only", "").split(",") if name]
    return RunConfig(
        subcommand=args.subcommand,
        source=getattr(args, "source", None),
        level=getattr(args, "level", RelaxLevel.SECPR.value),
        cuts=parse_cuts(getattr(args, "cuts", None)),
        override_bounds=getattr(args, "override_bounds", None),
        dump_conic=getattr(args, "dump_conic", None),
        solver=solver,
        seq=seq,
        trace=getattr(args, "trace", None),
        include_all=getattr(args, "include_all", False),
        output_format=getattr(args, "output_format", OutputFormat.TABLE.value),
        out=getattr(args, "out", None),
        only=only,
    )


def cmd_parse(config: RunConfig) -> int:
    problem, _ = load_source(config.source)
    print(serialize(problem), end="")
    print(
        f"# {problem.name}: {problem.n_vars} variables, {len(problem.constraints)} constraints, "
        f"{len(problem.objective)} objective terms"
    )
    return 0


def cmd_relax(config: RunConfig) -> int:
    problem, entry = load_source(config.source)
    options = RelaxOptions(
        cuts=frozenset(config.cuts), bound_overrides=load_bound_overrides(config.override_bounds)
    )
    row = bench.relax_row(problem, config.level, entry, options, config.solver, config.dump_conic)
    print(bench.render([row], config.output_format), end="")
    if not SolveStatus(row.status).has_solution:
        raise BadStatus(row.status)
    return 0


def cmd_solve_conic(config: RunConfig) -> int:
    with open(config.source, encoding="utf-8") as handle:
        problem = read_conic(handle.read())
    result = solve(problem, config.solver)
    print(format_result_line(result))
    return 0 if result.status.has_solution else BadStatus.exit_code


def cmd_sequential(config: RunConfig) -> int:
    problem, _ = load_source(config.source)
    started = time.perf_counter()
    try:
        result = sequential.run(problem, config.seq)
    except SgpRelaxError as e:
        trace = getattr(e, "trace", None)
        if config.trace and trace is not None:
            sequential.write_trace_csv(trace, config.trace)
        raise
    if config.trace:
        sequential.write_trace_csv(result.trace, config.trace)
    elapsed = time.perf_counter() - started
    point = " ".join(f"{v:.8g}" for v in result.x)
    print(
        f"status={result.status.value} obj={result.objective:.10g} iters={result.iterations} "
        f"time={elapsed:.2f}s x=[{point}]"
    )
    if result.status != SeqStatus.CONVERGED:
        raise NotConverged(f"sequential run ended with status {result.status.value}")
    return 0


def cmd_bench(config: RunConfig) -> int:
    rows = bench.bench_rows(config.include_all, config.only, config.solver)
    text = bench.render(rows, config.output_format)
    if config.out:
        directory = os.path.dirname(config.out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"💾 Bench table written to {config.out}")
    else:
        print(text, end="")
    if rows and all(row.lb is None for row in rows):
        return BadStatus.exit_code
    return 0


def cmd_fixtures(config: RunConfig) -> int:
    results = fixtures.run_fixtures(config.solver)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        value = "-" if r.objective is None else f"{r.objective:.6f}"
        extra = f"  ({r.note})" if r.note else ""
        print(f"{mark} {r.name:10s} objective={value} expected={r.expected}{extra}")
    return 0 if all(r.passed for r in results) else BadStatus.exit_code


COMMANDS = {
    "parse": cmd_parse,
    "relax": cmd_relax,
    "solve-conic": cmd_solve_conic,
    "sequential": cmd_sequential,
    "bench": cmd_bench,
    "fixtures": cmd_fixtures,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = to_config(args)
        return COMMANDS[config.subcommand](config)
    except ValidationError as e:
        logger.error(f"❌ Invalid arguments: {e}")
        return 1
    except SgpRelaxError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return e.exit_code
    except (OSError, ValueError) as e:
        logger.error(f"❌ {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
