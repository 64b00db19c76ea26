"""Command-line front end.

Subcommands cover the full workflow: ``encode`` (emit DIMACS plus the
variable-mapping sidecar), ``enumerate`` (run the search and print solutions
as graph6), ``cube-gen`` / ``cube-solve`` / ``merge`` (split a hard instance
into cubes, solve id ranges independently — possibly on different machines —
and merge the reports), ``embed`` (the orthogonal-embeddability pipeline),
and ``verify`` (replay a clause log against its formula and witnesses).

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 verification
failure.  Solutions and verdicts go to stdout (or ``--output``); the
run-statistics summary goes to stderr as one JSON line so stdout stays
machine-readable.  All randomness sits behind ``--seed`` (default 1);
identical flags and seed reproduce identical output in single-job mode.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .cubes import (
    dedup_merge,
    generate_cubes,
    read_cube_file,
    read_report,
    solve_cubes,
    write_cube_file,
    write_report,
)
from .embed import UnembeddableLibrary, run_pipeline
from .encodings import (
    EncodingBundle,
    emit_mapping,
    encode_ks_existential,
    encode_triangle_free,
    parse_mapping,
)
from .graphs import graph6_encode
from .minimality import DEFAULT_BUDGET
from .sat import ClauseLog, HookPolicy, emit_dimacs, parse_dimacs
from .search import (
    ALL,
    FIRST,
    Color010Checker,
    KColoringChecker,
    accept_all,
    run_search,
)
from .verify import (
    brute_k_colorable,
    brute_valid_010_exists,
    has_triangle,
    verify_log,
)

__all__ = ["RunConfig", "main"]

PROBLEMS = ("triangle-free-noncolorable", "ks-candidates", "dimacs")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_VERIFY = 3

# brute-force re-checking of solution graphs is held to this order
BRUTE_CHECK_MAX_N = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; here usage errors are exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation.  Which fields matter depends on the
    subcommand; ``from_args`` rejects meaningless combinations."""

    subcommand: str
    problem: Optional[str] = None
    n: Optional[int] = None
    k: int = 3
    mode: str = ALL
    dimacs: Optional[str] = None
    mapping: Optional[str] = None
    threshold: Optional[int] = None
    prerun: float = 0.0
    jobs: int = 1
    start: int = 0
    stop: Optional[int] = None
    seed: int = 1
    gate: int = 20
    budget: int = DEFAULT_BUDGET
    output: Optional[str] = None
    log: Optional[str] = None
    stats: Optional[str] = None
    mapping_out: Optional[str] = None
    cubes: Optional[str] = None
    reports: tuple[str, ...] = ()
    input: Optional[str] = None
    library: Optional[str] = None
    no_builtin: bool = False
    solver: Optional[str] = None
    timeout: float = 10.0
    retries: int = 3

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = {f.name for f in dataclasses.fields(cls)}
        given = {k: v for k, v in vars(ns).items() if k in fields}
        if "reports" in given:
            given["reports"] = tuple(given["reports"])
        cfg = cls(**given)
        cfg._validate()
        return cfg

    def _validate(self) -> None:
        if self.problem is not None:
            if self.problem == "dimacs":
                if not self.dimacs or not self.mapping:
                    raise UsageError(
                        "--problem dimacs needs --dimacs and --mapping"
                    )
                if self.subcommand == "encode":
                    raise UsageError("encode builds formulas; give a built-in --problem")
            else:
                if self.n is None:
                    raise UsageError(f"--problem {self.problem} needs --n")
                if self.n < 3:
                    raise UsageError("--n must be at least 3")
        if self.k < 1:
            raise UsageError("--k must be positive")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise UsageError("--seed must fit in 64 bits")
        if self.threshold is not None and self.threshold < 1:
            raise UsageError("--threshold must be positive")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")
        if self.gate < 0:
            raise UsageError("--gate must be nonnegative")
        if self.budget < 0:
            raise UsageError("--budget must be nonnegative")
        if self.start < 0 or (self.stop is not None and self.stop < self.start):
            raise UsageError("cube id range is empty or negative")
        if self.retries < 1:
            raise UsageError("--retries must be at least 1")
        if self.timeout <= 0:
            raise UsageError("--timeout must be positive")


# -- problem wiring -----------------------------------------------------------------


def _load_bundle(cfg: RunConfig) -> EncodingBundle:
    if cfg.problem == "triangle-free-noncolorable":
        return encode_triangle_free(cfg.n)
    if cfg.problem == "ks-candidates":
        return encode_ks_existential(cfg.n)
    with open(cfg.dimacs, encoding="ascii") as fh:
        formula = parse_dimacs(fh.read())
    with open(cfg.mapping, encoding="ascii") as fh:
        evm, triangle_map = parse_mapping(fh.read())
    if formula.variable_count < evm.count:
        raise ValueError("formula does not declare the mapped edge variables")
    return EncodingBundle(formula=formula, edge_map=evm, triangle_map=triangle_map)


def _checker(cfg: RunConfig, bundle: EncodingBundle):
    """Fresh property checker for one run (the 010 checker keeps per-run
    frequency state).  Raw DIMACS problems enumerate plain canonical models."""
    if cfg.problem == "triangle-free-noncolorable":
        return KColoringChecker(cfg.k, bundle.edge_map)
    if cfg.problem == "ks-candidates":
        if bundle.triangle_map is None:
            raise ValueError("the candidate checker needs triangle variables")
        return Color010Checker(bundle.edge_map, bundle.triangle_map)
    return accept_all


def _solution_oracle(cfg: RunConfig, n: int):
    """Brute-force property re-check for logged solutions, when tractable."""
    if n > BRUTE_CHECK_MAX_N:
        return None
    if cfg.problem == "triangle-free-noncolorable":
        return lambda g: not has_triangle(g) and not brute_k_colorable(g, cfg.k)
    if cfg.problem == "ks-candidates":
        return lambda g: not brute_valid_010_exists(g)
    return None


class _Out:
    """stdout or a file, as a context manager either way."""

    def __init__(self, path: Optional[str]):
        self._path = path
        self._fh = None

    def __enter__(self):
        self._fh = sys.stdout if self._path in (None, "-") else open(
            self._path, "w", encoding="ascii"
        )
        return self._fh

    def __exit__(self, *exc):
        if self._fh is not sys.stdout:
            self._fh.close()
        return False


def _summary(payload: dict) -> None:
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _write_stats(cfg: RunConfig, payload: dict) -> None:
    _summary(payload)
    if cfg.stats:
        with open(cfg.stats, "w", encoding="ascii") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")


# -- subcommands ---------------------------------------------------------------------


def cmd_enumerate(cfg: RunConfig) -> int:
    bundle = _load_bundle(cfg)
    log_fh = open(cfg.log, "w", encoding="ascii") if cfg.log else None
    try:
        with _Out(cfg.output) as out:
            res = run_search(
                bundle.formula, bundle.n, bundle.edge_map, _checker(cfg, bundle),
                mode=cfg.mode, seed=cfg.seed,
                hook_policy=HookPolicy(conflict_gate=cfg.gate),
                minimality_budget=cfg.budget,
                clause_log=ClauseLog(log_fh) if log_fh else None,
                on_solution=lambda g: out.write(graph6_encode(g) + "\n"),
            )
    finally:
        if log_fh:
            log_fh.close()
    _write_stats(cfg, {"subcommand": "enumerate", "result": res.result,
                       **res.stats})
    return EXIT_OK


def cmd_cube_gen(cfg: RunConfig) -> int:
    if cfg.threshold is None:
        raise UsageError("cube-gen needs --threshold")
    bundle = _load_bundle(cfg)
    log_fh = open(cfg.log, "w", encoding="ascii") if cfg.log else None
    try:
        gen = generate_cubes(
            bundle, _checker(cfg, bundle), cfg.threshold,
            prerun_seconds=cfg.prerun, seed=cfg.seed,
            minimality_budget=cfg.budget,
            clause_log=ClauseLog(log_fh) if log_fh else None,
        )
    finally:
        if log_fh:
            log_fh.close()
    with _Out(cfg.output) as out:
        write_cube_file(gen.cubes, out)
    _write_stats(cfg, {
        "subcommand": "cube-gen",
        "cubes": len(gen.cubes),
        "prerun_solutions": len(gen.prerun_solutions),
        "sigma": len(gen.sigma),
        "gamma": len(gen.gamma),
    })
    return EXIT_OK


def cmd_cube_solve(cfg: RunConfig) -> int:
    if not cfg.cubes:
        raise UsageError("cube-solve needs --cubes")
    bundle = _load_bundle(cfg)
    with open(cfg.cubes, encoding="ascii") as fh:
        cubes = read_cube_file(fh)
    stop = len(cubes) if cfg.stop is None else min(cfg.stop, len(cubes))
    if cfg.start >= len(cubes) and len(cubes) > 0:
        raise ValueError(f"cube range starts at {cfg.start}, file has {len(cubes)}")
    shard = cubes[cfg.start:stop]
    report = solve_cubes(
        bundle, shard, _checker(cfg, bundle), jobs=cfg.jobs,
        seed=cfg.seed, minimality_budget=cfg.budget,
    )
    # shard ids are file positions, not shard positions
    report.entries = [
        dataclasses.replace(e, cube_id=e.cube_id + cfg.start)
        for e in report.entries
    ]
    with _Out(cfg.output) as out:
        write_report(report, out)
    _write_stats(cfg, {
        "subcommand": "cube-solve",
        "cubes": len(shard),
        "solutions": report.total_solutions(),
        "max_seconds": round(report.max_seconds(), 3),
        "mean_seconds": round(report.mean_seconds(), 3),
    })
    return EXIT_OK


def cmd_merge(cfg: RunConfig) -> int:
    if not cfg.reports:
        raise UsageError("merge needs at least one report file")
    entries = []
    for path in cfg.reports:
        with open(path, encoding="ascii") as fh:
            entries.extend(read_report(fh).entries)
    merged = dedup_merge(entries)
    with _Out(cfg.output) as out:
        for g6 in merged:
            out.write(g6 + "\n")
    _write_stats(cfg, {
        "subcommand": "merge",
        "cubes": len(entries),
        "solutions": len(merged),
        "max_seconds": round(max((e.seconds for e in entries), default=0.0), 3),
    })
    return EXIT_OK


def cmd_embed(cfg: RunConfig) -> int:
    lib = UnembeddableLibrary() if cfg.no_builtin else UnembeddableLibrary.builtin()
    if cfg.library:
        with open(cfg.library, encoding="ascii") as fh:
            lib.load(fh)
    if cfg.input in (None, "-"):
        lines = sys.stdin.read().splitlines()
    else:
        with open(cfg.input, encoding="ascii") as fh:
            lines = fh.read().splitlines()
    verdicts = run_pipeline(
        lines, lib, cfg.solver, retry_budget=cfg.retries,
        timeout_seconds=cfg.timeout,
    )
    statuses: dict[str, int] = {}
    with _Out(cfg.output) as out:
        for v in verdicts:
            detail = ""
            if v.witness is not None:
                detail = f" subgraph={v.witness.name}"
            elif v.diagnostic:
                detail = f" ({v.diagnostic})"
            out.write(f"{v.graph6} {v.status}{detail}\n")
            statuses[v.status] = statuses.get(v.status, 0) + 1
    _write_stats(cfg, {"subcommand": "embed", "graphs": len(verdicts), **statuses})
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if not cfg.log:
        raise UsageError("verify needs --log")
    bundle = _load_bundle(cfg)
    with open(cfg.log, encoding="ascii") as fh:
        text = fh.read()
    report = verify_log(
        bundle.formula, text, bundle.edge_map,
        triangle_map=bundle.triangle_map,
        solution_check=_solution_oracle(cfg, bundle.n),
    )
    _write_stats(cfg, {
        "subcommand": "verify",
        "records": report.records,
        "rup_checked": report.rup_checked,
        "tagged": report.tagged,
        "empty_clause_derived": report.empty_clause_derived,
        "failures": len(report.errors),
    })
    if not report.ok:
        sys.stderr.write(f"verification failed: {report.first_error()}\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_encode(cfg: RunConfig) -> int:
    if not cfg.mapping_out:
        raise UsageError("encode needs --mapping-out for the variable sidecar")
    bundle = _load_bundle(cfg)
    with _Out(cfg.output) as out:
        out.write(emit_dimacs(bundle.formula))
    with open(cfg.mapping_out, "w", encoding="ascii") as fh:
        fh.write(emit_mapping(bundle))
    _write_stats(cfg, {
        "subcommand": "encode",
        "variables": bundle.formula.variable_count,
        "clauses": len(bundle.formula.clauses),
    })
    return EXIT_OK


# -- argument wiring ------------------------------------------------------------------


def _add_problem_flags(p: _Parser, *, encode_only: bool = False) -> None:
    choices = PROBLEMS[:2] if encode_only else PROBLEMS
    p.add_argument("--problem", required=True, choices=choices)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=3,
                   help="colors for the coloring checker (default 3)")
    if not encode_only:
        p.add_argument("--dimacs", help="CNF file for --problem dimacs")
        p.add_argument("--mapping", help="variable-mapping sidecar for --problem dimacs")


def _add_run_flags(p: _Parser) -> None:
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--gate", type=int, default=20,
                   help="partial minimality check every N conflicts (0 = never)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="node budget for partial minimality checks")


def build_parser() -> _Parser:
    top = _Parser(prog="isosat", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="subcommand", required=True,
                             metavar="subcommand", parser_class=_Parser)

    p = sub.add_parser("enumerate", help="search and print solutions as graph6")
    _add_problem_flags(p)
    _add_run_flags(p)
    p.add_argument("--mode", choices=(FIRST, ALL), default=ALL)
    p.add_argument("--output", help="solution file (default stdout)")
    p.add_argument("--log", help="clause log for later verification")
    p.add_argument("--stats", help="JSON statistics file")

    p = sub.add_parser("cube-gen", help="split the search space into cubes")
    _add_problem_flags(p)
    _add_run_flags(p)
    p.add_argument("--threshold", type=int, required=True,
                   help="assigned edge variables per cube")
    p.add_argument("--prerun", type=float, default=0.0,
                   help="seconds of plain search before cubing")
    p.add_argument("--output", help="cube file (default stdout)")
    p.add_argument("--log", help="clause log for later verification")
    p.add_argument("--stats", help="JSON statistics file")

    p = sub.add_parser("cube-solve", help="solve a cube-id range of a cube file")
    _add_problem_flags(p)
    _add_run_flags(p)
    p.add_argument("--cubes", required=True, help="cube file from cube-gen")
    p.add_argument("--from", dest="start", type=int, default=0,
                   help="first cube id (default 0)")
    p.add_argument("--to", dest="stop", type=int,
                   help="one past the last cube id (default: end)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", help="report file (default stdout)")
    p.add_argument("--stats", help="JSON statistics file")

    p = sub.add_parser("merge", help="merge cube-solve reports")
    p.add_argument("reports", nargs="+", metavar="report")
    p.add_argument("--output", help="merged graph6 (default stdout)")
    p.add_argument("--stats", help="JSON statistics file")

    p = sub.add_parser("embed", help="decide orthogonal embeddability")
    p.add_argument("--input", help="graph6 stream (default stdin)")
    p.add_argument("--library", help="extra unembeddable graphs (graph6 file)")
    p.add_argument("--no-builtin", action="store_true", dest="no_builtin",
                   help="start from an empty subgraph library")
    p.add_argument("--solver", help="external QF_NRA solver command with {file}")
    p.add_argument("--timeout", type=float, default=10.0,
                   help="per-attempt solver timeout in seconds")
    p.add_argument("--retries", type=int, default=3,
                   help="cover attempts per graph")
    p.add_argument("--output", help="verdict file (default stdout)")
    p.add_argument("--stats", help="JSON statistics file")

    p = sub.add_parser("verify", help="replay and audit a clause log")
    _add_problem_flags(p)
    p.add_argument("--log", required=True, help="clause log to audit")
    p.add_argument("--stats", help="JSON statistics file")

    p = sub.add_parser("encode", help="emit DIMACS plus the variable mapping")
    _add_problem_flags(p, encode_only=True)
    p.add_argument("--output", help="DIMACS file (default stdout)")
    p.add_argument("--mapping-out", dest="mapping_out", required=True,
                   help="variable-mapping sidecar file")
    p.add_argument("--stats", help="JSON statistics file")

    return top


_DISPATCH = {
    "enumerate": cmd_enumerate,
    "cube-gen": cmd_cube_gen,
    "cube-solve": cmd_cube_solve,
    "merge": cmd_merge,
    "embed": cmd_embed,
    "verify": cmd_verify,
    "encode": cmd_encode,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        cfg = RunConfig.from_args(ns)
        return _DISPATCH[cfg.subcommand](cfg)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except (OSError, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_RUNTIME
    except KeyboardInterrupt:
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
