"""Cube-and-conquer parallelization of the canonical search.

The search itself generates the cubes: :func:`generate_cubes` runs the usual
solver and, once the optional prerun has elapsed, records the partial edge
assignment as a :class:`Cube` every time at least ``threshold`` edge
variables are assigned at a stable point, injects its negation, and keeps
going until the remaining space is exhausted.  Solutions found ahead of
cubing are emitted as fully defined cubes — a fully defined graph is just
another cube.  The symmetry clauses (sigma) and certificate clauses (gamma)
learned along the way are carried in the result, so exhaustiveness of the
split is a pure SAT statement: the base formula plus every cube negation
plus sigma plus gamma is unsatisfiable (:func:`completeness_formula`).

Cubes are then independent jobs: :func:`solve_cube` solves the base formula
under a cube as assumptions with a fresh solver and fresh learning — no
clause import — and :func:`solve_cubes` runs a fixed-size process pool over
the cube list.  Cubes may overlap, so one graph can be reported by several
jobs; :func:`dedup_merge` removes duplicates by exact graph6 string equality
(canonical graphs serialize identically) and sorts the final list.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

from .encodings import EncodingBundle
from .graphs import PartialGraph, graph6_encode
from .minimality import DEFAULT_BUDGET
from .sat import Clause, Formula, SolverError, UNSAT
from .search import ALL, TIMEOUT, run_search, solution_blocking_clause

__all__ = [
    "Cube",
    "CubeResult",
    "CubeRunReport",
    "CubeGeneration",
    "generate_cubes",
    "solve_cube",
    "solve_cubes",
    "dedup_merge",
    "completeness_formula",
    "write_cube_file",
    "read_cube_file",
    "write_report",
    "read_report",
]


@dataclass(frozen=True)
class Cube:
    """A consistent partial assignment of edge variables, used as solver
    assumptions.  Different cubes may overlap (share satisfying graphs)."""

    literals: tuple[int, ...]

    def __post_init__(self):
        lits = tuple(int(l) for l in self.literals)
        object.__setattr__(self, "literals", lits)
        if any(l == 0 for l in lits):
            raise ValueError("cube literals must be nonzero")
        if len({abs(l) for l in lits}) != len(lits):
            raise ValueError("cube assigns some variable twice")

    def __len__(self) -> int:
        return len(self.literals)

    def negation(self) -> Clause:
        """The clause satisfied exactly by assignments outside this cube."""
        return Clause(-l for l in self.literals)


@dataclass(frozen=True)
class CubeResult:
    """Outcome of one cube job: final solver status, the solutions found
    (graph6, discovery order), and the wall-clock seconds spent."""

    cube_id: int
    status: str
    solutions: tuple[str, ...]
    seconds: float


@dataclass
class CubeRunReport:
    """Per-cube results of a cube-and-conquer run."""

    entries: list[CubeResult] = field(default_factory=list)

    def total_solutions(self) -> int:
        return sum(len(e.solutions) for e in self.entries)

    def max_seconds(self) -> float:
        return max((e.seconds for e in self.entries), default=0.0)

    def mean_seconds(self) -> float:
        if not self.entries:
            return 0.0
        return sum(e.seconds for e in self.entries) / len(self.entries)


@dataclass
class CubeGeneration:
    """Everything the cube-generation run produced: the cubes, the carried
    symmetry (sigma) and certificate (gamma) clauses that make the split
    provably exhaustive, the solutions found during the prerun, and the
    run statistics."""

    cubes: list[Cube]
    sigma: list[Clause]
    gamma: list[Clause]
    prerun_solutions: list[str]
    stats: dict


def _graph_cube(g: PartialGraph, evm) -> Cube:
    """The fully defined cube pinning every edge variable to ``g``."""
    lits = []
    for u, v in evm.pairs():
        var = evm.var(u, v)
        lits.append(var if g.edge(u, v) else -var)
    return Cube(tuple(lits))


def generate_cubes(
    bundle: EncodingBundle,
    checker: Callable[[PartialGraph], Optional[object]],
    threshold: int,
    prerun_seconds: float = 0.0,
    *,
    seed: int = 1,
    minimality_budget: int = DEFAULT_BUDGET,
    clause_log=None,
    on_cube: Optional[Callable[[Cube], None]] = None,
) -> CubeGeneration:
    """Split ``bundle``'s search space into cubes of at least ``threshold``
    assigned edge variables, after an optional ``prerun_seconds`` of plain
    searching.

    The prerun runs the ordinary search; if it finishes, its solutions (as
    fully defined cubes) are the complete answer and the cube list covers
    them alone.  Otherwise a second run starts from the base formula plus
    everything the prerun learned, recording a cube and injecting its
    negation at every threshold event until the space is exhausted.  The
    returned sigma/gamma clauses plus the cube negations make the base
    formula unsatisfiable — the completeness statement checked by
    :func:`completeness_formula`.
    """
    evm = bundle.edge_map
    if threshold <= 0:
        raise ValueError(
            "threshold must be positive (0 would degenerate to one empty cube)"
        )
    if threshold > evm.count:
        raise ValueError(
            f"threshold {threshold} exceeds the {evm.count} edge variables"
        )

    sigma: list[Clause] = []
    gamma: list[Clause] = []
    cubes: list[Cube] = []
    prerun_solutions: list[str] = []
    stats: dict = {"prerun": None, "cubing": None}

    def tap(kind: str, clause: Clause) -> None:
        if kind == "symmetry":
            sigma.append(clause)
        elif kind == "certificate":
            gamma.append(clause)

    base = bundle.formula
    carried: list[Clause] = []
    if prerun_seconds > 0:
        res = run_search(
            base, evm.n, evm, checker, mode=ALL, seed=seed,
            minimality_budget=minimality_budget, clause_log=clause_log,
            on_inject=tap, deadline_seconds=prerun_seconds,
        )
        stats["prerun"] = res.stats
        for g in res.solutions:
            prerun_solutions.append(graph6_encode(g))
            cubes.append(_graph_cube(g, evm))
            carried.append(solution_blocking_clause(g, evm))
        if res.result == UNSAT:
            return CubeGeneration(cubes, sigma, gamma, prerun_solutions, stats)
        # timed out: resume from the base formula plus everything learned
        carried.extend(sigma)
        carried.extend(gamma)

    cubing = Formula(base.variable_count)
    for c in base.clauses:
        cubing.add_clause(c)
    for c in carried:
        cubing.add_clause(c)

    def on_threshold(solver, assignment) -> None:
        lits = []
        for var in range(1, evm.count + 1):
            val = assignment.value(var)
            if val is not None:
                lits.append(var if val else -var)
        cube = Cube(tuple(lits))
        cubes.append(cube)
        if on_cube is not None:
            on_cube(cube)
        solver.add_clause(
            cube.negation(),
            log_comment="cube " + " ".join(str(l) for l in cube.literals),
        )

    def on_solution(g: PartialGraph) -> None:
        # a full model can still slip past the threshold monitor when a
        # single propagation cascade completes the assignment; its blocking
        # clause is exactly the negation of its fully defined cube
        cube = _graph_cube(g, evm)
        cubes.append(cube)
        if on_cube is not None:
            on_cube(cube)

    # static decision order makes the frontier grow as row-major canonical
    # prefixes, the shape the minimality check prunes best; VSIDS would
    # scatter the assigned set and blow the frontier up combinatorially
    res = run_search(
        cubing, evm.n, evm, checker, mode=ALL, seed=seed,
        minimality_budget=minimality_budget, clause_log=clause_log,
        on_inject=tap, threshold=threshold, on_threshold=on_threshold,
        on_solution=on_solution, vsids=False,
    )
    stats["cubing"] = res.stats
    if res.result != UNSAT:
        raise SolverError(f"cube generation ended {res.result}, expected UNSAT")
    return CubeGeneration(cubes, sigma, gamma, prerun_solutions, stats)


def completeness_formula(bundle: EncodingBundle, gen: CubeGeneration) -> Formula:
    """The exhaustiveness statement of a cube split: base formula plus every
    cube negation plus the carried sigma/gamma clauses.  Unsatisfiable iff
    every graph the search could have produced lies inside some cube."""
    f = Formula(bundle.formula.variable_count)
    for c in bundle.formula.clauses:
        f.add_clause(c)
    for cube in gen.cubes:
        f.add_clause(cube.negation())
    for c in gen.sigma:
        f.add_clause(c)
    for c in gen.gamma:
        f.add_clause(c)
    return f


def solve_cube(
    bundle: EncodingBundle,
    cube: Cube,
    checker: Callable[[PartialGraph], Optional[object]],
    cube_id: int = 0,
    *,
    seed: int = 1,
    minimality_budget: int = DEFAULT_BUDGET,
) -> CubeResult:
    """Solve the base formula under ``cube`` as assumptions with a fresh
    solver and fresh learning (no clause import), enumerating all solutions
    inside the cube."""
    evm = bundle.edge_map
    for l in cube.literals:
        if abs(l) > evm.count:
            raise ValueError(f"cube literal {l} outside the edge-variable range")
    t0 = time.perf_counter()
    res = run_search(
        bundle.formula, evm.n, evm, checker, mode=ALL,
        assumptions=cube.literals, seed=seed,
        minimality_budget=minimality_budget,
    )
    seconds = time.perf_counter() - t0
    for g in res.solutions:
        for l in cube.literals:
            u, v = evm.pair(abs(l))
            if g.edge(u, v) != (l > 0):
                raise SolverError(
                    f"cube job produced a solution violating its cube at "
                    f"edge {{{u},{v}}}"
                )
    return CubeResult(
        cube_id=cube_id,
        status=res.result,
        solutions=tuple(graph6_encode(g) for g in res.solutions),
        seconds=seconds,
    )


# the static per-run context (bundle, checker, seed, budget) is shipped to
# each pool worker once at startup; tasks then carry only (cube_id, cube)
_POOL_CTX = None


def _pool_init(bundle, checker, seed, budget) -> None:
    global _POOL_CTX
    _POOL_CTX = (bundle, checker, seed, budget)


def _cube_job(task) -> CubeResult:
    cube_id, cube = task
    bundle, checker, seed, budget = _POOL_CTX
    return solve_cube(
        bundle, cube, checker, cube_id=cube_id, seed=seed,
        minimality_budget=budget,
    )


def solve_cubes(
    bundle: EncodingBundle,
    cubes: Sequence[Cube],
    checker: Callable[[PartialGraph], Optional[object]],
    jobs: int = 1,
    *,
    seed: int = 1,
    minimality_budget: int = DEFAULT_BUDGET,
    on_result: Optional[Callable[[CubeResult], None]] = None,
) -> CubeRunReport:
    """Run every cube as an independent job on a pool of ``jobs`` workers.

    Each worker receives its own copy of the bundle and checker, so no state
    is shared; results are collected in cube order, making the report (and
    any merge of it) independent of scheduling.  ``on_result`` is called with
    each :class:`CubeResult` as it arrives (in completion order)."""
    tasks = list(enumerate(cubes))
    if jobs <= 1:
        _pool_init(bundle, checker, seed, minimality_budget)
        entries = []
        for t in tasks:
            r = _cube_job(t)
            if on_result is not None:
                on_result(r)
            entries.append(r)
    else:
        chunk = max(1, len(tasks) // (jobs * 16))
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_pool_init,
            initargs=(bundle, checker, seed, minimality_budget),
        ) as pool:
            entries = []
            for r in pool.map(_cube_job, tasks, chunksize=chunk):
                if on_result is not None:
                    on_result(r)
                entries.append(r)
    entries.sort(key=lambda e: e.cube_id)
    return CubeRunReport(entries=entries)


def dedup_merge(
    results: Union[CubeRunReport, Iterable[CubeResult]],
) -> list[str]:
    """Merge per-cube solution lists into one sorted duplicate-free graph6
    list.  Canonical graphs serialize to identical strings, so exact string
    equality is isomorphism-aware here."""
    if isinstance(results, CubeRunReport):
        results = results.entries
    merged = set()
    for entry in results:
        merged.update(entry.solutions)
    return sorted(merged)


# -- serialization -------------------------------------------------------------


def write_cube_file(cubes: Iterable[Cube], sink) -> None:
    """Write cubes as iCNF assumption lines: ``a <lit> ... <lit> 0``."""
    for cube in cubes:
        sink.write("a " + " ".join(str(l) for l in cube.literals) + " 0\n")


def read_cube_file(source) -> list[Cube]:
    """Parse iCNF assumption lines back into cubes; raises ``ValueError``
    with a line number on malformed input."""
    cubes = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] != "a" or parts[-1] != "0":
            raise ValueError(f"line {lineno}: expected 'a <lits> 0', got {line!r}")
        try:
            lits = tuple(int(x) for x in parts[1:-1])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed literal in {line!r}") from None
        if any(l == 0 for l in lits):
            raise ValueError(f"line {lineno}: literal 0 inside the cube body")
        cubes.append(Cube(lits))
    return cubes


def write_report(report: CubeRunReport, sink) -> None:
    """Write line-oriented per-cube records: a ``cube <id> <status> <#sols>
    <seconds>`` line followed by one ``s <graph6>`` line per solution."""
    for e in report.entries:
        sink.write(f"cube {e.cube_id} {e.status} {len(e.solutions)} {e.seconds:.3f}\n")
        for g6 in e.solutions:
            sink.write(f"s {g6}\n")


def read_report(source) -> CubeRunReport:
    """Parse :func:`write_report` output; raises ``ValueError`` with a line
    number on malformed input."""
    entries: list[CubeResult] = []
    current: Optional[list] = None  # [id, status, nsols, seconds, sols]

    def close(lineno: int) -> None:
        if current is None:
            return
        if len(current[4]) != current[2]:
            raise ValueError(
                f"line {lineno}: cube {current[0]} announced {current[2]} "
                f"solutions but listed {len(current[4])}"
            )
        entries.append(CubeResult(current[0], current[1], tuple(current[4]),
                                  current[3]))

    lineno = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("cube "):
            parts = line.split()
            if len(parts) != 5:
                raise ValueError(f"line {lineno}: malformed record {line!r}")
            close(lineno)
            try:
                current = [int(parts[1]), parts[2], int(parts[3]),
                           float(parts[4]), []]
            except ValueError:
                raise ValueError(
                    f"line {lineno}: malformed record {line!r}"
                ) from None
        elif line.startswith("s "):
            if current is None:
                raise ValueError(f"line {lineno}: solution before any record")
            current[4].append(line[2:])
        else:
            raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    close(lineno + 1)
    return CubeRunReport(entries=entries)
