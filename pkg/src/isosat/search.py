"""Isomorph-free graph search by co-certificate learning.

:func:`run_search` drives a single incremental CDCL solver whose propagator
hook plays two roles.  First it enforces lexicographic minimality: whenever
the current (partial or total) edge assignment already dominates a permuted
reading of itself, the witnessing permutation is turned into a symmetry
clause and injected, so only canonical graphs ever reach a full model.
Second, on every canonical full model it consults a co-NP *checker*: the
checker either produces a :class:`CoCertificate` — a short witness (a proper
k-coloring, or a valid 010-coloring) that the graph does *not* have the
property searched for, together with a blocking clause falsified by exactly
the graphs sharing that defect — or it declares the graph a solution.
Certificates become learned clauses and the search continues; solutions are
recorded (and, in ``all`` mode, blocked individually so enumeration is
exhaustive).

The two built-in checkers cover the target problems: :class:`KColoringChecker`
(searching for non-k-colorable graphs) and :class:`Color010Checker`
(searching for graphs with no valid {0,1} vertex labeling avoiding both 0-0
edges and 1-1-1 triangles).  :func:`accept_all` never certifies, turning the
engine into a plain canonical-graph enumerator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .graphs import (
    PRESENT,
    EdgeVarMap,
    PartialGraph,
    cell_order_pairs,
    graph6_encode,
    graph_from_assignment,
)
from .minimality import (
    BUDGET_EXCEEDED,
    DEFAULT_BUDGET,
    MINIMAL,
    MinimalityWitness,
    check_minimal,
    clause_from_witness,
)
from .sat import NO_ACTION, SAT, UNSAT, Clause, Formula, HookPolicy, Solver, SolverError

__all__ = [
    "FIRST",
    "ALL",
    "KIND_K_COLORING",
    "KIND_010_COLORING",
    "KColoring",
    "Coloring010",
    "CoCertificate",
    "EdgeFrequencyTable",
    "SearchResult",
    "k_color_check",
    "coloring_clause",
    "color010_check",
    "blocking_clause_010",
    "heuristic_color_order",
    "update_frequencies",
    "is_proper_coloring",
    "is_valid_010",
    "KColoringChecker",
    "Color010Checker",
    "accept_all",
    "run_search",
    "TIMEOUT",
]


FIRST = "first"  # stop at the first solution
ALL = "all"  # enumerate every solution

TIMEOUT = "TIMEOUT"  # the run hit its deadline before deciding


class _DeadlineReached(Exception):
    """Internal: unwinds the solve loop when the search deadline expires."""

KIND_K_COLORING = "k-coloring"
KIND_010_COLORING = "010-coloring"


# -- certificate payloads -------------------------------------------------------


@dataclass(frozen=True)
class KColoring:
    """A total vertex coloring with colors 1..k (``colors[v-1]`` is vertex
    v's color)."""

    k: int
    colors: tuple[int, ...]

    def __post_init__(self):
        if any(c < 1 or c > self.k for c in self.colors):
            raise ValueError("color out of range 1..k")

    def color(self, v: int) -> int:
        return self.colors[v - 1]


@dataclass(frozen=True)
class Coloring010:
    """A total {0,1} vertex labeling (``values[v-1]`` is vertex v's label)."""

    values: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.values):
            raise ValueError("010-coloring values must be 0 or 1")

    def value(self, v: int) -> int:
        return self.values[v - 1]


@dataclass(frozen=True)
class CoCertificate:
    """Evidence that a candidate graph lacks the searched-for property.

    ``blocking_clause`` must be falsified by the generating graph's
    assignment; it excludes precisely the graphs for which the payload
    remains a valid counterexample.
    """

    kind: str
    payload: object
    blocking_clause: Clause


# -- proper k-coloring checker ---------------------------------------------------


def k_color_check(g: PartialGraph, k: int) -> Optional[KColoring]:
    """Find a proper k-coloring of ``g`` or return None.

    Plain backtracking: vertices in index order, colors tried in ascending
    order, rejecting any color already used by an earlier neighbor.
    """
    if not g.is_fully_defined():
        raise ValueError("k_color_check requires a fully defined graph")
    n = g.n
    earlier = [[u for u in range(1, v) if g.edge(u, v)] for v in range(1, n + 1)]
    colors = [0] * (n + 1)

    def extend(v: int) -> bool:
        if v > n:
            return True
        taken = {colors[u] for u in earlier[v - 1]}
        for c in range(1, k + 1):
            if c not in taken:
                colors[v] = c
                if extend(v + 1):
                    return True
        colors[v] = 0
        return False

    if not extend(1):
        return None
    return KColoring(k, tuple(colors[1:]))


def is_proper_coloring(g: PartialGraph, coloring: KColoring) -> bool:
    """True when no edge of ``g`` joins two same-colored vertices."""
    return all(coloring.color(u) != coloring.color(v) for u, v in g.edges())


def coloring_clause(coloring: KColoring, evm: EdgeVarMap) -> Clause:
    """The clause satisfied exactly by graphs that ``coloring`` fails to
    color properly: one positive edge literal per same-colored pair u < v."""
    lits = [
        evm.var(u, v)
        for u, v in cell_order_pairs(len(coloring.colors))
        if coloring.color(u) == coloring.color(v)
    ]
    return Clause(lits)


# -- 010-coloring checker --------------------------------------------------------


class EdgeFrequencyTable:
    """Edge occurrence counts over the candidate graphs seen so far.

    ``rel_freq`` estimates how likely a pair is to be an edge of upcoming
    candidates; with no history every pair is treated as a coin flip (0.5).
    """

    def __init__(self, n: int):
        self.n = n
        self.total = 0
        self._counts: dict[tuple[int, int], int] = {}

    def count(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._counts.get((u, v), 0)

    def rel_freq(self, u: int, v: int) -> float:
        if self.total == 0:
            return 0.5
        return self.count(u, v) / self.total

    def record(self, g: PartialGraph) -> None:
        self.total += 1
        for u, v in g.edges():
            self._counts[(u, v)] = self._counts.get((u, v), 0) + 1


def update_frequencies(freq: EdgeFrequencyTable, g: PartialGraph) -> None:
    """Count ``g``'s edges into the table (once per candidate visited)."""
    freq.record(g)


def heuristic_color_order(
    v: int, partial010: Mapping[int, int], freq: Optional[EdgeFrequencyTable]
) -> tuple[int, int]:
    """Order in which the two labels are tried at vertex ``v``.

    Each label contributes literals to the eventual blocking clause; prefer
    the label whose literals are less likely to be satisfied by future
    graphs.  Label 0 at v adds edge literals e_{u,v} for earlier 0-vertices
    u, scored by their edge frequency; label 1 at v adds triangle literals
    for earlier 1-1 pairs {u,w}, scored by the product of the three pair
    frequencies (a never-seen pair zeroes its term).  Ties go to 0.
    """
    if freq is None:
        return (0, 1)
    score0 = sum(freq.rel_freq(u, v) for u, val in partial010.items() if val == 0)
    ones = [u for u, val in partial010.items() if val == 1]
    score1 = 0.0
    for i, u in enumerate(ones):
        fu = freq.rel_freq(u, v)
        if fu == 0.0:
            continue
        for w in ones[i + 1 :]:
            score1 += fu * freq.rel_freq(v, w) * freq.rel_freq(u, w)
    return (0, 1) if score0 <= score1 else (1, 0)


def color010_check(
    g: PartialGraph, freq: Optional[EdgeFrequencyTable] = None
) -> Optional[Coloring010]:
    """Find a valid 010-coloring of ``g`` — a {0,1} vertex labeling with no
    edge labeled 0-0 and no triangle labeled 1-1-1 — or return None.

    Simple backtracking in vertex index order with forward checking of the
    two constraints; when both labels are feasible at the next vertex the
    frequency heuristic picks which to try first.
    """
    if not g.is_fully_defined():
        raise ValueError("color010_check requires a fully defined graph")
    n = g.n
    earlier = [[u for u in range(1, v) if g.edge(u, v)] for v in range(1, n + 1)]
    # triangles[v-1]: earlier neighbor pairs (u, w) completing a triangle at v
    triangles = [
        [(u, w) for i, u in enumerate(nbrs) for w in nbrs[i + 1 :] if g.edge(u, w)]
        for nbrs in (sorted(e) for e in earlier)
    ]
    value = [None] * (n + 1)

    def feasible(v: int, b: int) -> bool:
        if b == 0:
            return all(value[u] != 0 for u in earlier[v - 1])
        return not any(value[u] == 1 and value[w] == 1 for u, w in triangles[v - 1])

    def extend(v: int) -> bool:
        if v > n:
            return True
        can0 = feasible(v, 0)
        can1 = feasible(v, 1)
        if can0 and can1:
            partial = {u: value[u] for u in range(1, v) if value[u] is not None}
            order = heuristic_color_order(v, partial, freq)
        elif can0:
            order = (0,)
        elif can1:
            order = (1,)
        else:
            return False
        for b in order:
            value[v] = b
            if extend(v + 1):
                return True
        value[v] = None
        return False

    if not extend(1):
        return None
    return Coloring010(tuple(value[1:]))


def is_valid_010(g: PartialGraph, coloring: Coloring010) -> bool:
    """True when ``coloring`` has no 0-0 edge and no 1-1-1 triangle in ``g``."""
    for u, v in g.edges():
        if coloring.value(u) == 0 and coloring.value(v) == 0:
            return False
    n = g.n
    for a in range(1, n + 1):
        if coloring.value(a) != 1:
            continue
        for b in range(a + 1, n + 1):
            if coloring.value(b) != 1 or not g.edge(a, b):
                continue
            for c in range(b + 1, n + 1):
                if coloring.value(c) == 1 and g.edge(a, c) and g.edge(b, c):
                    return False
    return True


def blocking_clause_010(
    coloring: Coloring010,
    evm: EdgeVarMap,
    triangle_map: Mapping[tuple[int, int, int], int],
) -> Clause:
    """The clause satisfied exactly by graphs for which ``coloring`` is *not*
    valid: a positive edge literal per 0-0 pair plus a positive triangle
    literal per 1-1-1 triple.

    Requires the formula to define triangle variables (t true iff all three
    edges present); a missing triangle variable is an internal error.
    """
    n = len(coloring.values)
    lits = [
        evm.var(u, v)
        for u, v in cell_order_pairs(n)
        if coloring.value(u) == 0 and coloring.value(v) == 0
    ]
    ones = [v for v in range(1, n + 1) if coloring.value(v) == 1]
    for i, a in enumerate(ones):
        for j in range(i + 1, len(ones)):
            b = ones[j]
            for c in ones[j + 1 :]:
                t = triangle_map.get((a, b, c))
                if t is None:
                    raise RuntimeError(f"no triangle variable for {(a, b, c)}")
                lits.append(t)
    return Clause(lits)


# -- checkers ------------------------------------------------------------------


class KColoringChecker:
    """Certifies k-colorable candidates; non-k-colorable graphs are
    solutions."""

    def __init__(self, k: int, evm: EdgeVarMap):
        self.k = k
        self.evm = evm

    def __call__(self, g: PartialGraph) -> Optional[CoCertificate]:
        coloring = k_color_check(g, self.k)
        if coloring is None:
            return None
        return CoCertificate(KIND_K_COLORING, coloring, coloring_clause(coloring, self.evm))


class Color010Checker:
    """Certifies 010-colorable candidates; graphs with no valid 010-coloring
    are solutions.

    Keeps an instance-local edge frequency table: each candidate is colored
    against the statistics of the graphs seen strictly before it, then
    counted in.
    """

    def __init__(self, evm: EdgeVarMap, triangle_map: Mapping[tuple[int, int, int], int]):
        self.evm = evm
        self.triangle_map = triangle_map
        self.freq = EdgeFrequencyTable(evm.n)

    def __call__(self, g: PartialGraph) -> Optional[CoCertificate]:
        coloring = color010_check(g, self.freq)
        update_frequencies(self.freq, g)
        if coloring is None:
            return None
        return CoCertificate(
            KIND_010_COLORING,
            coloring,
            blocking_clause_010(coloring, self.evm, self.triangle_map),
        )


def accept_all(g: PartialGraph) -> Optional[CoCertificate]:
    """A checker that never certifies: every canonical candidate is a
    solution, so the search enumerates canonical graphs of the formula."""
    return None


# -- the engine ----------------------------------------------------------------


@dataclass
class SearchResult:
    """Outcome of one engine run: the solutions found, whether the space was
    exhausted (``UNSAT``) or the run stopped at a first solution (``SAT``),
    and counter statistics."""

    solutions: list[PartialGraph]
    result: str
    stats: dict[str, int] = field(default_factory=dict)


def _perm_comment(w: MinimalityWitness) -> str:
    images = " ".join(str(x) for x in w.permutation.images)
    i, j = w.strict_cell
    return f"perm {images} strict {i} {j}"


def _certificate_comment(cert: CoCertificate) -> str:
    if cert.kind == KIND_K_COLORING:
        colors = " ".join(str(c) for c in cert.payload.colors)
        return f"col {cert.payload.k} {colors}"
    if cert.kind == KIND_010_COLORING:
        values = " ".join(str(b) for b in cert.payload.values)
        return f"col010 {values}"
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


def solution_blocking_clause(g: PartialGraph, evm: EdgeVarMap) -> Clause:
    """The negation of ``g``'s edge assignment: excludes exactly ``g``."""
    lits = [
        -evm.var(u, v) if g.cell(u, v) == PRESENT else evm.var(u, v)
        for u, v in cell_order_pairs(g.n)
    ]
    return Clause(lits)


def run_search(
    formula: Formula,
    n: int,
    evm: EdgeVarMap,
    checker: Callable[[PartialGraph], Optional[CoCertificate]],
    mode: str = ALL,
    assumptions: Sequence[int] = (),
    *,
    seed: int = 1,
    hook_policy: Optional[HookPolicy] = None,
    minimality_budget: int = DEFAULT_BUDGET,
    clause_log=None,
    on_solution: Optional[Callable[[PartialGraph], None]] = None,
    on_inject: Optional[Callable[[str, Clause], None]] = None,
    deadline_seconds: Optional[float] = None,
    threshold: int = 0,
    on_threshold: Optional[Callable[[Solver, "Assignment"], None]] = None,
    vsids: bool = True,
) -> SearchResult:
    """Enumerate canonical models of ``formula`` that the checker cannot
    certify against.

    The solver runs once; the propagator hook injects symmetry clauses from
    non-minimality witnesses (exact check on full models, budget-bounded on
    partial assignments), blocking clauses from checker certificates, and —
    in ``all`` mode — a per-solution blocking clause so enumeration
    continues.  In ``first`` mode the run stops at the first solution.
    ``on_solution`` is called with each solution as it is found (streaming).

    ``on_inject(kind, clause)`` observes every clause the hook injects, with
    kind ``"symmetry"``, ``"certificate"``, or ``"solution"``.  When
    ``deadline_seconds`` elapses mid-search the run stops with result
    ``TIMEOUT`` and whatever was found so far.  A positive ``threshold``
    makes the solver call ``on_threshold(solver, assignment)`` at stable
    points where at least that many edge variables are assigned; the handler
    must inject a clause cutting that region off (cube extraction).  With
    ``vsids=False`` decisions follow static variable order — edge variables
    in row-major cell order first — so partial assignments grow as canonical
    prefixes, which the minimality check prunes most effectively.

    Statistics: ``candidates`` counts canonical full models reaching the
    checker and always equals ``co_certificates + solutions``.
    """
    if mode not in (FIRST, ALL):
        raise ValueError(f"mode must be {FIRST!r} or {ALL!r}")
    if evm.n != n:
        raise ValueError("edge variable map does not match n")
    if formula.variable_count < evm.count:
        raise ValueError("formula does not declare all edge variables")
    if (threshold > 0) != (on_threshold is not None):
        raise ValueError("threshold and on_threshold must be given together")

    solver = Solver(formula, seed=seed, clause_log=clause_log,
                    enable_vsids=vsids)
    solver.set_edge_var_count(evm.count)
    stats = {
        "candidates": 0,
        "co_certificates": 0,
        "solutions": 0,
        "symmetry_clauses": 0,
        "partial_checks": 0,
        "budget_aborts": 0,
    }
    solutions: list[PartialGraph] = []
    deadline = time.monotonic() + deadline_seconds if deadline_seconds else None

    def emit(kind: str, lits, comment: str):
        clause = lits if isinstance(lits, Clause) else Clause(lits)
        if on_inject is not None:
            on_inject(kind, clause)
        return (clause.lits, comment)

    def hook(assignment, full: bool):
        if deadline is not None and time.monotonic() >= deadline:
            raise _DeadlineReached
        g = graph_from_assignment(assignment, evm)
        if not full:
            stats["partial_checks"] += 1
            verdict = check_minimal(g, budget=minimality_budget)
            if verdict is MINIMAL:
                return NO_ACTION
            if verdict is BUDGET_EXCEEDED:
                stats["budget_aborts"] += 1
                return NO_ACTION
            stats["symmetry_clauses"] += 1
            return emit("symmetry", clause_from_witness(g, verdict, evm),
                        _perm_comment(verdict))
        verdict = check_minimal(g, budget=0)  # exact on full models
        if verdict is not MINIMAL:
            stats["symmetry_clauses"] += 1
            return emit("symmetry", clause_from_witness(g, verdict, evm),
                        _perm_comment(verdict))
        stats["candidates"] += 1
        cert = checker(g)
        if cert is not None:
            if len(cert.blocking_clause) == 0:
                raise SolverError(
                    "checker produced an empty blocking clause "
                    "(a degenerate certificate valid for every graph)"
                )
            for lit in cert.blocking_clause:
                if assignment.lit_true(lit) is not False:
                    raise SolverError(
                        "blocking clause not falsified by the graph that "
                        "produced it (checker soundness violation)"
                    )
            stats["co_certificates"] += 1
            return emit("certificate", cert.blocking_clause,
                        _certificate_comment(cert))
        stats["solutions"] += 1
        solutions.append(g)
        if on_solution is not None:
            on_solution(g)
        if mode == FIRST:
            return NO_ACTION
        return emit("solution", solution_blocking_clause(g, evm),
                    f"sol {graph6_encode(g)}")

    threshold_handler = None
    if on_threshold is not None:
        def threshold_handler(assignment):
            if deadline is not None and time.monotonic() >= deadline:
                raise _DeadlineReached
            on_threshold(solver, assignment)

    try:
        result = solver.solve(assumptions, hook=hook, hook_policy=hook_policy,
                              on_threshold=threshold_handler, threshold=threshold)
    except _DeadlineReached:
        result = TIMEOUT
    if stats["candidates"] != stats["co_certificates"] + stats["solutions"]:
        raise SolverError("candidate bookkeeping out of balance")
    stats.update(solver.stats)
    return SearchResult(solutions=solutions, result=result, stats=stats)
