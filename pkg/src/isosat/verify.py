"""Independent validation of search runs.

A run journals every clause it adds to a text log: CDCL-learned clauses as
plain addition lines ("lit ... lit 0"), hook-injected clauses prefixed by a
comment recording their witness ("c perm ...", "c col ...", "c col010 ...",
"c sol ...", "c cube ...").  :func:`verify_log` audits such a log against the
original formula on two independent levels:

* **witness audit** — every tagged clause is re-derived from (or proven
  sound against) its recorded witness: a permutation witness must cover
  every comparison cell up to its strict cell, a coloring or 010-labeling
  must reproduce the blocking clause exactly, a solution line must match the
  negation of its graph's edge assignment, and a cube line the negation of
  its literals.  Solution graphs can additionally be re-checked against a
  brute-force property oracle.

* **inference audit** — every *untagged* clause must be derivable from the
  clauses before it by unit propagation (reverse unit propagation): assuming
  all its literals false must yield a propagation conflict.  A log whose
  last line is the empty clause therefore certifies unsatisfiability of the
  formula plus the tagged axioms.

The brute-force property oracles (:func:`brute_k_colorable`,
:func:`brute_valid_010_exists`) are vectorized exhaustive sweeps sharing no
code with the search-side checkers, so agreement between the two is
meaningful evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .graphs import (
    EdgeVarMap,
    PartialGraph,
    Permutation,
    cell_order_pairs,
    graph6_decode,
)
from .sat import Formula
from .search import (
    Coloring010,
    KColoring,
    blocking_clause_010,
    coloring_clause,
    solution_blocking_clause,
)

__all__ = [
    "LogRecord",
    "ReplayReport",
    "UnitPropagator",
    "parse_clause_log",
    "verify_log",
    "check_symmetry_record",
    "check_coloring_record",
    "check_010_record",
    "check_solution_record",
    "check_cube_record",
    "brute_k_colorable",
    "brute_valid_010_exists",
    "has_triangle",
]


WITNESS_TAGS = ("perm", "col010", "col", "sol", "cube")  # col010 before col


@dataclass(frozen=True)
class LogRecord:
    """One clause line of a log: its 1-based line number, the witness tag
    and payload of the comment attached to it (both None/"" for plain
    learned-clause lines), and its literals."""

    line: int
    tag: Optional[str]
    payload: str
    lits: tuple[int, ...]


def parse_clause_log(text: str) -> list[LogRecord]:
    """Split a clause log into records.

    A witness comment applies to the next clause line; unrecognized comments
    are ignored (the format stays readable by standard proof tools, which
    skip all comments).  Raises ValueError on malformed clause lines or on a
    witness comment with no clause following it.
    """
    records: list[LogRecord] = []
    pending: Optional[tuple[str, str]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            body = line[1:].strip()
            for tag in WITNESS_TAGS:
                if body == tag or body.startswith(tag + " "):
                    pending = (tag, body[len(tag):].strip())
                    break
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise ValueError(f"line {lineno}: not a clause line: {raw!r}") from e
        if not nums or nums[-1] != 0:
            raise ValueError(f"line {lineno}: clause line must end with 0")
        if any(x == 0 for x in nums[:-1]):
            raise ValueError(f"line {lineno}: literal 0 inside clause")
        tag, payload = pending if pending is not None else (None, "")
        pending = None
        records.append(LogRecord(lineno, tag, payload, tuple(nums[:-1])))
    if pending is not None:
        raise ValueError(f"dangling witness comment ({pending[0]}) at end of log")
    return records


# -- witness audits --------------------------------------------------------------


def _ints(payload: str) -> list[int]:
    return [int(tok) for tok in payload.split()]


def check_symmetry_record(
    evm: EdgeVarMap, payload: str, lits: Sequence[int]
) -> Optional[str]:
    """Soundness of a symmetry clause against its permutation witness.

    The payload is "i1 ... in strict a b".  The clause is sound iff every
    total assignment falsifying it reads at least as large as its relabeling
    by the permutation on every cell before the strict cell, and strictly
    larger on the strict cell — then any such graph is non-canonical.  Cell
    by cell that requires: the cell is fixed by the permutation, or the
    clause pins the cell present (negative literal), or pins its image cell
    absent (positive literal); the strict cell needs both pins.  Literals
    explained by no cell are corruption.
    """
    n = evm.n
    try:
        nums = _ints(payload.replace("strict", " "))
        if len(nums) != n + 2 or "strict" not in payload:
            return f"malformed permutation payload {payload!r}"
        pi = Permutation(nums[:n])
        strict = (nums[n], nums[n + 1])
    except ValueError as e:
        return f"malformed permutation payload: {e}"
    if not (1 <= strict[0] < strict[1] <= n):
        return f"strict cell {strict} is not an upper-triangle cell"
    clause = set(lits)
    allowed: set[int] = set()
    reached = False
    for u, v in cell_order_pairs(n):
        pu, pv = pi(u), pi(v)
        if pu > pv:
            pu, pv = pv, pu
        if (u, v) == strict:
            if (pu, pv) == (u, v):
                return "strict cell is fixed by the permutation"
            if -evm.var(u, v) not in clause:
                return f"strict cell {strict}: present-side literal missing"
            if evm.var(pu, pv) not in clause:
                return f"strict cell {strict}: image absent-side literal missing"
            allowed.update((-evm.var(u, v), evm.var(pu, pv)))
            reached = True
            break
        if (pu, pv) == (u, v):
            continue
        if -evm.var(u, v) not in clause and evm.var(pu, pv) not in clause:
            return f"comparison cell {(u, v)} before {strict} is unconstrained"
        allowed.update((-evm.var(u, v), evm.var(pu, pv)))
    if not reached:
        return f"strict cell {strict} not reached in cell order"
    junk = clause - allowed
    if junk:
        return f"literal {min(junk)} explained by no comparison cell"
    return None


def check_coloring_record(
    evm: EdgeVarMap, payload: str, lits: Sequence[int]
) -> Optional[str]:
    """A coloring record must reproduce its blocking clause exactly: one
    positive edge literal per same-colored pair."""
    try:
        nums = _ints(payload)
        if len(nums) != evm.n + 1:
            return f"coloring payload needs k plus {evm.n} colors"
        coloring = KColoring(nums[0], tuple(nums[1:]))
    except ValueError as e:
        return f"malformed coloring payload: {e}"
    expected = set(coloring_clause(coloring, evm).lits)
    if set(lits) != expected:
        return "clause does not match the coloring's same-color pairs"
    return None


def check_010_record(
    evm: EdgeVarMap,
    triangle_map: Optional[Mapping[tuple[int, int, int], int]],
    payload: str,
    lits: Sequence[int],
) -> Optional[str]:
    """A 010 record must reproduce its blocking clause exactly: an edge
    literal per 0-0 pair and a triangle literal per 1-1-1 triple."""
    if triangle_map is None:
        return "verifying a 010 record requires the triangle variable map"
    try:
        nums = _ints(payload)
        if len(nums) != evm.n:
            return f"010 payload needs {evm.n} values"
        coloring = Coloring010(tuple(nums))
    except ValueError as e:
        return f"malformed 010 payload: {e}"
    try:
        expected = set(blocking_clause_010(coloring, evm, triangle_map).lits)
    except RuntimeError as e:
        return str(e)
    if set(lits) != expected:
        return "clause does not match the labeling's violation literals"
    return None


def check_solution_record(
    evm: EdgeVarMap,
    payload: str,
    lits: Sequence[int],
    solution_check: Optional[Callable[[PartialGraph], bool]] = None,
) -> Optional[str]:
    """A solution record must be the negation of its graph's edge assignment;
    optionally the graph is re-checked against a property oracle."""
    try:
        g = graph6_decode(payload.strip())
    except ValueError as e:
        return f"bad graph6 payload: {e}"
    if g.n != evm.n:
        return f"solution graph has {g.n} vertices, run has {evm.n}"
    expected = set(solution_blocking_clause(g, evm).lits)
    if set(lits) != expected:
        return "clause is not the negation of the recorded graph"
    if solution_check is not None and not solution_check(g):
        return "recorded solution fails the property oracle"
    return None


def check_cube_record(payload: str, lits: Sequence[int]) -> Optional[str]:
    """A cube record must be the negation of the cube's literals."""
    try:
        cube = _ints(payload)
    except ValueError as e:
        return f"malformed cube payload: {e}"
    if not cube or any(x == 0 for x in cube):
        return "cube payload must be nonzero literals"
    if set(lits) != {-x for x in cube}:
        return "clause is not the cube's negation"
    return None


# -- reverse unit propagation -----------------------------------------------------


class UnitPropagator:
    """Incremental two-watched-literal unit propagation for replay checking.

    ``add_clause`` installs a clause permanently (propagating any top-level
    units); ``has_rup`` temporarily assumes all literals of a clause false
    and reports whether propagation conflicts.  Once a top-level conflict is
    reached the formula is unsatisfiable and every clause has RUP.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        # assignment per variable: 0 unassigned, 1 true, -1 false
        self._val = np.zeros(nvars + 1, dtype=np.int8)
        self._trail: list[int] = []
        self._qhead = 0
        # watch lists indexed by literal code 2*var + (sign<0)
        self._watches: list[list[int]] = [[] for _ in range(2 * nvars + 2)]
        self._clauses: list[list[int]] = []
        self.unsat = False

    @staticmethod
    def _code(lit: int) -> int:
        return 2 * abs(lit) + (lit < 0)

    def _lit_value(self, lit: int) -> int:
        v = self._val[abs(lit)]
        return v if lit > 0 else -v

    def _assign(self, lit: int) -> None:
        self._val[abs(lit)] = 1 if lit > 0 else -1
        self._trail.append(lit)

    def _propagate(self) -> bool:
        """Flush the trail queue; True on conflict."""
        while self._qhead < len(self._trail):
            lit = self._trail[self._qhead]
            self._qhead += 1
            watching = self._watches[self._code(-lit)]
            i = 0
            while i < len(watching):
                ci = watching[i]
                cl = self._clauses[ci]
                # normalize: watched literals sit at cl[0], cl[1]
                if cl[0] == -lit:
                    cl[0], cl[1] = cl[1], cl[0]
                if self._lit_value(cl[0]) == 1:
                    i += 1
                    continue
                for k in range(2, len(cl)):
                    if self._lit_value(cl[k]) != -1:
                        cl[1], cl[k] = cl[k], cl[1]
                        self._watches[self._code(cl[1])].append(ci)
                        watching[i] = watching[-1]
                        watching.pop()
                        break
                else:
                    if self._lit_value(cl[0]) == -1:
                        return True
                    self._assign(cl[0])
                    i += 1
        return False

    def add_clause(self, lits: Sequence[int]) -> None:
        """Install a clause; literals decided false at the top level are
        dropped, clauses satisfied at the top level are skipped (top-level
        assignments only ever grow)."""
        if self.unsat:
            return
        reduced: list[int] = []
        for lit in dict.fromkeys(lits):
            v = self._lit_value(lit)
            if v == 1:
                return
            if v == 0:
                reduced.append(lit)
        if not reduced:
            self.unsat = True
            return
        if len(reduced) == 1:
            self._assign(reduced[0])
            if self._propagate():
                self.unsat = True
            return
        ci = len(self._clauses)
        self._clauses.append(reduced)
        self._watches[self._code(reduced[0])].append(ci)
        self._watches[self._code(reduced[1])].append(ci)

    def has_rup(self, lits: Sequence[int]) -> bool:
        """True when assuming every literal of ``lits`` false conflicts under
        unit propagation (so the clause is a sound addition)."""
        if self.unsat:
            return True
        mark = len(self._trail)
        conflict = False
        for lit in lits:
            v = self._lit_value(lit)
            if v == 1:
                conflict = True
                break
            if v == 0:
                self._assign(-lit)
        if not conflict:
            conflict = self._propagate()
        for lit in self._trail[mark:]:
            self._val[abs(lit)] = 0
        del self._trail[mark:]
        self._qhead = mark
        return conflict


# -- the replay driver -------------------------------------------------------------


@dataclass
class ReplayReport:
    """Outcome of one log replay: per-kind record counts, all failures as
    (line, message) pairs, and whether the empty clause was derived."""

    ok: bool
    records: int
    tagged: dict[str, int] = field(default_factory=dict)
    rup_checked: int = 0
    empty_clause_derived: bool = False
    errors: list[tuple[int, str]] = field(default_factory=list)

    def first_error(self) -> Optional[str]:
        if not self.errors:
            return None
        line, msg = self.errors[0]
        return f"line {line}: {msg}"


def verify_log(
    formula: Formula,
    log_text: str,
    evm: EdgeVarMap,
    *,
    triangle_map: Optional[Mapping[tuple[int, int, int], int]] = None,
    solution_check: Optional[Callable[[PartialGraph], bool]] = None,
    check_rup: bool = True,
    max_errors: int = 20,
) -> ReplayReport:
    """Audit a clause log against the formula that produced it.

    Tagged records are witness-checked and then taken as axioms; untagged
    records must have RUP with respect to everything before them.  The
    report's ``empty_clause_derived`` says whether an (RUP-valid) empty
    clause appeared — the unsatisfiability certificate for runs that
    exhausted their search space.
    """
    records = parse_clause_log(log_text)
    maxvar = formula.variable_count
    for rec in records:
        for lit in rec.lits:
            maxvar = max(maxvar, abs(lit))
    prop = UnitPropagator(maxvar) if check_rup else None
    if prop is not None:
        for c in formula.clauses:
            prop.add_clause(c.lits)
    report = ReplayReport(ok=True, records=len(records))
    for rec in records:
        if len(report.errors) >= max_errors:
            break
        if rec.tag is None:
            if prop is not None:
                report.rup_checked += 1
                if prop.has_rup(rec.lits):
                    if not rec.lits:
                        report.empty_clause_derived = True
                else:
                    report.errors.append(
                        (rec.line, "clause not derivable by unit propagation")
                    )
        else:
            report.tagged[rec.tag] = report.tagged.get(rec.tag, 0) + 1
            if rec.tag == "perm":
                err = check_symmetry_record(evm, rec.payload, rec.lits)
            elif rec.tag == "col":
                err = check_coloring_record(evm, rec.payload, rec.lits)
            elif rec.tag == "col010":
                err = check_010_record(evm, triangle_map, rec.payload, rec.lits)
            elif rec.tag == "sol":
                err = check_solution_record(evm, rec.payload, rec.lits, solution_check)
            else:
                err = check_cube_record(rec.payload, rec.lits)
            if err is not None:
                report.errors.append((rec.line, err))
        if prop is not None:
            prop.add_clause(rec.lits)
    report.ok = not report.errors
    return report


# -- brute-force property oracles ---------------------------------------------------


def _edge_array(g: PartialGraph) -> np.ndarray:
    if not g.is_fully_defined():
        raise ValueError("property oracles need a fully defined graph")
    return np.array([(u - 1, v - 1) for u, v in g.edges()], dtype=np.int64)


def brute_k_colorable(g: PartialGraph, k: int) -> bool:
    """Exhaustive proper-colorability check over all k^n color vectors,
    vectorized one base-k digit position at a time."""
    edges = _edge_array(g)
    if len(edges) == 0:
        return True
    total = k ** g.n
    idx = np.arange(total, dtype=np.int64)
    ok = np.ones(total, dtype=bool)
    color = np.empty((g.n, total), dtype=np.int8)
    for v in range(g.n):
        color[v] = (idx // (k ** v)) % k
    for u, v in edges:
        ok &= color[u] != color[v]
        if not ok.any():
            return False
    return bool(ok.any())


def brute_valid_010_exists(g: PartialGraph) -> bool:
    """Exhaustive check over all 2^n {0,1} labelings for one with no 0-0
    edge and no 1-1-1 triangle."""
    edges = _edge_array(g)
    n = g.n
    total = 1 << n
    idx = np.arange(total, dtype=np.int64)
    bit = [(idx >> v) & 1 for v in range(n)]
    ok = np.ones(total, dtype=bool)
    for u, v in edges:
        ok &= (bit[u] | bit[v]) == 1
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if not g.edge(a, b):
                continue
            for c in range(b + 1, n + 1):
                if g.edge(a, c) and g.edge(b, c):
                    ok &= (bit[a - 1] & bit[b - 1] & bit[c - 1]) == 0
    return bool(ok.any())


def has_triangle(g: PartialGraph) -> bool:
    """True when some three vertices are pairwise adjacent."""
    n = g.n
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if not g.edge(a, b):
                continue
            for c in range(b + 1, n + 1):
                if g.edge(a, c) and g.edge(b, c):
                    return True
    return False
