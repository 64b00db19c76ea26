"""CNF machinery and a CDCL SAT solver with an external propagator hook.

Literals are DIMACS-style signed integers (positive = true polarity); a
:class:`Literal` wrapper is provided for callers that prefer the
variable/polarity view.  The solver implements first-UIP clause learning over
two watched literals with VSIDS-style activities, phase saving, and Luby
restarts; there is no inprocessing.  Clauses can be added incrementally
between solve calls and injected from a propagator hook during search; the
solver integrates an injected clause by backjumping to the highest decision
level at which it is not conflicting.

The heavy search loop lives in :mod:`isosat._satkernel` (JIT-compiled); this
module owns the public API, DIMACS parsing/emission, and the DRAT clause log.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _satkernel as _k


class Literal(int):
    """A signed literal; ``Literal(-3).variable == 3``, ``polarity`` is True
    for positive literals.  Plain ints work everywhere Literals do."""

    def __new__(cls, value: int):
        if value == 0:
            raise ValueError("literal 0 is reserved")
        return super().__new__(cls, value)

    @property
    def variable(self) -> int:
        return abs(int(self))

    @property
    def polarity(self) -> bool:
        return self > 0

    def negate(self) -> "Literal":
        return Literal(-int(self))


def _normalize(lits: Iterable[int]) -> tuple[int, ...]:
    """Drop duplicate literals, keep first-occurrence order, reject
    tautologies and zero."""
    seen: set[int] = set()
    out: list[int] = []
    for l in lits:
        l = int(l)
        if l == 0:
            raise ValueError("literal 0 in clause")
        if -l in seen:
            raise ValueError(f"tautological clause: contains {l} and {-l}")
        if l not in seen:
            seen.add(l)
            out.append(l)
    return tuple(out)


@dataclass(frozen=True)
class Clause:
    """An ordered, duplicate-free, non-tautological disjunction of literals."""

    lits: tuple[int, ...]

    def __init__(self, lits: Iterable[int]):
        object.__setattr__(self, "lits", _normalize(lits))

    def __iter__(self):
        return iter(self.lits)

    def __len__(self):
        return len(self.lits)

    def max_var(self) -> int:
        return max((abs(l) for l in self.lits), default=0)


@dataclass
class Formula:
    """A CNF formula: a declared variable count plus a clause list."""

    variable_count: int = 0
    clauses: list[Clause] = field(default_factory=list)

    def add_clause(self, lits: Iterable[int]) -> Clause:
        c = lits if isinstance(lits, Clause) else Clause(lits)
        if c.max_var() > self.variable_count:
            raise ValueError(
                f"clause uses variable {c.max_var()} but only "
                f"{self.variable_count} are declared"
            )
        self.clauses.append(c)
        return c

    def new_var(self) -> int:
        self.variable_count += 1
        return self.variable_count


# -- DIMACS ------------------------------------------------------------------


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF; raises ValueError with a line number on malformed
    input."""
    nvars = None
    nclauses = None
    formula = None
    pending: list[int] = []
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed header {line!r}")
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError as e:
                raise ValueError(f"line {lineno}: malformed header {line!r}") from e
            formula = Formula(variable_count=nvars)
            continue
        if formula is None:
            raise ValueError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                l = int(tok)
            except ValueError as e:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from e
            if l == 0:
                try:
                    formula.add_clause(pending)
                except ValueError as e:
                    raise ValueError(f"line {lineno}: {e}") from e
                pending = []
                count += 1
            else:
                if abs(l) > nvars:
                    raise ValueError(
                        f"line {lineno}: variable {abs(l)} out of range (max {nvars})"
                    )
                pending.append(l)
    if formula is None:
        raise ValueError("missing DIMACS header")
    if pending:
        raise ValueError("unterminated clause at end of input")
    if nclauses is not None and count != nclauses:
        raise ValueError(f"header declares {nclauses} clauses, found {count}")
    return formula


def emit_dimacs(formula: Formula) -> str:
    out = io.StringIO()
    out.write(f"p cnf {formula.variable_count} {len(formula.clauses)}\n")
    for c in formula.clauses:
        out.write(" ".join(str(l) for l in c.lits))
        out.write(" 0\n")
    return out.getvalue()


# -- clause log (DRAT addition lines + witness comments) -----------------------


class ClauseLog:
    """A DRAT-style clause-addition log.

    Mainline learned clauses are written as plain addition lines
    ("lit ... lit 0").  Hook-injected clauses carry a preceding comment line
    recording their witness ("c perm ...", "c col ...", "c col010 ...",
    "c sol ...", "c cube ...") so the same file serves DRAT tools (which skip
    comments) and the replay verifier.
    """

    def __init__(self, sink):
        self._sink = sink

    def comment(self, text: str) -> None:
        try:
            self._sink.write(f"c {text}\n")
        except OSError as e:
            raise RuntimeError(f"clause log write failed: {e}") from e

    def clause(self, lits: Sequence[int]) -> None:
        try:
            if len(lits):
                self._sink.write(" ".join(str(int(l)) for l in lits) + " 0\n")
            else:
                self._sink.write("0\n")
        except OSError as e:
            raise RuntimeError(f"clause log write failed: {e}") from e


def log_learned_clause(sink, clause: Sequence[int]) -> None:
    """Append one clause as a DRAT addition line to ``sink`` (a ClauseLog or
    a writable text file)."""
    log = sink if isinstance(sink, ClauseLog) else ClauseLog(sink)
    log.clause(tuple(clause))


# -- assignment view -----------------------------------------------------------


class Assignment:
    """Read access to the solver's current (possibly partial) assignment."""

    __slots__ = ("_assigns",)

    def __init__(self, assigns: np.ndarray):
        self._assigns = assigns

    def value(self, var: int) -> Optional[bool]:
        v = self._assigns[var]
        return None if v == 0 else bool(v > 0)

    def lit_true(self, lit: int) -> Optional[bool]:
        v = self._assigns[abs(lit)]
        if v == 0:
            return None
        return bool(v > 0) == (lit > 0)

    def num_assigned(self) -> int:
        return int(np.count_nonzero(self._assigns[1:]))


# -- results -------------------------------------------------------------------


SAT = "SAT"
UNSAT = "UNSAT"

NO_ACTION = None  # what a hook returns when it has nothing to inject


@dataclass
class HookPolicy:
    """When the propagator hook runs: always on full assignments; on partial
    assignments once every ``conflict_gate``-th conflict (0 disables partial
    invocations)."""

    conflict_gate: int = 20


class SolverError(RuntimeError):
    pass


class Solver:
    """Incremental CDCL solver.

    Single-owner: instances are not safe for shared mutation, but independent
    instances may run in parallel and an instance may be handed between
    contexts between ``solve()`` calls.
    """

    def __init__(
        self,
        formula: Optional[Formula] = None,
        *,
        seed: int = 1,
        enable_restarts: bool = True,
        enable_vsids: bool = True,
        clause_log: Optional[ClauseLog] = None,
        log_learned: bool = True,
    ):
        nvars = formula.variable_count if formula else 0
        self._st = _k.new_state(nvars, seed, 1 if enable_restarts else 0, 1 if enable_vsids else 0)
        self._nvars = nvars
        self._log = clause_log
        self._log_learned = log_learned
        self._edge_var_count = 0  # vars 1..k counted by the threshold monitor
        self._model: Optional[np.ndarray] = None
        self._in_solve = False
        self.stats: dict[str, int] = {"conflicts": 0, "decisions": 0, "propagations": 0, "injected": 0}
        if formula:
            for c in formula.clauses:
                self.add_clause(c)

    # -- construction -----------------------------------------------------

    @property
    def variable_count(self) -> int:
        return self._nvars

    def new_var(self) -> int:
        self._nvars += 1
        _k.ensure_vars(self._st, self._nvars)
        return self._nvars

    def set_edge_var_count(self, k: int) -> None:
        """Declare that variables 1..k are the edge variables tracked by the
        assigned-edge-variable counter (used for cube extraction)."""
        if k > self._nvars:
            raise ValueError("edge variable range exceeds declared variables")
        self._edge_var_count = k
        _k.set_tracked_prefix(self._st, k)

    def add_clause(self, lits: Iterable[int], *, log_comment: Optional[str] = None) -> None:
        """Add a clause permanently.  Safe between solve calls and from within
        propagator callbacks; during search the solver integrates the clause
        by backjumping to the highest level where it is not conflicting.
        A callback that injects a clause already satisfied at its generation
        point violates the hook contract and raises :class:`SolverError`."""
        c = lits if isinstance(lits, Clause) else Clause(lits)
        if c.max_var() > self._nvars:
            raise ValueError(
                f"clause uses undeclared variable {c.max_var()} (declared {self._nvars})"
            )
        if self._log is not None and log_comment is not None:
            self._log.comment(log_comment)
            self._log.clause(c.lits)
        arr = np.array(c.lits, dtype=np.int32)
        code = _k.add_clause(self._st, arr, 1 if self._in_solve else 0)
        if log_comment is not None:
            self.stats["injected"] += 1
        if code == _k.ADD_SATISFIED_AT_HOOK:
            raise SolverError(
                "hook injected a clause satisfied at its generation point "
                "(soundness violation)"
            )

    # -- solving -----------------------------------------------------------

    def _drain_learned(self) -> None:
        buf = _k.drain_learned(self._st)
        if self._log is not None and self._log_learned:
            i = 0
            while i < len(buf):
                size = buf[i]
                self._log.clause(buf[i + 1 : i + 1 + size])
                i += 1 + size
        # buffer drained regardless, to bound memory

    def solve(
        self,
        assumptions: Sequence[int] = (),
        hook: Optional[Callable] = None,
        hook_policy: Optional[HookPolicy] = None,
        on_threshold: Optional[Callable] = None,
        threshold: int = 0,
    ) -> str:
        """Run CDCL search; returns ``SAT`` or ``UNSAT``.

        ``hook(assignment, full)`` is called with the current
        :class:`Assignment` and a flag saying whether it is total; it returns
        ``None`` (NoAction) or an iterable of literals to inject as a clause.
        The hook is always invoked on full assignments; SAT is only reported
        after the hook returned NoAction on the full assignment.

        ``on_threshold(assignment)`` fires at stable points where at least
        ``threshold`` tracked edge variables are assigned (cube extraction);
        it must inject a clause or raise, otherwise search would loop.
        """
        policy = hook_policy or HookPolicy()
        gate = policy.conflict_gate if hook is not None else 0
        asm = np.array(list(assumptions), dtype=np.int32)
        _k.start_solve(self._st, asm)
        assignment = Assignment(_k.assigns_view(self._st))
        self._in_solve = True
        try:
            return self._solve_loop(asm, hook, gate, on_threshold, threshold, assignment)
        finally:
            self._in_solve = False

    def _solve_loop(self, asm, hook, gate, on_threshold, threshold, assignment) -> str:
        while True:
            ev = _k.run(self._st, gate, threshold)
            self._drain_learned()
            if ev == _k.EV_UNSAT:
                self._sync_stats()
                # The empty clause only follows when no assumptions narrowed
                # the search; under assumptions UNSAT is conditional.
                if self._log is not None and self._log_learned and len(asm) == 0:
                    self._log.clause(())
                return UNSAT
            if ev == _k.EV_SAT:
                action = hook(assignment, True) if hook is not None else NO_ACTION
                if action is NO_ACTION:
                    self._model = _k.assigns_view(self._st).copy()
                    self._sync_stats()
                    return SAT
                self._inject(action)
                continue
            if ev == _k.EV_GATE:
                if hook is not None:
                    action = hook(assignment, False)
                    if action is not NO_ACTION:
                        self._inject(action)
                continue
            if ev == _k.EV_THRESHOLD:
                if on_threshold is None:
                    raise SolverError("threshold event with no threshold handler")
                on_threshold(assignment)
                continue
            raise SolverError(f"unknown kernel event {ev}")

    def _inject(self, action) -> None:
        lits, comment = action if isinstance(action, tuple) else (action, None)
        self.add_clause(lits, log_comment=comment)

    def _sync_stats(self) -> None:
        s = _k.stats_view(self._st)
        self.stats["conflicts"] = int(s[0])
        self.stats["decisions"] = int(s[1])
        self.stats["propagations"] = int(s[2])

    # -- model access --------------------------------------------------------

    def model_value(self, var: int) -> Optional[bool]:
        v = self._model[var]
        return None if v == 0 else bool(v > 0)

    def model_assignment(self) -> Assignment:
        return Assignment(self._model)

    # -- debugging -------------------------------------------------------------

    def check_watch_invariant(self) -> bool:
        """Internal assertion mode: every unsatisfied clause has non-false
        watched literals or is propagating/conflicting."""
        return bool(_k.check_watches(self._st))

    def num_assigned_tracked(self) -> int:
        return int(_k.tracked_assigned(self._st))
