"""Three-dimensional orthogonal-direction embeddability of graphs.

A graph is *embeddable* when its vertices can be assigned directions in
R^3 so that adjacent vertices get orthogonal vectors and no two vertices
get collinear vectors.  Deciding this is a nonlinear-real-arithmetic
problem; this module implements the surrounding pipeline:

* filter candidates by known unembeddable subgraphs (a subgraph of an
  embeddable graph is embeddable, so containment of a known unembeddable
  graph is a certificate);
* construct a *cross-product cover*: a small set ``S`` of free vertices
  such that every other vertex has two earlier-determined neighbors, whose
  cross product pins its direction — once two neighbors of a vertex are
  known, the vertex's direction is forced up to scale;
* emit the resulting constraint system over only ``3(|S|-2)`` real
  unknowns as an SMT-LIB 2 file (logic ``QF_NRA``) for an external solver;
* verify claimed embeddings and covers exactly in rational arithmetic.

Vectors are deliberately not normalized in the emitted constraints;
normalization empirically makes the solver's job harder, and orthogonality
and non-collinearity are scale-invariant anyway.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import time
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

from .graphs import PartialGraph, graph6_decode, graph6_encode

__all__ = [
    "Vector3",
    "CrossProductCover",
    "UnembeddableLibrary",
    "SubgraphWitness",
    "PipelineVerdict",
    "VALID",
    "Violation",
    "Invalid",
    "BY_SUBGRAPH",
    "BY_SOLVER",
    "EMBEDDABLE",
    "UNKNOWN",
    "find_cover",
    "emit_constraints",
    "subgraph_filter",
    "verify_embedding",
    "verify_cover",
    "run_pipeline",
    "ks31_graph",
    "ks31_embedding",
]

Rational = Union[int, float, Fraction]

VALID = "VALID"

BY_SUBGRAPH = "unembeddable-subgraph"
BY_SOLVER = "unembeddable-solver"
EMBEDDABLE = "embeddable"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Violation:
    """An embedding check failure with a human-readable description."""

    description: str


@dataclass(frozen=True)
class Invalid:
    """A cover check failure with a human-readable reason."""

    reason: str


@dataclass(frozen=True)
class Vector3:
    """A vector in R^3 with exact rational components.

    Floats are converted exactly (every float is a dyadic rational), so all
    arithmetic on :class:`Vector3` is exact; tolerances enter only in the
    comparisons of :func:`verify_embedding`.
    """

    x: Fraction
    y: Fraction
    z: Fraction

    def __init__(self, x: Rational, y: Rational, z: Rational):
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))
        object.__setattr__(self, "z", Fraction(z))

    def dot(self, other: "Vector3") -> Fraction:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vector3") -> "Vector3":
        return Vector3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm_sq(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0 and self.z == 0

    def __iter__(self):
        yield self.x
        yield self.y
        yield self.z

    def __repr__(self) -> str:
        return f"({self.x}, {self.y}, {self.z})"


@dataclass(frozen=True)
class CrossProductCover:
    """A free vertex set ``S`` plus, for every bound vertex ``v``, a pair of
    its neighbors ``w[v]`` whose (recursively determined) vectors fix ``v``
    via cross product; the dependency relation must be acyclic."""

    free: frozenset[int]
    w: dict[int, tuple[int, int]]

    @property
    def bound(self) -> frozenset[int]:
        return frozenset(self.w)

    def topo_order(self) -> list[int]:
        """Bound vertices in an order where every dependency comes earlier;
        raises ``ValueError`` on a cyclic cover."""
        pending = {v: {u for u in pair if u in self.w}
                   for v, pair in self.w.items()}
        order: list[int] = []
        while pending:
            ready = sorted(v for v, deps in pending.items() if not deps)
            if not ready:
                raise ValueError(
                    "cyclic cross-product cover: " +
                    ", ".join(str(v) for v in sorted(pending))
                )
            for v in ready:
                order.append(v)
                del pending[v]
            for deps in pending.values():
                deps.difference_update(ready)
        return order


@dataclass
class SubgraphWitness:
    """An injective vertex map from a known unembeddable graph into a
    candidate, certifying the candidate unembeddable."""

    name: str
    pattern: PartialGraph
    mapping: dict[int, int]


# -- built-in unembeddable graphs ------------------------------------------------

# the smallest unembeddable graph with minimum degree 3: cubic, 10 vertices,
# 15 edges
_UNEMBEDDABLE_10_EDGES = [
    (1, 2), (1, 3), (1, 6), (2, 3), (2, 7), (3, 10), (4, 6), (4, 7), (4, 8),
    (5, 6), (5, 9), (5, 10), (7, 8), (8, 9), (9, 10),
]

# a 15-vertex unembeddable graph: the common subgraph extracted from the two
# odd-order Kochen-Specker candidate graphs of order 23
_UNEMBEDDABLE_15_G6 = "NGw@?i??GHgA@aCtQC?"


@dataclass
class UnembeddableLibrary:
    """Named graphs known to be unembeddable, used as a containment filter.

    Ships with a built-in minimal pair (orders 10 and 15); the full
    collection of unembeddable graphs with minimum degree 3 up to order 14
    is an external dataset loadable from a graph6 file."""

    entries: list[tuple[str, PartialGraph]] = field(default_factory=list)

    @classmethod
    def builtin(cls) -> "UnembeddableLibrary":
        lib = cls()
        lib.add("unembeddable-10", PartialGraph.from_edges(10, _UNEMBEDDABLE_10_EDGES))
        lib.add("unembeddable-15", graph6_decode(_UNEMBEDDABLE_15_G6))
        return lib

    def add(self, name: str, g: PartialGraph) -> None:
        if not g.is_fully_defined():
            raise ValueError(f"library graph {name!r} is not fully defined")
        self.entries.append((name, g))

    def load(self, source) -> int:
        """Append graphs from a graph6 file (one per line); returns the
        number of graphs added."""
        close = False
        if isinstance(source, (str, os.PathLike)):
            source = open(source, "r", encoding="ascii")
            close = True
        try:
            added = 0
            for lineno, raw in enumerate(source, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                self.add(f"library-line-{lineno}", graph6_decode(line))
                added += 1
            return added
        finally:
            if close:
                source.close()

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


# -- cover construction ----------------------------------------------------------


def _connected(g: PartialGraph) -> bool:
    seen = {1}
    stack = [1]
    while stack:
        for u in g.neighbors(stack.pop()):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def find_cover(
    g: PartialGraph,
    seed_edge: Optional[tuple[int, int]] = None,
    rng_seed: Optional[int] = None,
) -> tuple[CrossProductCover, tuple[int, int]]:
    """Greedily construct a cross-product cover of ``g`` and return it with
    the free edge whose endpoints get the fixed directions.

    Start from the endpoints of ``seed_edge`` (default: the first edge in
    cell order); repeatedly bind any vertex with at least two determined
    neighbors, choosing the lexicographically least neighbor pair; when no
    vertex qualifies, free the undetermined vertex with the most determined
    neighbors (ties by lowest index).  With ``rng_seed`` given, the seed
    edge, the bound pair, and stall tie-breaks are randomized instead —
    used to retry stuck solver runs with a different cover.
    """
    edges = g.edges()
    if not edges:
        raise ValueError("graph has no edge to seed a cover")
    if not g.is_fully_defined():
        raise ValueError("cover construction needs a fully defined graph")
    if not _connected(g):
        raise ValueError("graph is disconnected")

    rng = None
    if rng_seed is not None:
        import random

        rng = random.Random(rng_seed)

    if seed_edge is not None:
        v1, v2 = seed_edge
        if g.edge(v1, v2) is not True:
            raise ValueError(f"seed edge {{{v1},{v2}}} is not an edge")
    elif rng is not None:
        v1, v2 = rng.choice(edges)
    else:
        v1, v2 = edges[0]

    free = {v1, v2}
    determined = {v1, v2}
    w: dict[int, tuple[int, int]] = {}

    while len(determined) < g.n:
        progress = True
        while progress:
            progress = False
            for v in range(1, g.n + 1):
                if v in determined:
                    continue
                det = sorted(u for u in g.neighbors(v) if u in determined)
                if len(det) >= 2:
                    if rng is not None:
                        pair = tuple(sorted(rng.sample(det, 2)))
                    else:
                        pair = (det[0], det[1])
                    w[v] = pair
                    determined.add(v)
                    progress = True
        if len(determined) == g.n:
            break
        counts = {
            v: sum(1 for u in g.neighbors(v) if u in determined)
            for v in range(1, g.n + 1)
            if v not in determined
        }
        best = max(counts.values())
        candidates = sorted(v for v, c in counts.items() if c == best)
        pick = rng.choice(candidates) if rng is not None else candidates[0]
        free.add(pick)
        determined.add(pick)

    return CrossProductCover(frozenset(free), w), (min(v1, v2), max(v1, v2))


def verify_cover(g: PartialGraph, cover: CrossProductCover):
    """Check that a cover is structurally correct for ``g``: every vertex is
    either free or bound, every bound vertex's pair consists of two distinct
    neighbors, and the dependency relation is acyclic."""
    for v in range(1, g.n + 1):
        in_free = v in cover.free
        in_bound = v in cover.w
        if in_free and in_bound:
            return Invalid(f"vertex {v} is both free and bound")
        if not in_free and not in_bound:
            return Invalid(f"vertex {v} is neither free nor bound")
    for v, (a, b) in cover.w.items():
        if a == b:
            return Invalid(f"bound vertex {v} repeats neighbor {a}")
        for u in (a, b):
            if not (1 <= u <= g.n) or g.edge(v, u) is not True:
                return Invalid(f"bound vertex {v} lists non-neighbor {u}")
    try:
        cover.topo_order()
    except ValueError as exc:
        return Invalid(str(exc))
    return VALID


# -- constraint emission ---------------------------------------------------------

# symbolic components are either exact Fractions (constants) or SMT-LIB term
# strings; arithmetic folds constants so fixed vectors stay numerals

_Term = Union[Fraction, str]


def _smt_num(q: Fraction) -> str:
    if q < 0:
        return f"(- {_smt_num(-q)})"
    if q.denominator == 1:
        return str(q.numerator)
    return f"(/ {q.numerator} {q.denominator})"


def _render(t: _Term) -> str:
    return _smt_num(t) if isinstance(t, Fraction) else t


def _mul(a: _Term, b: _Term) -> _Term:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if a == 0 or b == 0:
        return Fraction(0)
    if a == 1:
        return b
    if b == 1:
        return a
    return f"(* {_render(a)} {_render(b)})"


def _sub(a: _Term, b: _Term) -> _Term:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    if b == 0:
        return a
    if a == 0:
        return f"(- {_render(b)})"
    return f"(- {_render(a)} {_render(b)})"


def _sum3(a: _Term, b: _Term, c: _Term) -> _Term:
    terms = [a, b, c]
    const = sum((t for t in terms if isinstance(t, Fraction)), Fraction(0))
    symbolic = [t for t in terms if not isinstance(t, Fraction)]
    if not symbolic:
        return const
    parts = list(symbolic)
    if const != 0:
        parts.append(_smt_num(const))
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(_render(p) if isinstance(p, Fraction) else p
                            for p in parts) + ")"


_SymVec = tuple[_Term, _Term, _Term]


def _sym_cross(a: _SymVec, b: _SymVec) -> _SymVec:
    ax, ay, az = a
    bx, by, bz = b
    return (
        _sub(_mul(ay, bz), _mul(az, by)),
        _sub(_mul(az, bx), _mul(ax, bz)),
        _sub(_mul(ax, by), _mul(ay, bx)),
    )


def _sym_dot(a: _SymVec, b: _SymVec) -> _Term:
    return _sum3(_mul(a[0], b[0]), _mul(a[1], b[1]), _mul(a[2], b[2]))


def symbolic_vectors(
    g: PartialGraph, cover: CrossProductCover, free_edge: tuple[int, int]
) -> dict[int, _SymVec]:
    """The per-vertex symbolic vectors: the free edge's endpoints are fixed
    to (1,0,0) and (0,1,0), other free vertices get three fresh unknowns,
    and bound vertices expand to nested cross products with no intermediate
    unknowns."""
    v1, v2 = free_edge
    if v1 not in cover.free or v2 not in cover.free:
        raise ValueError("free edge endpoints must both be free vertices")
    if g.edge(v1, v2) is not True:
        raise ValueError(f"free edge {{{v1},{v2}}} is not an edge")
    vec: dict[int, _SymVec] = {
        v1: (Fraction(1), Fraction(0), Fraction(0)),
        v2: (Fraction(0), Fraction(1), Fraction(0)),
    }
    for v in sorted(cover.free):
        if v not in vec:
            vec[v] = (f"x{v}", f"y{v}", f"z{v}")
    for v in cover.topo_order():
        a, b = cover.w[v]
        vec[v] = _sym_cross(vec[a], vec[b])
    return vec


def emit_constraints(
    g: PartialGraph, cover: CrossProductCover, free_edge: tuple[int, int]
) -> str:
    """The embeddability of ``g`` as an SMT-LIB 2 problem over the reals.

    Emits ``3(|S|-2)`` unknowns (three per free vertex beyond the two fixed
    ones) and one assert per constraint: a non-collinearity disjunction for
    every unordered vertex pair and a zero dot product for every edge.
    Bound vertices appear only as expanded cross-product expressions, which
    is why no orthogonality constraint between a bound vertex and its two
    defining neighbors can fail: a cross product is orthogonal to both
    factors identically.
    """
    vec = symbolic_vectors(g, cover, free_edge)
    unknowns = sorted(v for v in cover.free if v not in free_edge)
    lines = [
        f"; embeddability of a graph with {g.n} vertices and "
        f"{g.edge_count()} edges",
        f"; free vertices: {sorted(cover.free)}; fixed edge: {free_edge}",
        "(set-logic QF_NRA)",
    ]
    for v in unknowns:
        for axis in ("x", "y", "z"):
            lines.append(f"(declare-const {axis}{v} Real)")
    lines.append("; non-collinearity: the cross product of every vertex "
                 "pair is nonzero")
    for u, v in combinations(range(1, g.n + 1), 2):
        cx, cy, cz = _sym_cross(vec[u], vec[v])
        parts = " ".join(f"(not (= {_render(c)} 0))" for c in (cx, cy, cz))
        lines.append(f"(assert (or {parts}))")
    lines.append("; orthogonality along every edge")
    for u, v in g.edges():
        lines.append(f"(assert (= {_render(_sym_dot(vec[u], vec[v]))} 0))")
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


# -- subgraph containment filter -------------------------------------------------


def _monomorphism(h: PartialGraph, g: PartialGraph) -> Optional[dict[int, int]]:
    """An injective map from ``h`` into ``g`` preserving edges (non-induced
    containment), or ``None``; backtracking over ``h``-vertices in
    descending degree order with degree-based pruning."""
    if h.n > g.n or h.edge_count() > g.edge_count():
        return None
    order = sorted(range(1, h.n + 1), key=lambda v: -h.degree(v))
    gdeg = {v: g.degree(v) for v in range(1, g.n + 1)}
    hdeg = {v: h.degree(v) for v in range(1, h.n + 1)}
    mapping: dict[int, int] = {}
    used = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        mapped_nbrs = [u for u in h.neighbors(v) if u in mapping]
        for cand in range(1, g.n + 1):
            if cand in used or gdeg[cand] < hdeg[v]:
                continue
            if any(g.edge(mapping[u], cand) is not True for u in mapped_nbrs):
                continue
            mapping[v] = cand
            used.add(cand)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(cand)
        return False

    return dict(mapping) if extend(0) else None


def subgraph_filter(
    g: PartialGraph, lib: UnembeddableLibrary
) -> Optional[SubgraphWitness]:
    """The first library graph contained in ``g`` as a (not necessarily
    induced) subgraph, with the injective vertex map as witness; ``None``
    when no library graph is contained."""
    for name, pattern in lib:
        mapping = _monomorphism(pattern, g)
        if mapping is not None:
            return SubgraphWitness(name=name, pattern=pattern, mapping=mapping)
    return None


# -- embedding verification ------------------------------------------------------


def verify_embedding(
    g: PartialGraph,
    p: dict[int, Vector3],
    tolerance: Rational = 0,
):
    """Check a claimed embedding: adjacent vertices orthogonal within
    ``tolerance`` and every vertex pair non-collinear (cross product norm
    beyond ``tolerance``).  All arithmetic is exact; ``tolerance=0`` is the
    exact-rational mode."""
    tol = Fraction(tolerance)
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    for v in range(1, g.n + 1):
        vec = p.get(v)
        if vec is None:
            return Violation(f"vertex {v} has no vector")
        if vec.is_zero():
            return Violation(f"vertex {v} is assigned the zero vector")
    for u, v in g.edges():
        d = p[u].dot(p[v])
        if abs(d) > tol:
            return Violation(
                f"adjacent vertices {u},{v} are not orthogonal: dot = {d}"
            )
    tol_sq = tol * tol
    for u, v in combinations(range(1, g.n + 1), 2):
        if p[u].cross(p[v]).norm_sq() <= tol_sq:
            return Violation(f"vertices {u},{v} are collinear")
    return VALID


# -- external solver pipeline ----------------------------------------------------


@dataclass
class PipelineVerdict:
    """Per-candidate outcome of the embeddability pipeline."""

    graph6: str
    status: str
    witness: Optional[SubgraphWitness] = None
    model: Optional[dict[int, Vector3]] = None
    constraint_path: Optional[str] = None
    diagnostic: str = ""
    attempts: int = 0
    seconds: float = 0.0


def _retry_seed(g6: str, attempt: int) -> int:
    return zlib.crc32(f"{g6}:{attempt}".encode("ascii"))


def _parse_sexprs(text: str) -> list:
    """All top-level s-expressions in ``text`` as nested lists of tokens."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    out, stack = [], []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                return out
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                out.append(done)
        elif stack:
            stack[-1].append(tok)
    return out


def _numeric(expr) -> Optional[Fraction]:
    """A rational value of an SMT model term, or ``None`` for forms beyond
    rationals (e.g. algebraic numbers)."""
    if isinstance(expr, str):
        try:
            return Fraction(expr)
        except ValueError:
            return None
    if not expr:
        return None
    if expr[0] == "-" and len(expr) == 2:
        inner = _numeric(expr[1])
        return None if inner is None else -inner
    if expr[0] == "/" and len(expr) == 3:
        num, den = _numeric(expr[1]), _numeric(expr[2])
        if num is None or den is None or den == 0:
            return None
        return num / den
    return None


def parse_model(text: str) -> Optional[dict[str, Fraction]]:
    """Variable values from an SMT-LIB ``get-model`` response; ``None`` when
    any value is not a plain rational."""
    values: dict[str, Fraction] = {}
    for expr in _parse_sexprs(text):
        if expr and expr[0] == "define-fun":
            forms = [expr]
        elif expr and expr[0] == "model":
            forms = expr[1:]
        else:
            # bare response: a parenthesized list of define-funs
            forms = [f for f in expr if isinstance(f, list)]
        for form in forms:
            if (isinstance(form, list) and len(form) == 5
                    and form[0] == "define-fun" and form[2] == []):
                val = _numeric(form[4])
                if val is None:
                    return None
                values[form[1]] = val
    return values


def _model_vectors(
    model: dict[str, Fraction],
    cover: CrossProductCover,
    free_edge: tuple[int, int],
) -> Optional[dict[int, Vector3]]:
    v1, v2 = free_edge
    p: dict[int, Vector3] = {v1: Vector3(1, 0, 0), v2: Vector3(0, 1, 0)}
    for v in cover.free:
        if v in p:
            continue
        try:
            p[v] = Vector3(model[f"x{v}"], model[f"y{v}"], model[f"z{v}"])
        except KeyError:
            return None
    for v in cover.topo_order():
        a, b = cover.w[v]
        p[v] = p[a].cross(p[b])
    return p


def run_pipeline(
    candidates: Iterable[str],
    lib: Optional[UnembeddableLibrary] = None,
    external_solver_command: Optional[str] = None,
    retry_budget: int = 3,
    *,
    timeout_seconds: float = 10.0,
    workdir: Optional[str] = None,
    verify_tolerance: Rational = Fraction(1, 10**6),
) -> list[PipelineVerdict]:
    """Decide embeddability for a stream of graph6 candidates.

    Each candidate is first tested for containment of a known unembeddable
    graph (no solver call needed).  Otherwise a cross-product cover is
    constructed, the constraint file emitted, and — when a solver command
    is configured — the external solver invoked with a per-attempt timeout;
    a timed-out (or inconclusive) attempt is retried with a different,
    deterministically reseeded cover up to ``retry_budget`` attempts.  The
    command template's ``{file}`` placeholder receives the file path.

    Without a solver command the verdict is ``unknown`` and the emitted
    file path is reported, so the constraints can be solved elsewhere.
    """
    if lib is None:
        lib = UnembeddableLibrary.builtin()
    if retry_budget < 1:
        raise ValueError("retry budget must be at least 1")
    if workdir is None:
        workdir = tempfile.mkdtemp(prefix="embed-")
    os.makedirs(workdir, exist_ok=True)

    verdicts: list[PipelineVerdict] = []
    for idx, raw in enumerate(candidates):
        g6 = raw.strip()
        if not g6 or g6.startswith("#"):
            continue
        g = graph6_decode(g6)
        t0 = time.perf_counter()
        witness = subgraph_filter(g, lib)
        if witness is not None:
            verdicts.append(PipelineVerdict(
                graph6=g6, status=BY_SUBGRAPH, witness=witness,
                diagnostic=f"contains {witness.name}",
                seconds=time.perf_counter() - t0,
            ))
            continue

        verdict = PipelineVerdict(graph6=g6, status=UNKNOWN)
        for attempt in range(retry_budget):
            seed = None if attempt == 0 else _retry_seed(g6, attempt)
            cover, free_edge = find_cover(g, rng_seed=seed)
            text = emit_constraints(g, cover, free_edge)
            path = os.path.join(workdir, f"candidate-{idx}-try-{attempt}.smt2")
            with open(path, "w", encoding="ascii") as fh:
                fh.write(text)
            verdict.constraint_path = path
            verdict.attempts = attempt + 1
            if external_solver_command is None:
                verdict.diagnostic = "no external solver configured"
                break
            cmd = [part.format(file=path)
                   for part in shlex.split(external_solver_command)]
            try:
                proc = subprocess.run(
                    cmd, capture_output=True, text=True,
                    timeout=timeout_seconds,
                )
            except subprocess.TimeoutExpired:
                verdict.diagnostic = (
                    f"timed out after {timeout_seconds}s on every cover"
                )
                continue  # retry with a different cover
            except OSError as exc:
                verdict.diagnostic = f"solver could not run: {exc}"
                break
            answer = proc.stdout.split("\n", 1)[0].strip()
            if answer == "unsat":
                verdict.status = BY_SOLVER
                verdict.diagnostic = "constraint system unsatisfiable"
                break
            if answer == "sat":
                model = parse_model(proc.stdout)
                vectors = None
                if model is not None:
                    vectors = _model_vectors(model, cover, free_edge)
                if vectors is None:
                    verdict.status = EMBEDDABLE
                    verdict.diagnostic = "model not rational; left unverified"
                    break
                result = verify_embedding(g, vectors, verify_tolerance)
                if result is VALID:
                    verdict.status = EMBEDDABLE
                    verdict.model = vectors
                    verdict.diagnostic = "model verified"
                else:
                    verdict.status = UNKNOWN
                    verdict.diagnostic = (
                        f"solver model failed verification: {result.description}"
                    )
                break
            if answer == "unknown":
                verdict.diagnostic = "solver answered unknown on every cover"
                continue  # retry with a different cover
            verdict.diagnostic = (
                f"solver failed (exit {proc.returncode}): "
                f"{(proc.stderr or proc.stdout).strip()[:200]}"
            )
            break
        verdict.seconds = time.perf_counter() - t0
        verdicts.append(verdict)
    return verdicts


# -- reference data: a 31-vertex Kochen-Specker graph with an exact embedding ----

_KS31_EDGES = [
    (1, 12), (1, 14), (1, 21), (1, 30),
    (2, 16), (2, 20), (2, 21),
    (3, 13), (3, 14), (3, 23),
    (4, 18), (4, 21), (4, 27), (4, 29),
    (5, 15), (5, 16), (5, 22), (5, 23), (5, 27), (5, 30),
    (6, 14), (6, 25), (6, 27), (6, 31),
    (7, 17), (7, 18), (7, 23),
    (8, 16), (8, 24), (8, 25),
    (9, 18), (9, 25), (9, 28), (9, 30),
    (10, 19), (10, 23), (10, 24), (10, 28), (10, 29),
    (11, 13), (11, 16), (11, 26), (11, 28), (11, 31),
    (12, 17), (12, 19), (12, 26), (12, 30),
    (13, 22), (13, 28),
    (14, 23),
    (15, 20), (15, 22), (15, 24),
    (16, 21), (16, 23), (16, 25), (16, 26),
    (17, 22), (17, 26),
    (18, 23),
    (19, 20), (19, 23), (19, 31),
    (20, 31),
    (24, 29),
    (26, 29),
    (27, 29), (27, 30), (27, 31),
    (28, 30),
]

_KS31_VECTORS = {
    1: (-1, 2, 1), 2: (-1, 2, 0), 3: (0, 2, 1), 4: (-1, 2, -1), 5: (0, 2, 0),
    6: (1, 2, 1), 7: (0, 2, -1), 8: (1, 2, 0), 9: (1, 2, -1), 10: (0, 2, -2),
    11: (2, 2, 0), 12: (2, 2, -2), 13: (-1, 1, -2), 14: (0, 1, -2),
    15: (-1, 0, -2), 16: (0, 0, -2), 17: (-1, -1, -2), 18: (0, -1, -2),
    19: (0, -2, -2), 20: (2, 1, -1), 21: (2, 1, 0), 22: (2, 0, -1),
    23: (2, 0, 0), 24: (2, -1, -1), 25: (2, -1, 0), 26: (2, -2, 0),
    27: (2, 0, -2), 28: (2, -2, -2), 29: (2, 2, 2), 30: (2, 0, 2),
    31: (2, -2, 2),
}


def ks31_graph() -> PartialGraph:
    """Conway and Kochen's 31-vertex Kochen-Specker graph (71 edges), the
    smallest known."""
    return PartialGraph.from_edges(31, _KS31_EDGES)


def ks31_embedding() -> dict[int, Vector3]:
    """An exact integer embedding of :func:`ks31_graph`: adjacent vertices
    orthogonal, all pairs non-collinear, verifiable with tolerance 0."""
    return {v: Vector3(*coords) for v, coords in _KS31_VECTORS.items()}
