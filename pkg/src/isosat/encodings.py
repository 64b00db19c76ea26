"""CNF generators for the two target graph-existence problems.

Both encoders produce an :class:`EncodingBundle`: a formula whose variables
1..n(n-1)/2 are the edge variables of an :class:`EdgeVarMap` (row-major upper
triangle), followed — for the candidate-graph encoding — by triangle
variables, color variables, and unary-counter auxiliaries, in that fixed
order so DIMACS output is reproducible.

``encode_triangle_free`` forbids every triangle (one ternary clause per
vertex triple).  ``encode_ks_existential`` expresses the four necessary
properties of a candidate graph: square-free (one clause per 4-cycle
orientation), 4-colorable (at-least-one color plus edge-color conflict
clauses; at-most-one is deliberately omitted — extra colors are harmless),
minimum degree 3 (sequential unary counters per vertex), and every vertex on
a triangle (cover clauses over defined triangle variables).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .graphs import EdgeVarMap, cell_order_pairs
from .sat import Clause, Formula

__all__ = [
    "EncodingBundle",
    "encode_triangle_free",
    "encode_ks_existential",
    "sequential_counter_atleast",
    "emit_mapping",
    "parse_mapping",
]


@dataclass
class EncodingBundle:
    """A formula plus the variable maps needed to interpret its models.

    Edge variables always occupy indices 1..n(n-1)/2; ``triangle_map`` (keyed
    by sorted vertex triple) and ``color_map`` (keyed by (vertex, color))
    are present only when the encoding defines them; ``aux_count`` counts the
    remaining anonymous auxiliaries.
    """

    formula: Formula
    edge_map: EdgeVarMap
    triangle_map: Optional[dict[tuple[int, int, int], int]] = None
    color_map: Optional[dict[tuple[int, int], int]] = None
    aux_count: int = 0

    @property
    def n(self) -> int:
        return self.edge_map.n


def encode_triangle_free(n: int) -> EncodingBundle:
    """One clause per vertex triple u<v<w forbidding its three edges
    together: exactly C(n,3) ternary clauses over the edge variables."""
    if n < 3:
        raise ValueError("triangle-free encoding needs n >= 3")
    evm = EdgeVarMap(n)
    f = Formula()
    for _ in range(evm.count):
        f.new_var()
    for u, v, w in itertools.combinations(range(1, n + 1), 3):
        f.add_clause([-evm.var(u, v), -evm.var(v, w), -evm.var(u, w)])
    return EncodingBundle(formula=f, edge_map=evm)


def sequential_counter_atleast(
    lits: Sequence[int], k: int, new_var: Callable[[], int]
) -> tuple[list[Clause], list[int]]:
    """Clauses asserting that at least ``k`` of ``lits`` are true, via a
    unary counter chain s_{i,j} = "at least j true among the first i".

    Returns ``(clauses, aux_vars)``; the final clause is the unit assertion
    of s_{m,k}.  Only the downward implications of each s_{i,j} are encoded,
    which is enough for the assertion to force the count and keeps every
    qualifying input assignment extendable (set each s to the true count
    predicate).  ``k > len(lits)`` yields a single empty clause (no
    assignment qualifies); ``k <= 0`` yields nothing.
    """
    m = len(lits)
    if k <= 0:
        return [], []
    if k > m:
        return [Clause(())], []
    aux: list[int] = []
    s: dict[tuple[int, int], int] = {}
    for i in range(1, m + 1):
        for j in range(1, min(i, k) + 1):
            v = new_var()
            s[(i, j)] = v
            aux.append(v)
    clauses: list[Clause] = []
    for i in range(1, m + 1):
        x = lits[i - 1]
        for j in range(1, min(i, k) + 1):
            if j == i:
                clauses.append(Clause([-s[(i, j)], x]))
                if i > 1:
                    clauses.append(Clause([-s[(i, j)], s[(i - 1, j - 1)]]))
            else:
                clauses.append(Clause([-s[(i, j)], s[(i - 1, j)], x]))
                if j > 1:
                    clauses.append(Clause([-s[(i, j)], s[(i - 1, j)], s[(i - 1, j - 1)]]))
    clauses.append(Clause([s[(m, k)]]))
    return clauses, aux


def encode_ks_existential(n: int) -> EncodingBundle:
    """The existential formula for candidate graphs on n vertices.

    Variables, in order: edges 1..C(n,2); one triangle variable per vertex
    triple; color variables c_{v,i} for i in 1..4 (vertex-major); unary
    counter auxiliaries.  A model's edge projection is a square-free,
    4-colorable graph with minimum degree 3 whose every vertex lies on a
    triangle, and vice versa every such graph supports at least one model.
    """
    if n < 4:
        raise ValueError("candidate-graph encoding needs n >= 4")
    evm = EdgeVarMap(n)
    f = Formula()
    for _ in range(evm.count):
        f.new_var()
    triangle_map: dict[tuple[int, int, int], int] = {}
    for t in itertools.combinations(range(1, n + 1), 3):
        triangle_map[t] = f.new_var()
    color_map: dict[tuple[int, int], int] = {}
    for v in range(1, n + 1):
        for i in range(1, 5):
            color_map[(v, i)] = f.new_var()

    # (1) forbid one orientation of every 4-cycle: v1<v2<v4, v1<v3, v3 distinct
    for v1, v2, v3, v4 in itertools.permutations(range(1, n + 1), 4):
        if v1 < v2 < v4 and v1 < v3 and v2 < v4:
            f.add_clause(
                [
                    -evm.var(v1, v2),
                    -evm.var(min(v2, v3), max(v2, v3)),
                    -evm.var(min(v3, v4), max(v3, v4)),
                    -evm.var(v1, v4),
                ]
            )

    # (2) 4-colorability: at least one color per vertex; adjacent vertices
    # never share a color (at-most-one per vertex deliberately omitted)
    for v in range(1, n + 1):
        f.add_clause([color_map[(v, i)] for i in range(1, 5)])
    for u, v in cell_order_pairs(n):
        for i in range(1, 5):
            f.add_clause([-evm.var(u, v), -color_map[(u, i)], -color_map[(v, i)]])

    # (3) minimum degree 3: a unary counter over each vertex's incident edges
    aux_count = 0
    for v in range(1, n + 1):
        incident = [evm.var(min(v, u), max(v, u)) for u in range(1, n + 1) if u != v]
        clauses, aux = sequential_counter_atleast(incident, 3, f.new_var)
        for c in clauses:
            f.add_clause(c)
        aux_count += len(aux)

    # (4) every vertex on a triangle
    for v in range(1, n + 1):
        f.add_clause(
            [tv for t, tv in triangle_map.items() if v in t]
        )

    # triangle variables defined: t <-> all three edges present
    for (a, b, c), tv in triangle_map.items():
        eab, eac, ebc = evm.var(a, b), evm.var(a, c), evm.var(b, c)
        f.add_clause([-tv, eab])
        f.add_clause([-tv, eac])
        f.add_clause([-tv, ebc])
        f.add_clause([-eab, -eac, -ebc, tv])

    return EncodingBundle(
        formula=f,
        edge_map=evm,
        triangle_map=triangle_map,
        color_map=color_map,
        aux_count=aux_count,
    )


# -- model-interpretation sidecar ------------------------------------------------


def emit_mapping(bundle: EncodingBundle) -> str:
    """The text sidecar mapping structural variables to DIMACS indices:
    one ``e u v -> var`` line per edge variable and, when defined, one
    ``t a b c -> var`` line per triangle variable."""
    lines = [f"e {u} {v} -> {bundle.edge_map.var(u, v)}" for u, v in bundle.edge_map.pairs()]
    if bundle.triangle_map is not None:
        lines.extend(
            f"t {a} {b} {c} -> {var}" for (a, b, c), var in sorted(bundle.triangle_map.items())
        )
    return "\n".join(lines) + "\n"


def parse_mapping(text: str) -> tuple[EdgeVarMap, Optional[dict[tuple[int, int, int], int]]]:
    """Parse a sidecar produced by :func:`emit_mapping`.

    The edge lines must cover exactly the row-major upper triangle with its
    standard variable numbering (the engine relies on that layout); triangle
    lines are collected into a map when present.
    """
    edges: dict[tuple[int, int], int] = {}
    triangles: dict[tuple[int, int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "e" and len(parts) == 5 and parts[3] == "->":
                edges[(int(parts[1]), int(parts[2]))] = int(parts[4])
            elif parts[0] == "t" and len(parts) == 6 and parts[4] == "->":
                triangles[(int(parts[1]), int(parts[2]), int(parts[3]))] = int(parts[5])
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"mapping line {lineno}: cannot parse {raw!r}") from None
    if not edges:
        raise ValueError("mapping defines no edge variables")
    n = max(max(u, v) for u, v in edges)
    evm = EdgeVarMap(n)
    expect = {(u, v): evm.var(u, v) for u, v in evm.pairs()}
    if edges != expect:
        raise ValueError(
            "edge variable layout is not the row-major upper triangle numbering"
        )
    return evm, (triangles or None)
