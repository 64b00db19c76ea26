"""Canonical-form checking and the symmetry-breaking clauses it yields.

A fully defined graph is *canonical* when no vertex relabeling produces a
lexicographically smaller row-concatenated adjacency string.  For partially
defined graphs the check looks for a relabeling that is already decided
smaller on the defined cells alone; such a relabeling witnesses that *every*
completion of the current assignment in the falsified region is non-canonical,
which makes the derived clause sound to add during search.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations as _permutations

import numpy as np

from . import _minkernel as _mk
from .graphs import (
    ABSENT,
    PRESENT,
    UNDEF,
    EdgeVarMap,
    PartialGraph,
    Permutation,
    cell_order_pairs,
)

#: Candidate-trial budget used for checks on partial assignments; full
#: assignments are checked with budget 0 (unlimited).
DEFAULT_BUDGET = 3000

MINIMAL = "Minimal"
BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class MinimalityWitness:
    """A relabeling whose reading of the graph is lex-smaller, together with
    the first cell where it is strictly smaller.  All cells before
    ``strict_cell`` read equal (or are mapped to themselves); at
    ``strict_cell`` the graph has an edge but the reading does not."""

    permutation: Permutation
    strict_cell: tuple[int, int]


def check_minimal(g: PartialGraph, budget: int = DEFAULT_BUDGET):
    """Decide whether ``g`` is canonical.

    Returns ``MINIMAL``, a :class:`MinimalityWitness`, or ``BUDGET_EXCEEDED``
    when the candidate-trial budget (0 = unlimited) ran out first.  Witnesses
    are re-validated cell by cell before being returned.
    """
    m = np.array(g.matrix, dtype=np.int8)
    perm_out = np.full(g.n, -1, np.int32)
    cell_out = np.zeros(2, np.int32)
    status = _mk.check_minimal_k(m, budget, perm_out, cell_out)
    if status == _mk.MIN_MINIMAL:
        return MINIMAL
    if status == _mk.MIN_BUDGET:
        return BUDGET_EXCEEDED
    images = [int(x) for x in perm_out]
    unused = iter(sorted(set(range(g.n)) - {x for x in images if x >= 0}))
    images = [x if x >= 0 else next(unused) for x in images]
    witness = MinimalityWitness(
        Permutation(x + 1 for x in images),
        (int(cell_out[0]) + 1, int(cell_out[1]) + 1),
    )
    _verify_witness(g, witness)
    return witness


def _verify_witness(g: PartialGraph, w: MinimalityWitness) -> None:
    """Internal consistency check; a violation means the search kernel is
    broken, so fail loudly rather than emit an unsound clause."""
    pi = w.permutation
    for u, v in cell_order_pairs(g.n):
        pu, pv = pi(u), pi(v)
        if pu > pv:
            pu, pv = pv, pu
        if (u, v) == w.strict_cell:
            if g.cell(u, v) == PRESENT and g.cell(pu, pv) == ABSENT:
                return
            raise RuntimeError(f"invalid witness: strict cell {w.strict_cell} does not hold")
        if (pu, pv) == (u, v):
            continue
        a = g.cell(u, v)
        b = g.cell(pu, pv)
        if a == UNDEF or b == UNDEF or a != b:
            raise RuntimeError(f"invalid witness: prefix cell {(u, v)} not defined-equal")
    raise RuntimeError("invalid witness: strict cell outside the cell order")


def clause_from_witness(g: PartialGraph, w: MinimalityWitness, evm: EdgeVarMap) -> list[int]:
    """The symmetry-breaking clause a witness justifies.

    Any total assignment falsifying the clause keeps every witness prefix
    cell readable as equal and the strict cell strictly decreasing, so its
    graph is relabeled smaller by ``w.permutation`` and cannot be canonical.
    The clause is falsified by ``g`` itself (asserted), hence always a useful
    conflict when injected.
    """
    pi = w.permutation
    lits: dict[int, None] = {}
    reached = False
    for u, v in cell_order_pairs(g.n):
        pu, pv = pi(u), pi(v)
        if pu > pv:
            pu, pv = pv, pu
        if (u, v) == w.strict_cell:
            lits[-evm.var(u, v)] = None
            lits[evm.var(pu, pv)] = None
            reached = True
            break
        if (pu, pv) == (u, v):
            continue
        a = g.cell(u, v)
        if a == PRESENT:
            lits[-evm.var(u, v)] = None
        elif a == ABSENT:
            lits[evm.var(pu, pv)] = None
        else:
            raise ValueError(f"witness prefix cell {(u, v)} is undefined")
    if not reached:
        raise ValueError("strict cell not reached in cell order")
    out = list(lits)
    for lit in out:
        u, v = evm.pair(abs(lit))
        cell = g.cell(u, v)
        want = ABSENT if lit > 0 else PRESENT
        if cell != want:
            raise RuntimeError("witness clause literal not falsified by the graph")
    return out


def lexmin_table(n: int) -> np.ndarray:
    """Exhaustive oracle: boolean array indexed by edge-variable bitmask,
    true iff that graph is canonical.  Materializes all 2^(n(n-1)/2) graphs
    and all n! relabelings; rejected for n > 6."""
    if not (1 <= n <= 6):
        raise ValueError("exhaustive table limited to 1 <= n <= 6")
    pairs = list(combinations(range(n), 2))
    idx = {p: k for k, p in enumerate(pairs)}
    perms = list(_permutations(range(n)))
    inv = np.zeros((len(perms), len(pairs)), np.int64)
    for p, images in enumerate(perms):
        for k, (u, v) in enumerate(pairs):
            a, b = images[u], images[v]
            if a > b:
                a, b = b, a
            inv[p, idx[(a, b)]] = k
    return _mk.lexmin_table_k(n, inv).astype(bool)
