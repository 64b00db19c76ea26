"""Partially defined graphs, the canonical (lex-min) order, and graph6 serialization.

Vertices are 1-based throughout the public API: the vertex set of a graph on
``n`` vertices is ``{1, ..., n}``.  A partially defined graph stores, for every
unordered pair ``{u, v}``, one of three states: present, absent, or undefined.

The canonical order on fully defined graphs is the lexicographic order of the
row-concatenated adjacency matrix read as a 0/1 string (``0 < 1``), with
diagonal cells fixed to 0.  Because the matrix is symmetric, the comparison is
decided by the first differing unordered pair in row-major upper-triangle
order ``(1,2), (1,3), ..., (1,n), (2,3), ...`` — the same order used to number
edge variables.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional

import numpy as np

PRESENT = 1
ABSENT = 0
UNDEF = -1


class Order(enum.Enum):
    """Outcome of a lexicographic comparison of two fully-defined prefixes."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class Incomparable:
    """First cell (unordered pair, 1-based) that is undefined on either side
    before a strict difference was found."""

    cell: tuple[int, int]


def cell_order_pairs(n: int) -> Iterator[tuple[int, int]]:
    """Unordered pairs in the order in which they decide the canonical
    comparison: row-major over the strict upper triangle."""
    return combinations(range(1, n + 1), 2)


class Permutation:
    """A bijection on {1, ..., n}, stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(images)
        n = len(imgs)
        if sorted(imgs) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection on [{n}]: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, v: int) -> int:
        return self.images[v - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for v, img in enumerate(self.images, start=1):
            inv[img - 1] = v
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """Composition: first apply ``other``, then ``self``."""
        return Permutation(self(other(v)) for v in range(1, self.n + 1))


def all_permutations(n: int) -> Iterator[Permutation]:
    for imgs in permutations(range(1, n + 1)):
        yield Permutation(imgs)


class PartialGraph:
    """Three-valued adjacency over the vertex set [n].

    Cells are stored symmetrically on unordered pairs; there are no
    self-loops.  Cell states are ``PRESENT`` (1), ``ABSENT`` (0), and
    ``UNDEF`` (-1).
    """

    __slots__ = ("n", "_m")

    def __init__(self, n: int, fill: int = UNDEF):
        if n < 1:
            raise ValueError("vertex count must be >= 1")
        self.n = n
        self._m = np.full((n, n), fill, dtype=np.int8)
        np.fill_diagonal(self._m, ABSENT)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "PartialGraph":
        """Fully defined graph: the listed pairs are present, all others absent."""
        g = cls(n, fill=ABSENT)
        for u, v in edges:
            g.set_cell(u, v, PRESENT)
        return g

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "PartialGraph":
        m = np.asarray(m, dtype=np.int8)
        g = cls(m.shape[0])
        g._m = m.copy()
        np.fill_diagonal(g._m, ABSENT)
        return g

    def copy(self) -> "PartialGraph":
        return PartialGraph.from_matrix(self._m)

    # -- cell access -------------------------------------------------------

    def _check(self, u: int, v: int) -> None:
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise ValueError(f"vertex out of range: {(u, v)} for n={self.n}")
        if u == v:
            raise ValueError("no self-loops")

    def set_cell(self, u: int, v: int, state: int) -> None:
        self._check(u, v)
        if state not in (PRESENT, ABSENT, UNDEF):
            raise ValueError(f"bad cell state {state}")
        self._m[u - 1, v - 1] = state
        self._m[v - 1, u - 1] = state

    def cell(self, u: int, v: int) -> int:
        self._check(u, v)
        return int(self._m[u - 1, v - 1])

    def edge(self, u: int, v: int) -> Optional[bool]:
        """Present/absent as a boolean, or None when undefined."""
        s = self.cell(u, v)
        return None if s == UNDEF else bool(s)

    @property
    def matrix(self) -> np.ndarray:
        """Read-only view of the 0-based adjacency matrix (int8, -1 = undefined)."""
        m = self._m.view()
        m.flags.writeable = False
        return m

    # -- whole-graph queries -----------------------------------------------

    def is_fully_defined(self) -> bool:
        return not (self._m == UNDEF).any()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in cell_order_pairs(self.n) if self._m[u - 1, v - 1] == PRESENT]

    def edge_count(self) -> int:
        return len(self.edges())

    def degree(self, v: int) -> int:
        self._check(v, 1 if v != 1 else 2)
        return int((self._m[v - 1] == PRESENT).sum())

    def neighbors(self, v: int) -> list[int]:
        return [u + 1 for u in np.flatnonzero(self._m[v - 1] == PRESENT)]

    def state_counts(self) -> dict[int, int]:
        """Counts of present/absent/undefined cells over unordered pairs."""
        iu = np.triu_indices(self.n, k=1)
        vals = self._m[iu]
        return {
            PRESENT: int((vals == PRESENT).sum()),
            ABSENT: int((vals == ABSENT).sum()),
            UNDEF: int((vals == UNDEF).sum()),
        }

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialGraph)
            and self.n == other.n
            and bool((self._m == other._m).all())
        )

    def __hash__(self) -> int:
        return hash((self.n, self._m.tobytes()))

    def __repr__(self) -> str:
        return f"PartialGraph(n={self.n}, edges={self.edges()})"

    # -- permutation action --------------------------------------------------

    def apply_permutation(self, pi: Permutation) -> "PartialGraph":
        """The relabeled graph: cell {pi(u), pi(v)} of the result equals cell
        {u, v} of this graph, undefined states included."""
        if pi.n != self.n:
            raise ValueError("permutation size mismatch")
        idx = np.fromiter((pi.inverse()(v) - 1 for v in range(1, self.n + 1)), dtype=np.int64)
        out = PartialGraph(self.n)
        out._m = self._m[np.ix_(idx, idx)].copy()
        return out


def graph_from_assignment(assignment, evm: "EdgeVarMap") -> PartialGraph:
    """Project a (possibly partial) truth assignment onto a graph.

    ``assignment`` must expose ``value(var) -> True | False | None``.  A pair
    is present iff its edge variable is true, absent iff false, undefined iff
    unassigned.
    """
    g = PartialGraph(evm.n)
    for u, v in cell_order_pairs(evm.n):
        val = assignment.value(evm.var(u, v))
        if val is not None:
            g.set_cell(u, v, PRESENT if val else ABSENT)
    return g


class EdgeVarMap:
    """Bijection between unordered pairs {u, v}, u < v, and variable indices
    1..n(n-1)/2, in row-major order of the strict upper triangle — the same
    order that decides the canonical comparison."""

    __slots__ = ("n", "_pair_of", "_var_of")

    def __init__(self, n: int):
        self.n = n
        self._pair_of: list[tuple[int, int]] = list(cell_order_pairs(n))
        self._var_of = {p: i + 1 for i, p in enumerate(self._pair_of)}

    @property
    def count(self) -> int:
        return len(self._pair_of)

    def var(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._var_of[(u, v)]

    def pair(self, var: int) -> tuple[int, int]:
        return self._pair_of[var - 1]

    def pairs(self) -> list[tuple[int, int]]:
        return list(self._pair_of)


# -- canonical order ---------------------------------------------------------


def lex_compare(g: PartialGraph, h: PartialGraph):
    """Compare two graphs in the canonical (row-concatenated adjacency string)
    order.  Returns an :class:`Order`, or :class:`Incomparable` naming the
    first cell where either side is undefined before a strict difference."""
    if g.n != h.n:
        raise ValueError("comparing graphs of different order")
    for u, v in cell_order_pairs(g.n):
        a = g.cell(u, v)
        b = h.cell(u, v)
        if a == UNDEF or b == UNDEF:
            return Incomparable((u, v))
        if a != b:
            return Order.LESS if a < b else Order.GREATER
    return Order.EQUAL


def is_lexmin_bruteforce(g: PartialGraph) -> bool:
    """Reference oracle: true iff no permutation relabels ``g`` to a
    lex-smaller graph.  Materializes all n! permutations; rejected for n > 8."""
    if g.n > 8:
        raise ValueError("brute-force oracle limited to n <= 8")
    if not g.is_fully_defined():
        raise ValueError("oracle requires a fully defined graph")
    for pi in all_permutations(g.n):
        if lex_compare(g.apply_permutation(pi), g) is Order.LESS:
            return False
    return True


# -- bitmask helpers (exhaustive tests and kernels) ---------------------------


def graph_to_bitmask(g: PartialGraph) -> int:
    """Pack a fully defined graph into an integer; bit k-1 is edge variable k
    of :class:`EdgeVarMap`."""
    mask = 0
    for i, (u, v) in enumerate(cell_order_pairs(g.n)):
        s = g.cell(u, v)
        if s == UNDEF:
            raise ValueError("bitmask requires a fully defined graph")
        if s == PRESENT:
            mask |= 1 << i
    return mask


def graph_from_bitmask(n: int, mask: int) -> PartialGraph:
    g = PartialGraph(n, fill=ABSENT)
    for i, (u, v) in enumerate(cell_order_pairs(n)):
        if (mask >> i) & 1:
            g.set_cell(u, v, PRESENT)
    return g


# -- graph6 -------------------------------------------------------------------


def graph6_encode(g: PartialGraph) -> str:
    """Short-form graph6: byte n+63, then the upper-triangle bit vector in
    column order, 6 bits per byte, +63 offset."""
    if not g.is_fully_defined():
        raise ValueError("graph6 requires a fully defined graph")
    if g.n > 62:
        raise ValueError("short-form graph6 limited to n <= 62")
    bits: list[int] = []
    for v in range(2, g.n + 1):
        for u in range(1, v):
            bits.append(1 if g.cell(u, v) == PRESENT else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(g.n + 63)]
    for i in range(0, len(bits), 6):
        chunk = bits[i : i + 6]
        val = 0
        for b in chunk:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def graph6_decode(text: str) -> PartialGraph:
    text = text.strip()
    if not text:
        raise ValueError("empty graph6 string")
    n = ord(text[0]) - 63
    if not (1 <= n <= 62):
        raise ValueError(f"unsupported graph6 order byte {text[0]!r}")
    need = (n * (n - 1) // 2 + 5) // 6
    body = text[1:]
    if len(body) != need:
        raise ValueError(f"graph6 body length {len(body)}, expected {need} for n={n}")
    bits: list[int] = []
    for ch in body:
        val = ord(ch) - 63
        if not (0 <= val < 64):
            raise ValueError(f"invalid graph6 character {ch!r}")
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    g = PartialGraph(n, fill=ABSENT)
    k = 0
    for v in range(2, n + 1):
        for u in range(1, v):
            if bits[k]:
                g.set_cell(u, v, PRESENT)
            k += 1
    if any(bits[k:]):
        raise ValueError("nonzero padding bits in graph6 string")
    return g
