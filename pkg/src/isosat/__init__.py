"""isosat: isomorphism-free graph search built on a CDCL SAT core.

The package combines a conflict-driven SAT solver with an external propagator
hook, a lexicographic-minimality propagator that prunes isomorphic copies
during search, a co-certificate learning loop for co-NP side conditions
(k-colorability, 010-colorability), cube-and-conquer parallelization, and an
orthogonal-vector embeddability pipeline.
"""

from .graphs import (
    ABSENT,
    PRESENT,
    UNDEF,
    EdgeVarMap,
    Incomparable,
    Order,
    PartialGraph,
    Permutation,
    all_permutations,
    cell_order_pairs,
    graph6_decode,
    graph6_encode,
    graph_from_assignment,
    is_lexmin_bruteforce,
    lex_compare,
)

__all__ = [
    "ABSENT",
    "PRESENT",
    "UNDEF",
    "EdgeVarMap",
    "Incomparable",
    "Order",
    "PartialGraph",
    "Permutation",
    "all_permutations",
    "cell_order_pairs",
    "graph6_decode",
    "graph6_encode",
    "graph_from_assignment",
    "is_lexmin_bruteforce",
    "lex_compare",
]

__version__ = "0.1.0"
