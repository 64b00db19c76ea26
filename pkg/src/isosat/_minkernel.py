"""JIT kernels for the canonical-form (lex-min) check.

The main kernel runs a depth-first search over partial vertex relabelings
``perm`` (vertex ``i`` is assigned its image at depth ``i``, candidate images
tried in increasing order) looking for a relabeling whose *reading* of the
adjacency matrix is lexicographically smaller than the matrix itself.  The
comparison order is row-major over the strict upper triangle, so assigning
depth ``d`` defines the new cells ``(i, d)`` for all ``i < d``.

Row bookkeeping: a row is ``EQ`` while every defined cell of the reading
equals the matrix, turns ``STRICT`` at a cell where the matrix has 1 but the
reading 0 (the reading is smaller there), and turns ``DEAD`` at a cell that
can never sit inside a witness prefix (reading larger, or undefined on either
side without being the very same cell).  A witness exists exactly when, at
full depth, the first non-``EQ`` row is ``STRICT``.  Row 0 is special: its
cells complete left-to-right as depths advance, so a ``STRICT`` row-0 cell is
a complete witness the moment it appears, mid-assignment.

Branches are cut with exact counting arguments: every future column of an
assigned row consumes exactly one unused image, so a row can only stay ``EQ``
if its remaining 1-cells match its remaining unused neighbor images exactly,
and can only turn ``STRICT`` if enough non-neighbor images remain to keep the
zeros before its next 1-cell equal.  Both predicates only ever *over*-
approximate feasibility, so pruning never misses a witness.

For fully defined matrices the search is short-circuited with an exact
decision per assigned row.  A witness whose strict row is an *assigned* row
i requires rows 0..i-1 to stay exactly equal through every future column and
row i itself to read equal up to some future 1-cell and 0 there.  Since a
pinned row r constrains a future column j to images c with M[perm[r], c] ==
M[r, j], admissible images are an exact-match class per column, and a
complete assignment exists iff greedy exact-match filling succeeds (classes
are disjoint, so greedy choice within a class is neutral).  The fill either
*constructs* a witness outright — no recursion — or proves row i can never
be the strict row here, locking it to EQ and tightening the classes for the
rows below it.  When every assigned row is EQ-locked, a witness can only
live in unassigned rows, which requires the future columns to biject onto
the unused images within equal signature classes; that multiset condition
prunes most branches.  Signatures are maintained incrementally as int64 bit
rows (the cut is enabled only for n <= 62, far above any practical search
size); partial matrices keep the counting cuts only.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MIN_MINIMAL = 0
MIN_WITNESS = 1
MIN_BUDGET = 2

_EQ = 0
_STRICT = 1
_DEAD = 2


@njit(cache=True, inline="always")
def _cell_status(a, b, i, j, fi, fj):
    """Compare target cell (i, j) with its reading cell (fi, fj)."""
    if a >= 0 and b >= 0:
        if a == b:
            return _EQ
        if a == 1:
            return _STRICT
        return _DEAD
    # a side is undefined: equal only when the reading is the same cell
    if (fi == i and fj == j) or (fi == j and fj == i):
        return _EQ
    return _DEAD


@njit(cache=True)
def _sig_bijection(n, d, mask, tau, sig, used, sca, scb):
    """Fully-defined-matrix cut: can the future columns be matched
    bijectively to the unused images so that every row selected by ``mask``
    reads equal?  Holds iff the masked signature multisets coincide."""
    m = 0
    for j in range(d + 1, n):
        sca[m] = tau[j] & mask
        m += 1
    k = 0
    for c in range(n):
        if used[c] == 0:
            scb[k] = sig[c] & mask
            k += 1
    for a in range(1, m):
        v = sca[a]
        b = a - 1
        while b >= 0 and sca[b] > v:
            sca[b + 1] = sca[b]
            b -= 1
        sca[b + 1] = v
    for a in range(1, k):
        v = scb[a]
        b = a - 1
        while b >= 0 and scb[b] > v:
            scb[b + 1] = scb[b]
            b -= 1
        scb[b + 1] = v
    for a in range(m):
        if sca[a] != scb[a]:
            return False
    return True


@njit(cache=True)
def _viable(M, n, d, rowstate, unbrs, undnbrs, ones_after, undef_after,
            first1, zb1, any1_below, cnt):
    """Can some extension of the current partial relabeling (depths 0..d
    assigned) still produce a witness?  False only when provably impossible."""
    m = n - d - 1  # unused images
    last = d if d <= n - 2 else n - 2
    for i in range(last + 1):
        s = rowstate[i]
        if s == _STRICT:
            return True  # witness candidate: decided at full depth
        if s == _DEAD:
            return False
        a1 = ones_after[i, d + 1]
        au = undef_after[i, d + 1]
        if au > 0:
            return True  # undefined target cells: no counting argument applies
        nonn = m - unbrs[i] - undnbrs[i]
        if a1 > 0 and zb1[i, d + 1] + 1 <= nonn:
            return True  # the row can still turn strict
        # the row must now stay EQ: its future cells consume all unused
        # images bijectively, so the counts must match exactly
        if undnbrs[i] != 0 or unbrs[i] != a1:
            return False
    # every assigned row is pinned to EQ; a witness needs an unassigned row
    # with a defined 1-cell and a defined 0 reading from the unused pool
    if any1_below[d + 1] == 0:
        return False
    zero_pairs = (m * (m - 1)) // 2 - cnt[0] - cnt[1]
    if zero_pairs <= 0:
        return False
    return True


@njit(cache=True)
def _witness_fill(M, n, d, i, s, mask, tau, sig, used, perm, availbuf, pick,
                  perm_out):
    """Greedy exact-match completion for a witness whose strict row is the
    assigned row ``i``: every row above ``i`` must read equal on every future
    column (images grouped by their signature over ``mask``), and row ``i``
    must read equal before future column ``s`` and 0 at ``s`` (``s`` = -1 when
    row ``i`` already turned strict at an assigned column, leaving its future
    cells unconstrained).  The admissible images per column form an exact-
    match class, classes with a row-``i`` requirement refine the signature
    classes, so serving the refined columns first makes greedy filling decide
    feasibility exactly.  Fills ``perm_out`` on success."""
    for c in range(n):
        availbuf[c] = used[c]
    pi = perm[i]
    if s >= 0:
        for j in range(d + 1, s + 1):
            req = M[i, j] if j < s else 0
            ck = tau[j] & mask
            found = -1
            for c in range(n):
                if availbuf[c] == 0 and (sig[c] & mask) == ck and M[pi, c] == req:
                    found = c
                    break
            if found < 0:
                return False
            availbuf[found] = 1
            pick[j] = found
    start = s + 1 if s >= 0 else d + 1
    for j in range(start, n):
        ck = tau[j] & mask
        found = -1
        for c in range(n):
            if availbuf[c] == 0 and (sig[c] & mask) == ck:
                found = c
                break
        if found < 0:
            return False
        availbuf[found] = 1
        pick[j] = found
    for t in range(d + 1):
        perm_out[t] = perm[t]
    for j in range(d + 1, n):
        perm_out[j] = pick[j]
    return True


@njit(cache=True)
def _viable_full(M, n, d, rowstate, strictcol, unbrs, ones_after, first1, zb1,
                 any1_below, cnt, tau, sig, used, perm, sca, scb, availbuf,
                 pick, perm_out, cell_out):
    """Exact witness decision over the assigned rows (fully defined M only).

    Returns 2 with ``perm_out``/``cell_out`` filled when a witness strict at
    an assigned row exists below this node, 0 when no witness at all can
    exist below, and 1 when only an unassigned strict row remains possible
    (descend).  Rows are scanned top-down; a row proven unable to be the
    strict row is locked to EQ, adding its bit to the signature mask that
    constrains the rows after it."""
    one = np.int64(1)
    m = n - d - 1
    mask = np.int64(0)
    last = d if d <= n - 2 else n - 2
    for i in range(last + 1):
        st = rowstate[i]
        if st == _DEAD:
            # rows above stay EQ or die, so no row can be first-and-strict
            return 0
        if st == _STRICT:
            if _witness_fill(M, n, d, i, -1, mask, tau, sig, used, perm,
                             availbuf, pick, perm_out):
                cell_out[0] = i
                cell_out[1] = strictcol[i]
                return 2
            return 0
        a1 = ones_after[i, d + 1]
        if a1 > 0 and zb1[i, d + 1] + 1 <= m - unbrs[i]:
            # the row could turn strict at a future 1-cell: decide exactly
            for s in range(first1[i, d + 1], n):
                if M[i, s] == 1:
                    if _witness_fill(M, n, d, i, s, mask, tau, sig, used,
                                     perm, availbuf, pick, perm_out):
                        cell_out[0] = i
                        cell_out[1] = s
                        return 2
        # no witness strict at row i below this node: the row is EQ-locked
        if unbrs[i] != a1:
            return 0
        mask |= one << i
    # only an unassigned strict row remains possible: it needs a future
    # 1-cell, an unused non-adjacent pair to read 0 from, and a bijection of
    # future columns onto unused images keeping every assigned row equal
    if any1_below[d + 1] == 0:
        return 0
    if (m * (m - 1)) // 2 - cnt[0] <= 0:
        return 0
    if not _sig_bijection(n, d, (one << (d + 1)) - 1, tau, sig, used, sca, scb):
        return 0
    return 1


@njit(cache=True)
def check_minimal_k(M, budget, perm_out, cell_out):
    """Search for a lex-decreasing relabeling of M (0/1/-1 adjacency).

    Returns MIN_MINIMAL, MIN_WITNESS (with ``perm_out`` holding images, -1 for
    unassigned, and ``cell_out`` the strict cell), or MIN_BUDGET.  ``budget``
    caps the number of candidate-image trials; 0 means unlimited.
    """
    n = M.shape[0]
    # suffix tables over the fixed matrix, indexed by first future column
    ones_after = np.zeros((n, n + 2), np.int32)
    undef_after = np.zeros((n, n + 2), np.int32)
    first1 = np.full((n, n + 2), n, np.int32)
    zb1 = np.zeros((n, n + 2), np.int32)
    for i in range(n):
        for c in range(n - 1, -1, -1):
            o = ones_after[i, c + 1]
            un = undef_after[i, c + 1]
            f1 = first1[i, c + 1]
            z = zb1[i, c + 1]
            if c >= i + 1:
                a = M[i, c]
                if a == 1:
                    o += 1
                    f1 = c
                    z = 0
                elif a == 0:
                    z += 1
                else:
                    un += 1
            ones_after[i, c] = o
            undef_after[i, c] = un
            first1[i, c] = f1
            zb1[i, c] = z
    any1_below = np.zeros(n + 2, np.int8)
    for r in range(n - 1, -1, -1):
        a = any1_below[r + 1]
        if a == 0 and ones_after[r, r + 1] > 0:
            a = 1
        any1_below[r] = a

    perm = np.full(n, -1, np.int32)
    used = np.zeros(n, np.int8)
    rowstate = np.zeros(n, np.int8)
    strictcol = np.full(n, -1, np.int32)
    unbrs = np.zeros(n, np.int64)    # unused neighbor images per assigned row
    undnbrs = np.zeros(n, np.int64)  # unused undefined-neighbor images
    cand = np.zeros(n + 1, np.int32)
    d1s = np.zeros(n, np.int64)
    dUs = np.zeros(n, np.int64)
    chg = np.zeros(n * n + 1, np.int32)
    chg_base = np.zeros(n + 2, np.int64)
    chg_top = 0
    cnt = np.zeros(2, np.int64)  # unused-pair counts: [adjacent, undefined]
    for u in range(n):
        for w in range(u + 1, n):
            a = M[u, w]
            if a == 1:
                cnt[0] += 1
            elif a == -1:
                cnt[1] += 1
    # signature bookkeeping for the bijection cut (fully defined case only):
    # tau[j] bit r = M[r, j] over pinned rows r, sig[c] bit r = M[perm[r], c]
    full = cnt[1] == 0 and n <= 62
    one = np.int64(1)
    tau = np.zeros(n, np.int64)
    sig = np.zeros(n, np.int64)
    sca = np.zeros(n + 1, np.int64)
    scb = np.zeros(n + 1, np.int64)
    availbuf = np.zeros(n, np.int8)
    pick = np.zeros(n, np.int32)

    # root viability: any witness needs a defined 1-cell somewhere and a
    # defined-0 pair to read it from
    if any1_below[0] == 0 or (n * (n - 1)) // 2 - cnt[0] - cnt[1] <= 0:
        return MIN_MINIMAL

    nodes = 0
    d = 0
    cand[0] = 0
    while True:
        # next unused candidate image at this depth
        u = -1
        for c in range(cand[d], n):
            if used[c] == 0:
                u = c
                break
        if u == -1:
            if d == 0:
                return MIN_MINIMAL
            d -= 1
            # undo the assignment at depth d
            x = perm[d]
            for i in range(d):
                a = M[perm[i], x]
                if a == 1:
                    unbrs[i] += 1
                elif a == -1:
                    undnbrs[i] += 1
            cnt[0] += d1s[d]
            cnt[1] += dUs[d]
            while chg_top > chg_base[d]:
                chg_top -= 1
                r = chg[chg_top]
                rowstate[r] = _EQ
                strictcol[r] = -1
            if full:
                clearbit = ~(one << d)
                for j in range(d + 1, n):
                    tau[j] &= clearbit
                for c in range(n):
                    sig[c] &= clearbit
            used[x] = 0
            perm[d] = -1
            continue
        cand[d] = u + 1
        nodes += 1
        if budget > 0 and nodes > budget:
            return MIN_BUDGET
        if d >= 1:
            # row-0 cell (0, d) completes now; row 0 is EQ on all earlier cells
            st = _cell_status(M[0, d], M[perm[0], u], 0, d, perm[0], u)
            if st == _STRICT:
                for t in range(d):
                    perm_out[t] = perm[t]
                perm_out[d] = u
                for t in range(d + 1, n):
                    perm_out[t] = -1
                cell_out[0] = 0
                cell_out[1] = d
                return MIN_WITNESS
            if st == _DEAD:
                continue
        # assign image u at depth d
        perm[d] = u
        used[u] = 1
        dd1 = 0
        ddu = 0
        for w in range(n):
            if used[w] == 0:
                a = M[u, w]
                if a == 1:
                    dd1 += 1
                elif a == -1:
                    ddu += 1
        cnt[0] -= dd1
        cnt[1] -= ddu
        d1s[d] = dd1
        dUs[d] = ddu
        unbrs[d] = dd1
        undnbrs[d] = ddu
        for i in range(d):
            a = M[perm[i], u]
            if a == 1:
                unbrs[i] -= 1
            elif a == -1:
                undnbrs[i] -= 1
        if full:
            for j in range(d + 1, n):
                if M[d, j] == 1:
                    tau[j] |= one << d
            for c in range(n):
                if used[c] == 0 and M[u, c] == 1:
                    sig[c] |= one << d
        chg_base[d] = chg_top
        for i in range(1, d):
            if rowstate[i] == _EQ:
                st = _cell_status(M[i, d], M[perm[i], u], i, d, perm[i], u)
                if st != _EQ:
                    rowstate[i] = st
                    if st == _STRICT:
                        strictcol[i] = d
                    chg[chg_top] = i
                    chg_top += 1
        if d + 1 == n:
            # full relabeling: the first non-EQ row decides
            wit = -1
            for i in range(1, n - 1):
                s = rowstate[i]
                if s == _STRICT:
                    wit = i
                    break
                if s == _DEAD:
                    break
            if wit >= 0:
                for t in range(n):
                    perm_out[t] = perm[t]
                cell_out[0] = wit
                cell_out[1] = strictcol[wit]
                return MIN_WITNESS
            # automorphism or larger reading: undo and try the next candidate
            x = perm[d]
            for i in range(d):
                a = M[perm[i], x]
                if a == 1:
                    unbrs[i] += 1
                elif a == -1:
                    undnbrs[i] += 1
            cnt[0] += d1s[d]
            cnt[1] += dUs[d]
            while chg_top > chg_base[d]:
                chg_top -= 1
                r = chg[chg_top]
                rowstate[r] = _EQ
                strictcol[r] = -1
            if full:
                clearbit = ~(one << d)
                for j in range(d + 1, n):
                    tau[j] &= clearbit
                for c in range(n):
                    sig[c] &= clearbit
            used[x] = 0
            perm[d] = -1
            continue
        if full:
            code = _viable_full(M, n, d, rowstate, strictcol, unbrs,
                                ones_after, first1, zb1, any1_below, cnt,
                                tau, sig, used, perm, sca, scb, availbuf,
                                pick, perm_out, cell_out)
            if code == 2:
                return MIN_WITNESS
            ok = code == 1
        else:
            ok = _viable(M, n, d, rowstate, unbrs, undnbrs, ones_after,
                         undef_after, first1, zb1, any1_below, cnt)
        if not ok:
            x = perm[d]
            for i in range(d):
                a = M[perm[i], x]
                if a == 1:
                    unbrs[i] += 1
                elif a == -1:
                    undnbrs[i] += 1
            cnt[0] += d1s[d]
            cnt[1] += dUs[d]
            while chg_top > chg_base[d]:
                chg_top -= 1
                r = chg[chg_top]
                rowstate[r] = _EQ
                strictcol[r] = -1
            if full:
                clearbit = ~(one << d)
                for j in range(d + 1, n):
                    tau[j] &= clearbit
                for c in range(n):
                    sig[c] &= clearbit
            used[x] = 0
            perm[d] = -1
            continue
        d += 1
        cand[d] = 0


@njit(cache=True)
def lexmin_table_k(n, inv_cellperm):
    """Exhaustive canonical-form table: entry ``mask`` is 1 iff the graph whose
    upper-triangle bits (edge-variable order) form ``mask`` is lex-minimal.

    ``inv_cellperm[p, t]`` is the reading-cell index that target cell ``t``
    lands on under permutation ``p``; bit ``t`` of a graph contributes bit
    ``inv_cellperm[p, t]`` of its reading.
    """
    C = n * (n - 1) // 2
    nperm = inv_cellperm.shape[0]
    shifts = np.empty(C, np.int64)
    for k in range(C):
        shifts[k] = C - 1 - k  # earlier cells are more significant
    out = np.ones(1 << C, np.int8)
    cells = np.empty(C, np.int64)
    for mask in range(1 << C):
        nset = 0
        for k in range(C):
            if (mask >> k) & 1:
                cells[nset] = k
                nset += 1
        val = 0
        for t in range(nset):
            val += 1 << shifts[cells[t]]
        for p in range(nperm):
            pv = 0
            for t in range(nset):
                pv += 1 << shifts[inv_cellperm[p, cells[t]]]
            if pv < val:
                out[mask] = 0
                break
    return out
