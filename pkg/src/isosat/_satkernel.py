"""JIT-compiled CDCL search kernel.

All solver state lives in numpy arrays owned by a small Python-side holder;
the hot loop (:func:`run`) is a single jitted function that returns control to
Python only at *events*:

* ``EV_SAT``       -- every variable is assigned, every assumption literal
                      holds, and propagation is quiescent,
* ``EV_UNSAT``     -- refuted (or an assumption literal is falsified),
* ``EV_GATE``      -- a conflict-gate tick fired (propagator hooks on partial
                      assignments run between these),
* ``EV_THRESHOLD`` -- at least ``threshold`` tracked variables are assigned at
                      a stable point (cube extraction).

Python-side callers inject clauses between events via :func:`add_clause`; an
injected clause that is currently falsified is integrated by backjumping to
the deepest decision level at which it stops being conflicting, after which it
either propagates or simply participates in the search.

Clause storage is one growable int32 arena.  A clause at offset ``o`` is laid
out as ``[size, flags, act, chain0, chain1, lit0, lit1, ...]`` with the two
watched literals at positions 0 and 1.  Watcher lists are threaded *through*
the clauses: ``chain<s>`` holds the next element of the watch list that the
clause's slot ``s`` belongs to, encoded as ``offset << 1 | slot`` (-1 ends a
list), so watch bookkeeping needs no per-literal containers beyond one head
pointer per literal.
"""

from __future__ import annotations

import numpy as np
from numba import njit
from numba.typed import List

# -- events and add_clause result codes ----------------------------------------

EV_SAT = 1
EV_UNSAT = 2
EV_GATE = 3
EV_THRESHOLD = 4

ADD_OK = 0
ADD_SATISFIED_AT_HOOK = 1
ADD_UNSAT_ROOT = 2

# -- scalar register file (st.P) ------------------------------------------------

R_NVARS = 0            # declared variable count
R_TRAIL = 1            # trail size
R_QHEAD = 2            # propagation queue head
R_LEVEL = 3            # current decision level
R_ATOP = 4             # arena top (next free slot)
R_LTOP = 5             # learned-clause drain buffer top
R_CONFLICTS = 6
R_DECISIONS = 7
R_PROPS = 8
R_RESTART = 9          # restarts enabled (0/1)
R_VSIDS = 10           # activity-ordered decisions enabled (0/1)
R_HEAPSIZE = 11
R_NASM = 12            # number of assumption literals this solve
R_GATE_CTR = 13        # conflicts since the last gate tick
R_TRACKED = 14         # vars 1..R_TRACKED are counted by the threshold monitor
R_TRACKED_ASSIGNED = 15
R_OK = 16              # 0 once the formula is refuted outright
R_LEARNED = 17         # live learned clauses in the arena
R_REDUCE_AT = 18       # learned-clause count that triggers a DB reduction
R_LUBY_U = 19          # restart sequence state
R_LUBY_V = 20
R_RESTART_LEFT = 21    # conflicts until the next restart
R_GATEPEND = 22        # a gate tick is waiting for the next stable point
R_SEED = 23

_NREG = 32
HDR = 5                # clause header words before the literals
F_LEARNED = 1
F_DEAD = 2
RESTART_BASE = 100
REDUCE_FIRST = 6000
REDUCE_STEP = 3000
VAR_DECAY_INV = 1.0 / 0.95


@njit(cache=True, inline="always")
def _lidx(lit):
    # watch-list index of a literal: 2*var for positive, 2*var+1 for negative
    if lit > 0:
        return lit << 1
    return ((-lit) << 1) | 1


@njit(cache=True, inline="always")
def _val(assigns, lit):
    # 1 true, -1 false, 0 unassigned
    a = assigns[abs(lit)]
    if a == 0:
        return 0
    if (a > 0) == (lit > 0):
        return 1
    return -1


# -- binary max-heap on variable activity ---------------------------------------


@njit(cache=True)
def _heap_up(activity, heap, heap_pos, i):
    v = heap[i]
    a = activity[v]
    while i > 0:
        p = (i - 1) >> 1
        if activity[heap[p]] >= a:
            break
        heap[i] = heap[p]
        heap_pos[heap[i]] = i
        i = p
    heap[i] = v
    heap_pos[v] = i


@njit(cache=True)
def _heap_down(activity, heap, heap_pos, size, i):
    v = heap[i]
    a = activity[v]
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and activity[heap[c + 1]] > activity[heap[c]]:
            c += 1
        if activity[heap[c]] <= a:
            break
        heap[i] = heap[c]
        heap_pos[heap[i]] = i
        i = c
    heap[i] = v
    heap_pos[v] = i


@njit(cache=True)
def _heap_insert(activity, heap, heap_pos, P, v):
    if heap_pos[v] >= 0:
        return
    i = P[R_HEAPSIZE]
    heap[i] = v
    heap_pos[v] = i
    P[R_HEAPSIZE] = i + 1
    _heap_up(activity, heap, heap_pos, i)


@njit(cache=True)
def _heap_popmax(activity, heap, heap_pos, P):
    v = heap[0]
    size = P[R_HEAPSIZE] - 1
    P[R_HEAPSIZE] = size
    heap_pos[v] = -1
    if size > 0:
        heap[0] = heap[size]
        heap_pos[heap[0]] = 0
        _heap_down(activity, heap, heap_pos, size, 0)
    return v


@njit(cache=True)
def _bump_var(P, F, activity, heap, heap_pos, v):
    activity[v] += F[0]
    if activity[v] > 1e100:
        for u in range(1, P[R_NVARS] + 1):
            activity[u] *= 1e-100
        F[0] *= 1e-100
    if heap_pos[v] >= 0:
        _heap_up(activity, heap, heap_pos, heap_pos[v])


# -- assignment and trail --------------------------------------------------------


@njit(cache=True, inline="always")
def _enqueue(P, assigns, vlevel, vreason, trail, lit, reason):
    v = abs(lit)
    assigns[v] = 1 if lit > 0 else -1
    vlevel[v] = P[R_LEVEL]
    vreason[v] = reason
    trail[P[R_TRAIL]] = lit
    P[R_TRAIL] += 1
    if v <= P[R_TRACKED]:
        P[R_TRACKED_ASSIGNED] += 1


@njit(cache=True)
def _backjump(P, assigns, vlevel, vreason, trail, trail_lim, phase, activity, heap, heap_pos, lvl):
    if lvl >= P[R_LEVEL]:
        return
    base = trail_lim[lvl + 1]
    for i in range(P[R_TRAIL] - 1, base - 1, -1):
        lit = trail[i]
        v = abs(lit)
        phase[v] = 1 if lit > 0 else 0
        assigns[v] = 0
        vreason[v] = -1
        if v <= P[R_TRACKED]:
            P[R_TRACKED_ASSIGNED] -= 1
        if P[R_VSIDS] == 1:
            _heap_insert(activity, heap, heap_pos, P, v)
    P[R_TRAIL] = base
    P[R_QHEAD] = base
    P[R_LEVEL] = lvl


# -- propagation -----------------------------------------------------------------


@njit(cache=True)
def _propagate(P, assigns, vlevel, vreason, trail, watch_head, arena):
    while P[R_QHEAD] < P[R_TRAIL]:
        p = trail[P[R_QHEAD]]
        P[R_QHEAD] += 1
        P[R_PROPS] += 1
        fidx = _lidx(-p)  # lists of clauses in which -p is watched
        prev_off = -1
        prev_slot = 0
        enc = watch_head[fidx]
        while enc != -1:
            off = enc >> 1
            slot = enc & 1
            nxt = arena[off + 3 + slot]
            size = arena[off]
            other = arena[off + HDR + (1 - slot)]
            if _val(assigns, other) == 1:
                prev_off = off
                prev_slot = slot
                enc = nxt
                continue
            moved = False
            for j in range(2, size):
                lj = arena[off + HDR + j]
                if _val(assigns, lj) != -1:
                    # move this watch to lj
                    arena[off + HDR + slot] = lj
                    arena[off + HDR + j] = -p
                    nidx = _lidx(lj)
                    arena[off + 3 + slot] = watch_head[nidx]
                    watch_head[nidx] = enc
                    if prev_off == -1:
                        watch_head[fidx] = nxt
                    else:
                        arena[prev_off + 3 + prev_slot] = nxt
                    moved = True
                    break
            if moved:
                enc = nxt
                continue
            if _val(assigns, other) == -1:
                P[R_QHEAD] = P[R_TRAIL]
                return off  # conflict
            _enqueue(P, assigns, vlevel, vreason, trail, other, off)
            prev_off = off
            prev_slot = slot
            enc = nxt
    return -1


# -- conflict analysis (first UIP) -------------------------------------------------


@njit(cache=True)
def _analyze(P, F, vlevel, vreason, trail, arena, activity, heap, heap_pos, seen, learnt, confl):
    n = 1
    pathc = 0
    p = 0
    idx = P[R_TRAIL] - 1
    cur = P[R_LEVEL]
    while True:
        if arena[confl + 1] & F_LEARNED:
            if arena[confl + 2] < (1 << 30):
                arena[confl + 2] += 1
        size = arena[confl]
        for j in range(size):
            q = arena[confl + HDR + j]
            if q == p:
                continue
            v = abs(q)
            if seen[v] == 0 and vlevel[v] > 0:
                seen[v] = 1
                _bump_var(P, F, activity, heap, heap_pos, v)
                if vlevel[v] >= cur:
                    pathc += 1
                else:
                    learnt[n] = q
                    n += 1
        while seen[abs(trail[idx])] == 0:
            idx -= 1
        p = trail[idx]
        idx -= 1
        seen[abs(p)] = 0
        pathc -= 1
        if pathc <= 0:
            break
        confl = vreason[abs(p)]
    learnt[0] = -p
    for j in range(1, n):
        seen[abs(learnt[j])] = 0
    if n == 1:
        return n, 0
    mj = 1
    for j in range(2, n):
        if vlevel[abs(learnt[j])] > vlevel[abs(learnt[mj])]:
            mj = j
    t = learnt[1]
    learnt[1] = learnt[mj]
    learnt[mj] = t
    return n, vlevel[abs(learnt[1])]


# -- clause storage ----------------------------------------------------------------


@njit(cache=True)
def _grow_i32(holder, top, need):
    arr = holder[0]
    if top + need <= arr.shape[0]:
        return arr
    ncap = arr.shape[0]
    while ncap < top + need:
        ncap *= 2
    if ncap > (1 << 30):
        raise MemoryError("clause arena exceeds the 2^30-entry pointer range")
    na = np.empty(ncap, np.int32)
    na[:top] = arr[:top]
    holder[0] = na
    return na


@njit(cache=True, inline="always")
def _attach(arena, watch_head, off):
    for s in range(2):
        lit = arena[off + HDR + s]
        i = _lidx(lit)
        arena[off + 3 + s] = watch_head[i]
        watch_head[i] = (off << 1) | s


@njit(cache=True)
def _store(P, arena, lits, n, flags, act):
    off = P[R_ATOP]
    arena[off] = n
    arena[off + 1] = flags
    arena[off + 2] = act
    arena[off + 3] = -1
    arena[off + 4] = -1
    for j in range(n):
        arena[off + HDR + j] = lits[j]
    P[R_ATOP] = off + HDR + n
    return off


# -- learned-clause database reduction ----------------------------------------------


@njit(cache=True)
def _locked(assigns, vreason, arena, off):
    for s in range(2):
        lit = arena[off + HDR + s]
        v = abs(lit)
        if assigns[v] != 0 and vreason[v] == off and ((assigns[v] > 0) == (lit > 0)):
            return True
    return False


@njit(cache=True)
def _reduce_db(P, assigns, vreason, watch_head, arena):
    atop = P[R_ATOP]
    # candidates: live learned clauses, longer than binary, not a reason
    cnt = 0
    nlive = 0
    off = 0
    while off < atop:
        size = arena[off]
        flags = arena[off + 1]
        if flags & F_DEAD == 0:
            nlive += 1
            if (flags & F_LEARNED) and size > 2 and not _locked(assigns, vreason, arena, off):
                cnt += 1
        off += HDR + size
    if cnt > 1:
        keys = np.empty(cnt, np.int64)
        offs = np.empty(cnt, np.int64)
        k = 0
        off = 0
        while off < atop:
            size = arena[off]
            flags = arena[off + 1]
            if flags & F_DEAD == 0 and (flags & F_LEARNED) and size > 2 and not _locked(assigns, vreason, arena, off):
                # activity-major, offset-minor: deterministic tie break
                keys[k] = (np.int64(arena[off + 2]) << 24) | np.int64(k)
                offs[k] = off
                k += 1
            off += HDR + size
        order = np.argsort(keys)
        kill = cnt // 2
        for i in range(kill):
            arena[offs[order[i]] + 1] |= F_DEAD
        nlive -= kill
    # age surviving learned clauses
    off = 0
    while off < atop:
        size = arena[off]
        flags = arena[off + 1]
        if (flags & F_LEARNED) and flags & F_DEAD == 0:
            arena[off + 2] >>= 1
        off += HDR + size
    # compact in place, recording the offset remap
    olds = np.empty(nlive, np.int64)
    news = np.empty(nlive, np.int64)
    k = 0
    read = 0
    write = 0
    while read < atop:
        size = arena[read]
        tot = HDR + size
        if arena[read + 1] & F_DEAD == 0:
            olds[k] = read
            news[k] = write
            k += 1
            if write != read:
                for j in range(tot):
                    arena[write + j] = arena[read + j]
            write += tot
        else:
            P[R_LEARNED] -= 1
        read += tot
    P[R_ATOP] = write
    # rebuild watch lists from scratch
    for i in range(watch_head.shape[0]):
        watch_head[i] = -1
    off = 0
    while off < write:
        _attach(arena, watch_head, off)
        off += HDR + arena[off]
    # remap reason pointers through the compaction
    for v in range(1, P[R_NVARS] + 1):
        r = vreason[v]
        if r >= 0:
            lo = 0
            hi = k - 1
            while lo < hi:
                mid = (lo + hi) >> 1
                if olds[mid] < r:
                    lo = mid + 1
                else:
                    hi = mid
            vreason[v] = news[lo]


# -- decisions -----------------------------------------------------------------------


@njit(cache=True)
def _decide(P, assigns, vlevel, vreason, trail, trail_lim, phase, activity, heap, heap_pos, asm):
    while P[R_LEVEL] < P[R_NASM]:
        lit = asm[P[R_LEVEL]]
        v = _val(assigns, lit)
        if v == -1:
            return -1  # assumption falsified
        P[R_LEVEL] += 1
        trail_lim[P[R_LEVEL]] = P[R_TRAIL]
        if v == 0:
            P[R_DECISIONS] += 1
            _enqueue(P, assigns, vlevel, vreason, trail, lit, -1)
            return 0
        # already true: a dummy level keeps level == assumption index
    v = 0
    if P[R_VSIDS] == 1:
        while P[R_HEAPSIZE] > 0:
            cand = _heap_popmax(activity, heap, heap_pos, P)
            if assigns[cand] == 0:
                v = cand
                break
    else:
        for u in range(1, P[R_NVARS] + 1):
            if assigns[u] == 0:
                v = u
                break
    if v == 0:
        return 1  # nothing left to decide
    P[R_LEVEL] += 1
    trail_lim[P[R_LEVEL]] = P[R_TRAIL]
    P[R_DECISIONS] += 1
    lit = v if phase[v] == 1 else -v
    _enqueue(P, assigns, vlevel, vreason, trail, lit, -1)
    return 0


# -- incremental clause addition ------------------------------------------------------


@njit(cache=True)
def _add_clause_k(P, assigns, vlevel, vreason, trail, trail_lim, phase, activity,
                  heap, heap_pos, watch_head, arena_l, lits, strict):
    if P[R_OK] == 0:
        return ADD_OK  # already refuted; nothing to integrate
    n0 = lits.shape[0]
    if n0 == 0:
        P[R_OK] = 0
        return ADD_UNSAT_ROOT
    # drop literals false at level 0 (permanently false); detect satisfaction
    tmp = np.empty(n0, np.int32)
    m = 0
    for _attempt in range(2):
        m = 0
        sat_root = False
        sat_above = False
        for i in range(n0):
            lit = lits[i]
            v = _val(assigns, lit)
            if v == 1:
                if vlevel[abs(lit)] == 0:
                    sat_root = True
                else:
                    sat_above = True
            if v == -1 and vlevel[abs(lit)] == 0:
                continue
            tmp[m] = lit
            m += 1
        if sat_root:
            return ADD_OK  # permanently satisfied: no need to store
        if not sat_above:
            break
        if strict == 1:
            # during search only falsified or propagating clauses are sound
            return ADD_SATISFIED_AT_HOOK
        # between solves: fall back to the root and integrate from scratch
        _backjump(P, assigns, vlevel, vreason, trail, trail_lim, phase,
                  activity, heap, heap_pos, 0)
    if m == 0:
        P[R_OK] = 0
        return ADD_UNSAT_ROOT
    # if currently falsified, backjump to the deepest level where it is not
    nun = 0
    for i in range(m):
        if assigns[abs(tmp[i])] == 0:
            nun += 1
    if nun == 0:
        maxl = 0
        for i in range(m):
            lv = vlevel[abs(tmp[i])]
            if lv > maxl:
                maxl = lv
        l2 = 0
        for i in range(m):
            lv = vlevel[abs(tmp[i])]
            if lv < maxl and lv > l2:
                l2 = lv
        if maxl == 0:
            P[R_OK] = 0
            return ADD_UNSAT_ROOT
        _backjump(P, assigns, vlevel, vreason, trail, trail_lim, phase, activity, heap, heap_pos, l2)
    if m == 1:
        # unit: the backjump above (or level 0 construction) makes this safe
        if _val(assigns, tmp[0]) == 0:
            _enqueue(P, assigns, vlevel, vreason, trail, tmp[0], -1)
        return ADD_OK
    # choose watches: two unassigned if possible, else unassigned + deepest false
    w0 = -1
    w1 = -1
    for i in range(m):
        if assigns[abs(tmp[i])] == 0:
            if w0 < 0:
                w0 = i
            elif w1 < 0:
                w1 = i
                break
    if w1 < 0:
        best = -1
        bestlv = -1
        for i in range(m):
            if i == w0:
                continue
            lv = vlevel[abs(tmp[i])]
            if lv > bestlv:
                bestlv = lv
                best = i
        w1 = best
    t = tmp[0]
    tmp[0] = tmp[w0]
    tmp[w0] = t
    if w1 == 0:
        w1 = w0
    t = tmp[1]
    tmp[1] = tmp[w1]
    tmp[w1] = t
    arena = _grow_i32(arena_l, P[R_ATOP], HDR + m)
    off = _store(P, arena, tmp, m, 0, 0)
    _attach(arena, watch_head, off)
    if _val(assigns, tmp[0]) == 0 and _val(assigns, tmp[1]) == -1:
        _enqueue(P, assigns, vlevel, vreason, trail, tmp[0], off)
    return ADD_OK


# -- the search loop -------------------------------------------------------------------


@njit(cache=True)
def _run(P, F, assigns, vlevel, vreason, trail, trail_lim, phase, activity,
         heap, heap_pos, seen, learnt, watch_head, arena_l, lbuf_l, asm,
         gate, threshold):
    if P[R_OK] == 0:
        return EV_UNSAT
    while True:
        arena = arena_l[0]
        confl = _propagate(P, assigns, vlevel, vreason, trail, watch_head, arena)
        if confl >= 0:
            P[R_CONFLICTS] += 1
            if gate > 0:
                P[R_GATE_CTR] += 1
                if P[R_GATE_CTR] >= gate:
                    P[R_GATE_CTR] = 0
                    P[R_GATEPEND] = 1
            if P[R_LEVEL] == 0:
                P[R_OK] = 0
                return EV_UNSAT
            n, bl = _analyze(P, F, vlevel, vreason, trail, arena, activity,
                             heap, heap_pos, seen, learnt, confl)
            # buffer the learned clause for the Python-side log
            lb = _grow_i32(lbuf_l, P[R_LTOP], n + 1)
            lb[P[R_LTOP]] = n
            for j in range(n):
                lb[P[R_LTOP] + 1 + j] = learnt[j]
            P[R_LTOP] += n + 1
            _backjump(P, assigns, vlevel, vreason, trail, trail_lim, phase,
                      activity, heap, heap_pos, bl)
            if n == 1:
                _enqueue(P, assigns, vlevel, vreason, trail, learnt[0], -1)
            else:
                arena = _grow_i32(arena_l, P[R_ATOP], HDR + n)
                off = _store(P, arena, learnt, n, F_LEARNED, 1)
                _attach(arena, watch_head, off)
                _enqueue(P, assigns, vlevel, vreason, trail, learnt[0], off)
                P[R_LEARNED] += 1
                if P[R_LEARNED] >= P[R_REDUCE_AT]:
                    _reduce_db(P, assigns, vreason, watch_head, arena)
                    P[R_REDUCE_AT] += REDUCE_STEP
            F[0] *= VAR_DECAY_INV
            if F[0] > 1e100:
                for u in range(1, P[R_NVARS] + 1):
                    activity[u] *= 1e-100
                F[0] *= 1e-100
            if P[R_RESTART] == 1:
                P[R_RESTART_LEFT] -= 1
                if P[R_RESTART_LEFT] <= 0:
                    # advance the restart-length sequence (1,1,2,1,1,2,4,...)
                    u = P[R_LUBY_U]
                    v = P[R_LUBY_V]
                    if (u & -u) == v:
                        P[R_LUBY_U] = u + 1
                        P[R_LUBY_V] = 1
                    else:
                        P[R_LUBY_V] = v * 2
                    P[R_RESTART_LEFT] = P[R_LUBY_V] * RESTART_BASE
                    if P[R_LEVEL] > P[R_NASM]:
                        _backjump(P, assigns, vlevel, vreason, trail, trail_lim,
                                  phase, activity, heap, heap_pos, P[R_NASM])
        else:
            # stable point: propagation is quiescent and consistent
            if P[R_TRAIL] < P[R_NVARS]:
                if P[R_GATEPEND] == 1:
                    P[R_GATEPEND] = 0
                    return EV_GATE
                if threshold > 0 and P[R_TRACKED_ASSIGNED] >= threshold:
                    return EV_THRESHOLD
            # a full trail is only a model once _decide has re-walked the
            # assumption levels: a clause injected mid-search can backjump
            # below them, after which propagation may refill the trail with
            # an assumption variable flipped the wrong way
            r = _decide(P, assigns, vlevel, vreason, trail, trail_lim, phase,
                        activity, heap, heap_pos, asm)
            if r == -1:
                # an assumption is falsified; leave a clean level-0 state
                _backjump(P, assigns, vlevel, vreason, trail, trail_lim, phase,
                          activity, heap, heap_pos, 0)
                return EV_UNSAT
            if r == 1:
                return EV_SAT


@njit(cache=True)
def _check_watches_k(P, assigns, watch_head, arena):
    off = 0
    atop = P[R_ATOP]
    while off < atop:
        size = arena[off]
        anytrue = False
        for j in range(size):
            if _val(assigns, arena[off + HDR + j]) == 1:
                anytrue = True
                break
        if not anytrue:
            v0 = _val(assigns, arena[off + HDR])
            v1 = _val(assigns, arena[off + HDR + 1])
            if v0 == -1 or v1 == -1:
                for j in range(2, size):
                    if _val(assigns, arena[off + HDR + j]) != -1:
                        return 0  # stale watch: a mover was available
        off += HDR + size
    return 1


@njit(cache=True)
def _recount_tracked(P, assigns):
    c = 0
    for v in range(1, P[R_TRACKED] + 1):
        if assigns[v] != 0:
            c += 1
    P[R_TRACKED_ASSIGNED] = c


# -- Python-side state holder and wrappers ----------------------------------------------


class _State:
    __slots__ = ("P", "F", "assigns", "vlevel", "vreason", "trail", "trail_lim",
                 "phase", "activity", "heap", "heap_pos", "seen", "learnt",
                 "watch_head", "arena_l", "lbuf_l", "asm")


def _alloc_vars(st: _State, nvars: int) -> None:
    st.assigns = np.zeros(nvars + 1, np.int8)
    st.vlevel = np.zeros(nvars + 1, np.int32)
    st.vreason = np.full(nvars + 1, -1, np.int64)
    st.trail = np.zeros(nvars + 1, np.int32)
    # levels: one per decision plus one (possibly empty) per assumption
    st.trail_lim = np.zeros(2 * nvars + 4, np.int64)
    st.phase = np.zeros(nvars + 1, np.int8)
    st.activity = np.zeros(nvars + 1, np.float64)
    st.heap = np.zeros(nvars + 1, np.int32)
    st.heap_pos = np.full(nvars + 1, -1, np.int32)
    st.seen = np.zeros(nvars + 1, np.int8)
    st.learnt = np.zeros(nvars + 2, np.int32)
    st.watch_head = np.full(2 * nvars + 2, -1, np.int64)


def new_state(nvars: int, seed: int, restarts: int, vsids: int) -> _State:
    st = _State()
    st.P = np.zeros(_NREG, np.int64)
    st.F = np.array([1.0, 0.0, 0.0, 0.0])
    st.P[R_NVARS] = nvars
    st.P[R_OK] = 1
    st.P[R_RESTART] = restarts
    st.P[R_VSIDS] = vsids
    st.P[R_REDUCE_AT] = REDUCE_FIRST
    st.P[R_LUBY_U] = 1
    st.P[R_LUBY_V] = 1
    st.P[R_RESTART_LEFT] = RESTART_BASE
    st.P[R_SEED] = seed
    _alloc_vars(st, nvars)
    if nvars > 0:
        st.heap[:nvars] = np.arange(1, nvars + 1, dtype=np.int32)
        st.heap_pos[1:] = np.arange(nvars, dtype=np.int32)
        st.P[R_HEAPSIZE] = nvars
    st.arena_l = List()
    st.arena_l.append(np.zeros(1 << 14, np.int32))
    st.lbuf_l = List()
    st.lbuf_l.append(np.zeros(1 << 12, np.int32))
    st.asm = np.zeros(0, np.int32)
    return st


def ensure_vars(st: _State, nvars: int) -> None:
    old = int(st.P[R_NVARS])
    if nvars <= old:
        return
    keep = (st.assigns, st.vlevel, st.vreason, st.trail, st.trail_lim, st.phase,
            st.activity, st.heap, st.heap_pos, st.seen, st.learnt, st.watch_head)
    _alloc_vars(st, nvars)
    news = (st.assigns, st.vlevel, st.vreason, st.trail, st.trail_lim, st.phase,
            st.activity, st.heap, st.heap_pos, st.seen, st.learnt, st.watch_head)
    for src, dst in zip(keep, news):
        dst[: src.shape[0]] = src
    st.P[R_NVARS] = nvars
    # fresh variables have zero activity: appending keeps the heap valid
    hs = int(st.P[R_HEAPSIZE])
    for v in range(old + 1, nvars + 1):
        st.heap[hs] = v
        st.heap_pos[v] = hs
        hs += 1
    st.P[R_HEAPSIZE] = hs


def set_tracked_prefix(st: _State, k: int) -> None:
    st.P[R_TRACKED] = k
    _recount_tracked(st.P, st.assigns)


def add_clause(st: _State, lits: np.ndarray, strict: int = 0) -> int:
    return int(_add_clause_k(st.P, st.assigns, st.vlevel, st.vreason, st.trail,
                             st.trail_lim, st.phase, st.activity, st.heap,
                             st.heap_pos, st.watch_head, st.arena_l,
                             lits.astype(np.int32), strict))


def start_solve(st: _State, assumptions: np.ndarray) -> None:
    _backjump(st.P, st.assigns, st.vlevel, st.vreason, st.trail, st.trail_lim,
              st.phase, st.activity, st.heap, st.heap_pos, 0)
    st.P[R_QHEAD] = 0
    st.P[R_GATE_CTR] = 0
    st.P[R_GATEPEND] = 0
    st.P[R_LUBY_U] = 1
    st.P[R_LUBY_V] = 1
    st.P[R_RESTART_LEFT] = RESTART_BASE
    st.asm = assumptions.astype(np.int32)
    st.P[R_NASM] = len(st.asm)


def run(st: _State, gate: int, threshold: int) -> int:
    return int(_run(st.P, st.F, st.assigns, st.vlevel, st.vreason, st.trail,
                    st.trail_lim, st.phase, st.activity, st.heap, st.heap_pos,
                    st.seen, st.learnt, st.watch_head, st.arena_l, st.lbuf_l,
                    st.asm, gate, threshold))


def drain_learned(st: _State) -> np.ndarray:
    out = st.lbuf_l[0][: int(st.P[R_LTOP])].copy()
    st.P[R_LTOP] = 0
    return out


def assigns_view(st: _State) -> np.ndarray:
    return st.assigns


def stats_view(st: _State) -> np.ndarray:
    return st.P[R_CONFLICTS : R_PROPS + 1]


def check_watches(st: _State) -> int:
    return int(_check_watches_k(st.P, st.assigns, st.watch_head, st.arena_l[0]))


def tracked_assigned(st: _State) -> int:
    return int(st.P[R_TRACKED_ASSIGNED])
