"""Hot inner loops over integer transition tables.

Every kernel exists twice: a numba ``@njit`` version and a pure numpy/Python
version with identical semantics.  Set ``PFXCOMPLEX_DISABLE_NUMBA=1`` to force
the fallback (or when numba is not importable).  Tests run both paths against
each other; ``benchmarks/bench_kernels.py`` times them.

Table conventions
-----------------
* DFA tables are ``int64[n, k]`` arrays, ``finals`` is ``bool[n]``.
* NFA successor tables are ``int64[n, k]`` bitmasks (bit ``q`` = state ``q``),
  so kernels handle at most ``MAX_MASK_STATES`` states.
* Prefix-free layout used by the sweeps: initial ``0``, live states
  ``0..n-3``, unique final ``n-2`` and dead ``n-1``.
"""

from __future__ import annotations

import os

import numpy as np

MAX_MASK_STATES = 62

_DISABLED = os.environ.get("PFXCOMPLEX_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag in CI
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _reachable_nb(table, init):
    n, k = table.shape
    seen = np.zeros(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    seen[init] = True
    stack[0] = init
    top = 1
    while top > 0:
        top -= 1
        q = stack[top]
        for a in range(k):
            t = table[q, a]
            if not seen[t]:
                seen[t] = True
                stack[top] = t
                top += 1
    return seen


@njit(cache=True)
def _relabel_nb(key):
    order = np.argsort(key, kind="mergesort")
    out = np.empty(key.shape[0], dtype=np.int64)
    cur = -1
    prev = 0
    for idx in range(order.shape[0]):
        v = key[order[idx]]
        if idx == 0 or v != prev:
            cur += 1
            prev = v
        out[order[idx]] = cur
    return out, cur + 1


@njit(cache=True)
def _refine_nb(table, finals):
    """Coarsest partition compatible with finality (Moore refinement)."""
    n, k = table.shape
    cls, count = _relabel_nb(finals.astype(np.int64))
    stable = 0
    a = 0
    while stable < k:
        key = cls * n + cls[table[:, a]]
        new, new_count = _relabel_nb(key)
        if new_count == count:
            stable += 1
        else:
            stable = 0
            count = new_count
        cls = new
        a = (a + 1) % k
    return cls, count


@njit(cache=True)
def _min_size_nb(table, finals, init):
    seen = _reachable_nb(table, init)
    idx = np.flatnonzero(seen)
    remap = np.full(table.shape[0], -1, dtype=np.int64)
    for i in range(idx.shape[0]):
        remap[idx[i]] = i
    sub = np.empty((idx.shape[0], table.shape[1]), dtype=np.int64)
    for i in range(idx.shape[0]):
        for a in range(table.shape[1]):
            sub[i, a] = remap[table[idx[i], a]]
    _, count = _refine_nb(sub, finals[idx])
    return count


@njit(cache=True)
def _subset_nb(succ, init_mask, final_mask, merge):
    """Reachable subset automaton.  ``merge`` collapses every accepting subset
    into one state (mask ``-1``) that moves to the empty set."""
    n, k = succ.shape
    cap = 64
    masks = np.empty(cap, dtype=np.int64)
    out = np.empty((cap, k), dtype=np.int64)
    index = dict()
    start = init_mask
    if merge and (init_mask & final_mask) != 0:
        start = -1
    masks[0] = start
    index[start] = 0
    count = 1
    head = 0
    while head < count:
        m = masks[head]
        for a in range(k):
            if m == -1:
                img = 0
            else:
                img = 0
                for q in range(n):
                    if (m >> q) & 1:
                        img |= succ[q, a]
                if merge and (img & final_mask) != 0:
                    img = -1
            if img in index:
                out[head, a] = index[img]
            else:
                if count == cap:
                    cap *= 2
                    nm = np.empty(cap, dtype=np.int64)
                    nm[:count] = masks[:count]
                    masks = nm
                    no = np.empty((cap, k), dtype=np.int64)
                    no[:count] = out[:count]
                    out = no
                masks[count] = img
                index[img] = count
                out[head, a] = count
                count += 1
        head += 1
    acc = np.empty(count, dtype=np.bool_)
    for i in range(count):
        acc[i] = masks[i] == -1 or (masks[i] & final_mask) != 0
    return out[:count].copy(), acc, masks[:count].copy()


@njit(cache=True)
def _subset_dense_nb(succ, init_mask, final_mask, lookup, masks, out):
    """Subset construction with a dense ``2**n`` lookup (small ``n`` only).

    ``lookup`` must be all ``-1`` on entry and is restored before return.
    Returns the number of reachable subsets; rows ``[:count]`` of ``out``
    and ``masks`` hold the table.
    """
    n, k = succ.shape
    masks[0] = init_mask
    lookup[init_mask] = 0
    count = 1
    head = 0
    while head < count:
        m = masks[head]
        for a in range(k):
            img = 0
            for q in range(n):
                if (m >> q) & 1:
                    img |= succ[q, a]
            j = lookup[img]
            if j < 0:
                j = count
                lookup[img] = j
                masks[j] = img
                count += 1
            out[head, a] = j
        head += 1
    for i in range(count):
        lookup[masks[i]] = -1
    return count


@njit(cache=True)
def _pf_shape_nb(table, finals, init):
    """(is_prefix_free, sc) for a complete DFA table."""
    seen = _reachable_nb(table, init)
    idx = np.flatnonzero(seen)
    r = idx.shape[0]
    k = table.shape[1]
    remap = np.full(table.shape[0], -1, dtype=np.int64)
    for i in range(r):
        remap[idx[i]] = i
    sub = np.empty((r, k), dtype=np.int64)
    fin = np.empty(r, dtype=np.bool_)
    for i in range(r):
        fin[i] = finals[idx[i]]
        for a in range(k):
            sub[i, a] = remap[table[idx[i], a]]
    cls, count = _refine_nb(sub, fin)
    # class-level view
    rep = np.full(count, -1, dtype=np.int64)
    for i in range(r):
        if rep[cls[i]] < 0:
            rep[cls[i]] = i
    nfin = 0
    fcls = -1
    for c in range(count):
        if fin[rep[c]]:
            nfin += 1
            fcls = c
    if nfin == 0:
        return True, count
    if nfin > 1:
        return False, count
    z = cls[sub[rep[fcls], 0]]
    if z == fcls or fin[rep[z]]:
        return False, count
    for a in range(k):
        if cls[sub[rep[fcls], a]] != z or cls[sub[rep[z], a]] != z:
            return False, count
    return True, count


@njit(cache=True)
def _canon_ok_nb(table, n):
    """BFS-canonical check for a prefix-free layout table (live rows only)."""
    live = n - 2
    nxt = 1
    for r in range(live):
        if r >= nxt:
            return False
        for a in range(table.shape[1]):
            t = table[r, a]
            if t < live and t >= nxt:
                if t == nxt:
                    nxt += 1
                else:
                    return False
    return nxt == live


@njit(cache=True)
def _decode_pf_nb(idx, n, k, table):
    live = n - 2
    for r in range(live):
        for a in range(k):
            table[r, a] = idx % n
            idx //= n
    for a in range(k):
        table[n - 2, a] = n - 1
        table[n - 1, a] = n - 1


@njit(cache=True)
def _final_reachable_nb(table, n):
    seen = _reachable_nb(table, 0)
    return seen[n - 2]


@njit(cache=True)
def _reverse_succ_nb(table, skip):
    """Bitmask predecessor table; state ``skip`` (>= 0) is dropped."""
    n, k = table.shape
    pred = np.zeros((n, k), dtype=np.int64)
    for q in range(n):
        if q == skip:
            continue
        for a in range(k):
            t = table[q, a]
            if t != skip:
                pred[t, a] |= np.int64(1) << q
    return pred


@njit(cache=True)
def _reverse_sc_nb(table, init, final_state, skip, lookup, masks, out):
    """sc of the reversal of the language ``init -> final_state``."""
    pred = _reverse_succ_nb(table, skip)
    fin_mask = np.int64(1) << init
    count = _subset_dense_nb(pred, np.int64(1) << final_state, fin_mask, lookup, masks, out)
    acc = np.empty(count, dtype=np.bool_)
    for i in range(count):
        acc[i] = (masks[i] & fin_mask) != 0
    return _min_size_nb(out[:count], acc, 0)


@njit(cache=True)
def _cyclic_parts_nb(table, n):
    """Per-pivot concatenation DFAs (2n-3 states each) for a prefix-free
    layout table.  Returns ``(parts[p, 2n-3, k], part_final[p], part_init[p])``."""
    k = table.shape[1]
    live = n - 2
    size = 2 * n - 3
    merged = n - 2
    dead = 2 * n - 4
    parts = np.empty((live, size, k), dtype=np.int64)
    pfin = np.empty(live, dtype=np.int64)
    pinit = np.empty(live, dtype=np.int64)
    for p in range(live):
        for a in range(k):
            for q in range(live):
                t = table[q, a]
                if t < live:
                    parts[p, q, a] = t
                elif t == n - 2:
                    parts[p, q, a] = merged
                else:
                    parts[p, q, a] = dead
            for q in range(live):
                t = table[q, a]
                if t == 0:
                    tgt = merged
                elif t < live:
                    tgt = merged + t
                else:
                    tgt = dead
                if q == 0:
                    parts[p, merged, a] = tgt
                else:
                    parts[p, merged + q, a] = tgt
            parts[p, dead, a] = dead
        pfin[p] = merged if p == 0 else merged + p
        pinit[p] = p
    return parts, pfin, pinit


@njit(cache=True)
def _union_product_nb(parts, pfin, pinit):
    """Reachable product of several DFAs accepting if any component accepts."""
    p, size, k = parts.shape
    cap = 256
    codes = np.empty(cap, dtype=np.int64)
    out = np.empty((cap, k), dtype=np.int64)
    index = dict()
    code = 0
    for i in range(p - 1, -1, -1):
        code = code * size + pinit[i]
    codes[0] = code
    index[code] = 0
    count = 1
    head = 0
    comp = np.empty(p, dtype=np.int64)
    while head < count:
        c = codes[head]
        for i in range(p):
            comp[i] = c % size
            c //= size
        for a in range(k):
            nc = 0
            for i in range(p - 1, -1, -1):
                nc = nc * size + parts[i, comp[i], a]
            if nc in index:
                out[head, a] = index[nc]
            else:
                if count == cap:
                    cap *= 2
                    t1 = np.empty(cap, dtype=np.int64)
                    t1[:count] = codes[:count]
                    codes = t1
                    t2 = np.empty((cap, k), dtype=np.int64)
                    t2[:count] = out[:count]
                    out = t2
                codes[count] = nc
                index[nc] = count
                out[head, a] = count
                count += 1
        head += 1
    acc = np.zeros(count, dtype=np.bool_)
    for j in range(count):
        c = codes[j]
        for i in range(p):
            if c % size == pfin[i]:
                acc[j] = True
            c //= size
    return out[:count].copy(), acc


@njit(cache=True)
def _cyclic_sc_nb(table, n):
    parts, pfin, pinit = _cyclic_parts_nb(table, n)
    prod, acc = _union_product_nb(parts, pfin, pinit)
    return _min_size_nb(prod, acc, 0)


# ---------------------------------------------------------------------------
# batch sweeps (the real hot loops)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _sweep_pf_reversal_nb(n, k, start, stop):
    """Max reversal sc over canonical prefix-free DFAs with indices in
    ``[start, stop)``.  Returns ``(best, best_idx, n_canonical)``."""
    table = np.empty((n, k), dtype=np.int64)
    lookup = np.full(1 << n, -1, dtype=np.int64)
    masks = np.empty(1 << n, dtype=np.int64)
    out = np.empty((1 << n, k), dtype=np.int64)
    best = -1
    best_idx = -1
    total = 0
    for idx in range(start, stop):
        _decode_pf_nb(idx, n, k, table)
        if not _canon_ok_nb(table, n) or not _final_reachable_nb(table, n):
            continue
        total += 1
        v = _reverse_sc_nb(table, 0, n - 2, n - 1, lookup, masks, out)
        if v > best:
            best = v
            best_idx = idx
    return best, best_idx, total


@njit(cache=True)
def _sweep_pf_cyclic_nb(n, k, start, stop):
    table = np.empty((n, k), dtype=np.int64)
    best = -1
    best_idx = -1
    total = 0
    for idx in range(start, stop):
        _decode_pf_nb(idx, n, k, table)
        if not _canon_ok_nb(table, n) or not _final_reachable_nb(table, n):
            continue
        total += 1
        v = _cyclic_sc_nb(table, n)
        if v > best:
            best = v
            best_idx = idx
    return best, best_idx, total


@njit(cache=True)
def _decode_nfa_nb(idx, n, k, succ):
    base = np.int64(1) << n
    for q in range(n - 1):
        for a in range(k):
            succ[q, a] = idx % base
            idx //= base
    for a in range(k):
        succ[n - 1, a] = 0


@njit(cache=True)
def _sweep_nfa_det_nb(n, k, start, stop):
    """Max sc over prefix-free languages of prefix-free-normal NFAs
    (initial 0, final n-1).  Returns ``(best, best_idx, n_prefix_free)``."""
    succ = np.empty((n, k), dtype=np.int64)
    lookup = np.full(1 << n, -1, dtype=np.int64)
    masks = np.empty(1 << n, dtype=np.int64)
    out = np.empty((1 << n, k), dtype=np.int64)
    fmask = np.int64(1) << (n - 1)
    best = -1
    best_idx = -1
    total = 0
    for idx in range(start, stop):
        _decode_nfa_nb(idx, n, k, succ)
        count = _subset_dense_nb(succ, np.int64(1), fmask, lookup, masks, out)
        acc = np.empty(count, dtype=np.bool_)
        for i in range(count):
            acc[i] = (masks[i] & fmask) != 0
        ok, sc = _pf_shape_nb(out[:count], acc, 0)
        if not ok:
            continue
        total += 1
        if sc > best:
            best = sc
            best_idx = idx
    return best, best_idx, total


@njit(cache=True)
def _sweep_base_reversal_nb(k_states, k, start, stop, target):
    """Complete DFAs with ``k_states`` states, initial 0 and a single final
    state; index encodes (table, final).  Stops at the first ``target``."""
    n = k_states
    table = np.empty((n, k), dtype=np.int64)
    lookup = np.full(1 << n, -1, dtype=np.int64)
    masks = np.empty(1 << n, dtype=np.int64)
    out = np.empty((1 << n, k), dtype=np.int64)
    best = -1
    best_idx = -1
    for idx in range(start, stop):
        rest = idx
        fin = rest % n
        rest //= n
        for q in range(n):
            for a in range(k):
                table[q, a] = rest % n
                rest //= n
        if not _reachable_nb(table, 0).all():
            continue
        v = _reverse_sc_nb(table, 0, fin, -1, lookup, masks, out)
        if v > best:
            best = v
            best_idx = idx
            if v >= target:
                break
    return best, best_idx


@njit(cache=True)
def _sweep_template_nb(table, holes, choices, start, stop, n, target):
    """Fill ``holes`` (rows of (state, symbol)) with digits from ``choices``
    and maximize cyclic-shift sc; stops early at ``target``."""
    t = table.copy()
    h = holes.shape[0]
    base = choices.shape[0]
    best = -1
    best_idx = -1
    for idx in range(start, stop):
        rest = idx
        for j in range(h):
            t[holes[j, 0], holes[j, 1]] = choices[rest % base]
            rest //= base
        v = _cyclic_sc_nb(t, n)
        if v > best:
            best = v
            best_idx = idx
            if v >= target:
                break
    return best, best_idx


@njit(cache=True)
def _nfa_equiv_dfa_nb(succ, init_mask, fin_mask, dtable, dfin, dinit, lookup_size):
    """True iff the NFA (bitmask form) accepts the same language as the DFA."""
    n, k = succ.shape
    seen = dict()
    stack_m = np.empty(64, dtype=np.int64)
    stack_d = np.empty(64, dtype=np.int64)
    cap = 64
    top = 1
    stack_m[0] = init_mask
    stack_d[0] = dinit
    seen[init_mask * lookup_size + dinit] = True
    while top > 0:
        top -= 1
        m = stack_m[top]
        d = stack_d[top]
        if ((m & fin_mask) != 0) != dfin[d]:
            return False
        for a in range(k):
            img = 0
            for q in range(n):
                if (m >> q) & 1:
                    img |= succ[q, a]
            nd = dtable[d, a]
            key = img * lookup_size + nd
            if key not in seen:
                seen[key] = True
                if top == cap:
                    cap *= 2
                    s1 = np.empty(cap, dtype=np.int64)
                    s1[:top] = stack_m[:top]
                    stack_m = s1
                    s2 = np.empty(cap, dtype=np.int64)
                    s2[:top] = stack_d[:top]
                    stack_d = s2
                stack_m[top] = img
                stack_d[top] = nd
                top += 1
    return True


@njit(cache=True)
def _sweep_nfa_match_nb(n, k, dtable, dfin, dinit, start, stop):
    """First index in ``[start, stop)`` of an ``n``-state NFA (initial 0,
    index encodes finals then transitions) equivalent to the DFA; -1 if none."""
    succ = np.empty((n, k), dtype=np.int64)
    base = np.int64(1) << n
    size = dtable.shape[0]
    for idx in range(start, stop):
        rest = idx
        fin = rest % base
        rest //= base
        for q in range(n):
            for a in range(k):
                succ[q, a] = rest % base
                rest //= base
        if _nfa_equiv_dfa_nb(succ, np.int64(1), fin, dtable, dfin, dinit, size):
            return idx
    return -1


# ---------------------------------------------------------------------------
# numpy / pure-Python fallbacks
# ---------------------------------------------------------------------------


def _reachable_np(table, init):
    n = table.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[init] = True
    frontier = np.array([init])
    while frontier.size:
        nxt = np.unique(table[frontier].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def _refine_np(table, finals):
    n, k = table.shape
    _, cls = np.unique(finals.astype(np.int64), return_inverse=True)
    cls = cls.ravel()
    count = int(cls.max()) + 1 if n else 0
    while True:
        sig = np.column_stack([cls, cls[table]])
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        new_count = int(new.max()) + 1
        cls = new
        if new_count == count:
            return cls, count
        count = new_count


def _min_size_np(table, finals, init):
    seen = _reachable_np(table, init)
    idx = np.flatnonzero(seen)
    remap = np.full(table.shape[0], -1, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    sub = remap[table[idx]]
    return _refine_np(sub, finals[idx])[1]


def _image(m, succ_rows):
    img = 0
    q = 0
    while m:
        if m & 1:
            img |= succ_rows[q]
        m >>= 1
        q += 1
    return img


def subset_py(succ, init_mask, final_mask, merge):
    """Pure-Python subset construction on Python-int masks (no state cap).

    ``succ`` is a list of per-state lists of int masks.
    """
    n = len(succ)
    k = len(succ[0]) if n else 0
    cols = [[succ[q][a] for q in range(n)] for a in range(k)]
    start = init_mask
    if merge and init_mask & final_mask:
        start = -1
    masks = [start]
    index = {start: 0}
    rows = []
    head = 0
    while head < len(masks):
        m = masks[head]
        row = []
        for a in range(k):
            if m == -1:
                img = 0
            else:
                img = _image(m, cols[a])
                if merge and img & final_mask:
                    img = -1
            j = index.get(img)
            if j is None:
                j = len(masks)
                index[img] = j
                masks.append(img)
            row.append(j)
        rows.append(row)
        head += 1
    acc = [m == -1 or bool(m & final_mask) for m in masks]
    return rows, acc, masks


def _pf_shape_np(table, finals, init):
    seen = _reachable_np(table, init)
    idx = np.flatnonzero(seen)
    remap = np.full(table.shape[0], -1, dtype=np.int64)
    remap[idx] = np.arange(idx.size)
    sub = remap[table[idx]]
    fin = finals[idx]
    cls, count = _refine_np(sub, fin)
    fcls = np.unique(cls[fin])
    if fcls.size == 0:
        return True, count
    if fcls.size > 1:
        return False, count
    f_rows = sub[fin]
    tgt = np.unique(cls[f_rows])
    if tgt.size != 1:
        return False, count
    z = tgt[0]
    if z == fcls[0]:
        return False, count
    z_rows = sub[cls == z]
    if np.any(fin[cls == z]) or np.any(cls[z_rows] != z):
        return False, count
    return True, count


def _reverse_sc_np(table, init, final_state, skip):
    n, k = table.shape
    pred = [[0] * k for _ in range(n)]
    for q in range(n):
        if q == skip:
            continue
        for a in range(k):
            t = int(table[q, a])
            if t != skip:
                pred[t][a] |= 1 << q
    rows, _, masks = subset_py(pred, 1 << final_state, 0, False)
    acc = np.array([bool(m >> init & 1) for m in masks])
    return _min_size_np(np.asarray(rows, dtype=np.int64), acc, 0)


def _cyclic_parts_np(table, n):
    k = table.shape[1]
    live = n - 2
    size = 2 * n - 3
    merged, dead = n - 2, 2 * n - 4
    lt = table[:live]
    b_part = np.where(lt < live, lt, np.where(lt == n - 2, merged, dead))
    c_tgt = np.where(lt == 0, merged, np.where(lt < live, merged + lt, dead))
    part = np.empty((size, k), dtype=np.int64)
    part[:live] = b_part
    part[merged] = c_tgt[0]
    part[merged + 1 : merged + live] = c_tgt[1:]
    part[dead] = dead
    parts = np.repeat(part[None], live, axis=0)
    pfin = np.array([merged if p == 0 else merged + p for p in range(live)], dtype=np.int64)
    pinit = np.arange(live, dtype=np.int64)
    return parts, pfin, pinit


def _union_product_np(parts, pfin, pinit):
    p, _, k = parts.shape
    start = tuple(int(x) for x in pinit)
    index = {start: 0}
    order = [start]
    rows = []
    head = 0
    while head < len(order):
        comp = order[head]
        row = []
        for a in range(k):
            nxt = tuple(int(parts[i, comp[i], a]) for i in range(p))
            j = index.get(nxt)
            if j is None:
                j = len(order)
                index[nxt] = j
                order.append(nxt)
            row.append(j)
        rows.append(row)
        head += 1
    acc = np.array([any(c[i] == pfin[i] for i in range(p)) for c in order])
    return np.asarray(rows, dtype=np.int64), acc


def _cyclic_sc_np(table, n):
    prod, acc = _union_product_np(*_cyclic_parts_np(table, n))
    return _min_size_np(prod, acc, 0)


def _decode_pf_np(idx, n, k):
    table = np.empty((n, k), dtype=np.int64)
    digits = []
    for _ in range((n - 2) * k):
        digits.append(idx % n)
        idx //= n
    table[: n - 2] = np.asarray(digits, dtype=np.int64).reshape(n - 2, k)
    table[n - 2 :] = n - 1
    return table


def _canon_ok_np(table, n):
    return bool(_canon_ok_nb.py_func(table, n)) if HAVE_NUMBA else bool(_canon_ok_nb(table, n))


def _sweep_pf_np(n, k, start, stop, score):
    best, best_idx, total = -1, -1, 0
    for idx in range(start, stop):
        table = _decode_pf_np(idx, n, k)
        if not _canon_ok_np(table, n) or not _reachable_np(table, 0)[n - 2]:
            continue
        total += 1
        v = score(table)
        if v > best:
            best, best_idx = v, idx
    return best, best_idx, total


def _sweep_pf_reversal_np(n, k, start, stop):
    return _sweep_pf_np(n, k, start, stop, lambda t: _reverse_sc_np(t, 0, n - 2, n - 1))


def _sweep_pf_cyclic_np(n, k, start, stop):
    return _sweep_pf_np(n, k, start, stop, lambda t: _cyclic_sc_np(t, n))


def _sweep_nfa_det_np(n, k, start, stop):
    base = 1 << n
    fmask = 1 << (n - 1)
    best, best_idx, total = -1, -1, 0
    for idx in range(start, stop):
        rest = idx
        succ = []
        for _q in range(n - 1):
            row = []
            for _a in range(k):
                row.append(rest % base)
                rest //= base
            succ.append(row)
        succ.append([0] * k)
        rows, _, masks = subset_py(succ, 1, fmask, False)
        acc = np.array([bool(m & fmask) for m in masks])
        ok, sc = _pf_shape_np(np.asarray(rows, dtype=np.int64), acc, 0)
        if not ok:
            continue
        total += 1
        if sc > best:
            best, best_idx = sc, idx
    return best, best_idx, total


def _sweep_base_reversal_np(k_states, k, start, stop, target):
    n = k_states
    best, best_idx = -1, -1
    for idx in range(start, stop):
        rest = idx
        fin = rest % n
        rest //= n
        flat = []
        for _ in range(n * k):
            flat.append(rest % n)
            rest //= n
        table = np.asarray(flat, dtype=np.int64).reshape(n, k)
        if not _reachable_np(table, 0).all():
            continue
        v = _reverse_sc_np(table, 0, fin, -1)
        if v > best:
            best, best_idx = v, idx
            if v >= target:
                break
    return best, best_idx


def _sweep_template_np(table, holes, choices, start, stop, n, target):
    t = table.copy()
    base = len(choices)
    best, best_idx = -1, -1
    for idx in range(start, stop):
        rest = idx
        for q, a in holes:
            t[q, a] = choices[rest % base]
            rest //= base
        v = _cyclic_sc_np(t, n)
        if v > best:
            best, best_idx = v, idx
            if v >= target:
                break
    return best, best_idx


def _nfa_equiv_dfa_py(succ, init_mask, fin_mask, dtable, dfin, dinit):
    n = len(succ)
    k = dtable.shape[1]
    cols = [[succ[q][a] for q in range(n)] for a in range(k)]
    seen = {(init_mask, dinit)}
    stack = [(init_mask, dinit)]
    while stack:
        m, d = stack.pop()
        if bool(m & fin_mask) != bool(dfin[d]):
            return False
        for a in range(k):
            nxt = (_image(m, cols[a]), int(dtable[d, a]))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def _sweep_nfa_match_np(n, k, dtable, dfin, dinit, start, stop):
    base = 1 << n
    for idx in range(start, stop):
        rest = idx
        fin = rest % base
        rest //= base
        succ = []
        for _q in range(n):
            row = []
            for _a in range(k):
                row.append(rest % base)
                rest //= base
            succ.append(row)
        if _nfa_equiv_dfa_py(succ, 1, fin, dtable, dfin, dinit):
            return idx
    return -1


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def reachable(table: np.ndarray, init: int) -> np.ndarray:
    fn = _reachable_nb if HAVE_NUMBA else _reachable_np
    return fn(np.ascontiguousarray(table, dtype=np.int64), int(init))


def refine(table: np.ndarray, finals: np.ndarray) -> tuple[np.ndarray, int]:
    """Class id per state of the coarsest finality-respecting congruence."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    finals = np.ascontiguousarray(finals, dtype=np.bool_)
    if table.shape[0] == 0:
        return np.empty(0, dtype=np.int64), 0
    if HAVE_NUMBA:
        cls, count = _refine_nb(table, finals)
    else:
        cls, count = _refine_np(table, finals)
    return np.asarray(cls, dtype=np.int64), int(count)


def min_size(table: np.ndarray, finals: np.ndarray, init: int) -> int:
    table = np.ascontiguousarray(table, dtype=np.int64)
    finals = np.ascontiguousarray(finals, dtype=np.bool_)
    fn = _min_size_nb if HAVE_NUMBA else _min_size_np
    return int(fn(table, finals, int(init)))


def subset(succ, init_mask: int, final_mask: int, merge: bool):
    """Reachable subset automaton: ``(rows, accepting, masks)``.

    Uses the numba kernel when the NFA fits in ``MAX_MASK_STATES`` bits,
    otherwise the Python-int path.
    """
    n = len(succ)
    if HAVE_NUMBA and 0 < n <= MAX_MASK_STATES:
        arr = np.asarray(succ, dtype=np.int64).reshape(n, -1)
        rows, acc, masks = _subset_nb(arr, np.int64(init_mask), np.int64(final_mask), merge)
        return rows, acc, masks
    rows, acc, masks = subset_py([list(map(int, r)) for r in succ], init_mask, final_mask, merge)
    k = len(succ[0]) if n else 0
    return (
        np.asarray(rows, dtype=np.int64).reshape(len(masks), k),
        np.asarray(acc, dtype=bool),
        masks,
    )


def pf_shape(table: np.ndarray, finals: np.ndarray, init: int) -> tuple[bool, int]:
    table = np.ascontiguousarray(table, dtype=np.int64)
    finals = np.ascontiguousarray(finals, dtype=np.bool_)
    fn = _pf_shape_nb if HAVE_NUMBA else _pf_shape_np
    ok, sc = fn(table, finals, int(init))
    return bool(ok), int(sc)


def cyclic_product(table: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Union product of the per-pivot concatenation machines."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    if HAVE_NUMBA:
        parts, pfin, pinit = _cyclic_parts_nb(table, n)
        return _union_product_nb(parts, pfin, pinit)
    return _union_product_np(*_cyclic_parts_np(table, n))


def cyclic_parts(table: np.ndarray, n: int):
    table = np.ascontiguousarray(table, dtype=np.int64)
    fn = _cyclic_parts_nb if HAVE_NUMBA else _cyclic_parts_np
    return fn(table, n)


def decode_pf(idx: int, n: int, k: int) -> np.ndarray:
    return _decode_pf_np(idx, n, k)


def canonical_pf(table: np.ndarray, n: int) -> bool:
    return _canon_ok_np(np.ascontiguousarray(table, dtype=np.int64), n)


def sweep_pf_reversal(n: int, k: int, start: int, stop: int) -> tuple[int, int, int]:
    fn = _sweep_pf_reversal_nb if HAVE_NUMBA else _sweep_pf_reversal_np
    return tuple(int(x) for x in fn(n, k, start, stop))


def sweep_pf_cyclic(n: int, k: int, start: int, stop: int) -> tuple[int, int, int]:
    fn = _sweep_pf_cyclic_nb if HAVE_NUMBA else _sweep_pf_cyclic_np
    return tuple(int(x) for x in fn(n, k, start, stop))


def sweep_nfa_det(n: int, k: int, start: int, stop: int) -> tuple[int, int, int]:
    fn = _sweep_nfa_det_nb if HAVE_NUMBA else _sweep_nfa_det_np
    return tuple(int(x) for x in fn(n, k, start, stop))


def sweep_base_reversal(n: int, k: int, start: int, stop: int, target: int) -> tuple[int, int]:
    fn = _sweep_base_reversal_nb if HAVE_NUMBA else _sweep_base_reversal_np
    return tuple(int(x) for x in fn(n, k, start, stop, target))


def sweep_template(table, holes, choices, start, stop, n, target) -> tuple[int, int]:
    table = np.ascontiguousarray(table, dtype=np.int64)
    holes = np.ascontiguousarray(holes, dtype=np.int64).reshape(-1, 2)
    choices = np.ascontiguousarray(choices, dtype=np.int64)
    fn = _sweep_template_nb if HAVE_NUMBA else _sweep_template_np
    return tuple(int(x) for x in fn(table, holes, choices, start, stop, n, target))


def sweep_nfa_match(n, k, dtable, dfin, dinit, start, stop) -> int:
    dtable = np.ascontiguousarray(dtable, dtype=np.int64)
    dfin = np.ascontiguousarray(dfin, dtype=np.bool_)
    fn = _sweep_nfa_match_nb if HAVE_NUMBA else _sweep_nfa_match_np
    return int(fn(n, k, dtable, dfin, int(dinit), start, stop))
