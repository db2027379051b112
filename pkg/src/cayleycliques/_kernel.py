"""Compiled inner loop of the branch-and-bound maximum clique search.

Bitsets are int64 words (bit ``v & 63`` of word ``v >> 6``).  Bounds come
from greedy sequential colouring of the candidate set; only vertices whose
colour can still beat the incumbent are queued for branching.  All search
state lives in caller-owned arrays so a search can be paused after a node
budget and resumed.
"""

import numpy as np
from numba import njit

_DEBRUIJN = np.array(
    [0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
     62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
     63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
     46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6],
    dtype=np.int64,
)
_DEBRUIJN_MAGIC = np.int64(0x03F79D71B4CB0A89)

FINISHED = 0
BUDGET = 1
IMPROVED = 2

# meta slots
_DEPTH, _STARTED, _FOUND_LEN, _NODES = 0, 1, 2, 3


@njit(cache=True, nogil=True)
def _lowest_bit(x):
    low = x & -x
    return _DEBRUIJN[((low * _DEBRUIJN_MAGIC) >> 58) & 63]


@njit(cache=True, nogil=True)
def color_sort(adj, cand, kmin, lst, col, U, Q):
    """Greedy colouring of ``cand``; returns how many vertices were queued.

    ``lst[:k]``/``col[:k]`` receive vertices with colour >= ``kmin`` in
    non-decreasing colour order.
    """
    W = adj.shape[1]
    nonempty = False
    for w in range(W):
        U[w] = cand[w]
        if U[w] != 0:
            nonempty = True
    k = 0
    cnt = 0
    while nonempty:
        k += 1
        for w in range(W):
            Q[w] = U[w]
        for w in range(W):
            while Q[w] != 0:
                v = w * 64 + _lowest_bit(Q[w])
                bit = np.int64(1) << (v & 63)
                Q[w] &= ~bit
                U[w] &= ~bit
                for w2 in range(w, W):
                    Q[w2] &= ~adj[v, w2]
                if k >= kmin:
                    lst[cnt] = v
                    col[cnt] = k
                    cnt += 1
        nonempty = False
        for w in range(W):
            if U[w] != 0:
                nonempty = True
                break
    return cnt


@njit(cache=True, nogil=True)
def count_colors(adj, cand):
    W = adj.shape[1]
    n = adj.shape[0]
    lst = np.empty(n, np.int32)
    col = np.empty(n, np.int32)
    U = np.empty(W, np.int64)
    Q = np.empty(W, np.int64)
    cnt = color_sort(adj, cand, 1, lst, col, U, Q)
    if cnt == 0:
        return 0
    return col[cnt - 1]


@njit(cache=True, nogil=True)
def search(adj, cand0, base, best, stop_first, budget, P, lst, col, pos, R, found, meta, U, Q):
    """Run (or resume) the search below a fixed clique of size ``base``.

    ``best[0]`` is the incumbent size, possibly shared with other workers.
    Returns FINISHED, BUDGET (paused; call again) or IMPROVED (only when
    ``stop_first``: the first clique beating the incumbent is in
    ``found[:meta[2]]``).
    """
    W = adj.shape[1]
    if meta[_STARTED] == 0:
        meta[_STARTED] = 1
        meta[_FOUND_LEN] = -1
        for w in range(W):
            P[0, w] = cand0[w]
        empty = True
        for w in range(W):
            if cand0[w] != 0:
                empty = False
        if empty:
            pos[0] = -1
            if base > best[0]:
                best[0] = base
                meta[_FOUND_LEN] = 0
                if stop_first:
                    return IMPROVED
            return FINISHED
        cnt = color_sort(adj, P[0], best[0] - base + 1, lst[0], col[0], U, Q)
        pos[0] = cnt - 1
        meta[_DEPTH] = 0
    depth = meta[_DEPTH]
    steps = 0
    while True:
        i = pos[depth]
        if i < 0:
            if depth == 0:
                meta[_DEPTH] = 0
                return FINISHED
            depth -= 1
            continue
        c = col[depth, i]
        if base + depth + c <= best[0]:
            pos[depth] = -1
            continue
        v = lst[depth, i]
        pos[depth] = i - 1
        R[depth] = v
        P[depth, v >> 6] &= ~(np.int64(1) << (v & 63))
        nonempty = False
        for w in range(W):
            t = P[depth, w] & adj[v, w]
            P[depth + 1, w] = t
            if t != 0:
                nonempty = True
        meta[_NODES] += 1
        steps += 1
        if not nonempty:
            size = base + depth + 1
            if size > best[0]:
                best[0] = size
                for j in range(depth + 1):
                    found[j] = R[j]
                meta[_FOUND_LEN] = depth + 1
                if stop_first:
                    meta[_DEPTH] = depth
                    return IMPROVED
        else:
            depth += 1
            cnt = color_sort(adj, P[depth], best[0] - base - depth + 1, lst[depth], col[depth], U, Q)
            pos[depth] = cnt - 1
        if steps >= budget:
            meta[_DEPTH] = depth
            return BUDGET
