"""Hot loops: canonical-permutation search, arrow-matrix enumeration, reachability.

Every kernel has two implementations. The numba one is compiled with ``@njit``;
the fallback is plain numpy (vectorised where the algorithm allows it, an
interpreted loop where it does not). Set ``QSING_DISABLE_NUMBA=1`` to force the
fallback path, e.g. to debug or to benchmark the two against each other.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

_DISABLED = os.environ.get("QSING_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _DISABLED


def njit(*args, **kwargs):
    if USE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]):
        return args[0]
    return lambda f: f


# enumerate status codes
OK = 0
BUDGET_EXCEEDED = 1
CAPACITY_EXCEEDED = 2


# ---------------------------------------------------------------------------
# canonical permutation search
# ---------------------------------------------------------------------------


@njit(cache=True)
def _next_perm(order, lo, hi):
    # in-place lexicographic next permutation of order[lo:hi]; False on wrap
    i = hi - 2
    while i >= lo and order[i] >= order[i + 1]:
        i -= 1
    if i < lo:
        # reset to ascending
        a, b = lo, hi - 1
        while a < b:
            order[a], order[b] = order[b], order[a]
            a += 1
            b -= 1
        return False
    j = hi - 1
    while order[j] <= order[i]:
        j -= 1
    order[i], order[j] = order[j], order[i]
    a, b = i + 1, hi - 1
    while a < b:
        order[a], order[b] = order[b], order[a]
        a += 1
        b -= 1
    return True


@njit(cache=True, nogil=True)
def _canon_perm_numba(arrows, order, starts):
    n = arrows.shape[0]
    ncell = starts.shape[0] - 1
    best = order.copy()
    cur = order.copy()
    first = True
    while True:
        if first:
            first = False
        else:
            # compare cur against best, row-major, early exit
            cmp = 0
            for r in range(n):
                for c in range(n):
                    x = arrows[cur[r], cur[c]]
                    y = arrows[best[r], best[c]]
                    if x != y:
                        cmp = -1 if x < y else 1
                        break
                if cmp != 0:
                    break
            if cmp < 0:
                best[:] = cur
        # odometer over cells
        k = 0
        while k < ncell:
            if _next_perm(cur, starts[k], starts[k + 1]):
                break
            k += 1
        if k == ncell:
            break
    return best


def _canon_perm_numpy(arrows, order, starts):
    cells = [
        list(itertools.permutations(order[starts[k] : starts[k + 1]]))
        for k in range(len(starts) - 1)
    ]
    perms = np.array(
        [np.concatenate(choice) for choice in itertools.product(*cells)], dtype=np.int64
    )
    flat = arrows[perms[:, :, None], perms[:, None, :]].reshape(len(perms), -1)
    # lexsort keys are read last-to-first
    idx = np.lexsort(flat.T[::-1])[0]
    return perms[idx]


def canonical_permutation(arrows: np.ndarray, order: np.ndarray, starts: np.ndarray) -> np.ndarray:
    """Least row-major arrow serialisation over all permutations inside cells.

    ``order`` lists vertices grouped by cell, each cell sorted ascending;
    ``starts`` holds the cell boundaries (length ncell + 1).
    """
    arrows = np.ascontiguousarray(arrows, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    starts = np.ascontiguousarray(starts, dtype=np.int64)
    if USE_NUMBA:
        return _canon_perm_numba(arrows, order, starts)
    return _canon_perm_numpy(arrows, order, starts)


# ---------------------------------------------------------------------------
# reachability
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _reach_numba(adj):
    n = adj.shape[0]
    r = adj.copy()
    for k in range(n):
        for i in range(n):
            if r[i, k]:
                for j in range(n):
                    if r[k, j]:
                        r[i, j] = True
    return r


def _reach_numpy(adj):
    r = adj.copy()
    for k in range(adj.shape[0]):
        r |= r[:, k : k + 1] & r[k : k + 1, :]
    return r


def reachability(arrows: np.ndarray) -> np.ndarray:
    """Boolean transitive closure (paths of length >= 1) of the arrow matrix."""
    adj = np.ascontiguousarray(np.asarray(arrows) > 0)
    if USE_NUMBA:
        return _reach_numba(adj)
    return _reach_numpy(adj)


# ---------------------------------------------------------------------------
# arrow-matrix enumeration for irreducible settings
# ---------------------------------------------------------------------------
#
# For a fixed dimension vector a (sorted non-increasing) we list arrow matrices
# A with sum_ij A_ij a_i a_j == target, every weighted row and column sum
# >= a_i + 1 (both vertex numbers <= -1), no loops at dim-1 vertices, and the
# tie-break (dim, out, in) non-increasing along equal-dimension runs.


@njit(cache=True, nogil=True)
def _strongly_connected(A):
    n = A.shape[0]
    r = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        r[i, i] = True
        for j in range(n):
            if A[i, j] > 0:
                r[i, j] = True
    for k in range(n):
        for i in range(n):
            if r[i, k]:
                for j in range(n):
                    if r[k, j]:
                        r[i, j] = True
    for i in range(n):
        for j in range(n):
            if not r[i, j]:
                return False
    return True


@njit(cache=True, nogil=True)
def _accept(A, a):
    n = A.shape[0]
    for i in range(n):
        col = 0
        row = 0
        for j in range(n):
            col += A[j, i] * a[j]
            row += A[i, j] * a[j]
        if col < a[i] + 1 or row < a[i] + 1:
            return False
        if A[i, i] == 1 and (col == a[i] + 1 or row == a[i] + 1):
            return False  # rule 3 applies
        if i > 0 and a[i] == a[i - 1]:
            prow = 0
            pcol = 0
            for j in range(n):
                prow += A[i - 1, j] * a[j]
                pcol += A[j, i - 1] * a[j]
            if row > prow or (row == prow and col > pcol):
                return False
    return _strongly_connected(A)


@njit(cache=True, nogil=True)
def _enumerate_numba(a, target, capacity, budget):
    n = a.shape[0]
    ncell = 0
    for i in range(n):
        for j in range(n):
            if not (i == j and a[i] == 1):
                ncell += 1
    ci = np.empty(ncell, dtype=np.int64)
    cj = np.empty(ncell, dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(n):
            if not (i == j and a[i] == 1):
                ci[k] = i
                cj[k] = j
                k += 1
    # tail[i]: minimal weighted contribution of rows i..n-1
    tail = np.zeros(n + 1, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        tail[i] = tail[i + 1] + a[i] * (a[i] + 1)
    out = np.zeros((capacity, n, n), dtype=np.int64)
    count = 0
    nodes = 0
    A = np.zeros((n, n), dtype=np.int64)
    rowacc = np.zeros(n, dtype=np.int64)
    x = np.full(ncell, -1, dtype=np.int64)
    rem = target
    pos = 0
    while pos >= 0:
        if pos == ncell:
            if rem == 0 and _accept(A, a):
                if count >= capacity:
                    return out, count, CAPACITY_EXCEEDED, nodes
                out[count] = A
                count += 1
            pos -= 1
            continue
        i = ci[pos]
        j = cj[pos]
        w = a[i] * a[j]
        # undo previous value at this position
        if x[pos] >= 0:
            rem += x[pos] * w
            rowacc[i] -= x[pos] * a[j]
            A[i, j] = 0
        last_in_row = pos + 1 == ncell or ci[pos + 1] != i
        nxt = x[pos] + 1
        advanced = False
        while nxt * w <= rem:
            r_i = rowacc[i] + nxt * a[j]
            deficit = a[i] + 1 - r_i
            if deficit < 0:
                deficit = 0
            # slack only shrinks as nxt grows
            if rem - nxt * w < a[i] * deficit + tail[i + 1]:
                break
            if last_in_row:
                if r_i < a[i] + 1:
                    nxt += 1
                    continue
                if i > 0 and a[i] == a[i - 1] and r_i > rowacc[i - 1]:
                    break
            advanced = True
            break
        if advanced:
            nodes += 1
            if nodes > budget:
                return out, count, BUDGET_EXCEEDED, nodes
            x[pos] = nxt
            A[i, j] = nxt
            rem -= nxt * w
            rowacc[i] += nxt * a[j]
            pos += 1
            if pos < ncell:
                x[pos] = -1
        else:
            x[pos] = -1
            pos -= 1
    return out, count, OK, nodes


def _enumerate_python(a, target, capacity, budget):
    a = [int(v) for v in a]
    n = len(a)
    cells = [(i, j) for i in range(n) for j in range(n) if not (i == j and a[i] == 1)]
    tail = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail[i] = tail[i + 1] + a[i] * (a[i] + 1)
    A = np.zeros((n, n), dtype=np.int64)
    av = np.array(a, dtype=np.int64)
    rowacc = [0] * n
    found = []
    nodes = 0

    def rec(pos, rem):
        nonlocal nodes
        if pos == len(cells):
            if rem == 0 and _accept(A, av):
                if len(found) >= capacity:
                    return CAPACITY_EXCEEDED
                found.append(A.copy())
            return OK
        i, j = cells[pos]
        w = a[i] * a[j]
        last_in_row = pos + 1 == len(cells) or cells[pos + 1][0] != i
        m = 0
        while m * w <= rem:
            r_i = rowacc[i] + m * a[j]
            if rem - m * w < a[i] * max(0, a[i] + 1 - r_i) + tail[i + 1]:
                break
            if last_in_row:
                if r_i < a[i] + 1:
                    m += 1
                    continue
                if i > 0 and a[i] == a[i - 1] and r_i > rowacc[i - 1]:
                    break
            nodes += 1
            if nodes > budget:
                return BUDGET_EXCEEDED
            A[i, j] = m
            rowacc[i] += m * a[j]
            status = rec(pos + 1, rem - m * w)
            rowacc[i] -= m * a[j]
            A[i, j] = 0
            if status != OK:
                return status
            m += 1
        return OK

    status = rec(0, int(target))
    out = np.zeros((max(len(found), 1), n, n), dtype=np.int64)
    for k, M in enumerate(found):
        out[k] = M
    return out, len(found), status, nodes


def enumerate_arrow_matrices(dims, target: int, budget: int, capacity: int = 4096):
    """Candidate arrow matrices for irreducible settings with the given dims.

    Returns ``(matrices, nodes)``; raises :class:`BudgetExceeded` when the
    search visits more than ``budget`` nodes.
    """
    a = np.ascontiguousarray(dims, dtype=np.int64)
    while True:
        if USE_NUMBA:
            out, count, status, nodes = _enumerate_numba(a, int(target), capacity, int(budget))
        else:
            out, count, status, nodes = _enumerate_python(a, int(target), capacity, int(budget))
        if status == CAPACITY_EXCEEDED:
            capacity *= 4
            continue
        if status == BUDGET_EXCEEDED:
            raise BudgetExceeded(f"enumeration exceeded node budget {budget} for dims {a.tolist()}")
        return out[:count], int(nodes)


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration visits more search nodes than allowed."""
