# cython: language_level=3, boundscheck=False, wraparound=False
# cython: initializedcheck=False, cdivision=True
"""Compiled backend for the two hot kernels.

A twin of ``_pykernels``: every floating-point operation happens in the
same order on the same values (the extension is compiled with
contraction disabled), so results are bit-identical to the pure-Python
backend.  Keep the two modules in lock step; ``tests/test_backends.py``
enforces the equivalence.
"""

import numpy as np

INF = float("inf")

# Relative tolerance for deciding that a reduced cost is zero ("tight").
# Potentials accumulate O(n) rounding of entry-sized terms, so 1e-9 is
# generous for any realistic matrix size.
TIGHT_RTOL = 1e-9


def solve_dense(raw):
    """Maximum-score one-to-one matching over a dense score matrix.

    Rows may stay unmatched, so pairs with negative score are never used
    and the total is the maximum over *partial* matchings.  Among all
    optimal matchings the canonical one is returned: scanning rows in
    increasing order, each row's matched column is the smallest feasible
    one (an unmatched row ranks after any column), which makes the sorted
    (row, column) pair list lexicographically smallest.

    Returns ``(total, pairs)`` with ``pairs`` sorted by row.
    """
    raw = np.ascontiguousarray(raw, dtype=np.float64)
    cdef Py_ssize_t nr = raw.shape[0]
    cdef Py_ssize_t nc = raw.shape[1]
    if nr == 0 or nc == 0:
        return 0.0, []
    if not np.isfinite(raw).all():
        raise ValueError("assignment scores must be finite")

    cdef Py_ssize_t m = nr if nr > nc else nc
    cost_arr = np.zeros((m, m))
    cdef double[:, ::1] cost = cost_arr
    cdef double[:, ::1] raw_v = raw
    cdef Py_ssize_t i, j
    cdef double entry
    # square, zero-padded, clamped problem: matching a row to a padding
    # column (or to a column whose raw score is negative) stands for
    # leaving it unmatched
    for i in range(nr):
        for j in range(nc):
            entry = raw_v[i, j]
            if entry <= 0.0:
                entry = 0.0          # maps -0.0 to +0.0, like np.maximum
            cost[i, j] = -entry

    u_arr = np.zeros(m + 1)
    v_arr = np.zeros(m + 1)
    p_arr = np.zeros(m + 1, dtype=np.int64)
    match_row_arr = np.empty(m, dtype=np.int64)
    _hungarian_square(cost, m, u_arr, v_arr, p_arr, match_row_arr)
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef long long[::1] match_row = match_row_arr

    match_col_arr = np.empty(m, dtype=np.int64)
    cdef long long[::1] match_col = match_col_arr
    for j in range(m):
        match_col[match_row[j]] = j

    cdef double scale = 1.0
    for i in range(m):
        for j in range(m):
            entry = -cost[i, j] if cost[i, j] < 0.0 else cost[i, j]
            if entry > scale:
                scale = entry
    cdef double tol = TIGHT_RTOL * scale
    tight_arr = np.empty((m, m), dtype=np.uint8)
    cdef unsigned char[:, ::1] tight = tight_arr
    for i in range(m):
        for j in range(m):
            # same association as the pure version: (cost - u) - v
            tight[i, j] = ((cost[i, j] - u[i + 1]) - v[j + 1]) <= tol

    pairs = _canonicalize(raw_v, nr, nc, m, tight, match_col, match_row)
    cdef double total = 0.0
    for i, j in pairs:
        total += raw_v[i, j]
    return total, pairs


cdef void _hungarian_square(double[:, ::1] cost, Py_ssize_t m,
                            double[::1] u, double[::1] v,
                            long long[::1] p, long long[::1] match_row):
    """O(m^3) shortest-augmenting-path assignment on a square cost matrix.

    Minimizes total cost.  Fills dual potentials ``(u, v)`` satisfying
    u[i] + v[j] <= cost[i][j] with equality on matched edges, plus
    ``match_row`` mapping each column to its matched row.
    """
    # 1-based arrays with column 0 as the sentinel of the augmenting scan
    way_arr = np.zeros(m + 1, dtype=np.int64)
    minv_arr = np.empty(m + 1)
    used_arr = np.empty(m + 1, dtype=np.uint8)
    cdef long long[::1] way = way_arr
    cdef double[::1] minv = minv_arr
    cdef unsigned char[::1] used = used_arr
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double cur, delta
    for i in range(1, m + 1):
        p[0] = i
        j0 = 0
        for j in range(m + 1):
            minv[j] = INF
            used[j] = 0
        while True:
            used[j0] = 1
            i0 = p[j0]
            for j in range(1, m + 1):
                if not used[j]:
                    cur = (cost[i0 - 1, j - 1] - u[i0]) - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
            j1 = 0
            delta = INF
            for j in range(1, m + 1):
                if not used[j] and minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    for j in range(m):
        match_row[j] = p[j + 1] - 1        # column j -> row


cdef list _canonicalize(double[:, ::1] raw, Py_ssize_t nr, Py_ssize_t nc,
                        Py_ssize_t m, unsigned char[:, ::1] tight,
                        long long[::1] match_col, long long[::1] match_row):
    """Extract the canonical optimal pairs from an optimal matching.

    Every optimal matching of the padded problem lives inside the tight
    subgraph (complementary slackness), so fixing rows one by one to their
    smallest feasible tight nonnegative column, while keeping a full
    matching alive through rematching, yields the canonical optimum.
    Rows with no feasible scoring column are left flexible: pinning them
    to a padding column could block a later row's rematch.
    """
    fixed_arr = np.zeros(m, dtype=np.uint8)
    prev_col_arr = np.empty(m, dtype=np.int64)
    visited_arr = np.empty(m, dtype=np.uint8)
    queue_arr = np.empty(m + 1, dtype=np.int64)
    cdef unsigned char[::1] fixed_col = fixed_arr
    cdef long long[::1] prev_col = prev_col_arr
    cdef unsigned char[::1] visited = visited_arr
    cdef long long[::1] queue = queue_arr
    cdef Py_ssize_t i, j
    pairs = []
    for i in range(nr):
        for j in range(nc):
            if fixed_col[j] or not tight[i, j] or raw[i, j] < 0.0:
                continue
            if match_col[i] == j or _force_pair(
                    i, j, tight, match_col, match_row, fixed_col, m,
                    prev_col, visited, queue):
                fixed_col[j] = 1
                pairs.append((i, j))
                break
    return pairs


cdef bint _force_pair(Py_ssize_t i, Py_ssize_t j,
                      unsigned char[:, ::1] tight, long long[::1] match_col,
                      long long[::1] match_row, unsigned char[::1] fixed_col,
                      Py_ssize_t m, long long[::1] prev_col,
                      unsigned char[::1] visited, long long[::1] queue):
    """Try to re-route the matching so that row i takes column j.

    Fixed pairs stay untouched; only tight edges are used.  On failure the
    matching is restored and False is returned.
    """
    cdef Py_ssize_t j_old = match_col[i]
    cdef Py_ssize_t i_old = match_row[j]
    match_col[i] = j
    match_row[j] = i
    match_row[j_old] = -1
    # BFS for an alternating path from the displaced row to the freed
    # column, avoiding fixed columns and the column just forced
    cdef Py_ssize_t c, r, occ, old_c
    for c in range(m):
        prev_col[c] = -1
        visited[c] = fixed_col[c]
    visited[j] = 1
    queue[0] = i_old
    cdef Py_ssize_t qlen = 1
    cdef Py_ssize_t qi = 0
    cdef Py_ssize_t found = -1
    while qi < qlen and found < 0:
        r = queue[qi]
        qi += 1
        for c in range(m):
            if tight[r, c] and not visited[c]:
                visited[c] = 1
                prev_col[c] = r
                occ = match_row[c]
                if occ < 0:
                    found = c
                    break
                queue[qlen] = occ
                qlen += 1
    if found < 0:
        match_col[i] = j_old
        match_row[j_old] = i
        match_row[j] = i_old
        return False
    c = found
    while True:
        r = prev_col[c]
        old_c = match_col[r]
        match_row[c] = r
        match_col[r] = c
        if r == i_old:
            break
        c = old_c
    return True


LINKAGE_AVERAGE = 0
LINKAGE_SINGLE = 1
LINKAGE_COMPLETE = 2


def agglomerate(sim, rank, int linkage, double tau, Py_ssize_t stop_at):
    """Bottom-up merging over a dense similarity matrix.

    Starts from singletons and repeatedly merges the active cluster pair
    with the highest linkage score; stops when that score drops below
    ``tau`` or when ``stop_at`` clusters remain.  Ties on the score are
    broken toward the pair whose (smaller, larger) representative ranks
    are smallest, where a cluster's representative is its minimum ``rank``
    entry.

    Returns an int64 label per item; items sharing a label share a
    cluster.
    """
    sim = np.ascontiguousarray(sim, dtype=np.float64)
    cdef Py_ssize_t n = sim.shape[0]
    labels_arr = np.arange(n, dtype=np.int64)
    if n == 0:
        return labels_arr
    link_arr = sim.copy()
    active_arr = np.ones(n, dtype=np.uint8)
    size_arr = np.ones(n, dtype=np.int64)
    rep_arr = np.ascontiguousarray(rank, dtype=np.int64).copy()
    cdef long long[::1] labels = labels_arr
    cdef double[:, ::1] link = link_arr
    cdef unsigned char[::1] active = active_arr
    cdef long long[::1] size = size_arr
    cdef long long[::1] rep = rep_arr
    cdef Py_ssize_t n_active = n
    cdef Py_ssize_t i, j, a, b, c
    cdef double best, newv, sa, sb
    cdef long long lo, hi, best_lo, best_hi
    while n_active > stop_at:
        best = -INF
        for i in range(n):
            if active[i]:
                for j in range(i + 1, n):
                    if active[j] and link[i, j] > best:
                        best = link[i, j]
        if best < tau:
            break
        # tie-break over all pairs achieving the best score; distinct
        # clusters have distinct representatives, so the key is unique
        a = -1
        b = -1
        best_lo = 0
        best_hi = 0
        for i in range(n):
            if active[i]:
                for j in range(i + 1, n):
                    if active[j] and link[i, j] == best:
                        if rep[i] < rep[j]:
                            lo = rep[i]
                            hi = rep[j]
                        else:
                            lo = rep[j]
                            hi = rep[i]
                        if a < 0 or lo < best_lo or \
                                (lo == best_lo and hi < best_hi):
                            best_lo = lo
                            best_hi = hi
                            a = i
                            b = j
        # Lance-Williams update of cluster a; b is retired
        if linkage == LINKAGE_AVERAGE:
            sa = <double>size[a]
            sb = <double>size[b]
            for c in range(n):
                if active[c] and c != a and c != b:
                    newv = (link[a, c] * sa + link[b, c] * sb) / (sa + sb)
                    link[a, c] = newv
                    link[c, a] = newv
        elif linkage == LINKAGE_SINGLE:
            for c in range(n):
                if active[c] and c != a and c != b:
                    newv = link[a, c] if link[a, c] > link[b, c] \
                        else link[b, c]
                    link[a, c] = newv
                    link[c, a] = newv
        else:
            for c in range(n):
                if active[c] and c != a and c != b:
                    newv = link[a, c] if link[a, c] < link[b, c] \
                        else link[b, c]
                    link[a, c] = newv
                    link[c, a] = newv
        size[a] += size[b]
        if rep[b] < rep[a]:
            rep[a] = rep[b]
        active[b] = 0
        for i in range(n):
            if labels[i] == b:
                labels[i] = a
        n_active -= 1
    return labels_arr
