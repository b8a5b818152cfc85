"""Pure-Python backend for the two hot kernels.

The compiled backend in ``_ckernels.pyx`` mirrors this module operation
for operation (including the order of floating-point arithmetic), so both
backends produce bit-identical results; ``tests/test_backends.py`` keeps
them in lock step.  numpy is used for storage and for vectorizing inner
loops, never in a way that changes rounding.
"""

from __future__ import annotations

import numpy as np

INF = float("inf")

# Relative tolerance for deciding that a reduced cost is zero ("tight").
# Potentials accumulate O(n) rounding of entry-sized terms, so 1e-9 is
# generous for any realistic matrix size.
TIGHT_RTOL = 1e-9


def solve_dense(raw: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
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
    nr, nc = raw.shape
    if nr == 0 or nc == 0:
        return 0.0, []
    if not np.isfinite(raw).all():
        raise ValueError("assignment scores must be finite")

    # Square, zero-padded, clamped problem: matching a row to a padding
    # column (or to a column whose raw score is negative) stands for
    # leaving it unmatched.
    m = max(nr, nc)
    clamp = np.zeros((m, m))
    np.maximum(raw, 0.0, out=clamp[:nr, :nc])
    cost = -clamp

    u, v, match_row = _hungarian_square(cost, m)
    match_col = np.empty(m, dtype=np.int64)
    match_col[match_row] = np.arange(m)

    tol = TIGHT_RTOL * max(1.0, float(np.abs(cost).max()))
    tight = ((cost - u[:, None]) - v[None, :]) <= tol

    pairs = _canonicalize(raw, nr, nc, m, tight, match_col, match_row)
    total = 0.0
    for i, j in pairs:
        total += float(raw[i, j])
    return total, pairs


def _hungarian_square(cost: np.ndarray, m: int):
    """O(m^3) shortest-augmenting-path assignment on a square cost matrix.

    Minimizes total cost.  Returns dual potentials ``(u, v)`` satisfying
    u[i] + v[j] <= cost[i][j] with equality on matched edges, plus
    ``match_row`` mapping each column to its matched row.
    """
    # 1-based arrays with column 0 as the sentinel of the augmenting scan.
    u = np.zeros(m + 1)
    v = np.zeros(m + 1)
    p = np.zeros(m + 1, dtype=np.int64)    # p[j] = row matched to column j
    way = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, m + 1):
        p[0] = i
        j0 = 0
        minv = np.full(m + 1, INF)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = int(p[j0])
            free = ~used[1:]
            cur = (cost[i0 - 1, :] - u[i0]) - v[1:]
            upd = free & (cur < minv[1:])
            minv[1:][upd] = cur[upd]
            way[1:][upd] = j0
            masked = np.where(free, minv[1:], INF)
            j1 = int(np.argmin(masked)) + 1
            delta = float(masked[j1 - 1])
            used_idx = np.flatnonzero(used)
            u[p[used_idx]] += delta
            v[used_idx] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = int(way[j0])
            p[j0] = p[j1]
            j0 = j1
    match_row = np.empty(m, dtype=np.int64)
    match_row[:] = p[1:] - 1               # column j -> row
    # reorder potentials to 0-based
    return u[1:].copy(), v[1:].copy(), match_row


def _canonicalize(raw, nr, nc, m, tight, match_col, match_row):
    """Extract the canonical optimal pairs from an optimal matching.

    Every optimal matching of the padded problem lives inside the tight
    subgraph (complementary slackness), so fixing rows one by one to their
    smallest feasible tight nonnegative column, while keeping a full
    matching alive through rematching, yields the canonical optimum.
    Rows with no feasible scoring column are left flexible: pinning them
    to a padding column could block a later row's rematch.
    """
    fixed_col = np.zeros(m, dtype=bool)
    pairs = []
    for i in range(nr):
        for j in range(nc):
            if fixed_col[j] or not tight[i, j] or raw[i, j] < 0.0:
                continue
            if match_col[i] == j or _force_pair(
                    i, j, tight, match_col, match_row, fixed_col, m):
                fixed_col[j] = True
                pairs.append((i, j))
                break
    return pairs


def _force_pair(i, j, tight, match_col, match_row, fixed_col, m):
    """Try to re-route the matching so that row i takes column j.

    Fixed pairs stay untouched; only tight edges are used.  On failure the
    matching is restored and False is returned.
    """
    j_old = int(match_col[i])
    i_old = int(match_row[j])
    match_col[i] = j
    match_row[j] = i
    match_row[j_old] = -1
    # BFS for an alternating path from the displaced row to the freed
    # column, avoiding fixed columns and the column just forced.
    prev_col = np.full(m, -1, dtype=np.int64)
    visited = fixed_col.copy()
    visited[j] = True
    queue = [i_old]
    qi = 0
    found = -1
    while qi < len(queue) and found < 0:
        r = queue[qi]
        qi += 1
        for c in np.flatnonzero(tight[r] & ~visited):
            c = int(c)
            visited[c] = True
            prev_col[c] = r
            occ = int(match_row[c])
            if occ < 0:
                found = c
                break
            queue.append(occ)
    if found < 0:
        match_col[i] = j_old
        match_row[j_old] = i
        match_row[j] = i_old
        return False
    c = found
    while True:
        r = int(prev_col[c])
        old_c = int(match_col[r])
        match_row[c] = r
        match_col[r] = c
        if r == i_old:
            break
        c = old_c
    return True


LINKAGE_AVERAGE = 0
LINKAGE_SINGLE = 1
LINKAGE_COMPLETE = 2


def agglomerate(sim: np.ndarray, rank: np.ndarray, linkage: int,
                tau: float, stop_at: int) -> np.ndarray:
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
    n = sim.shape[0]
    labels = np.arange(n, dtype=np.int64)
    if n == 0:
        return labels
    link = sim.copy()
    active = np.ones(n, dtype=bool)
    size = np.ones(n, dtype=np.int64)
    rep = np.ascontiguousarray(rank, dtype=np.int64).copy()
    rows, cols = np.triu_indices(n, k=1)
    n_active = n
    while n_active > stop_at:
        alive = active[rows] & active[cols]
        vals = np.where(alive, link[rows, cols], -INF)
        best = float(vals.max())
        if best < tau:
            break
        cand = np.flatnonzero(vals == best)
        ra = rep[rows[cand]]
        rb = rep[cols[cand]]
        key_lo = np.minimum(ra, rb)
        key_hi = np.maximum(ra, rb)
        sel = cand[np.lexsort((key_hi, key_lo))[0]]
        a = int(rows[sel])
        b = int(cols[sel])
        # Lance-Williams update of cluster a; b is retired.
        others = active.copy()
        others[a] = False
        others[b] = False
        oc = np.flatnonzero(others)
        if linkage == LINKAGE_AVERAGE:
            sa = float(size[a])
            sb = float(size[b])
            new = (link[a, oc] * sa + link[b, oc] * sb) / (sa + sb)
        elif linkage == LINKAGE_SINGLE:
            new = np.maximum(link[a, oc], link[b, oc])
        else:
            new = np.minimum(link[a, oc], link[b, oc])
        link[a, oc] = new
        link[oc, a] = new
        size[a] += size[b]
        if rep[b] < rep[a]:
            rep[a] = rep[b]
        active[b] = False
        labels[labels == b] = a
        n_active -= 1
    return labels
