"""Pure-numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same algorithm, same operation order and same tie-breaking, with the inner
column scan vectorised.
"""

import numpy as np


def lap_min(cost):
    """Minimise over injections rows -> columns of an ``n x m`` cost, ``n <= m``.

    Returns ``(col4row, u, v, augmenting_paths)``.
    """
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    n, m = cost.shape
    if n > m:
        raise ValueError("lap_min requires n <= m")

    u = np.zeros(n)
    v = np.zeros(m)
    col4row = np.full(n, -1, dtype=np.intp)
    row4col = np.full(m, -1, dtype=np.intp)
    path = np.full(m, -1, dtype=np.intp)
    spc = np.empty(m)
    paths = 0

    for cur in range(n):
        spc.fill(np.inf)
        seen_col = np.zeros(m, dtype=bool)
        seen_row = np.zeros(n, dtype=bool)
        min_val = 0.0
        i = cur
        sink = -1
        while sink == -1:
            seen_row[i] = True
            free = ~seen_col
            r = min_val + cost[i] - u[i] - v
            better = free & (r < spc)
            path[better] = i
            spc[better] = r[better]
            masked = np.where(free, spc, np.inf)
            best = int(np.argmin(masked))
            min_val = float(masked[best])
            seen_col[best] = True
            if row4col[best] == -1:
                sink = best
            else:
                i = int(row4col[best])

        u[cur] += min_val
        rows = np.flatnonzero(seen_row)
        rows = rows[rows != cur]
        u[rows] += min_val - spc[col4row[rows]]
        v[seen_col] -= min_val - spc[seen_col]

        j = sink
        while True:
            i = int(path[j])
            row4col[j] = i
            col4row[i], j = j, int(col4row[i])
            if i == cur:
                break
        paths += 1

    return col4row, u, v, paths


def greedy_max(values):
    """Row-by-row greedy maximisation; ties go to the lowest free column."""
    values = np.asarray(values, dtype=np.float64)
    n, m = values.shape
    if n > m:
        raise ValueError("greedy_max requires n <= m")
    col4row = np.full(n, -1, dtype=np.intp)
    used = np.zeros(m, dtype=bool)
    total = 0.0
    for i in range(n):
        row = np.where(used, -np.inf, values[i])
        best = int(np.argmax(row))
        used[best] = True
        col4row[i] = best
        total += float(values[i, best])
    return col4row, total
