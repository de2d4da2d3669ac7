# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: rectangular shortest-augmenting-path LAP and the row-greedy walk.

Both kernels mirror ``_kernels_py`` operation for operation so that the two
backends return identical assignments on identical inputs.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY

cnp.import_array()


def lap_min(const double[:, ::1] cost):
    """Minimise over injections rows -> columns of an ``n x m`` cost, ``n <= m``.

    Returns ``(col4row, u, v, augmenting_paths)`` where ``u``/``v`` are the
    row and column potentials, ``u[i] + v[j] <= cost[i, j]`` everywhere with
    equality on the assignment.
    """
    cdef Py_ssize_t n = cost.shape[0]
    cdef Py_ssize_t m = cost.shape[1]
    if n > m:
        raise ValueError("lap_min requires n <= m")

    u_arr = np.zeros(n, dtype=np.float64)
    v_arr = np.zeros(m, dtype=np.float64)
    col4row_arr = np.full(n, -1, dtype=np.intp)
    cdef double[::1] u = u_arr
    cdef double[::1] v = v_arr
    cdef Py_ssize_t[::1] col4row = col4row_arr

    cdef Py_ssize_t[::1] row4col = np.full(m, -1, dtype=np.intp)
    cdef Py_ssize_t[::1] path = np.full(m, -1, dtype=np.intp)
    cdef double[::1] spc = np.empty(m, dtype=np.float64)
    cdef unsigned char[::1] seen_row = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] seen_col = np.zeros(m, dtype=np.uint8)

    cdef Py_ssize_t cur, i, j, k, best, sink, tmp
    cdef double min_val, lowest, r, ui
    cdef Py_ssize_t paths = 0

    with nogil:
        for cur in range(n):
            for j in range(m):
                spc[j] = INFINITY
                seen_col[j] = 0
            for k in range(n):
                seen_row[k] = 0
            min_val = 0.0
            i = cur
            sink = -1
            while sink == -1:
                seen_row[i] = 1
                ui = u[i]
                best = -1
                lowest = INFINITY
                for j in range(m):
                    if seen_col[j]:
                        continue
                    r = min_val + cost[i, j] - ui - v[j]
                    if r < spc[j]:
                        path[j] = i
                        spc[j] = r
                    if spc[j] < lowest:
                        lowest = spc[j]
                        best = j
                min_val = lowest
                seen_col[best] = 1
                if row4col[best] == -1:
                    sink = best
                else:
                    i = row4col[best]

            u[cur] += min_val
            for k in range(n):
                if seen_row[k] and k != cur:
                    u[k] += min_val - spc[col4row[k]]
            for j in range(m):
                if seen_col[j]:
                    v[j] -= min_val - spc[j]

            j = sink
            while True:
                i = path[j]
                row4col[j] = i
                tmp = col4row[i]
                col4row[i] = j
                j = tmp
                if i == cur:
                    break
            paths += 1

    return col4row_arr, u_arr, v_arr, paths


def greedy_max(const double[:, ::1] values):
    """Row-by-row greedy maximisation; ties go to the lowest free column."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t m = values.shape[1]
    if n > m:
        raise ValueError("greedy_max requires n <= m")
    col4row_arr = np.full(n, -1, dtype=np.intp)
    cdef Py_ssize_t[::1] col4row = col4row_arr
    cdef unsigned char[::1] used = np.zeros(m, dtype=np.uint8)
    cdef Py_ssize_t i, j, best
    cdef double top, total = 0.0
    with nogil:
        for i in range(n):
            best = -1
            top = -INFINITY
            for j in range(m):
                if not used[j] and (best == -1 or values[i, j] > top):
                    top = values[i, j]
                    best = j
            used[best] = 1
            col4row[i] = best
            total += top
    return col4row_arr, total
