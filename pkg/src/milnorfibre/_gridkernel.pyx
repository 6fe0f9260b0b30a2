# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sign classification of a polynomial over a grid of nodes."""
import numpy as np

from libc.math cimport fabs


def classify(double[::1] coeffs, long[::1] ex, long[::1] ey,
             double[::1] xs, double[::1] ys, double threshold, double rel_err):
    """Signs of f(xs[i], ys[j]) - threshold, or 2 where rounding could flip it."""
    cdef Py_ssize_t n = xs.shape[0], m = ys.shape[0], nt = coeffs.shape[0]
    cdef Py_ssize_t i, j, t, k
    cdef long dx = 0, dy = 0
    for t in range(nt):
        if ex[t] > dx:
            dx = ex[t]
        if ey[t] > dy:
            dy = ey[t]
    out = np.empty((n, m), dtype=np.int8)
    cdef signed char[:, ::1] o = out
    px_arr = np.empty(dx + 1, dtype=np.float64)
    py_arr = np.empty((m, dy + 1), dtype=np.float64)
    cdef double[::1] px = px_arr
    cdef double[:, ::1] py = py_arr
    cdef double v, mag, term, err
    for j in range(m):
        py[j, 0] = 1.0
        for k in range(1, dy + 1):
            py[j, k] = py[j, k - 1] * ys[j]
    for i in range(n):
        px[0] = 1.0
        for k in range(1, dx + 1):
            px[k] = px[k - 1] * xs[i]
        for j in range(m):
            v = -threshold
            mag = fabs(threshold)
            for t in range(nt):
                term = coeffs[t] * px[ex[t]] * py[j, ey[t]]
                v += term
                mag += fabs(term)
            err = mag * rel_err
            if v > err:
                o[i, j] = 1
            elif v < -err:
                o[i, j] = -1
            else:
                o[i, j] = 2
    return out
