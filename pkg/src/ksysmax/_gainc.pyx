# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gain kernels. Mirrors ksysmax._gainpy exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def cd_gains(double[::1] colsum, double[::1] diag, double[::1] simsum,
             cnp.int64_t[::1] cands):
    cdef Py_ssize_t m = cands.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t t, c
    for t in range(m):
        c = cands[t]
        o[t] = colsum[c] - 2.0 * simsum[c] - diag[c]
    return out


def fl_gains(double[:, ::1] sim, double[::1] curmax, double covsum,
             double[::1] simsum, double[::1] diag, double inv_n,
             cnp.int64_t[::1] cands, bint nonempty):
    cdef Py_ssize_t n = sim.shape[0]
    cdef Py_ssize_t m = cands.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t t, u, c
    cdef double acc, s
    for t in range(m):
        c = cands[t]
        acc = 0.0
        if nonempty:
            for u in range(n):
                s = sim[u, c]
                if s > curmax[u]:
                    acc += s
                else:
                    acc += curmax[u]
            acc -= covsum
        else:
            for u in range(n):
                acc += sim[u, c]
        o[t] = acc - (2.0 * simsum[c] + diag[c]) * inv_n
    return out


def sr_gains(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
             double[::1] weights, double[:, ::1] alpha, double[:, ::1] wsum,
             cnp.uint8_t[:, ::1] seeded, Py_ssize_t n_products,
             cnp.int64_t[::1] cands):
    cdef Py_ssize_t m = cands.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t t, c, v, i, e, u
    cdef double g, w0
    for t in range(m):
        c = cands[t]
        v = c // n_products
        i = c % n_products
        g = -alpha[v, i] * sqrt(wsum[v, i])
        for e in range(indptr[v], indptr[v + 1]):
            u = indices[e]
            if u == v or seeded[u, i]:
                continue
            w0 = wsum[u, i]
            g += alpha[u, i] * (sqrt(w0 + weights[e]) - sqrt(w0))
        o[t] = g
    return out
