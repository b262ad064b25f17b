# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trace-likelihood kernel.

Same contract as the numpy fallback: for each sample row, the squared
distance between its leak vector and the leakage model of every candidate
key, scaled to a Gaussian log-likelihood (up to the additive constant).
"""

import numpy as np


def loglik_matrix(const long long[:, ::1] texts,
                  const double[:, ::1] leaks,
                  const unsigned char[:, ::1] hw_table,
                  double sigma):
    cdef Py_ssize_t n = texts.shape[0]
    cdef Py_ssize_t q = texts.shape[1]
    cdef Py_ssize_t m = hw_table.shape[1]
    out = np.zeros((n, m))
    cdef double[:, ::1] acc = out
    cdef double neg_inv_two_s2 = -0.5 / (sigma * sigma)
    cdef Py_ssize_t s, i, k
    cdef long long t
    cdef double y, d
    with nogil:
        for s in range(n):
            for i in range(q):
                t = texts[s, i]
                y = leaks[s, i]
                for k in range(m):
                    d = y - <double> hw_table[t, k]
                    acc[s, k] += d * d
            for k in range(m):
                acc[s, k] *= neg_inv_two_s2
    return out
