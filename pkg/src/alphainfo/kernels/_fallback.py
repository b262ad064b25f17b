"""Numpy implementation of the trace-likelihood kernel.

Used when the compiled extension is unavailable (or disabled via
ALPHAINFO_PURE_PYTHON).  Accumulates over traces to keep the working set
at one (n, M) block regardless of the trace count.
"""

import numpy as np


def loglik_matrix(texts, leaks, hw_table, sigma):
    n, q = texts.shape
    m = hw_table.shape[1]
    acc = np.zeros((n, m))
    for i in range(q):
        diff = leaks[:, i, None] - hw_table[texts[:, i], :]
        acc += diff * diff
    return acc * (-0.5 / (sigma * sigma))
