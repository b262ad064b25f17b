"""Hot inner kernel: per-sample log-likelihood of every candidate key.

A compiled Cython core is preferred; a numpy fallback with identical
semantics is selected at import time when the extension is missing or when
the environment variable ``ALPHAINFO_PURE_PYTHON`` is set to a nonempty
value other than ``0``.
"""

import os

import numpy as np

from . import _fallback

if os.environ.get("ALPHAINFO_PURE_PYTHON", "0") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "python"


def loglik_matrix(texts, leaks, hw_table, sigma) -> np.ndarray:
    """Gaussian log-likelihood of each candidate key for each sample.

    Parameters
    ----------
    texts : (n, q) integer array
        Known inputs, indices into the first axis of ``hw_table``.
    leaks : (n, q) float array
        Observed leak values.
    hw_table : (T, M) uint8 array
        ``hw_table[t, k]`` is the noise-free leak for input t and key k.
    sigma : float
        Gaussian noise standard deviation, > 0.

    Returns
    -------
    (n, M) float array of ``-sum_i (leaks[s,i] - hw_table[texts[s,i],k])^2
    / (2 sigma^2)``; the additive normalization constant is omitted since
    every consumer renormalizes over keys.
    """
    texts = np.ascontiguousarray(texts, dtype=np.int64)
    leaks = np.ascontiguousarray(leaks, dtype=np.float64)
    hw_table = np.ascontiguousarray(hw_table, dtype=np.uint8)
    if texts.ndim != 2 or leaks.shape != texts.shape or hw_table.ndim != 2:
        raise ValueError("texts and leaks must be matching (n, q) arrays")
    if not sigma > 0.0:
        raise ValueError("kernel requires sigma > 0")
    if texts.size and (texts.min() < 0 or texts.max() >= hw_table.shape[0]):
        raise ValueError("text value out of range for the leak table")
    return _impl.loglik_matrix(texts, leaks, hw_table, float(sigma))
