"""Success-probability ceilings from information values.

The chain is: an information value lower-bounds the binary divergence
``d_alpha(P_s || 1/M)`` of the attack's success probability from the blind
guess, and since that divergence is increasing in its first argument above
``1/M``, the relation inverts into a ceiling on ``P_s``.  The same
threshold read the other way yields the minimum number of traces needed to
reach a target success rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .renyi import LogBase, Order, binary_alpha_div

# Absolute bisection tolerance on the success probability.
PS_TOL = 1e-12
DEFAULT_Q_MAX = 10 ** 6


class ThresholdNotReachedError(RuntimeError):
    """The information curve never clears the required threshold."""

    def __init__(self, threshold_bits: float, q_max: int):
        super().__init__(
            f"information curve stays below the {threshold_bits!r}-bit "
            f"threshold up to q_max={q_max}")
        self.threshold_bits = threshold_bits
        self.q_max = q_max


@dataclass(frozen=True)
class SuccessBound:
    """Largest success probability compatible with an information value."""

    info_value: float
    key_cardinality: int
    ps_upper: float
    alpha: Order


@dataclass(frozen=True)
class QminResult:
    """Smallest trace count whose information clears the Fano threshold."""

    target_ps: float
    q_min: int
    info_at_qmin: float


def fano_rhs(ps: float, ps_blind: float, a: Order,
             base: LogBase = LogBase.BITS) -> float:
    """Lower bound on information given success probabilities with and
    without the observation: ``d_alpha(ps || ps_blind)``.
    """
    if not 0.0 <= ps_blind <= ps <= 1.0:
        raise ValueError(
            "bound direction undefined: need 0 <= ps_blind <= ps <= 1, "
            f"got ps={ps!r}, ps_blind={ps_blind!r}")
    return binary_alpha_div(ps, ps_blind, a, base)


def invert_success_bound(info: float, M: int, a: Order) -> SuccessBound:
    """Largest p in [1/M, 1] with ``d_alpha(p || 1/M) <= info`` (bits).

    Found by bisection (the divergence is increasing in p on that range);
    an information value of at least ``log2 M`` certifies nothing, so the
    ceiling saturates at 1.
    """
    if not info >= 0.0:
        raise ValueError(f"information must be nonnegative, got {info!r}")
    if M < 2:
        raise ValueError("key cardinality must be at least 2")
    blind = 1.0 / M
    if info == 0.0:
        # The divergence is quadratically flat at the blind guess, so
        # bisection would overshoot by the float feasibility noise.
        return SuccessBound(info, M, blind, a)
    if info >= math.log2(M):
        return SuccessBound(info, M, 1.0, a)
    lo, hi = blind, 1.0
    while hi - lo > PS_TOL:
        mid = 0.5 * (lo + hi)
        if binary_alpha_div(mid, blind, a, LogBase.BITS) <= info:
            lo = mid
        else:
            hi = mid
    return SuccessBound(info, M, lo, a)


def qmin_search(info_curve: Callable[[int], float], target_ps: float, M: int,
                a: Order, q_max: int = DEFAULT_Q_MAX) -> QminResult:
    """Smallest q >= 1 with ``info_curve(q)`` (bits) at or above the
    threshold ``d_alpha(target_ps || 1/M)``.

    The curve must be nondecreasing in q; the search doubles q until the
    threshold is cleared, then bisects on integers.  Curve values are
    cached so expensive (e.g. Monte-Carlo backed) curves are not
    re-evaluated.
    """
    if not 1.0 / M <= target_ps <= 1.0:
        raise ValueError(
            f"target success rate must lie in [1/M, 1], got {target_ps!r}")
    threshold = binary_alpha_div(target_ps, 1.0 / M, a, LogBase.BITS)
    cache: dict = {}

    def curve(q: int) -> float:
        if q not in cache:
            cache[q] = float(info_curve(q))
        return cache[q]

    q = 1
    while curve(q) < threshold:
        if q >= q_max:
            raise ThresholdNotReachedError(threshold, q_max)
        q = min(2 * q, q_max)
    lo = q // 2 if q > 1 else 0  # curve(lo) < threshold (or lo == 0)
    hi = q
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if curve(mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return QminResult(target_ps, hi, curve(hi))


@dataclass(frozen=True)
class GridQmin:
    """Threshold crossing read off a sampled (q, info) table."""

    target_ps: float
    threshold_bits: float
    q_min: int
    info_at_qmin: float
    q_prev: int | None
    info_at_qprev: float | None


def qmin_from_table(qs: Sequence[int], infos: Sequence[float],
                    target_ps: float, M: int, a: Order) -> GridQmin:
    """Integer step search on a sampled information curve.

    Returns the first grid point whose information clears the threshold,
    together with the preceding grid point for a strictness recheck.
    """
    if not 1.0 / M <= target_ps <= 1.0:
        raise ValueError(
            f"target success rate must lie in [1/M, 1], got {target_ps!r}")
    qs = np.asarray(qs, dtype=np.int64)
    infos = np.asarray(infos, dtype=np.float64)
    if qs.ndim != 1 or qs.shape != infos.shape or qs.size == 0:
        raise ValueError("curve table must be two equal-length columns")
    order = np.argsort(qs, kind="stable")
    qs, infos = qs[order], infos[order]
    threshold = binary_alpha_div(target_ps, 1.0 / M, a, LogBase.BITS)
    hits = np.nonzero(infos >= threshold)[0]
    if hits.size == 0:
        raise ThresholdNotReachedError(threshold, int(qs[-1]))
    i = int(hits[0])
    prev_q = int(qs[i - 1]) if i > 0 else None
    prev_info = float(infos[i - 1]) if i > 0 else None
    return GridQmin(target_ps, threshold, int(qs[i]), float(infos[i]),
                    prev_q, prev_info)
