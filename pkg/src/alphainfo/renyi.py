"""Renyi-order information measures on finite distributions.

Conventions used throughout:

* order alpha is either the Shannon limit (alpha -> 1, dispatched to the
  dedicated Shannon formulas) or a positive real != 1;
* powered sums are evaluated as log-sum-exp with max subtraction, so the
  only overflow-prone quantities live in the log domain;
* zero-probability atoms contribute nothing (0^alpha = 0, 0 log 0 = 0);
* a +inf divergence is a legal return value, produced whenever the
  reference distribution fails to dominate for alpha > 1 (or supports are
  disjoint).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.special import logsumexp

from .prob import Channel, Joint2, Pmf

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class Order:
    """Order of a Renyi measure; ``alpha=None`` denotes the Shannon limit.

    The limit is represented explicitly instead of by the number 1 so that
    no formula ever divides by ``alpha - 1`` at the removable singularity.
    """

    alpha: Optional[float] = None

    def __post_init__(self):
        if self.alpha is not None:
            a = float(self.alpha)
            if not math.isfinite(a) or a <= 0.0:
                raise ValueError(f"order must be a positive real, got {self.alpha!r}")
            if a == 1.0:
                raise ValueError("alpha = 1 is the Shannon limit; use Order.shannon()")
            object.__setattr__(self, "alpha", a)

    @property
    def is_shannon(self) -> bool:
        return self.alpha is None

    @classmethod
    def shannon(cls) -> "Order":
        return cls(None)

    @classmethod
    def from_float(cls, a: float) -> "Order":
        """Map a numeric order to an Order, folding 1 onto the Shannon limit."""
        return cls(None) if float(a) == 1.0 else cls(float(a))

    def __str__(self) -> str:
        return "1" if self.is_shannon else f"{self.alpha:g}"


SHANNON = Order.shannon()


class LogBase(enum.Enum):
    """Unit of all returned logarithmic quantities."""

    BITS = "bits"
    NATS = "nats"


def _scale(base: Union[LogBase, str]) -> float:
    if isinstance(base, str):
        base = LogBase(base)
    return 1.0 / _LN2 if base is LogBase.BITS else 1.0


def _log(arr: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(arr)


def _require_renyi(a: Order, what: str) -> float:
    if a.is_shannon:
        raise ValueError(f"{what} undefined at alpha=1")
    return a.alpha


def _log_alpha_norm(logp: np.ndarray, alpha: float) -> float:
    """ln ||p||_alpha from the elementwise ln p (axis-flattened)."""
    return float(logsumexp(alpha * logp)) / alpha


def _log_cross_power(logp: np.ndarray, logq: np.ndarray, alpha: float) -> float:
    """ln <p||q>_alpha = (1/alpha) ln sum p^alpha q^(1-alpha).

    Atoms with p = 0 contribute nothing.  For alpha > 1 a q-null atom
    inside the support of p makes the sum diverge: returns +inf.
    """
    mask = logp > -np.inf
    if not mask.any():
        return -np.inf
    lp, lq = logp[mask], logq[mask]
    if alpha > 1.0 and np.any(np.isneginf(lq)):
        return np.inf
    return float(logsumexp(alpha * lp + (1.0 - alpha) * lq)) / alpha


def _shannon_entropy_nats(arr: np.ndarray) -> float:
    mask = arr > 0.0
    p = arr[mask]
    return float(-np.sum(p * np.log(p)))


def _kl_nats(parr: np.ndarray, qarr: np.ndarray) -> float:
    mask = parr > 0.0
    p, q = parr[mask], qarr[mask]
    if np.any(q <= 0.0):
        return math.inf
    return float(np.sum(p * (np.log(p) - np.log(q))))


def alpha_norm(p: Pmf, a: Order) -> float:
    """The alpha-norm ``(sum_x p(x)^alpha)^(1/alpha)``."""
    alpha = _require_renyi(a, "norm")
    return math.exp(_log_alpha_norm(_log(p.probs), alpha))


def alpha_cross_power(p: Pmf, q: Pmf, a: Order) -> float:
    """The cross power ``(sum_x p(x)^alpha q(x)^(1-alpha))^(1/alpha)``.

    Returns +inf when alpha > 1 and q fails to dominate p.
    """
    alpha = _require_renyi(a, "cross power")
    if p.alphabet_size != q.alphabet_size:
        raise ValueError("distributions live on different alphabets")
    lcp = _log_cross_power(_log(p.probs), _log(q.probs), alpha)
    return math.exp(lcp) if lcp < np.inf else math.inf


def alpha_entropy(p: Pmf, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Renyi entropy ``(alpha/(1-alpha)) log ||p||_alpha`` (Shannon at alpha=1)."""
    if a.is_shannon:
        return _shannon_entropy_nats(p.probs) * _scale(base)
    alpha = a.alpha
    h = alpha / (1.0 - alpha) * _log_alpha_norm(_log(p.probs), alpha)
    # Clip the tiny negative rounding noise a point mass can produce.
    return max(h, 0.0) * _scale(base)


def alpha_divergence(p: Pmf, q: Pmf, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Renyi divergence ``(1/(alpha-1)) log sum p^alpha q^(1-alpha)``.

    Shannon limit is the Kullback-Leibler divergence.  +inf signals a
    support violation (alpha > 1) or disjoint supports.
    """
    if p.probs.shape != q.probs.shape:
        raise ValueError("distributions live on different alphabets")
    if a.is_shannon:
        return _kl_nats(p.probs, q.probs) * _scale(base)
    alpha = a.alpha
    lcp = _log_cross_power(_log(p.probs), _log(q.probs), alpha)
    if math.isinf(lcp):
        return math.inf
    return max(alpha * lcp / (alpha - 1.0), 0.0) * _scale(base)


def cond_alpha_divergence(pyx: Channel, qyx: Channel, px: Pmf, a: Order,
                          base: LogBase = LogBase.BITS) -> float:
    """Conditional divergence of two channels under an input law.

    Defined as the divergence of the composed joints, with the expectation
    over the input taken inside the logarithm:
    ``(1/(alpha-1)) log E_X <p_{Y|X} || q_{Y|X}>_alpha^alpha``.
    """
    if pyx.input_size != px.alphabet_size or qyx.input_size != px.alphabet_size:
        raise ValueError("channel input size does not match the input law")
    if pyx.output_size != qyx.output_size:
        raise ValueError("channels have different output alphabets")
    if a.is_shannon:
        total = 0.0
        for x, w in enumerate(px.probs):
            if w <= 0.0:
                continue
            kl = _kl_nats(pyx.matrix[x], qyx.matrix[x])
            if math.isinf(kl):
                return math.inf
            total += w * kl
        return total * _scale(base)
    alpha = a.alpha
    terms = np.full(px.alphabet_size, -np.inf)
    for x, w in enumerate(px.probs):
        if w <= 0.0:
            continue
        lcp = _log_cross_power(_log(pyx.matrix[x]), _log(qyx.matrix[x]), alpha)
        if lcp == np.inf:
            return math.inf
        terms[x] = math.log(w) + alpha * lcp
    return max(float(logsumexp(terms)) / (alpha - 1.0), 0.0) * _scale(base)


def arimoto_cond_entropy(j: Joint2, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Conditional entropy H_alpha(X|Y) with the expectation over Y inside
    the log: ``(alpha/(1-alpha)) log E_Y ||p_{X|Y}||_alpha``.

    X is the first axis.  Zero-mass y-columns drop out automatically.
    """
    if a.is_shannon:
        h_xy = _shannon_entropy_nats(j.probs)
        h_y = _shannon_entropy_nats(j.probs.sum(axis=0))
        return max(h_xy - h_y, 0.0) * _scale(base)
    alpha = a.alpha
    logp = _log(j.probs)
    # ln( p_y * ||p_{X|y}||_alpha ) reduces to (1/alpha) lse_x(alpha ln p_xy).
    terms = logsumexp(alpha * logp, axis=0) / alpha
    val = alpha / (1.0 - alpha) * float(logsumexp(terms))
    return max(val, 0.0) * _scale(base)


def _sibson_log_terms(j: Joint2, alpha: float) -> np.ndarray:
    """Per-y values of ln( p_y * <p_{X|y} || p_X>_alpha ).

    These are the unnormalized log weights of the minimizing output law;
    their log-sum-exp times alpha/(alpha-1) is the Sibson information.
    """
    logp = _log(j.probs)
    logpx = _log(j.probs.sum(axis=1))
    with np.errstate(invalid="ignore"):
        terms = np.where(j.probs > 0.0,
                         alpha * logp + (1.0 - alpha) * logpx[:, None],
                         -np.inf)
    return logsumexp(terms, axis=0) / alpha


def sibson_info(j: Joint2, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Sibson information of order alpha of X (first axis) from Y.

    ``(alpha/(alpha-1)) log E_Y <p_{X|Y} || p_X>_alpha``; equals the
    minimum over output laws Q of the divergence from P_X Q.  The Shannon
    limit is the ordinary mutual information.
    """
    if a.is_shannon:
        p = j.probs
        lp = _log(p)
        lx = _log(p.sum(axis=1))
        ly = _log(p.sum(axis=0))
        mask = p > 0.0
        with np.errstate(invalid="ignore"):
            ratio = lp - lx[:, None] - ly[None, :]
        val = float(np.sum(p[mask] * ratio[mask]))
        return max(val, 0.0) * _scale(base)
    alpha = a.alpha
    val = alpha / (alpha - 1.0) * float(logsumexp(_sibson_log_terms(j, alpha)))
    return max(val, 0.0) * _scale(base)


def sibson_qstar(j: Joint2, a: Order) -> Pmf:
    """The output law attaining the Sibson minimum.

    Proportional to ``p_y <p_{X|y} || p_X>_alpha`` over y.
    """
    alpha = _require_renyi(a, "minimizer")
    terms = _sibson_log_terms(j, alpha)
    return Pmf(np.exp(terms - logsumexp(terms)))


def binary_alpha_div(p: float, q: float, a: Order,
                     base: LogBase = LogBase.BITS) -> float:
    """Divergence between Bernoulli(p) and Bernoulli(q)."""
    if not 0.0 <= p <= 1.0 or not 0.0 <= q <= 1.0:
        raise ValueError("binary divergence needs p, q in [0, 1]")
    pv = np.array([p, 1.0 - p])
    qv = np.array([q, 1.0 - q])
    if a.is_shannon:
        return _kl_nats(pv, qv) * _scale(base)
    alpha = a.alpha
    lcp = _log_cross_power(_log(pv), _log(qv), alpha)
    if math.isinf(lcp):
        return math.inf
    return max(alpha * lcp / (alpha - 1.0), 0.0) * _scale(base)
