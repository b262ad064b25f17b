"""Conditional Renyi information of X and Y given Z, and its rivals.

The preferred quantity here is the log-expectation form

    I_alpha(X;Y|Z) = (alpha/(alpha-1)) log E_{YZ} <p_{X|YZ} || p_{X|Z}>_alpha

which equals the minimum over laws Q_{YZ} of the divergence of P_{XYZ}
from P_{X|Z} Q_{YZ}.  The competing definitions obtained by minimizing
that divergence over Q_Z only, over Q_{Y|Z} only, or not at all are also
implemented; they differ in which of consistency, uniform expansion and
data processing they satisfy, and ``compare_definitions`` evaluates all
four on one joint.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.special import logsumexp

from .prob import Joint2, Joint3, Pmf
from .renyi import LogBase, Order, _log, _require_renyi, _scale, alpha_divergence

# Slack allowed when checking the ordering chain among the definitions.
ORDERING_TOL = 1e-10


class DefinitionTag(enum.Enum):
    """Which factors of the reference law are minimized over.

    The three bits stand for (Q_{X|Z}, Q_{Y|Z}, Q_Z); definitions that
    minimize over the X-side factor are obtained from D010/D011 by swapping
    the X and Y axes (see :func:`swap_xy`) and have no tags of their own.
    """

    D000 = "000"
    D001 = "001"
    D010 = "010"
    D011 = "011"


def _shannon_cond_mi_nats(p: np.ndarray) -> float:
    """Shannon I(X;Y|Z) of a 3-axis table, in nats."""
    lp = _log(p)
    lxz = _log(p.sum(axis=1))
    lyz = _log(p.sum(axis=0))
    lz = _log(p.sum(axis=(0, 1)))
    mask = p > 0.0
    with np.errstate(invalid="ignore"):
        ratio = (lp + lz[None, None, :]
                 - lxz[:, None, :] - lyz[None, :, :])
    return float(np.sum(p[mask] * ratio[mask]))


def _cond_log_terms(j: Joint3, alpha: float) -> np.ndarray:
    """Per-(y, z) values of ln( p_yz * <p_{X|yz} || p_{X|z}>_alpha ).

    Softmaxing these gives the minimizing law over (Y, Z); their
    log-sum-exp times alpha/(alpha-1) is the conditional information.
    """
    p = j.probs
    lp = _log(p)
    lxz = _log(p.sum(axis=1))
    lz = _log(p.sum(axis=(0, 1)))
    with np.errstate(invalid="ignore"):
        inner = np.where(p > 0.0,
                         alpha * lp + (1.0 - alpha) * lxz[:, None, :],
                         -np.inf)
        terms = logsumexp(inner, axis=0) / alpha \
            - (1.0 - alpha) / alpha * lz[None, :]
    terms[j.probs.sum(axis=0) <= 0.0] = -np.inf
    return terms


def cond_alpha_info(j: Joint3, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Conditional information of order alpha of X and Y given Z.

    Axes are (X, Y, Z); zero-mass (y, z) atoms are skipped.  The Shannon
    limit is the ordinary conditional mutual information.
    """
    if a.is_shannon:
        return max(_shannon_cond_mi_nats(j.probs), 0.0) * _scale(base)
    alpha = a.alpha
    val = alpha / (alpha - 1.0) * float(logsumexp(_cond_log_terms(j, alpha)))
    return max(val, 0.0) * _scale(base)


def cond_qstar(j: Joint3, a: Order) -> Joint2:
    """The law over (Y, Z) attaining the conditional-information minimum."""
    alpha = _require_renyi(a, "minimizer")
    terms = _cond_log_terms(j, alpha)
    return Joint2(np.exp(terms - logsumexp(terms)))


def _product_reference(p: np.ndarray) -> np.ndarray:
    """The table p_{x|z} p_{y|z} p_z, with null-z slices set to zero."""
    pxz = p.sum(axis=1)
    pyz = p.sum(axis=0)
    pz = p.sum(axis=(0, 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        ref = pxz[:, None, :] * pyz[None, :, :] / pz[None, None, :]
    ref[:, :, pz <= 0.0] = 0.0
    return ref


def cond_info_000(j: Joint3, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Divergence of the joint from p_{x|z} p_{y|z} p_z, no minimization."""
    ref = _product_reference(j.probs)
    return alpha_divergence(Pmf(j.probs.ravel()), Pmf(ref.ravel()), a, base)


def cond_info_001(j: Joint3, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Variant minimizing over Q_Z only:
    ``(alpha/(alpha-1)) log E_Z <p_{XY|Z} || p_{X|Z} p_{Y|Z}>_alpha``.

    Closed form; not consistent with the unconditional information when
    Z is trivial (it degrades to the divergence from the product law).
    """
    if a.is_shannon:
        return max(_shannon_cond_mi_nats(j.probs), 0.0) * _scale(base)
    alpha = a.alpha
    p = j.probs
    lp = _log(p)
    lxz = _log(p.sum(axis=1))
    lyz = _log(p.sum(axis=0))
    lz = _log(p.sum(axis=(0, 1)))
    with np.errstate(invalid="ignore"):
        inner = np.where(p > 0.0,
                         alpha * lp
                         + (1.0 - alpha) * (lxz[:, None, :] + lyz[None, :, :]),
                         -np.inf)
        terms = logsumexp(inner, axis=(0, 1)) / alpha \
            + 2.0 * (alpha - 1.0) / alpha * lz
    terms[p.sum(axis=(0, 1)) <= 0.0] = -np.inf
    val = alpha / (alpha - 1.0) * float(logsumexp(terms))
    return max(val, 0.0) * _scale(base)


def cond_info_010(j: Joint3, a: Order, base: LogBase = LogBase.BITS) -> float:
    """Variant minimizing over Q_{Y|Z} only:
    ``(1/(alpha-1)) log E_Z ( E_{Y|Z} <p_{X|YZ} || p_{X|Z}>_alpha )^alpha``.

    Closed form and consistent (trivial Z reduces it to the unconditional
    information), but it fails the uniform expansion identity.
    """
    if a.is_shannon:
        return max(_shannon_cond_mi_nats(j.probs), 0.0) * _scale(base)
    alpha = a.alpha
    p = j.probs
    lz = _log(p.sum(axis=(0, 1)))
    # ln( p_{y|z} <...> ) differs from the joint-weighted terms by ln p_z.
    with np.errstate(invalid="ignore"):
        terms = _cond_log_terms(j, alpha) - lz[None, :]
    terms[p.sum(axis=0) <= 0.0] = -np.inf
    inner = logsumexp(terms, axis=0)
    total = np.where(lz > -np.inf, lz + alpha * inner, -np.inf)
    val = float(logsumexp(total)) / (alpha - 1.0)
    return max(val, 0.0) * _scale(base)


def swap_xy(j: Joint3) -> Joint3:
    """Exchange the roles of X and Y, realizing the axis-swapped variants."""
    return Joint3(np.transpose(j.probs, (1, 0, 2)))


_DISPATCH = {
    DefinitionTag.D000: cond_info_000,
    DefinitionTag.D001: cond_info_001,
    DefinitionTag.D010: cond_info_010,
    DefinitionTag.D011: cond_alpha_info,
}


def cond_info_by_tag(j: Joint3, tag: DefinitionTag, a: Order,
                     base: LogBase = LogBase.BITS) -> float:
    return _DISPATCH[tag](j, a, base)


@dataclass(frozen=True)
class ComparisonReport:
    """All four definition values on one joint, plus the ordering check.

    ``ordering_ok`` states that the minimization chain
    ``i011 <= min(i001, i010) <= i000`` holds within ``ORDERING_TOL``.
    """

    alpha: Order
    i000: float
    i001: float
    i010: float
    i011: float
    ordering_ok: bool

    @property
    def values(self) -> Dict[DefinitionTag, float]:
        return {
            DefinitionTag.D000: self.i000,
            DefinitionTag.D001: self.i001,
            DefinitionTag.D010: self.i010,
            DefinitionTag.D011: self.i011,
        }


def compare_definitions(j: Joint3, a: Order,
                        base: LogBase = LogBase.BITS) -> ComparisonReport:
    """Evaluate every closed-form definition and check their ordering."""
    _require_renyi(a, "definition comparison")
    i000 = cond_info_000(j, a, base)
    i001 = cond_info_001(j, a, base)
    i010 = cond_info_010(j, a, base)
    i011 = cond_alpha_info(j, a, base)
    ok = (i011 <= min(i001, i010) + ORDERING_TOL
          and min(i001, i010) <= i000 + ORDERING_TOL)
    return ComparisonReport(alpha=a, i000=i000, i001=i001, i010=i010,
                            i011=i011, ordering_ok=bool(ok))
