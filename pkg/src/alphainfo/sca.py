"""Hamming-weight leakage channel, Monte-Carlo information estimates, and
the maximum-likelihood attack used to validate the success-rate ceiling.

The leakage of one trace is ``Y = popcount(S(T xor K)) + N`` with known
uniform text T, uniform secret key K over M values, byte permutation S and
Gaussian noise N.  Estimates of the conditional information between key
and leak vector given the texts only ever need the discrete key posterior,
so the Gaussian densities cancel out of every computation here.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from . import kernels
from .fano import PS_TOL, invert_success_bound
from .prob import Pmf
from .renyi import Order

_LN2 = math.log(2.0)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

# FIPS-197 byte substitution table.
AES_SBOX = (
    0x63, 0x7C, 0x77, 0x7B, 0xF2, 0x6B, 0x6F, 0xC5, 0x30, 0x01, 0x67, 0x2B,
    0xFE, 0xD7, 0xAB, 0x76, 0xCA, 0x82, 0xC9, 0x7D, 0xFA, 0x59, 0x47, 0xF0,
    0xAD, 0xD4, 0xA2, 0xAF, 0x9C, 0xA4, 0x72, 0xC0, 0xB7, 0xFD, 0x93, 0x26,
    0x36, 0x3F, 0xF7, 0xCC, 0x34, 0xA5, 0xE5, 0xF1, 0x71, 0xD8, 0x31, 0x15,
    0x04, 0xC7, 0x23, 0xC3, 0x18, 0x96, 0x05, 0x9A, 0x07, 0x12, 0x80, 0xE2,
    0xEB, 0x27, 0xB2, 0x75, 0x09, 0x83, 0x2C, 0x1A, 0x1B, 0x6E, 0x5A, 0xA0,
    0x52, 0x3B, 0xD6, 0xB3, 0x29, 0xE3, 0x2F, 0x84, 0x53, 0xD1, 0x00, 0xED,
    0x20, 0xFC, 0xB1, 0x5B, 0x6A, 0xCB, 0xBE, 0x39, 0x4A, 0x4C, 0x58, 0xCF,
    0xD0, 0xEF, 0xAA, 0xFB, 0x43, 0x4D, 0x33, 0x85, 0x45, 0xF9, 0x02, 0x7F,
    0x50, 0x3C, 0x9F, 0xA8, 0x51, 0xA3, 0x40, 0x8F, 0x92, 0x9D, 0x38, 0xF5,
    0xBC, 0xB6, 0xDA, 0x21, 0x10, 0xFF, 0xF3, 0xD2, 0xCD, 0x0C, 0x13, 0xEC,
    0x5F, 0x97, 0x44, 0x17, 0xC4, 0xA7, 0x7E, 0x3D, 0x64, 0x5D, 0x19, 0x73,
    0x60, 0x81, 0x4F, 0xDC, 0x22, 0x2A, 0x90, 0x88, 0x46, 0xEE, 0xB8, 0x14,
    0xDE, 0x5E, 0x0B, 0xDB, 0xE0, 0x32, 0x3A, 0x0A, 0x49, 0x06, 0x24, 0x5C,
    0xC2, 0xD3, 0xAC, 0x62, 0x91, 0x95, 0xE4, 0x79, 0xE7, 0xC8, 0x37, 0x6D,
    0x8D, 0xD5, 0x4E, 0xA9, 0x6C, 0x56, 0xF4, 0xEA, 0x65, 0x7A, 0xAE, 0x08,
    0xBA, 0x78, 0x25, 0x2E, 0x1C, 0xA6, 0xB4, 0xC6, 0xE8, 0xDD, 0x74, 0x1F,
    0x4B, 0xBD, 0x8B, 0x8A, 0x70, 0x3E, 0xB5, 0x66, 0x48, 0x03, 0xF6, 0x0E,
    0x61, 0x35, 0x57, 0xB9, 0x86, 0xC1, 0x1D, 0x9E, 0xE1, 0xF8, 0x98, 0x11,
    0x69, 0xD9, 0x8E, 0x94, 0x9B, 0x1E, 0x87, 0xE9, 0xCE, 0x55, 0x28, 0xDF,
    0x8C, 0xA1, 0x89, 0x0D, 0xBF, 0xE6, 0x42, 0x68, 0x41, 0x99, 0x2D, 0x0F,
    0xB0, 0x54, 0xBB, 0x16,
)

# PRESENT cipher substitution nibble, the standard published 4-bit S-box.
SBOX_4BIT = (0xC, 0x5, 0x6, 0xB, 0x9, 0x0, 0xA, 0xD,
             0x3, 0xE, 0xF, 0x8, 0x4, 0x7, 0x1, 0x2)

# Fixed 2-bit bijection for the smallest desk-scale runs.
SBOX_2BIT = (2, 0, 3, 1)

_SBOXES = {2: SBOX_2BIT, 4: SBOX_4BIT, 8: AES_SBOX}


class EmptyPosteriorError(RuntimeError):
    """No key is consistent with noiseless observations."""


def hamming_weight(word: int) -> int:
    """Number of set bits of a nonnegative integer."""
    word = int(word)
    if word < 0:
        raise ValueError("hamming weight of a negative value is undefined")
    return word.bit_count()


def aes_sbox(byte: int) -> int:
    """AES byte substitution; input must be in [0, 256)."""
    if not 0 <= int(byte) < 256:
        raise ValueError(f"S-box input out of range: {byte!r}")
    return AES_SBOX[int(byte)]


def reduced_sbox(word: int, bits: int) -> int:
    """Reduced-width substitution for desk-scale models (2 or 4 bits)."""
    if bits not in (2, 4):
        raise ValueError(f"reduced S-box width must be 2 or 4, got {bits!r}")
    table = _SBOXES[bits]
    if not 0 <= int(word) < len(table):
        raise ValueError(f"S-box input out of range: {word!r}")
    return table[int(word)]


def sbox_for_bits(bits: int) -> tuple:
    """The fixed substitution table for a word width of 2, 4 or 8 bits."""
    try:
        return _SBOXES[bits]
    except KeyError:
        raise ValueError(f"no S-box for {bits!r}-bit words") from None


@dataclass(frozen=True, eq=False)
class LeakageModel:
    """Hamming-weight leakage of an S-box output, plus Gaussian noise.

    ``sbox`` must be a bijection over ``{0, ..., M-1}`` with M a power of
    two; ``sigma`` is the noise standard deviation in Hamming-weight units.
    """

    sbox: np.ndarray
    sigma: float

    def __post_init__(self):
        table = np.asarray(self.sbox, dtype=np.int64)
        m = table.shape[0]
        if table.ndim != 1 or m < 2 or m & (m - 1):
            raise ValueError("S-box length must be a power of two >= 2")
        if not np.array_equal(np.sort(table), np.arange(m)):
            raise ValueError("S-box must be a bijection over {0..M-1}")
        if not self.sigma >= 0.0:
            raise ValueError(f"noise level must be >= 0, got {self.sigma!r}")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "sbox", table)
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def key_cardinality(self) -> int:
        return self.sbox.shape[0]

    @property
    def bits_per_word(self) -> int:
        return self.key_cardinality.bit_length() - 1

    @cached_property
    def hw_table(self) -> np.ndarray:
        """(M, M) uint8 table of noise-free leaks, indexed [text, key]."""
        m = self.key_cardinality
        popcount = np.array([v.bit_count() for v in range(m)], dtype=np.uint8)
        xor = np.bitwise_xor.outer(np.arange(m), np.arange(m))
        table = popcount[self.sbox[xor]]
        table.flags.writeable = False
        return table

    @classmethod
    def aes(cls, sigma: float) -> "LeakageModel":
        return cls(np.array(AES_SBOX), sigma)

    @classmethod
    def reduced(cls, sigma: float, bits: int = 4) -> "LeakageModel":
        if bits not in (2, 4):
            raise ValueError("reduced model supports 2- or 4-bit words")
        return cls(np.array(_SBOXES[bits]), sigma)

    @classmethod
    def for_bits(cls, bits: int, sigma: float) -> "LeakageModel":
        return cls(np.array(sbox_for_bits(bits)), sigma)


@dataclass(frozen=True, eq=False)
class TraceBatch:
    """One simulated acquisition: q texts, q leaks, and the secret key."""

    texts: np.ndarray
    leaks: np.ndarray
    true_key: int

    def __post_init__(self):
        texts = np.asarray(self.texts, dtype=np.int64)
        leaks = np.asarray(self.leaks, dtype=np.float64)
        if texts.ndim != 1 or leaks.shape != texts.shape:
            raise ValueError("texts and leaks must be equal-length vectors")
        texts.flags.writeable = False
        leaks.flags.writeable = False
        object.__setattr__(self, "texts", texts)
        object.__setattr__(self, "leaks", leaks)
        object.__setattr__(self, "true_key", int(self.true_key))

    @property
    def q(self) -> int:
        return self.texts.shape[0]


@dataclass(frozen=True)
class EstimateResult:
    """Monte-Carlo estimate of the key/leak conditional information."""

    q: int
    alpha: Order
    info_bits: float
    n_samples: int
    std_error: float
    seed: Optional[int]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _seed_entropy(seed: SeedLike) -> Optional[int]:
    if isinstance(seed, np.random.SeedSequence):
        entropy = seed.entropy
        return int(entropy) if isinstance(entropy, int) else None
    if isinstance(seed, (int, np.integer)):
        return int(seed)
    return None


def simulate_batch(model: LeakageModel, q: int, seed: SeedLike) -> TraceBatch:
    """Draw a key, q uniform texts, and their noisy leaks."""
    if q < 0:
        raise ValueError("trace count must be nonnegative")
    rng = _rng(seed)
    m = model.key_cardinality
    key = int(rng.integers(m))
    texts = rng.integers(0, m, size=q, dtype=np.int64)
    noise = rng.normal(0.0, model.sigma, size=q)
    leaks = model.hw_table[texts, key].astype(np.float64) + noise
    return TraceBatch(texts=texts, leaks=leaks, true_key=key)


def key_posterior(model: LeakageModel, texts, leaks) -> Pmf:
    """Posterior over keys given observed (text, leak) pairs.

    Uniform prior; Gaussian likelihood normalized in the log domain.  With
    zero noise the posterior is uniform over the keys exactly reproducing
    the observed leaks, and an inconsistent observation set raises
    :class:`EmptyPosteriorError`.
    """
    texts = np.asarray(texts, dtype=np.int64)
    leaks = np.asarray(leaks, dtype=np.float64)
    if texts.ndim != 1 or leaks.shape != texts.shape:
        raise ValueError("texts and leaks must be equal-length vectors")
    m = model.key_cardinality
    if texts.size and (texts.min() < 0 or texts.max() >= m):
        raise ValueError("text value out of range for this model")
    if model.sigma == 0.0:
        predicted = model.hw_table[texts, :]
        consistent = np.all(predicted == leaks[:, None], axis=0)
        count = int(consistent.sum())
        if count == 0:
            raise EmptyPosteriorError(
                "empty posterior: no key matches the noiseless observations")
        return Pmf(consistent.astype(np.float64) / count)
    ll = kernels.loglik_matrix(texts[None, :], leaks[None, :],
                               model.hw_table, model.sigma)[0]
    return Pmf(np.exp(ll - logsumexp(ll)))


def _chunk_size(m: int, q: int) -> int:
    # Keep the per-chunk working set around 32 MiB of float64.
    return max(1, 4_194_304 // max(m, q, 1))


def _draw_experiments(model: LeakageModel, q: int, n: int,
                      rng: np.random.Generator):
    m = model.key_cardinality
    keys = rng.integers(0, m, size=n, dtype=np.int64)
    texts = rng.integers(0, m, size=(n, q), dtype=np.int64)
    noise = rng.normal(0.0, model.sigma, size=(n, q))
    leaks = model.hw_table[texts, keys[:, None]].astype(np.float64) + noise
    return keys, texts, leaks


def estimate_cond_info(model: LeakageModel, q: int, a: Order,
                       n_samples: int, seed: SeedLike) -> EstimateResult:
    """Monte-Carlo estimate (in bits) of the order-alpha information
    between the key and q noisy leaks, given the texts.

    Each sample draws a fresh (key, texts, noise) experiment and scores the
    key posterior against the uniform prior; the outer log is applied to
    the sample mean and the standard error follows by the delta method.
    The Shannon path averages per-sample log-likelihood ratios instead.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 Monte-Carlo samples")
    if q < 0:
        raise ValueError("trace count must be nonnegative")
    if not model.sigma > 0.0:
        raise ValueError(
            "estimator requires sigma > 0; use a tiny sigma for the "
            "noiseless limit")
    m = model.key_cardinality
    rng = _rng(seed)
    keys, texts, leaks = _draw_experiments(model, q, n_samples, rng)

    stats = np.empty(n_samples)
    chunk = _chunk_size(m, q)
    ln_m = math.log(m)
    alpha = None if a.is_shannon else a.alpha
    for lo in range(0, n_samples, chunk):
        hi = min(lo + chunk, n_samples)
        ll = kernels.loglik_matrix(texts[lo:hi], leaks[lo:hi],
                                   model.hw_table, model.sigma)
        lse1 = logsumexp(ll, axis=1)
        if alpha is None:
            stats[lo:hi] = ll[np.arange(hi - lo), keys[lo:hi]] - lse1 + ln_m
        else:
            lsea = logsumexp(alpha * ll, axis=1)
            stats[lo:hi] = np.exp((alpha - 1.0) / alpha * ln_m
                                  + lsea / alpha - lse1)

    if alpha is None:
        info_bits = float(stats.mean()) / _LN2
        std_error = float(stats.std(ddof=1)) / math.sqrt(n_samples) / _LN2
    else:
        mean = float(stats.mean())
        se_mean = float(stats.std(ddof=1)) / math.sqrt(n_samples)
        c = alpha / (alpha - 1.0)
        info_bits = c * math.log(mean) / _LN2
        std_error = abs(c) * se_mean / mean / _LN2
    # the true quantity lives in [0, log2 M]; trim float-level excursions
    info_bits = min(max(info_bits, 0.0), math.log2(m))
    return EstimateResult(q=q, alpha=a, info_bits=info_bits,
                          n_samples=n_samples, std_error=std_error,
                          seed=_seed_entropy(seed))


def ml_attack_success(model: LeakageModel, q: int, n_trials: int,
                      seed: SeedLike) -> Tuple[float, float]:
    """Empirical success rate of the maximum-likelihood key guess.

    Each trial simulates a fresh experiment and guesses the key with the
    highest posterior score (ties resolved to the lowest key index).
    Returns ``(ps_hat, stderr)`` with the binomial standard error.
    """
    if n_trials < 1:
        raise ValueError("need at least one attack trial")
    if q < 0:
        raise ValueError("trace count must be nonnegative")
    if not model.sigma > 0.0:
        raise ValueError(
            "attack simulation requires sigma > 0; use a tiny sigma for "
            "the noiseless limit")
    m = model.key_cardinality
    rng = _rng(seed)
    keys, texts, leaks = _draw_experiments(model, q, n_trials, rng)
    wins = 0
    chunk = _chunk_size(m, q)
    for lo in range(0, n_trials, chunk):
        hi = min(lo + chunk, n_trials)
        ll = kernels.loglik_matrix(texts[lo:hi], leaks[lo:hi],
                                   model.hw_table, model.sigma)
        wins += int(np.sum(np.argmax(ll, axis=1) == keys[lo:hi]))
    ps_hat = wins / n_trials
    stderr = math.sqrt(ps_hat * (1.0 - ps_hat) / n_trials)
    return ps_hat, stderr


@dataclass(frozen=True, eq=False)
class BoundCurve:
    """Per-trace-count estimates, inverted ceilings, and attack results.

    ``info_bits`` carries the running maximum of ``info_bits_raw`` over q
    (Monte-Carlo noise can locally decrease an otherwise nondecreasing
    curve); ceilings are inverted from the enforced values.
    """

    qs: np.ndarray
    sigma: float
    key_cardinality: int
    alphas: Tuple[Order, ...]
    info_bits_raw: np.ndarray
    info_stderr: np.ndarray
    info_bits: np.ndarray
    ps_upper: np.ndarray
    ps_empirical: np.ndarray
    emp_stderr: np.ndarray
    n_samples: int
    n_trials: int
    seed: int

    def column(self, a: Order) -> int:
        return self.alphas.index(a)


def _worker_cap() -> int:
    raw = os.environ.get("ALPHAINFO_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        return os.cpu_count() or 1
    return cap


def build_bound_curve(model: LeakageModel, q_grid: Sequence[int],
                      alphas: Sequence[Order], n_samples: int, n_trials: int,
                      seed: int, workers: Optional[int] = None) -> BoundCurve:
    """Estimate the information curve and the attack success over a trace
    grid, and invert each (monotone-enforced) estimate into a ceiling.

    Every grid cell derives its own random stream from the master seed by
    a counter-based split, so results do not depend on the worker count.
    """
    qs = np.asarray(list(q_grid), dtype=np.int64)
    alphas = tuple(alphas)
    if qs.size == 0 or len(alphas) == 0:
        raise ValueError("q grid and alpha list must be nonempty")
    if np.any(qs < 0):
        raise ValueError("trace counts must be nonnegative")
    order = np.argsort(qs, kind="stable")
    qs = qs[order]
    nq, na = qs.size, len(alphas)

    def est_cell(qi: int, ai: int) -> EstimateResult:
        ss = np.random.SeedSequence(seed, spawn_key=(0, qi, ai))
        return estimate_cond_info(model, int(qs[qi]), alphas[ai],
                                  n_samples, ss)

    def atk_cell(qi: int) -> Tuple[float, float]:
        ss = np.random.SeedSequence(seed, spawn_key=(1, qi))
        return ml_attack_success(model, int(qs[qi]), n_trials, ss)

    max_workers = min(_worker_cap() if workers is None else max(1, workers),
                      nq * na + nq)
    info_raw = np.empty((nq, na))
    info_se = np.empty((nq, na))
    ps_emp = np.empty(nq)
    emp_se = np.empty(nq)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            est_futs = {(qi, ai): pool.submit(est_cell, qi, ai)
                        for qi in range(nq) for ai in range(na)}
            atk_futs = {qi: pool.submit(atk_cell, qi) for qi in range(nq)}
            for (qi, ai), fut in est_futs.items():
                res = fut.result()
                info_raw[qi, ai] = res.info_bits
                info_se[qi, ai] = res.std_error
            for qi, fut in atk_futs.items():
                ps_emp[qi], emp_se[qi] = fut.result()
    else:
        for qi in range(nq):
            for ai in range(na):
                res = est_cell(qi, ai)
                info_raw[qi, ai] = res.info_bits
                info_se[qi, ai] = res.std_error
            ps_emp[qi], emp_se[qi] = atk_cell(qi)

    info_mono = np.maximum.accumulate(info_raw, axis=0)
    ps_upper = np.empty((nq, na))
    for ai, a in enumerate(alphas):
        for qi in range(nq):
            ps_upper[qi, ai] = invert_success_bound(
                info_mono[qi, ai], model.key_cardinality, a).ps_upper
    return BoundCurve(qs=qs, sigma=model.sigma,
                      key_cardinality=model.key_cardinality, alphas=alphas,
                      info_bits_raw=info_raw, info_stderr=info_se,
                      info_bits=info_mono, ps_upper=ps_upper,
                      ps_empirical=ps_emp, emp_stderr=emp_se,
                      n_samples=n_samples, n_trials=n_trials, seed=seed)


def bound_slack(curve: BoundCurve, n_sigmas: float = 3.0) -> np.ndarray:
    """Per-(q, alpha) slack of the ceiling check, in probability units.

    Combines the attack's binomial error with the estimate's error pushed
    through the inversion; the ceiling validity check is ``slack >= 0``
    elementwise, i.e. the empirical success never exceeds the ceiling by
    more than ``n_sigmas`` combined standard errors.  The ceiling itself
    is only resolved to the inversion tolerance, which is credited too.
    """
    nq, na = curve.ps_upper.shape
    slack = np.empty((nq, na))
    for ai, a in enumerate(curve.alphas):
        for qi in range(nq):
            up = curve.ps_upper[qi, ai]
            bumped = invert_success_bound(
                curve.info_bits[qi, ai] + curve.info_stderr[qi, ai],
                curve.key_cardinality, a).ps_upper
            combined = math.hypot(curve.emp_stderr[qi], bumped - up)
            slack[qi, ai] = up + n_sigmas * combined + PS_TOL \
                - curve.ps_empirical[qi]
    return slack


def sharpness_gaps(curve: BoundCurve) -> np.ndarray:
    """Per-(q, alpha) gap between the ceiling and the observed attack."""
    return curve.ps_upper - curve.ps_empirical[:, None]
