"""Shared generators and brute-force oracles for the test suite."""

import numpy as np
import pytest

from alphainfo import Channel, Joint2, Joint3, Pmf


# ---------------------------------------------------------------------------
# Random objects (Dirichlet mass, optionally with structural zeros)


def random_probs(rng, shape, zeros=0.0):
    x = rng.gamma(1.0, 1.0, size=shape)
    if zeros:
        mask = rng.random(shape) < zeros
        if mask.all():
            mask.flat[int(rng.integers(x.size))] = False
        x = np.where(mask, 0.0, x)
    return x / x.sum()


def random_pmf(rng, n, zeros=0.0) -> Pmf:
    return Pmf(random_probs(rng, n, zeros))


def random_joint2(rng, nx, ny, zeros=0.0) -> Joint2:
    return Joint2(random_probs(rng, (nx, ny), zeros))


def random_joint3(rng, nx, ny, nz, zeros=0.0) -> Joint3:
    return Joint3(random_probs(rng, (nx, ny, nz), zeros))


def random_channel(rng, nin, nout) -> Channel:
    rows = rng.gamma(1.0, 1.0, size=(nin, nout))
    return Channel(rows / rows.sum(axis=1, keepdims=True))


# ---------------------------------------------------------------------------
# Simplex meshes and direct divergence evaluation (grid-search oracles)


def simplex_mesh(cells: int, denom: int) -> np.ndarray:
    """All points of the simplex over `cells` atoms with step 1/denom."""
    comp = np.arange(denom + 1, dtype=np.int32)[:, None]
    for _ in range(cells - 2):
        counts = denom - comp.sum(axis=1) + 1
        parents = np.repeat(np.arange(len(comp)), counts)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        new_col = np.arange(counts.sum(), dtype=np.int32) \
            - np.repeat(starts, counts).astype(np.int32)
        comp = np.hstack([comp[parents], new_col[:, None]])
    last = (denom - comp.sum(axis=1)).astype(np.int32)
    comp = np.hstack([comp, last[:, None]])
    return comp.astype(np.float64) / denom


def snap_to_mesh(point: np.ndarray, denom: int) -> np.ndarray:
    """Nearest mesh point by largest remainder (stays on the simplex)."""
    scaled = np.asarray(point, dtype=np.float64).ravel() * denom
    base = np.floor(scaled).astype(np.int64)
    short = denom - int(base.sum())
    order = np.argsort(scaled - base)[::-1]
    base[order[:short]] += 1
    return base.astype(np.float64) / denom


def mesh_min_divergence(weights: np.ndarray, mesh: np.ndarray,
                        alpha: float) -> float:
    """Minimum over mesh rows q of ``(1/(a-1)) ln sum_c W_c q_c^(1-a)``.

    `weights` carries each reference cell's fixed factors already raised
    to the 1-alpha power, so rows evaluate the defining divergence of the
    minimization being brute-forced (in nats).
    """
    keep = weights > 0.0
    w = weights[keep]
    best = np.inf
    for lo in range(0, mesh.shape[0], 500_000):
        block = mesh[lo:lo + 500_000, keep]
        with np.errstate(divide="ignore"):
            s = np.power(block, 1.0 - alpha) @ w
            d = np.log(s) / (alpha - 1.0)
        best = min(best, float(np.min(d)))
    return best


def direct_alpha_divergence(p: np.ndarray, r: np.ndarray, alpha: float) -> float:
    """Plain evaluation of the order-alpha divergence of two tables, nats."""
    p = np.asarray(p, dtype=np.float64).ravel()
    r = np.asarray(r, dtype=np.float64).ravel()
    mask = p > 0.0
    if alpha > 1.0 and np.any(r[mask] <= 0.0):
        return np.inf
    with np.errstate(divide="ignore"):
        s = float(np.sum(p[mask] ** alpha * r[mask] ** (1.0 - alpha)))
    return np.log(s) / (alpha - 1.0)


# ---------------------------------------------------------------------------
# Markov-chain builders (for the data-processing suites)


def push_through(px: np.ndarray, ch: np.ndarray) -> np.ndarray:
    return px @ ch


def chain_xyz(rng, nx=3, ny=3, nz=3):
    """Random X - Y - Z chain; returns tables (p_xy, p_xz and friends)."""
    p_xy = random_probs(rng, (nx, ny))
    ch_yz = random_channel(rng, ny, nz).matrix
    p_xyz = p_xy[:, :, None] * ch_yz[None, :, :]
    return p_xy, p_xyz.sum(axis=1), p_xyz


def chain_wxyz(rng, nw=3, nx=3, ny=3, nz=3):
    """Random W - X - Y - Z chain; returns (p_xy, p_wz)."""
    p_wx = random_probs(rng, (nw, nx))
    ch_xy = random_channel(rng, nx, ny).matrix
    ch_yz = random_channel(rng, ny, nz).matrix
    p_xy = np.einsum("wx,xy->xy", p_wx, ch_xy)
    p_wz = np.einsum("wx,xy,yz->wz", p_wx, ch_xy, ch_yz)
    return p_xy, p_wz


def conditional_chain_wxyz(rng, nt=3, nw=2, nx=2, ny=2, nz=2):
    """Per-t chains W - X - Y - Z; returns Joint3 tables over (X,Y,T) and
    (W,Z,T) sharing the same T marginal."""
    p_t = random_probs(rng, nt)
    p_xyt = np.empty((nx, ny, nt))
    p_wzt = np.empty((nw, nz, nt))
    for t in range(nt):
        p_xy, p_wz = chain_wxyz(rng, nw, nx, ny, nz)
        p_xyt[:, :, t] = p_t[t] * p_xy
        p_wzt[:, :, t] = p_t[t] * p_wz
    return Joint3(p_xyt), Joint3(p_wzt)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
