"""Finite discrete probability containers and their algebra.

Everything downstream (entropies, divergences, information measures) works
on these containers.  All probabilities are stored in the linear domain;
powered sums are taken in the log domain by the measure modules.  Objects
are immutable after construction and safe to share between workers.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

# Tolerance for objects built internally (exact arithmetic expected).
MASS_TOL = 1e-9
# Tolerance for user-supplied files; mass is renormalized after the check.
INGEST_MASS_TOL = 1e-6


class InvalidDistributionError(ValueError):
    """Raised when values do not form a valid probability distribution."""


class UndefinedConditionalError(ValueError):
    """Raised when conditioning on a zero-probability event."""


def _validated(values, ndim: int, tol: float) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise InvalidDistributionError(
            f"expected a {ndim}-dimensional table, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidDistributionError("empty probability table")
    if np.any(arr < 0):
        raise InvalidDistributionError("negative probability entry")
    mass = float(arr.sum())
    if abs(mass - 1.0) > tol:
        raise InvalidDistributionError(
            f"total mass {mass!r} deviates from 1 by more than {tol}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over ``{0, ..., alphabet_size - 1}``.

    Parameters
    ----------
    probs : sequence of float
        Nonnegative values summing to 1 within ``tol``.
    """

    probs: np.ndarray
    tol: float = field(default=MASS_TOL, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "probs", _validated(self.probs, 1, self.tol))

    @property
    def alphabet_size(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def uniform(cls, size: int) -> "Pmf":
        return cls(np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, index: int, size: int) -> "Pmf":
        p = np.zeros(size)
        p[index] = 1.0
        return cls(p)


@dataclass(frozen=True, eq=False)
class Joint2:
    """Joint distribution over two variables; axis 0 is X, axis 1 is Y."""

    probs: np.ndarray
    tol: float = field(default=MASS_TOL, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "probs", _validated(self.probs, 2, self.tol))

    @property
    def shape(self) -> tuple:
        return self.probs.shape


@dataclass(frozen=True, eq=False)
class Joint3:
    """Joint distribution over three variables; axes are (X, Y, Z)."""

    probs: np.ndarray
    tol: float = field(default=MASS_TOL, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "probs", _validated(self.probs, 3, self.tol))

    @property
    def shape(self) -> tuple:
        return self.probs.shape


@dataclass(frozen=True, eq=False)
class Channel:
    """Conditional distribution: one output row per input symbol.

    ``matrix[x, y]`` is the probability of output ``y`` given input ``x``;
    every row must be a valid Pmf.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.size == 0:
            raise InvalidDistributionError("channel matrix must be 2-D")
        if np.any(m < 0):
            raise InvalidDistributionError("negative channel entry")
        rows = m.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > MASS_TOL):
            raise InvalidDistributionError("channel row does not sum to 1")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def input_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def output_size(self) -> int:
        return self.matrix.shape[1]

    def row(self, x: int) -> Pmf:
        return Pmf(self.matrix[x])

    @classmethod
    def from_rows(cls, rows: Sequence[Pmf]) -> "Channel":
        return cls(np.stack([r.probs for r in rows]))


Distribution = Union[Pmf, Joint2, Joint3]

_ARITY_TO_TYPE = {1: Pmf, 2: Joint2, 3: Joint3}


def _wrap(arr: np.ndarray) -> Distribution:
    return _ARITY_TO_TYPE[arr.ndim](arr)


def marginal(joint: Union[Joint2, Joint3], drop) -> Distribution:
    """Sum out the given axis (or axes) of a joint distribution.

    ``drop`` is an axis index or tuple of axis indices to remove; at least
    one axis must survive.
    """
    axes = (drop,) if np.isscalar(drop) else tuple(drop)
    ndim = joint.probs.ndim
    for a in axes:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < ndim:
            raise ValueError(f"invalid axis index {a!r} for {ndim}-D joint")
    if len(set(axes)) != len(axes):
        raise ValueError("duplicate axis index")
    if len(axes) >= ndim:
        raise ValueError("cannot drop every axis")
    return _wrap(joint.probs.sum(axis=axes))


def conditional_slice(joint: Union[Joint2, Joint3], given, index) -> Distribution:
    """Distribution of the remaining axes given fixed values on ``given``.

    ``given`` is an axis index or tuple of axis indices, ``index`` the
    corresponding value(s).  Raises :class:`UndefinedConditionalError` when
    the conditioning event has zero probability.
    """
    axes = (given,) if np.isscalar(given) else tuple(given)
    idx = (index,) if np.isscalar(index) else tuple(index)
    ndim = joint.probs.ndim
    if len(axes) != len(idx):
        raise ValueError("given axes and index lengths differ")
    for a in axes:
        if not isinstance(a, (int, np.integer)) or not 0 <= a < ndim:
            raise ValueError(f"invalid axis index {a!r} for {ndim}-D joint")
    if len(set(axes)) != len(axes):
        raise ValueError("duplicate axis index")
    if len(axes) >= ndim:
        raise ValueError("cannot condition on every axis")
    sel = [slice(None)] * ndim
    for a, i in zip(axes, idx):
        sel[a] = i
    section = joint.probs[tuple(sel)]
    mass = float(section.sum())
    if mass <= 0.0:
        raise UndefinedConditionalError(
            f"undefined conditional: event {dict(zip(axes, idx))} has zero mass")
    return _wrap(section / mass)


def compose(input_pmf: Pmf, ch: Channel) -> Joint2:
    """Joint (X, Y) distribution of a source pushed through a channel."""
    if ch.input_size != input_pmf.alphabet_size:
        raise ValueError(
            f"channel expects {ch.input_size} inputs, "
            f"source has {input_pmf.alphabet_size}")
    return Joint2(input_pmf.probs[:, None] * ch.matrix)


_HEADERS = {1: ["x", "p"], 2: ["x", "y", "p"], 3: ["x", "y", "z", "p"]}


def save_distribution(dist: Distribution, path) -> None:
    """Write a distribution as CSV, one row per nonzero atom.

    Header is ``x,p`` / ``x,y,p`` / ``x,y,z,p`` depending on arity; indices
    are 0-based integers and omitted atoms are zero.
    """
    arr = dist.probs
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADERS[arr.ndim])
        for idx in np.argwhere(arr > 0.0):
            writer.writerow([*(int(i) for i in idx), repr(float(arr[tuple(idx)]))])


def load_distribution(path) -> Distribution:
    """Read a distribution CSV written by :func:`save_distribution`.

    Alphabet sizes are inferred from the largest index on each axis.  The
    total mass must be within ``INGEST_MASS_TOL`` of 1 and is renormalized
    exactly afterwards.  Errors mention the offending line number.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InvalidDistributionError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    arity = None
    for n, expected in _HEADERS.items():
        if header == expected:
            arity = n
    if arity is None:
        raise InvalidDistributionError(
            f"{path}: line 1: unrecognized header {header!r}")
    atoms = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != arity + 1:
            raise InvalidDistributionError(
                f"{path}: line {lineno}: expected {arity + 1} fields, got {len(row)}")
        try:
            idx = tuple(int(c) for c in row[:arity])
            p = float(row[arity])
        except ValueError as exc:
            raise InvalidDistributionError(
                f"{path}: line {lineno}: malformed row ({exc})") from None
        if any(i < 0 for i in idx):
            raise InvalidDistributionError(
                f"{path}: line {lineno}: negative index")
        if p < 0:
            raise InvalidDistributionError(
                f"{path}: line {lineno}: negative mass")
        if idx in atoms:
            raise InvalidDistributionError(
                f"{path}: line {lineno}: duplicate atom {idx}")
        atoms[idx] = p
    if not atoms:
        raise InvalidDistributionError(f"{path}: no atoms")
    shape = tuple(max(i[a] for i in atoms) + 1 for a in range(arity))
    arr = np.zeros(shape)
    for idx, p in atoms.items():
        arr[idx] = p
    mass = float(arr.sum())
    if abs(mass - 1.0) > INGEST_MASS_TOL:
        raise InvalidDistributionError(
            f"{path}: total mass {mass!r} deviates from 1 by more than "
            f"{INGEST_MASS_TOL}")
    return _wrap(arr / mass)
