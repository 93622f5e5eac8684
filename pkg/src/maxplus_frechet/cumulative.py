"""Mass space <-> cumulative space.

A table ``F`` maps to its cumulative array ``D F D^T`` (2-D running sums);
a marginal ``p`` maps to ``D p`` (running sums).  ``D`` itself is only built
by :func:`d_matrix` for test oracles; everything else uses prefix sums.

In exact mode every container stores integer numerators over the common
denominator ``mode.scale``, so the hot loops run on Python/numpy integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import EXACT, NumericMode, as_mode, ext
from .matrix import ShapeMismatchError, TropicalMatrix, m_eq, m_odot, ones

_INT64_SAFE = 2**62


class NegativeMassError(ValueError):
    """Raised when an array has a negative cell where masses are required."""


def exact_array(ints) -> np.ndarray:
    """Integer array as int64 when sums cannot overflow, else Python ints."""
    arr = np.asarray(ints, dtype=object)
    if arr.size == 0:
        return arr.astype(np.int64)
    biggest = max(abs(int(x)) for x in arr.flat)
    if biggest * (arr.size + 4) < _INT64_SAFE:
        return arr.astype(np.int64)
    return arr


def to_scaled(data, mode=None) -> tuple[np.ndarray, NumericMode]:
    """Convert numbers or numeric strings to a stored array plus its mode.

    Exact mode picks the least common denominator (a multiple of
    ``mode.scale``) and returns integer numerators.
    """
    mode = as_mode(mode)
    raw = np.asarray(data, dtype=object)
    if not mode.is_exact:
        flat = [ext(x, mode) for x in raw.flat]
        arr = np.array(flat, dtype=np.float64).reshape(raw.shape)
        if not np.all(np.isfinite(arr)):
            raise ValueError("masses must be finite")
        return arr, mode
    scalars = [ext(x, mode) for x in raw.flat]
    if any(isinstance(x, float) for x in scalars):
        raise ValueError("masses must be finite")
    fracs = [Fraction(x) for x in scalars]
    scale = mode.scale
    for f in fracs:
        scale = math.lcm(scale, f.denominator)
    nums = [f.numerator * (scale // f.denominator) for f in fracs]
    arr = exact_array(np.array(nums, dtype=object).reshape(raw.shape))
    return arr, mode.with_scale(scale)


@dataclass(frozen=True, eq=False)
class Grid:
    """A 1-D or 2-D array of finite values with its numeric mode."""

    values: np.ndarray
    mode: NumericMode = EXACT

    @classmethod
    def from_values(cls, data, mode=None, **kwargs):
        arr, mode = to_scaled(data, mode)
        return cls(arr, mode, **kwargs)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def numbers(self) -> np.ndarray:
        """Values as Fractions (exact) or floats."""
        if not self.mode.is_exact:
            return self.values
        scale = self.mode.scale
        out = np.empty(self.values.shape, dtype=object)
        for idx, v in np.ndenumerate(self.values):
            out[idx] = _fraction(int(v), scale)
        return out

    def tolist(self) -> list:
        return self.numbers().tolist()

    def rescaled(self, scale: int):
        """Same values over denominator ``scale`` (a multiple of the current one)."""
        if not self.mode.is_exact or scale == self.mode.scale:
            return self
        factor, rem = divmod(scale, self.mode.scale)
        if rem:
            raise ValueError(f"scale {scale} is not a multiple of {self.mode.scale}")
        vals = exact_array(self.values.astype(object) * factor)
        return self._replace(vals, self.mode.with_scale(scale))

    def _replace(self, values, mode):
        kw = {f: getattr(self, f) for f in self.__dataclass_fields__
              if f not in ("values", "mode")}
        return type(self)(values, mode, **kw)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = align(self, other)
        if a.mode.is_exact:
            return bool(np.array_equal(a.values, b.values))
        return bool(np.all(np.abs(a.values - b.values) <= a.mode.epsilon))

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.tolist()!r}, mode={self.mode.kind})"


def _fraction(num: int, scale: int):
    fr = Fraction(num, scale)
    return fr.numerator if fr.denominator == 1 else fr


def align(*grids: Grid) -> list:
    """Bring grids to one common mode (common denominator in exact mode)."""
    kinds = {g.mode.kind for g in grids}
    if len(kinds) > 1:
        raise ValueError("cannot mix exact and float values")
    if "float" in kinds:
        return list(grids)
    scale = math.lcm(*(g.mode.scale for g in grids))
    return [g.rescaled(scale) for g in grids]


def _nonneg(values: np.ndarray, mode: NumericMode) -> bool:
    if values.size == 0:
        return True
    floor = 0 if mode.is_exact else -mode.epsilon
    return bool(np.all(values >= floor))


@dataclass(frozen=True, eq=False, repr=False)
class MassVector(Grid):
    """Nonnegative marginal vector; ``sigma`` is its total mass."""

    allow_zero: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("a mass vector must be a nonempty 1-D array")
        if not _nonneg(self.values, self.mode):
            raise NegativeMassError(f"negative mass in {self.tolist()}")
        if not self.allow_zero and self.raw_sigma == 0:
            raise ValueError("total mass is zero; pass allow_zero=True to permit it")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def raw_sigma(self):
        total = self.values.sum()
        return int(total) if self.mode.is_exact else float(total)

    @property
    def sigma(self):
        if self.mode.is_exact:
            return _fraction(self.raw_sigma, self.mode.scale)
        return self.raw_sigma


@dataclass(frozen=True, eq=False, repr=False)
class CumulativeVector(Grid):
    """Running sums ``D p``: nonnegative and nondecreasing."""

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("a cumulative vector must be a nonempty 1-D array")
        if not _nonneg(self.values[:1], self.mode) or not _nonneg(np.diff(self.values), self.mode):
            raise NegativeMassError(f"not a cumulative vector: {self.tolist()}")


@dataclass(frozen=True, eq=False, repr=False)
class ContingencyTable(Grid):
    """Nonnegative ``n x m`` array of cell masses."""

    def __post_init__(self):
        if self.values.ndim != 2 or 0 in self.values.shape:
            raise ValueError("a table must be a nonempty 2-D array")
        if not _nonneg(self.values, self.mode):
            raise NegativeMassError("table has a negative cell")

    def row_sums(self) -> np.ndarray:
        return self.values.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.values.sum(axis=0)


@dataclass(frozen=True, eq=False, repr=False)
class CumulativeArray(Grid):
    """2-D running sums ``D F D^T`` of a nonnegative table.

    Nondecreasing along rows and columns, nonnegative, and Monge with an
    implicit zero border.
    """

    def __post_init__(self):
        if self.values.ndim != 2 or 0 in self.values.shape:
            raise ValueError("a cumulative array must be a nonempty 2-D array")
        if not is_monge(Grid(self.values, self.mode)):
            raise NegativeMassError("not a cumulative array (Monge property fails)")

    def corner(self):
        return self.numbers()[-1, -1]


def _grid(x, mode=None) -> Grid:
    return x if isinstance(x, Grid) else Grid.from_values(x, mode)


def d_matrix(n: int) -> np.ndarray:
    """The 0/1 running-sum matrix: ``D[i, j] = 1`` iff ``j <= i``."""
    if n < 1:
        raise ValueError("n must be positive")
    return np.tril(np.ones((n, n), dtype=np.int64))


def cum_vector(p) -> CumulativeVector:
    p = p if isinstance(p, MassVector) else MassVector.from_values(p, allow_zero=True)
    return CumulativeVector(np.cumsum(p.values), p.mode)


def diff_vector(c) -> MassVector:
    c = _grid(c)
    if c.values.ndim != 1:
        raise ValueError("expected a 1-D array")
    masses = np.diff(c.values, prepend=np.zeros(1, dtype=c.values.dtype))
    if not _nonneg(masses, c.mode):
        raise NegativeMassError(f"input is not nondecreasing from zero: {c.tolist()}")
    return MassVector(masses, c.mode, allow_zero=True)


def _prefix2d(values: np.ndarray) -> np.ndarray:
    return values.cumsum(axis=0).cumsum(axis=1)


def cum_array(F) -> CumulativeArray:
    F = F if isinstance(F, ContingencyTable) else ContingencyTable.from_values(F)
    return CumulativeArray(_prefix2d(F.values), F.mode)


def _second_differences(values: np.ndarray) -> np.ndarray:
    padded = np.zeros((values.shape[0] + 1, values.shape[1] + 1), dtype=values.dtype)
    padded[1:, 1:] = values
    return padded[1:, 1:] - padded[:-1, 1:] - padded[1:, :-1] + padded[:-1, :-1]


def diff_array(c, strict: bool = True):
    """Inverse of :func:`cum_array` by inclusion-exclusion with a zero border.

    ``strict`` returns a :class:`ContingencyTable` and raises
    :class:`NegativeMassError` on a negative cell; otherwise a signed
    :class:`Grid` is returned.
    """
    c = _grid(c)
    if c.values.ndim != 2:
        raise ValueError("expected a 2-D array")
    cells = _second_differences(c.values)
    if not strict:
        return Grid(cells, c.mode)
    if not _nonneg(cells, c.mode):
        i, j = np.argwhere(cells < (0 if c.mode.is_exact else -c.mode.epsilon))[0]
        raise NegativeMassError(f"negative cell at ({i}, {j})")
    if not c.mode.is_exact:
        cells = np.maximum(cells, 0.0)
    return ContingencyTable(cells, c.mode)


def is_monge(c) -> bool:
    """Check ``c[i,j] + c[i+1,j+1] >= c[i,j+1] + c[i+1,j]`` on every 2x2 block,
    including the blocks that touch the implicit zero row and column."""
    c = _grid(c)
    vals = c.values
    padded = np.zeros((vals.shape[0] + 1, vals.shape[1] + 1), dtype=vals.dtype)
    padded[1:, 1:] = vals
    diag = padded[:-1, :-1] + padded[1:, 1:]
    anti = padded[:-1, 1:] + padded[1:, :-1]
    slack = 0 if c.mode.is_exact else c.mode.epsilon
    return bool(np.all(diag >= anti - slack))


def d_order_violation(A, B):
    """First index where ``cum(A) > cum(B)``, or None when ``A`` precedes ``B``."""
    A, B = align(_grid(A), _grid(B))
    if A.shape != B.shape:
        raise ShapeMismatchError(f"tables of shapes {A.shape} and {B.shape}")
    slack = 0 if A.mode.is_exact else A.mode.epsilon
    bad = _prefix2d(A.values) > _prefix2d(B.values) + slack
    if not bad.any():
        return None
    i, j = np.argwhere(bad)[0]
    return int(i), int(j)


def d_order_le(A, B) -> bool:
    """``A`` precedes ``B`` iff every 2-D running sum of ``A`` is at most that of ``B``."""
    return d_order_violation(A, B) is None


def lemma1_check(U, mode=None) -> bool:
    """Row sums of ``U`` equal the max-plus product of ``U D^T`` with the unit vector.

    Holds whenever ``U`` is nonnegative, because running sums along a row
    are then nondecreasing and the last one is the maximum.
    """
    U = _grid(U, mode)
    row_sums = U.values.sum(axis=1)
    running = np.cumsum(U.values, axis=1)  # U D^T
    m = U.shape[1]
    lhs = TropicalMatrix(row_sums.reshape(-1, 1), U.mode)
    rhs = m_odot(TropicalMatrix(running, U.mode), ones(m, 1, U.mode))
    return m_eq(lhs, rhs)
