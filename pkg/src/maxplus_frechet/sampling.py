"""Random instances, tables and tropical matrices for property checks."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import BOTTOM, TOP, as_mode
from .cumulative import ContingencyTable, Grid, MassVector, exact_array
from .frechet import FrechetInstance
from .matrix import TropicalMatrix


def _composition(rng: np.random.Generator, total: int, parts: int, zero_prob: float) -> list[int]:
    """Random nonnegative integers summing to ``total``."""
    weights = rng.random(parts)
    weights[rng.random(parts) < zero_prob] = 0.0
    if weights.sum() == 0:
        weights[rng.integers(parts)] = 1.0
    cuts = np.floor(np.cumsum(weights) / weights.sum() * total).astype(np.int64)
    cuts[-1] = total
    return np.diff(cuts, prepend=0).tolist()


def random_instance(rng: np.random.Generator, max_size: int = 50, *, n=None, m=None,
                    mode=None, zero_prob: float = 0.1, max_scale: int = 1000) -> FrechetInstance:
    """Instance with ``n, m`` uniform in ``[1, max_size]`` and equal total masses.

    Exact masses are multiples of ``1/scale`` with a random ``scale``, so they
    reduce to rationals with assorted denominators.
    """
    mode = as_mode(mode)
    n = int(rng.integers(1, max_size + 1)) if n is None else n
    m = int(rng.integers(1, max_size + 1)) if m is None else m
    if mode.is_exact:
        scale = int(rng.integers(1, max_scale + 1))
        total = int(rng.integers(1, 4 * scale + 1))
        p = _composition(rng, total, n, zero_prob)
        q = _composition(rng, total, m, zero_prob)
        emode = mode.with_scale(scale)
        return FrechetInstance(MassVector(exact_array(p), emode, allow_zero=True),
                               MassVector(exact_array(q), emode, allow_zero=True))
    p = rng.random(n)
    q = rng.random(m)
    q *= p.sum() / q.sum()
    return FrechetInstance(MassVector(p, mode), MassVector(q, mode))


def random_table(rng: np.random.Generator, n: int, m: int, *, mode=None, low: int = 0,
                 high: int = 9, zero_prob: float = 0.3) -> Grid:
    """Integer-valued table over a random scale; negative cells when ``low < 0``.

    Returns a :class:`ContingencyTable` when every cell is nonnegative.
    """
    mode = as_mode(mode)
    cells = rng.integers(low, high + 1, size=(n, m))
    cells[rng.random((n, m)) < zero_prob] = 0
    if mode.is_exact:
        gmode = mode.with_scale(int(rng.integers(1, 20)))
        values = exact_array(cells)
    else:
        gmode = mode
        values = cells * rng.random()
    cls = ContingencyTable if (cells >= 0).all() else Grid
    return cls(values, gmode)


def random_scalar(rng: np.random.Generator, p_inf: float = 0.1, mode=None):
    mode = as_mode(mode)
    u = rng.random()
    if u < p_inf:
        return BOTTOM
    if u < 2 * p_inf:
        return TOP
    num = int(rng.integers(-6, 7))
    if not mode.is_exact:
        return float(num) / 2
    den = int(rng.choice([1, 2, 3]))
    fr = Fraction(num, den)
    return fr.numerator if fr.denominator == 1 else fr


def random_tropical(rng: np.random.Generator, rows: int, cols: int, p_inf: float = 0.1,
                    mode=None) -> TropicalMatrix:
    mode = as_mode(mode)
    arr = np.empty((rows, cols), dtype=object)
    for idx in np.ndindex(rows, cols):
        arr[idx] = random_scalar(rng, p_inf, mode)
    return TropicalMatrix(arr, mode)
