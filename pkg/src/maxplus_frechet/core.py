"""Scalars of the completed max-plus semiring.

Values are plain Python numbers: finite entries are ``int``/``Fraction``
(exact mode) or ``float`` (float mode), and the two infinite elements are
the float sentinels ``BOTTOM = -inf`` and ``TOP = +inf``.  Keeping scalars
as numbers lets the same helpers run on Python scalars and on numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Union

import numpy as np

ExtendedTropical = Union[int, Fraction, float]

BOTTOM: float = -math.inf
TOP: float = math.inf
ZERO = BOTTOM  # neutral for oplus
ONE = 0  # neutral for odot

DEFAULT_EPSILON = 1e-9


class InfiniteInverseError(ArithmeticError):
    """Raised when inverting BOTTOM or TOP."""


@dataclass(frozen=True)
class NumericMode:
    """How finite values are stored and compared.

    ``exact`` keeps rationals; containers of masses store integer numerators
    over a common ``scale``.  ``float`` compares with absolute tolerance
    ``epsilon``.
    """

    kind: str = "exact"
    scale: int = 1
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.kind not in ("exact", "float"):
            raise ValueError(f"unknown numeric mode {self.kind!r}")
        if self.scale < 1 or int(self.scale) != self.scale:
            raise ValueError(f"scale must be a positive integer, got {self.scale!r}")
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon!r}")

    @classmethod
    def exact(cls, scale: int = 1) -> "NumericMode":
        return cls("exact", scale=scale)

    @classmethod
    def floating(cls, epsilon: float = DEFAULT_EPSILON) -> "NumericMode":
        return cls("float", epsilon=epsilon)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    def with_scale(self, scale: int) -> "NumericMode":
        return NumericMode(self.kind, scale=scale, epsilon=self.epsilon)

    def eq(self, a, b) -> bool:
        if self.is_exact or math.isinf(a) or math.isinf(b):
            return a == b
        return abs(a - b) <= self.epsilon

    def le(self, a, b) -> bool:
        if self.is_exact or math.isinf(a) or math.isinf(b):
            return a <= b
        return a <= b + self.epsilon


EXACT = NumericMode.exact()
FLOAT = NumericMode.floating()


def as_mode(mode) -> NumericMode:
    """Accept a NumericMode, ``"exact"``/``"float"`` or None (exact)."""
    if mode is None:
        return EXACT
    if isinstance(mode, NumericMode):
        return mode
    if mode == "exact":
        return EXACT
    if mode == "float":
        return FLOAT
    raise ValueError(f"unknown numeric mode {mode!r}")


_INF_WORDS = {"+inf": TOP, "inf": TOP, "top": TOP, "-inf": BOTTOM, "bottom": BOTTOM}


def ext(x, mode=None) -> ExtendedTropical:
    """Build a validated scalar from a number or a string.

    Strings ``"-inf"``/``"+inf"`` map to BOTTOM/TOP; decimal and ``a/b``
    strings are parsed exactly in exact mode.  NaN is rejected.
    """
    mode = as_mode(mode)
    if isinstance(x, str):
        word = x.strip().lower()
        if word in _INF_WORDS:
            return _INF_WORDS[word]
        if word in ("nan", "+nan", "-nan"):
            raise ValueError("NaN is not a tropical scalar")
        x = Fraction(word) if mode.is_exact else float(word)
    if isinstance(x, (bool, np.bool_)) or not isinstance(x, (Real, np.number)):
        raise TypeError(f"cannot interpret {x!r} as a tropical scalar")
    if isinstance(x, (float, np.floating)):
        if math.isnan(x):
            raise ValueError("NaN is not a tropical scalar")
        if math.isinf(x):
            return TOP if x > 0 else BOTTOM
    if not mode.is_exact:
        return float(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    fr = x if isinstance(x, Rational) else Fraction(float(x))
    fr = Fraction(fr)
    return fr.numerator if fr.denominator == 1 else fr


def t_oplus(a, b):
    return a if a >= b else b


def t_wedge(a, b):
    return a if a <= b else b


def t_odot(a, b):
    if a == BOTTOM or b == BOTTOM:
        return BOTTOM
    if a == TOP or b == TOP:
        return TOP
    return a + b


def t_ldiv(a, b):
    """``a \\ b``: the greatest x with ``a (x) x <= b``."""
    if a == BOTTOM:
        return TOP
    if a == TOP:
        return TOP if b == TOP else BOTTOM
    if b == TOP:
        return TOP
    if b == BOTTOM:
        return BOTTOM
    return b - a


def t_rdiv(b, a):
    """``b / a``: the greatest x with ``x (x) a <= b``."""
    return t_ldiv(a, b)


def t_inv(a):
    if a == BOTTOM or a == TOP:
        raise InfiniteInverseError(f"{a} has no multiplicative inverse")
    return -a


def t_le(a, b, mode=None) -> bool:
    return as_mode(mode).le(a, b)


# Array forms. They accept float64 arrays or object arrays holding
# int/Fraction/+-inf and follow the same conventions as the scalar forms.

def v_oplus(a, b):
    return np.maximum(a, b)


def v_wedge(a, b):
    return np.minimum(a, b)


def v_odot(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    with np.errstate(invalid="ignore"):
        total = a + b
    return np.where((a == BOTTOM) | (b == BOTTOM), BOTTOM, total)


def v_ldiv(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    with np.errstate(invalid="ignore"):
        out = b - a
    out = np.where(b == TOP, TOP, out)
    out = np.where(a == TOP, np.where(b == TOP, TOP, BOTTOM), out)
    return np.where(a == BOTTOM, TOP, out)


def v_inv(a):
    a = np.asarray(a)
    if np.any((a == BOTTOM) | (a == TOP)):
        raise InfiniteInverseError("infinite entries have no multiplicative inverse")
    return -a
