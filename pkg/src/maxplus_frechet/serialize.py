"""Text forms of numbers, marginals, tables and tropical matrices."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .cumulative import Grid


def format_number(x, exact: bool = True):
    """Exact values become strings (decimal when terminating, else ``a/b``);
    float values stay floats.  Infinities become ``"+inf"``/``"-inf"``."""
    if isinstance(x, float) and math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    if not exact:
        return float(x)
    fr = Fraction(x)
    den = fr.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{fr.numerator}/{fr.denominator}"
    digits = max(twos, fives)
    scaled = fr.numerator * 10**digits // fr.denominator
    if digits == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def format_array(values, exact: bool = True):
    arr = np.asarray(values, dtype=object)
    if arr.ndim == 0:
        return format_number(arr.item(), exact)
    return [format_array(v, exact) for v in arr]


def grid_to_json(g: Grid):
    return format_array(g.numbers(), g.mode.is_exact)


def tropical_to_json(A):
    return format_array(A.entries, A.mode.is_exact)


def instance_to_json(inst) -> dict:
    return {"p": grid_to_json(inst.p), "q": grid_to_json(inst.q)}

