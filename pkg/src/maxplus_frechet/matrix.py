"""Dense rectangular matrices over the completed max-plus semiring."""

from __future__ import annotations

import numpy as np

from .core import BOTTOM, ONE, TOP, NumericMode, as_mode, ext, v_ldiv, v_odot


class ShapeMismatchError(ValueError):
    pass


class TropicalMatrix:
    """Immutable ``rows x cols`` matrix.

    Exact matrices hold an object array of int/Fraction/+-inf; float matrices
    hold float64.  Use :meth:`from_rows` to build one from Python data.
    """

    __slots__ = ("entries", "mode")

    def __init__(self, entries: np.ndarray, mode: NumericMode):
        entries = np.asarray(entries)
        if entries.ndim != 2 or 0 in entries.shape:
            raise ValueError(f"expected a nonempty 2-D array, got shape {entries.shape}")
        entries = entries.astype(object if mode.is_exact else np.float64)
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("TropicalMatrix is immutable")

    @classmethod
    def from_rows(cls, rows, mode=None) -> "TropicalMatrix":
        mode = as_mode(mode)
        data = [[ext(x, mode) for x in row] for row in rows]
        if not data or any(len(r) != len(data[0]) for r in data):
            raise ValueError("rows must be nonempty and of equal length")
        arr = np.empty((len(data), len(data[0])), dtype=object)
        for i, row in enumerate(data):
            for j, x in enumerate(row):
                arr[i, j] = x
        return cls(arr, mode)

    @classmethod
    def filled(cls, rows: int, cols: int, value, mode=None) -> "TropicalMatrix":
        mode = as_mode(mode)
        arr = np.empty((rows, cols), dtype=object)
        arr.fill(ext(value, mode))
        return cls(arr, mode)

    @classmethod
    def identity(cls, n: int, mode=None) -> "TropicalMatrix":
        mode = as_mode(mode)
        arr = np.full((n, n), BOTTOM, dtype=object)
        for i in range(n):
            arr[i, i] = ONE
        return cls(arr, mode)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def __getitem__(self, idx):
        return self.entries[idx]

    def tolist(self) -> list[list]:
        return self.entries.tolist()

    def __eq__(self, other):
        if not isinstance(other, TropicalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.entries == other.entries))

    def __hash__(self):
        return hash((self.shape, tuple(self.entries.ravel().tolist())))

    def __repr__(self):
        return f"TropicalMatrix({self.tolist()!r}, mode={self.mode.kind})"


def _same_shape(A: TropicalMatrix, B: TropicalMatrix, op: str):
    if A.shape != B.shape:
        raise ShapeMismatchError(f"{op}: shapes {A.shape} and {B.shape} differ")


def _mode(A: TropicalMatrix, B: TropicalMatrix) -> NumericMode:
    # float wins so that mixing an exact helper matrix into a float computation works
    return B.mode if A.mode.is_exact else A.mode


def m_oplus(A: TropicalMatrix, B: TropicalMatrix) -> TropicalMatrix:
    _same_shape(A, B, "oplus")
    return TropicalMatrix(np.maximum(A.entries, B.entries), _mode(A, B))


def m_wedge(A: TropicalMatrix, B: TropicalMatrix) -> TropicalMatrix:
    _same_shape(A, B, "wedge")
    return TropicalMatrix(np.minimum(A.entries, B.entries), _mode(A, B))


def m_odot(A: TropicalMatrix, B: TropicalMatrix) -> TropicalMatrix:
    """Max-plus product: ``(A B)[i, j] = max_k A[i, k] + B[k, j]``."""
    if A.cols != B.rows:
        raise ShapeMismatchError(f"odot: {A.shape} times {B.shape}")
    terms = v_odot(A.entries[:, :, None], B.entries[None, :, :])
    return TropicalMatrix(terms.max(axis=1), _mode(A, B))


def m_transpose(A: TropicalMatrix) -> TropicalMatrix:
    return TropicalMatrix(A.entries.T, A.mode)


def m_ldiv(A: TropicalMatrix, B: TropicalMatrix) -> TropicalMatrix:
    """``A \\ B``: greatest X with ``A X <= B``; shape ``A.cols x B.cols``."""
    if A.rows != B.rows:
        raise ShapeMismatchError(f"ldiv: {A.shape} under {B.shape}")
    # [i, j] = min_k A[k, i] \ B[k, j]
    quot = v_ldiv(A.entries[:, :, None], B.entries[:, None, :])
    return TropicalMatrix(quot.min(axis=0), _mode(A, B))


def m_rdiv(D: TropicalMatrix, C: TropicalMatrix) -> TropicalMatrix:
    """``D / C``: greatest X with ``X C <= D``; shape ``D.rows x C.rows``."""
    if D.cols != C.cols:
        raise ShapeMismatchError(f"rdiv: {D.shape} over {C.shape}")
    # [i, j] = min_l D[i, l] / C[j, l]
    quot = v_ldiv(C.entries[None, :, :], D.entries[:, None, :])
    return TropicalMatrix(quot.min(axis=2), _mode(D, C))


def m_le(A: TropicalMatrix, B: TropicalMatrix) -> bool:
    _same_shape(A, B, "le")
    mode = _mode(A, B)
    a, b = A.entries, B.entries
    if mode.is_exact:
        return bool(np.all(a <= b))
    return bool(np.all(a <= b + mode.epsilon))


def m_eq(A: TropicalMatrix, B: TropicalMatrix) -> bool:
    """Mode-aware equality (absolute tolerance in float mode)."""
    return m_le(A, B) and m_le(B, A)


def ones(rows: int, cols: int, mode=None) -> TropicalMatrix:
    """All-``ONE`` matrix (the tropical unit vector when one side is 1)."""
    return TropicalMatrix.filled(rows, cols, ONE, mode)


def bottoms(rows: int, cols: int, mode=None) -> TropicalMatrix:
    return TropicalMatrix.filled(rows, cols, BOTTOM, mode)


def tops(rows: int, cols: int, mode=None) -> TropicalMatrix:
    return TropicalMatrix.filled(rows, cols, TOP, mode)
