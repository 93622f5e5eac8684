"""Fréchet bounds of the class of tables with prescribed marginals.

The upper bound is obtained as the greatest subsolution of the max-plus
linear system ``F ⊙ 1 = Dp``, ``1ᵀ ⊙ F = qᵀDᵀ`` by residuation; the lower
bound by the greedy backward sweep.  Closed forms serve as oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import ONE, NumericMode, as_mode, t_inv, t_odot, t_oplus, v_inv, v_odot, v_oplus
from .cumulative import (
    ContingencyTable,
    CumulativeArray,
    Grid,
    MassVector,
    NegativeMassError,
    align,
    cum_array,
    cum_vector,
    d_order_violation,
    diff_array,
    exact_array,
)
from .matrix import ShapeMismatchError, TropicalMatrix, m_eq, m_ldiv, m_odot, m_rdiv, m_wedge, ones


class InfeasibleInstanceError(ValueError):
    """The marginals have different total mass, so no table fits them."""


class NotAMemberError(ValueError):
    pass


@dataclass(frozen=True)
class FrechetInstance:
    """A pair of marginals ``p`` (rows) and ``q`` (columns) on a common scale."""

    p: MassVector
    q: MassVector

    def __post_init__(self):
        p, q = align(self.p, self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        a, b = p.raw_sigma, q.raw_sigma
        if p.mode.is_exact:
            ok = a == b
        else:
            ok = abs(a - b) <= p.mode.epsilon * max(abs(a), abs(b), 1.0)
        if not ok:
            raise InfeasibleInstanceError(
                f"row marginals sum to {p.sigma} but column marginals sum to {q.sigma}"
            )

    @classmethod
    def from_marginals(cls, p, q, mode=None) -> "FrechetInstance":
        mode = as_mode(mode)
        return cls(MassVector.from_values(p, mode, allow_zero=True),
                   MassVector.from_values(q, mode, allow_zero=True))

    @property
    def mode(self) -> NumericMode:
        return self.p.mode

    @property
    def n(self) -> int:
        return self.p.n

    @property
    def m(self) -> int:
        return self.q.n

    @property
    def sigma(self):
        return self.p.sigma

    @property
    def raw_sigma(self):
        return self.p.raw_sigma

    def scaled(self, factor) -> "FrechetInstance":
        """Instance with every mass multiplied by the positive rational ``factor``."""
        if not self.mode.is_exact:
            f = float(factor)
            return FrechetInstance(MassVector(self.p.values * f, self.mode, allow_zero=True),
                                   MassVector(self.q.values * f, self.mode, allow_zero=True))
        fr = Fraction(factor)
        if fr <= 0:
            raise ValueError("factor must be positive")
        mode = self.mode.with_scale(self.mode.scale * fr.denominator)
        return FrechetInstance(
            MassVector(exact_array(self.p.values.astype(object) * fr.numerator), mode, allow_zero=True),
            MassVector(exact_array(self.q.values.astype(object) * fr.numerator), mode, allow_zero=True),
        )


@dataclass(frozen=True)
class BoundsResult:
    upper_cumulative: CumulativeArray
    lower_cumulative: CumulativeArray
    upper_table: ContingencyTable
    lower_table: ContingencyTable


def _row_col(inst: FrechetInstance):
    return cum_vector(inst.p).values, cum_vector(inst.q).values


def _cumulative(values, mode: NumericMode) -> CumulativeArray:
    if mode.is_exact:
        values = exact_array(np.asarray(values, dtype=object))
    else:
        values = np.asarray(values, dtype=np.float64)
    return CumulativeArray(values, mode)


# -- membership -------------------------------------------------------------

def _check_shape(F: ContingencyTable, inst: FrechetInstance):
    if F.shape != (inst.n, inst.m):
        raise ShapeMismatchError(f"table shape {F.shape} does not match marginals ({inst.n}, {inst.m})")


def _as_table(F, inst: FrechetInstance) -> ContingencyTable:
    if not isinstance(F, ContingencyTable):
        F = ContingencyTable.from_values(F, inst.mode)
    return F


def _vec_eq(a, b, mode: NumericMode) -> bool:
    if mode.is_exact:
        return bool(np.array_equal(a, b))
    return bool(np.all(np.abs(np.asarray(a, float) - np.asarray(b, float)) <= mode.epsilon))


def check_membership_classical(F, inst: FrechetInstance) -> bool:
    """Row sums equal ``p`` and column sums equal ``q``."""
    F = _as_table(F, inst)
    _check_shape(F, inst)
    F, p, q = align(F, inst.p, inst.q)
    return _vec_eq(F.row_sums(), p.values, F.mode) and _vec_eq(F.col_sums(), q.values, F.mode)


def check_membership_tropical(F, inst: FrechetInstance) -> bool:
    """Membership stated in cumulative space, as two max-plus linear equations:
    ``cum(F) ⊙ 1 = Dp`` and ``1ᵀ ⊙ cum(F) = (Dq)ᵀ``."""
    F = _as_table(F, inst)
    _check_shape(F, inst)
    F, p, q = align(F, inst.p, inst.q)
    mode = F.mode
    cum = TropicalMatrix(cum_array(F).values, mode)
    alpha = TropicalMatrix(cum_vector(p).values.reshape(-1, 1), mode)
    beta_t = TropicalMatrix(cum_vector(q).values.reshape(1, -1), mode)
    rows_ok = m_eq(m_odot(cum, ones(inst.m, 1, mode)), alpha)
    cols_ok = m_eq(m_odot(ones(1, inst.n, mode), cum), beta_t)
    return rows_ok and cols_ok


# -- upper bound ------------------------------------------------------------

def upper_bound_residuated(inst: FrechetInstance) -> CumulativeArray:
    """``((Dp) / 1) ∧ (1ᵀ \\ (qᵀDᵀ))``, the greatest subsolution of the
    max-plus system whose solutions are the cumulative arrays of the class."""
    mode = inst.mode
    alpha, beta = _row_col(inst)
    alpha_col = TropicalMatrix(alpha.reshape(-1, 1), mode)  # n x 1
    beta_row = TropicalMatrix(beta.reshape(1, -1), mode)  # 1 x m
    from_rows = m_rdiv(alpha_col, ones(inst.m, 1, mode))  # greatest X: X ⊙ 1 <= Dp
    from_cols = m_ldiv(ones(1, inst.n, mode), beta_row)  # greatest X: 1ᵀ ⊙ X <= qᵀDᵀ
    return _cumulative(m_wedge(from_rows, from_cols).entries, mode)


def upper_bound_closed(inst: FrechetInstance) -> CumulativeArray:
    alpha, beta = _row_col(inst)
    return _cumulative(np.minimum.outer(alpha, beta), inst.mode)


# -- lower bound ------------------------------------------------------------

GREEDY_ORDERS = ("columns", "rows", "wavefront")


def _sweep_cell(F, i, j):
    # F[i+1][j+1]^-1 ⊙ (F[i][j+1] ⊙ F[i+1][j]) ⊕ 1
    return t_oplus(t_odot(t_inv(F[i + 1][j + 1]), t_odot(F[i][j + 1], F[i + 1][j])), ONE)


def lower_bound_greedy(inst: FrechetInstance, order: str | None = None) -> CumulativeArray:
    """Greedy backward sweep for the lower bound.

    The last column is set to ``Dp`` and the last row to ``qᵀDᵀ``; every
    other cell is filled from its right, lower and lower-right neighbours.
    ``order`` picks the traversal: ``"columns"`` (j outer, i inner, both
    descending; the default in exact mode), ``"rows"`` (nesting swapped) or
    ``"wavefront"`` (anti-diagonals, vectorized; the default in float mode).
    All three only read cells that are already final.
    """
    mode = inst.mode
    if order is None:
        order = "columns" if mode.is_exact else "wavefront"
    if order not in GREEDY_ORDERS:
        raise ValueError(f"unknown sweep order {order!r}; expected one of {GREEDY_ORDERS}")
    alpha, beta = _row_col(inst)
    n, m = inst.n, inst.m
    if order == "wavefront":
        return _cumulative(_wavefront(alpha, beta, mode), mode)

    alpha, beta = alpha.tolist(), beta.tolist()
    F = [[None] * m for _ in range(n)]
    for i in range(n):
        F[i][m - 1] = alpha[i]
    for j in range(m):
        F[n - 1][j] = beta[j]
    if order == "columns":
        for j in range(m - 2, -1, -1):
            for i in range(n - 2, -1, -1):
                F[i][j] = _sweep_cell(F, i, j)
    else:
        for i in range(n - 2, -1, -1):
            for j in range(m - 2, -1, -1):
                F[i][j] = _sweep_cell(F, i, j)
    return _cumulative(F, mode)


def _wavefront(alpha, beta, mode: NumericMode) -> np.ndarray:
    n, m = len(alpha), len(beta)
    F = np.zeros((n, m), dtype=object if mode.is_exact else np.float64)
    F[:, m - 1] = alpha
    F[n - 1, :] = beta
    # cells with i + j = d depend only on diagonals d + 1 and d + 2
    for d in range(n + m - 4, -1, -1):
        i = np.arange(max(0, d - (m - 2)), min(n - 2, d) + 1)
        j = d - i
        prod = v_odot(F[i, j + 1], F[i + 1, j])
        F[i, j] = v_oplus(v_odot(v_inv(F[i + 1, j + 1]), prod), ONE)
    return F


def lower_bound_closed(inst: FrechetInstance) -> CumulativeArray:
    alpha, beta = _row_col(inst)
    sigma = inst.raw_sigma
    return _cumulative(np.maximum(np.add.outer(alpha, beta) - sigma, 0), inst.mode)


# -- tables -----------------------------------------------------------------

def extract_table(c: CumulativeArray) -> ContingencyTable:
    """Cell masses of a cumulative array; raises NegativeMassError if it is not Monge."""
    return diff_array(c, strict=True)


def compute_bounds(inst: FrechetInstance, order: str | None = None) -> BoundsResult:
    upper = upper_bound_residuated(inst)
    lower = lower_bound_greedy(inst, order)
    return BoundsResult(upper, lower, extract_table(upper), extract_table(lower))


def northwest_corner(p: MassVector, q: MassVector) -> np.ndarray:
    """Northwest-corner allocation of ``p`` over ``q`` (same scale assumed)."""
    exact = p.mode.is_exact
    supply = [int(x) if exact else float(x) for x in p.values]
    demand = [int(x) if exact else float(x) for x in q.values]
    cells = np.zeros((len(supply), len(demand)), dtype=object if exact else np.float64)
    i = j = 0
    while i < len(supply) and j < len(demand):
        amount = min(supply[i], demand[j])
        if not exact:
            amount = max(amount, 0.0)
        cells[i, j] = amount
        supply[i] -= amount
        demand[j] -= amount
        # float residue below epsilon counts as exhausted
        if supply[i] <= (0 if exact else p.mode.epsilon) and i < len(supply) - 1:
            i += 1
        elif j < len(demand) - 1:
            j += 1
        else:
            break
    if not exact:
        # push rounding residue into the last cell so sums stay within epsilon
        cells[-1, -1] += max(supply[-1], 0.0)
    return cells


def random_feasible(inst: FrechetInstance, seed) -> ContingencyTable:
    """A member of the class: northwest corner on randomly permuted rows and
    columns, mapped back to the original positions.  Deterministic per seed."""
    rng = np.random.default_rng(seed)
    rows = rng.permutation(inst.n)
    cols = rng.permutation(inst.m)
    p = MassVector(inst.p.values[rows], inst.mode, allow_zero=True)
    q = MassVector(inst.q.values[cols], inst.mode, allow_zero=True)
    shuffled = northwest_corner(p, q)
    cells = np.empty_like(shuffled)
    cells[np.ix_(rows, cols)] = shuffled
    if inst.mode.is_exact:
        cells = exact_array(cells)
    return ContingencyTable(cells, inst.mode)


# -- sandwich ---------------------------------------------------------------

@dataclass(frozen=True)
class SandwichReport:
    lower_ok: bool
    upper_ok: bool
    lower_violation: tuple[int, int] | None = None
    upper_violation: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def sandwich_check(F, inst: FrechetInstance, bounds: BoundsResult | None = None) -> SandwichReport:
    """Check ``F_min ⪯ F ⪯ F_max`` in the cumulative order."""
    F = _as_table(F, inst)
    if not check_membership_classical(F, inst):
        raise NotAMemberError("table does not have the instance's marginals")
    if bounds is None:
        bounds = compute_bounds(inst)
    low = d_order_violation(bounds.lower_table, F)
    high = d_order_violation(F, bounds.upper_table)
    return SandwichReport(low is None, high is None, low, high)


__all__ = [
    "BoundsResult",
    "FrechetInstance",
    "GREEDY_ORDERS",
    "Grid",
    "InfeasibleInstanceError",
    "NegativeMassError",
    "NotAMemberError",
    "SandwichReport",
    "check_membership_classical",
    "check_membership_tropical",
    "compute_bounds",
    "extract_table",
    "lower_bound_closed",
    "lower_bound_greedy",
    "northwest_corner",
    "random_feasible",
    "sandwich_check",
    "upper_bound_closed",
    "upper_bound_residuated",
]
