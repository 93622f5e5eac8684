"""Max-plus linear algebra with residuation, and Fréchet bounds for
contingency tables with prescribed marginals."""

from .core import (
    BOTTOM,
    EXACT,
    FLOAT,
    ONE,
    TOP,
    ZERO,
    InfiniteInverseError,
    NumericMode,
    ext,
    t_inv,
    t_ldiv,
    t_odot,
    t_oplus,
    t_rdiv,
    t_wedge,
)
from .cumulative import (
    ContingencyTable,
    CumulativeArray,
    CumulativeVector,
    Grid,
    MassVector,
    NegativeMassError,
    cum_array,
    cum_vector,
    d_matrix,
    d_order_le,
    diff_array,
    diff_vector,
    is_monge,
    lemma1_check,
)
from .frechet import (
    BoundsResult,
    FrechetInstance,
    InfeasibleInstanceError,
    NotAMemberError,
    SandwichReport,
    check_membership_classical,
    check_membership_tropical,
    compute_bounds,
    extract_table,
    lower_bound_closed,
    lower_bound_greedy,
    random_feasible,
    sandwich_check,
    upper_bound_closed,
    upper_bound_residuated,
)
from .matrix import (
    ShapeMismatchError,
    TropicalMatrix,
    m_eq,
    m_ldiv,
    m_le,
    m_odot,
    m_oplus,
    m_rdiv,
    m_transpose,
    m_wedge,
)

__version__ = "0.1.0"
