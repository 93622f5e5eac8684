from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxplus_frechet import (
    ContingencyTable,
    FrechetInstance,
    InfeasibleInstanceError,
    NegativeMassError,
    NotAMemberError,
    ShapeMismatchError,
    TropicalMatrix,
    check_membership_classical,
    check_membership_tropical,
    compute_bounds,
    cum_array,
    extract_table,
    is_monge,
    lower_bound_closed,
    lower_bound_greedy,
    m_le,
    m_odot,
    random_feasible,
    sandwich_check,
    upper_bound_closed,
    upper_bound_residuated,
)
from maxplus_frechet.frechet import GREEDY_ORDERS, BoundsResult, northwest_corner
from maxplus_frechet.matrix import ones
from maxplus_frechet.sampling import random_instance
from maxplus_frechet.verify import perturb
from oracles import integer_tables, running_sums_2d
from strategies import marginal_pairs

F = Fraction
P3, Q3 = ["0.2", "0.5", "0.3"], ["0.4", "0.4", "0.2"]
# closed forms min(α_i, β_j) and max(0, α_i + β_j - 1) with α = (.2, .7, 1), β = (.4, .8, 1)
UPPER3 = [[F(1, 5), F(1, 5), F(1, 5)], [F(2, 5), F(7, 10), F(7, 10)], [F(2, 5), F(4, 5), 1]]
LOWER3 = [[0, 0, F(1, 5)], [F(1, 10), F(1, 2), F(7, 10)], [F(2, 5), F(4, 5), 1]]
FMAX3 = [[F(1, 5), 0, 0], [F(1, 5), F(3, 10), 0], [0, F(1, 10), F(1, 5)]]
FMIN3 = [[0, 0, F(1, 5)], [F(1, 10), F(2, 5), 0], [F(3, 10), 0, 0]]


@pytest.fixture
def inst3():
    return FrechetInstance.from_marginals(P3, Q3)


def test_worked_example_bounds(inst3):
    assert upper_bound_residuated(inst3).tolist() == UPPER3
    assert upper_bound_closed(inst3).tolist() == UPPER3
    assert lower_bound_greedy(inst3).tolist() == LOWER3
    assert lower_bound_closed(inst3).tolist() == LOWER3
    res = compute_bounds(inst3)
    assert res.upper_table.tolist() == FMAX3
    assert res.lower_table.tolist() == FMIN3
    assert check_membership_classical(res.upper_table, inst3)
    assert check_membership_classical(res.lower_table, inst3)


def test_two_by_two_example():
    inst = FrechetInstance.from_marginals(["0.5", "0.5"], ["0.5", "0.5"])
    assert upper_bound_residuated(inst).tolist() == [[F(1, 2), F(1, 2)], [F(1, 2), 1]]
    assert lower_bound_greedy(inst).tolist() == [[0, F(1, 2)], [F(1, 2), 1]]


def test_single_category():
    inst = FrechetInstance.from_marginals(["3/7"], ["3/7"])
    for f in (upper_bound_residuated, upper_bound_closed, lower_bound_greedy, lower_bound_closed):
        assert f(inst).tolist() == [[F(3, 7)]]
    assert extract_table(upper_bound_residuated(inst)).tolist() == [[F(3, 7)]]


def test_single_nonzero_category():
    inst = FrechetInstance.from_marginals([0, 0, 5, 0], [0, 0, 5, 0])
    expected = [[5 if i >= 2 and j >= 2 else 0 for j in range(4)] for i in range(4)]
    assert upper_bound_closed(inst).tolist() == expected
    assert upper_bound_residuated(inst).tolist() == expected


def test_zero_mass_instance():
    inst = FrechetInstance.from_marginals([0, 0], [0, 0, 0])
    zeros = [[0, 0, 0], [0, 0, 0]]
    for f in (upper_bound_residuated, upper_bound_closed, lower_bound_greedy, lower_bound_closed):
        assert f(inst).tolist() == zeros
    assert check_membership_tropical(zeros, inst)
    assert check_membership_classical(zeros, inst)


def test_last_row_and_column_are_marginals(inst3):
    low = lower_bound_closed(inst3).tolist()
    assert [r[-1] for r in low] == [F(1, 5), F(7, 10), 1]
    assert low[-1] == [F(2, 5), F(4, 5), 1]


def test_infeasible_marginals():
    with pytest.raises(InfeasibleInstanceError, match="3/5.*1/2"):
        FrechetInstance.from_marginals(["0.6"], ["0.5"])
    with pytest.raises(InfeasibleInstanceError):
        FrechetInstance.from_marginals([1.0, 0.2], [1.2 + 1e-6], "float")
    FrechetInstance.from_marginals([0.1, 0.2], [0.3], "float")


def test_membership_examples(inst3):
    half = FrechetInstance.from_marginals(["0.5", "0.5"], ["0.5", "0.5"])
    assert check_membership_classical([["0.5", 0], [0, "0.5"]], half)
    assert not check_membership_classical([[1, 0], [0, 0]], half)
    assert not check_membership_tropical([[1, 0], [0, 0]], half)
    assert check_membership_tropical(FMAX3, inst3)
    with pytest.raises(ShapeMismatchError):
        check_membership_classical([[1]], half)


def test_perturbed_table_is_not_member(inst3):
    bumped = [row[:] for row in FMAX3]
    bumped[1][1] += F(1, 10)
    assert not check_membership_classical(bumped, inst3)
    assert not check_membership_tropical(bumped, inst3)


def test_northwest_corner_example(inst3):
    assert northwest_corner(inst3.p, inst3.q).tolist() == [[2, 0, 0], [2, 3, 0], [0, 1, 2]]


def test_random_feasible_is_deterministic(inst3):
    a = random_feasible(inst3, 7)
    b = random_feasible(inst3, 7)
    assert a == b and a.tolist() == b.tolist()
    single = FrechetInstance.from_marginals(["2.5"], ["2.5"])
    assert random_feasible(single, 1).tolist() == [[F(5, 2)]]


def test_random_feasible_members(rng):
    for _ in range(50):
        inst = random_instance(rng, 12)
        for seed in range(5):
            assert check_membership_classical(random_feasible(inst, seed), inst)


def test_sandwich_examples(inst3):
    res = compute_bounds(inst3)
    assert sandwich_check(res.upper_table, inst3).ok
    assert sandwich_check(res.lower_table, inst3).ok
    # a 2x2 swap keeps the marginals
    swapped = [row[:] for row in FMAX3]
    d = F(1, 10)
    swapped[1][0] -= d
    swapped[1][1] += d
    swapped[2][0] += d
    swapped[2][1] -= d
    assert check_membership_classical(swapped, inst3)
    rep = sandwich_check(swapped, inst3)
    assert rep.lower_ok and rep.upper_ok
    with pytest.raises(NotAMemberError):
        sandwich_check([[1, 0, 0], [0, 0, 0], [0, 0, 0]], inst3)


def test_sandwich_reports_violation():
    inst = FrechetInstance.from_marginals([1, 1], [1, 1])
    anti = ContingencyTable.from_values([[0, 1], [1, 0]])
    bogus = compute_bounds(inst)
    # swap the roles of the bounds: the diagonal table is then out of range
    swapped = BoundsResult(bogus.lower_cumulative, bogus.upper_cumulative,
                           bogus.lower_table, bogus.upper_table)
    rep = sandwich_check([[1, 0], [0, 1]], inst, swapped)
    assert not rep.upper_ok and rep.upper_violation == (0, 0)
    assert sandwich_check(anti, inst).ok


@given(marginal_pairs(max_dim=3, max_total=5))
def test_bounds_match_enumeration(pq):
    p, q = pq
    inst = FrechetInstance.from_marginals(p, q)
    cums = [running_sums_2d(t) for t in integer_tables(p, q)]
    assert cums, "the class is never empty"
    n, m = len(p), len(q)
    top = [[max(c[i][j] for c in cums) for j in range(m)] for i in range(n)]
    bottom = [[min(c[i][j] for c in cums) for j in range(m)] for i in range(n)]
    assert upper_bound_residuated(inst).tolist() == top
    assert lower_bound_greedy(inst).tolist() == bottom
    for t in integer_tables(p, q):
        rep = sandwich_check(t, inst)
        assert rep.ok


@given(marginal_pairs())
def test_oracle_equality_and_membership(pq):
    inst = FrechetInstance.from_marginals(*pq)
    up, low = upper_bound_residuated(inst), lower_bound_greedy(inst)
    assert up == upper_bound_closed(inst)
    assert low == lower_bound_closed(inst)
    assert is_monge(up) and is_monge(low)
    for c in (up, low):
        assert check_membership_classical(extract_table(c), inst)


@given(marginal_pairs())
def test_sweep_orders_agree(pq):
    inst = FrechetInstance.from_marginals(*pq)
    results = [lower_bound_greedy(inst, o) for o in GREEDY_ORDERS]
    assert all(r == results[0] for r in results)


def test_unknown_sweep_order(inst3):
    with pytest.raises(ValueError):
        lower_bound_greedy(inst3, "diagonal")


@given(marginal_pairs(), st.sampled_from([2, Fraction(1, 3), 10, Fraction(7, 2)]))
def test_scale_equivariance(pq, lam):
    inst = FrechetInstance.from_marginals(*pq)
    scaled = inst.scaled(lam)
    for f in (upper_bound_residuated, lower_bound_greedy):
        base = np.array(f(inst).tolist(), dtype=object) * lam
        assert f(scaled).tolist() == base.tolist()


@given(marginal_pairs(max_dim=4), st.data())
def test_greatest_subsolution(pq, data):
    inst = FrechetInstance.from_marginals(*pq)
    up = upper_bound_residuated(inst)
    alpha = np.cumsum(np.array(pq[0], dtype=object)).reshape(-1, 1)
    beta = np.cumsum(np.array(pq[1], dtype=object)).reshape(1, -1)
    n, m = inst.n, inst.m
    cells = data.draw(st.lists(st.integers(-2, 14), min_size=n * m, max_size=n * m))
    G = TropicalMatrix(np.array(cells, dtype=object).reshape(n, m), inst.mode)
    sub = (m_le(m_odot(G, ones(m, 1)), TropicalMatrix(alpha, inst.mode))
           and m_le(m_odot(ones(1, n), G), TropicalMatrix(beta, inst.mode)))
    below = m_le(G, TropicalMatrix(up.values, inst.mode))
    assert sub == below


def test_extract_table_rejects_non_monge():
    with pytest.raises(NegativeMassError):
        extract_table(np.array([[1, 0], [0, 1]]))


def test_membership_characterizations_agree(rng):
    for _ in range(100):
        inst = random_instance(rng, 10)
        Fm = random_feasible(inst, int(rng.integers(1000)))
        for T in (Fm, perturb(Fm, rng)):
            assert check_membership_tropical(T, inst) == check_membership_classical(T, inst)


def test_float_mode_bounds():
    inst = FrechetInstance.from_marginals([0.2, 0.5, 0.3], [0.4, 0.4, 0.2], "float")
    res = compute_bounds(inst)
    assert np.allclose(res.upper_cumulative.values, np.array(UPPER3, dtype=float))
    assert np.allclose(res.lower_cumulative.values, np.array(LOWER3, dtype=float))
    assert np.allclose(res.upper_table.values, np.array(FMAX3, dtype=float))
    assert np.allclose(res.lower_table.values, np.array(FMIN3, dtype=float))
    for o in GREEDY_ORDERS:
        assert lower_bound_greedy(inst, o) == res.lower_cumulative
    assert check_membership_tropical(res.lower_table, inst)
    assert sandwich_check(random_feasible(inst, 3), inst).ok


def test_cumulative_of_bounds_tables(inst3):
    res = compute_bounds(inst3)
    assert cum_array(res.upper_table) == res.upper_cumulative
    assert cum_array(res.lower_table) == res.lower_cumulative
    assert m_le(TropicalMatrix(res.lower_cumulative.values, inst3.mode),
                TropicalMatrix(res.upper_cumulative.values, inst3.mode))
