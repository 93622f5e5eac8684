"""Randomized self-verification suites.

Each suite draws cases from a seeded generator, evaluates a property and
records the first failure, shrunk where possible.  Library functions are
looked up through their modules at call time so a patched build is
exercised as-is.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import cumulative, frechet, matrix, sampling
from .cumulative import ContingencyTable, Grid, MassVector, exact_array
from .serialize import grid_to_json, instance_to_json, tropical_to_json

log = logging.getLogger(__name__)

SCALE_FACTORS = (2, Fraction(1, 3), 10)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    @property
    def total(self) -> int:
        return self.passed + self.failed


def _holds(prop: Callable, case) -> bool:
    try:
        return bool(prop(case))
    except Exception:  # an exception inside a property is a failure, not a crash
        return False


def _run(name: str, cases: Iterable, prop: Callable, describe: Callable,
         shrink: Callable | None = None) -> SuiteResult:
    res = SuiteResult(name)
    for case in cases:
        if _holds(prop, case):
            res.passed += 1
            continue
        res.failed += 1
        if res.counterexample is None:
            if shrink is not None:
                case = shrink(case, prop)
            res.counterexample = describe(case)
    return res


# -- shrinking ----------------------------------------------------------------

def _merge_candidates(v: MassVector):
    vals = v.values.tolist()
    for k in range(len(vals) - 1):
        merged = vals[:k] + [vals[k] + vals[k + 1]] + vals[k + 2:]
        yield MassVector(_array(merged, v), v.mode, allow_zero=True)


def _array(vals, like: Grid):
    return exact_array(vals) if like.mode.is_exact else np.asarray(vals, dtype=np.float64)


def shrink_instance(inst: frechet.FrechetInstance, prop: Callable) -> frechet.FrechetInstance:
    """Merge adjacent categories while the property keeps failing.

    Merging keeps the total masses equal, so every candidate is feasible.
    """
    improved = True
    while improved:
        improved = False
        candidates = [frechet.FrechetInstance(p, inst.q) for p in _merge_candidates(inst.p)]
        candidates += [frechet.FrechetInstance(inst.p, q) for q in _merge_candidates(inst.q)]
        for cand in candidates:
            if not _holds(prop, cand):
                inst, improved = cand, True
                break
    return inst


def _describe_instance(inst) -> dict:
    return {"n": inst.n, "m": inst.m, **instance_to_json(inst)}


# -- suites -------------------------------------------------------------------

def _instances(rng, count, max_size):
    return [sampling.random_instance(rng, max_size) for _ in range(count)]


def suite_upper_oracle(rng, count, max_size) -> SuiteResult:
    def prop(inst):
        return frechet.upper_bound_residuated(inst) == frechet.upper_bound_closed(inst)
    return _run("upper-oracle", _instances(rng, count, max_size), prop,
                _describe_instance, shrink_instance)


def scale_grid(g: Grid, factor) -> Grid:
    return Grid.from_values(g.numbers() * Fraction(factor), g.mode.with_scale(1))


def suite_lower_oracle(rng, count, max_size) -> SuiteResult:
    def prop(inst):
        greedy = frechet.lower_bound_greedy(inst)
        if greedy != frechet.lower_bound_closed(inst):
            return False
        return all(frechet.lower_bound_greedy(inst.scaled(f)) == scale_grid(greedy, f)
                   for f in SCALE_FACTORS)
    return _run("lower-oracle", _instances(rng, count, max_size), prop,
                _describe_instance, shrink_instance)


def suite_bounds_membership(rng, count, max_size) -> SuiteResult:
    def prop(inst):
        for c in (frechet.upper_bound_residuated(inst), frechet.lower_bound_greedy(inst)):
            table = frechet.extract_table(c)
            if not frechet.check_membership_classical(table, inst):
                return False
        return True
    return _run("bounds-membership", _instances(rng, count, max_size), prop,
                _describe_instance, shrink_instance)


def perturb(F: ContingencyTable, rng) -> ContingencyTable:
    """Add one unit of the scale (exact) or 1e-3 (float) to a random cell."""
    i, j = (int(rng.integers(s)) for s in F.shape)
    vals = F.values.astype(object if F.mode.is_exact else np.float64).copy()
    vals[i, j] += 1 if F.mode.is_exact else 1e-3
    return ContingencyTable(_array(vals, F), F.mode)


def suite_membership_equivalence(rng, count, max_size) -> SuiteResult:
    cases = []
    for k in range(count):
        inst = sampling.random_instance(rng, max_size)
        F = frechet.random_feasible(inst, int(rng.integers(2**32)))
        cases.append((F, inst))
        cases.append((perturb(F, rng), inst))

    def prop(case):
        F, inst = case
        return (frechet.check_membership_tropical(F, inst)
                == frechet.check_membership_classical(F, inst))

    def describe(case):
        F, inst = case
        return {**_describe_instance(inst), "table": grid_to_json(F)}
    return _run("membership-equivalence", cases, prop, describe)


def galois_case(rng, max_dim=6):
    k, n, m = (int(rng.integers(1, max_dim + 1)) for _ in range(3))
    A = sampling.random_tropical(rng, k, n)
    B = sampling.random_tropical(rng, k, m)
    if rng.random() < 0.5:
        # start below the residual so that both sides of the equivalence occur
        X = matrix.m_wedge(matrix.m_ldiv(A, B), sampling.random_tropical(rng, n, m))
    else:
        X = sampling.random_tropical(rng, n, m)
    return A, X, B


def galois_holds(case) -> bool:
    A, X, B = case
    left = matrix.m_le(matrix.m_odot(A, X), B) == matrix.m_le(X, matrix.m_ldiv(A, B))
    # right-hand version on the transposed problem: X' = Xᵀ, C = Aᵀ, D = Bᵀ
    Xt, C, D = matrix.m_transpose(X), matrix.m_transpose(A), matrix.m_transpose(B)
    right = matrix.m_le(matrix.m_odot(Xt, C), D) == matrix.m_le(Xt, matrix.m_rdiv(D, C))
    return left and right


def suite_galois(rng, count, max_size) -> SuiteResult:
    cases = [galois_case(rng) for _ in range(count)]

    def describe(case):
        A, X, B = case
        return {"A": tropical_to_json(A), "X": tropical_to_json(X), "B": tropical_to_json(B)}
    return _run("galois", cases, galois_holds, describe)


def monge_case(rng, max_dim):
    n, m = (int(rng.integers(1, max_dim + 1)) for _ in range(2))
    low = -1 if rng.random() < 0.7 else 0
    cells = sampling.random_table(rng, n, m, low=low, zero_prob=0.5)
    return Grid(cells.values.cumsum(axis=0).cumsum(axis=1), cells.mode)


def monge_holds(c: Grid) -> bool:
    vals = c.values
    border_ok = bool((vals[0] >= 0).all() and (vals[:, 0] >= 0).all()
                     and (np.diff(vals[0]) >= 0).all() and (np.diff(vals[:, 0]) >= 0).all())
    try:
        cumulative.diff_array(c, strict=True)
        diff_ok = True
    except cumulative.NegativeMassError:
        diff_ok = False
    return (cumulative.is_monge(c) and border_ok) == diff_ok


def suite_monge(rng, count, max_size) -> SuiteResult:
    cases = [monge_case(rng, max_size) for _ in range(count)]
    res = _run("monge-equivalence", cases, monge_holds, grid_to_json)
    tables = [sampling.random_table(rng, *(int(x) for x in rng.integers(1, max_size + 1, 2)))
              for _ in range(count)]
    extra = _run("monge-cumulative", tables,
                 lambda F: cumulative.is_monge(cumulative.cum_array(F)), grid_to_json)
    res.passed += extra.passed
    res.failed += extra.failed
    res.counterexample = res.counterexample or extra.counterexample
    return res


def suite_row_sums(rng, count, max_size) -> SuiteResult:
    tables = [sampling.random_table(rng, *(int(x) for x in rng.integers(1, max_size + 1, 2)))
              for _ in range(count)]
    return _run("row-sums", tables, cumulative.lemma1_check, grid_to_json)


def suite_sandwich(rng, count, max_size, per_instance: int = 10) -> SuiteResult:
    n_inst = max(1, count // per_instance) if count else 0
    cases = []
    for _ in range(n_inst):
        inst = sampling.random_instance(rng, max_size)
        bounds = frechet.compute_bounds(inst)
        for _ in range(per_instance):
            cases.append((frechet.random_feasible(inst, int(rng.integers(2**32))), inst, bounds))

    def prop(case):
        F, inst, bounds = case
        return frechet.sandwich_check(F, inst, bounds).ok

    def describe(case):
        F, inst, _ = case
        return {**_describe_instance(inst), "table": grid_to_json(F)}
    return _run("sandwich", cases, prop, describe)


def suite_sweep_order(rng, count, max_size) -> SuiteResult:
    def prop(inst):
        ref = frechet.lower_bound_greedy(inst, "columns")
        return all(frechet.lower_bound_greedy(inst, o) == ref for o in frechet.GREEDY_ORDERS)
    return _run("sweep-order", _instances(rng, count, max_size), prop,
                _describe_instance, shrink_instance)


SUITES = {
    "upper-oracle": suite_upper_oracle,
    "lower-oracle": suite_lower_oracle,
    "bounds-membership": suite_bounds_membership,
    "membership-equivalence": suite_membership_equivalence,
    "galois": suite_galois,
    "monge-equivalence": suite_monge,
    "row-sums": suite_row_sums,
    "sandwich": suite_sandwich,
    "sweep-order": suite_sweep_order,
}


def run_verification(iterations: int = 100, max_size: int = 20, seed: int = 0,
                     suites: Iterable[str] | None = None) -> list[SuiteResult]:
    """Run the named suites (all by default), each with ``iterations`` cases.

    Every suite gets its own generator derived from ``seed`` so results do
    not depend on which suites are selected.
    """
    if iterations == 0:
        log.warning("iterations=0: every suite passes vacuously")
    names = list(SUITES) if suites is None else list(suites)
    results = []
    for k, name in enumerate(SUITES):
        if name not in names:
            continue
        rng = np.random.default_rng([seed, k])
        results.append(SUITES[name](rng, iterations, max_size))
    return results
