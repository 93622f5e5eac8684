"""Bounds for a 3x3 instance, printed as exact fractions.

Also samples a few feasible tables and shows where they sit between the
two extreme tables.
"""

from maxplus_frechet import (
    FrechetInstance,
    compute_bounds,
    cum_array,
    random_feasible,
    sandwich_check,
)
from maxplus_frechet.serialize import format_array


def show(title, grid):
    print(title)
    for row in format_array(grid.numbers()):
        print("  " + "  ".join(f"{x:>5}" for x in row))


def main():
    inst = FrechetInstance.from_marginals(["0.2", "0.5", "0.3"], ["0.4", "0.4", "0.2"])
    res = compute_bounds(inst)
    show("upper cumulative", res.upper_cumulative)
    show("lower cumulative", res.lower_cumulative)
    show("comonotone table", res.upper_table)
    show("countermonotone table", res.lower_table)
    for seed in range(3):
        F = random_feasible(inst, seed)
        show(f"sample seed={seed}", F)
        show("  its cumulative array", cum_array(F))
        print("  within bounds:", sandwich_check(F, inst, res).ok)


if __name__ == "__main__":
    main()
