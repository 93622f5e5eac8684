"""Time both bounds plus table extraction across instance sizes."""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from maxplus_frechet import extract_table, lower_bound_greedy, upper_bound_residuated
from maxplus_frechet.frechet import GREEDY_ORDERS
from maxplus_frechet.sampling import random_instance


@dataclass
class BenchConfig:
    sizes: tuple = (50, 200, 500, 1000, 2000)
    mode: str = "float"
    order: str | None = None
    seed: int = 0
    repeats: int = 3


def bench(cfg: BenchConfig):
    rng = np.random.default_rng(cfg.seed)
    for n in cfg.sizes:
        inst = random_instance(rng, n=n, m=n, mode=cfg.mode)
        best = float("inf")
        for _ in range(cfg.repeats):
            t0 = time.perf_counter()
            up = upper_bound_residuated(inst)
            low = lower_bound_greedy(inst, cfg.order)
            extract_table(up)
            extract_table(low)
            best = min(best, time.perf_counter() - t0)
        yield n, best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(BenchConfig.sizes))
    ap.add_argument("--mode", choices=["exact", "float"], default="float")
    ap.add_argument("--order", choices=GREEDY_ORDERS, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    cfg = BenchConfig(tuple(args.sizes), args.mode, args.order, args.seed, args.repeats)
    print(f"{'n=m':>6}  {'seconds':>9}")
    for n, dt in bench(cfg):
        print(f"{n:>6}  {dt:>9.3f}")


if __name__ == "__main__":
    main()
