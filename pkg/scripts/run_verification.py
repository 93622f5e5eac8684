"""Run the randomized self-checks and print a summary table."""

import argparse
import json
import time
from dataclasses import dataclass

from maxplus_frechet.verify import SUITES, run_verification


@dataclass
class VerifyConfig:
    iterations: int = 1000
    max_size: int = 50
    seed: int = 0
    suites: tuple | None = None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iterations", type=int, default=VerifyConfig.iterations)
    ap.add_argument("--max-size", type=int, default=VerifyConfig.max_size)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--suite", action="append", choices=list(SUITES))
    args = ap.parse_args()
    cfg = VerifyConfig(args.iterations, args.max_size, args.seed,
                       tuple(args.suite) if args.suite else None)

    t0 = time.perf_counter()
    results = run_verification(cfg.iterations, cfg.max_size, cfg.seed, cfg.suites)
    for r in results:
        print(f"{r.name:<24} {r.passed:>6} passed {r.failed:>4} failed")
        if r.counterexample:
            print("  counterexample:", json.dumps(r.counterexample))
    print(f"total {time.perf_counter() - t0:.1f}s")
    raise SystemExit(0 if all(r.ok for r in results) else 1)


if __name__ == "__main__":
    main()
