"""Identity suites for several primes, with wall-clock timings.

    python3 scripts/run_identities.py --primes 2 3 5 --cases 100
"""
import argparse
import time

from pglab import suites
from pglab.config import RunConfig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--cases", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'p':>2} {'identity':<26} {'cases':>5} {'residual':>9} {'need':>5}  ok")
    for p in args.primes:
        cfg = RunConfig(p=p, cases=args.cases, seed=args.seed)
        t0 = time.perf_counter()
        results = suites.operator_suite(cfg) + [suites.psi_crosscheck(cfg),
                                                suites.psi_fixed_points(cfg)]
        results += suites.iota_suite(cfg) + suites.module_suite(cfg)
        for r in results:
            res = r.to_json()["residual"] or "exact"
            print(f"{p:>2} {r.name:<26} {r.cases:>5} {res:>9} {str(r.threshold):>5}  "
                  f"{'yes' if r.passed else 'NO'}")
        print(f"   p={p} took {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
