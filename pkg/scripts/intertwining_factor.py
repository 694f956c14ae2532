"""Compare iota_n(d f) with p^s (d/dt) iota_n(f) for s = n and s = -n.

The chain rule with iota_n(t) = t/p^n picks s = n; this prints the residual
valuations of both normalizations on random inputs.
"""
import random

from pglab.cyclo_eval import check_intertwine
from pglab.series import LaurentSeries


def main(samples=10):
    rng = random.Random(0)
    print(f"{'p':>2} {'n':>2} {'min residual s=+n':>18} {'min residual s=-n':>18}")
    for p in (2, 3, 5):
        for n in (1, 2):
            plus = minus = float("inf")
            for _ in range(samples):
                f = LaurentSeries.from_coefficients(
                    [rng.randrange(-p ** 6, p ** 6) for _ in range(12)], p,
                    start=-rng.randint(0, 2), prec=None)
                plus = min(plus, check_intertwine(f, n).residual)
                minus = min(minus, check_intertwine(f, n, scale_exponent=-n).residual)
            print(f"{p:>2} {n:>2} {plus:>18} {minus:>18}")


if __name__ == "__main__":
    main()
