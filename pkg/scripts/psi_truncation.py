"""How much p-adic information psi leaks from an unknown X-adic tail.

psi(X^M) has a constant term of positive but bounded valuation, so a series
known only mod X^M has psi known only to that many digits.
"""
from pglab.operators import psi_A
from pglab.series import LaurentSeries


def main(M=32):
    for p in (2, 3, 5):
        out = psi_A(LaurentSeries.gen(p) ** M)
        vals = [x.v for e, x in sorted(out.coefficients().items()) if x.u][:4]
        print(f"p={p}: valuations of the first coefficients of psi(X^{M}): {vals}")


if __name__ == "__main__":
    main()
