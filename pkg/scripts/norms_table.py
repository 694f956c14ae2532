"""g-criterion verdicts for a few elements of rank-1 twists at levels n = 1..3."""
from pglab.pgmod import TwistModule, g_criterion, ndr_membership
from pglab.series import LaurentSeries


def main(p=3, levels=(1, 2, 3)):
    X, one = LaurentSeries.gen(p), LaurentSeries.one(p)
    cases = [
        ("w=0  y=1/X", 0, 0, X ** -1),
        ("w=0  y=(1+X)/X", 0, 0, (one + X) * X ** -1),
        ("w=0  y=t*X", 0, 1, X),
        ("w=1  y=1", 1, 0, one),
        ("w=1  y=1/X", 1, 0, X ** -1),
        ("w=2  y=1+X", 2, 0, one + X),
    ]
    print(f"{'element':<18} {'in tN':<6} " + " ".join(f"{'n=' + str(n):<16}" for n in levels))
    for name, k, tpow, f in cases:
        M = TwistModule(p, (k,))
        y = M.element([(tpow, f)])
        rep = g_criterion(M, y, 0, levels)
        cells = []
        for c in rep.cells:
            v = c.valuation()
            cells.append(f"{c.verdict}" + ("" if v is None else f" v={v}"))
        tn = ndr_membership(M, y, "in_tN")[0].ok
        print(f"{name:<18} {str(tn):<6} " + " ".join(f"{c:<16}" for c in cells))


if __name__ == "__main__":
    main()
