"""Log-log slope of the truncated expansion remainder near the diagonal."""
import argparse

from darboux import asymptotics
from darboux.data import khan_penrose_data
from darboux.goursat import SolutionField


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=float, nargs="+", default=[0.25, 0.5])
    ap.add_argument("--J", type=int, nargs="+", default=[0, 1, 2])
    args = ap.parse_args()

    field = SolutionField(khan_penrose_data(), eps_min=1e-9)
    for x in args.x:
        table = asymptotics.expansion(field, x, max(args.J))
        print(f"x={x}: f={[round(float(v), 12) for v in table.f]} g={[round(float(v), 12) for v in table.g]}")
        for J in args.J:
            fit = asymptotics.remainder_order_fit(field, x, J)
            print(f"  J={J}: slope {fit.slope:.4f} ({fit.status}), expected about {J + 1}")


if __name__ == "__main__":
    main()
