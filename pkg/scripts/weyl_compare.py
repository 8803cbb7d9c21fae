"""Compare the near-diagonal Weyl series with direct evaluation as eps shrinks."""
import argparse

from darboux import checks
from darboux.data import khan_penrose_data, power_data
from darboux.goursat import SolutionField
from darboux.weyl import WaveProfile, weyl_direct, weyl_series


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=float, default=0.5)
    ap.add_argument("--J", type=int, default=2)
    ap.add_argument("--lopsided", action="store_true", help="use asymmetric power data instead of Khan-Penrose")
    args = ap.parse_args()

    data = power_data(0.5, [1.0, 0.3], [0.0, -0.5, 1.0]) if args.lopsided else khan_penrose_data()
    field = SolutionField(data, eps_min=1e-9)
    prof = WaveProfile(1.0, 1.0, 2.0, 2.0)
    series = weyl_series(field, args.x, args.J, prof)
    for eps in (1e-2, 3e-3, 1e-3, 3e-4):
        near = series.components(eps)
        direct = weyl_direct(field, (args.x, 1 - args.x - eps), prof)
        print(f"eps={eps:.0e}  rel gap {checks._rel_components(near, direct):.3e}  psi4 {direct.psi4:.6e}  psi0 {direct.psi0:.6e}")


if __name__ == "__main__":
    main()
