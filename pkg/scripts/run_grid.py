"""Evaluate the Khan-Penrose field on a grid and report the error against the closed form."""
import argparse
import time

from darboux import oracle
from darboux.data import khan_penrose_data
from darboux.goursat import GridSpec, SolutionField, evaluate_grid


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    field = SolutionField(khan_penrose_data())
    grid = GridSpec(0.05, 0.85, args.n, 0.05, 0.85, args.n, eps_min=0.1 - 1e-12)
    start = time.perf_counter()
    rows = [r for r in evaluate_grid(field, grid, threads=args.threads) if r.x + r.y <= 0.9 + 1e-12]
    elapsed = time.perf_counter() - start
    worst = max(abs(r.v - oracle.khan_penrose((r.x, r.y))) for r in rows)
    print(f"{len(rows)} nodes in {elapsed:.2f}s, max abs error {worst:.3e}")


if __name__ == "__main__":
    main()
