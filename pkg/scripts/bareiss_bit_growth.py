"""Largest intermediate integer in fraction-free elimination versus matrix size."""

import argparse

from slablb.poly_core import ExactMatrix, bareiss
from slablb.rng import grid_fractions, trial_rng


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=12)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'size':>4} {'mean_bits':>9} {'max_bits':>8} {'det_bits':>8}")
    for n in range(1, args.max_size + 1):
        bits, dets = [], []
        for k in range(args.trials):
            rng = trial_rng(args.seed, k, f"bits-{n}")
            det, b = bareiss(ExactMatrix([grid_fractions(rng, n) for _ in range(n)]))
            bits.append(b)
            dets.append(max(abs(det.numerator).bit_length(), det.denominator.bit_length()))
        print(f"{n:>4} {sum(bits) / len(bits):>9.1f} {max(bits):>8} {max(dets):>8}")


if __name__ == "__main__":
    main()
