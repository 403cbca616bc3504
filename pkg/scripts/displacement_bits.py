"""Bits per displacement entry for uniform keys under linear probing.

    python scripts/displacement_bits.py --log-capacity 20 --trials 5
"""

import argparse

from mbonsai.bench import disptest, predicted_unary


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--log-capacity", type=int, default=20)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--alphas", type=float, nargs="+", default=[0.7, 0.8, 0.9])
    args = p.parse_args()

    M = 2**args.log_capacity
    print(f"M = 2^{args.log_capacity}, {args.trials} trials")
    print(f"{'alpha':>6} {'predicted':>10} {'unary':>14} {'gamma':>14} {'mean D':>8}")
    for a in args.alphas:
        r = disptest(M, a, args.trials, args.seed)
        print(f"{a:>6.2f} {predicted_unary(a):>10.4f} "
              f"{r['unary_bits_per_entry']:>8.4f}+-{r['unary_bits_per_entry_se']:.4f} "
              f"{r['gamma_bits_per_entry']:>8.4f}+-{r['gamma_bits_per_entry_se']:.4f} "
              f"{r['mean_displacement']:>8.3f}")


if __name__ == "__main__":
    main()
