"""Bits per node of both displacement representations on synthetic reads.

Uniform random strings over ACGTN-sized alphabets stand in for FASTQ reads;
pass ``--input`` to measure a real dataset through the same code path.

    python scripts/space_per_node.py --strings 75000 --length 20
    python scripts/space_per_node.py --input reads.fq --format fastq
"""

import argparse
import math
import time

import numpy as np

from mbonsai.cli import count_nodes
from mbonsai.ingest import read
from mbonsai.trie import MBonsaiTrie


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--strings", type=int, default=75_000)
    p.add_argument("--length", type=int, default=20)
    p.add_argument("--sigma", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--input")
    p.add_argument("--format", choices=("fimi", "fastq", "lines"), default="fastq")
    args = p.parse_args()

    if args.input:
        data = read(args.input, args.format)
        strings, sigma = list(data), data.sigma
    else:
        rng = np.random.default_rng(args.seed)
        strings = rng.integers(0, args.sigma, (args.strings, args.length)).tolist()
        sigma = args.sigma
    n = count_nodes(strings)
    M = math.ceil(n / args.alpha)
    print(f"sigma={sigma} n={n} M={M} alpha={n / M:.4f}")
    print(f"{'variant':>10} {'bits/node':>10} {'Q':>6} {'D':>6} {'unary D':>8} {'gamma D':>8} {'secs':>6}")
    for variant in ("recursive", "gamma"):
        t0 = time.perf_counter()
        t = MBonsaiTrie(sigma, M, beta=0, variant=variant, seed=1)
        for s in strings:
            t.insert(s)
        b = t.bits()
        print(f"{variant:>10} {b.per_node:>10.3f} {b.q_bits / n:>6.2f} {b.d_bits / n:>6.2f} "
              f"{b.d_unary_bits / n:>8.2f} {b.d_gamma_bits / n:>8.2f} {time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    main()
