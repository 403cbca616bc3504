"""Work done by the index-based traversal against probing every symbol.

    python scripts/traversal_cost.py --sigma 64 --strings 3000
"""

import argparse
import random
import time

from mbonsai.traverse import dfs, naive_dfs, sorted_strings
from mbonsai.trie import MBonsaiTrie


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sigma", type=int, default=64)
    p.add_argument("--strings", type=int, default=3000)
    p.add_argument("--max-length", type=int, default=8)
    p.add_argument("--seed", type=int, default=6)
    args = p.parse_args()

    rng = random.Random(args.seed)
    t = MBonsaiTrie(args.sigma, 16, beta=0.25, seed=args.seed)
    for _ in range(args.strings):
        t.insert([rng.randrange(args.sigma) for _ in range(rng.randint(1, args.max_length))])
    n, M = len(t), t.capacity
    print(f"sigma={args.sigma} n={n} M={M}")

    def run(name, fn):
        p0 = t.stats.probes
        t0 = time.perf_counter()
        scanned = fn()
        work = t.stats.probes - p0 + scanned
        print(f"{name:>7}: {work:>10} probes+scans ({work / (M + n):.2f} per M+n) "
              f"{time.perf_counter() - t0:.2f}s")

    run("simple", lambda: dfs(t, lambda v, d, c: None).scanned)
    run("sorted", lambda: sorted_strings(t, lambda v, path: None).scanned)
    run("naive", lambda: naive_dfs(t, lambda v, d, c: None) * 0)


if __name__ == "__main__":
    main()
