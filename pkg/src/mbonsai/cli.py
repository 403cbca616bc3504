"""Command line front end: ``mbonsai {build,search,traverse,disptest}``.

Every verb prints one report, JSON by default (``"schema": 1``) or a
header plus one row of CSV with ``--csv``.  Exit codes: 0 success, 1 usage
error, 2 unreadable or malformed input, 3 capacity exceeded.
"""

import argparse
import csv
import io
import json
import math
import random
import resource
import sys
import time

from . import traverse
from .bench import disptest
from .errors import CapacityError, FormatError
from .ingest import read
from .trie import MBonsaiTrie

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_input(p):
    p.add_argument("--input", required=True, help="dataset path")
    p.add_argument("--format", choices=("fimi", "fastq", "lines"), required=True)
    p.add_argument("--alphabet", help="declared alphabet for --format lines (default: bytes)")
    p.add_argument("--sort-items", action="store_true", help="sort FIMI items within a line")
    p.add_argument("--variant", choices=("gamma", "recursive"), default="recursive")
    size = p.add_mutually_exclusive_group()
    size.add_argument("--alpha", type=float, help="fixed load factor (two-pass sizing)")
    size.add_argument("--beta", type=float, help="auto-resize slack")
    size.add_argument("--capacity", type=int, help="fixed number of slots")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rss", action="store_true", help="also report peak resident set size")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true", help="JSON output (the default)")


def make_parser():
    parser = _Parser(prog="mbonsai", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    _add_input(sub.add_parser("build", help="build a trie and report its space"))

    p = sub.add_parser("search", help="build, then look up query strings")
    _add_input(p)
    q = p.add_mutually_exclusive_group()
    q.add_argument("--queries", help="query file in the input format")
    q.add_argument("--sample", type=float, default=0.1, help="fraction of input strings to query")

    p = sub.add_parser("traverse", help="build, then traverse every node")
    _add_input(p)
    p.add_argument("--method", choices=("simple", "naive", "sorted"), default="simple")

    p = sub.add_parser("disptest", help="displacement statistics of a bare hash table")
    p.add_argument("--capacity", type=int, default=2**20)
    p.add_argument("--alpha", type=float, default=0.8)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    return parser


# -- helpers ------------------------------------------------------------


def _dataset(args, source=None):
    kw = {}
    if args.format == "lines" and args.alphabet:
        kw["mapping"] = args.alphabet
    if args.format == "fimi":
        kw["sort_items"] = args.sort_items
    return read(source or args.input, args.format, **kw)


def count_nodes(strings):
    """Distinct prefixes (the root included), by a dict keyed on edges."""
    edges = {}
    for s in strings:
        v = 0
        for c in s:
            v = edges.setdefault((v, c), len(edges) + 1)
    return len(edges) + 1


def build_trie(data, variant, *, alpha=None, beta=None, capacity=None, seed=0):
    """Insert every string of ``data``; return ``(trie, report fields)``."""
    if capacity is None and beta is None:
        alpha = 0.8 if alpha is None else alpha
        if not 0 < alpha < 1:
            raise UsageError("--alpha must lie in (0, 1)")
        capacity = max(2, math.ceil(count_nodes(data) / alpha))
    if capacity is not None:
        trie = MBonsaiTrie(data.sigma, capacity, beta=0, variant=variant, seed=seed)
    else:
        if beta <= 0:
            raise UsageError("--beta must be positive")
        trie = MBonsaiTrie(data.sigma, 16, beta=beta, variant=variant, seed=seed)
    strings = 0
    t0 = time.perf_counter()
    for s in data:
        trie.insert(s)
        strings += 1
    return trie, {"strings": strings, "build_seconds": time.perf_counter() - t0}


def _report(args, data, trie, extra):
    bits = trie.bits()
    D = trie.displacements
    rep = {
        "schema": SCHEMA,
        "verb": args.verb,
        "dataset": data.name,
        "format": data.format,
        "sigma": data.sigma,
        "strings": extra.pop("strings"),
        "nodes": len(trie),
        "capacity": trie.capacity,
        "alpha": len(trie) / trie.capacity,
        "variant": trie.variant,
        "seed": args.seed,
        "bits_per_node": bits.per_node,
        "q_bits": bits.q_bits,
        "d_bits": bits.d_bits,
        "aux_bits": extra.pop("aux_bits", 0),
        "total_bits": bits.total,
        "d_unary_bits": bits.d_unary_bits,
        "d_gamma_bits": bits.d_gamma_bits,
        "probes": trie.stats.probes,
        "grows": trie.stats.grows,
        "shrinks": trie.stats.shrinks,
        "block_reencodes": getattr(D, "reencodes", 0),
        "layer_transitions": getattr(D, "layer_touches", 0),
    }
    rep.update(extra)
    if args.rss:
        # ru_maxrss is in kilobytes on Linux
        rep["peak_rss_bytes"] = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
    return rep


# -- verbs --------------------------------------------------------------


def cmd_build(args):
    data = _dataset(args)
    trie, extra = build_trie(data, args.variant, alpha=args.alpha, beta=args.beta,
                             capacity=args.capacity, seed=args.seed)
    return _report(args, data, trie, extra)


def cmd_search(args):
    data = _dataset(args)
    trie, extra = build_trie(data, args.variant, alpha=args.alpha, beta=args.beta,
                             capacity=args.capacity, seed=args.seed)
    if args.queries:
        queries = list(_dataset(args, args.queries))
    else:
        if not 0 < args.sample <= 1:
            raise UsageError("--sample must lie in (0, 1]")
        rng = random.Random(args.seed)
        queries = [s for s in data if rng.random() < args.sample]
    before = trie.stats.probes
    hits = 0
    t0 = time.perf_counter()
    for s in queries:
        if all(0 <= c < trie.sigma for c in s) and trie.find(s) is not None:
            hits += 1
    elapsed = time.perf_counter() - t0
    extra.update(
        queries=len(queries),
        hits=hits,
        misses=len(queries) - hits,
        search_probes=trie.stats.probes - before,
        search_seconds=elapsed,
        ns_per_query=elapsed * 1e9 / len(queries) if queries else 0.0,
    )
    return _report(args, data, trie, extra)


def cmd_traverse(args):
    data = _dataset(args)
    trie, extra = build_trie(data, args.variant, alpha=args.alpha, beta=args.beta,
                             capacity=args.capacity, seed=args.seed)
    before = trie.stats.probes
    visits = 0
    order_ok = True
    t0 = time.perf_counter()
    if args.method == "naive":
        visits = traverse.naive_dfs(trie, lambda v, d, c: None)
        aux = scanned = 0
    elif args.method == "simple":
        counter = [0]

        def visit(v, d, c):
            counter[0] += 1

        idx = traverse.dfs(trie, visit)
        aux, scanned = idx.bits_used(), idx.scanned
        visits = counter[0]
    else:
        last = [None]
        counter = [0]

        def visit(v, path):
            nonlocal order_ok
            if last[0] is not None and not last[0] < path:
                order_ok = False
            last[0] = path
            counter[0] += 1

        idx = traverse.sorted_strings(trie, visit)
        aux, scanned = idx.bits_used(), idx.scanned
        visits = counter[0]
    elapsed = time.perf_counter() - t0
    extra.update(
        method=args.method,
        visits=visits,
        visits_match=visits == len(trie),
        order_ok=order_ok,
        traverse_probes=trie.stats.probes - before,
        index_scans=scanned,
        traverse_seconds=elapsed,
        aux_bits=aux,
    )
    return _report(args, data, trie, extra)


def cmd_disptest(args):
    if args.capacity < 1 or not 0 < args.alpha < 1 or args.trials < 1:
        raise UsageError("need --capacity >= 1, 0 < --alpha < 1 and --trials >= 1")
    t0 = time.perf_counter()
    rep = {"schema": SCHEMA, "verb": "disptest"}
    rep.update(disptest(args.capacity, args.alpha, args.trials, args.seed))
    rep["seconds"] = time.perf_counter() - t0
    return rep


VERBS = {"build": cmd_build, "search": cmd_search, "traverse": cmd_traverse,
         "disptest": cmd_disptest}


def render(rep, as_csv=False):
    if not as_csv:
        return json.dumps(rep, indent=2, sort_keys=True)
    flat = {k: v for k, v in rep.items() if not isinstance(v, (list, dict))}
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    w.writeheader()
    w.writerow(flat)
    return buf.getvalue().rstrip("\n")


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = make_parser().parse_args(argv)
        rep = VERBS[args.verb](args)
    except UsageError as exc:
        print(f"mbonsai: usage error: {exc}", file=err)
        return EXIT_USAGE
    except (FormatError, OSError, UnicodeDecodeError) as exc:
        print(f"mbonsai: input error: {exc}", file=err)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"mbonsai: capacity exceeded: {exc}", file=err)
        return EXIT_CAPACITY
    print(render(rep, args.csv), file=out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
