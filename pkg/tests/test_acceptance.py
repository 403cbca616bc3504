"""Acceptance checks, one test per criterion.

Each test prints ``PASS`` or ``FAIL`` with the measured numbers; the lines
are repeated in the terminal summary.  Run directly with
``python tests/test_acceptance.py`` or through pytest.
"""

import math
import random
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from mbonsai.bench import disptest
from mbonsai.bitvec import BitString
from mbonsai.cht import CompactHashTable
from mbonsai.cli import count_nodes
from mbonsai.gamma import block_decode, block_encode, gamma_decode_all, gamma_encode
from mbonsai.hashqr import QuotientHash
from mbonsai.oracle import OracleTrie, ShadowMap, run_differential
from mbonsai.traverse import dfs, naive_dfs, sorted_strings
from mbonsai.trie import MBonsaiTrie

pytestmark = pytest.mark.slow


def verdict(number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


# -- 1 and 2: displacement statistics ------------------------------------

UNARY = {0.7: 1.8167, 0.8: 2.6, 0.9: 5.05}
GAMMA = {0.7: (1.70, 1.80), 0.8: (2.05, 2.18), 0.9: (2.60, 2.75)}


@pytest.fixture(scope="module")
def displacement():
    t0 = time.perf_counter()
    reps = {a: disptest(2**20, a, trials=5, seed=2024) for a in UNARY}
    return reps, time.perf_counter() - t0


def test_criterion_1_unary_bits(displacement):
    reps, seconds = displacement
    parts, ok = [], seconds < 30
    for a, want in UNARY.items():
        got = reps[a]["unary_bits_per_entry"]
        ok &= abs(got - want) <= 0.03 * want
        parts.append(f"a={a}: {got:.4f} (target {want} +-3%)")
    verdict(1, ok, "; ".join(parts) + f"; {seconds:.1f}s total (limit 30s)")


def test_criterion_2_gamma_bits(displacement):
    reps, _ = displacement
    parts, ok = [], True
    for a, (lo, hi) in GAMMA.items():
        got = reps[a]["gamma_bits_per_entry"]
        ok &= lo <= got <= hi
        parts.append(f"a={a}: {got:.4f} in [{lo}, {hi}]")
    verdict(2, ok, "; ".join(parts))


# -- 3: space per node ----------------------------------------------------


def uniform_strings(count, length, sigma, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, sigma, size=(count, length)).tolist()


@pytest.fixture(scope="module")
def million_node_strings():
    strings = uniform_strings(75_000, 20, 5, seed=3)
    return strings, count_nodes(strings)


def build_fixed(strings, n, variant, alpha=0.8):
    t = MBonsaiTrie(5, math.ceil(n / alpha), beta=0, variant=variant, seed=1)
    for s in strings:
        t.insert(s)
    return t


@pytest.fixture(scope="module")
def space_runs(million_node_strings):
    strings, n = million_node_strings
    out = {}
    for variant in ("recursive", "gamma"):
        t0 = time.perf_counter()
        t = build_fixed(strings, n, variant)
        out[variant] = (t, time.perf_counter() - t0)
    return out


def test_criterion_3_bits_per_node(space_runs):
    targets = {"recursive": 8.93, "gamma": 6.78}
    parts, ok, total = [], True, 0.0
    for variant, (t, seconds) in space_runs.items():
        per = t.bits().per_node
        ok &= abs(per - targets[variant]) <= 0.10 * targets[variant]
        ok &= len(t) >= 10**6 and abs(t.load - 0.8) < 1e-3
        total += seconds
        parts.append(f"{variant}: {per:.3f} bits/node (target {targets[variant]} +-10%)")
    ok &= total < 120
    t = space_runs["recursive"][0]
    verdict(3, ok, "; ".join(parts) + f"; n={len(t)}, M={t.capacity}; build {total:.1f}s (limit 120s)")


# -- 4: differential correctness ------------------------------------------


@pytest.mark.parametrize("sigma", [2, 5, 64, 1000])
def test_criterion_4_differential(sigma):
    parts, ok = [], True
    grows = shrinks = 0
    for beta in (0.0, 0.25):
        capacity = 100_001 if beta == 0 else 16
        diff = run_differential(sigma, 100_000, seed=sigma, beta=beta, capacity=capacity)
        st = diff.trie.stats
        grows += st.grows
        shrinks += st.shrinks
        bad = len(diff.divergences) + len(diff.check_all())
        ok &= bad == 0 and len(diff.log) == 100_000
        parts.append(f"beta={beta}: {len(diff.log)} ops, {bad} divergences, "
                     f"{st.grows} grows, {st.shrinks} shrinks")
    ok &= grows > 0 and shrinks > 0
    verdict(4, ok, f"sigma={sigma}: " + "; ".join(parts))


# -- 5: traversal ---------------------------------------------------------


def test_criterion_5_traversal(space_runs):
    parts, ok = [], True
    # visit count on the million-node trie
    big = space_runs["recursive"][0]
    visits = [0]
    dfs(big, lambda v, d, c: visits.__setitem__(0, visits[0] + 1))
    ok &= visits[0] == len(big)
    parts.append(f"simple visits {visits[0]} = n {len(big)}")

    # sorted order and oracle equality
    rng = random.Random(5)
    t = MBonsaiTrie(5, 16, beta=0.25, seed=5)
    o = OracleTrie(5)
    for _ in range(8000):
        s = [rng.randrange(5) for _ in range(rng.randint(1, 20))]
        t.insert(s)
        o.insert(s)
    paths = []
    sorted_strings(t, lambda v, p: paths.append(p))
    increasing = all(a < b for a, b in zip(paths, paths[1:]))
    ok &= increasing and paths == o.strings()
    parts.append(f"sorted on n={len(t)}: strictly increasing={increasing}, equals oracle={paths == o.strings()}")

    # simple vs naive for sigma = 64
    t = MBonsaiTrie(64, 16, beta=0.25, seed=6)
    for _ in range(3000):
        t.insert([rng.randrange(64) for _ in range(rng.randint(1, 8))])
    n, M = len(t), t.capacity
    simple_set, naive_set = set(), set()
    p0 = t.stats.probes
    idx = dfs(t, lambda v, d, c: simple_set.add(v))
    simple_cost = t.stats.probes - p0 + idx.scanned
    p0 = t.stats.probes
    naive_dfs(t, lambda v, d, c: naive_set.add(v))
    naive_cost = t.stats.probes - p0
    c = 4
    ok &= simple_set == naive_set and len(simple_set) == n
    ok &= simple_cost <= c * (M + n) and naive_cost >= n * 64
    parts.append(f"sigma=64 n={n} M={M}: simple cost {simple_cost} <= {c}(M+n)={c * (M + n)}, "
                 f"naive probes {naive_cost} >= n*sigma={n * 64}, visit sets equal={simple_set == naive_set}")
    verdict(5, ok, "; ".join(parts))


# -- 6: compact hash table ------------------------------------------------


def test_criterion_6_cht():
    rng = random.Random(6)
    Mc, u = 4096, 2**24
    t, shadow = CompactHashTable(Mc, u, 6, seed=6), ShadowMap(Mc)
    mismatches, peak = 0, 0.0
    live = []
    for step in range(100_000):
        target = 0.95 * min(1.0, step / 40_000)
        x = rng.randrange(u)
        if live and (len(live) >= target * Mc or rng.random() < 0.3):
            x = live.pop(rng.randrange(len(live)))
            shadow.delete(x)
            t.delete(x)
        elif rng.random() < 0.5 or not live:
            v = rng.randrange(64)
            if shadow.lookup(x) is None:
                live.append(x)
            shadow.insert(x, v)
            t.insert(x, v)
        else:
            x = rng.choice(live) if rng.random() < 0.5 else x
            mismatches += t.lookup(x) != shadow.lookup(x)
        peak = max(peak, len(t) / Mc)
    mismatches += sorted(t.items()) != shadow.items()
    mismatches += len(t.audit())

    probes = []
    for seed in range(4):
        table = CompactHashTable(2**17, 2**32, 0, seed=seed)
        keys = random.Random(seed).sample(range(2**32), int(0.8 * 2**17))
        for x in keys:
            table.insert(x)
        probes.extend(table.probe_length(x) for x in keys)
    mean = sum(probes) / len(probes)
    ok = mismatches == 0 and peak >= 0.949 and mean <= 3.05
    verdict(6, ok, f"100000 ops, peak load {peak:.3f}, {mismatches} mismatches; "
                   f"mean probes at 0.8 = {mean:.4f} (limit 3.05) over {len(probes)} keys")


# -- 7: resizing ----------------------------------------------------------


def strings_of(trie):
    out = []
    sorted_strings(trie, lambda v, p: out.append(p))
    return out


def test_criterion_7_resize():
    rng = random.Random(7)
    beta = 0.25
    t = MBonsaiTrie(4, 16, beta=beta, seed=7)
    o = OracleTrie(4)
    while len(t) < 10_000:
        s = [rng.randrange(4) for _ in range(rng.randint(1, 14))]
        t.insert(s)
        o.insert(s)
    before = strings_of(t)
    same = before == o.strings()
    grown = t.resize(4 * t.capacity)
    shrunk = grown.resize(len(t) + 1)
    same &= strings_of(grown) == before == strings_of(shrunk)

    # delete leaves until the trie has shrunk a few times
    for path in sorted(o.strings()[1:], key=len, reverse=True)[:7000]:
        t.del_leaf(t.find(path[:-1]), path[-1])
        o.del_leaf(o.insert(path[:-1]), path[-1])
    same &= strings_of(t) == o.strings()
    log = t.stats.resize_log
    floor_ok = True
    worst = math.inf
    for (_, _, n_prev, _), (_, updates, _, _) in zip(log, log[1:]):
        bound = beta * n_prev / (4 * (1 + beta))
        worst = min(worst, updates / bound if bound else math.inf)
        floor_ok &= updates >= math.floor(bound)
    ok = same and t.stats.grows > 0 and t.stats.shrinks > 0 and floor_ok
    verdict(7, ok, f"string set preserved={same}; {t.stats.grows} grows, {t.stats.shrinks} shrinks; "
                   f"min updates/resize over beta*n/(4(1+beta)) = {worst:.2f}")


# -- 8: unit suites -------------------------------------------------------


def test_criterion_8_units():
    values = list(range(1, 2**16 + 1))
    stream = "".join(gamma_encode(v) for v in values)
    words, _ = block_encode(np.array(values, np.int64))
    gamma_ok = gamma_decode_all(stream) == values == block_decode(words, len(values)).tolist()

    rng = random.Random(8)
    rs_ok = True
    for _ in range(1000):
        bits = [int(rng.random() < 0.4) for _ in range(rng.randint(1, 10_000))]
        b = BitString.from_bits(bits)
        idx = b.build_select()
        ones = [i for i, x in enumerate(bits) if x]
        for k in rng.sample(range(1, len(ones) + 1), min(10, len(ones))):
            rs_ok &= idx.select1(k) == ones[k - 1] and b.rank1(ones[k - 1]) == k

    inj_ok = True
    for M in (1, 257, 2**16):
        h = QuotientHash.create(2**16, M, seed=M)
        pairs = {h.split(x) for x in range(2**16)}
        inj_ok &= len(pairs) == 2**16
    ok = gamma_ok and rs_ok and inj_ok
    verdict(8, ok, f"gamma roundtrip to 2^16={gamma_ok}; rank/select on 1000 strings={rs_ok}; "
                   f"hash injective for u=2^16={inj_ok}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
