"""Displacement experiment on a bare linear-probing quotient table.

``alpha * M`` distinct uniform keys are hashed with :class:`QuotientHash`
and inserted by linear probing; the resulting displacement array is
costed in unary (``D + 1`` bits per slot) and in gamma (``|gamma(D + 1)|``
bits per slot), both per slot of the table.
"""

import math
import random
from dataclasses import asdict, dataclass

import numba
import numpy as np

from .hashqr import QuotientHash


@numba.njit(cache=True)
def _probe_all(homes, M):
    """Insert keys with the given initial addresses; return the D array."""
    used = np.zeros(M, np.bool_)
    D = np.zeros(M, np.int64)
    for k in range(homes.shape[0]):
        j = homes[k]
        d = 0
        while used[j]:
            j += 1
            d += 1
            if j == M:
                j = 0
        used[j] = True
        D[j] = d
    return D


@numba.njit(cache=True)
def _gamma_bits(D):
    total = 0
    for v in D:
        x = v + 1
        length = 0
        while x:
            length += 1
            x >>= 1
        total += 2 * length - 1
    return total


@dataclass(frozen=True)
class Trial:
    seed: int
    keys: int
    mean_displacement: float
    max_displacement: int
    unary_bits_per_entry: float
    gamma_bits_per_entry: float


def displacement_trial(M, alpha, seed, universe=None):
    universe = universe or 64 * M
    h = QuotientHash.create(universe, M, seed)
    n = int(alpha * M)
    rng = random.Random(seed + 1)
    keys = np.fromiter(rng.sample(range(universe), n), np.int64, n)
    # a*x < p**2 < 2**63 needs p < 2**31.5; fall back to Python ints beyond
    if h.p < 2**31:
        homes = (keys * h.a % h.p) % M
    else:
        homes = np.fromiter((h.a * int(x) % h.p % M for x in keys), np.int64, n)
    D = _probe_all(homes.astype(np.int64), M)
    total = int(D.sum())
    return Trial(
        seed=seed,
        keys=n,
        mean_displacement=total / n if n else 0.0,
        max_displacement=int(D.max()) if M else 0,
        unary_bits_per_entry=(M + total) / M,
        gamma_bits_per_entry=int(_gamma_bits(D)) / M,
    )


def _mean_se(xs):
    m = sum(xs) / len(xs)
    if len(xs) < 2:
        return m, 0.0
    var = sum((x - m) ** 2 for x in xs) / (len(xs) - 1)
    return m, math.sqrt(var / len(xs))


def predicted_unary(alpha):
    """Expected unary bits per slot: 1 + alpha**2 / (2 (1 - alpha))."""
    return 1 + alpha * alpha / (2 * (1 - alpha))


def disptest(M, alpha, trials=5, seed=0, universe=None):
    """Run ``trials`` independent tables; summarize means and standard errors."""
    runs = [displacement_trial(M, alpha, seed + t, universe) for t in range(trials)]
    out = {"capacity": M, "alpha": alpha, "trials": trials, "seed": seed,
           "predicted_unary_bits_per_entry": predicted_unary(alpha)}
    for name in ("mean_displacement", "unary_bits_per_entry", "gamma_bits_per_entry"):
        m, se = _mean_se([getattr(r, name) for r in runs])
        out[name] = m
        out[name + "_se"] = se
    out["runs"] = [asdict(r) for r in runs]
    return out
