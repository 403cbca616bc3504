"""Multiplicative hashing with quotienting.

``h(x) = (a*x mod p) mod M`` gives the initial address and
``q(x) = (a*x mod p) // M`` the quotient.  Because ``x -> a*x mod p`` is a
bijection on ``0..p-1``, the pair ``(h(x), q(x))`` identifies ``x``.
"""

import random
from dataclasses import dataclass, field

from .errors import CapacityError

# p is at most 2u, and must stay below 2**64.
MAX_UNIVERSE = 2**63

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def find_prime(u):
    """Smallest prime strictly greater than ``u``."""
    if u < 1:
        raise ValueError("universe must be >= 1")
    if u >= MAX_UNIVERSE:
        raise CapacityError(f"universe {u} too large (limit {MAX_UNIVERSE})")
    p = u + 1
    while not is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class QuotientHash:
    """Hash ``0..u-1 -> 0..M-1`` that splits keys into (address, quotient)."""

    u: int
    M: int
    p: int
    a: int
    a_inv: int = field(repr=False)

    @classmethod
    def create(cls, u, M, seed=0):
        if M < 1:
            raise ValueError("capacity must be >= 1")
        if u < M:
            raise ValueError(f"universe {u} smaller than capacity {M}")
        p = find_prime(u)
        a = random.Random(seed).randrange(1, p)
        return cls(u, M, p, a, pow(a, -1, p))

    @property
    def max_quotient(self):
        return (self.p - 1) // self.M

    def split(self, x):
        """Return ``(h(x), q(x))``."""
        if not 0 <= x < self.u:
            raise ValueError(f"key {x} outside universe 0..{self.u - 1}")
        q, h = divmod(self.a * x % self.p, self.M)
        return h, q

    def matches(self, x, i, q):
        return self.split(x) == (i, q)

    def key_of(self, i, q):
        """Recover the key stored at initial address ``i`` with quotient ``q``.

        May return a value ``>= u`` when ``(i, q)`` belongs to no key.
        """
        return (q * self.M + i) * self.a_inv % self.p


def hq_new(u, M, seed=0):
    return QuotientHash.create(u, M, seed)
