"""Cleary-style compact hash table with linear probing and quotienting.

Keys sharing an initial address form a *group* of consecutive cells; groups
appear inside a cluster in the cyclic order of their addresses.  Two bit
strings recover the address of every cell without storing it:

* ``virgin[i]`` is set iff some stored key has initial address ``i``;
* ``change[j]`` is set iff cell ``j`` holds the first key of its group.

The t-th group of a cluster belongs to the t-th set virgin bit of that
cluster, so one walk from the cluster start decodes every address.  Quotient
cells store 0 for empty and ``q + 1`` otherwise.
"""

from collections import deque

from .bitvec import BitString, PackedArray
from .errors import CapacityError, NotFoundError
from .hashqr import QuotientHash


class CompactHashTable:
    """Map from keys in ``0..u-1`` to ``w_s``-bit satellite values."""

    def __init__(self, capacity, universe, sat_width=0, seed=0):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.universe = universe
        self.sat_width = sat_width
        self.seed = seed
        self.hash = QuotientHash.create(universe, capacity, seed)
        self.quotient_width = (self.hash.max_quotient + 1).bit_length()
        self._q = PackedArray(capacity, self.quotient_width)
        self._sat = PackedArray(capacity, sat_width)
        self._virgin = BitString(capacity)
        self._change = BitString(capacity)
        self._n = 0
        # first cell of the single cluster, only meaningful while full
        self._anchor = None
        self.cells_scanned = 0

    def __len__(self):
        return self._n

    def __contains__(self, x):
        return self.lookup(x) is not None

    def _next(self, j):
        j += 1
        return 0 if j == self.capacity else j

    def _prev(self, j):
        return (j or self.capacity) - 1

    def _cluster_start(self, j):
        if self._n == self.capacity:
            return self._anchor
        q = self._q
        while q[self._prev(j)]:
            j = self._prev(j)
            self.cells_scanned += 1
        return j

    def _count_virgin(self, s, h):
        """Set virgin bits in the cyclic range ``s..h`` inclusive."""
        virgin = self._virgin
        k = 0
        j = s
        while True:
            k += virgin[j]
            if j == h:
                return k
            j = self._next(j)

    def _nth_group(self, s, k):
        """Cell where the k-th group of the cluster starting at ``s`` begins.

        If the cluster has fewer than ``k`` groups, return the empty cell (or,
        when full, the anchor) that ends it.
        """
        change = self._change
        q = self._q
        j = s
        seen = 0
        while True:
            self.cells_scanned += 1
            if q[j] == 0:
                return j
            if change[j]:
                seen += 1
                if seen == k:
                    return j
            j = self._next(j)
            if j == s:
                return j

    def _group_of(self, h):
        """Start cell of the group with initial address ``h`` (virgin[h] set)."""
        s = self._cluster_start(h)
        return self._nth_group(s, self._count_virgin(s, h))

    def _scan_group(self, g, code):
        """Return (cell holding ``code`` or None, first cell after the group)."""
        q = self._q
        change = self._change
        j = g
        found = None
        while True:
            self.cells_scanned += 1
            if q[j] == code:
                found = j
            j = self._next(j)
            if q[j] == 0 or change[j] or j == g:
                return found, j

    def lookup(self, x):
        """Satellite stored for ``x``, or ``None`` if absent."""
        h, qx = self.hash.split(x)
        if not self._virgin[h]:
            return None
        found, _ = self._scan_group(self._group_of(h), qx + 1)
        return None if found is None else self._sat[found]

    def position(self, x):
        """Cell holding ``x``, or ``None``."""
        h, qx = self.hash.split(x)
        if not self._virgin[h]:
            return None
        found, _ = self._scan_group(self._group_of(h), qx + 1)
        return found

    def probe_length(self, x):
        """Cells from the initial address of ``x`` to its cell, inclusive."""
        pos = self.position(x)
        if pos is None:
            raise NotFoundError(x)
        h, _ = self.hash.split(x)
        return (pos - h) % self.capacity + 1

    def insert(self, x, value=0):
        """Store ``x -> value``; an existing key has its value overwritten."""
        if value < 0 or value >> self.sat_width:
            raise ValueError(f"satellite {value} does not fit in {self.sat_width} bits")
        h, qx = self.hash.split(x)
        code = qx + 1
        q = self._q
        if self._virgin[h]:
            found, pos = self._scan_group(self._group_of(h), code)
            if found is not None:
                self._sat[found] = value
                return
            starts_group = 0
        else:
            starts_group = 1
            if q[h] == 0:
                pos = h
            else:
                s = self._cluster_start(h)
                pos = self._nth_group(s, self._count_virgin(s, h) + 1)
        if self._n == self.capacity:
            raise CapacityError(f"table full at {self.capacity} keys")
        # shift pos..e-1 one cell right, e being the first empty cell from pos
        e = pos
        while q[e]:
            e = self._next(e)
        sat = self._sat
        change = self._change
        j = e
        while j != pos:
            i = self._prev(j)
            q[j] = q[i]
            sat[j] = sat[i]
            change.set(j, change[i])
            j = i
        q[pos] = code
        sat[pos] = value
        change.set(pos, starts_group)
        if starts_group:
            self._virgin.set(h, 1)
        self._n += 1
        if self._n == self.capacity:
            self._anchor = self._next(e)

    def delete(self, x):
        h, qx = self.hash.split(x)
        if not self._virgin[h]:
            raise NotFoundError(x)
        g = self._group_of(h)
        j, after = self._scan_group(g, qx + 1)
        if j is None:
            raise NotFoundError(x)
        q = self._q
        sat = self._sat
        change = self._change
        s = self._cluster_start(g)
        homes = self._decode_homes(s)
        alone = after == self._next(g)
        if alone:
            self._virgin.set(h, 0)
        elif change[j]:
            change.set(self._next(j), 1)
        # pull back the run of displaced cells that follows j
        t = j
        nxt = self._next(t)
        while nxt != s and q[nxt] and homes[nxt] != nxt:
            q[t] = q[nxt]
            sat[t] = sat[nxt]
            change.set(t, change[nxt])
            t = nxt
            nxt = self._next(t)
        q[t] = 0
        sat[t] = 0
        change.set(t, 0)
        self._n -= 1
        self._anchor = None

    def _decode_homes(self, s):
        """Map cell -> initial address for the cluster starting at ``s``."""
        q = self._q
        virgin = self._virgin
        change = self._change
        pending = deque()
        homes = {}
        home = None
        j = s
        while q[j]:
            if virgin[j]:
                pending.append(j)
            if change[j]:
                home = pending.popleft()
            homes[j] = home
            j = self._next(j)
            if j == s:
                break
        return homes

    def _cluster_starts(self):
        if self._n == 0:
            return
        if self._n == self.capacity:
            yield self._anchor
            return
        q = self._q
        for j in range(self.capacity):
            if q[j] and not q[self._prev(j)]:
                yield j

    def items(self):
        """Yield every stored ``(key, satellite)`` pair exactly once."""
        q = self._q
        for s in self._cluster_starts():
            for j, home in self._decode_homes(s).items():
                yield self.hash.key_of(home, q[j] - 1), self._sat[j]

    __iter__ = items

    def grow(self, capacity):
        """New table of the given capacity with the same contents."""
        if capacity < self._n:
            raise CapacityError(f"capacity {capacity} below size {self._n}")
        out = CompactHashTable(capacity, self.universe, self.sat_width, self.seed)
        for key, value in self.items():
            out.insert(key, value)
        return out

    def bits_used(self):
        """Quotients, satellites, both bit strings and a size word."""
        return self.capacity * (self.quotient_width + self.sat_width + 2) + 64

    def audit(self):
        """Check the grouping invariants; return a list of problems found."""
        problems = []
        q = self._q
        count = 0
        for s in self._cluster_starts():
            homes = self._decode_homes(s)
            prev_home = None
            for j, home in homes.items():
                count += 1
                if home is None:
                    problems.append(f"cell {j} has no group")
                    continue
                # cells from home..j must all be occupied
                k = home
                while k != j:
                    if not q[k]:
                        problems.append(f"gap at {k} inside probe path of cell {j}")
                        break
                    k = self._next(k)
                if prev_home is not None:
                    if (home - s) % self.capacity < (prev_home - s) % self.capacity:
                        problems.append(f"groups out of order at {j}")
                prev_home = home
        if count != self._n:
            problems.append(f"size {self._n} but {count} occupied cells")
        virgin_set = self._virgin.popcount
        groups = self._change.popcount
        if virgin_set != groups:
            problems.append(f"{virgin_set} virgin bits but {groups} groups")
        return problems


def cht_new(capacity, universe, sat_width=0, seed=0):
    return CompactHashTable(capacity, universe, sat_width, seed)
