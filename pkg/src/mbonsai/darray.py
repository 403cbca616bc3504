"""Compact rewriteable arrays of small non-negative integers.

Two representations of the displacement array share one interface
(``len``, ``[i]``, ``[i] = v``, ``bits()``):

* :class:`GammaBlockArray` keeps blocks of 256 entries, each block a single
  buffer of gamma codes of ``value + 1``.  A read decodes the block up to the
  entry, a write decodes and re-encodes the whole block.
* :class:`LayeredArray` keeps a 3-bit array; values that do not fit escape
  to a compact hash table with 7-bit satellites, and larger values to a dict.
"""

from dataclasses import dataclass

import numpy as np

from .bitvec import PackedArray
from .cht import CompactHashTable
from .gamma import block_get, block_set
from .hashqr import find_prime

BLOCK = 256
POINTER_BITS = 64
# a red-black tree node holding a 64-bit key and value on a 64-bit machine
LAYER3_ENTRY_BITS = 384

DELTA0 = 3
DELTA1 = 7
ESCAPE = (1 << DELTA0) - 1               # 7: D0 marker for "look elsewhere"
DIRECT_MAX = ESCAPE - 1                  # 6
LAYER2_MAX = (1 << DELTA0) + (1 << DELTA1) - 2   # 134
LAYER2_LOAD = 0.8


@dataclass(frozen=True)
class ArrayBits:
    """Space accounting for an array of ``entries`` values.

    ``unary_bits`` and ``gamma_bits`` are the sizes of those codings of the
    current contents; ``layered_bits`` is the three-layer footprint; and
    ``storage_bits`` is what the active representation occupies.
    """

    entries: int
    unary_bits: int
    gamma_bits: int
    layered_bits: int
    storage_bits: int

    def per_entry(self, name):
        return getattr(self, name) / self.entries if self.entries else 0.0


def _gamma_cost(v):
    return 2 * (v + 1).bit_length() - 1


def layer2_capacity(length):
    return min(length, max(64, -(-length // 8)))


def _layered_estimate(length, mid, big):
    """Three-layer footprint for ``mid`` layer-2 and ``big`` layer-3 values."""
    if length == 0:
        return 0
    cap = layer2_capacity(length)
    while mid > LAYER2_LOAD * cap and cap < length:
        cap = min(length, cap * 2)
    qwidth = ((find_prime(length) - 1) // cap + 1).bit_length()
    cht_bits = cap * (qwidth + DELTA1 + 2) + 64
    return length * DELTA0 + cht_bits + big * LAYER3_ENTRY_BITS


class _Tally:
    """Running sums shared by both representations."""

    def _tally_init(self):
        self._total = 0
        self._gamma_total = self._length
        self._mid = 0
        self._big = 0

    def _tally(self, old, new):
        self._total += new - old
        self._gamma_total += _gamma_cost(new) - _gamma_cost(old)
        self._mid += (DIRECT_MAX < new <= LAYER2_MAX) - (DIRECT_MAX < old <= LAYER2_MAX)
        self._big += (new > LAYER2_MAX) - (old > LAYER2_MAX)

    def _check_index(self, i):
        if not 0 <= i < self._length:
            raise IndexError(f"index {i} out of range for length {self._length}")

    def __len__(self):
        return self._length

    def tolist(self):
        return [self[i] for i in range(self._length)]

    def total(self):
        return self._total


class GammaBlockArray(_Tally):
    """Blocks of gamma-coded ``value + 1``, one word buffer per block."""

    kind = "gamma"

    def __init__(self, length):
        if length < 0:
            raise ValueError("length must be non-negative")
        self._length = length
        self._blocks = []
        self._nbits = []
        for start in range(0, length, BLOCK):
            count = min(BLOCK, length - start)
            self._blocks.append(_ones_buffer(count))
            self._nbits.append(count)
        self._tally_init()
        self.reencodes = 0

    def __getitem__(self, i):
        self._check_index(i)
        return int(block_get(self._blocks[i >> 8], i & (BLOCK - 1))) - 1

    def __setitem__(self, i, v):
        self._check_index(i)
        if v < 0:
            raise ValueError("values must be non-negative")
        b = i >> 8
        old = self[i]
        if old == v:
            return
        count = min(BLOCK, self._length - (b << 8))
        words, nbits = block_set(self._blocks[b], count, i & (BLOCK - 1), v + 1)
        self._blocks[b] = words
        self._nbits[b] = nbits
        self._tally(old, v)
        self.reencodes += 1

    def payload_bits(self):
        return sum(self._nbits)

    def block_payload(self, b):
        return self._blocks[b], self._nbits[b]

    @property
    def num_blocks(self):
        return len(self._blocks)

    def bits(self):
        return ArrayBits(
            entries=self._length,
            unary_bits=self._length + self._total,
            gamma_bits=self._gamma_total,
            layered_bits=_layered_estimate(self._length, self._mid, self._big),
            storage_bits=self._gamma_total + POINTER_BITS * len(self._blocks),
        )


def _ones_buffer(count):
    words = np.zeros((count + 63) >> 6, np.uint64)
    full, rest = divmod(count, 64)
    words[:full] = np.uint64(0xFFFFFFFFFFFFFFFF)
    if rest:
        words[full] = np.uint64(((1 << rest) - 1) << (64 - rest))
    return words


class LayeredArray(_Tally):
    """Three layers: a 3-bit array, a compact hash table, and a dict."""

    kind = "recursive"

    def __init__(self, length, seed=0):
        if length < 0:
            raise ValueError("length must be non-negative")
        self._length = length
        self._seed = seed
        self.d0 = PackedArray(length, DELTA0)
        self.layer2 = (
            CompactHashTable(layer2_capacity(length), length, DELTA1, seed)
            if length
            else None
        )
        self.layer3 = {}
        self._tally_init()
        self.layer_touches = 0
        self.layer2_grows = 0

    def __getitem__(self, i):
        self._check_index(i)
        v = self.d0[i]
        if v != ESCAPE:
            return v
        sat = self.layer2.lookup(i)
        if sat is not None:
            return sat + ESCAPE
        return self.layer3[i]

    def __setitem__(self, i, v):
        self._check_index(i)
        if v < 0:
            raise ValueError("values must be non-negative")
        old = self[i]
        if old == v:
            return
        if old > DIRECT_MAX or v > DIRECT_MAX:
            self.layer_touches += 1
        if DIRECT_MAX < old <= LAYER2_MAX and not DIRECT_MAX < v <= LAYER2_MAX:
            self.layer2.delete(i)
        elif old > LAYER2_MAX and v <= LAYER2_MAX:
            del self.layer3[i]
        if v <= DIRECT_MAX:
            self.d0[i] = v
        elif v <= LAYER2_MAX:
            self.d0[i] = ESCAPE
            if old <= DIRECT_MAX or old > LAYER2_MAX:
                self._reserve_layer2()
            self.layer2.insert(i, v - ESCAPE)
        else:
            self.d0[i] = ESCAPE
            self.layer3[i] = v
        self._tally(old, v)

    def _reserve_layer2(self):
        table = self.layer2
        if len(table) + 1 > LAYER2_LOAD * table.capacity and table.capacity < self._length:
            self.layer2 = table.grow(min(self._length, table.capacity * 2))
            self.layer2_grows += 1

    def audit(self):
        """Count entries whose value is not held by exactly one layer."""
        violations = 0
        for i in range(self._length):
            direct = self.d0[i] != ESCAPE
            in2 = self.layer2.lookup(i) is not None
            in3 = i in self.layer3
            if direct + in2 + in3 != 1:
                violations += 1
        if len(self.layer2) != self._mid or len(self.layer3) != self._big:
            violations += 1
        return violations

    def bits(self):
        layered = 0
        if self._length:
            layered = (
                self.d0.bits_used()
                + self.layer2.bits_used()
                + len(self.layer3) * LAYER3_ENTRY_BITS
            )
        return ArrayBits(
            entries=self._length,
            unary_bits=self._length + self._total,
            gamma_bits=self._gamma_total,
            layered_bits=layered,
            storage_bits=layered,
        )


REPRESENTATIONS = {"gamma": GammaBlockArray, "recursive": LayeredArray}


def create_array(kind, length, seed=0):
    """Zero-filled displacement array of the named representation."""
    if kind == "gamma":
        return GammaBlockArray(length)
    if kind in ("recursive", "layered"):
        return LayeredArray(length, seed)
    raise ValueError(f"unknown representation {kind!r}")
