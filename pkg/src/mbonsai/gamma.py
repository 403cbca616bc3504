"""Elias-gamma codes.

The pure functions work on strings of ``"0"``/``"1"``.  The ``block_*``
kernels are compiled with numba and operate on MSB-first ``uint64`` word
buffers holding a concatenation of codes, one buffer per block of a
displacement array.
"""

import numba
import numpy as np

from .errors import FormatError


def gamma_length(v):
    """Bits in the gamma code of ``v``."""
    if v < 1:
        raise ValueError("gamma codes are defined for v >= 1")
    return 2 * v.bit_length() - 1


def gamma_encode(v):
    if v < 1:
        raise ValueError("gamma codes are defined for v >= 1")
    body = format(v, "b")
    return "0" * (len(body) - 1) + body


def gamma_decode(bits, offset=0):
    """Decode one code starting at ``offset``; return ``(v, next_offset)``."""
    one = bits.find("1", offset)
    if one < 0:
        raise FormatError(f"truncated gamma code at offset {offset}")
    zeros = one - offset
    end = one + zeros + 1
    if end > len(bits):
        raise FormatError(f"truncated gamma code at offset {offset}")
    return int(bits[one:end], 2), end


def gamma_decode_all(bits):
    out = []
    pos = 0
    while pos < len(bits):
        v, pos = gamma_decode(bits, pos)
        out.append(v)
    return out


_ONE = np.uint64(1)


@numba.njit(cache=True)
def _bit(words, pos):
    return (words[pos >> 6] >> np.uint64(63 - (pos & 63))) & _ONE


@numba.njit(cache=True)
def block_get(words, i):
    """Decode codes up to index ``i`` and return code ``i``'s value."""
    pos = 0
    k = 0
    while True:
        z = 0
        while _bit(words, pos) == 0:
            z += 1
            pos += 1
        v = 0
        for _ in range(z + 1):
            v = (v << 1) | np.int64(_bit(words, pos))
            pos += 1
        if k == i:
            return v
        k += 1


@numba.njit(cache=True)
def block_decode(words, count):
    out = np.empty(count, np.int64)
    pos = 0
    for k in range(count):
        z = 0
        while _bit(words, pos) == 0:
            z += 1
            pos += 1
        v = 0
        for _ in range(z + 1):
            v = (v << 1) | np.int64(_bit(words, pos))
            pos += 1
        out[k] = v
    return out


@numba.njit(cache=True)
def block_encode(values):
    """Encode positive ``values``; return ``(words, nbits)``."""
    nbits = 0
    for k in range(values.shape[0]):
        x = values[k]
        length = 0
        while x:
            length += 1
            x >>= 1
        nbits += 2 * length - 1
    out = np.zeros((nbits + 63) >> 6, np.uint64)
    pos = 0
    for k in range(values.shape[0]):
        x = values[k]
        length = 0
        y = x
        while y:
            length += 1
            y >>= 1
        pos += length - 1
        for b in range(length - 1, -1, -1):
            if (x >> b) & 1:
                out[pos >> 6] |= _ONE << np.uint64(63 - (pos & 63))
            pos += 1
    return out, nbits


@numba.njit(cache=True)
def block_set(words, count, i, v):
    """Decode the block, replace code ``i`` by ``v`` and re-encode."""
    values = block_decode(words, count)
    values[i] = v
    return block_encode(values)


def words_to_str(words, nbits):
    """Render a block buffer as a ``"0"/"1"`` string (for tests and audits)."""
    full = "".join(format(int(w), "064b") for w in words)
    return full[:nbits]
