"""Packed bit strings and fixed-width integer arrays.

Positions are 0-indexed; the rank argument of ``select1`` is 1-indexed, so
``select1(1)`` is the position of the first one.  Bits live in 64-bit words
of an ``array('Q')``, bit ``i`` at word ``i >> 6``, offset ``i & 63``.
"""

from array import array

WORD = 64
_WORD_MASK = (1 << WORD) - 1


def _nwords(nbits):
    return (nbits + WORD - 1) // WORD


class BitString:
    """Fixed-length bit string with rank, scan-based select and flip."""

    __slots__ = ("_m", "_words", "_ones", "version")

    def __init__(self, m, fill=0):
        if m < 0:
            raise ValueError("length must be non-negative")
        if fill not in (0, 1):
            raise ValueError("fill must be 0 or 1")
        self._m = m
        nw = _nwords(m)
        self._words = array("Q", [_WORD_MASK if fill else 0]) * nw
        if fill and m % WORD:
            self._words[-1] = (1 << (m % WORD)) - 1
        self._ones = m if fill else 0
        self.version = 0

    @classmethod
    def from_bits(cls, bits):
        """Build from an iterable of 0/1 values or a string like ``"10110"``."""
        if isinstance(bits, str):
            bits = [int(ch) for ch in bits]
        else:
            bits = list(bits)
        out = cls(len(bits))
        words = out._words
        for i, b in enumerate(bits):
            if b:
                words[i >> 6] |= 1 << (i & 63)
        out._ones = sum(1 for b in bits if b)
        return out

    def __len__(self):
        return self._m

    def _check(self, i):
        if not 0 <= i < self._m:
            raise IndexError(f"bit position {i} out of range for length {self._m}")

    def __getitem__(self, i):
        self._check(i)
        return (self._words[i >> 6] >> (i & 63)) & 1

    def set(self, i, bit):
        """Write ``bit`` at ``i``; a no-op if it already holds that value."""
        if self[i] != bit:
            self.flip(i)

    def flip(self, i):
        self._check(i)
        w = i >> 6
        mask = 1 << (i & 63)
        self._words[w] ^= mask
        self._ones += 1 if self._words[w] & mask else -1
        self.version += 1

    @property
    def popcount(self):
        return self._ones

    def rank1(self, i):
        """Number of ones in positions ``0..i`` inclusive."""
        self._check(i)
        words = self._words
        w = i >> 6
        total = 0
        for k in range(w):
            total += words[k].bit_count()
        return total + (words[w] & ((2 << (i & 63)) - 1)).bit_count()

    def select1(self, k):
        """Position of the ``k``-th one, by scanning words."""
        if not 1 <= k <= self._ones:
            raise IndexError(f"no such one: k={k}, popcount={self._ones}")
        for w, word in enumerate(self._words):
            c = word.bit_count()
            if k <= c:
                return (w << 6) + _select_in_word(word, k)
            k -= c
        raise AssertionError("popcount out of sync")

    def to_str(self):
        return "".join(str(self[i]) for i in range(self._m))

    def __repr__(self):
        body = self.to_str() if self._m <= 64 else f"<{self._m} bits>"
        return f"BitString({body})"

    def __eq__(self, other):
        return (
            isinstance(other, BitString)
            and self._m == other._m
            and self._words == other._words
        )

    def bits_used(self):
        return self._m

    def build_select(self):
        return SelectIndex(self)


def _select_in_word(word, k):
    """Offset of the k-th (1-indexed) set bit of ``word``."""
    for _ in range(k - 1):
        word &= word - 1
    return (word & -word).bit_length() - 1


class SelectIndex:
    """Word-block directory answering select1/rank1 over a frozen BitString.

    Stores the cumulative popcount before each word plus, for every 64th one,
    the word that holds it.  A flip on the source after the build makes every
    query raise.
    """

    SAMPLE = 64

    def __init__(self, bits):
        self._bits = bits
        self._version = bits.version
        words = bits._words
        cum = array("Q", [0]) * (len(words) + 1)
        samples = array("Q")
        total = 0
        for w, word in enumerate(words):
            c = word.bit_count()
            # record the word holding ones number total+1 .. total+c that hit a sample
            nxt = len(samples) * self.SAMPLE + 1
            while nxt <= total + c:
                samples.append(w)
                nxt += self.SAMPLE
            total += c
            cum[w + 1] = total
        self._cum = cum
        self._samples = samples
        self.ones = total

    def _fresh(self):
        if self._bits.version != self._version:
            raise RuntimeError("bit string changed after the select index was built")

    def select1(self, k):
        self._fresh()
        if not 1 <= k <= self.ones:
            raise IndexError(f"no such one: k={k}, popcount={self.ones}")
        cum = self._cum
        w = self._samples[(k - 1) // self.SAMPLE]
        while cum[w + 1] < k:
            w += 1
        return (w << 6) + _select_in_word(self._bits._words[w], k - cum[w])

    def rank1(self, i):
        self._fresh()
        self._bits._check(i)
        w = i >> 6
        return self._cum[w] + (self._bits._words[w] & ((2 << (i & 63)) - 1)).bit_count()

    def bits_used(self):
        return WORD * (len(self._cum) + len(self._samples))


class PackedArray:
    """Array of ``length`` unsigned integers, each stored in ``width`` bits.

    ``width`` may be 0, in which case every cell reads as 0.
    """

    __slots__ = ("length", "width", "_mask", "_words")

    def __init__(self, length, width):
        if length < 0 or width < 0 or width > WORD:
            raise ValueError(f"bad packed array shape ({length}, {width})")
        self.length = length
        self.width = width
        self._mask = (1 << width) - 1
        self._words = array("Q", [0]) * _nwords(length * width)

    def __len__(self):
        return self.length

    def __getitem__(self, i):
        if not 0 <= i < self.length:
            raise IndexError(f"index {i} out of range for length {self.length}")
        w = self.width
        if w == 0:
            return 0
        bit = i * w
        k = bit >> 6
        off = bit & 63
        words = self._words
        if off + w <= WORD:
            return (words[k] >> off) & self._mask
        return ((words[k] >> off) | (words[k + 1] << (WORD - off))) & self._mask

    def __setitem__(self, i, value):
        if not 0 <= i < self.length:
            raise IndexError(f"index {i} out of range for length {self.length}")
        mask = self._mask
        if value < 0 or value > mask:
            raise ValueError(f"value {value} does not fit in {self.width} bits")
        w = self.width
        if w == 0:
            return
        bit = i * w
        k = bit >> 6
        off = bit & 63
        words = self._words
        words[k] = (words[k] & ~(mask << off) & _WORD_MASK) | ((value << off) & _WORD_MASK)
        spill = off + w - WORD
        if spill > 0:
            high = (1 << spill) - 1
            words[k + 1] = (words[k + 1] & ~high) | (value >> (w - spill))

    def __iter__(self):
        for i in range(self.length):
            yield self[i]

    def tolist(self):
        return list(self)

    def fill(self, value):
        for i in range(self.length):
            self[i] = value

    def bits_used(self):
        return self.length * self.width


class BitWriter:
    """Append-only MSB-first bit buffer."""

    def __init__(self):
        self._words = array("Q")
        self._acc = 0
        self._nacc = 0
        self.nbits = 0

    def write(self, value, nbits):
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | value
        self._nacc += nbits
        self.nbits += nbits
        while self._nacc >= WORD:
            self._nacc -= WORD
            self._words.append(self._acc >> self._nacc)
            self._acc &= (1 << self._nacc) - 1

    def write_gamma(self, value):
        """Append the Elias-gamma code of ``value`` (``value >= 1``)."""
        if value < 1:
            raise ValueError("gamma codes need value >= 1")
        nb = value.bit_length()
        self.write(value, 2 * nb - 1)

    def reader(self):
        return BitReader(self._words, self._acc, self._nacc, self.nbits)


class BitReader:
    """Sequential reader over a :class:`BitWriter`'s contents."""

    def __init__(self, words, tail, ntail, nbits):
        self._words = words
        self._tail = tail
        self._ntail = ntail
        self._next = 0
        self._buf = 0
        self._nbuf = 0
        self._left = nbits

    def _refill(self):
        if self._next < len(self._words):
            self._buf = (self._buf << WORD) | self._words[self._next]
            self._nbuf += WORD
            self._next += 1
            return True
        if self._ntail:
            self._buf = (self._buf << self._ntail) | self._tail
            self._nbuf += self._ntail
            self._ntail = 0
            return True
        return False

    def read(self, nbits):
        while self._nbuf < nbits:
            if not self._refill():
                raise EOFError("read past end of bit buffer")
        self._nbuf -= nbits
        self._left -= nbits
        value = self._buf >> self._nbuf
        self._buf &= (1 << self._nbuf) - 1
        return value

    def read_gamma(self):
        zeros = 0
        while True:
            if self._buf:
                lead = self._nbuf - self._buf.bit_length()
                zeros += lead
                self._nbuf -= lead
                self._left -= lead
                break
            zeros += self._nbuf
            self._left -= self._nbuf
            self._nbuf = 0
            if not self._refill():
                raise EOFError("truncated gamma code")
        return self.read(zeros + 1)

    @property
    def remaining(self):
        return self._left
