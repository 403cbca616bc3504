"""Dataset readers yielding symbol strings (lists of ints).

A :class:`Dataset` is re-iterable: every iteration reopens or rewinds the
source and streams it line by line, so the trie builder can make two passes
without holding the file in memory.
"""

import io
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError

BASES = {"A": 0, "C": 1, "G": 2, "T": 3, "N": 4}


@dataclass
class Dataset:
    format: str
    sigma: int
    source: object
    name: str = ""
    options: dict = field(default_factory=dict)

    def __iter__(self):
        parse = _PARSERS[self.format]
        with _open(self.source) as fh:
            yield from parse(fh, **self.options)

    def strings(self):
        return list(self)


class _open:
    """Context manager over a path or an already open text stream."""

    def __init__(self, source):
        self.source = source
        self.fh = None

    def __enter__(self):
        if isinstance(self.source, (str, Path)):
            self.fh = open(self.source, encoding="utf-8", newline=None)
            return self.fh
        if self.source.seekable():
            self.source.seek(0)
        return self.source

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()


def _source(source):
    """Accept a path, an open text stream, or literal text (as StringIO)."""
    if isinstance(source, (str, Path)) and not Path(source).exists() and "\n" in str(source):
        return io.StringIO(source)
    return source


def _name(source):
    return str(source) if isinstance(source, (str, Path)) else getattr(source, "name", "")


# -- FIMI ---------------------------------------------------------------


def _parse_fimi(fh, sort_items=False):
    for lineno, line in enumerate(fh, 1):
        try:
            items = [int(tok) for tok in line.split()]
        except ValueError:
            raise FormatError("non-integer item", line=lineno) from None
        if any(x < 0 for x in items):
            raise FormatError("negative item", line=lineno)
        if sort_items:
            items.sort()
        yield items


def read_fimi(source, sort_items=False):
    """Transactions of whitespace-separated item ids, one per line.

    ``sigma`` is one more than the largest item (1 for an empty file),
    found by a first pass.  Duplicate items within a line are kept.
    """
    source = _source(source)
    opts = {"sort_items": sort_items}
    top = -1
    with _open(source) as fh:
        for items in _parse_fimi(fh):
            if items:
                top = max(top, max(items))
    return Dataset("fimi", max(top + 1, 1), source, _name(source), opts)


# -- FASTQ --------------------------------------------------------------


def _parse_fastq(fh):
    record = 0
    while True:
        header = fh.readline()
        if not header:
            return
        if not header.strip():
            continue
        seq, plus, qual = fh.readline(), fh.readline(), fh.readline()
        if not header.startswith("@"):
            raise FormatError("header does not start with '@'", record=record)
        if not qual or not plus.startswith("+"):
            raise FormatError("truncated or malformed record", record=record)
        try:
            yield [BASES[ch] for ch in seq.strip().upper()]
        except KeyError as exc:
            raise FormatError(f"unexpected base {exc.args[0]!r}", record=record) from None
        record += 1


def read_fastq(source):
    """Sequence lines of 4-line FASTQ records over ACGTN (sigma 5)."""
    source = _source(source)
    return Dataset("fastq", len(BASES), source, _name(source))


# -- plain lines --------------------------------------------------------


def _parse_lines(fh, alphabet=None):
    table = None if alphabet is None else {ch: k for k, ch in enumerate(alphabet)}
    for lineno, line in enumerate(fh, 1):
        line = line.rstrip("\r\n")
        if table is None:
            yield list(line.encode("utf-8"))
            continue
        try:
            yield [table[ch] for ch in line]
        except KeyError as exc:
            raise FormatError(f"symbol {exc.args[0]!r} outside alphabet", line=lineno) from None


def read_lines(source, mapping="byte"):
    """One string per line; ``mapping`` is ``"byte"`` or an alphabet string."""
    source = _source(source)
    if mapping == "byte":
        return Dataset("lines", 256, source, _name(source), {"alphabet": None})
    if not mapping or len(set(mapping)) != len(mapping):
        raise ValueError("alphabet must be non-empty without repeats")
    return Dataset("lines", len(mapping), source, _name(source), {"alphabet": mapping})


_PARSERS = {"fimi": _parse_fimi, "fastq": _parse_fastq, "lines": _parse_lines}

READERS = {"fimi": read_fimi, "fastq": read_fastq, "lines": read_lines}


def read(source, fmt, **kw):
    return READERS[fmt](source, **kw)
