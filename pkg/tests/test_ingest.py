import io

import pytest
from hypothesis import given, settings, strategies as st

from mbonsai.errors import FormatError
from mbonsai.ingest import read, read_fastq, read_fimi, read_lines
from mbonsai.traverse import sorted_strings
from mbonsai.trie import MBonsaiTrie


def prefixes(strings):
    out = {()}
    for s in strings:
        for k in range(1, len(s) + 1):
            out.add(tuple(s[:k]))
    return sorted(out)


def test_fimi_examples():
    d = read_fimi(io.StringIO("1 5 9\n"))
    assert list(d) == [[1, 5, 9]] and d.sigma == 10
    assert list(read_fimi(io.StringIO(""))) == []
    assert list(read_fimi(io.StringIO("0\n0 0\n"))) == [[0], [0, 0]]


def test_fimi_whitespace_and_crlf():
    d = read_fimi(io.StringIO("3\t1  2\r\n\r\n4\r\n"))
    assert list(d) == [[3, 1, 2], [], [4]]
    assert list(read_fimi(io.StringIO("3 1 2\n"), sort_items=True)) == [[1, 2, 3]]


def test_fimi_errors_carry_line():
    with pytest.raises(FormatError) as err:
        read_fimi(io.StringIO("1 2\n3 x\n"))
    assert err.value.line == 2
    with pytest.raises(FormatError):
        read_fimi(io.StringIO("-1\n"))


def test_fastq_examples():
    rec = "@r1\n{}\n+\nIIIII\n"
    assert list(read_fastq(io.StringIO(rec.format("ACGTN")))) == [[0, 1, 2, 3, 4]]
    assert list(read_fastq(io.StringIO(rec.format("acgt")))) == [[0, 1, 2, 3]]
    assert read_fastq(io.StringIO("")).sigma == 5


def test_fastq_errors_carry_record():
    good = "@a\nAC\n+\nII\n"
    with pytest.raises(FormatError) as err:
        list(read_fastq(io.StringIO(good + "@b\nAC\n")))
    assert err.value.record == 1
    with pytest.raises(FormatError):
        list(read_fastq(io.StringIO("@a\nAXC\n+\nIII\n")))
    with pytest.raises(FormatError):
        list(read_fastq(io.StringIO("a\nAC\n+\nII\n")))


def test_lines():
    d = read_lines(io.StringIO("ab\nac\nb\n"))
    assert d.sigma == 256 and list(d) == [[97, 98], [97, 99], [98]]
    assert list(read_lines(io.StringIO("\n"))) == [[]]
    d = read_lines(io.StringIO("ab\nac\n"), "ab")
    with pytest.raises(FormatError):
        list(d)
    with pytest.raises(ValueError):
        read_lines(io.StringIO("x"), "aa")


def test_dataset_is_reiterable_from_path(tmp_path):
    f = tmp_path / "t.dat"
    f.write_text("2 1\n0\n")
    d = read(f, "fimi")
    assert list(d) == list(d) == [[2, 1], [0]]
    assert d.name == str(f)


def test_complete_trie_count():
    strings = [[a, b] for a in range(3) for b in range(3)]
    t = MBonsaiTrie(3, 32, beta=0)
    for s in strings:
        t.insert(s)
    assert len(t) == 13


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), max_size=8), max_size=40))
def test_roundtrip_prefixes(strings):
    text = "".join(" ".join(map(str, s)) + "\n" for s in strings)
    d = read_fimi(io.StringIO(text))
    t = MBonsaiTrie(d.sigma, 16, beta=0.25)
    for s in d:
        assert all(x < d.sigma for x in s)
        t.insert(s)
    out = []
    sorted_strings(t, lambda v, p: out.append(p))
    assert out == prefixes(strings)
