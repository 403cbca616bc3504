import random

import pytest
from hypothesis import given, settings, strategies as st

from mbonsai.errors import CapacityError, InvalidNodeError, NotFoundError
from mbonsai.oracle import Op, OracleTrie, replay
from mbonsai.traverse import sorted_strings
from mbonsai.trie import DELETED, MBonsaiTrie, trie_create


def strings_of(trie):
    out = []
    sorted_strings(trie, lambda v, path: out.append(path))
    return out


def random_strings(rng, count, sigma, max_len):
    return [[rng.randrange(sigma) for _ in range(rng.randint(0, max_len))] for _ in range(count)]


def test_fresh_trie():
    t = trie_create(5, 16, 0.25, seed=3)
    assert len(t) == 1
    assert t.get_root() == t.root and 0 <= t.root < t.capacity
    assert all(t.get_child(t.root, c) is None for c in range(5))
    assert trie_create(5, 16, 0.25, seed=3).root == t.root
    assert t.bits().per_node == t.bits().total


def test_root_stable_without_resize():
    t = MBonsaiTrie(4, 2048, beta=0, seed=1)
    r = t.root
    rng = random.Random(1)
    for s in random_strings(rng, 300, 4, 6):
        t.insert(s)
    assert t.root == r and t.get_parent(r) is None


def test_basic_navigation():
    t = MBonsaiTrie(5, 32, beta=0)
    w = t.add_leaf(t.root, 2)
    assert t.get_child(t.root, 2) == w
    assert t.get_parent(w) == t.root
    assert t.get_label(w) == 2
    with pytest.raises(ValueError):
        t.get_label(t.root)
    with pytest.raises(ValueError):
        t.add_leaf(t.root, 5)


def test_add_leaf_is_upsert():
    t = MBonsaiTrie(5, 32, beta=0)
    assert t.add_leaf(t.root, 0) == t.add_leaf(t.root, 0)
    assert len(t) == 2


def test_prefix_count():
    t = MBonsaiTrie(3, 32, beta=0)
    for s in ([0, 1], [0, 2], [1]):
        t.insert(s)
    assert len(t) == 5
    assert strings_of(t) == [(), (0,), (0, 1), (0, 2), (1,)]


def test_all_short_strings_over_three():
    t = MBonsaiTrie(3, 32, beta=0)
    for a in range(3):
        for b in range(3):
            t.insert([a, b])
    assert len(t) == 13


def test_full_table_raises():
    t = MBonsaiTrie(50, 8, beta=0)
    for c in range(7):
        t.add_leaf(t.root, c)
    assert len(t) == 8
    with pytest.raises(CapacityError):
        t.add_leaf(t.root, 7)


def test_delete_roundtrip():
    t = MBonsaiTrie(5, 32, beta=0)
    t.add_leaf(t.root, 1)
    t.del_leaf(t.root, 1)
    assert t.get_child(t.root, 1) is None and len(t) == 1
    with pytest.raises(NotFoundError):
        t.del_leaf(t.root, 1)


def test_probe_passes_tombstone():
    # find three root children whose keys share one initial address
    sigma, M = 1000, 16
    t = MBonsaiTrie(sigma, M, beta=0, seed=11)
    h = t.hash
    by_home = {}
    for c in range(sigma):
        by_home.setdefault(h.split(t.root * sigma + c)[0], []).append(c)
    home, group = next((i, cs) for i, cs in by_home.items() if len(cs) >= 3 and i != t.root)
    a, b, c = group[:3]
    wa, wb, wc = (t.add_leaf(t.root, x) for x in (a, b, c))
    assert t.cell(wc)[1] >= 2
    t.del_leaf(t.root, b)
    assert t.cell(wb) == (DELETED, 0)
    assert t.get_child(t.root, c) == wc
    assert t.get_child(t.root, a) == wa
    # the tombstone is reused by the next insert probing past it
    assert t.add_leaf(t.root, b) == wb
    assert t.audit() == []


def test_debug_checks():
    t = MBonsaiTrie(4, 32, beta=0, debug=True)
    w = t.add_leaf(t.root, 1)
    t.add_leaf(w, 2)
    with pytest.raises(InvalidNodeError):
        t.del_leaf(t.root, 1)
    with pytest.raises(InvalidNodeError):
        t.get_child((t.root + 1) % 32 if (t.root + 1) % 32 != w else (t.root + 2) % 32, 0)


def test_parent_and_label_agree_with_oracle():
    rng = random.Random(2)
    t = MBonsaiTrie(7, 16, beta=0.25, seed=2)
    o = OracleTrie(7)
    for s in random_strings(rng, 300, 7, 12):
        t.insert(s)
        o.insert(s)
    assert len(t) == len(o) >= 1000
    for path in o.strings()[1:]:
        v = t.find(path)
        assert t.get_parent(v) == t.find(path[:-1])
        assert t.get_label(v) == path[-1]
        assert t.path(v) == path
    assert strings_of(t) == o.strings()
    assert t.audit() == []


def test_child_presence_matches_oracle():
    rng = random.Random(3)
    t = MBonsaiTrie(6, 4096, beta=0, seed=3)
    o = OracleTrie(6)
    for s in random_strings(rng, 300, 6, 7):
        t.insert(s)
        o.insert(s)
    paths = o.strings()
    for _ in range(10_000):
        p = rng.choice(paths)
        c = rng.randrange(6)
        assert (t.get_child(t.find(p), c) is None) == (o.get_child(o.insert(p), c) is None)


def test_resize_preserves_strings():
    t = MBonsaiTrie(3, 16, beta=0)
    for s in ([0, 1], [0, 2], [1], [2, 2]):
        t.insert(s)
    assert len(t) == 7
    before = strings_of(t)
    moved = {}
    big = t.resize(32, moved.__setitem__)
    assert big.capacity == 32 and strings_of(big) == before
    assert len(moved) == 7 and set(moved.values()) == set(big.slots())
    tight = t.resize(len(t) + 1)
    assert strings_of(tight) == before
    tight.insert([1, 1])
    with pytest.raises(CapacityError):
        tight.insert([1, 2])
    with pytest.raises(CapacityError):
        t.resize(len(t))


def test_auto_resize_grows_and_shrinks():
    rng = random.Random(4)
    t = MBonsaiTrie(4, 16, beta=0.25, seed=4)
    leaves = []
    for s in random_strings(rng, 400, 4, 6):
        leaves.append(tuple(s))
        t.insert(s)
    assert t.stats.grows > 0
    assert 1 / 1.25 <= t.load <= 1 / 1.125 or len(t) < 16
    o = OracleTrie(4)
    for s in leaves:
        o.insert(s)
    # delete deepest nodes first until few remain
    for path in sorted(o.strings()[1:], key=len, reverse=True)[: len(t) - 20]:
        t.del_leaf(t.find(path[:-1]), path[-1])
    assert t.stats.shrinks > 0
    assert t.audit() == []


@pytest.mark.parametrize("variant", ["gamma", "recursive"])
def test_space_accounting(variant):
    t = MBonsaiTrie(5, 1000, beta=0, variant=variant, seed=5)
    rng = random.Random(5)
    while len(t) < 790:
        t.add_leaf(rng.choice(list(t.slots())), rng.randrange(5))
    b = t.bits()
    assert b.q_bits == 1000 * t.cell_width and t.cell_width == 3
    assert b.total == b.q_bits + b.d_bits
    assert b.per_node == b.total / len(t)


op_strategy = st.lists(
    st.tuples(st.sampled_from("AAADCPL"), st.integers(0, 60), st.integers(0, 9)), max_size=300
)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([2, 3, 10]), st.sampled_from([0.0, 0.25]),
       st.sampled_from(["gamma", "recursive"]), op_strategy)
def test_differential_property(sigma, beta, variant, script):
    ops = [Op(code, v, c % sigma) if code in "ADC" else Op(code, v) for code, v, c in script]
    diff = replay(ops, sigma, beta=beta, capacity=400 if beta == 0 else 4, variant=variant)
    assert diff.divergences == []
    assert diff.check_all() == []
    assert diff.trie.audit() == []
