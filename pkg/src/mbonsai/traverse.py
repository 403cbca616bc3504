"""Linear-time traversal of an m-Bonsai trie.

Preprocessing builds three arrays over the hash table slots:

``A``  per-slot child counts, consumed back to zero and then reused as
       per-node cursors during the walk;
``B``  the unary degree sequence ``1 0^deg(0) 1 0^deg(1) ... 1`` with a
       select directory;
``C``  child labels grouped by parent slot: node ``v``'s labels sit at
       ``C[start(v) : start(v) + deg(v)]`` where ``start(v)`` is the total
       degree of the slots before ``v``.

The walk keeps only the current node and climbs with ``get_parent``; the
trie itself serves as the stack.
"""

from dataclasses import dataclass

from .bitvec import BitString, BitWriter, PackedArray, SelectIndex


@dataclass
class TraversalIndex:
    A: PackedArray
    B: BitString
    select: SelectIndex
    C: PackedArray
    nodes: int
    scanned: int = 0

    def start(self, v):
        return self.select.select1(v + 1) - v

    def degree(self, v):
        return self.select.select1(v + 2) - self.select.select1(v + 1) - 1

    def labels(self, v):
        s = self.start(v)
        return [self.C[s + k] for k in range(self.degree(v))]

    def bits_used(self):
        return self.A.bits_used() + self.B.bits_used() + self.C.bits_used()


def _non_root_slots(trie):
    root = trie.root
    for j in trie.slots():
        if j != root:
            yield j


def _count_children(trie):
    counts_width = trie.sigma.bit_length()
    A = PackedArray(trie.capacity, counts_width)
    for j in _non_root_slots(trie):
        A[trie.get_parent(j)] += 1
    return A, trie.capacity


def _unary(A, extra):
    """Unary degree bit string for counts ``A`` with ``extra`` zeros in total."""
    m = len(A)
    B = BitString(m + 1 + extra)
    pos = 0
    for v in range(m):
        B.flip(pos)
        pos += 1 + A[v]
    B.flip(pos)
    return B


def _index_from_counts(trie, A, scanned):
    edges = len(trie) - 1
    B = _unary(A, edges)
    C = PackedArray(edges, max(1, (trie.sigma - 1).bit_length()))
    return TraversalIndex(A, B, B.build_select(), C, len(trie), scanned)


def build_index(trie):
    """Two scans of the slots: count children, then place labels."""
    A, scanned = _count_children(trie)
    idx = _index_from_counts(trie, A, scanned)
    for j in _non_root_slots(trie):
        p, c = trie.parent_and_label(j)
        left = idx.A[p]
        idx.C[idx.start(p) + left - 1] = c
        idx.A[p] = left - 1
    idx.scanned += trie.capacity
    return idx


def build_sorted_index(trie):
    """Index whose label regions are in increasing label order.

    The second pass reads per-symbol lists of slots (strictly increasing,
    stored as gamma-coded gaps) instead of rescanning the table.
    """
    A = PackedArray(trie.capacity, trie.sigma.bit_length())
    lists = {}
    last = {}
    for j in _non_root_slots(trie):
        p, c = trie.parent_and_label(j)
        A[p] += 1
        w = lists.get(c)
        if w is None:
            w = lists[c] = BitWriter()
            w.write_gamma(j + 1)
        else:
            w.write_gamma(j - last[c])
        last[c] = j
    idx = _index_from_counts(trie, A, trie.capacity)
    for c in sorted(lists):
        reader = lists[c].reader()
        j = -1
        while reader.remaining:
            j += reader.read_gamma()
            p = trie.get_parent(j)
            left = idx.A[p]
            idx.C[idx.start(p) + idx.degree(p) - left] = c
            idx.A[p] = left - 1
        idx.scanned += lists[c].nbits
    return idx


def walk(trie, idx):
    """Pre-order ``(node, depth, label)``; the root comes first with label None.

    Child cursors live in ``idx.A`` and are reset as each node is left, so
    ``A`` is all zero again afterwards.
    """
    root = trie.root
    A = idx.A
    C = idx.C
    select1 = idx.select.select1
    v = root
    depth = 0
    yield root, 0, None
    while True:
        k = A[v]
        first = select1(v + 1)
        if k < select1(v + 2) - first - 1:
            A[v] = k + 1
            c = C[first - v + k]
            v = trie.get_child(v, c)
            depth += 1
            yield v, depth, c
            continue
        A[v] = 0
        if v == root:
            return
        v = trie.get_parent(v)
        depth -= 1


def dfs(trie, visitor, idx=None):
    """Visit every node once in pre-order: ``visitor(node, depth, label)``."""
    if idx is None:
        idx = build_index(trie)
    for node, depth, label in walk(trie, idx):
        visitor(node, depth, label)
    return idx


def sorted_strings(trie, visitor):
    """Visit nodes in lexicographic order of their paths: ``visitor(node, path)``."""
    idx = build_sorted_index(trie)
    path = []
    for node, depth, label in walk(trie, idx):
        del path[max(depth - 1, 0):]
        if label is not None:
            path.append(label)
        visitor(node, tuple(path))
    return idx


def naive_dfs(trie, visitor):
    """Pre-order walk that probes all ``sigma`` symbols at every node."""
    stack = [(trie.root, 0, None)]
    visits = 0
    while stack:
        v, depth, label = stack.pop()
        visitor(v, depth, label)
        visits += 1
        for c in range(trie.sigma - 1, -1, -1):
            w = trie.get_child(v, c)
            if w is not None:
                stack.append((w, depth + 1, c))
    return visits
