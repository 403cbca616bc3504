"""The m-Bonsai dynamic trie.

A node is identified by the slot of the hash table holding its quotient.  The
child of ``v`` labelled ``c`` has key ``v * sigma + c``; it is placed by
linear probing from the key's initial address ``i`` into the first vacant
slot ``j``, and ``D[j] = (j - i) mod M`` records how far it moved.  From
``Q[j]`` and ``D[j]`` the key, and so the parent and label, can be rebuilt.

Cell codes in ``Q``: ``EMPTY = 0``, ``DELETED = 1``, quotient ``q`` stored as
``q + 2``.  The root occupies the slot of the key ``u = M * sigma``, which
lies just outside the key universe, so no real key can ever match it.
"""

import math
from dataclasses import dataclass, field

from . import traverse
from .bitvec import PackedArray
from .darray import create_array
from .errors import CapacityError, InvalidNodeError, NotFoundError
from .hashqr import QuotientHash

EMPTY = 0
DELETED = 1
OFFSET = 2


@dataclass
class TrieStats:
    probes: int = 0
    grows: int = 0
    shrinks: int = 0
    updates_since_resize: int = 0
    # (kind, updates since the previous resize, n at the resize, new capacity)
    resize_log: list = field(default_factory=list)

    @property
    def resizes(self):
        return self.grows + self.shrinks


@dataclass(frozen=True)
class TrieBits:
    q_bits: int
    d_bits: int
    total: int
    per_node: float
    nodes: int
    capacity: int
    d_unary_bits: int
    d_gamma_bits: int
    d_layered_bits: int


class MBonsaiTrie:
    """Compact dynamic trie over the alphabet ``0..sigma-1``.

    ``beta > 0`` keeps the load between ``1/(1+beta)`` and ``1/(1+beta/2)``
    by rebuilding; ``beta = 0`` fixes the capacity.  Node ids are slot
    numbers and change when the trie is rebuilt.
    """

    def __init__(self, sigma, capacity=16, *, beta=0.25, variant="recursive",
                 seed=0, debug=False):
        if sigma < 1:
            raise ValueError("sigma must be >= 1")
        if capacity < 2:
            raise ValueError("capacity must be >= 2")
        if beta < 0:
            raise ValueError("beta must be >= 0")
        self.sigma = sigma
        self.beta = beta
        self.variant = variant
        self.seed = seed
        self.debug = debug
        self.stats = TrieStats()
        # called as on_relocate(old_id, new_id) for every node when rebuilt
        self.on_relocate = None
        self._setup(capacity)

    def _setup(self, capacity):
        u = capacity * self.sigma
        self._hash = QuotientHash.create(u, capacity, self.seed)
        self._M = capacity
        width = (self._hash.max_quotient + OFFSET).bit_length()
        self._Q = PackedArray(capacity, width)
        self._D = create_array(self.variant, capacity, self.seed)
        root_q, root_home = divmod(self._hash.a * u % self._hash.p, capacity)
        self._root = root_home
        self._Q[root_home] = root_q + OFFSET
        self._n = 1

    # -- introspection -------------------------------------------------

    @property
    def capacity(self):
        return self._M

    @property
    def root(self):
        return self._root

    def get_root(self):
        return self._root

    def __len__(self):
        return self._n

    @property
    def load(self):
        return self._n / self._M

    @property
    def cell_width(self):
        return self._Q.width

    @property
    def hash(self):
        return self._hash

    def cell(self, j):
        """Raw ``(Q[j], D[j])`` pair of slot ``j``."""
        return self._Q[j], self._D[j]

    @property
    def displacements(self):
        return self._D

    def slots(self):
        """Live slots in increasing order (the root included)."""
        Q = self._Q
        for j in range(self._M):
            if Q[j] > DELETED:
                yield j

    # -- navigation ----------------------------------------------------

    def _check_symbol(self, c):
        if not 0 <= c < self.sigma:
            raise ValueError(f"symbol {c} outside alphabet 0..{self.sigma - 1}")

    def _check_live(self, v):
        if not 0 <= v < self._M or self._Q[v] <= DELETED:
            raise InvalidNodeError(f"{v} is not a live node")

    def _find(self, v, c):
        """Probe for key <v, c>.

        Returns ``(slot or None, first vacant slot or None, initial address,
        cell code)``.
        """
        M = self._M
        q, i = divmod(self._hash.a * (v * self.sigma + c) % self._hash.p, M)
        code = q + OFFSET
        Q = self._Q
        D = self._D
        vacant = None
        j = i
        for dist in range(M):
            self.stats.probes += 1
            cell = Q[j]
            if cell == EMPTY:
                return None, (j if vacant is None else vacant), i, code
            if cell == DELETED:
                if vacant is None:
                    vacant = j
            elif cell == code and D[j] == dist:
                return j, vacant, i, code
            j += 1
            if j == M:
                j = 0
        return None, vacant, i, code

    def get_child(self, v, c):
        """Child of ``v`` labelled ``c``, or ``None``."""
        self._check_symbol(c)
        if self.debug:
            self._check_live(v)
        return self._find(v, c)[0]

    def _key(self, v):
        h = self._hash
        return (((self._Q[v] - OFFSET) * self._M + (v - self._D[v]) % self._M)
                * h.a_inv % h.p)

    def get_parent(self, v):
        """Parent of ``v``; ``None`` for the root."""
        if self.debug:
            self._check_live(v)
        if v == self._root:
            return None
        return self._key(v) // self.sigma

    def get_label(self, v):
        if self.debug:
            self._check_live(v)
        if v == self._root:
            raise ValueError("the root has no label")
        return self._key(v) % self.sigma

    def parent_and_label(self, v):
        """``(parent, label)`` of a non-root node from one key rebuild."""
        return divmod(self._key(v), self.sigma)

    # -- updates -------------------------------------------------------

    def add_leaf(self, v, c):
        """Add (or return the existing) child of ``v`` labelled ``c``."""
        self._check_symbol(c)
        if self.debug:
            self._check_live(v)
        found, vacant, home, code = self._find(v, c)
        if found is not None:
            return found
        w = self._place(vacant, home, code)
        if self.beta and self._n > self._M / (1 + self.beta / 2):
            w = self._rebuild("grow", track=w)
        return w

    def _place(self, j, home, code):
        if j is None:
            raise CapacityError(f"trie full at capacity {self._M}")
        self._Q[j] = code
        self._D[j] = (j - home) % self._M
        self._n += 1
        self.stats.updates_since_resize += 1
        return j

    def del_leaf(self, v, c):
        """Delete the child of ``v`` labelled ``c``, which must be a leaf."""
        self._check_symbol(c)
        if self.debug:
            self._check_live(v)
        w = self._find(v, c)[0]
        if w is None:
            raise NotFoundError((v, c))
        if self.debug and self.degree(w):
            raise InvalidNodeError(f"node {w} is not a leaf")
        self._Q[w] = DELETED
        self._D[w] = 0
        self._n -= 1
        self.stats.updates_since_resize += 1
        if self.beta and self._n < self._M / (1 + self.beta):
            self._rebuild("shrink")

    def degree(self, v):
        """Number of children, by probing every symbol."""
        return sum(1 for c in range(self.sigma) if self._find(v, c)[0] is not None)

    # -- strings -------------------------------------------------------

    def insert(self, symbols):
        """Add the path spelled by ``symbols``; return the final node."""
        v = self._root
        for c in symbols:
            v = self.add_leaf(v, c)
        return v

    def find(self, symbols):
        """Node reached by ``symbols``, or ``None``."""
        v = self._root
        for c in symbols:
            v = self.get_child(v, c)
            if v is None:
                return None
        return v

    def path(self, v):
        """Labels on the path from the root to ``v``."""
        out = []
        while v != self._root:
            v, c = self.parent_and_label(v)
            out.append(c)
        out.reverse()
        return tuple(out)

    # -- resizing ------------------------------------------------------

    def target_capacity(self, n=None):
        n = self._n if n is None else n
        return max(2, n + 1, math.ceil((1 + 3 * self.beta / 4) * n))

    def resize(self, capacity, on_relocate=None):
        """Return a new trie with the same strings and the given capacity."""
        if capacity <= self._n:
            raise CapacityError(f"capacity {capacity} must exceed {self._n} nodes")
        new = MBonsaiTrie(self.sigma, capacity, beta=0, variant=self.variant,
                          seed=self.seed, debug=self.debug)
        old_ids = traverse.build_index(self)
        cur = new.root
        depth = 0
        if on_relocate is not None:
            on_relocate(self._root, cur)
        for node, node_depth, label in traverse.walk(self, old_ids):
            if node_depth == 0:
                continue
            while depth >= node_depth:
                cur = new.get_parent(cur)
                depth -= 1
            cur = new.add_leaf(cur, label)
            depth += 1
            if on_relocate is not None:
                on_relocate(node, cur)
        new.beta = self.beta
        return new

    def _rebuild(self, kind, track=None):
        """Rebuild in place at the target capacity; return the new id of ``track``."""
        moved = {}
        hook = self.on_relocate

        def relocate(old, new):
            if old == track:
                moved["track"] = new
            if hook is not None:
                hook(old, new)

        before = self.stats.updates_since_resize
        new = self.resize(self.target_capacity(), relocate)
        self._hash, self._M, self._Q, self._D = new._hash, new._M, new._Q, new._D
        self._root, self._n = new._root, new._n
        st = self.stats
        if kind == "grow":
            st.grows += 1
        else:
            st.shrinks += 1
        st.resize_log.append((kind, before, self._n, self._M))
        st.updates_since_resize = 0
        return moved.get("track")

    # -- accounting and audits -----------------------------------------

    def bits(self):
        d = self._D.bits()
        q_bits = self._Q.bits_used()
        total = q_bits + d.storage_bits
        return TrieBits(
            q_bits=q_bits,
            d_bits=d.storage_bits,
            total=total,
            per_node=total / self._n,
            nodes=self._n,
            capacity=self._M,
            d_unary_bits=d.unary_bits,
            d_gamma_bits=d.gamma_bits,
            d_layered_bits=d.layered_bits,
        )

    def audit(self):
        """Check every live slot's key; return a list of problems."""
        problems = []
        h = self._hash
        live = 0
        for j in range(self._M):
            cell = self._Q[j]
            if cell <= DELETED:
                if cell == DELETED and self._D[j]:
                    problems.append(f"tombstone {j} keeps displacement")
                continue
            live += 1
            if j == self._root:
                if self._key(j) != h.u:
                    problems.append("root cell does not hold the phantom key")
                continue
            x = self._key(j)
            if x >= h.u:
                problems.append(f"slot {j} rebuilds key {x} outside the universe")
                continue
            if h.split(x) != ((j - self._D[j]) % self._M, cell - OFFSET):
                problems.append(f"slot {j} does not split back")
            parent = x // self.sigma
            if not 0 <= parent < self._M or self._Q[parent] <= DELETED:
                problems.append(f"slot {j} has dead parent {parent}")
            elif self._find(parent, x % self.sigma)[0] != j:
                problems.append(f"slot {j} not reachable from its parent")
        if live != self._n:
            problems.append(f"n = {self._n} but {live} live slots")
        return problems


def trie_create(sigma, capacity=16, beta=0.25, seed=0, variant="recursive"):
    return MBonsaiTrie(sigma, capacity, beta=beta, variant=variant, seed=seed)
