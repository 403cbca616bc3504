"""Reference structures for testing: a pointer trie and a differential harness.

Op files hold one operation per line, node arguments being oracle handles
(the root is handle 0, later nodes are numbered in creation order)::

    A v c    add_leaf
    D v c    del_leaf
    C v c    get_child
    P v      get_parent
    L v      get_label
"""

import random
from dataclasses import dataclass
from pathlib import Path

from .errors import CapacityError, NotFoundError
from .trie import MBonsaiTrie


class OracleTrie:
    """Node records ``parent``, ``label`` and a child dict, indexed by handle."""

    def __init__(self, sigma):
        self.sigma = sigma
        self.parent = [None]
        self.label = [None]
        self.children = [{}]
        self.alive = [True]
        self.n = 1

    root = 0

    def get_root(self):
        return 0

    def __len__(self):
        return self.n

    def get_child(self, v, c):
        return self.children[v].get(c)

    def get_parent(self, v):
        return self.parent[v]

    def get_label(self, v):
        if v == 0:
            raise ValueError("the root has no label")
        return self.label[v]

    def add_leaf(self, v, c):
        if not 0 <= c < self.sigma:
            raise ValueError(f"symbol {c} outside alphabet")
        w = self.children[v].get(c)
        if w is not None:
            return w
        w = len(self.parent)
        self.parent.append(v)
        self.label.append(c)
        self.children.append({})
        self.alive.append(True)
        self.children[v][c] = w
        self.n += 1
        return w

    def del_leaf(self, v, c):
        w = self.children[v].get(c)
        if w is None:
            raise NotFoundError((v, c))
        if self.children[w]:
            raise ValueError(f"node {w} is not a leaf")
        del self.children[v][c]
        self.alive[w] = False
        self.n -= 1

    def is_leaf(self, v):
        return not self.children[v]

    def live_nodes(self):
        return [v for v, ok in enumerate(self.alive) if ok]

    def insert(self, symbols):
        v = 0
        for c in symbols:
            v = self.add_leaf(v, c)
        return v

    def strings(self):
        """Every root-to-node label path, in lexicographic order."""
        out = []
        stack = [(0, ())]
        while stack:
            v, path = stack.pop()
            out.append(path)
            for c in sorted(self.children[v], reverse=True):
                stack.append((self.children[v][c], path + (c,)))
        return out


@dataclass(frozen=True)
class Op:
    code: str
    v: int
    c: int = None

    def __str__(self):
        return f"{self.code} {self.v}" if self.c is None else f"{self.code} {self.v} {self.c}"


def parse_ops(text):
    ops = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        code = parts[0]
        if code in ("A", "D", "C") and len(parts) == 3:
            ops.append(Op(code, int(parts[1]), int(parts[2])))
        elif code in ("P", "L") and len(parts) == 2:
            ops.append(Op(code, int(parts[1])))
        else:
            raise ValueError(f"bad op line {line!r}")
    return ops


def format_ops(ops):
    return "".join(f"{op}\n" for op in ops)


def _apply(target, op, v):
    """Run ``op`` on ``target`` with the node argument already translated."""
    if op.code == "A":
        return target.add_leaf(v, op.c)
    if op.code == "D":
        return target.del_leaf(v, op.c)
    if op.code == "C":
        return target.get_child(v, op.c)
    if op.code == "P":
        return target.get_parent(v)
    if op.code == "L":
        return target.get_label(v)
    raise ValueError(f"unknown op {op.code!r}")


def _valid(o, op):
    if not 0 <= op.v < len(o.alive) or not o.alive[op.v]:
        return False
    if op.c is not None and not 0 <= op.c < o.sigma:
        return False
    if op.code == "D":
        w = o.get_child(op.v, op.c)
        return w is not None and o.is_leaf(w)
    if op.code == "L":
        return op.v != 0
    return True


class Differential:
    """Drive an :class:`MBonsaiTrie` and an :class:`OracleTrie` in lockstep.

    The handle to node-id map is kept current across rebuilds through the
    trie's relocation hook.
    """

    def __init__(self, trie, oracle=None):
        self.trie = trie
        self.oracle = oracle or OracleTrie(trie.sigma)
        self.to_trie = {0: trie.root}
        self.to_oracle = {trie.root: 0}
        self._moves = {}
        trie.on_relocate = self._moves.__setitem__
        self.log = []
        self.divergences = []

    def _sync(self):
        if self._moves:
            moves = self._moves
            self.to_trie = {h: moves.get(t, ("lost", t)) for h, t in self.to_trie.items()}
            self.to_oracle = {t: h for h, t in self.to_trie.items()}
            moves.clear()

    def valid(self, op):
        """Whether ``op`` meets its preconditions in the current state."""
        return _valid(self.oracle, op)

    def step(self, op):
        """Apply a valid op to both sides; return False on divergence."""
        self.log.append(op)
        o = self.oracle
        if op.code == "D":
            gone = self.to_trie.pop(o.get_child(op.v, op.c), None)
            self.to_oracle.pop(gone, None)
        expected = _apply(o, op, op.v)
        try:
            got = _apply(self.trie, op, self.to_trie[op.v])
        except Exception as exc:  # any trie failure is a divergence
            got = ("error", repr(exc))
        else:
            self._sync()
            if op.code == "A" and expected not in self.to_trie and got not in self.to_oracle:
                self.to_trie[expected] = got
                self.to_oracle[got] = expected
            if op.code in "ACP" and got is not None:
                got = self.to_oracle.get(got, ("unknown", got))
        if got != expected or len(self.trie) != len(o):
            self.divergences.append((len(self.log) - 1, op, expected, got))
            return False
        return True

    def check_all(self):
        """Compare every live node's parent and label; return mismatches."""
        bad = []
        o = self.oracle
        for h in o.live_nodes():
            t = self.to_trie.get(h)
            if t is None:
                bad.append((h, "unmapped"))
            elif h and (self.trie.get_parent(t) != self.to_trie.get(o.parent[h])
                        or self.trie.get_label(t) != o.label[h]):
                bad.append((h, "parent or label"))
        return bad


def random_op(rng, oracle, nodes, grow_bias=0.5):
    """Pick an op valid for ``oracle``; ``nodes`` lists its live handles.

    Deletions descend from a random node to a random leaf below it.
    """
    r = rng.random()
    v = rng.choice(nodes)
    if r < grow_bias:
        # walk down existing edges so small alphabets still grow deep paths
        c = rng.randrange(oracle.sigma)
        for _ in range(64):
            w = oracle.children[v].get(c)
            if w is None:
                break
            v, c = w, rng.randrange(oracle.sigma)
        return Op("A", v, c)
    if r < grow_bias + (1 - grow_bias) * 0.6:
        kids = oracle.children[v]
        while kids:
            w = rng.choice(list(kids.values())) if len(kids) < 8 else kids[rng.choice(list(kids))]
            if oracle.is_leaf(w):
                return Op("D", v, oracle.label[w])
            v, kids = w, oracle.children[w]
        if v != 0:
            return Op("D", oracle.parent[v], oracle.label[v])
        return Op("A", v, rng.randrange(oracle.sigma))
    kind = rng.choice("CPL")
    if kind == "C":
        return Op("C", v, rng.randrange(oracle.sigma))
    if kind == "L" and v == 0:
        kind = "P"
    return Op(kind, v)


def run_differential(sigma, ops, seed=0, beta=0.25, capacity=16, variant="recursive",
                     phases=((0.7, 0.65), (0.3, 0.2)), trie_cls=MBonsaiTrie):
    """Random lockstep run; returns the :class:`Differential` afterwards.

    ``phases`` is a sequence of (fraction of ops, probability of add_leaf):
    a growth phase followed by a shrinking one exercises both rebuilds.
    """
    rng = random.Random(seed)
    trie = trie_cls(sigma, capacity, beta=beta, variant=variant, seed=seed)
    diff = Differential(trie)
    oracle = diff.oracle
    nodes = [0]
    where = {0: 0}
    for frac, bias in phases:
        for _ in range(int(ops * frac)):
            op = random_op(rng, oracle, nodes, bias)
            gone = oracle.get_child(op.v, op.c) if op.code == "D" else None
            ok = diff.step(op)
            if op.code == "A":
                w = oracle.get_child(op.v, op.c)
                if w not in where:
                    where[w] = len(nodes)
                    nodes.append(w)
            elif op.code == "D":
                k = where.pop(gone)
                last = nodes.pop()
                if last != gone:
                    nodes[k] = last
                    where[last] = k
            if not ok:
                return diff
    return diff


def replay(ops, sigma, seed=0, beta=0.25, capacity=16, variant="recursive",
           trie_cls=MBonsaiTrie):
    """Replay recorded ops, skipping any whose preconditions fail."""
    trie = trie_cls(sigma, capacity, beta=beta, variant=variant, seed=seed)
    diff = Differential(trie)
    for op in ops:
        if diff.valid(op) and not diff.step(op):
            break
    return diff


def project(ops, sigma, keep):
    """The ops with ``keep[i]`` true, handles renumbered for the shorter log.

    Ops that lose their node (its creator was dropped) or become invalid
    are dropped as well.
    """
    src, dst = OracleTrie(sigma), OracleTrie(sigma)
    handle = {0: 0}
    out = []
    for i, op in enumerate(ops):
        if not _valid(src, op):
            continue
        made = _apply(src, op, op.v)
        if not keep[i] or op.v not in handle:
            continue
        new = Op(op.code, handle[op.v], op.c)
        if not _valid(dst, new):
            continue
        got = _apply(dst, new, new.v)
        out.append(new)
        if op.code == "A":
            handle[made] = got
    return out


def minimize(ops, sigma, **kw):
    """Greedily drop chunks of ops while the replay still diverges."""
    ops = project(ops, sigma, [True] * len(ops))
    chunk = max(1, len(ops) // 2)
    while True:
        i = 0
        while i < len(ops):
            keep = [not i <= k < i + chunk for k in range(len(ops))]
            trial = project(ops, sigma, keep)
            if replay(trial, sigma, **kw).divergences:
                ops = trial
            else:
                i += chunk
        if chunk == 1:
            return ops
        chunk //= 2


def save_regression(ops, path, header=""):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(f"# {line}\n" for line in header.splitlines()) + format_ops(ops)
    path.write_text(text)
    return path


def load_regression(path):
    """``(ops, settings)`` from a regression file; settings come from
    ``# key=value`` header lines."""
    text = Path(path).read_text()
    settings = {}
    for line in text.splitlines():
        if line.startswith("#") and "=" in line:
            key, _, value = line[1:].strip().partition("=")
            settings[key.strip()] = value.strip()
    conv = {"sigma": int, "seed": int, "capacity": int, "beta": float, "variant": str}
    return parse_ops(text), {k: conv[k](v) for k, v in settings.items() if k in conv}


def hunt(sigma, ops, seed=0, directory=None, **kw):
    """Random differential run; on divergence, minimize and persist the log.

    Returns ``(diff, path)``, ``path`` being None when nothing diverged.
    """
    diff = run_differential(sigma, ops, seed=seed, **kw)
    if not diff.divergences or directory is None:
        return diff, None
    opts = {k: kw[k] for k in ("beta", "capacity", "variant", "trie_cls") if k in kw}
    small = minimize(diff.log, sigma, seed=seed, **opts)
    header = "\n".join(
        [f"sigma={sigma}", f"seed={seed}"]
        + [f"{k}={v}" for k, v in opts.items() if k != "trie_cls"]
    )
    name = f"diverge_s{sigma}_seed{seed}_{len(small)}ops.txt"
    return diff, save_regression(small, Path(directory) / name, header)


class ShadowMap:
    """Plain dict with the operation names of :class:`CompactHashTable`."""

    def __init__(self, capacity):
        self.capacity = capacity
        self._d = {}

    def __len__(self):
        return len(self._d)

    def lookup(self, x):
        return self._d.get(x)

    def insert(self, x, satellite=0):
        if x not in self._d and len(self._d) >= self.capacity:
            raise CapacityError(f"table full at capacity {self.capacity}")
        self._d[x] = satellite

    def delete(self, x):
        if x not in self._d:
            raise NotFoundError(x)
        del self._d[x]

    def items(self):
        return sorted(self._d.items())
