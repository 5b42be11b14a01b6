"""Protocols for arbitrary small targets: local views, deletion floods, membership
detection by degree or count tables, and zero/one/log-bit listing under deletions."""
from __future__ import annotations

from itertools import combinations
from typing import Callable

from ..bits import BitReader, Bits, BitWriter, id_bits, width
from ..graph import Edge, Graph, ball_edges, bfs, is_star, norm_edge, params
from ..oracle import Copy, copies_by_node, copies_containing, copy_nodes, enumerate_copies
from ..sim import CHANGE_KINDS, Node, Protocol
from .common import Blocks

ONE = Bits(1, 1)
ZERO = Bits(0, 1)


class _G0Data:
    """Per-run data every node can derive from the shared initial graph."""

    def __init__(self, g0: Graph, h: Graph):
        self.g0 = g0
        self.copies = enumerate_copies(g0, h)
        self.by_node = copies_by_node(self.copies)

    def containing(self, v: int) -> frozenset[Copy]:
        return frozenset(self.by_node.get(v, ()))


class _SharedG0(Protocol):
    """Caches _G0Data for the most recent initial graph handed to make_node."""

    h: Graph
    _data: _G0Data | None = None

    def _prep(self, g0: Graph) -> _G0Data:
        if self._data is None or self._data.g0 is not g0:
            self._data = self._build(g0)
        return self._data

    def _build(self, g0: Graph) -> _G0Data:
        return _G0Data(g0, self.h)


def _copy_graph(c: Copy) -> Graph:
    return Graph(copy_nodes(c), c)


def universal_lister(c: Copy) -> int:
    """Smallest id adjacent to every other node of the copy."""
    g = _copy_graph(c)
    k = len(g) - 1
    return min(v for v in g.nodes if g.degree(v) == k)


def center_lister(c: Copy) -> int:
    return min(params(_copy_graph(c)).center)


def ne_center_lister(c: Copy) -> int:
    return min(params(_copy_graph(c)).ne_center)


def assign_listers(copies, chooser: Callable[[Copy], int]) -> dict[int, set[Copy]]:
    out: dict[int, set[Copy]] = {}
    for c in sorted(copies):
        out.setdefault(chooser(c), set()).add(c)
    return out


# ---------------------------------------------------------------- pair bitmaps

def pair_index(a: int, b: int, n: int) -> int:
    if a > b:
        a, b = b, a
    return (a - 1) * (2 * n - a) // 2 + (b - a - 1)


def encode_edges(edges, n: int) -> int:
    top = n * (n - 1) // 2 - 1
    val = 0
    for a, b in edges:
        val |= 1 << (top - pair_index(a, b, n))
    return val


def decode_edges(val: int, n: int) -> set[Edge]:
    top = n * (n - 1) // 2 - 1
    out = set()
    while val:
        lo = val & -val
        idx = top - (lo.bit_length() - 1)
        val ^= lo
        a, base = 1, 0
        while idx >= base + (n - a):
            base += n - a
            a += 1
        out.add((a, a + 1 + idx - base))
    return out


def _set_bitmap(nodes, n: int) -> int:
    val = 0
    for x in nodes:
        val |= 1 << (n - x)
    return val


def _bitmap_nodes(val: int, n: int) -> list[int]:
    out = []
    while val:
        lo = val & -val
        out.append(n - (lo.bit_length() - 1))
        val ^= lo
    return out


# ---------------------------------------------------------------- memlist, local radius-1 view

class _MultiNode(Node):
    def __init__(self, p: MemListMultipartite, v: int, n: int, nbrs: frozenset[int],
                 g0: Graph | None, out: frozenset):
        self.p, self.v, self.n = p, v, n
        self.blk = Blocks(n, p.r)
        self.cur = nbrs
        self.parts: dict[int, list[int]] = {}
        for w in nbrs:
            bm = _set_bitmap(g0.neighbors(w), n) if g0 is not None and w in g0 else 0
            self.parts[w] = [self.blk.block(bm, i) for i in range(p.r)]
        self.key = None
        self.out = out

    def send(self, prev, cur, rnd):
        if prev is not cur:
            for w in prev - cur:
                self.parts.pop(w, None)
            for w in cur - prev:
                self.parts[w] = [0] * self.p.r
        self.cur = cur
        if not cur:
            return {}
        b = Bits(self.blk.block(_set_bitmap(cur, self.n), rnd % self.p.r), self.blk.bs)
        return {w: b for w in cur}

    def receive(self, inbox, rnd):
        ph = rnd % self.p.r
        for w, b in inbox.items():
            if w in self.parts:
                self.parts[w][ph] = BitReader(b).get(self.blk.bs)
        key = tuple(sorted((w, tuple(self.parts[w])) for w in self.cur))
        if key != self.key:
            self.key = key
            v, edges = self.v, set()
            for w, blocks in key:
                edges.add(norm_edge(v, w))
                bm = self.blk.join(dict(enumerate(blocks)))
                for x in _bitmap_nodes(bm, self.n):
                    if x != w:
                        edges.add(norm_edge(w, x))
            g = Graph(edges=edges)
            self.out = frozenset(copies_containing(g, self.p.h, v)) if v in g else frozenset()
        return self.out


class MemListMultipartite(_SharedG0):
    """Every node streams its n-bit neighbor bitmap in r blocks and lists on its radius-1 view."""

    name = "memlist_multipartite"
    problem = "memlist"

    def __init__(self, h: Graph, r: int):
        if r < 1:
            raise ValueError("r must be at least 1")
        if not params(h).is_complete_multipartite:
            raise ValueError("memlist_multipartite needs a complete multipartite target")
        self.h, self.r = h, r
        self.models = CHANGE_KINDS

    def make_node(self, v, n, g0):
        d = self._prep(g0)
        nbrs = g0.neighbors(v) if v in g0 else frozenset()
        return _MultiNode(self, v, n, nbrs, g0, d.containing(v))

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return _MultiNode(self, v, n, frozenset(), None, frozenset())

    def bound(self, n: int) -> int:
        return Blocks(n, self.r).bs

    def describe(self):
        return {**super().describe(), "r": self.r}


# ---------------------------------------------------------------- memlist, layered wave

class _WaveNode(Node):
    """Keeps L[h] = radius-h ball edges for h = 0..t plus neighbors' layers 0..t-1.

    After a change the touched nodes open a wave of t windows of k rounds. In
    window w every active node sends L[w-1]; a node joins the wave the window
    after it first hears from it and recomputes L[w] at the end of each window.
    """

    def __init__(self, p: MemListGeneral, v: int, n: int, layers, stored, out):
        self.p, self.v, self.n = p, v, n
        self.L: list[frozenset[Edge]] = layers
        self.S: dict[int, list[frozenset[Edge] | None]] = stored
        self.out = out
        self.start = None
        self.join = None
        self.parts: dict[int, dict[int, int]] = {}
        self.heard = False
        self.cur: frozenset[int] = frozenset()

    def _base(self) -> frozenset[Edge]:
        v = self.v
        return frozenset(norm_edge(v, w) for w in self.cur)

    def send(self, prev, cur, rnd):
        p = self.p
        self.cur = cur
        if prev is not cur and prev != cur:
            for w in prev - cur:
                self.S.pop(w, None)
            for w in cur - prev:
                self.S[w] = [None] * p.t
            self.start, self.join = rnd, 0
            self.L[0] = self._base()
            if not cur:
                self.L = [frozenset()] * (p.t + 1)
                self.out = frozenset()
                self.start = None
        if self.start is None:
            return {}
        off = rnd - self.start
        w, b = off // p.k + 1, off % p.k
        if w > p.t:
            self.start = None
            return {}
        if self.join is None or w <= self.join:
            return {}
        if b == 0:
            self._payload = encode_edges(self.L[w - 1], self.n)
        bw = BitWriter()
        bw.put(w - 1, p.lw)
        p.blocks(self.n).write(bw, self._payload, b)
        msg = bw.bits()
        return {x: msg for x in cur}

    def receive(self, inbox, rnd):
        p = self.p
        blk = p.blocks(self.n)
        win = None
        for x, m in inbox.items():
            br = BitReader(m)
            layer = br.get(p.lw)
            b, part = blk.read(br)
            win = layer + 1
            if self.start is None:
                self.start = rnd - b - layer * p.k
            if self.join is None:
                self.join = win
            self.parts.setdefault(x, {})[b] = part
            if b == p.k - 1 and x in self.S:
                val = blk.join(self.parts.pop(x))
                if val is not None:
                    self.S[x][layer] = frozenset(decode_edges(val, self.n))
        if self.start is None:
            return self.out
        off = rnd - self.start
        w, b = off // p.k + 1, off % p.k
        if b == p.k - 1 and w <= p.t and self.join is not None and w >= self.join:
            base = self._base()
            acc = set(base)
            for x in self.cur:
                lay = self.S.get(x)
                if lay is not None and lay[w - 1] is not None:
                    acc |= lay[w - 1]
            self.L[w] = frozenset(acc)
            self.parts.clear()
            if w == p.t:
                g = Graph(edges=self.L[p.t])
                self.out = (frozenset(copies_containing(g, p.h, self.v))
                            if self.v in g else frozenset())
                self.start, self.join = None, None
        return self.out


class MemListGeneral(_SharedG0):
    """Radius-r_H local views rebuilt by a layered wave; each layer is an n(n-1)/2-bit pair bitmap."""

    name = "memlist_general"
    problem = "memlist"

    def __init__(self, h: Graph, r: int):
        self.h = h
        self.t = params(h).r_H
        if r < self.t:
            raise ValueError(f"r={r} is below r_H={self.t}; no {r}-round algorithm exists")
        self.r = r
        self.k = r // self.t
        self.lw = width(self.t)
        self.models = CHANGE_KINDS
        self._blocks: dict[int, Blocks] = {}
        self._balls: dict[tuple[int, int], frozenset[Edge]] = {}

    def blocks(self, n: int) -> Blocks:
        b = self._blocks.get(n)
        if b is None:
            b = self._blocks[n] = Blocks(n * (n - 1) // 2, self.k)
        return b

    def _build(self, g0):
        self._balls = {}
        return _G0Data(g0, self.h)

    def _ball(self, g0: Graph, x: int, rad: int) -> frozenset[Edge]:
        key = (x, rad)
        if key not in self._balls:
            self._balls[key] = frozenset(ball_edges(g0, x, rad))
        return self._balls[key]

    def make_node(self, v, n, g0):
        d = self._prep(g0)
        if v not in g0:
            return _WaveNode(self, v, n, [frozenset()] * (self.t + 1), {}, frozenset())
        layers = [self._ball(g0, v, i) for i in range(self.t + 1)]
        stored = {w: [self._ball(g0, w, i) for i in range(self.t)] for w in g0.neighbors(v)}
        nd = _WaveNode(self, v, n, layers, stored, d.containing(v))
        nd.cur = g0.neighbors(v)
        return nd

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return _WaveNode(self, v, n, [frozenset()] * (self.t + 1), {}, frozenset())

    def header_bits(self) -> int:
        return self.lw + width(self.k)

    def bound(self, n: int) -> int:
        return self.header_bits() + self.blocks(n).bs

    def describe(self):
        return {**super().describe(), "r": self.r, "t": self.t, "k": self.k}


# ---------------------------------------------------------------- memlist, deletion floods

class _FloodNode(Node):
    """Lists its initial copies and prunes those hit by a flooded deletion."""

    def __init__(self, p: _Flood, v: int, n: int, out: frozenset):
        self.p, self.v, self.n = p, v, n
        self.out = out
        self.L = id_bits(n)
        self.task = None  # (payload, hop, first round)
        self.seen: set[int] = set()
        self.parts: dict[int, dict[int, int]] = {}

    def _learn(self, payload: int, hop: int, rnd: int) -> None:
        if payload in self.seen:
            return
        self.seen.add(payload)
        self._prune(payload)
        if hop < self.p.t:
            self.task = (payload, hop, rnd)

    def _prune(self, payload: int) -> None:
        dead = self.p.matcher(payload, self.L)
        if any(dead(c) for c in self.out):
            self.out = frozenset(c for c in self.out if not dead(c))

    def send(self, prev, cur, rnd):
        p = self.p
        if prev is not cur and prev != cur:
            self.seen = set()
            self.parts = {}
            self.task = None
            for w in prev - cur:
                self._learn(p.local_payload(self.v, w, self.L), 0, rnd)
        if self.task is None or not cur:
            return {}
        payload, hop, first = self.task
        b = rnd - first
        if b >= p.k:
            self.task = None
            return {}
        bw = BitWriter()
        bw.put(hop, p.hw)
        p.blocks(self.n).write(bw, payload, b)
        msg = bw.bits()
        return {x: msg for x in cur}

    def receive(self, inbox, rnd):
        p = self.p
        blk = p.blocks(self.n)
        for x, m in inbox.items():
            br = BitReader(m)
            hop = br.get(p.hw)
            b, part = blk.read(br)
            if b == 0:
                self.parts[x] = {}
            self.parts.setdefault(x, {})[b] = part
            if b == p.k - 1:
                val = blk.join(self.parts.pop(x))
                if val is not None:
                    self._learn(val, hop + 1, rnd + 1)
        return self.out


class _Flood(_SharedG0):
    problem = "memlist"
    model = "edge_del"

    def __init__(self, h: Graph, r: int, t: int):
        self.h = h
        self.t = t
        if r < max(t, 1):
            raise ValueError(f"r={r} is below the {max(t, 1)} rounds this target needs")
        self.r = r
        self.k = r // t if t else 1
        self.hw = width(t)
        self.models = frozenset({self.model})
        self._blocks: dict[int, Blocks] = {}

    def payload_bits(self, n: int) -> int:
        raise NotImplementedError

    def blocks(self, n: int) -> Blocks:
        b = self._blocks.get(n)
        if b is None:
            b = self._blocks[n] = Blocks(self.payload_bits(n), self.k)
        return b

    def make_node(self, v, n, g0):
        return _FloodNode(self, v, n, self._prep(g0).containing(v))

    def make_inserted(self, v, n, g0, nbrs, rnd):
        # outside the supported model; only reachable with checks disabled
        return _FloodNode(self, v, n, frozenset())

    def header_bits(self) -> int:
        return self.hw + width(self.k)

    def bound(self, n: int) -> int:
        return 0 if self.t == 0 else self.header_bits() + self.blocks(n).bs

    def describe(self):
        return {**super().describe(), "r": self.r, "t": self.t, "k": self.k}


class MemListEdgeDel(_Flood):
    """Both endpoints of a deleted edge flood its 2L-bit identity for r_H hops."""

    name = "memlist_edge_del"
    model = "edge_del"

    def __init__(self, h: Graph, r: int):
        super().__init__(h, r, params(h).r_H)

    def payload_bits(self, n):
        return 2 * id_bits(n)

    @staticmethod
    def local_payload(v: int, w: int, L: int) -> int:
        a, b = norm_edge(v, w)
        return ((a - 1) << L) | (b - 1)

    @staticmethod
    def matcher(payload: int, L: int):
        e = ((payload >> L) + 1, (payload & ((1 << L) - 1)) + 1)
        return lambda c: e in c


class MemListNodeDel(_Flood):
    """Ex-neighbors of a deleted node flood its L-bit id for r_H' hops; silent for cliques."""

    name = "memlist_node_del"
    model = "node_del"

    def __init__(self, h: Graph, r: int):
        super().__init__(h, r, params(h).r_H_prime)

    def payload_bits(self, n):
        return id_bits(n)

    @staticmethod
    def local_payload(v: int, w: int, L: int) -> int:
        return w - 1

    @staticmethod
    def matcher(payload: int, L: int):
        x = payload + 1
        return lambda c: x in copy_nodes(c)


# ---------------------------------------------------------------- memdetect

class _StarNode(Node):
    def __init__(self, s: int, deg: int):
        self.s = s
        self.mine = deg >= s
        self.out = self.mine

    def send(self, prev, cur, rnd):
        self.mine = len(cur) >= self.s
        if not cur:
            self.out = False
            return {}
        b = ONE if self.mine else ZERO
        return {w: b for w in cur}

    def receive(self, inbox, rnd):
        self.out = self.mine or any(b.val for b in inbox.values())
        return self.out


class MemDetectStar(Protocol):
    """Each node tells its neighbors, in one bit, whether its degree reaches s."""

    name = "memdetect_star"
    problem = "memdetect"

    def __init__(self, s: int):
        if s < 2:
            raise ValueError("star target needs s >= 2")
        self.s = s
        self.h = Graph(edges=[(1, i) for i in range(2, s + 2)])
        self.models = CHANGE_KINDS

    @classmethod
    def for_target(cls, h: Graph) -> MemDetectStar:
        if not is_star(h) or len(h) < 3:
            raise ValueError("memdetect_star needs a star K_{1,s} with s >= 2")
        return cls(len(h) - 1)

    def make_node(self, v, n, g0):
        nd = _StarNode(self.s, g0.degree(v) if v in g0 else 0)
        if v in g0:
            nd.out = nd.mine or any(g0.degree(w) >= self.s for w in g0.neighbors(v))
        return nd

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return _StarNode(self.s, 0)

    def bound(self, n: int) -> int:
        return 1

    def describe(self):
        return {**super().describe(), "s": self.s}


class _Rad1Data(_G0Data):
    def __init__(self, g0, h):
        super().__init__(g0, h)
        self.central = {c: universal_lister(c) for c in self.copies}


class _Rad1Node(Node):
    def __init__(self, v: int, d: _Rad1Data):
        self.v = v
        self.owned: set[Copy] = set()       # alive copies where v is central
        self.pairs: dict[int, set[Copy]] = {}  # fringe -> alive owned copies containing it
        self.groups: set[int] = set()        # centrals u with an alive copy holding v as fringe
        for c in d.by_node.get(v, ()):
            u = d.central[c]
            if u == v:
                self.owned.add(c)
                for x in copy_nodes(c):
                    if x != v:
                        self.pairs.setdefault(x, set()).add(c)
            else:
                self.groups.add(u)
        self.out = bool(self.owned or self.groups)

    def send(self, prev, cur, rnd):
        lost = prev - cur
        if not lost:
            return {}
        self.groups -= lost
        dead = {c for c in self.owned if copy_nodes(c) & lost}
        msgs = {}
        if dead:
            self.owned -= dead
            for x in lost:
                self.pairs.pop(x, None)
            for x in list(self.pairs):
                left = self.pairs[x] - dead
                if left:
                    self.pairs[x] = left
                else:
                    del self.pairs[x]
                    if x in cur:
                        msgs[x] = ONE
        return msgs

    def receive(self, inbox, rnd):
        if inbox:
            self.groups -= inbox.keys()
        self.out = bool(self.owned or self.groups)
        return self.out


class MemDetectRad1NodeDel(_SharedG0):
    """Each copy's central node watches it and tells a fringe node, in one bit,
    when no copy pairing them is left."""

    name = "memdetect_rad1_node_del"
    problem = "memdetect"

    def __init__(self, h: Graph):
        if params(h).rad != 1:
            raise ValueError("memdetect_rad1_node_del needs a target of radius 1")
        self.h = h
        self.models = frozenset({"node_del"})

    def _build(self, g0):
        return _Rad1Data(g0, self.h)

    def make_node(self, v, n, g0):
        return _Rad1Node(v, self._prep(g0))

    def bound(self, n: int) -> int:
        return 1


def _fits_parts(g: Graph, nodes: tuple[int, ...], sizes: list[int]) -> bool:
    """Whether g[nodes] contains the complete multipartite graph with these part sizes."""
    left = set(nodes)
    comps = []
    while left:
        x = left.pop()
        comp, stack = 1, [x]
        while stack:
            y = stack.pop()
            ny = g.neighbors(y)
            for z in [z for z in left if z not in ny]:
                left.discard(z)
                comp += 1
                stack.append(z)
        comps.append(comp)
    comps.sort(reverse=True)
    bins = sorted(sizes, reverse=True)

    def place(i: int) -> bool:
        if i == len(comps):
            return all(b == 0 for b in bins)
        tried = set()
        for j, room in enumerate(bins):
            if room >= comps[i] and room not in tried:
                tried.add(room)
                bins[j] -= comps[i]
                if place(i + 1):
                    return True
                bins[j] += comps[i]
        return False

    return place(0)


class _CountNode(Node):
    def __init__(self, v: int, table: dict[frozenset[int], list[int]]):
        self.v = v
        self.table = table  # S -> [count, need]
        self.out = any(c >= need for c, need in table.values())

    def send(self, prev, cur, rnd):
        lost = prev - cur
        if not lost:
            return {}
        for S in [S for S in self.table if S & lost]:
            del self.table[S]
        return {w: ONE for w in cur}

    def receive(self, inbox, rnd):
        if inbox:
            senders = inbox.keys()
            for S, ent in self.table.items():
                if S <= senders:
                    ent[0] -= 1
        self.out = any(c >= need for c, need in self.table.values())
        return self.out


class MemDetectMultipartiteNodeDel(Protocol):
    """Count table over neighbor subsets, kept exact with one-bit deletion notices."""

    name = "memdetect_multipartite_node_del"
    problem = "memdetect"

    def __init__(self, h: Graph):
        pr = params(h)
        if not pr.is_complete_multipartite:
            raise ValueError("memdetect_multipartite_node_del needs a complete multipartite target")
        self.h = h
        self.parts = [len(p) for p in pr.parts]
        self.models = frozenset({"node_del"})

    def table(self, g0: Graph, v: int) -> dict[frozenset[int], list[int]]:
        m = len(self.h)
        nbrs = sorted(g0.neighbors(v))
        out: dict[frozenset[int], list[int]] = {}
        by_size: dict[int, list[tuple[int, list[int]]]] = {}
        for i, si in enumerate(self.parts):
            rest = self.parts[:i] + self.parts[i + 1:]
            by_size.setdefault(m - si, []).append((si - 1, rest))
        for size, opts in sorted(by_size.items()):
            for S in combinations(nbrs, size):
                need = min((nd for nd, rest in opts if _fits_parts(g0, S, rest)), default=None)
                if need is None:
                    continue
                common = set(g0.neighbors(S[0]))
                for x in S[1:]:
                    common &= g0.neighbors(x)
                common.discard(v)
                out[frozenset(S)] = [len(common), need]
        return out

    def make_node(self, v, n, g0):
        return _CountNode(v, self.table(g0, v) if v in g0 else {})

    def bound(self, n: int) -> int:
        return 1


# ---------------------------------------------------------------- list under deletions

class _ListerNode(Node):
    def __init__(self, v: int, listed: set[Copy]):
        self.v = v
        self.out = frozenset(listed)

    def _drop(self, dead) -> None:
        if any(dead(c) for c in self.out):
            self.out = frozenset(c for c in self.out if not dead(c))


class _StarListNode(_ListerNode):
    def __init__(self, v, listed, model):
        super().__init__(v, listed)
        self.model = model

    def send(self, prev, cur, rnd):
        lost = prev - cur
        if lost:
            if self.model == "edge_del":
                es = {norm_edge(self.v, w) for w in lost}
                self._drop(lambda c: any(e in c for e in es))
            else:
                self._drop(lambda c: bool(copy_nodes(c) & lost))
        return {}


class _ListerProtocol(_SharedG0):
    problem = "list"
    chooser: Callable[[Copy], int]

    def _build(self, g0):
        d = _G0Data(g0, self.h)
        d.listers = assign_listers(d.copies, self.chooser)
        return d

    def listed(self, v: int, g0: Graph) -> set[Copy]:
        return self._prep(g0).listers.get(v, set())

    def describe(self):
        return {**super().describe(), "model": self.model}


class ListStarDel(_ListerProtocol):
    """Zero bits: each copy is listed by a node adjacent to all of it, which sees every relevant loss."""

    name = "list_star_del"

    def __init__(self, h: Graph, model: str):
        pr = params(h)
        if model == "edge_del" and pr.ne_rad != 1:
            raise ValueError("list_star_del under edge deletions needs a star target")
        if model == "node_del" and pr.rad != 1:
            raise ValueError("list_star_del under node deletions needs a target of radius 1")
        if model not in ("edge_del", "node_del"):
            raise ValueError(f"unsupported model {model!r}")
        self.h, self.model = h, model
        self.models = frozenset({model})
        self.chooser = universal_lister

    def make_node(self, v, n, g0):
        return _StarListNode(v, self.listed(v, g0), self.model)

    def bound(self, n: int) -> int:
        return 0


class _DelPairNode(_ListerNode):
    def send(self, prev, cur, rnd):
        lost = prev - cur
        if not lost:
            return {}
        es = {norm_edge(self.v, w) for w in lost}
        self._drop(lambda c: any(e in c for e in es))
        return {w: ONE for w in cur}

    def receive(self, inbox, rnd):
        if len(inbox) == 2:
            e = norm_edge(*inbox.keys())
            self._drop(lambda c: e in c)
        return self.out


class ListRad1EdgeDel(_ListerProtocol):
    """Endpoints of a deleted edge send one bit; a lister hearing from both ends of a copy edge drops it."""

    name = "list_rad1_edge_del"
    model = "edge_del"

    def __init__(self, h: Graph):
        pr = params(h)
        if pr.rad != 1 or pr.ne_rad != 2:
            raise ValueError("list_rad1_edge_del needs radius 1 and node-edge radius 2")
        self.h = h
        self.models = frozenset({"edge_del"})
        self.chooser = universal_lister

    def make_node(self, v, n, g0):
        return _DelPairNode(v, self.listed(v, g0))

    def bound(self, n: int) -> int:
        return 1


class _IdNode(_ListerNode):
    def __init__(self, v, listed, model, L):
        super().__init__(v, listed)
        self.model, self.L = model, L

    def send(self, prev, cur, rnd):
        lost = prev - cur
        if not lost or not cur:
            self._apply(lost)
            return {}
        (w,) = lost
        if self.model == "edge_del":
            a, b = norm_edge(self.v, w)
            msg = Bits(((a - 1) << self.L) | (b - 1), 2 * self.L)
        else:
            msg = Bits(w - 1, self.L)
        self._apply(lost)
        return {x: msg for x in cur}

    def _apply(self, lost) -> None:
        if not lost:
            return
        if self.model == "edge_del":
            es = {norm_edge(self.v, w) for w in lost}
            self._drop(lambda c: any(e in c for e in es))
        else:
            self._drop(lambda c: bool(copy_nodes(c) & lost))

    def receive(self, inbox, rnd):
        L = self.L
        for m in inbox.values():
            if self.model == "edge_del":
                e = ((m.val >> L) + 1, (m.val & ((1 << L) - 1)) + 1)
                self._drop(lambda c: e in c)
            else:
                x = m.val + 1
                self._drop(lambda c: x in copy_nodes(c))
        return self.out


class ListCenterDel(_ListerProtocol):
    """A center of each copy lists it; deleted edge or node ids are told to neighbors of the change."""

    name = "list_center_del"

    def __init__(self, h: Graph, model: str):
        pr = params(h)
        if model == "edge_del":
            if pr.ne_rad != 2:
                raise ValueError("list_center_del under edge deletions needs node-edge radius 2")
            self.chooser = ne_center_lister
        elif model == "node_del":
            if pr.rad != 2:
                raise ValueError("list_center_del under node deletions needs radius 2")
            self.chooser = center_lister
        else:
            raise ValueError(f"unsupported model {model!r}")
        self.h, self.model = h, model
        self.models = frozenset({model})

    def make_node(self, v, n, g0):
        return _IdNode(v, self.listed(v, g0), self.model, id_bits(n))

    def bound(self, n: int) -> int:
        return (2 if self.model == "edge_del" else 1) * id_bits(n)


def blowup(h: Graph, sizes: dict[int, int] | int) -> tuple[Graph, dict[int, list[int]]]:
    """Replace each node x of h by an independent set of sizes[x] nodes; adjacent sets become bicliques."""
    if isinstance(sizes, int):
        sizes = {x: sizes for x in h.nodes}
    groups: dict[int, list[int]] = {}
    nxt = 1
    for x in h.nodes:
        groups[x] = list(range(nxt, nxt + sizes.get(x, 1)))
        nxt += len(groups[x])
    edges = [(a, b) for x, y in h.edges() for a in groups[x] for b in groups[y]]
    return Graph(range(1, nxt), edges), groups
