"""Triangle protocols for insertion-only dynamic networks.

Three protocols share the same skeleton: on gaining an edge a node signals all
its neighbors, sends a short record of its recent past to the new neighbor, and
keeps streaming a fixed-size description of its neighborhood over every edge.

Frames on one directed edge in one round start with a 3-bit type bitmap
[signal][records][block]; absent fields cost nothing.
"""
from __future__ import annotations

from functools import lru_cache

from ..bits import BitReader, Bits, BitWriter, id_bits, width
from ..graph import Graph
from ..sim import Node, Protocol
from .common import Blocks, decode_slots, distinct_bit_ids, encode_slots, id_bit, initial_triangles, triangle

FRAME_BITS = 3


def _window_d(n: int) -> int:
    return max(2, id_bits(n))


# ====================================================================== membership listing

class MemListK3EdgeIns(Protocol):
    """Membership listing of triangles under edge insertions, O(log log n) bits for constant degree.

    Each node keeps, per recent round, which neighbor it gained and which
    neighbors signaled it. A new edge {x,y} carries x's gain offsets and signal
    offsets to y. Every edge streams its endpoint's neighbor-id list in T
    blocks, restarting with a fresh snapshot every T rounds.
    """

    name = "memlist_k3_edge_ins"
    problem = "memlist"
    models = frozenset({"edge_ins"})

    def __init__(self, n: int, delta: int):
        if delta < 2:
            raise ValueError("degree bound must be at least 2")
        self.n = n
        self.delta = delta
        self.L = id_bits(n)
        self.d = _window_d(n)
        self.T = max(1, self.d // 2)
        self.wd = width(self.d)
        self.we = width(delta + 1)
        self.ws = width(delta * delta + 1)
        self.blocks = Blocks(delta * self.L, self.T)

    def header_bits(self) -> int:
        return FRAME_BITS + self.we + self.ws + self.blocks.header_bits()

    def bound(self) -> int:
        """Closed-form cap on any single message."""
        D = self.delta
        return (1 + (D + D * D) * (self.wd + 1)
                + -(-(D * self.L) // self.T) + self.header_bits())

    def describe(self) -> dict:
        return {**super().describe(), "n": self.n, "delta": self.delta, "d": self.d,
                "T": self.T, "bound": self.bound()}

    def make_node(self, v, n, g0):
        return _T4Node(self, v, g0)


class _T4Node(Node):
    def __init__(self, p: MemListK3EdgeIns, v: int, g0: Graph):
        self.p = p
        self.v = v
        self.g0 = g0
        self.since: dict[int, int] = {w: 1 for w in g0.neighbors(v)} if v in g0 else {}
        self.gained: dict[int, int] = {}
        self.sig: dict[int, frozenset[int]] = {}
        self.snap: dict[int, int] = {}
        self.rx: dict[int, dict[int, int]] = {}
        self.known: dict[int, set[int]] = {}
        self.tri = initial_triangles(g0, v)
        self.out = frozenset(self.tri)
        self.cur: frozenset[int] = frozenset()
        self.new: frozenset[int] = frozenset()

    def known_of(self, w: int) -> set[int]:
        s = self.known.get(w)
        if s is None:
            s = set(self.g0.neighbors(w)) if w in self.g0 else set()
            self.known[w] = s
        return s

    def _records(self, k: int) -> tuple[list[int], list[int]]:
        d = self.p.d
        edge = sorted(k - g for g in self.gained.values() if 1 <= k - g <= d)
        sig = sorted(k - s for s in self.sig if 1 <= k - s <= d)
        return edge, sig

    def _block(self, w: int, i: int, part: int) -> None:
        p = self.p
        if p.T == 1:
            full = p.blocks.join({0: part})
        else:
            buf = self.rx.get(w)
            if buf is None:
                buf = self.rx[w] = {}
            if i == 0:
                buf.clear()
            buf[i] = part
            if i != p.T - 1:
                return
            full = p.blocks.join(buf)
        if full is not None:
            ids = decode_slots(full, p.delta, p.L)
            self.known_of(w).update(x + 1 for x in ids if x + 1 != w)

    def _payload(self, cur: frozenset[int]) -> int:
        p = self.p
        return encode_slots([w - 1 for w in sorted(cur)], p.delta, p.L)

    def send(self, prev, cur, k):
        p = self.p
        new = cur - prev
        self.cur, self.new = cur, new
        for y in new:
            self.gained[y] = k
            self.since[y] = k
        if prev - cur:
            raise RuntimeError("edge deletion seen by an insertion-only protocol")
        if len(cur) > p.delta:
            raise RuntimeError(f"node {self.v} exceeds degree bound {p.delta}")
        rec = self._records(k) if new else None
        blocks = p.blocks
        T = p.T
        out = {}
        payload_now = None
        since, snap = self.since, self.snap
        bs, tail_n = blocks.bs, FRAME_BITS + blocks.iw + blocks.bs
        for w in cur:
            ph = (k - since[w]) % T
            if ph == 0:
                if payload_now is None:
                    payload = self._payload(cur)
                    payload_now = [blocks.block(payload, i) for i in range(T)]
                snap[w] = payload_now
            if not new:
                # block-only frame, built directly
                out[w] = Bits((((1 << blocks.iw) | ph) << bs) | snap[w][ph], tail_n)
                continue
            bw = BitWriter()
            r = 1 if w in new else 0
            bw.put(1, 1).put(r, 1).put(1, 1)
            if r:
                edge, sig = rec
                if len(edge) > p.delta or len(sig) > p.delta * p.delta:
                    raise RuntimeError("recent records exceed the degree bound")
                bw.put(len(edge), p.we)
                for j in edge:
                    bw.put(j - 1, p.wd)
                bw.put(len(sig), p.ws)
                for j in sig:
                    bw.put(j - 1, p.wd)
            bw.put(ph, blocks.iw).put(snap[w][ph], bs)
            out[w] = bw.bits()
        return out

    def _take_block(self, w: int, i: int, part: int) -> None:
        p = self.p
        buf = self.rx.setdefault(w, {})
        if i == 0:
            buf.clear()
        buf[i] = part
        if i == p.T - 1:
            full = p.blocks.join(buf)
            if full is not None:
                slots = decode_slots(full, p.delta - 1, p.wj)
                self.got[w] = tuple(sorted({x + 1 for x in slots}))

    def receive(self, inbox, k):
        p = self.p
        signalers = set()
        recs: dict[int, tuple[list[int], list[int]]] = {}
        bs, iw, T = p.blocks.bs, p.blocks.iw, p.T
        fast_n = FRAME_BITS + iw + bs
        for w, b in inbox.items():
            if b.n == fast_n and (b.val >> (iw + bs)) == 1:
                i = (b.val >> bs) & ((1 << iw) - 1)
                self._block(w, i, b.val & ((1 << bs) - 1))
                continue
            br = BitReader(b)
            s, r, blk = br.get(1), br.get(1), br.get(1)
            if s:
                signalers.add(w)
            if r:
                ne = br.get(p.we)
                edge = [br.get(p.wd) + 1 for _ in range(min(ne, p.delta))]
                ns = br.get(p.ws)
                sig = [br.get(p.wd) + 1 for _ in range(min(ns, p.delta * p.delta))]
                recs[w] = (edge, sig)
            if blk:
                i, part = p.blocks.read(br)
                self._block(w, i, part)
        if signalers:
            self.sig[k] = frozenset(signalers)
        d = p.d
        for old in [s for s in self.sig if k - s > d]:
            del self.sig[old]
        for w in [w for w, g in self.gained.items() if k - g > d]:
            del self.gained[w]

        added = False
        cur, new, me = self.cur, self.new, self.v
        for y in new:
            edge, sig = recs.get(y, ((), ()))
            for w in cur:
                if w == y:
                    continue
                hit = y in self.known_of(w)
                if not hit:
                    g = self.gained.get(w)
                    hit = g is not None and (k - g) in sig
                if not hit:
                    hit = any(w in self.sig.get(k - j, ()) for j in edge)
                if hit:
                    t = triangle(me, y, w)
                    if t not in self.tri:
                        self.tri.add(t)
                        added = True
        if not new:
            old_sig = signalers & cur
            if len(old_sig) == 2:
                a, b = sorted(old_sig)
                t = triangle(me, a, b)
                if t not in self.tri:
                    self.tri.add(t)
                    added = True
        if added:
            self.out = frozenset(self.tri)
        return self.out


# ====================================================================== listing, mixed insertions

class ListK3MixedIns(Protocol):
    """Listing of triangles under edge and node insertions, O(log log log n) bits for constant degree.

    Instead of neighbor ids, each edge streams the list of first-differing-bit
    positions between the receiver's id and the sender's other neighbors. A
    node gaining an edge reports, to each older neighbor, the bits of its new
    neighbor's id at the positions that neighbor last delivered. A common
    neighbor of both endpoints then compares the two reported bits: they differ
    for a new edge and agree when one fresh node joined both endpoints.

    Recent gain records carry one flag per offset marking gains of a freshly
    inserted node; for flagged offsets the receiver only accepts the node it
    itself gained at that offset.
    """

    name = "list_k3_mixed_ins"
    problem = "list"
    models = frozenset({"edge_ins", "node_ins"})

    def __init__(self, n: int, delta: int):
        if delta < 2:
            raise ValueError("degree bound must be at least 2")
        self.n = n
        self.delta = delta
        self.L = id_bits(n)
        self.d = max(2, width(self.L))
        self.T = max(1, self.d // 2)
        self.wd = width(self.d)
        self.we = width(delta + 1)
        self.wj = max(1, width(self.L))
        self.blocks = Blocks((delta - 1) * self.wj, self.T)
        self._plain: dict[tuple[int, int], Bits] = {}
        self.plain_parts: dict[Bits, tuple[int, int]] = {}

    def header_bits(self) -> int:
        return FRAME_BITS + self.we + self.blocks.header_bits()

    def bound(self) -> int:
        D = self.delta
        return (1 + (D - 1) * (1 + self.wj) + D * (self.wd + 1)
                + -(-((D - 1) * self.wj) // self.T) + self.header_bits())

    def describe(self) -> dict:
        return {**super().describe(), "n": self.n, "delta": self.delta, "d": self.d,
                "T": self.T, "bound": self.bound()}

    def make_node(self, v, n, g0):
        return _T6Node(self, v, g0, None)

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return _T6Node(self, v, g0, rnd)

    def plain_msg(self, payload: int, ph: int) -> Bits:
        """A block-only message; cached since quiet rounds resend the same few."""
        key = (payload, ph)
        msg = self._plain.get(key)
        if msg is None:
            bw = BitWriter()
            bw.put(0, 1).put(0, 1).put(1, 1)
            self.blocks.write(bw, payload, ph)
            msg = self._plain[key] = bw.bits()
            self.plain_parts[msg] = (ph, self.blocks.block(payload, ph))
        return msg

    def dblist(self, me: int, toward: int, nbrs) -> tuple[int, tuple[int, ...]]:
        """Encoded payload and the index set a receiver decodes from it."""
        return _dblist(self.L, self.delta - 1, self.wj, toward, frozenset(nbrs))


@lru_cache(maxsize=1 << 16)
def _dblist(L: int, slots: int, wj: int, toward: int, nbrs: frozenset[int]):
    idx = sorted({distinct_bit_ids(toward, x, L) for x in nbrs if x != toward})
    payload = encode_slots([j - 1 for j in idx], slots, wj)
    decoded = tuple(sorted({x + 1 for x in decode_slots(payload, slots, wj)}))
    return payload, decoded


class _T6Node(Node):
    def __init__(self, p: ListK3MixedIns, v: int, g0: Graph, born: int | None):
        self.p = p
        self.v = v
        self.born = born
        self.g0 = g0
        self.g0n = g0.neighbors(v) if (born is None and v in g0) else frozenset()
        self.since: dict[int, int] = {w: 1 for w in self.g0n}
        # round -> (neighbor gained, whether it was a freshly inserted node)
        self.gains: dict[int, list[tuple[int, bool]]] = {}
        self.sig: dict[int, frozenset[int]] = {}
        self.snap: dict[int, tuple[int, tuple[int, ...]]] = {}
        # index sets delivered to each neighbor: list of (round completed, indices)
        self.sent: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
        self.rx: dict[int, dict[int, int]] = {}
        self.got: dict[int, tuple[int, ...]] = {}
        self.tri = initial_triangles(g0, v) if born is None else set()
        self.out = frozenset(self.tri)
        self.cur: frozenset[int] = frozenset()
        self.prev: frozenset[int] = frozenset()
        self.new: frozenset[int] = frozenset()
        self.fresh = False

    def _delivered_to(self, w: int, k: int) -> tuple[int, ...] | None:
        hist = self.sent.get(w)
        if not hist:
            return None
        for rnd, idx in reversed(hist):
            if rnd <= k - 1:
                return idx
        return None

    def send(self, prev, cur, k):
        p = self.p
        new = cur - prev
        if prev - cur:
            raise RuntimeError("deletion seen by an insertion-only protocol")
        if len(cur) > p.delta:
            raise RuntimeError(f"node {self.v} exceeds degree bound {p.delta}")
        self.prev, self.cur, self.new = prev, cur, new
        self.fresh = self.born == k
        for y in new:
            self.since[y] = k
        old = prev & cur
        edge_rec = None
        if new and not self.fresh:
            d = p.d
            edge_rec = sorted((k - g, any(f for _, f in lst)) for g, lst in self.gains.items()
                              if 1 <= k - g <= d)
            if len(edge_rec) > p.delta:
                raise RuntimeError("recent records exceed the degree bound")
        report_bits: dict[int, list[int]] = {}
        if new and not self.fresh and len(new) == 1:
            (y,) = new
            for w in old:
                idx = self.got.get(w, ())
                report_bits[w] = [id_bit(y, j, p.L) for j in idx]
        blocks, T = p.blocks, p.T
        out = {}
        for w in cur:
            ph = (k - self.since[w]) % T
            if ph == 0:
                self.snap[w] = p.dblist(self.v, w, cur)
            payload, idx = self.snap[w]
            if ph == T - 1:
                hist = self.sent.setdefault(w, [])
                hist.append((k, idx))
                if len(hist) > 2:
                    del hist[0]
            s = 1 if new else 0
            r = 1 if (w in new and edge_rec is not None) else 0
            if not s and not r and w not in report_bits:
                out[w] = p.plain_msg(payload, ph)
                continue
            bw = BitWriter()
            bw.put(s, 1).put(r, 1).put(1, 1)
            if r:
                bw.put(len(edge_rec), p.we)
                for j, f in edge_rec:
                    bw.put(j - 1, p.wd).put(1 if f else 0, 1)
            blocks.write(bw, payload, ph)
            for bit in report_bits.get(w, ()):
                bw.put(bit, 1)
            out[w] = bw.bits()
        return out

    def _take_block(self, w: int, i: int, part: int) -> None:
        p = self.p
        buf = self.rx.setdefault(w, {})
        if i == 0:
            buf.clear()
        buf[i] = part
        if i == p.T - 1:
            full = p.blocks.join(buf)
            if full is not None:
                slots = decode_slots(full, p.delta - 1, p.wj)
                self.got[w] = tuple(sorted({x + 1 for x in slots}))

    def receive(self, inbox, k):
        p = self.p
        cur, new, prev = self.cur, self.new, self.prev
        old = prev & cur
        signalers: set[int] = set()
        recs: dict[int, list[tuple[int, bool]]] = {}
        reports: dict[int, list[int]] = {}
        for w, b in inbox.items():
            plain = p.plain_parts.get(b)
            if plain is not None:
                self._take_block(w, *plain)
                continue
            br = BitReader(b)
            s, r, blk = br.get(1), br.get(1), br.get(1)
            if s:
                signalers.add(w)
            if r:
                cnt = min(br.get(p.we), p.delta)
                recs[w] = [(br.get(p.wd) + 1, bool(br.get(1))) for _ in range(cnt)]
            if blk:
                self._take_block(w, *p.blocks.read(br))
            if s and w in old:
                idx = self._delivered_to(w, k)
                reports[w] = [br.get(1) for _ in idx] if idx else []

        if new:
            self.gains[k] = [(y, y in signalers and y not in recs and not self.fresh) for y in sorted(new)]
        if signalers:
            self.sig[k] = frozenset(signalers)
        d = p.d
        for old_k in [x for x in self.sig if k - x > d]:
            del self.sig[old_k]
        for old_k in [x for x in self.gains if k - x > d]:
            del self.gains[old_k]

        found: list = []
        me = self.v
        if new and not self.fresh and len(new) == 1:
            (y,) = new
            # a fresh node joined us and an older neighbor at once
            for w in signalers & old:
                found.append(triangle(me, y, w))
            # both ends known adjacent since the start
            if y in self.g0:
                for w in self.g0n & self.g0.neighbors(y):
                    found.append(triangle(me, y, w))
            # recent gain record from an older node
            rec = recs.get(y)
            if rec:
                for j, fresh in rec:
                    who = self.sig.get(k - j, ())
                    mine = {x for x, _ in self.gains.get(k - j, ())}
                    for w in who:
                        if w == y or w not in cur:
                            continue
                        if fresh and w not in mine:
                            continue
                        found.append(triangle(me, y, w))
        if not new:
            both = signalers & old
            if len(both) == 2 and len(signalers) == 2:
                a, b = sorted(both)
                j = distinct_bit_ids(a, b, p.L)
                ia, ib = self._delivered_to(a, k), self._delivered_to(b, k)
                if ia and ib and j in ia and j in ib:
                    ba = reports[a][ia.index(j)]
                    bb = reports[b][ib.index(j)]
                    if ba != bb:
                        found.append(triangle(me, a, b))
        added = False
        for t in found:
            if t not in self.tri:
                self.tri.add(t)
                added = True
        if added:
            self.out = frozenset(self.tri)
        return self.out


# ====================================================================== baseline membership detection

class BaselineMemDetectK3(Protocol):
    """Membership detection of triangles under edge insertions with threshold d.

    A new edge carries two d-bit strings (own gains, neighbors' gains over the
    last d rounds) and, for the next d rounds, the sender's neighbor-id list
    in d blocks. A one-bit Signal goes to all neighbors on every gain (this is
    what feeds the second string), and a one-bit Inform tells the other
    endpoint when a triangle was found from an older id list.

    Frames use a 4-bit bitmap [signal][records][block][inform].
    """

    name = "baseline_memdetect_k3"
    problem = "memdetect"
    models = frozenset({"edge_ins"})

    def __init__(self, d: int, n: int, delta: int):
        if d < 1:
            raise ValueError("d must be positive")
        self.d = d
        self.n = n
        self.delta = delta
        self.L = id_bits(n)
        self.blocks = Blocks(delta * self.L, d)

    def bound(self) -> int:
        return 4 + 2 * self.d + self.blocks.iw + self.blocks.bs

    def describe(self) -> dict:
        return {**super().describe(), "n": self.n, "delta": self.delta, "d": self.d,
                "bound": self.bound()}

    def make_node(self, v, n, g0):
        return _BaseNode(self, v, g0)


class _BaseNode(Node):
    def __init__(self, p: BaselineMemDetectK3, v: int, g0: Graph):
        self.p = p
        self.v = v
        self.g0 = g0
        self.gained: dict[int, int] = {}
        self.sig: set[int] = set()
        self.streams: dict[int, tuple[int, int]] = {}
        self.rx: dict[int, dict[int, int]] = {}
        self.known: dict[int, set[int]] = {}
        self.out = bool(initial_triangles(g0, v))
        self.cur: frozenset[int] = frozenset()
        self.new: frozenset[int] = frozenset()

    def known_of(self, w: int) -> set[int]:
        s = self.known.get(w)
        if s is None:
            s = set(self.g0.neighbors(w)) if w in self.g0 else set()
            self.known[w] = s
        return s

    def _bitmap(self, rounds, k: int) -> int:
        x = 0
        for j in range(1, self.p.d + 1):
            x = (x << 1) | (1 if (k - j) in rounds else 0)
        return x

    def send(self, prev, cur, k):
        p = self.p
        new = cur - prev
        self.cur, self.new = cur, new
        out = {}
        if new:
            edge_rounds = set(self.gained.values())
            for y in new:
                self.gained[y] = k
                payload = encode_slots([w - 1 for w in sorted(cur)], p.delta, p.L)
                self.streams[y] = (k, payload)
        for w in cur:
            s = 1 if new else 0
            r = 1 if w in new else 0
            st = self.streams.get(w)
            blk = st is not None and k - st[0] < p.d
            inform = 1 if (w in new and any(w in self.known_of(x) for x in cur if x != w)) else 0
            if not (s or r or blk or inform):
                continue
            bw = BitWriter().put(s, 1).put(r, 1).put(1 if blk else 0, 1).put(inform, 1)
            if r:
                bw.put(self._bitmap(edge_rounds, k), p.d)
                bw.put(self._bitmap(self.sig, k), p.d)
            if blk:
                p.blocks.write(bw, st[1], k - st[0])
            out[w] = bw.bits()
        for w in [w for w, st in self.streams.items() if k - st[0] >= p.d - 1]:
            del self.streams[w]
        return out

    def _take_block(self, w: int, i: int, part: int) -> None:
        p = self.p
        buf = self.rx.setdefault(w, {})
        if i == 0:
            buf.clear()
        buf[i] = part
        if i == p.T - 1:
            full = p.blocks.join(buf)
            if full is not None:
                slots = decode_slots(full, p.delta - 1, p.wj)
                self.got[w] = tuple(sorted({x + 1 for x in slots}))

    def receive(self, inbox, k):
        p = self.p
        signalers = set()
        yes = self.out
        for w, b in inbox.items():
            br = BitReader(b)
            s, r, blk, inform = br.get(1), br.get(1), br.get(1), br.get(1)
            if s:
                signalers.add(w)
            if inform:
                yes = True
            if r:
                e_bits, s_bits = br.get(p.d), br.get(p.d)
                for j in range(1, p.d + 1):
                    bit = 1 << (p.d - j)
                    # they gained an edge j rounds ago while a neighbor of ours signaled us
                    if e_bits & bit and (k - j) in self.sig:
                        yes = True
                    # we gained an edge j rounds ago while one of their neighbors signaled them
                    if s_bits & bit and (k - j) in self.gained.values():
                        yes = True
            if blk:
                i, part = p.blocks.read(br)
                buf = self.rx.setdefault(w, {})
                if i == 0:
                    buf.clear()
                buf[i] = part
                if i == p.d - 1:
                    full = p.blocks.join(buf)
                    if full is not None:
                        self.known_of(w).update(x + 1 for x in decode_slots(full, p.delta, p.L)
                                                if x + 1 != w)
        if signalers:
            self.sig.add(k)
        self.sig = {x for x in self.sig if k - x <= p.d}
        self.gained = {w: g for w, g in self.gained.items() if k - g <= p.d}
        if self.new:
            for y in self.new:
                if any(y in self.known_of(x) for x in self.cur if x != y):
                    yes = True
        elif len(signalers & self.cur) == 2:
            yes = True
        self.out = yes
        return self.out
