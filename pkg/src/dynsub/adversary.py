"""Hard-instance generators and indistinguishability attacks.

Every violation reported here is backed by two concrete schedules in which a
witness node sees bit-identical transcripts while the oracle says its correct
output differs. Counting arguments are only ever reported as capacity numbers.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Iterable

from .bits import Bits, id_bits
from .graph import Graph, bfs, complete, is_clique, is_star, norm_edge, params
from .protocols.general import blowup
from .oracle import Copy, canon, copies_containing, copy_nodes, copy_to_json, in_some_copy
from .sim import (Event, Node, Protocol, RunReport, Schedule, SilentProtocol, Truncated, run,
                  validate)

# ---------------------------------------------------------------- scenario pairs


@dataclass
class ScenarioPair:
    schedule_a: Schedule
    schedule_b: Schedule
    witness: int
    rounds: int
    truth_a: Any = None
    truth_b: Any = None
    label: str = ""
    neighbors_only: bool = False

    def to_json(self) -> dict:
        return {
            "label": self.label, "witness": self.witness, "rounds": self.rounds,
            "truth_a": _jsonable(self.truth_a), "truth_b": _jsonable(self.truth_b),
            "schedule_a": self.schedule_a.to_json(), "schedule_b": self.schedule_b.to_json(),
        }


def _jsonable(x):
    if isinstance(x, frozenset):
        return sorted(copy_to_json(c) for c in x)
    return x


def witness_truth(problem: str, h: Graph, g: Graph, v: int):
    """What a correct node v must output on g (memlist / memdetect); list and detect use memdetect."""
    if problem == "memlist":
        return frozenset(copies_containing(g, h, v)) if v in g else frozenset()
    return in_some_copy(g, h, v) if v in g else False


def _fill_truths(pair: ScenarioPair, problem: str, h: Graph) -> ScenarioPair:
    pair.truth_a = witness_truth(problem, h, pair.schedule_a.final_graph(), pair.witness)
    pair.truth_b = witness_truth(problem, h, pair.schedule_b.final_graph(), pair.witness)
    return pair


def _sched(h_nodes: Iterable[int], g0: Graph, events: list[Event], model: str, n: int,
           r: int = 1) -> Schedule:
    return Schedule(n=n, initial=g0, events=events, r=r, model=frozenset({model}), delta=None)


def _far_edge(h: Graph) -> tuple[int, tuple[int, int]]:
    """(w, e) with node-edge distance equal to the node-edge diameter; smallest ids first."""
    dist = {x: bfs(h, x) for x in h.nodes}
    best = None
    for w in h.nodes:
        for a, b in h.edges():
            d = 1 + min(dist[w][a], dist[w][b])
            if best is None or d > best[0]:
                best = (d, w, (a, b))
    return best[1], best[2]


def _far_pair(h: Graph) -> tuple[int, int]:
    """(u, w) realizing the diameter."""
    best = None
    for u in h.nodes:
        d = bfs(h, u)
        for w in h.nodes:
            if best is None or d[w] > best[0]:
                best = (d[w], u, w)
    return best[1], best[2]


def locality_pair(h: Graph, change: str, T: int) -> ScenarioPair:
    """Two one-change schedules a far witness cannot tell apart within T rounds."""
    p = params(h)
    limit = p.r_H_prime if change == "node_del" else p.r_H
    if T >= limit:
        raise ValueError(f"T={T} is not below the locality threshold {limit} for {change}")
    if T < 0:
        raise ValueError("T must be non-negative")
    n = max(h.nodes)
    length = max(T, 1)
    quiet = [Event.quiet() for _ in range(length - 1)]
    if change in ("edge_ins", "edge_del"):
        w, (a, b) = _far_edge(h)
        if change == "edge_ins":
            g0 = h.without_edge(a, b)
            ev = Event.edge_ins(a, b)
        else:
            g0 = h
            ev = Event.edge_del(a, b)
        sa = _sched(h.nodes, g0, [ev] + quiet, change, n)
        sb = _sched(h.nodes, g0, [Event.quiet()] + quiet, change, n)
    elif change == "node_del":
        u, w = _far_pair(h)
        sa = _sched(h.nodes, h, [Event.node_del(u)] + quiet, change, n)
        sb = _sched(h.nodes, h, [Event.quiet()] + quiet, change, n)
    elif change == "node_ins":
        if p.r_H == p.r_H_prime:
            u, w = _far_pair(h)
            g0 = h.without_node(u)
            sa = _sched(h.nodes, g0, [Event.node_ins(u, h.neighbors(u))] + quiet, change, n)
            sb = _sched(h.nodes, g0, [Event.quiet()] + quiet, change, n)
        else:
            w, (a, b) = _far_edge(h)
            u, v = a, b
            g0 = h.without_node(u)
            sa = _sched(h.nodes, g0, [Event.node_ins(u, h.neighbors(u))] + quiet, change, n)
            sb = _sched(h.nodes, g0, [Event.node_ins(u, h.neighbors(u) - {v})] + quiet, change, n)
    else:
        raise ValueError(f"unknown change type {change!r}")
    pair = ScenarioPair(sa, sb, w, length, label=f"{change} T={T}", neighbors_only=(T == 0))
    return pair


def _transcripts_equal(ra: RunReport, rb: RunReport, v: int, rounds: int,
                       neighbors_only: bool = False) -> bool:
    ta, tb = ra.transcripts.get(v, [])[:rounds], rb.transcripts.get(v, [])[:rounds]
    if neighbors_only:
        return [x[0] for x in ta] == [x[0] for x in tb]
    return ta == tb


def run_watched(protocol: Protocol, problem: str, h: Graph, sched: Schedule,
                watch: Iterable[int]) -> RunReport:
    return run(protocol, problem, h, sched, keep_rounds=False, watch=list(watch), check=False,
               grade_rounds="none")


def assert_indistinguishable(pair: ScenarioPair, protocol: Protocol, problem: str,
                             h: Graph) -> dict:
    """Run both branches and compare the witness transcript through the graded round.

    "violation": transcripts agree while the oracle truths differ, so the
    protocol's (identical) output is wrong in at least one branch.
    "distinguished": transcripts differ; impossible for a sound pair.
    """
    _fill_truths(pair, problem, h)
    if pair.neighbors_only:
        # zero rounds: the witness may use its neighbor set but no message content
        protocol_run = Truncated(protocol, 0)
    else:
        protocol_run = protocol
    ra = run_watched(protocol_run, problem, h, pair.schedule_a, [pair.witness])
    rb = run_watched(protocol_run, problem, h, pair.schedule_b, [pair.witness])
    same = _transcripts_equal(ra, rb, pair.witness, pair.rounds, pair.neighbors_only)
    out_a = ra.final_outputs.get(pair.witness)
    out_b = rb.final_outputs.get(pair.witness)
    if not same:
        verdict = "distinguished"
    elif pair.truth_a == pair.truth_b:
        verdict = "no-claim"
    else:
        verdict = "violation"
    wrong = [lbl for lbl, o, t in (("a", out_a, pair.truth_a), ("b", out_b, pair.truth_b))
             if _as_problem(problem, o) != t]
    return {"verdict": verdict, "witness": pair.witness, "label": pair.label,
            "erring_branches": wrong, "protocol": protocol.name}


def _as_problem(problem: str, out):
    if problem in ("list", "detect") and isinstance(out, frozenset):
        return bool(out)
    return out


def list_edge_del_locality(h: Graph, protocol: Protocol) -> dict:
    """One-round listing under edge deletion when the node-edge radius is at least 3.

    With no change the copy must be listed by someone; for each such lister u
    pick an edge at node-edge distance >= 3 from u and delete it: u sees the
    same transcript and keeps listing a destroyed copy.
    """
    p = params(h)
    if p.ne_rad < 3:
        raise ValueError("one-round listing under edge deletions is possible when ne_rad <= 2")
    n = max(h.nodes)
    copy = canon(h.edges())
    quiet = _sched(h.nodes, h, [Event.quiet()], "edge_del", n)
    rb = run(protocol, "list", h, quiet, keep_rounds=False, check=False, grade_rounds="none")
    listers = sorted(v for v, o in rb.final_outputs.items() if copy in o)
    if not listers:
        return {"verdict": "violation", "reason": "copy not listed without any change",
                "pairs": [], "protocol": protocol.name}
    results = []
    for u in listers:
        d = bfs(h, u)
        e = max(h.edges(), key=lambda e: (1 + min(d[e[0]], d[e[1]]), -e[0], -e[1]))
        sa = _sched(h.nodes, h, [Event.edge_del(*e)], "edge_del", n)
        pair = ScenarioPair(sa, quiet, u, 1, label=f"list edge_del lister={u}")
        ra = run_watched(protocol, "list", h, sa, [u])
        rq = run_watched(protocol, "list", h, quiet, [u])
        same = _transcripts_equal(ra, rq, u, 1)
        false_listing = copy in ra.final_outputs.get(u, frozenset())
        results.append({"lister": u, "edge": list(e), "same_transcript": same,
                        "false_listing": false_listing, "pair": pair})
    ok = any(r["same_transcript"] and r["false_listing"] for r in results)
    return {"verdict": "violation" if ok else "distinguished",
            "pairs": [{k: v for k, v in r.items() if k != "pair"} for r in results],
            "protocol": protocol.name}


class AsList(Protocol):
    """Runs a membership-listing protocol as a listing protocol (union of outputs)."""

    problem = "list"

    def __init__(self, inner: Protocol):
        if inner.problem != "memlist":
            raise ValueError("AsList wraps memlist protocols")
        self.inner = inner
        self.name = f"{inner.name}+list"
        self.models = inner.models

    def make_node(self, v, n, g0):
        return self.inner.make_node(v, n, g0)

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return self.inner.make_inserted(v, n, g0, nbrs, rnd)


# ---------------------------------------------------------------- simple test protocols


def _guess_cliques(v: int, nbrs: frozenset[int], s: int) -> frozenset[Copy]:
    """Every s-set of v plus neighbors, read as a clique; a deliberately naive guess."""
    out = set()
    for rest in combinations(sorted(nbrs), s - 1):
        ns = (v,) + rest
        out.add(canon(combinations(ns, 2)))
    return frozenset(out)


class _GuessNode(Node):
    def __init__(self, v: int, s: int, problem: str, nbrs: frozenset[int]):
        self.v, self.s, self.problem = v, s, problem
        self.nbrs = nbrs
        self.newest = None
        self.out = self._output()

    def _output(self):
        if self.problem in ("memlist", "list"):
            return _guess_cliques(self.v, self.nbrs, self.s)
        return len(self.nbrs) >= self.s - 1

    def observe(self, prev, cur):
        self.nbrs = cur
        gained = sorted(cur - prev)
        if gained:
            self.newest = gained[-1]

    def receive(self, inbox, rnd):
        self.out = self._output()
        return self.out


class _ConstNode(_GuessNode):
    def send(self, prev, cur, rnd):
        self.observe(prev, cur)
        return {w: Bits(1, 1) for w in cur}


class ConstantProtocol(Protocol):
    """Sends the single bit 1 on every edge each round; outputs a guess from its own neighbors."""

    name = "constant"

    def __init__(self, problem: str = "memdetect", s: int = 3):
        self.problem = problem
        self.s = s
        self.models = frozenset({"edge_ins", "edge_del", "node_ins", "node_del"})

    def make_node(self, v, n, g0):
        return _ConstNode(v, self.s, self.problem, g0.neighbors(v) if v in g0 else frozenset())

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return _ConstNode(v, self.s, self.problem, frozenset())


class _EchoNode(_GuessNode):
    def __init__(self, v, s, problem, nbrs, L):
        super().__init__(v, s, problem, nbrs)
        self.L = L

    def send(self, prev, cur, rnd):
        self.observe(prev, cur)
        if self.newest is None:
            return {}
        x = self.newest - 1
        rev = int(format(x, f"0{self.L}b")[::-1], 2)
        msg = Bits(rev, self.L)
        return {w: msg for w in cur}


class IdEchoProtocol(Protocol):
    """Each round sends the id of its newest neighbor, least significant bit first."""

    name = "id_echo"

    def __init__(self, problem: str = "memdetect", s: int = 3):
        self.problem = problem
        self.s = s
        self.models = frozenset({"edge_ins", "edge_del", "node_ins", "node_del"})

    def make_node(self, v, n, g0):
        return _EchoNode(v, self.s, self.problem, g0.neighbors(v) if v in g0 else frozenset(),
                         id_bits(n))

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return _EchoNode(v, self.s, self.problem, frozenset(), id_bits(n))


# ---------------------------------------------------------------- clique hard instances


@dataclass(frozen=True)
class CliqueLayout:
    s: int
    t: int
    n: int

    def __post_init__(self):
        if self.s < 3 or self.t < 1:
            raise ValueError("need s >= 3 and t >= 1")
        if self.n < (self.s - 2) * self.t + 4:
            raise ValueError(f"n={self.n} is below (s-2)t+4 = {(self.s - 2) * self.t + 4}")

    @property
    def width(self) -> int:
        return 2 * (self.s - 2)

    @property
    def t_final(self) -> int:
        return self.width * self.t + 1

    def clique(self, j: int) -> list[int]:
        k = self.s - 2
        return list(range((j - 1) * k + 1, j * k + 1))

    @property
    def I(self) -> list[int]:
        return list(range((self.s - 2) * self.t + 1, self.n + 1))

    def g0(self, node_model: bool) -> Graph:
        nodes = list(range(1, (self.s - 2) * self.t + 1))
        if not node_model:
            nodes += self.I
        edges = [e for j in range(1, self.t + 1) for e in combinations(self.clique(j), 2)]
        return Graph(nodes, edges)


def _create_events(lay: CliqueLayout, creates: list[tuple[int, int, int]], node_model: bool,
                   present: set[int]) -> list[Event]:
    slots: list[Event] = [Event.quiet() for _ in range(lay.width * lay.t)]
    for u, j, v in creates:
        base = lay.width * (j - 1)
        k = 0
        for x in (u, v):
            for y in lay.clique(j):
                if node_model and x not in present:
                    ev = Event.node_ins(x, [y])
                    present.add(x)
                else:
                    ev = Event.edge_ins(x, y)
                slots[base + k] = ev
                k += 1
    return slots


@dataclass(frozen=True)
class CliqueParams:
    a: int
    b: int
    c: int | None = None
    d: int | None = None
    i: int = 1
    i_star: int | None = None


def clique_instance(s: int, t: int, n: int, scenario: str, prm: CliqueParams,
                    node_model: bool = False) -> Schedule:
    """Scenario S1..S4 over t gadget cliques of size s-2 and the independent set I."""
    lay = CliqueLayout(s, t, n)
    a, b, c, d, i, i2 = prm.a, prm.b, prm.c, prm.d, prm.i, prm.i_star
    used = [x for x in (a, b, c, d) if x is not None]
    if len(set(used)) != len(used) or any(x not in lay.I for x in used):
        raise ValueError("a, b, c, d must be distinct members of I")
    if not 1 <= i <= t or (i2 is not None and (not 1 <= i2 <= t or i2 == i)):
        raise ValueError("clique indices must be distinct and in 1..t")
    if scenario == "S1":
        creates = [(a, i, b)]
    elif scenario == "S2":
        creates = [(a, i, c), (d, i2, b)]
    elif scenario == "S3":
        creates = [(d, i, b), (a, i2, c)]
    elif scenario == "S4":
        if not node_model:
            raise ValueError("S4 needs node insertions")
        creates = [(a, i, b)]
    else:
        raise ValueError(f"unknown scenario {scenario!r}")
    if None in (x for cr in creates for x in cr):
        raise ValueError(f"{scenario} needs c, d and i_star")
    present: set[int] = set()
    events = _create_events(lay, creates, node_model, present)
    if scenario == "S4":
        events.append(Event.node_ins(c, [a, b]))
    else:
        events.append(Event.edge_ins(a, b))
    model = frozenset({"edge_ins", "node_ins"}) if node_model else frozenset({"edge_ins"})
    sched = Schedule(n=n, initial=lay.g0(node_model), events=events, r=1, model=model, delta=None)
    return sched


def _standalone(lay: CliqueLayout, u: int, j: int, v: int, node_model: bool) -> Schedule:
    present: set[int] = set()
    events = _create_events(lay, [(u, j, v)], node_model, present) + [Event.quiet()]
    model = frozenset({"edge_ins", "node_ins"}) if node_model else frozenset({"edge_ins"})
    return Schedule(n=lay.n, initial=lay.g0(node_model), events=events, r=1, model=model)


def _key(report: RunReport, v: int, upto: int | None = None):
    tr = report.transcripts.get(v, [])
    return tuple((nb, tuple((k, m.val, m.n) for k, m in box.items())) for nb, box in tr[:upto])


def _claims(problem: str, out, target: Copy) -> bool:
    if isinstance(out, frozenset):
        return target in out
    return bool(out)


def attack_memdetect_clique(protocol: Protocol, s: int, B_cap: int, t: int, n: int, *,
                            problem: str | None = None, star_size: int | None = None,
                            max_b: int = 8, max_friends: int = 48) -> dict:
    """Pigeonhole search for an S1/S2 pair that fools node a, at bandwidth B_cap."""
    lay = CliqueLayout(s, t, n)
    problem = problem or protocol.problem
    proto = Truncated(protocol, B_cap)
    h = complete(s)
    I = lay.I
    m = star_size or max(4, min(32, len(I) // 4))
    star, rest = I[:m], I[m:]
    classes_seen, cand = 0, 0
    idx_classes = 0
    friends_tried = 0

    memo: dict[tuple, Any] = {}

    def sig(u: int, j: int, v: int, watch: int, upto: int):
        k = (u, j, v, watch, upto)
        if k not in memo:
            rep = run_watched(proto, problem, h, _standalone(lay, u, j, v, False), [watch])
            memo[k] = _key(rep, watch, upto)
        return memo[k]

    for b in rest[:max_b]:
        groups: dict[Any, list[int]] = {}
        for a in star:
            key = tuple(sig(a, j, b, b, lay.t_final) for j in range(1, t + 1))
            groups.setdefault(key, []).append(a)
        classes_seen = max(classes_seen, len(groups))
        cand = len(star)
        for members in groups.values():
            if len(members) < 2:
                continue
            for a in members:
                byi: dict[Any, list[int]] = {}
                for i in range(1, t + 1):
                    s1 = clique_instance(s, t, n, "S1", CliqueParams(a, b, i=i))
                    rep = run_watched(proto, problem, h, s1, [a])
                    last = rep.transcripts[a][lay.t_final - 1][1].get(b)
                    byi.setdefault((last.val, last.n) if last else None, []).append(i)
                idx_classes = max(idx_classes, len(byi))
                pair_i = next((v for v in byi.values() if len(v) >= 2), None)
                if pair_i is None:
                    continue
                i, i2 = pair_i[0], pair_i[1]
                d = next(x for x in members if x != a)
                want = sig(a, i, b, a, lay.t_final)
                friends_tried += 1
                for c in [x for x in I if x not in (a, b, d)][:max_friends]:
                    if c in (a, b, d):
                        continue
                    if sig(a, i, c, a, lay.t_final) != want:
                        continue
                    prm = CliqueParams(a, b, c, d, i, i2)
                    s1 = clique_instance(s, t, n, "S1", prm)
                    s2 = clique_instance(s, t, n, "S2", prm)
                    pair = _fill_truths(ScenarioPair(s1, s2, a, lay.t_final, label="S1/S2"),
                                        problem, h)
                    verdict = assert_indistinguishable(pair, proto, problem, h)
                    if verdict["verdict"] == "violation":
                        return {"result": "violation", "params": prm.__dict__,
                                "pair": pair.to_json(), "check": verdict,
                                "classes": len(groups), "candidates": len(star)}
                    break
    return {"result": "capacity", "classes": classes_seen, "candidates": cand,
            "index_classes": idx_classes, "indices": t, "friend_searches": friends_tried,
            "friend_pool": max_friends}


def _color(proto, problem, h, lay, x, y) -> tuple:
    out = []
    for i in range(1, lay.t + 1):
        K = lay.clique(i)
        sc = clique_instance(lay.s, lay.t, lay.n, "S1", CliqueParams(x, y, i=i), node_model=True)
        rep = run_watched(proto, problem, h, sc, K + [x, y])
        part = []
        for k in range(lay.t_final):
            row = []
            for who, frm in [(x, K + [y]), (y, K + [x])] + [(z, [x, y]) for z in K]:
                tr = rep.transcripts.get(who, [])
                box = _round_box(rep, who, k)
                row.append(tuple((m.val, m.n) if m is not None else None
                                 for m in (box.get(f) for f in frm)))
            part.append(tuple(row))
        out.append(tuple(part))
    return tuple(out)


def _round_box(rep: RunReport, v: int, k: int) -> dict:
    """Inbox of v at round k+1, aligned to absolute rounds even if v appeared late."""
    tr = rep.transcripts.get(v, [])
    off = rep.rounds - len(tr)
    j = k - off
    return tr[j][1] if 0 <= j < len(tr) else {}


def attack_detect_clique_mixed(protocol: Protocol, s: int, B_cap: int, t: int, n: int, *,
                               problem: str | None = None) -> dict:
    """Greedy monochromatic selection of a, b, c, d, then a pigeonhole on (i, i*)."""
    lay = CliqueLayout(s, t, n)
    problem = problem or protocol.problem
    proto = Truncated(protocol, B_cap)
    h = complete(s)
    pool = list(lay.I)
    chosen: list[tuple[int, Any, list[int]]] = []
    found = None
    colors_seen: set = set()
    while pool:
        v = pool[0]
        rest = pool[1:]
        if not rest:
            break
        col = {u: _color(proto, problem, h, lay, v, u) for u in rest}
        colors_seen.update(col.values())
        cnt = Counter(col.values())
        best = max(cnt.items(), key=lambda kv: (kv[1], -min(u for u in rest if col[u] == kv[0])))[0]
        pool = [u for u in rest if col[u] == best]
        chosen.append((v, best, pool))
        same = [k for k, (_, c, _) in enumerate(chosen) if c == best]
        if len(same) >= 3 and pool:
            i1, i2, i3 = same[:3]
            found = (chosen[i1][0], chosen[i2][0], chosen[i3][0], chosen[i3][2][0])
            break
    if found is None:
        return {"result": "capacity", "classes": len(colors_seen), "candidates": len(lay.I)}
    a, c, d, b = found
    byi: dict[Any, list[int]] = {}
    for i in range(1, t + 1):
        s1 = clique_instance(s, t, n, "S1", CliqueParams(a, b, i=i), node_model=True)
        rep = run_watched(proto, problem, h, s1, [a, b])
        ba = _round_box(rep, a, lay.t_final - 1).get(b)
        ab = _round_box(rep, b, lay.t_final - 1).get(a)
        key = tuple((m.val, m.n) if m is not None else None for m in (ba, ab))
        byi.setdefault(key, []).append(i)
    pair_i = next((v for v in byi.values() if len(v) >= 2), None)
    i = pair_i[0] if pair_i else 1
    i2 = pair_i[1] if pair_i else None
    prm = CliqueParams(a, b, c, d, i, i2)
    target = canon(combinations(sorted(lay.clique(i) + [a, b]), 2))
    runs: dict[str, RunReport] = {}
    scheds: dict[str, Schedule] = {}
    names = ["S1", "S4"] + (["S2", "S3"] if i2 is not None else [])
    watch = lay.clique(i) + [a, b]
    for sc in names:
        scheds[sc] = clique_instance(s, t, n, sc, prm, node_model=True)
        runs[sc] = run_watched(proto, problem, h, scheds[sc], watch)
    verified = {}
    verified["S4"] = all(_transcripts_equal(runs["S1"], runs["S4"], z, lay.t_final)
                         for z in lay.clique(i))
    if i2 is not None:
        verified["S2"] = _transcripts_equal(runs["S1"], runs["S2"], a, lay.t_final)
        verified["S3"] = _transcripts_equal(runs["S1"], runs["S3"], b, lay.t_final)
    out1 = runs["S1"].final_outputs
    claimers = sorted(v for v in watch if _claims(problem, out1.get(v), target))
    base = {"params": prm.__dict__, "verified": verified, "claimers": claimers,
            "classes": len(colors_seen), "candidates": len(lay.I)}
    if not claimers:
        # S1 itself errs; report it against a verified partner so the pair is checkable
        wit = {"S4": lay.clique(i)[0], "S2": a, "S3": b}
        partner = next((sc for sc in ("S4", "S2", "S3") if verified.get(sc)), None)
        if partner is None:
            return {"result": "capacity", **base}
        pair = ScenarioPair(scheds["S1"], scheds[partner], wit[partner], lay.t_final,
                            label=f"S1/{partner}")
        return {"result": "violation", "erring": "S1", "covers": partner, "witness": wit[partner],
                "reason": "no node claims the clique formed in S1", **base,
                "pair": pair.to_json()}
    for x in claimers:
        branch = "S4" if x in lay.clique(i) else ("S2" if x == a else "S3")
        if not verified.get(branch):
            continue
        if _claims(problem, runs[branch].final_outputs.get(x), target):
            pair = ScenarioPair(scheds["S1"], scheds[branch], x, lay.t_final,
                                label=f"S1/{branch}")
            return {"result": "violation", "erring": branch, "covers": branch, "witness": x, **base,
                    "pair": pair.to_json()}
    return {"result": "capacity", **base}


# ---------------------------------------------------------------- lower-bound instances


@dataclass
class Descriptor:
    witness: int
    graded_round: int
    required: frozenset | bool | None = None
    dropped: frozenset = field(default_factory=frozenset)
    choice_count: int = 1
    slots: int = 0

    def to_json(self) -> dict:
        req = self.required
        return {"witness": self.witness, "graded_round": self.graded_round,
                "required": sorted(copy_to_json(c) for c in req) if isinstance(req, frozenset)
                else req,
                "dropped": sorted(copy_to_json(c) for c in self.dropped),
                "choice_count": str(self.choice_count), "slots": self.slots}


def _relabel_copy(h: Graph, mapping: dict[int, int]) -> Copy:
    return canon((mapping[a], mapping[b]) for a, b in h.edges())


def receive_slots(sched: Schedule, v: int, start: int, exclude_last_from: int | None = None) -> int:
    """Messages v can receive from round `start` on: the sum of its degrees over those rounds."""
    total = 0
    for k, _, g in sched.graphs():
        if k >= start and v in g:
            total += g.degree(v)
    if exclude_last_from is not None:
        total -= 1
    return total


def _pad(events: list[Event], r: int) -> list[Event]:
    out = []
    for ev in events:
        out.append(ev)
        out.extend(Event.quiet() for _ in range(r - 1))
    return out


def memlist_lb_instance(h: Graph, n: int, variant: str, choice: Iterable, r: int = 1
                        ) -> tuple[Schedule, Descriptor]:
    """Many copies through one late node v; v must list a set it can learn only from O(r) messages."""
    node_model = variant.startswith("node_ins")
    model = "node_ins" if node_model else "edge_ins"
    if variant.endswith("nonclique"):
        if is_clique(h):
            raise ValueError("target is a clique")
        u, v = next((a, b) for a, b in combinations(h.nodes, 2) if not h.has_edge(a, b))
        W = [x for x in h.nodes if x not in (u, v)]
        lab = {x: k + 1 for k, x in enumerate(W)}
        lab[v] = len(W) + 1
        U = [len(W) + 2 + k for k in range(n)]
        N = len(W) + 1 + n
        Up = sorted(set(choice))
        if any(not 1 <= i <= n for i in Up):
            raise ValueError("choice indexes 1..n")
        g0 = Graph([lab[x] for x in W] + ([] if node_model else [lab[v]] + U),
                   [(lab[a], lab[b]) for a, b in h.subgraph(W).edges()])
        evs: list[Event] = []
        for i in Up:
            nb = [lab[x] for x in sorted(h.neighbors(u))]
            evs += [Event.node_ins(U[i - 1], nb)] if node_model else \
                [Event.edge_ins(U[i - 1], y) for y in nb]
        vn = [lab[x] for x in sorted(h.neighbors(v))]
        first_v = len(evs) * r + 1
        evs += [Event.node_ins(lab[v], vn)] if node_model else [Event.edge_ins(lab[v], y) for y in vn]
        req = set()
        for i in Up:
            mp = dict(lab)
            mp[u] = U[i - 1]
            req.add(_relabel_copy(h, mp))
        choice_count = math.comb(n, n // 2)
    elif variant.endswith("nonmultipartite"):
        if params(h).is_complete_multipartite:
            raise ValueError("target is complete multipartite")
        v, (u, w) = next((x, e) for x in h.nodes for e in h.edges()
                         if x not in e and not h.has_edge(x, e[0]) and not h.has_edge(x, e[1]))
        S = [x for x in h.nodes if x not in (u, v, w)]
        lab = {x: k + 1 for k, x in enumerate(S)}
        lab[v] = len(S) + 1
        U = [len(S) + 2 + k for k in range(n)]
        Wn = [len(S) + 2 + n + k for k in range(n)]
        N = len(S) + 1 + 2 * n
        C = sorted(set(tuple(p) for p in choice))
        if any(not (1 <= i <= n and 1 <= j <= n) for i, j in C):
            raise ValueError("choice pairs index 1..n")
        g0 = Graph([lab[x] for x in S] + ([] if node_model else [lab[v]] + U + Wn),
                   [(lab[a], lab[b]) for a, b in h.subgraph(S).edges()])
        nu = [lab[x] for x in sorted(h.neighbors(u) - {w})]
        nw = [lab[x] for x in sorted(h.neighbors(w) - {u})]
        evs = []
        if node_model:
            evs += [Event.node_ins(x, nu) for x in U]
            for j in range(1, n + 1):
                extra = [U[i - 1] for i, jj in C if jj == j]
                evs.append(Event.node_ins(Wn[j - 1], nw + extra))
        else:
            evs += [Event.edge_ins(x, y) for x in U for y in nu]
            evs += [Event.edge_ins(x, y) for x in Wn for y in nw]
            evs += [Event.edge_ins(U[i - 1], Wn[j - 1]) for i, j in C]
        vn = [lab[x] for x in sorted(h.neighbors(v))]
        first_v = len(evs) * r + 1
        evs += [Event.node_ins(lab[v], vn)] if node_model else [Event.edge_ins(lab[v], y) for y in vn]
        req = set()
        for i, j in C:
            mp = dict(lab)
            mp[u], mp[w] = U[i - 1], Wn[j - 1]
            req.add(_relabel_copy(h, mp))
        choice_count = math.comb(n * n, n * n // 2)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    sched = Schedule(n=N, initial=g0, events=_pad(evs, r), r=r, model=frozenset({model}))
    desc = Descriptor(witness=lab[v], graded_round=len(sched.events), required=frozenset(req),
                      choice_count=choice_count,
                      slots=receive_slots(sched, lab[v], first_v))
    return sched, desc


def memlist_del_lb_instance(h: Graph, n: int, deleted_choice: int, model: str = "edge_del",
                            r: int = 1) -> tuple[Schedule, Descriptor]:
    """u blown up into n twins; deleting twin i (or one of its edges) kills exactly copy H_i at v."""
    if is_clique(h):
        raise ValueError("target is a clique")
    if not 1 <= deleted_choice <= n:
        raise ValueError("deleted_choice indexes 1..n")
    u, v = next((a, b) for a, b in combinations(h.nodes, 2) if not h.has_edge(a, b))
    W = [x for x in h.nodes if x != u]
    lab = {x: k + 1 for k, x in enumerate(W)}
    U = [len(W) + 1 + k for k in range(n)]
    nu = [lab[x] for x in sorted(h.neighbors(u))]
    g0 = Graph(list(lab.values()) + U,
               [(lab[a], lab[b]) for a, b in h.subgraph(W).edges()] +
               [(x, y) for x in U for y in nu])
    ui = U[deleted_choice - 1]
    if model == "edge_del":
        ev = Event.edge_del(ui, nu[0])
    elif model == "node_del":
        ev = Event.node_del(ui)
    else:
        raise ValueError(f"unknown model {model!r}")
    sched = Schedule(n=len(W) + n, initial=g0, events=_pad([ev], r), r=r, model=frozenset({model}))
    copies = {}
    for k, x in enumerate(U, 1):
        mp = dict(lab)
        mp[u] = x
        copies[k] = _relabel_copy(h, mp)
    dead = frozenset({copies[deleted_choice]})
    keep = frozenset(c for k, c in copies.items() if k != deleted_choice)
    desc = Descriptor(witness=lab[v], graded_round=len(sched.events), required=keep, dropped=dead,
                      choice_count=n, slots=receive_slots(sched, lab[v], 1))
    return sched, desc


def memdetect_lb_instance(h: Graph, n: int, U_prime: Iterable[int], u_j: int,
                          model: str = "edge_ins") -> tuple[Schedule, Descriptor]:
    """v's membership after the final insertion is Yes exactly when u_j was one of the chosen twins."""
    pr = params(h)
    if not pr.is_complete_multipartite or pr.is_clique or pr.is_star:
        raise ValueError("target must be complete multipartite, neither clique nor star")
    Up = sorted(set(U_prime))
    if len(Up) != n // 2:
        raise ValueError(f"U' must have exactly n/2 = {n // 2} members")
    if not 1 <= u_j <= n or any(not 1 <= i <= n for i in Up):
        raise ValueError("twin indices are 1..n")
    S = max(pr.parts, key=lambda p: (len(p), -min(p)))
    u, v = S[0], S[1]
    w = min(h.neighbors(u))
    rest = [x for x in h.nodes if x not in (u, v, w)]
    lab = {x: k + 1 for k, x in enumerate(rest)}
    U = [len(rest) + 1 + k for k in range(n)]
    lab[v] = len(rest) + n + 1
    lab[w] = len(rest) + n + 2
    N = len(rest) + n + 2
    nu = [lab[x] for x in sorted(h.neighbors(u) - {w})]
    nv = [lab[x] for x in sorted(h.neighbors(v) - {w})]
    nw = [lab[x] for x in sorted(h.neighbors(w) - {u})]
    base_edges = [(lab[a], lab[b]) for a, b in h.subgraph(rest).edges()]
    evs: list[Event] = []
    if model == "edge_ins":
        g0 = Graph(list(lab.values()) + U, base_edges)
        evs += [Event.edge_ins(U[i - 1], y) for i in Up for y in nu]
        first_v = len(evs) + 1
        evs += [Event.edge_ins(lab[v], y) for y in nv]
        evs += [Event.edge_ins(lab[w], y) for y in nw]
        evs.append(Event.edge_ins(lab[w], U[u_j - 1]))
    elif model == "node_ins":
        g0 = Graph([lab[x] for x in rest], base_edges)
        for i in range(1, n + 1):
            evs.append(Event.node_ins(U[i - 1], nu if i in Up else []))
        first_v = len(evs) + 1
        evs.append(Event.node_ins(lab[v], nv))
        evs.append(Event.node_ins(lab[w], sorted(set(nw) | {U[u_j - 1]})))
    else:
        raise ValueError(f"unknown model {model!r}")
    sched = Schedule(n=N, initial=g0, events=evs, r=1, model=frozenset({model}))
    desc = Descriptor(witness=lab[v], graded_round=len(evs), required=u_j in Up,
                      choice_count=math.comb(n, n // 2),
                      slots=receive_slots(sched, lab[v], first_v, exclude_last_from=lab[w]))
    return sched, desc


@dataclass
class BlowupFamily:
    h: Graph
    model: str
    g0: Graph
    groups: dict[int, list[int]]
    designated: frozenset

    def to_json(self) -> dict:
        return {"model": self.model, "graph": self.g0.to_json(),
                "groups": {str(k): v for k, v in self.groups.items()},
                "designated": len(self.designated)}

    def probe(self, protocol: Protocol) -> dict:
        """Initial listers, the proof's discriminating deletions, and whether the protocol survives them."""
        n = max(self.g0.nodes)
        quiet = Schedule(n=n, initial=self.g0, events=[Event.quiet()], r=1,
                         model=frozenset({self.model}))
        rep = run(protocol, "list", self.h, quiet, keep_rounds=False, check=False,
                  grade_rounds="none")
        load = Counter()
        for v, out in rep.final_outputs.items():
            load[v] = len(out & self.designated)
        if not load or max(load.values()) == 0:
            return {"result": "no-lister", "listers": {}}
        L = max(load, key=lambda v: (load[v], -v))
        mine = [c for c in rep.final_outputs[L] if c in self.designated]
        nl = self.g0.neighbors(L)
        if self.model == "edge_del":
            per: dict[int, set[int]] = {}
            for c in mine:
                for a, b in c:
                    for p, q in ((a, b), (b, a)):
                        if p in nl and q != L and q not in nl:
                            per.setdefault(p, set()).add(q)
            relay = max(per, key=lambda p: (len(per[p]), -p)) if per else None
            cands = sorted(per.get(relay, ()))
            dels = [Event.edge_del(relay, q) for q in cands]
            informers = 1
        else:
            d = bfs(self.g0, L)
            far = sorted({x for c in mine for x in copy_nodes(c) if d.get(x) == 2})
            cands = far
            dels = [Event.node_del(x) for x in far]
            informers = max((len(nl & self.g0.neighbors(x)) for x in far), default=0)
        passed = 0
        worst = 0
        for ev in dels:
            sc = Schedule(n=n, initial=self.g0, events=[ev], r=1, model=frozenset({self.model}))
            rr = run(protocol, "list", self.h, sc, keep_rounds=False, check=False,
                     grade_rounds="all")
            passed += rr.passed
            worst = max(worst, rr.max_bits)
        need = math.ceil(math.log2(len(cands))) if len(cands) > 1 else 0
        return {"result": "probed", "lister": L, "listed": load[L], "candidates": len(cands),
                "informers": informers, "required_bits": need,
                "required_bits_per_informer": math.ceil(need / informers) if informers else None,
                "deletions": len(dels), "survived": passed, "max_bits": worst}


def listing_lb_blowup(h: Graph, n: int, model: str) -> BlowupFamily:
    """Blow-up hosts with n^m (edge) or n^2 (node) designated copies of h."""
    pr = params(h)
    if model == "edge_del":
        if not (pr.ne_rad == 2 and pr.rad == 2):
            raise ValueError("edge-deletion blow-up needs ne_rad = rad = 2")
        sizes = {x: n for x in h.nodes}
    elif model == "node_del":
        if not (pr.rad == 2 and pr.diam >= 3):
            raise ValueError("node-deletion blow-up needs rad = 2 and diam >= 3")
        x, y = _far_pair(h)
        sizes = {x: n, y: n}
    else:
        raise ValueError(f"unknown model {model!r}")
    g0, groups = blowup(h, sizes)
    order = h.nodes
    designated = set()

    def rec(k: int, mp: dict[int, int]):
        if k == len(order):
            designated.add(_relabel_copy(h, mp))
            return
        for z in groups[order[k]]:
            mp[order[k]] = z
            rec(k + 1, mp)
        mp.pop(order[k], None)

    rec(0, {})
    return BlowupFamily(h, model, g0, groups, frozenset(designated))


# ---------------------------------------------------------------- capacity audits


@dataclass(frozen=True)
class CapacityAudit:
    choice_count: int
    x: int
    B: int

    @property
    def needed(self) -> int:
        return (self.choice_count - 1).bit_length() if self.choice_count > 1 else 0

    @property
    def satisfied(self) -> bool:
        return self.x * self.B >= self.needed

    def to_json(self) -> dict:
        return {"choice_count": str(self.choice_count), "x": self.x, "B": self.B,
                "needed_bits": self.needed, "satisfied": self.satisfied}


def capacity_audit(choice_count: int, x: int, B: int) -> CapacityAudit:
    """Whether x messages of B bits can name one of choice_count outcomes: 2^(xB) >= choice_count."""
    if choice_count < 1 or x < 0 or B < 0:
        raise ValueError("need choice_count >= 1 and non-negative x, B")
    return CapacityAudit(choice_count, x, B)


def min_bandwidth(choice_count: int, x: int) -> int:
    need = (choice_count - 1).bit_length() if choice_count > 1 else 0
    if need == 0:
        return 0
    if x == 0:
        raise ValueError("no receive slots: no bandwidth suffices")
    return -(-need // x)


def insertion_slots(d: int, r: int) -> int:
    """Receive slots when v's d edges arrive one per change: dr + (d-1)r + ... + r."""
    return r * d * (d + 1) // 2


def standard_audits(n: int, B: int, r: int = 1) -> list[dict]:
    """The four counting inequalities at size n.

    Receive-slot counts do not depend on n, so they are read off small
    instances (C4, paw) and paired with the exact choice counts at n.
    """
    from .graph import cycle, paw
    c4 = cycle(4)
    x_nc = memlist_lb_instance(c4, 2, "edge_ins_nonclique", [1], r)[1].slots
    x_nm = memlist_lb_instance(paw(), 2, "edge_ins_nonmultipartite", [(1, 1)], r)[1].slots
    x_del = memlist_del_lb_instance(c4, 2, 1, "edge_del", r)[1].slots
    x_md = memdetect_lb_instance(c4, 2, [1], 1)[1].slots
    rows = [
        ("memlist_edge_ins_nonclique", math.comb(n, n // 2), x_nc),
        ("memlist_edge_ins_nonmultipartite", math.comb(n * n, n * n // 2), x_nm),
        ("memlist_deletion", n, x_del),
        ("memdetect_edge_ins", math.comb(n, n // 2), x_md),
    ]
    out = []
    for name, cc, x in rows:
        a = capacity_audit(cc, x, B)
        out.append({"bound": name, "n": n, **a.to_json(), "min_B": min_bandwidth(cc, x)})
    return out


__all__ = [
    "ScenarioPair", "locality_pair", "assert_indistinguishable", "list_edge_del_locality",
    "AsList", "ConstantProtocol", "IdEchoProtocol", "CliqueLayout", "CliqueParams",
    "clique_instance", "attack_memdetect_clique", "attack_detect_clique_mixed", "Descriptor",
    "memlist_lb_instance", "memlist_del_lb_instance", "memdetect_lb_instance",
    "listing_lb_blowup", "BlowupFamily", "CapacityAudit", "capacity_audit", "min_bandwidth",
    "standard_audits", "witness_truth", "SilentProtocol", "validate",
]
