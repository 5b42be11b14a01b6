"""Round-synchronous simulator for dynamic networks with per-edge bandwidth.

Each round: the scheduled change (if any) is applied, every node computes its
outgoing messages from its neighbor-list diff, messages are delivered (including
over an edge inserted this same round), then every node emits its output.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Any, Iterable

from .bits import Bits
from .graph import Graph, norm_edge
from .oracle import (Copy, contains_copy, copies_by_node, copy_nodes, copy_to_json, enumerate_copies,
                     in_some_copy)

KINDS = ("edge_ins", "edge_del", "node_ins", "node_del", "quiet")
CHANGE_KINDS = frozenset(KINDS[:4])
PROBLEMS = ("memlist", "memdetect", "list", "detect")


# ---------------------------------------------------------------- events and schedules

@dataclass(frozen=True)
class Event:
    kind: str
    u: int = 0
    v: int = 0
    nbrs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")

    @staticmethod
    def edge_ins(u: int, v: int) -> Event:
        return Event("edge_ins", *norm_edge(u, v))

    @staticmethod
    def edge_del(u: int, v: int) -> Event:
        return Event("edge_del", *norm_edge(u, v))

    @staticmethod
    def node_ins(v: int, nbrs: Iterable[int]) -> Event:
        return Event("node_ins", 0, v, tuple(sorted(nbrs)))

    @staticmethod
    def node_del(v: int) -> Event:
        return Event("node_del", 0, v)

    @staticmethod
    def quiet() -> Event:
        return Event("quiet")

    def to_json(self) -> dict:
        if self.kind in ("edge_ins", "edge_del"):
            return {"kind": self.kind, "u": self.u, "v": self.v}
        if self.kind == "node_ins":
            return {"kind": self.kind, "v": self.v, "nbrs": list(self.nbrs)}
        if self.kind == "node_del":
            return {"kind": self.kind, "v": self.v}
        return {"kind": "quiet"}

    @classmethod
    def from_json(cls, obj: dict) -> Event:
        k = obj["kind"]
        if k in ("edge_ins", "edge_del"):
            return cls(k, *norm_edge(int(obj["u"]), int(obj["v"])))
        if k == "node_ins":
            return cls.node_ins(int(obj["v"]), (int(x) for x in obj.get("nbrs", [])))
        if k == "node_del":
            return cls.node_del(int(obj["v"]))
        return cls(k)


@dataclass
class Schedule:
    """G^0 plus one event per round. n is the id universe; absent ids may be inserted later."""

    n: int
    initial: Graph
    events: list[Event]
    r: int = 1
    model: frozenset[str] = frozenset({"edge_ins"})
    delta: int | None = None

    def to_json(self) -> dict:
        obj: dict[str, Any] = {
            "n0": self.n,
            "edges0": [list(e) for e in self.initial.edges()],
        }
        if set(self.initial.nodes) != set(range(1, self.n + 1)):
            obj["nodes0"] = self.initial.nodes
        obj["r"] = self.r
        obj["model"] = sorted(self.model)
        if self.delta is not None:
            obj["delta"] = self.delta
        obj["events"] = [e.to_json() for e in self.events]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> Schedule:
        n = int(obj["n0"])
        nodes = obj.get("nodes0", range(1, n + 1))
        return cls(
            n=n, initial=Graph(nodes=nodes, edges=obj.get("edges0", [])),
            events=[Event.from_json(e) for e in obj.get("events", [])],
            r=int(obj.get("r", 1)), model=frozenset(obj.get("model", ["edge_ins"])),
            delta=obj.get("delta"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def graphs(self):
        """Yield (round, event, graph after the event) for rounds 1..len(events)."""
        adj = {v: set(ns) for v, ns in self.initial.adjacency().items()}
        for k, ev in enumerate(self.events, 1):
            apply_event(adj, ev)
            yield k, ev, Graph.from_adj(adj)

    def final_graph(self) -> Graph:
        adj = {v: set(ns) for v, ns in self.initial.adjacency().items()}
        for ev in self.events:
            apply_event(adj, ev)
        return Graph.from_adj(adj)

    def change_rounds(self) -> list[int]:
        return [k for k, ev in enumerate(self.events, 1) if ev.kind != "quiet"]


def event_problem(adj: dict[int, set[int]], ev: Event, n: int) -> str | None:
    """Why ev cannot be applied to adj, or None if it can."""
    k = ev.kind
    if k == "quiet":
        return None
    if k in ("edge_ins", "edge_del"):
        u, v = ev.u, ev.v
        if u == v:
            return "self-loop"
        if u not in adj or v not in adj:
            return f"edge endpoint absent ({u},{v})"
        if k == "edge_ins" and v in adj[u]:
            return f"edge {{{u},{v}}} already present"
        if k == "edge_del" and v not in adj[u]:
            return f"edge {{{u},{v}}} not present"
        return None
    v = ev.v
    if not 1 <= v <= n:
        return f"node id {v} outside [1,{n}]"
    if k == "node_ins":
        if v in adj:
            return f"node {v} already present"
        bad = [w for w in ev.nbrs if w not in adj]
        if bad:
            return f"node {v} attached to absent nodes {bad}"
        return None
    if v not in adj:
        return f"node {v} not present"
    return None


def apply_event(adj: dict[int, set[int]], ev: Event) -> set[int]:
    """Mutate adj in place; return the nodes whose neighbor list changed."""
    k = ev.kind
    if k == "edge_ins":
        adj[ev.u].add(ev.v)
        adj[ev.v].add(ev.u)
        return {ev.u, ev.v}
    if k == "edge_del":
        adj[ev.u].discard(ev.v)
        adj[ev.v].discard(ev.u)
        return {ev.u, ev.v}
    if k == "node_ins":
        adj[ev.v] = set(ev.nbrs)
        for w in ev.nbrs:
            adj[w].add(ev.v)
        return {ev.v, *ev.nbrs}
    if k == "node_del":
        nbrs = adj.pop(ev.v)
        for w in nbrs:
            adj[w].discard(ev.v)
        return set(nbrs)
    return set()


def validate(schedule: Schedule) -> list[str]:
    """Every violated schedule invariant, as readable strings; empty means valid."""
    out: list[str] = []
    s = schedule
    if s.r < 1:
        out.append(f"r must be >= 1, got {s.r}")
    bad_model = set(s.model) - CHANGE_KINDS
    if bad_model:
        out.append(f"unknown change kinds {sorted(bad_model)}")
    if any(not 1 <= v <= s.n for v in s.initial.nodes):
        out.append("initial graph has ids outside [1,n]")
    adj = {v: set(ns) for v, ns in s.initial.adjacency().items()}
    if s.delta is not None and s.initial.max_degree() > s.delta:
        out.append(f"initial max degree exceeds delta={s.delta}")
    since_change = None
    for k, ev in enumerate(s.events, 1):
        if ev.kind != "quiet":
            if ev.kind not in s.model:
                out.append(f"round {k}: {ev.kind} not in change model")
            if since_change is not None and since_change < s.r - 1:
                out.append(f"round {k}: missing quiet round (only {since_change} after previous change, need {s.r - 1})")
            since_change = 0
        elif since_change is not None:
            since_change += 1
        why = event_problem(adj, ev, s.n)
        if why:
            out.append(f"round {k}: {why}")
            continue
        touched = apply_event(adj, ev)
        if s.delta is not None and any(len(adj[x]) > s.delta for x in touched if x in adj):
            out.append(f"round {k}: degree bound {s.delta} exceeded")
    if since_change is not None and since_change < s.r - 1:
        out.append(f"schedule ends {since_change} rounds after its last change, need {s.r - 1}")
    return out


# ---------------------------------------------------------------- protocol contract

class Node:
    """Per-node state machine.

    The round is split in two phases: `send` sees the neighbor-list diff and
    returns outgoing messages; `receive` sees the inbox and returns the output.
    Nodes that have no neighbors before or after a round are not stepped and
    keep their previous output, so state must not depend on being called
    every round.
    """

    out: Any = None

    def send(self, prev: frozenset[int], cur: frozenset[int], rnd: int) -> dict[int, Bits]:
        return {}

    def receive(self, inbox: dict[int, Bits], rnd: int) -> Any:
        return self.out


class Protocol:
    name = "protocol"
    problem = "memlist"
    models: frozenset[str] = frozenset()

    def make_node(self, v: int, n: int, g0: Graph) -> Node:
        raise NotImplementedError

    def make_inserted(self, v: int, n: int, g0: Graph, nbrs: frozenset[int], rnd: int) -> Node:
        raise NotImplementedError(f"{self.name} does not support node insertions")

    def describe(self) -> dict:
        return {"name": self.name, "problem": self.problem, "models": sorted(self.models)}


class SilentNode(Node):
    def __init__(self, out):
        self.out = out


class SilentProtocol(Protocol):
    """Never sends; outputs a constant (empty listing or No)."""

    name = "silent"

    def __init__(self, problem: str = "memlist"):
        self.problem = problem
        self.models = CHANGE_KINDS
        self._out = frozenset() if problem in ("memlist", "list") else False

    def make_node(self, v, n, g0):
        return SilentNode(self._out)

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return SilentNode(self._out)


class InitialKnowledgeProtocol(Protocol):
    """Never sends; each node lists its copies in G^0 forever."""

    name = "zero"

    def __init__(self, h: Graph, problem: str = "memlist"):
        self.h = h
        self.problem = problem
        self.models = CHANGE_KINDS

    def make_node(self, v, n, g0):
        from .oracle import copies_containing
        cs = frozenset(copies_containing(g0, self.h, v)) if v in g0 else frozenset()
        return SilentNode(cs if self.problem in ("memlist", "list") else bool(cs))

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return SilentNode(frozenset() if self.problem in ("memlist", "list") else False)


class TruncatedNode(Node):
    __slots__ = ("inner", "cap")

    def __init__(self, inner: Node, cap: int):
        self.inner = inner
        self.cap = cap
        self.out = inner.out

    def send(self, prev, cur, rnd):
        raw = self.inner.send(prev, cur, rnd)
        cap = self.cap
        return {w: b.truncate(cap) for w, b in raw.items() if cap > 0}

    def receive(self, inbox, rnd):
        self.out = self.inner.receive(inbox, rnd)
        return self.out


class Truncated(Protocol):
    """Clips every message of an inner protocol to its first `cap` bits."""

    def __init__(self, inner: Protocol, cap: int):
        self.inner = inner
        self.cap = cap
        self.name = f"{inner.name}@{cap}"
        self.problem = inner.problem
        self.models = inner.models

    def make_node(self, v, n, g0):
        return TruncatedNode(self.inner.make_node(v, n, g0), self.cap)

    def make_inserted(self, v, n, g0, nbrs, rnd):
        return TruncatedNode(self.inner.make_inserted(v, n, g0, nbrs, rnd), self.cap)


# ---------------------------------------------------------------- grading

def output_kind_ok(problem: str, out: Any) -> bool:
    if problem in ("memlist", "list"):
        return isinstance(out, frozenset)
    return isinstance(out, bool)


class Truth:
    """Oracle copies of one graph, computed lazily."""

    def __init__(self, g: Graph, h: Graph):
        self.g = g
        self.h = h
        self._copies: set[Copy] | None = None
        self._by_node: dict[int, set[Copy]] | None = None
        self._member: dict[int, bool] = {}

    @property
    def copies(self) -> set[Copy]:
        if self._copies is None:
            self._copies = enumerate_copies(self.g, self.h)
        return self._copies

    def member(self, v: int) -> bool:
        if self._by_node is not None:
            return v in self._by_node
        got = self._member.get(v)
        if got is None:
            got = self._member[v] = in_some_copy(self.g, self.h, v)
        return got

    @property
    def by_node(self) -> dict[int, set[Copy]]:
        if self._by_node is None:
            self._by_node = copies_by_node(self.copies)
        return self._by_node


def grade(problem: str, h: Graph, truth: Graph | Truth, outputs: dict[int, Any],
          candidates: Iterable[int] | None = None) -> list[tuple[int | None, str]]:
    """Failures as (node or None, reason); empty list means the round passes.

    outputs holds every graded node's output. For memlist and memdetect only
    nodes in `candidates` (default: all keys) are inspected; a node outside it
    must hold the default output and be in no copy.
    """
    t = truth if isinstance(truth, Truth) else Truth(truth, h)
    fails: list[tuple[int | None, str]] = []
    for v, out in outputs.items():
        if not output_kind_ok(problem, out):
            raise TypeError(f"node {v} output {type(out).__name__} is wrong kind for {problem}")
    if problem == "memlist":
        by = t.by_node
        nodes = outputs.keys() if candidates is None else candidates
        for v in sorted(nodes):
            if v not in outputs:
                continue
            want = by.get(v, set())
            got = outputs[v]
            if got != want:
                miss, extra = len(want - got), len(got - want)
                fails.append((v, f"memlist mismatch: {miss} missing, {extra} extra"))
        return fails
    if problem == "memdetect":
        nodes = outputs.keys() if candidates is None else candidates
        for v in sorted(nodes):
            if v in outputs and outputs[v] != t.member(v):
                fails.append((v, f"memdetect expected {t.member(v)}, got {outputs[v]}"))
        return fails
    if problem == "list":
        listed: dict[Copy, int] = {}
        for v in sorted(outputs):
            for c in outputs[v]:
                listed.setdefault(c, v)
        truth_copies = t.copies
        for c, v in sorted(listed.items()):
            if c not in truth_copies:
                fails.append((v, f"false listing {copy_to_json(c)}"))
        for c in sorted(truth_copies - listed.keys()):
            fails.append((None, f"copy not listed {copy_to_json(c)}"))
        return fails
    if problem == "detect":
        exists = contains_copy(t.g, h) if t._copies is None else bool(t._copies)
        yes = [v for v in sorted(outputs) if outputs[v]]
        if exists and not yes:
            fails.append((None, "copy exists but no node outputs Yes"))
        if not exists and yes:
            fails.append((yes[0], "no copy exists but node outputs Yes"))
        return fails
    raise ValueError(f"unknown problem {problem!r}")


# ---------------------------------------------------------------- run reports

def _out_json(out: Any) -> Any:
    if isinstance(out, frozenset):
        return [copy_to_json(c) for c in sorted(out)]
    return out


@dataclass
class RoundRecord:
    round: int
    event: Event
    outputs: dict[int, Any]
    bits_sent: dict[tuple[int, int], int]
    graded: bool = False

    def to_json(self) -> dict:
        return {
            "round": self.round,
            "event": self.event.to_json(),
            "graded": self.graded,
            "outputs": {str(v): _out_json(o) for v, o in sorted(self.outputs.items())},
            "bits_sent": [[u, v, b] for (u, v), b in sorted(self.bits_sent.items())],
        }


@dataclass
class RunReport:
    protocol: str
    problem: str
    per_round: list[RoundRecord] = field(default_factory=list)
    max_bits: int = 0
    total_bits: int = 0
    messages: int = 0
    verdict: str = "pass"
    failure: dict | None = None
    failures: int = 0
    rounds: int = 0
    graded_rounds: int = 0
    transcripts: dict[int, list[tuple[tuple[int, ...], dict[int, Bits]]]] = field(default_factory=dict)
    round_max_bits: list[int] = field(default_factory=list)
    final_outputs: dict[int, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "problem": self.problem,
            "verdict": self.verdict,
            "failure": self.failure,
            "failures": self.failures,
            "rounds": self.rounds,
            "graded_rounds": self.graded_rounds,
            "max_bits": self.max_bits,
            "total_bits": self.total_bits,
            "messages": self.messages,
            "round_max_bits": self.round_max_bits,
            "per_round": [r.to_json() for r in self.per_round],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def transcript(report: RunReport, v: int) -> list[tuple[tuple[int, ...], dict[int, Bits]]]:
    """What v observed each round: (current neighbors, inbox). Requires v to have been watched."""
    if v not in report.transcripts:
        raise KeyError(f"node {v} was not watched in this run")
    return report.transcripts[v]


class RunError(RuntimeError):
    pass


def run(protocol: Protocol, problem: str, h: Graph, schedule: Schedule,
        bandwidth_cap: int | None = None, *, keep_rounds: bool = True,
        watch: Iterable[int] | str | None = None, check: bool = True,
        grade_rounds: str = "required", max_fail_records: int = 1) -> RunReport:
    """Execute the schedule and grade outputs at rounds i+r-1 after each change.

    grade_rounds="required" grades exactly the rounds the model requires (and
    round 0 when there are no changes); "all" grades every round; "none" skips
    grading.
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if check:
        bad = validate(schedule)
        if bad:
            raise RunError("invalid schedule: " + "; ".join(bad[:5]))
        if not set(schedule.model) <= set(protocol.models):
            raise RunError(f"protocol {protocol.name} supports {sorted(protocol.models)}, "
                           f"schedule uses {sorted(schedule.model)}")
    if protocol.problem != problem:
        raise RunError(f"protocol {protocol.name} solves {protocol.problem}, not {problem}")

    n, r = schedule.n, schedule.r
    g0 = schedule.initial
    adj: dict[int, set[int]] = {v: set(ns) for v, ns in g0.adjacency().items()}
    nodes: dict[int, Node] = {v: protocol.make_node(v, n, g0) for v in g0.nodes}
    outputs: dict[int, Any] = {v: nd.out for v, nd in nodes.items()}
    default_out = frozenset() if problem in ("memlist", "list") else False
    # nodes whose output differs from the default; grading scans these plus copy members
    loud: set[int] = {v for v, o in outputs.items() if o != default_out}
    for v, o in outputs.items():
        if not output_kind_ok(problem, o):
            raise RunError(f"node {v} initial output has wrong kind for {problem}")

    if watch == "all":
        watched: set[int] = set(range(1, n + 1))
    else:
        watched = set(watch or ())
    rep = RunReport(protocol=protocol.name, problem=problem)
    for v in watched:
        rep.transcripts[v] = []

    graded_at: set[int] = set()
    changes = schedule.change_rounds()
    if grade_rounds == "all":
        graded_at = set(range(0, len(schedule.events) + 1))
    elif grade_rounds == "required":
        if r == 1:
            graded_at = set(range(1, len(schedule.events) + 1))
        else:
            graded_at = {k + r - 1 for k in changes if k + r - 1 <= len(schedule.events)}
        if not changes:
            graded_at.add(0)
    truth: Truth | None = None

    def do_grade(k: int) -> None:
        nonlocal truth
        if truth is None:
            truth = Truth(Graph.from_adj(adj), h)
        if problem == "memdetect":
            fails = grade(problem, h, truth, outputs)
        elif problem == "memlist":
            cand = set(truth.by_node) | loud
            fails = grade(problem, h, truth, {v: outputs[v] for v in cand if v in outputs})
        else:
            fails = grade(problem, h, truth, {v: outputs[v] for v in loud if v in outputs})
        rep.graded_rounds += 1
        if fails:
            if rep.failure is None:
                node, why = fails[0]
                rep.verdict = "fail"
                rep.failure = {"round": k, "node": node, "reason": why}
            rep.failures += len(fails)

    if 0 in graded_at:
        do_grade(0)

    empty: frozenset[int] = frozenset()
    frozen_nbrs: dict[int, frozenset[int]] = {v: frozenset(ns) for v, ns in adj.items()}
    for k, ev in enumerate(schedule.events, 1):
        prev_of: dict[int, frozenset[int]] = {}
        if ev.kind != "quiet":
            why = event_problem(adj, ev, n)
            if why:
                raise RunError(f"round {k}: {why}")
            touched = apply_event(adj, ev)
            for x in touched:
                prev_of[x] = frozen_nbrs.get(x, empty)
                if x in adj:
                    frozen_nbrs[x] = frozenset(adj[x])
            if ev.kind == "node_ins":
                prev_of[ev.v] = empty
                frozen_nbrs[ev.v] = frozenset(adj[ev.v])
                nodes[ev.v] = protocol.make_inserted(ev.v, n, g0, frozen_nbrs[ev.v], k)
                outputs[ev.v] = nodes[ev.v].out
            elif ev.kind == "node_del":
                nodes.pop(ev.v, None)
                outputs.pop(ev.v, None)
                frozen_nbrs.pop(ev.v, None)
                loud.discard(ev.v)
            truth = None

        # send phase
        inbox: dict[int, dict[int, Bits]] = {}
        bits_sent: dict[tuple[int, int], int] = {}
        stepped: list[int] = []
        round_max = 0
        for v, nd in nodes.items():
            cur = frozen_nbrs[v]
            prev = prev_of.get(v, cur)
            if not cur and not prev:
                continue
            stepped.append(v)
            msgs = nd.send(prev, cur, k)
            if not msgs:
                continue
            for w, b in msgs.items():
                if w not in cur:
                    raise RunError(f"round {k}: node {v} sent to non-neighbor {w}")
                nb = b.n
                if nb == 0:
                    continue
                if bandwidth_cap is not None and nb > bandwidth_cap:
                    rep.verdict = "cap-violation"
                    rep.failure = {"round": k, "node": v,
                                   "reason": f"{nb}-bit message to {w} exceeds cap {bandwidth_cap}"}
                    rep.rounds = k
                    rep.max_bits = max(rep.max_bits, nb)
                    return rep
                bits_sent[(v, w)] = nb
                if nb > round_max:
                    round_max = nb
                rep.total_bits += nb
                inbox.setdefault(w, {})[v] = b
        rep.messages += len(bits_sent)
        if round_max > rep.max_bits:
            rep.max_bits = round_max
        rep.round_max_bits.append(round_max)

        # receive phase
        new_outputs: dict[int, Any] = {}
        for v in stepped:
            o = nodes[v].receive(inbox.get(v, {}), k)
            if o is not outputs.get(v):
                if not output_kind_ok(problem, o):
                    raise RunError(f"round {k}: node {v} output has wrong kind for {problem}")
                outputs[v] = o
                if o != default_out:
                    loud.add(v)
                else:
                    loud.discard(v)
            new_outputs[v] = o

        for v in watched:
            if v in nodes:
                rep.transcripts[v].append((tuple(sorted(frozen_nbrs[v])),
                                           dict(sorted(inbox.get(v, {}).items()))))
        if keep_rounds:
            rep.per_round.append(RoundRecord(k, ev, new_outputs, bits_sent, k in graded_at))
        if k in graded_at:
            do_grade(k)
    rep.rounds = len(schedule.events)
    rep.final_outputs = dict(outputs)
    return rep



# ---------------------------------------------------------------- random schedules

def random_schedule(n: int, events: int, *, r: int = 1, mix: dict[str, float] | None = None,
                    delta: int | None = None, seed: int = 0, initial: Graph | None = None,
                    initial_nodes: int | None = None, initial_edges: int = 0,
                    close_bias: float = 0.5, quiet_weight: float = 0.0,
                    pool: Iterable[int] | None = None) -> Schedule:
    """Seeded random schedule with at least `events` rounds.

    Changes are drawn by `mix` weights and rejection-sampled against validity
    and the degree bound; each change is followed by r-1 quiet rounds. With
    probability close_bias an insertion closes a path of length two, so
    triangles actually form in sparse graphs. With `pool`, only those ids
    ever appear; draws depend on ranks within the pool, so the same seed on
    pools of equal size yields isomorphic schedules.
    """
    rng = random.Random(seed)
    mix = dict(mix or {"edge_ins": 1.0})
    model = frozenset(k for k, w in mix.items() if w > 0 and k in CHANGE_KINDS)
    cap = delta if delta is not None else n
    universe = sorted(set(pool)) if pool is not None else list(range(1, n + 1))
    if universe and (universe[0] < 1 or universe[-1] > n):
        raise ValueError("pool ids must lie in 1..n")
    if initial is None:
        size = len(universe)
        if initial_nodes is None:
            initial_nodes = size if "node_ins" not in model else max(3, size // 2)
        ids = sorted(rng.sample(universe, initial_nodes))
        adj: dict[int, set[int]] = {v: set() for v in ids}
        placed, tries = 0, 0
        while placed < initial_edges and tries < 50 * (initial_edges + 1):
            tries += 1
            u, v = rng.sample(ids, 2)
            if v not in adj[u] and len(adj[u]) < cap and len(adj[v]) < cap:
                adj[u].add(v)
                adj[v].add(u)
                placed += 1
    else:
        adj = {v: set(ns) for v, ns in initial.adjacency().items()}
    g0 = Graph.from_adj(adj)

    kinds = sorted(model) + (["quiet"] if quiet_weight > 0 else [])
    weights = [mix[k] for k in sorted(model)] + ([quiet_weight] if quiet_weight > 0 else [])
    out: list[Event] = []
    while len(out) < events:
        order = rng.choices(kinds, weights=weights, k=1)
        ev = None
        for kind in order + [k for k in kinds if k not in order]:
            ev = _draw(rng, adj, kind, universe, cap, close_bias)
            if ev is not None:
                break
        if ev is None or ev.kind == "quiet":
            out.append(Event.quiet())
            continue
        apply_event(adj, ev)
        out.append(ev)
        out.extend(Event.quiet() for _ in range(r - 1))
    return Schedule(n=n, initial=g0, events=out, r=r, model=model, delta=delta)


def _draw(rng: random.Random, adj: dict[int, set[int]], kind: str, universe: list[int], cap: int,
          close_bias: float) -> Event | None:
    if kind == "quiet":
        return Event.quiet()
    present = sorted(adj)
    if kind == "edge_ins":
        open_ = [v for v in present if len(adj[v]) < cap]
        if len(open_) < 2:
            return None
        if rng.random() < close_bias:
            seeds = [v for v in open_ if adj[v]]
            for _ in range(8):
                if not seeds:
                    break
                u = rng.choice(seeds)
                x = rng.choice(sorted(adj[u]))
                far = [w for w in sorted(adj[x]) if w != u and w not in adj[u] and len(adj[w]) < cap]
                if far:
                    return Event.edge_ins(u, rng.choice(far))
        for _ in range(30):
            u, v = rng.sample(open_, 2)
            if v not in adj[u]:
                return Event.edge_ins(u, v)
        return None
    if kind == "edge_del":
        edges = sorted((u, v) for u in present for v in adj[u] if u < v)
        return Event.edge_del(*rng.choice(edges)) if edges else None
    if kind == "node_del":
        return Event.node_del(rng.choice(present)) if len(present) > 1 else None
    if kind == "node_ins":
        absent = [v for v in universe if v not in adj]
        if not absent:
            return None
        v = rng.choice(absent)
        open_ = [w for w in present if len(adj[w]) < cap]
        k = rng.randint(0, min(cap, len(open_)))
        chosen: list[int] = []
        pool = list(open_)
        while len(chosen) < k and pool:
            near = [w for w in pool if chosen and any(w in adj[c] for c in chosen)]
            w = rng.choice(near) if near and rng.random() < close_bias else rng.choice(pool)
            chosen.append(w)
            pool.remove(w)
        return Event.node_ins(v, chosen)
    raise ValueError(f"unknown kind {kind!r}")
