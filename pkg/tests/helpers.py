"""Schedule recipes and a small suite runner shared by unit and acceptance tests."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from dynsub.graph import Graph
from dynsub.sim import RunReport, Schedule, random_schedule, run

POOL = 64


def pool_for(n: int, seed: int) -> list[int] | None:
    """A seeded 64-id pool when n is larger, so big id spaces keep small, comparable graphs."""
    if n <= POOL:
        return None
    return sorted(random.Random(seed).sample(range(1, n + 1), POOL))


def edge_ins_schedule(n: int, seed: int, events: int = 150, delta: int = 4) -> Schedule:
    pool = pool_for(n, seed)
    return random_schedule(n, events, mix={"edge_ins": 1}, delta=delta, seed=seed,
                           quiet_weight=0.4, initial_edges=min(n, POOL) // 4, pool=pool)


def mixed_ins_schedule(n: int, seed: int, events: int = 150, delta: int = 4) -> Schedule:
    pool = pool_for(n, seed)
    return random_schedule(n, events, mix={"edge_ins": 1, "node_ins": 1}, delta=delta, seed=seed,
                           quiet_weight=0.4, initial_edges=min(n, POOL) // 8, pool=pool)


@dataclass
class SuiteResult:
    runs: int = 0
    failures: list = field(default_factory=list)
    max_bits: int = 0
    messages: int = 0
    total_bits: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, seed: int, rep: RunReport) -> None:
        self.runs += 1
        self.max_bits = max(self.max_bits, rep.max_bits)
        self.messages += rep.messages
        self.total_bits += rep.total_bits
        if not rep.passed:
            self.failures.append((seed, rep.verdict, rep.failure))


def suite(proto, problem: str, h: Graph, n: int, mix: dict, *, reps: int, r: int = 1,
          events: int = 40, init: Graph | None = None, grade_rounds: str = "required",
          seed0: int = 0, **kw) -> SuiteResult:
    res = SuiteResult()
    for s in range(seed0, seed0 + reps):
        sched = random_schedule(n, events, r=r, mix=mix, seed=s, initial=init, **kw)
        res.add(s, run(proto, problem, h, sched, keep_rounds=False, grade_rounds=grade_rounds))
    return res
