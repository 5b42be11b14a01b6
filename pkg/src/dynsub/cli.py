"""Batch harness: params, run, attack, audit, sweep.

Artifacts are JSON (sorted keys) and CSV; given the same flags and seed the
bytes are identical. Exit codes: 0 pass, 1 fail, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

from . import adversary as adv
from .catalog import PROTOCOLS, ConfigError, build_protocol, protocol_bound, regime_rows
from .graph import parse_graph, params
from .sim import CHANGE_KINDS, RunError, Schedule, random_schedule, run, validate

log = logging.getLogger("dynsub")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("params", "run", "attack", "audit", "sweep")
ATTACKS = ("locality", "list_locality", "memdetect_clique", "detect_clique_mixed",
           "memlist_lb", "memlist_del_lb", "memdetect_lb", "blowup")


@dataclass
class ExperimentConfig:
    command: str
    h: str = "K3"
    protocol: str | None = None
    problem: str | None = None
    n: list[int] = field(default_factory=lambda: [64])
    delta: int | None = None
    r: int = 1
    bcap: int | None = None
    seed: int = 0
    events: int = 150
    mix: dict[str, float] | None = None
    schedule: str | None = None
    out: str | None = None
    workers: int = 1
    repeats: int = 1
    pool: int | None = None
    grade: str = "required"
    # attack / audit knobs
    attack: str | None = None
    change: str | None = None
    T: int | None = None
    s: int = 3
    t: int = 3
    variant: str | None = None
    choices: int | None = None
    x: int | None = None

    def record(self) -> dict:
        """The config as stored in reports; output location and worker count do not affect results."""
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        return d

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.r < 1:
            raise ConfigError("--r must be at least 1")
        if any(k < 3 for k in self.n):
            raise ConfigError("--n must be at least 3")
        if self.mix is not None:
            bad = set(self.mix) - set(CHANGE_KINDS) - {"quiet"}
            if bad:
                raise ConfigError(f"unknown change kinds in --mix: {sorted(bad)}")
        if self.grade not in ("required", "all"):
            raise ConfigError("--grade is 'required' or 'all'")

    @classmethod
    def from_json(cls, obj: dict) -> ExperimentConfig:
        names = {f.name for f in fields(cls)}
        extra = set(obj) - names
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        obj = dict(obj)
        if "n" in obj and not isinstance(obj["n"], list):
            obj["n"] = [obj["n"]]
        try:
            return cls(**obj)
        except TypeError as e:
            raise ConfigError(str(e)) from e


def parse_mix(text: str) -> dict[str, float]:
    """"edge_ins=1,node_ins=0.5" -> weights; a bare kind means weight 1."""
    out: dict[str, float] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        k, _, w = part.partition("=")
        if k not in CHANGE_KINDS and k != "quiet":
            raise ConfigError(f"unknown change kind {k!r} in --mix")
        try:
            out[k] = float(w) if w else 1.0
        except ValueError as e:
            raise ConfigError(f"bad --mix weight in {part!r}") from e
    return out


def parse_n(text: str) -> list[int]:
    """Comma list; items may be ranges of powers like 2^4..2^16 (even exponents step 2)."""
    out: list[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            if ".." in part:
                lo, hi = part.split("..")
                a, b = int(lo.split("^")[1]), int(hi.split("^")[1])
                out += [2 ** e for e in range(a, b + 1, 2)]
            elif "^" in part:
                base, e = part.split("^")
                out.append(int(base) ** int(e))
            else:
                out.append(int(part))
        except (ValueError, IndexError) as e:
            raise ConfigError(f"bad --n item {part!r}") from e
    return out


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(cfg: ExperimentConfig, obj: dict, rows: list[dict] | None = None) -> None:
    text = dumps(obj)
    if cfg.out is None:
        sys.stdout.write(text)
        return
    base = Path(cfg.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    base.with_suffix(".json").write_text(text)
    if rows:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        base.with_suffix(".csv").write_text(buf.getvalue())


# ---------------------------------------------------------------- commands


def cmd_params(cfg: ExperimentConfig) -> int:
    h = _graph(cfg.h)
    obj = {"h": cfg.h, "graph": h.to_json(), "params": params(h).to_json(), "r": cfg.r,
           "regimes": regime_rows(h, cfg.r)}
    _emit(cfg, obj, obj["regimes"])
    return EXIT_PASS


def _graph(spec: str):
    try:
        h = parse_graph(spec)
        params(h)
    except ValueError as e:
        raise ConfigError(f"invalid graph spec {spec!r}: {e}") from e
    return h


def _deletion_model(mix: dict[str, float] | None) -> str | None:
    if not mix:
        return None
    dels = [k for k in ("edge_del", "node_del") if mix.get(k, 0) > 0]
    return dels[0] if len(dels) == 1 else None


def _setup(cfg: ExperimentConfig, n: int):
    h = _graph(cfg.h)
    if cfg.protocol is None:
        raise ConfigError("--protocol is required")
    proto = build_protocol(cfg.protocol, h, n=n, delta=cfg.delta, r=cfg.r,
                           model=_deletion_model(cfg.mix), problem=cfg.problem)
    return h, proto


def _schedule(cfg: ExperimentConfig, proto, n: int, seed: int) -> Schedule:
    if cfg.schedule:
        try:
            sched = Schedule.from_json(json.loads(Path(cfg.schedule).read_text()))
        except (OSError, ValueError, KeyError) as e:
            raise ConfigError(f"cannot load schedule {cfg.schedule}: {e}") from e
        bad = validate(sched)
        if bad:
            raise ConfigError("invalid schedule: " + "; ".join(bad[:3]))
    else:
        mix = cfg.mix or {k: 1.0 for k in sorted(proto.models)}
        changes = {k: w for k, w in mix.items() if k != "quiet"}
        pool = None
        if cfg.pool and cfg.pool < n:
            import random
            pool = sorted(random.Random(seed).sample(range(1, n + 1), cfg.pool))
        sched = random_schedule(n, cfg.events, r=cfg.r, mix=changes, delta=cfg.delta, seed=seed,
                                quiet_weight=mix.get("quiet", 0.0), pool=pool)
    unsupported = set(sched.model) - set(proto.models)
    if unsupported:
        raise ConfigError(f"protocol {proto.name} does not handle {sorted(unsupported)}; "
                          f"it supports {sorted(proto.models)}")
    return sched


def run_one(cfg: ExperimentConfig, n: int, seed: int) -> dict:
    h, proto = _setup(cfg, n)
    sched = _schedule(cfg, proto, n, seed)
    problem = cfg.problem or proto.problem
    try:
        rep = run(proto, problem, h, sched, bandwidth_cap=cfg.bcap, keep_rounds=False,
                  grade_rounds=cfg.grade)
    except RunError as e:
        raise ConfigError(str(e)) from e
    out = rep.to_json()
    out.pop("per_round", None)
    return {"n": n, "seed": seed, "protocol": proto.describe(), "bound": protocol_bound(proto, n),
            "schedule_events": len(sched.events), "report": out, "schedule": sched.to_json()}


def cmd_run(cfg: ExperimentConfig) -> int:
    n = cfg.n[0]
    res = run_one(cfg, n, cfg.seed)
    rep = res["report"]
    rows = [{"round": k, "max_bits": b, "verdict": rep["verdict"]}
            for k, b in enumerate(rep["round_max_bits"], 1)]
    obj = {"config": cfg.record(), **res}
    _emit(cfg, obj, rows)
    log.info("%s n=%d: %s, max_bits=%d", res["protocol"]["name"], n, rep["verdict"],
             rep["max_bits"])
    return EXIT_PASS if rep["verdict"] == "pass" else EXIT_FAIL


def _sweep_job(args) -> dict:
    cfg, n, seed = args
    res = run_one(cfg, n, seed)
    rep = res["report"]
    return {"n": n, "seed": seed, "max_bits": rep["max_bits"], "bound": res["bound"],
            "verdict": rep["verdict"], "total_bits": rep["total_bits"]}


def cmd_sweep(cfg: ExperimentConfig) -> int:
    jobs = [(cfg, n, cfg.seed + k) for n in cfg.n for k in range(cfg.repeats)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            rows = list(ex.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(j) for j in jobs]
    per_n = []
    for n in cfg.n:
        mine = [r for r in rows if r["n"] == n]
        per_n.append({"n": n, "max_bits": max(r["max_bits"] for r in mine),
                      "bound": mine[0]["bound"],
                      "passed": sum(r["verdict"] == "pass" for r in mine), "runs": len(mine)})
    _emit(cfg, {"config": cfg.record(), "runs": rows, "per_n": per_n}, rows)
    return EXIT_PASS if all(r["verdict"] == "pass" for r in rows) else EXIT_FAIL


def cmd_attack(cfg: ExperimentConfig) -> int:
    kind = cfg.attack
    if kind not in ATTACKS:
        raise ConfigError(f"--attack must be one of {', '.join(ATTACKS)}")
    h = _graph(cfg.h)
    n = cfg.n[0]
    try:
        if kind == "locality":
            proto = build_protocol(cfg.protocol or "silent", h, n=max(h.nodes), r=cfg.r,
                                   problem=cfg.problem)
            pair = adv.locality_pair(h, cfg.change or "edge_ins", cfg.T or 0)
            res = adv.assert_indistinguishable(pair, proto, proto.problem, h)
            res["pair"] = pair.to_json()
            ok = res["verdict"] == "violation"
        elif kind == "list_locality":
            proto = _as_list(build_protocol(cfg.protocol or "memlist_edge_del", h,
                                            n=max(h.nodes), r=cfg.r, problem=cfg.problem or "list"))
            res = adv.list_edge_del_locality(h, proto)
            ok = res["verdict"] == "violation"
        elif kind in ("memdetect_clique", "detect_clique_mixed"):
            proto = build_protocol(cfg.protocol or "constant", h, n=n, delta=cfg.delta, r=cfg.r,
                                   problem=cfg.problem)
            fn = adv.attack_memdetect_clique if kind == "memdetect_clique" \
                else adv.attack_detect_clique_mixed
            res = fn(proto, cfg.s, cfg.bcap if cfg.bcap is not None else 1, cfg.t, n)
            ok = res["result"] in ("violation", "capacity")
        elif kind == "memlist_lb":
            variant = cfg.variant or "edge_ins_nonclique"
            choice = list(range(1, n // 2 + 1)) if variant.endswith("nonclique") else \
                [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if (i + j) % 2 == 0]
            sched, desc = adv.memlist_lb_instance(h, n, variant, choice, cfg.r)
            res = _instance_report(sched, desc, cfg.bcap)
            ok = True
        elif kind == "memlist_del_lb":
            sched, desc = adv.memlist_del_lb_instance(h, n, 1, cfg.change or "edge_del", cfg.r)
            res = _instance_report(sched, desc, cfg.bcap)
            ok = True
        elif kind == "memdetect_lb":
            sched, desc = adv.memdetect_lb_instance(h, n, range(1, n // 2 + 1), 1,
                                                    cfg.change or "edge_ins")
            res = _instance_report(sched, desc, cfg.bcap)
            ok = True
        else:
            model = cfg.change or "edge_del"
            fam = adv.listing_lb_blowup(h, n, model)
            res = fam.to_json()
            if cfg.protocol:
                proto = build_protocol(cfg.protocol, h, n=max(fam.g0.nodes), model=model)
                res["probe"] = fam.probe(proto)
            ok = True
    except ValueError as e:
        raise ConfigError(str(e)) from e
    _emit(cfg, {"config": cfg.record(), "attack": kind, "result": res})
    return EXIT_PASS if ok else EXIT_FAIL


def _as_list(p):
    return adv.AsList(p) if p.problem == "memlist" else p


def _instance_report(sched, desc, bcap) -> dict:
    out = {"descriptor": desc.to_json(), "schedule": sched.to_json()}
    if bcap is not None:
        out["audit"] = adv.capacity_audit(desc.choice_count, desc.slots, bcap).to_json()
    out["min_B"] = adv.min_bandwidth(desc.choice_count, desc.slots) if desc.slots else None
    return out


def cmd_audit(cfg: ExperimentConfig) -> int:
    B = cfg.bcap if cfg.bcap is not None else 1
    try:
        if cfg.choices is not None:
            if cfg.x is None:
                raise ConfigError("--choices needs --x")
            rows = [{"bound": "custom", **adv.capacity_audit(cfg.choices, cfg.x, B).to_json()}]
        else:
            rows = [row for n in cfg.n for row in adv.standard_audits(n, B, cfg.r)]
    except ValueError as e:
        raise ConfigError(str(e)) from e
    _emit(cfg, {"config": cfg.record(), "audits": rows}, rows)
    return EXIT_PASS


HANDLERS = {"params": cmd_params, "run": cmd_run, "sweep": cmd_sweep, "attack": cmd_attack,
            "audit": cmd_audit}


# ---------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynsub", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with any of the flags below")
        p.add_argument("--h", help="target graph: K3, C5, P4, K_{2,2,2}, K_{1,3}, paw, or an edge list like 1-2,2-3")
        p.add_argument("--protocol", choices=PROTOCOLS)
        p.add_argument("--problem", choices=("memlist", "memdetect", "list", "detect"))
        p.add_argument("--n", type=parse_n, help="id-space size(s), e.g. 64 or 16,64 or 2^4..2^16")
        p.add_argument("--delta", type=int)
        p.add_argument("--r", type=int)
        p.add_argument("--bcap", type=int, help="bandwidth cap in bits")
        p.add_argument("--seed", type=int)
        p.add_argument("--events", type=int)
        p.add_argument("--mix", type=parse_mix, help="e.g. edge_ins=1,node_ins=1,quiet=0.2")
        p.add_argument("--schedule", help="replay a schedule JSON instead of generating one")
        p.add_argument("--out", help="output path prefix; writes .json and .csv")
        p.add_argument("--workers", type=int)
        p.add_argument("--repeats", type=int)
        p.add_argument("--pool", type=int, help="draw node ids from a seeded pool of this size")
        p.add_argument("--grade", choices=("required", "all"))
        if name == "attack":
            p.add_argument("--attack", choices=ATTACKS, required=False)
            p.add_argument("--change", choices=sorted(CHANGE_KINDS))
            p.add_argument("--T", type=int)
            p.add_argument("--s", type=int)
            p.add_argument("--t", type=int)
            p.add_argument("--variant")
        if name == "audit":
            p.add_argument("--choices", type=int)
            p.add_argument("--x", type=int)
    return ap


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    base: dict[str, Any] = {}
    if getattr(ns, "config", None):
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, ValueError) as e:
            raise ConfigError(f"cannot read config {ns.config}: {e}") from e
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
    names = {f.name for f in fields(ExperimentConfig)}
    for k, v in vars(ns).items():
        if k in names and v is not None:
            base[k] = v
    base["command"] = ns.command
    return ExperimentConfig.from_json(base)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_PASS
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(ns)
        return HANDLERS[cfg.command](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
