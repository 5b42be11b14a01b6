"""Protocol lookup by op name and the bandwidth regime each target falls into."""
from __future__ import annotations

import math

from .graph import Graph, complete, params
from .protocols.clique import BaselineMemDetectK3, ListK3MixedIns, MemListK3EdgeIns
from .protocols.general import (ListCenterDel, ListRad1EdgeDel, ListStarDel, MemDetectMultipartiteNodeDel,
                                MemDetectRad1NodeDel, MemDetectStar, MemListEdgeDel, MemListGeneral,
                                MemListMultipartite, MemListNodeDel)
from .sim import InitialKnowledgeProtocol, Protocol, SilentProtocol


class ConfigError(ValueError):
    """Bad experiment configuration; the CLI maps it to exit code 2."""


PROTOCOLS = (
    "memlist_k3_edge_ins", "list_k3_mixed_ins", "baseline_memdetect_k3",
    "memlist_multipartite", "memlist_general", "memlist_edge_del", "memlist_node_del",
    "memdetect_star", "memdetect_rad1_node_del", "memdetect_multipartite_node_del",
    "list_star_del", "list_rad1_edge_del", "list_center_del",
    "silent", "initial_knowledge", "constant", "id_echo",
)


def _need_k3(name: str, h: Graph) -> None:
    if h != complete(3):
        raise ConfigError(f"{name} targets the triangle; got h with {len(h)} nodes")


def build_protocol(name: str, h: Graph, *, n: int, delta: int | None = None, r: int = 1,
                   model: str | None = None, problem: str | None = None, d: int | None = None
                   ) -> Protocol:
    """Instantiate a protocol by name. `model` picks the deletion flavor for listing protocols."""
    from .adversary import ConstantProtocol, IdEchoProtocol

    try:
        if name in ("memlist_k3_edge_ins", "list_k3_mixed_ins", "baseline_memdetect_k3"):
            _need_k3(name, h)
            if delta is None:
                raise ConfigError(f"{name} needs a degree bound (--delta)")
            if name == "memlist_k3_edge_ins":
                return MemListK3EdgeIns(n, delta)
            if name == "list_k3_mixed_ins":
                return ListK3MixedIns(n, delta)
            return BaselineMemDetectK3(d or max(1, math.ceil(math.log2(max(n, 2)))), n, delta)
        if name == "memlist_multipartite":
            return MemListMultipartite(h, r)
        if name == "memlist_general":
            return MemListGeneral(h, r)
        if name == "memlist_edge_del":
            return MemListEdgeDel(h, r)
        if name == "memlist_node_del":
            return MemListNodeDel(h, r)
        if name == "memdetect_star":
            return MemDetectStar.for_target(h)
        if name == "memdetect_rad1_node_del":
            return MemDetectRad1NodeDel(h)
        if name == "memdetect_multipartite_node_del":
            return MemDetectMultipartiteNodeDel(h)
        if name == "list_star_del":
            return ListStarDel(h, model or "edge_del")
        if name == "list_rad1_edge_del":
            return ListRad1EdgeDel(h)
        if name == "list_center_del":
            return ListCenterDel(h, model or "edge_del")
        if name == "silent":
            return SilentProtocol(problem or "memlist")
        if name == "initial_knowledge":
            return InitialKnowledgeProtocol(h, problem or "memlist")
        if name == "constant":
            return ConstantProtocol(problem or "memdetect", len(h))
        if name == "id_echo":
            return IdEchoProtocol(problem or "memdetect", len(h))
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{name}: {e}") from e
    raise ConfigError(f"unknown protocol {name!r}; choose from {', '.join(PROTOCOLS)}")


def protocol_bound(p: Protocol, n: int) -> int | None:
    """Closed-form per-message bit bound, when the protocol has one."""
    f = getattr(p, "bound", None)
    if f is None:
        return None
    try:
        return f(n)
    except TypeError:
        return f()


# ---------------------------------------------------------------- regimes


def _row(problem, change, regime, complexity, protocol=None, witness=None):
    return {"problem": problem, "change": change, "regime": regime, "complexity": complexity,
            "protocol": protocol, "witness": witness}


def memlist_rows(h: Graph, r: int) -> list[dict]:
    p = params(h)
    rows = []
    for ch in ("edge_ins", "node_ins", "edge_del"):
        if r < p.r_H:
            rows.append(_row("memlist", ch, f"r={r} < r_H={p.r_H}", "Impossible",
                             witness=f"locality_pair({ch}, T={r})"))
            continue
        if p.is_clique:
            if ch == "edge_ins":
                cx = "Θ(√n)" if r == 1 else "Θ(1)"
                proto = "memlist_k3_edge_ins (bounded degree)" if len(h) == 3 else None
            elif ch == "node_ins":
                cx, proto = "Θ(n/r)", "memlist_multipartite"
            else:
                cx, proto = "Θ(1)", "memlist_edge_del"
            rows.append(_row("memlist", ch, f"clique, r={r}", cx, proto))
        elif p.is_complete_multipartite:
            if ch == "edge_del":
                rows.append(_row("memlist", ch, "complete multipartite", "Θ((log n)/r)",
                                 "memlist_edge_del"))
            else:
                rows.append(_row("memlist", ch, "complete multipartite", "Θ(n/r)",
                                 "memlist_multipartite"))
        else:
            if ch == "edge_del":
                rows.append(_row("memlist", ch, f"r_H={p.r_H} >= 2", "Θ((log n)/r)",
                                 "memlist_edge_del"))
            else:
                rows.append(_row("memlist", ch, f"r_H={p.r_H} >= 2", "Θ(n²/r)",
                                 "memlist_general"))
    if r < p.r_H_prime:
        rows.append(_row("memlist", "node_del", f"r={r} < r_H'={p.r_H_prime}", "Impossible",
                         witness=f"locality_pair(node_del, T={r})"))
    elif p.r_H_prime == 0:
        rows.append(_row("memlist", "node_del", "clique (r_H'=0)", "0", "memlist_node_del"))
    else:
        rows.append(_row("memlist", "node_del", f"r_H'={p.r_H_prime} >= 1", "Θ((log n)/r)",
                         "memlist_node_del"))
    return rows


def memdetect_rows(h: Graph) -> list[dict]:
    p = params(h)
    rows = []
    for ch in ("edge_ins", "node_ins", "edge_del"):
        if not p.is_complete_multipartite:
            rows.append(_row("memdetect", ch, f"not complete multipartite (r_H={p.r_H})",
                             "Impossible", witness=f"locality_pair({ch}, T=1)"))
        elif p.is_star:
            rows.append(_row("memdetect", ch, "star", "Θ(1)", "memdetect_star"))
        elif p.is_clique:
            if ch == "edge_ins":
                if len(h) == 3:
                    rows.append(_row("memdetect", ch, "3-clique", "O(log n); Ω(log log n)",
                                     "baseline_memdetect_k3",
                                     witness="attack_memdetect_clique"))
                else:
                    rows.append(_row("memdetect", ch, f"{len(h)}-clique", "O(√n)"))
            elif ch == "node_ins":
                rows.append(_row("memdetect", ch, "clique", "Θ(n)", "memlist_multipartite"))
            else:
                rows.append(_row("memdetect", ch, "clique", "Θ(1)", "memlist_edge_del"))
        else:
            if ch == "edge_del":
                rows.append(_row("memdetect", ch, "complete multipartite", "O(log n)",
                                 "memlist_edge_del"))
            else:
                rows.append(_row("memdetect", ch, "complete multipartite", "Θ(n)",
                                 "memlist_multipartite", witness="memdetect_lb_instance"))
    if p.diam == 1:
        rows.append(_row("memdetect", "node_del", "diam=1", "0", "memlist_node_del"))
    elif p.diam == 2 and p.rad == 1:
        rows.append(_row("memdetect", "node_del", "diam=2, rad=1", "Θ(1)",
                         "memdetect_rad1_node_del"))
    elif p.diam == 2 and p.ne_diam == 2:
        rows.append(_row("memdetect", "node_del", "diam=2, rad=2, ne_diam=2", "Θ(1)",
                         "memdetect_multipartite_node_del"))
    elif p.diam == 2:
        rows.append(_row("memdetect", "node_del", "diam=2, rad=2, ne_diam=3", "O(log n)",
                         "memlist_node_del"))
    else:
        rows.append(_row("memdetect", "node_del", f"diam={p.diam} >= 3", "Impossible",
                         witness="locality_pair(node_del, T=1)"))
    return rows


def list_rows(h: Graph) -> list[dict]:
    p = params(h)
    rows = []
    if p.ne_rad == 1:
        rows.append(_row("list", "edge_del", "ne_rad=1", "0", "list_star_del"))
    elif p.ne_rad == 2 and p.rad == 1:
        rows.append(_row("list", "edge_del", "ne_rad=2, rad=1", "Θ(1)", "list_rad1_edge_del"))
    elif p.ne_rad == 2:
        rows.append(_row("list", "edge_del", "ne_rad=2, rad=2", "Θ(log n)", "list_center_del",
                         witness="listing_lb_blowup(edge_del)"))
    else:
        rows.append(_row("list", "edge_del", f"ne_rad={p.ne_rad} >= 3", "Impossible",
                         witness="list_edge_del_locality"))
    if p.rad == 1:
        rows.append(_row("list", "node_del", "rad=1", "0", "list_star_del"))
    elif p.rad == 2 and p.diam == 2:
        rows.append(_row("list", "node_del", "rad=2, diam=2", "O(log n)", "list_center_del"))
    elif p.rad == 2:
        rows.append(_row("list", "node_del", f"rad=2, diam={p.diam}", "Θ(log n)",
                         "list_center_del", witness="listing_lb_blowup(node_del)"))
    else:
        rows.append(_row("list", "node_del", f"rad={p.rad} >= 3", "Impossible"))
    return rows


def regime_rows(h: Graph, r: int = 1) -> list[dict]:
    return memlist_rows(h, r) + memdetect_rows(h) + list_rows(h)
