"""Shared pieces: block streaming of fixed-size payloads and small encoders."""
from __future__ import annotations

from ..bits import BitReader, Bits, BitWriter, width
from ..graph import Graph, norm_edge
from ..oracle import Copy


def triangle(a: int, b: int, c: int) -> Copy:
    x, y, z = sorted((a, b, c))
    return ((x, y), (x, z), (y, z))


def initial_triangles(g0: Graph, v: int) -> set[Copy]:
    if v not in g0:
        return set()
    ns = sorted(g0.neighbors(v))
    out = set()
    for i, a in enumerate(ns):
        na = g0.neighbors(a)
        for b in ns[i + 1:]:
            if b in na:
                out.add(triangle(v, a, b))
    return out


def encode_slots(values: list[int], slots: int, w: int) -> int:
    """Pack `slots` fields of w bits; short lists repeat their last value, empty lists write zeros."""
    if len(values) > slots:
        raise ValueError(f"{len(values)} values exceed {slots} slots")
    fill = values + [values[-1] if values else 0] * (slots - len(values))
    out = 0
    for x in fill:
        out = (out << w) | x
    return out


def decode_slots(payload: int, slots: int, w: int) -> list[int]:
    mask = (1 << w) - 1
    return [(payload >> (w * (slots - 1 - i))) & mask for i in range(slots)]


class Blocks:
    """Splits a P-bit payload into T blocks of ceil(P/T) bits; the last block is zero padded."""

    __slots__ = ("P", "T", "bs", "iw")

    def __init__(self, payload_bits: int, periods: int):
        self.P = payload_bits
        self.T = periods
        self.bs = -(-payload_bits // periods) if payload_bits else 0
        self.iw = width(periods)

    def block(self, payload: int, i: int) -> int:
        padded = payload << (self.bs * self.T - self.P)
        return (padded >> (self.bs * (self.T - 1 - i))) & ((1 << self.bs) - 1)

    def write(self, bw: BitWriter, payload: int, i: int) -> None:
        bw.put(i, self.iw)
        bw.put(self.block(payload, i), self.bs)

    def read(self, br: BitReader) -> tuple[int, int]:
        i = br.get(self.iw)
        return i, br.get(self.bs)

    def join(self, parts: dict[int, int]) -> int | None:
        if len(parts) < self.T or any(i not in parts for i in range(self.T)):
            return None
        val = 0
        for i in range(self.T):
            val = (val << self.bs) | parts[i]
        return val >> (self.bs * self.T - self.P)

    def header_bits(self) -> int:
        return self.iw


def one_distinct_bit(x: Bits | str, y: Bits | str) -> int:
    """First 1-indexed position where two equal-length bit strings differ."""
    xs = x if isinstance(x, str) else x.to_str()
    ys = y if isinstance(y, str) else y.to_str()
    if len(xs) != len(ys):
        raise ValueError("bit strings differ in length")
    for i, (a, b) in enumerate(zip(xs, ys), 1):
        if a != b:
            return i
    raise ValueError("bit strings are equal")


def distinct_bit_ids(a: int, b: int, L: int) -> int:
    """one_distinct_bit on ids written as (id-1) in L bits, most significant first."""
    diff = (a - 1) ^ (b - 1)
    if diff == 0:
        raise ValueError("ids are equal")
    return L - diff.bit_length() + 1


def id_bit(x: int, j: int, L: int) -> int:
    """j-th bit (1-indexed, most significant first) of id x written in L bits."""
    return ((x - 1) >> (L - j)) & 1


def edge_key(u: int, v: int):
    return norm_edge(u, v)
