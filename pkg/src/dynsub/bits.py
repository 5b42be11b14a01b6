"""Bit strings as (value, length) pairs, most-significant bit first."""
from __future__ import annotations


def width(k: int) -> int:
    """Bits needed to write any value in range(k); zero when k <= 1."""
    return 0 if k <= 1 else (k - 1).bit_length()


def id_bits(n: int) -> int:
    """ceil(log2 n), at least one bit; ids 1..n are written as id-1."""
    return max(1, width(n))


class Bits:
    __slots__ = ("val", "n")

    def __init__(self, val: int = 0, n: int = 0):
        self.val = val
        self.n = n

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Bits) and self.n == other.n and self.val == other.val

    def __hash__(self) -> int:
        return hash((self.val, self.n))

    def __repr__(self) -> str:
        return f"Bits({self.to_str()!r})"

    def to_str(self) -> str:
        return format(self.val, f"0{self.n}b") if self.n else ""

    @classmethod
    def from_str(cls, s: str) -> Bits:
        return cls(int(s, 2) if s else 0, len(s))

    def to_hex(self) -> str:
        return format(self.val, "x")

    def truncate(self, cap: int) -> Bits:
        if self.n <= cap:
            return self
        return Bits(self.val >> (self.n - cap), cap)

    def bit(self, i: int) -> int:
        """i-th bit, 0-indexed from the most significant end."""
        return (self.val >> (self.n - 1 - i)) & 1


class BitWriter:
    __slots__ = ("val", "n")

    def __init__(self):
        self.val = 0
        self.n = 0

    def put(self, x: int, w: int) -> BitWriter:
        if w:
            if x < 0 or x >> w:
                raise ValueError(f"value {x} does not fit in {w} bits")
            self.val = (self.val << w) | x
            self.n += w
        return self

    def put_bits(self, b: Bits) -> BitWriter:
        self.val = (self.val << b.n) | b.val
        self.n += b.n
        return self

    def bits(self) -> Bits:
        return Bits(self.val, self.n)


class BitReader:
    """Reads fields in order; reads past the end yield zeros so clipped input never raises."""

    __slots__ = ("b", "pos")

    def __init__(self, b: Bits):
        self.b = b
        self.pos = 0

    def get(self, w: int) -> int:
        if w == 0:
            return 0
        b = self.b
        start, end = self.pos, self.pos + w
        self.pos = end
        if end <= b.n:
            return (b.val >> (b.n - end)) & ((1 << w) - 1)
        have = max(0, b.n - start)
        head = (b.val & ((1 << have) - 1)) if have else 0
        return head << (w - have)

    def remaining(self) -> int:
        return max(0, self.b.n - self.pos)
