from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from dynsub.bits import Bits, BitReader, BitWriter, id_bits, width


@pytest.mark.parametrize("k,w", [(0, 0), (1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (256, 8), (257, 9)])
def test_width(k, w):
    assert width(k) == w


@pytest.mark.parametrize("n,L", [(1, 1), (2, 1), (3, 2), (64, 6), (512, 9), (65536, 16)])
def test_id_bits(n, L):
    assert id_bits(n) == L


@given(st.lists(st.integers(0, 16).flatmap(lambda w: st.tuples(st.just(w), st.integers(0, (1 << w) - 1 if w else 0)))))
def test_writer_reader_roundtrip(fields):
    bw = BitWriter()
    for w, x in fields:
        bw.put(x, w)
    b = bw.bits()
    assert b.n == sum(w for w, _ in fields)
    br = BitReader(b)
    assert [br.get(w) for w, _ in fields] == [x for _, x in fields]
    assert br.remaining() == 0


@given(st.text(alphabet="01", max_size=40), st.integers(0, 50))
def test_truncate_keeps_prefix(s, cap):
    assert Bits.from_str(s).truncate(cap).to_str() == s[:cap]


@given(st.text(alphabet="01", max_size=20), st.integers(0, 30))
def test_reader_zero_pads_past_end(s, w):
    got = BitReader(Bits.from_str(s)).get(w)
    assert format(got, f"0{w}b") if w else "" == (s + "0" * w)[:w]
    assert got == int((s + "0" * w)[:w] or "0", 2)


def test_put_rejects_overflow():
    with pytest.raises(ValueError):
        BitWriter().put(4, 2)


def test_bit_indexing_msb_first():
    b = Bits.from_str("1011")
    assert [b.bit(i) for i in range(4)] == [1, 0, 1, 1]
    assert b.to_hex() == "b"
    assert Bits.from_str("") == Bits(0, 0)
