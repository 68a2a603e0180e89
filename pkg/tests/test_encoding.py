from collections import Counter

import pytest
from hypothesis import given, strategies as st

from hrng.crypto import BitString, bits_to_scalar, scalar_to_bits
from hrng.crypto.encoding import ceil_log2, floor_log2, min_entropy_bits
from hrng.errors import InsufficientEntropyLength, OutputTooWide


def test_bits_to_scalar_examples(vectors):
    assert bits_to_scalar(BitString(0xFFFF, 16), 251, margin=8) == 24
    assert bits_to_scalar(BitString(0, 16), 251, margin=8) == 0
    for v in vectors["bits_to_scalar"]:
        assert bits_to_scalar(BitString.parse(v["bits"]), v["p"], v["margin"]) == v["scalar"]


def test_bits_to_scalar_length_check():
    assert min_entropy_bits(251) == 8 + 64
    with pytest.raises(InsufficientEntropyLength):
        bits_to_scalar(BitString(0xFFFF, 16), 251)
    with pytest.raises(InsufficientEntropyLength):
        bits_to_scalar(BitString(0, 15), 251, margin=8)
    assert bits_to_scalar(BitString(5, 72), 251) == 5


def test_reduction_bucket_ratio_exhaustive():
    counts = Counter(v % 251 for v in range(1 << 16))
    assert len(counts) == 251
    # 2^16 = 261 * 251 + 25
    assert max(counts.values()) == 262 and min(counts.values()) == 261
    assert sum(1 for c in counts.values() if c == 262) == 25
    assert Counter(bits_to_scalar(BitString(v, 16), 251, margin=8) for v in range(1 << 16)) == counts


def test_scalar_to_bits_examples():
    assert str(scalar_to_bits(24, 4, 251)) == "1000"
    assert str(scalar_to_bits(0, 7, 251)) == "0000000"
    assert scalar_to_bits(250, 7, 251).length == 7
    with pytest.raises(OutputTooWide):
        scalar_to_bits(1, 8, 251)


def test_log_helpers():
    assert (ceil_log2(251), floor_log2(251)) == (8, 7)
    assert (ceil_log2(11), floor_log2(11)) == (4, 3)
    assert (ceil_log2(256), floor_log2(256)) == (8, 8)


@given(st.integers(min_value=0, max_value=64).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(min_value=0, max_value=(1 << n) - 1))))
def test_bitstring_text_roundtrip(nv):
    n, v = nv
    b = BitString(v, n)
    assert BitString.parse(str(b)) == b
    assert len(str(b)) == n


def test_bitstring_xor():
    assert BitString.parse("1010") ^ BitString.parse("0110") == BitString.parse("1100")
    with pytest.raises(ValueError):
        BitString.parse("10") ^ BitString.parse("100")
    with pytest.raises(ValueError):
        BitString(4, 2)
    with pytest.raises(ValueError):
        BitString.parse("10a")
