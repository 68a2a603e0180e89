"""Conversions between device bit strings and scalars mod p."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import InsufficientEntropyLength, OutputTooWide

DEFAULT_MARGIN_BITS = 64


@dataclass(frozen=True)
class BitString:
    """Fixed-width bit string; ``value`` is read big-endian (first bit = MSB)."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0 or not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: "BitString") -> "BitString":
        if other.length != self.length:
            raise ValueError("xor of bit strings with different widths")
        return BitString(self.value ^ other.value, self.length)

    def low(self, width: int) -> "BitString":
        return BitString(self.value & ((1 << width) - 1), width)

    def to_bytes(self) -> bytes:
        return self.length.to_bytes(4, "big") + self.value.to_bytes((self.length + 7) // 8, "big")


def ceil_log2(p: int) -> int:
    return (p - 1).bit_length()


def floor_log2(p: int) -> int:
    return p.bit_length() - 1


def min_entropy_bits(p: int, margin: int = DEFAULT_MARGIN_BITS) -> int:
    return ceil_log2(p) + margin


def bits_to_scalar(bits: BitString, p: int, margin: int = DEFAULT_MARGIN_BITS) -> int:
    need = min_entropy_bits(p, margin)
    if bits.length < need:
        raise InsufficientEntropyLength(f"{bits.length} bits < ceil(log2 p) + {margin} = {need}")
    return bits.value % p


def scalar_to_bits(s: int, out_len: int, p: int) -> BitString:
    """Low ``out_len`` bits of ``s``; leading bits are dropped to keep the output near-uniform."""
    if out_len > floor_log2(p):
        raise OutputTooWide(f"out_len {out_len} > floor(log2 {p}) = {floor_log2(p)}")
    return BitString((s % p) & ((1 << out_len) - 1), out_len)
