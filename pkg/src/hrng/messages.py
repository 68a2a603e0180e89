"""Messages exchanged between roles during a round."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .crypto.encoding import BitString
from .crypto.pedersen import Opening
from .crypto.shamir import Share


class AggregationMethod(str, enum.Enum):
    XOR = "xor"
    SUM_MOD_P = "sum_mod_p"


@dataclass(frozen=True)
class DeviceOutput:
    gateway_id: int
    device_id: int
    sequence: int
    raw_bits: BitString
    signature: bytes


def signed_payload(round_id: int, gateway_id: int, device_id: int, sequence: int, raw_bits: BitString) -> bytes:
    """Bytes a device signs: the number plus its slot, so signatures can't be replayed elsewhere."""
    head = f"hrng/v1|{round_id}|{gateway_id}|{device_id}|{sequence}|".encode()
    return head + raw_bits.to_bytes()


@dataclass(frozen=True)
class RandomRequest:
    request_id: str
    round_id: int
    selected_entries: tuple[str, ...]
    aggregation_method: str
    requester: str
    requested_at: int = -1


@dataclass(frozen=True)
class RevealRecord:
    entry_id: str
    opening: Opening
    contributing_shares: tuple[tuple[int, Share], ...]
    device_signature: bytes
    raw_bits: BitString
