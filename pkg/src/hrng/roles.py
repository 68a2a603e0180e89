"""Device and gateway roles."""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .crypto.encoding import BitString, bits_to_scalar
from .crypto.groups import GroupParams
from .crypto.pedersen import Opening, commit
from .crypto.shamir import split
from .crypto.signing import KeyPair, sign, verify_sig
from .messages import DeviceOutput, signed_payload
from .pool import PoolEntry, ShareEnvelope, make_entry_id, seal_share


@dataclass
class Device:
    gateway_id: int
    device_id: int
    keys: KeyPair
    entropy_bits: int
    rng: random.Random

    def output(self, round_id: int, sequence: int, raw_bits: BitString) -> DeviceOutput:
        payload = signed_payload(round_id, self.gateway_id, self.device_id, sequence, raw_bits)
        return DeviceOutput(self.gateway_id, self.device_id, sequence, raw_bits, sign(self.keys.secret_key, payload))


def device_generate(device: Device, round_id: int, sequence: int) -> DeviceOutput:
    """Honest TEE output: ``entropy_bits`` fresh bits and a signature over them."""
    bits = BitString(device.rng.getrandbits(device.entropy_bits), device.entropy_bits)
    return device.output(round_id, sequence, bits)


# The device bits and signature ride along in the pool entry, encrypted under a
# key derived from the opening. They become readable exactly when the opening
# is reconstructed, even if the originating gateway has gone silent.

def _payload_key(opening: Opening, entry_id: str) -> bytes:
    tag = f"hrng/payload|{entry_id}|{opening.message}|{opening.blinding}".encode()
    return hashlib.sha256(tag).digest()


def seal_payload(opening: Opening, entry_id: str, raw_bits: BitString, signature: bytes) -> bytes:
    pt = raw_bits.length.to_bytes(4, "big") + raw_bits.to_bytes()[4:] + signature
    return AESGCM(_payload_key(opening, entry_id)).encrypt(b"\0" * 12, pt, entry_id.encode())


def open_payload(opening: Opening, entry_id: str, blob: bytes) -> tuple[BitString, bytes] | None:
    try:
        pt = AESGCM(_payload_key(opening, entry_id)).decrypt(b"\0" * 12, blob, entry_id.encode())
    except InvalidTag:
        return None
    length = int.from_bytes(pt[:4], "big")
    nbytes = (length + 7) // 8
    value = int.from_bytes(pt[4 : 4 + nbytes], "big")
    return BitString(value, length), pt[4 + nbytes :]


@dataclass
class GatewayBatch:
    entries: list[PoolEntry] = field(default_factory=list)
    envelopes: list[ShareEnvelope] = field(default_factory=list)
    flags: list[dict] = field(default_factory=list)
    openings: dict[str, Opening] = field(default_factory=dict)
    commit_ops: int = 0
    split_ops: int = 0


@dataclass
class Gateway:
    gateway_id: int
    enc_key: bytes
    rng: random.Random


def gateway_process(
    gateway: Gateway,
    outputs: Sequence[DeviceOutput],
    *,
    round_id: int,
    params: GroupParams,
    device_keys: Mapping[tuple[int, int], bytes],
    gateway_keys: Mapping[int, bytes],
    t: int,
    k: int,
    margin: int,
) -> GatewayBatch:
    """Commit each verified device output, threshold-share its opening, seal one envelope per gateway."""
    batch = GatewayBatch()
    p = params.p
    for out in outputs:
        entry_id = make_entry_id(round_id, gateway.gateway_id, out.device_id, out.sequence)
        pk = device_keys.get((gateway.gateway_id, out.device_id))
        payload = signed_payload(round_id, gateway.gateway_id, out.device_id, out.sequence, out.raw_bits)
        if out.gateway_id != gateway.gateway_id or pk is None or not verify_sig(pk, payload, out.signature):
            batch.flags.append({
                "gateway_id": gateway.gateway_id, "device_id": out.device_id,
                "sequence": out.sequence, "reason": "BadDeviceSignature",
            })
            continue
        opening = Opening(bits_to_scalar(out.raw_bits, p, margin), gateway.rng.randrange(p))
        c = commit(params, opening)
        batch.commit_ops += 1
        shares = split(opening, t, k, p, gateway.rng)
        batch.split_ops += 1
        sealed = seal_payload(opening, entry_id, out.raw_bits, out.signature)
        batch.entries.append(PoolEntry(entry_id, round_id, gateway.gateway_id, out.device_id, out.sequence, c, sealed))
        batch.openings[entry_id] = opening
        for share in shares.shares:
            batch.envelopes.append(seal_share(gateway_keys[share.index], entry_id, share.index, share))
    return batch
