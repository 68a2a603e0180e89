"""Append-only random-number pool with a phase gate and share envelopes.

Only the in-process backend exists; :class:`PoolBackend` is the surface a
remote store would have to provide.
"""
from __future__ import annotations

import enum
import hashlib
import itertools
import json
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Protocol

from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .crypto.pedersen import Commitment
from .crypto.shamir import Share
from .errors import AccessDenied, DuplicateEntry, PhaseViolation


class Phase(enum.IntEnum):
    SETUP = 0
    PUBLISH = 1
    REQUEST = 2
    RESPOND = 3
    CONSTRUCT = 4


@dataclass(frozen=True)
class PoolEntry:
    entry_id: str
    round_id: int
    gateway_id: int
    device_id: int
    sequence: int
    commitment: Commitment
    sealed_payload: bytes = b""
    published_at: int = -1

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.round_id, self.gateway_id, self.device_id, self.sequence)


def make_entry_id(round_id: int, gateway_id: int, device_id: int, sequence: int) -> str:
    return f"r{round_id}/g{gateway_id}/d{device_id}/s{sequence}"


@dataclass(frozen=True)
class ShareEnvelope:
    entry_id: str
    recipient_gateway: int
    ciphertext: bytes


class PoolBackend(Protocol):
    phase: Phase

    def advance(self, phase: Phase) -> None: ...
    def publish(self, entry: PoolEntry) -> str: ...
    def query(self, round_id: int, *, gateway_id: int | None = None,
              device_id: int | None = None) -> list[PoolEntry]: ...
    def get(self, entry_id: str) -> PoolEntry | None: ...
    def deposit_share(self, envelope: ShareEnvelope) -> None: ...
    def fetch_share(self, entry_id: str, recipient: int, requester: int) -> ShareEnvelope: ...


class InMemoryPool:
    def __init__(self, clock: Callable[[], int] | None = None):
        self.phase = Phase.SETUP
        self._clock = clock or itertools.count().__next__
        self._entries: dict[str, PoolEntry] = {}
        self._keys: set[tuple[int, int, int, int]] = set()
        self._envelopes: dict[tuple[str, int], ShareEnvelope] = {}
        self._log: list[PoolEntry | ShareEnvelope] = []

    def advance(self, phase: Phase) -> None:
        if phase < self.phase:
            raise PhaseViolation(f"cannot go back from {self.phase.name} to {phase.name}")
        self.phase = phase

    def _require(self, phase: Phase, what: str) -> None:
        if self.phase is not phase:
            raise PhaseViolation(f"{what} requires {phase.name}, pool is in {self.phase.name}")

    def publish(self, entry: PoolEntry) -> str:
        self._require(Phase.PUBLISH, "publish")
        if entry.entry_id in self._entries or entry.key in self._keys:
            raise DuplicateEntry(entry.entry_id)
        entry = replace(entry, published_at=self._clock())
        self._entries[entry.entry_id] = entry
        self._keys.add(entry.key)
        self._log.append(entry)
        return entry.entry_id

    def query(self, round_id: int, *, gateway_id: int | None = None,
              device_id: int | None = None) -> list[PoolEntry]:
        return [
            e for e in self._entries.values()
            if e.round_id == round_id
            and (gateway_id is None or e.gateway_id == gateway_id)
            and (device_id is None or e.device_id == device_id)
        ]

    def get(self, entry_id: str) -> PoolEntry | None:
        return self._entries.get(entry_id)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[PoolEntry]:
        return iter(self._entries.values())

    def deposit_share(self, envelope: ShareEnvelope) -> None:
        self._require(Phase.PUBLISH, "deposit_share")
        key = (envelope.entry_id, envelope.recipient_gateway)
        if key in self._envelopes:
            raise DuplicateEntry(f"envelope {key}")
        self._envelopes[key] = envelope
        self._log.append(envelope)

    def fetch_share(self, entry_id: str, recipient: int, requester: int) -> ShareEnvelope:
        if requester != recipient:
            raise AccessDenied(f"gateway {requester} may not read envelopes for gateway {recipient}")
        try:
            return self._envelopes[(entry_id, recipient)]
        except KeyError:
            raise KeyError(f"no envelope for {entry_id} -> gateway {recipient}") from None

    def fetch_shares(self, requester: int) -> list[ShareEnvelope]:
        return [env for (_, r), env in self._envelopes.items() if r == requester]

    def envelopes(self) -> list[ShareEnvelope]:
        return list(self._envelopes.values())

    def snapshot(self, encode_element: Callable) -> list[str]:
        """Canonical serialized log; later snapshots extend earlier ones."""
        out = []
        for rec in self._log:
            if isinstance(rec, PoolEntry):
                obj = {
                    "entry_id": rec.entry_id, "round_id": rec.round_id,
                    "gateway_id": rec.gateway_id, "device_id": rec.device_id,
                    "sequence": rec.sequence, "published_at": rec.published_at,
                    "commitment": encode_element(rec.commitment.element),
                    "sealed_payload": rec.sealed_payload.hex(),
                }
            else:
                obj = {
                    "entry_id": rec.entry_id, "recipient": rec.recipient_gateway,
                    "ciphertext": rec.ciphertext.hex(),
                }
            out.append(json.dumps(obj, sort_keys=True))
        return out


# Envelope encryption: AES-GCM under the recipient gateway's key. The nonce is
# derived from (entry_id, recipient), unique per key, so output is replayable.

def _nonce(entry_id: str, recipient: int) -> bytes:
    return hashlib.sha256(f"{entry_id}|{recipient}".encode()).digest()[:12]


def seal_share(key: bytes, entry_id: str, recipient: int, share: Share) -> ShareEnvelope:
    pt = json.dumps([share.index, str(share.message_part), str(share.blinding_part)]).encode()
    aad = f"{entry_id}|{recipient}".encode()
    ct = AESGCM(key).encrypt(_nonce(entry_id, recipient), pt, aad)
    return ShareEnvelope(entry_id, recipient, ct)


def open_share(key: bytes, envelope: ShareEnvelope) -> Share:
    aad = f"{envelope.entry_id}|{envelope.recipient_gateway}".encode()
    pt = AESGCM(key).decrypt(_nonce(envelope.entry_id, envelope.recipient_gateway), envelope.ciphertext, aad)
    idx, m, r = json.loads(pt)
    return Share(int(idx), int(m), int(r))
