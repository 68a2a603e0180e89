"""Device signatures (Ed25519 behind a scheme-agnostic interface)."""
from __future__ import annotations

import random
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey, Ed25519PublicKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

SCHEME = "ed25519"


@dataclass(frozen=True)
class KeyPair:
    secret_key: bytes
    public_key: bytes


def keygen(rng: random.Random) -> KeyPair:
    """Derive a key pair from a seeded stream (simulation only: not a CSPRNG)."""
    sk = rng.getrandbits(256).to_bytes(32, "big")
    pk = Ed25519PrivateKey.from_private_bytes(sk).public_key()
    return KeyPair(sk, pk.public_bytes(Encoding.Raw, PublicFormat.Raw))


def sign(secret_key: bytes, message: bytes) -> bytes:
    return Ed25519PrivateKey.from_private_bytes(secret_key).sign(message)


def verify_sig(public_key: bytes, message: bytes, signature: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
    except (InvalidSignature, ValueError):
        return False
    return True
