"""Write tests/fixtures/tiny_group_vectors.json.

Values are computed with bare ``pow`` and hand-rolled polynomial evaluation,
not with the hrng package, so the fixture can serve as an independent check
(and as cross-check data for other implementations).
"""
import json
from pathlib import Path

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

Q, P, G, H = 23, 11, 2, 3
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "tiny_group_vectors.json"


def commit(m, r):
    return pow(G, m, Q) * pow(H, r, Q) % Q


def poly(coeffs, x):
    return sum(c * x**i for i, c in enumerate(coeffs)) % P


def main():
    vectors = {
        "group": {"modulus": Q, "order": P, "g": G, "h": H},
        "commit": [{"m": m, "r": r, "c": commit(m, r)} for m in range(P) for r in range(P)],
        "combine": [
            {"openings": [[3, 2], [4, 5]], "product": commit(3, 2) * commit(4, 5) % Q, "sum_commit": commit(7, 7)},
        ],
        "split": [
            {"p": P, "t": 2, "k": 3, "message_coeffs": [5, 3], "blinding_coeffs": [2, 7],
             "shares": [[x, poly([5, 3], x), poly([2, 7], x)] for x in (1, 2, 3)]},
            {"p": P, "t": 3, "k": 4, "message_coeffs": [9, 1, 4], "blinding_coeffs": [0, 10, 6],
             "shares": [[x, poly([9, 1, 4], x), poly([0, 10, 6], x)] for x in (1, 2, 3, 4)]},
        ],
        "bits_to_scalar": [
            {"bits": format(0xFFFF, "016b"), "p": 251, "margin": 8, "scalar": 0xFFFF % 251},
            {"bits": "0" * 16, "p": 251, "margin": 8, "scalar": 0},
        ],
        "signature": [],
    }
    for seed_byte, msg in ((0, b"hrng test vector"), (7, b"")):
        sk = bytes([seed_byte]) * 32
        key = Ed25519PrivateKey.from_private_bytes(sk)
        vectors["signature"].append({
            "scheme": "ed25519",
            "secret_key": sk.hex(),
            "public_key": key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw).hex(),
            "message": msg.hex(),
            "signature": key.sign(msg).hex(),
        })
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(vectors, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
