"""Named, independent random sub-streams derived from one seed.

``substream(seed, "device", 2, 1)`` depends only on the seed and its labels,
so adding actors never shifts the draws of existing ones.
"""
from __future__ import annotations

import hashlib
import random


def substream(seed: int, *labels: object) -> random.Random:
    tag = "/".join([str(seed), *map(str, labels)]).encode()
    return random.Random(int.from_bytes(hashlib.sha256(tag).digest(), "big"))
