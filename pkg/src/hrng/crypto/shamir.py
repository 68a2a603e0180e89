"""Shamir (k, t) threshold sharing over GF(p), applied to both halves of an Opening."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from ..errors import DuplicateShareIndex, FieldTooSmall, InsufficientShares, InvalidThreshold
from .pedersen import Opening


@dataclass(frozen=True)
class Share:
    index: int
    message_part: int
    blinding_part: int


@dataclass(frozen=True)
class ShareSet:
    shares: tuple[Share, ...]
    threshold_t: int
    total_k: int

    def __post_init__(self):
        if not 1 <= self.threshold_t <= self.total_k:
            raise InvalidThreshold(f"need 1 <= t <= k, got t={self.threshold_t} k={self.total_k}")
        if len(self.shares) != self.total_k:
            raise ValueError("share count does not match k")
        if len({s.index for s in self.shares}) != len(self.shares):
            raise DuplicateShareIndex("share indices must be distinct")


def eval_poly(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _check_params(t: int, k: int, p: int) -> None:
    if t < 1 or t > k:
        raise InvalidThreshold(f"need 1 <= t <= k, got t={t} k={k}")
    if k >= p:
        raise FieldTooSmall(f"k={k} evaluation points do not fit in GF({p})")


def shares_from_polynomials(
    message_coeffs: Sequence[int], blinding_coeffs: Sequence[int], k: int, p: int
) -> ShareSet:
    """Evaluate both polynomials at x = 1..k. Coefficients are constant-term first."""
    t = len(message_coeffs)
    if len(blinding_coeffs) != t:
        raise ValueError("polynomials must have equal degree")
    _check_params(t, k, p)
    shares = tuple(
        Share(x, eval_poly(message_coeffs, x, p), eval_poly(blinding_coeffs, x, p))
        for x in range(1, k + 1)
    )
    return ShareSet(shares, t, k)


def split(secret: Opening, t: int, k: int, p: int, rng: random.Random) -> ShareSet:
    _check_params(t, k, p)
    mc = [secret.message % p] + [rng.randrange(p) for _ in range(t - 1)]
    bc = [secret.blinding % p] + [rng.randrange(p) for _ in range(t - 1)]
    return shares_from_polynomials(mc, bc, k, p)


def lagrange_at_zero(xs: Sequence[int], p: int) -> list[int]:
    coeffs = []
    for i, xi in enumerate(xs):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if i != j:
                num = num * xj % p
                den = den * (xj - xi) % p
        coeffs.append(num * pow(den, -1, p) % p)
    return coeffs


def reconstruct(shares: Sequence[Share], t: int, p: int) -> Opening:
    """Interpolate at x=0 from the first ``t`` shares (any t-subset gives the same answer)."""
    if len({s.index for s in shares}) != len(shares):
        raise DuplicateShareIndex("duplicate share index")
    if len(shares) < t:
        raise InsufficientShares(f"need {t} shares, got {len(shares)}")
    if any(s.index % p == 0 for s in shares):
        raise ValueError("share index 0 is the secret itself")
    use = shares[:t]
    lam = lagrange_at_zero([s.index for s in use], p)
    m = sum(l * s.message_part for l, s in zip(lam, use)) % p
    r = sum(l * s.blinding_part for l, s in zip(lam, use)) % p
    return Opening(m, r)
