"""Pedersen commitments ``c = g^m * h^r`` and their homomorphic product."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from ..errors import EmptyAggregation
from .groups import GroupParams


@dataclass(frozen=True)
class Opening:
    message: int
    blinding: int

    def reduced(self, p: int) -> "Opening":
        return Opening(self.message % p, self.blinding % p)


@dataclass(frozen=True)
class Commitment:
    element: Any


def commit(params: GroupParams, opening: Opening) -> Commitment:
    grp = params.group
    gm = grp.exp(params.generator_g, opening.message)
    hr = grp.exp(params.generator_h, opening.blinding)
    return Commitment(grp.op(gm, hr))


def open_verify(params: GroupParams, c: Commitment, opening: Opening) -> bool:
    return commit(params, opening).element == c.element


def hom_combine(params: GroupParams, commitments: Iterable[Commitment]) -> Commitment:
    """Group product of the commitments: a commitment to the summed openings."""
    it = iter(commitments)
    try:
        acc = next(it).element
    except StopIteration:
        raise EmptyAggregation("cannot combine an empty list of commitments") from None
    grp = params.group
    for c in it:
        acc = grp.op(acc, c.element)
    return Commitment(acc)
