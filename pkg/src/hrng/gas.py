"""EVM gas accounting for the on-chain open/aggregate step.

Prices default to the precompile/opcode costs for alt_bn128 point addition
and scalar multiplication plus ``addmod``/``mulmod``. ``closed_form`` gives
the per-mode totals as linear functions of the aggregation arity; the
verifier's measured counts are priced with :func:`price` and must match.
"""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .errors import InvalidArity


class VerifierMode(str, enum.Enum):
    NON_OPTIMIZED = "non_optimized"
    OPTIMIZED = "optimized"

    @classmethod
    def parse(cls, text: "str | VerifierMode") -> "VerifierMode":
        if isinstance(text, cls):
            return text
        norm = str(text).strip().lower().replace("-", "_")
        for m in cls:
            if m.value == norm:
                return m
        raise ValueError(f"unknown verifier mode {text!r}")


@dataclass(frozen=True)
class GasSchedule:
    addmod_cost: int = 8
    mulmod_cost: int = 8
    ecadd_cost: int = 150
    ecmul_cost: int = 6000


DEFAULT_SCHEDULE = GasSchedule()


@dataclass
class OpCounts:
    ecadd: int = 0
    ecmul: int = 0
    addmod: int = 0
    mulmod: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)

    def __add__(self, other: "OpCounts") -> "OpCounts":
        return OpCounts(
            self.ecadd + other.ecadd,
            self.ecmul + other.ecmul,
            self.addmod + other.addmod,
            self.mulmod + other.mulmod,
        )


def price(counts: OpCounts, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    return (
        counts.ecadd * schedule.ecadd_cost
        + counts.ecmul * schedule.ecmul_cost
        + counts.addmod * schedule.addmod_cost
        + counts.mulmod * schedule.mulmod_cost
    )


def expected_counts(mode: VerifierMode, ell: int) -> OpCounts:
    """Operation calls per mode: one open per entry vs. combine-then-open-once."""
    _check_arity(ell)
    if VerifierMode.parse(mode) is VerifierMode.NON_OPTIMIZED:
        return OpCounts(ecadd=ell, ecmul=2 * ell, addmod=ell - 1)
    return OpCounts(ecadd=ell, ecmul=2, addmod=2 * (ell - 1))


def closed_form(mode: VerifierMode, ell: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    _check_arity(ell)
    if schedule != DEFAULT_SCHEDULE:
        return price(expected_counts(mode, ell), schedule)
    if VerifierMode.parse(mode) is VerifierMode.NON_OPTIMIZED:
        return 12158 * ell - 8
    return 166 * ell + 11984


def _check_arity(ell: int) -> None:
    if ell < 1:
        raise InvalidArity(f"aggregation arity must be >= 1, got {ell}")


@dataclass
class GasReport:
    mode: VerifierMode
    ell: int
    counts: OpCounts
    total_gas: int
    closed_form_gas: int
    schedule: GasSchedule = field(default_factory=GasSchedule)

    @classmethod
    def from_counts(
        cls, mode: VerifierMode, ell: int, counts: OpCounts, schedule: GasSchedule = DEFAULT_SCHEDULE
    ) -> "GasReport":
        return cls(mode, ell, counts, price(counts, schedule), closed_form(mode, ell, schedule), schedule)

    @property
    def matches_closed_form(self) -> bool:
        return self.total_gas == self.closed_form_gas

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "ell": self.ell,
            "counts": self.counts.as_dict(),
            "total_gas": self.total_gas,
            "closed_form_gas": self.closed_form_gas,
            "schedule": asdict(self.schedule),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GasReport":
        return cls(
            VerifierMode.parse(obj["mode"]),
            int(obj["ell"]),
            OpCounts(**{k: int(v) for k, v in obj["counts"].items()}),
            int(obj["total_gas"]),
            int(obj["closed_form_gas"]),
            GasSchedule(**{k: int(v) for k, v in obj["schedule"].items()}),
        )


@dataclass(frozen=True)
class ComparisonRow:
    ell: int
    gas_nonopt: int
    gas_opt: int

    @property
    def ratio(self) -> float:
        return self.gas_opt / self.gas_nonopt


def compare_report(ell_range: Iterable[int]) -> list[ComparisonRow]:
    """Closed-form gas for both modes over a range of arities."""
    ells = list(ell_range)
    if not ells:
        raise ValueError("empty arity range")
    return [
        ComparisonRow(ell, closed_form(VerifierMode.NON_OPTIMIZED, ell), closed_form(VerifierMode.OPTIMIZED, ell))
        for ell in ells
    ]
