"""Adversarial behaviours injected into a round.

Active: biased device outputs, a dApp that selects colluder entries.
Passive: devices that silently drop unfavoured numbers, gateways that
withhold their shares at reveal time.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .crypto.encoding import BitString
from .errors import InsufficientPool
from .messages import DeviceOutput, RandomRequest
from .pool import PoolEntry
from .roles import Device, device_generate


class DeviceStrategy(str, enum.Enum):
    HONEST = "honest"
    BIASED_OUTPUT = "biased_output"
    DISCARD_UNFAVORED = "discard_unfavored"


class GatewayStrategy(str, enum.Enum):
    HONEST = "honest"
    REFUSE_REVEAL = "refuse_reveal"


class DappStrategy(str, enum.Enum):
    HONEST_SELECTION = "honest_selection"
    COLLUDER_ONLY_SELECTION = "colluder_only_selection"


class KeepRule(str, enum.Enum):
    """Which freshly generated numbers a discarding device lets through."""

    ALWAYS = "always"
    NEVER = "never"
    MATCH_TARGET_PARITY = "match_target_parity"


@dataclass(frozen=True)
class AdversarySpec:
    compromised_devices: frozenset[tuple[int, int]] = frozenset()
    compromised_gateways: frozenset[int] = frozenset()
    device_strategy: DeviceStrategy = DeviceStrategy.HONEST
    gateway_strategy: GatewayStrategy = GatewayStrategy.HONEST
    dapp_strategy: DappStrategy = DappStrategy.HONEST_SELECTION
    target_value: int = 0
    keep_rule: KeepRule = KeepRule.MATCH_TARGET_PARITY
    # honest-gateway entries a colluding dApp mixes in to pass validation
    honest_mix: int = 0

    def __post_init__(self):
        object.__setattr__(self, "compromised_devices",
                           frozenset(tuple(map(int, d)) for d in self.compromised_devices))
        object.__setattr__(self, "compromised_gateways", frozenset(map(int, self.compromised_gateways)))
        object.__setattr__(self, "device_strategy", DeviceStrategy(self.device_strategy))
        object.__setattr__(self, "gateway_strategy", GatewayStrategy(self.gateway_strategy))
        object.__setattr__(self, "dapp_strategy", DappStrategy(self.dapp_strategy))
        object.__setattr__(self, "keep_rule", KeepRule(self.keep_rule))

    @classmethod
    def honest(cls) -> "AdversarySpec":
        return cls()

    def bound_violations(self, n_g: int, n_i: int, n_mg: int, n_mi: int) -> list[str]:
        """Ways this adversary exceeds the assumed corruption bounds (empty if within them)."""
        out = []
        if len(self.compromised_gateways) > n_mg:
            out.append(f"{len(self.compromised_gateways)} compromised gateways > n_mg={n_mg}")
        per_gw: dict[int, int] = {}
        for g, d in self.compromised_devices:
            if not (1 <= g <= n_g and 1 <= d <= n_i):
                out.append(f"device ({g},{d}) does not exist")
            per_gw[g] = per_gw.get(g, 0) + 1
        for g, cnt in sorted(per_gw.items()):
            if cnt > n_mi:
                out.append(f"{cnt} compromised devices at gateway {g} > n_mi={n_mi}")
        if any(not 1 <= g <= n_g for g in self.compromised_gateways):
            out.append("compromised gateway id out of range")
        return out

    def device_compromised(self, gateway_id: int, device_id: int) -> bool:
        return (gateway_id, device_id) in self.compromised_devices

    def refuses(self, gateway_id: int) -> bool:
        return (
            self.gateway_strategy is GatewayStrategy.REFUSE_REVEAL
            and gateway_id in self.compromised_gateways
        )

    def to_dict(self) -> dict:
        return {
            "compromised_devices": sorted(list(d) for d in self.compromised_devices),
            "compromised_gateways": sorted(self.compromised_gateways),
            "device_strategy": self.device_strategy.value,
            "gateway_strategy": self.gateway_strategy.value,
            "dapp_strategy": self.dapp_strategy.value,
            "target_value": str(self.target_value),
            "keep_rule": self.keep_rule.value,
            "honest_mix": self.honest_mix,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "AdversarySpec":
        obj = dict(obj)
        if "target_value" in obj:
            obj["target_value"] = int(obj["target_value"])
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown adversary fields: {sorted(unknown)}")
        return cls(**obj)


def biased_device_generate(device: Device, round_id: int, sequence: int, target: int) -> DeviceOutput:
    """Compromised TEE: emits the adversary's value, still correctly signed."""
    width = device.entropy_bits
    return device.output(round_id, sequence, BitString(target & ((1 << width) - 1), width))


def discarding_device_generate(
    device: Device, round_id: int, sequence: int, keep: KeepRule, target: int
) -> DeviceOutput | None:
    out = device_generate(device, round_id, sequence)
    if keep is KeepRule.ALWAYS:
        return out
    if keep is KeepRule.NEVER:
        return None
    return out if (out.raw_bits.value & 1) == (target & 1) else None


def refusing_gateway(gateway_id: int, request: RandomRequest) -> list:
    """A withholding gateway contributes no shares."""
    return []


def round_robin(entries: Sequence[PoolEntry], count: int) -> list[PoolEntry]:
    """Take entries one gateway at a time, each gateway's in publication order."""
    by_gw: dict[int, list[PoolEntry]] = {}
    for e in sorted(entries, key=lambda e: e.published_at):
        by_gw.setdefault(e.gateway_id, []).append(e)
    picked: list[PoolEntry] = []
    depth = 0
    while len(picked) < count and any(depth < len(v) for v in by_gw.values()):
        for g in sorted(by_gw):
            if depth < len(by_gw[g]) and len(picked) < count:
                picked.append(by_gw[g][depth])
        depth += 1
    return picked


def honest_selection(entries: Sequence[PoolEntry], ell: int, n_mg: int) -> list[PoolEntry]:
    if len(entries) < ell or len({e.gateway_id for e in entries}) < n_mg + 1:
        raise InsufficientPool(
            f"pool has {len(entries)} entries from {len({e.gateway_id for e in entries})} gateways; "
            f"need {ell} entries from {n_mg + 1}"
        )
    return round_robin(entries, ell)


def colluding_selection(
    entries: Sequence[PoolEntry], ell: int, n_mg: int, adversary: AdversarySpec
) -> list[PoolEntry]:
    """Prefer colluder-gateway entries (compromised devices first), topped up with honest ones."""
    if not adversary.compromised_gateways:
        return honest_selection(entries, ell, n_mg)
    if len(entries) < ell:
        raise InsufficientPool(f"pool has {len(entries)} entries, need {ell}")
    ordered = sorted(entries, key=lambda e: e.published_at)
    colluder = [e for e in ordered if e.gateway_id in adversary.compromised_gateways]
    colluder.sort(key=lambda e: not adversary.device_compromised(e.gateway_id, e.device_id))
    honest = [e for e in ordered if e.gateway_id not in adversary.compromised_gateways]
    n_colluder = min(len(colluder), max(ell - adversary.honest_mix, 0))
    picked = colluder[:n_colluder]
    picked += round_robin(honest, ell - len(picked))
    if len(picked) < ell:
        picked += [e for e in colluder[n_colluder:]][: ell - len(picked)]
    return picked


def select_entries(
    entries: Iterable[PoolEntry], ell: int, n_mg: int, adversary: AdversarySpec
) -> list[PoolEntry]:
    entries = list(entries)
    if adversary.dapp_strategy is DappStrategy.COLLUDER_ONLY_SELECTION:
        return colluding_selection(entries, ell, n_mg, adversary)
    return honest_selection(entries, ell, n_mg)
