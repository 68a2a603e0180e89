"""System configuration and the YAML config-file format.

A config file has two optional top-level sections::

    system:
      n_g: 4
      n_i: 2
      ...
    adversary:
      compromised_gateways: [1]
      gateway_strategy: refuse_reveal
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import yaml

from .adversary import AdversarySpec
from .crypto.encoding import DEFAULT_MARGIN_BITS, min_entropy_bits
from .crypto.groups import GROUPS, GroupParams, group_by_name
from .errors import ConfigError, InvalidConfig
from .gas import DEFAULT_SCHEDULE, GasSchedule, VerifierMode
from .messages import AggregationMethod


@dataclass(frozen=True)
class SystemConfig:
    n_g: int = 4            # gateways
    n_i: int = 2            # devices per gateway
    n_r: int = 1            # numbers per device per round
    n_mg: int = 1           # assumed bound on compromised gateways
    n_mi: int = 0           # assumed bound on compromised devices per gateway
    t: int = 2              # reconstruction threshold
    k: int = 4              # shares per secret (= n_g)
    ell: int = 3            # aggregation arity
    group: str = "tiny"
    entropy_bits: int | None = None  # None: ceil(log2 p) + margin_bits
    margin_bits: int = DEFAULT_MARGIN_BITS
    mode: VerifierMode = VerifierMode.OPTIMIZED
    round_id: int = 1
    seed: int = 0
    gas_schedule: GasSchedule = DEFAULT_SCHEDULE

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", VerifierMode.parse(self.mode))
        except ValueError as exc:
            raise InvalidConfig(str(exc)) from None
        if isinstance(self.gas_schedule, dict):
            try:
                object.__setattr__(self, "gas_schedule", GasSchedule(**self.gas_schedule))
            except TypeError as exc:
                raise InvalidConfig(f"gas_schedule: {exc}") from None

    @cached_property
    def params(self) -> GroupParams:
        return group_by_name(self.group)

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def bits(self) -> int:
        if self.entropy_bits is not None:
            return self.entropy_bits
        return min_entropy_bits(self.p, self.margin_bits)

    @property
    def method(self) -> AggregationMethod:
        if self.mode is VerifierMode.NON_OPTIMIZED:
            return AggregationMethod.XOR
        return AggregationMethod.SUM_MOD_P

    def violations(self) -> list[str]:
        out = []
        ints = [f.name for f in dataclasses.fields(self) if f.type in ("int",)]
        for name in ints:
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                out.append(f"{name} must be an integer")
        if out:
            return out
        if self.group not in GROUPS:
            return [f"unknown group {self.group!r}"]
        if min(self.n_g, self.n_i, self.n_r, self.ell) < 1:
            out.append("n_g, n_i, n_r and ell must be >= 1")
        if self.n_mg < 0 or self.n_mi < 0:
            out.append("corruption bounds must be >= 0")
        if not self.n_mg < self.n_g:
            out.append(f"need n_mg < n_g ({self.n_mg} >= {self.n_g})")
        if not self.n_mi < self.n_i:
            out.append(f"need n_mi < n_i ({self.n_mi} >= {self.n_i})")
        if not self.n_mg < self.t <= self.n_g - self.n_mg:
            out.append(f"need n_mg < t <= n_g - n_mg (n_mg={self.n_mg}, t={self.t}, n_g={self.n_g})")
        if self.k != self.n_g:
            out.append(f"need k = n_g ({self.k} != {self.n_g})")
        if not self.t <= self.k:
            out.append(f"need t <= k ({self.t} > {self.k})")
        if self.ell < self.n_mg + 1:
            out.append(f"need ell >= n_mg + 1 ({self.ell} < {self.n_mg + 1})")
        if self.margin_bits < 0:
            out.append("margin_bits must be >= 0")
        costs = dataclasses.asdict(self.gas_schedule)
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in costs.values()):
            out.append("gas_schedule costs must be non-negative integers")
        if not out:
            if self.k >= self.p:
                out.append(f"k={self.k} must be < p={self.p}")
            if self.bits < min_entropy_bits(self.p, self.margin_bits):
                out.append(f"entropy_bits={self.bits} < ceil(log2 p) + margin = {min_entropy_bits(self.p, self.margin_bits)}")
        return out

    def validate(self) -> "SystemConfig":
        problems = self.violations()
        if problems:
            raise InvalidConfig("; ".join(problems))
        return self

    def replace(self, **changes: Any) -> "SystemConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        d["mode"] = self.mode.value
        d["gas_schedule"] = dataclasses.asdict(self.gas_schedule)
        return d

    @classmethod
    def from_dict(cls, obj: dict) -> "SystemConfig":
        unknown = set(obj) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise InvalidConfig(f"unknown config fields: {sorted(unknown)}")
        return cls(**obj)


@dataclass
class LoadedConfig:
    system: SystemConfig
    adversary: AdversarySpec = field(default_factory=AdversarySpec)


def load_config(path: str | Path) -> LoadedConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def parse_config(text: str, source: str = "<config>") -> LoadedConfig:
    try:
        doc = yaml.safe_load(text) or {}
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise ConfigError(f"{where}: {exc.problem}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if not isinstance(doc, dict) or set(doc) - {"system", "adversary"}:
        raise ConfigError(f"{source}: top level must be a mapping with 'system' and/or 'adversary'")
    try:
        system = SystemConfig.from_dict(doc.get("system") or {})
        adversary = AdversarySpec.from_dict(doc.get("adversary") or {})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return LoadedConfig(system, adversary)


def dump_config(cfg: LoadedConfig) -> str:
    return yaml.safe_dump({"system": cfg.system.to_dict(), "adversary": cfg.adversary.to_dict()}, sort_keys=False)
