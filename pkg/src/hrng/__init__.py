"""Hybrid verifiable random-number generation: device entropy, gateway commitments,
threshold reveal and metered on-chain aggregation, as a deterministic simulation."""
from .adversary import AdversarySpec, DappStrategy, DeviceStrategy, GatewayStrategy, KeepRule
from .config import SystemConfig, load_config
from .gas import GasReport, GasSchedule, OpCounts, VerifierMode, closed_form, price
from .protocol import run_round, verify_transcript
from .transcript import RoundTranscript

__all__ = [
    "AdversarySpec",
    "DappStrategy",
    "DeviceStrategy",
    "GasReport",
    "GasSchedule",
    "GatewayStrategy",
    "KeepRule",
    "OpCounts",
    "RoundTranscript",
    "SystemConfig",
    "VerifierMode",
    "closed_form",
    "load_config",
    "price",
    "run_round",
    "verify_transcript",
]
