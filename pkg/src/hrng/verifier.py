"""Simulated on-chain verification: request checks and the two aggregation paths.

Every group operation and modular addition on the aggregation path goes
through :class:`MeteredGroup` / :class:`Meter`, so gas is priced from what
actually executed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .crypto.encoding import BitString, bits_to_scalar
from .crypto.groups import Group, GroupParams, tiny_group
from .crypto.pedersen import Commitment, Opening, commit, hom_combine, open_verify
from .crypto.shamir import reconstruct
from .crypto.signing import verify_sig
from .errors import HRNGError, Rejected
from .gas import GasReport, GasSchedule, OpCounts, VerifierMode, DEFAULT_SCHEDULE
from .messages import AggregationMethod, RandomRequest, RevealRecord, signed_payload
from .pool import PoolEntry

MODE_FOR_METHOD = {
    AggregationMethod.XOR: VerifierMode.NON_OPTIMIZED,
    AggregationMethod.SUM_MOD_P: VerifierMode.OPTIMIZED,
}
METHOD_FOR_MODE = {v: k for k, v in MODE_FOR_METHOD.items()}


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def accept(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def reject(cls, reason: str, detail: str | None = None) -> "Verdict":
        return cls(False, reason, detail)

    def __str__(self) -> str:
        if self.ok:
            return "accept"
        return f"reject({self.reason}{'' if self.detail is None else ': ' + self.detail})"


class Meter:
    def __init__(self):
        self.counts = OpCounts()

    def addmod(self, a: int, b: int, p: int) -> int:
        self.counts.addmod += 1
        return (a + b) % p

    def xor(self, a: BitString, b: BitString) -> BitString:
        # XOR is billed in the addmod slot, as in the published operation table
        self.counts.addmod += 1
        return a ^ b


class MeteredGroup(Group):
    """Counts ``op`` as ecadd and ``exp`` as ecmul; everything else passes through."""

    def __init__(self, inner: Group, meter: Meter):
        self.inner = inner
        self.meter = meter
        self.order = inner.order
        self.name = inner.name

    def identity(self):
        return self.inner.identity()

    def op(self, a, b):
        self.meter.counts.ecadd += 1
        return self.inner.op(a, b)

    def exp(self, a, k):
        self.meter.counts.ecmul += 1
        return self.inner.exp(a, k)

    def contains(self, a):
        return self.inner.contains(a)

    def encode(self, a):
        return self.inner.encode(a)

    def decode(self, obj):
        return self.inner.decode(obj)


@dataclass(frozen=True)
class FinalResult:
    value: Any  # int for OPTIMIZED, BitString for NON_OPTIMIZED
    mode: VerifierMode
    ops: OpCounts

    def gas_report(self, ell: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> GasReport:
        return GasReport.from_counts(self.mode, ell, self.ops, schedule)


def validate_request(
    request: RandomRequest,
    pool_view: Mapping[str, PoolEntry],
    *,
    ell: int,
    n_mg: int,
    mode: VerifierMode | None = None,
    enforce_diversity: bool = True,
) -> Verdict:
    try:
        method = AggregationMethod(request.aggregation_method)
    except ValueError:
        return Verdict.reject("UnsupportedAggregation", str(request.aggregation_method))
    if mode is not None and MODE_FOR_METHOD[method] is not VerifierMode.parse(mode):
        return Verdict.reject("ModeMismatch", f"{method.value} with {VerifierMode.parse(mode).value}")
    ids = list(request.selected_entries)
    if len(ids) != ell:
        return Verdict.reject("ArityMismatch", f"{len(ids)} entries, expected {ell}")
    if len(set(ids)) != len(ids):
        return Verdict.reject("DuplicateSelection")
    gateways = set()
    for eid in ids:
        entry = pool_view.get(eid)
        if entry is None:
            return Verdict.reject("UnpublishedEntry", eid)
        if entry.round_id != request.round_id or (
            request.requested_at >= 0 and entry.published_at >= request.requested_at
        ):
            return Verdict.reject("UnpublishedEntry", eid)
        gateways.add(entry.gateway_id)
    if enforce_diversity and len(gateways) < n_mg + 1:
        return Verdict.reject("GatewayDiversity", f"{len(gateways)} gateways, need {n_mg + 1}")
    return Verdict.accept()


def check_provenance(
    reveal: RevealRecord,
    entry: PoolEntry,
    device_key: bytes | None,
    *,
    p: int,
    t: int,
    entropy_bits: int,
    margin: int,
) -> None:
    """Off-meter checks tying an opening to a signed device output and to gateway shares."""
    eid = reveal.entry_id
    if reveal.raw_bits.length != entropy_bits:
        raise Rejected("BadRawBits", eid)
    payload = signed_payload(entry.round_id, entry.gateway_id, entry.device_id, entry.sequence, reveal.raw_bits)
    if device_key is None or not verify_sig(device_key, payload, reveal.device_signature):
        raise Rejected("BadDeviceSignature", eid)
    if bits_to_scalar(reveal.raw_bits, p, margin) != reveal.opening.message:
        raise Rejected("MessageMismatch", eid)
    contributors = [g for g, _ in reveal.contributing_shares]
    shares = [s for _, s in reveal.contributing_shares]
    if (
        len(shares) < t
        or len(set(contributors)) != len(contributors)
        or any(g != s.index for g, s in reveal.contributing_shares)
    ):
        raise Rejected("BadShares", eid)
    try:
        rebuilt = reconstruct(shares, t, p)
    except (HRNGError, ValueError):
        raise Rejected("BadShares", eid) from None
    if rebuilt != reveal.opening:
        raise Rejected("BadShares", eid)
    # every contribution must lie on the same polynomial, not just the first t
    for extra in shares[t:]:
        if reconstruct([*shares[: t - 1], extra], t, p) != reveal.opening:
            raise Rejected("BadShares", eid)


def _lookup(pool_view: Mapping[str, PoolEntry], reveals: Sequence[RevealRecord]) -> list[PoolEntry]:
    if not reveals:
        raise Rejected("EmptyAggregation")
    entries = []
    for rv in reveals:
        entry = pool_view.get(rv.entry_id)
        if entry is None:
            raise Rejected("UnpublishedEntry", rv.entry_id)
        entries.append(entry)
    return entries


def aggregate_non_optimized(
    reveals: Sequence[RevealRecord],
    pool_view: Mapping[str, PoolEntry],
    params: GroupParams,
    entropy_bits: int,
) -> FinalResult:
    """Open every commitment, then XOR the raw device bit strings."""
    entries = _lookup(pool_view, reveals)
    meter = Meter()
    mp = params.with_group(MeteredGroup(params.group, meter))
    for rv, entry in zip(reveals, entries):
        if not open_verify(mp, entry.commitment, rv.opening.reduced(params.p)):
            raise Rejected("BadOpening", rv.entry_id)
    if any(rv.raw_bits.length != entropy_bits for rv in reveals):
        raise Rejected("BadRawBits")
    acc = reveals[0].raw_bits
    for rv in reveals[1:]:
        acc = meter.xor(acc, rv.raw_bits)
    return FinalResult(acc.low(entropy_bits), VerifierMode.NON_OPTIMIZED, meter.counts)


def aggregate_optimized(
    reveals: Sequence[RevealRecord],
    pool_view: Mapping[str, PoolEntry],
    params: GroupParams,
) -> FinalResult:
    """Multiply the commitments, sum the openings mod p, and open the product once."""
    entries = _lookup(pool_view, reveals)
    p = params.p
    meter = Meter()
    mp = params.with_group(MeteredGroup(params.group, meter))
    combined = hom_combine(mp, [e.commitment for e in entries])
    M = reveals[0].opening.message % p
    R = reveals[0].opening.blinding % p
    for rv in reveals[1:]:
        M = meter.addmod(M, rv.opening.message, p)
        R = meter.addmod(R, rv.opening.blinding, p)
    if not open_verify(mp, combined, Opening(M, R)):
        # unmetered fallback to name the culprit
        for rv, entry in zip(reveals, entries):
            if not open_verify(params, entry.commitment, rv.opening.reduced(p)):
                raise Rejected("BadAggregateOpening", rv.entry_id)
        raise Rejected("BadAggregateOpening")
    return FinalResult(M, VerifierMode.OPTIMIZED, meter.counts)


def aggregate(
    mode: VerifierMode,
    reveals: Sequence[RevealRecord],
    pool_view: Mapping[str, PoolEntry],
    params: GroupParams,
    entropy_bits: int,
) -> FinalResult:
    if VerifierMode.parse(mode) is VerifierMode.NON_OPTIMIZED:
        return aggregate_non_optimized(reveals, pool_view, params, entropy_bits)
    return aggregate_optimized(reveals, pool_view, params)


def measure_ops(
    mode: VerifierMode, ell: int, params: GroupParams | None = None, seed: int = 0
) -> OpCounts:
    """Run the metered aggregation on ``ell`` synthetic, valid openings and return the counts."""
    params = params or tiny_group()
    rng = random.Random(seed)
    p = params.p
    width = p.bit_length() + 64
    reveals, view = [], {}
    for i in range(ell):
        bits = BitString(rng.getrandbits(width), width)
        op = Opening(bits.value % p, rng.randrange(p))
        eid = f"synthetic/{i}"
        view[eid] = PoolEntry(eid, 0, 1 + i, 1, 1, commit(params, op), i)
        reveals.append(RevealRecord(eid, op, (), b"", bits))
    return aggregate(mode, reveals, view, params, width).ops
