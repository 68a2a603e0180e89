"""Round transcripts: line-delimited JSON records, each hash-chained to its predecessor.

Record shape::

    {"seq": 7, "phase": "PUBLISH", "actor": "gateway:2", "kind": "publish",
     "payload": {...}, "digest": "<sha256 hex>"}

``digest = sha256(previous_digest || canonical_json(record without digest))``.
Field and group elements are decimal strings; device bit strings are '0'/'1'
text; byte strings are hex.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .adversary import AdversarySpec
from .config import SystemConfig
from .crypto.encoding import BitString
from .crypto.pedersen import Commitment, Opening
from .crypto.shamir import Share
from .errors import HRNGError, InvalidConfig, Rejected
from .gas import GasReport
from .messages import RandomRequest, RevealRecord
from .pool import Phase, PoolEntry, ShareEnvelope, make_entry_id
from .roles import open_payload
from .verifier import FinalResult, Verdict, aggregate, check_provenance, validate_request

FORMAT_VERSION = "hrng-transcript/1"
RECORD_KEYS = {"seq", "phase", "actor", "kind", "payload", "digest"}

KIND_PHASE = {
    "config": Phase.SETUP,
    "register_device": Phase.SETUP,
    "publish": Phase.PUBLISH,
    "deposit": Phase.PUBLISH,
    "ingest_rejected": Phase.PUBLISH,
    "request": Phase.REQUEST,
    "request_validation": Phase.REQUEST,
    "share": Phase.RESPOND,
    "reveal": Phase.RESPOND,
    "final": Phase.CONSTRUCT,
}


def canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def chain_digest(prev: str, body: Mapping) -> str:
    return hashlib.sha256((prev + canonical(body)).encode()).hexdigest()


class TranscriptWriter:
    def __init__(self):
        self.records: list[dict] = []
        self._prev = ""

    @property
    def next_seq(self) -> int:
        return len(self.records)

    def emit(self, phase: Phase, actor: str, kind: str, payload: dict) -> dict:
        body = {"seq": self.next_seq, "phase": phase.name, "actor": actor, "kind": kind, "payload": payload}
        body["digest"] = chain_digest(self._prev, body)
        self._prev = body["digest"]
        self.records.append(body)
        return body


def encode_entry(entry: PoolEntry, encode_element) -> dict:
    return {
        "entry_id": entry.entry_id,
        "round_id": entry.round_id,
        "gateway_id": entry.gateway_id,
        "device_id": entry.device_id,
        "sequence": entry.sequence,
        "commitment": encode_element(entry.commitment.element),
        "sealed_payload": entry.sealed_payload.hex(),
        "published_at": entry.published_at,
    }


def encode_value(value) -> str:
    return str(value)


@dataclass
class RoundTranscript:
    config: SystemConfig
    adversary: AdversarySpec
    pool_entries: list[PoolEntry]
    share_envelopes: list[ShareEnvelope]
    request: RandomRequest
    reveals: list[RevealRecord]
    result: FinalResult
    gas_report: GasReport
    message_counters: dict[str, int]
    offchain_ops: dict[str, int]
    flags: list[dict] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)

    @property
    def final_value(self):
        return self.result.value

    def to_jsonl(self) -> str:
        return "".join(canonical(r) + "\n" for r in self.records)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())


def read_records(path: str | Path) -> list[dict]:
    """Parse a transcript file; raises ValueError on undecodable content."""
    lines = Path(path).read_text().splitlines()
    records = []
    for n, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {n}: {exc.msg}") from None
        if not isinstance(rec, dict):
            raise ValueError(f"line {n}: record is not an object")
        records.append(rec)
    if not records:
        raise ValueError("empty transcript")
    return records


def count_messages(records: Sequence[Mapping]) -> tuple[dict[str, int], dict[str, int]]:
    """Per-phase message counters and off-chain operation counts implied by the records."""
    kinds: dict[str, int] = {}
    for r in records:
        kinds[r["kind"]] = kinds.get(r["kind"], 0) + 1
    k = lambda name: kinds.get(name, 0)  # noqa: E731
    messages = {
        "device_to_gateway": k("publish") + k("ingest_rejected"),
        "publish": k("publish"),
        "share_distribution": k("deposit"),
        "request": k("request"),
        "share_reveal": k("share"),
        "reveal": k("reveal"),
    }
    ops = {"commit": k("publish"), "split": k("publish"), "reconstruct": k("reveal")}
    return messages, ops


# ---------------------------------------------------------------- verification


def verify_transcript(transcript: RoundTranscript | Sequence[Mapping]) -> Verdict:
    """Re-run every public check from the records alone."""
    records = transcript.records if isinstance(transcript, RoundTranscript) else transcript
    try:
        _verify(list(records))
    except Rejected as rej:
        return Verdict.reject(rej.reason, rej.detail)
    except InvalidConfig as exc:
        return Verdict.reject("InvalidConfig", str(exc))
    except (HRNGError, KeyError, TypeError, ValueError, AttributeError, IndexError) as exc:
        return Verdict.reject("Malformed", f"{type(exc).__name__}: {exc}")
    return Verdict.accept()


def _expect(cond: bool, reason: str, detail: Any = None) -> None:
    if not cond:
        raise Rejected(reason, None if detail is None else str(detail))


def _int(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected int, got {v!r}")
    return v


def _dec(v: Any, p: int) -> int:
    if not isinstance(v, str) or not v.isdigit():
        raise TypeError(f"expected decimal string, got {v!r}")
    x = int(v)
    if x >= p or str(x) != v:
        raise ValueError(f"non-canonical field element {v!r}")
    return x


def _hex(v: Any) -> bytes:
    if not isinstance(v, str) or v != v.lower():
        raise TypeError(f"expected lowercase hex, got {v!r}")
    return bytes.fromhex(v)


def _verify(records: list[Mapping]) -> None:
    _expect(bool(records), "Empty")
    prev = ""
    last_phase = Phase.SETUP
    for i, rec in enumerate(records):
        _expect(isinstance(rec, Mapping) and set(rec) == RECORD_KEYS, "MalformedRecord", i)
        _expect(rec["seq"] == i and isinstance(rec["seq"], int), "SequenceGap", i)
        body = {k: v for k, v in rec.items() if k != "digest"}
        _expect(rec["digest"] == chain_digest(prev, body), "DigestMismatch", i)
        prev = rec["digest"]
        kind = rec["kind"]
        _expect(kind in KIND_PHASE, "UnknownKind", i)
        phase = KIND_PHASE[kind]
        _expect(rec["phase"] == phase.name, "PhaseMismatch", i)
        _expect(phase >= last_phase, "PhaseOrder", i)
        last_phase = phase
        _expect(isinstance(rec["payload"], dict), "MalformedRecord", i)

    header = records[0]
    _expect(header["kind"] == "config" and header["actor"] == "simulator", "MissingHeader")
    hp = header["payload"]
    _expect(hp.get("format") == FORMAT_VERSION, "UnsupportedFormat", hp.get("format"))
    _expect(set(hp) == {"format", "config", "adversary", "group", "within_assumptions"}, "MalformedHeader")
    cfg = SystemConfig.from_dict(hp["config"]).validate()
    _expect(canonical(cfg.to_dict()) == canonical(hp["config"]), "MalformedHeader", "config")
    adv = AdversarySpec.from_dict(hp["adversary"])
    _expect(canonical(adv.to_dict()) == canonical(hp["adversary"]), "MalformedHeader", "adversary")
    params = cfg.params
    grp = params.group
    p = params.p
    _expect(hp["group"] == params.description, "MalformedHeader", "group")
    within = not adv.bound_violations(cfg.n_g, cfg.n_i, cfg.n_mg, cfg.n_mi)
    _expect(hp["within_assumptions"] is within, "MalformedHeader", "within_assumptions")

    device_keys: dict[tuple[int, int], bytes] = {}
    entries: dict[str, PoolEntry] = {}
    slots: set[tuple[int, int, int]] = set()
    flagged: set[tuple[int, int, int]] = set()
    recipients: dict[str, set[int]] = {}
    request: RandomRequest | None = None
    validated = False
    shares: dict[str, list[tuple[int, Share]]] = {}
    reveals: list[RevealRecord] = []
    final = None

    def slot_ok(g: int, d: int, s: int) -> bool:
        return 1 <= g <= cfg.n_g and 1 <= d <= cfg.n_i and 1 <= s <= cfg.n_r

    for rec in records[1:]:
        i, kind, actor, pl = rec["seq"], rec["kind"], rec["actor"], rec["payload"]
        _expect(final is None, "RecordAfterFinal", i)
        if kind == "config":
            raise Rejected("DuplicateHeader", i)

        elif kind == "register_device":
            _expect(set(pl) == {"gateway_id", "device_id", "public_key"}, "MalformedRecord", i)
            g, d = _int(pl["gateway_id"]), _int(pl["device_id"])
            _expect(1 <= g <= cfg.n_g and 1 <= d <= cfg.n_i and (g, d) not in device_keys, "BadRegistration", i)
            _expect(actor == f"device:{g}:{d}", "ActorMismatch", i)
            key = _hex(pl["public_key"])
            _expect(len(key) == 32, "BadRegistration", i)
            device_keys[(g, d)] = key

        elif kind == "publish":
            _expect(set(pl) == {"entry_id", "round_id", "gateway_id", "device_id", "sequence",
                                "commitment", "sealed_payload", "published_at"}, "MalformedRecord", i)
            g, d, s = _int(pl["gateway_id"]), _int(pl["device_id"]), _int(pl["sequence"])
            _expect(actor == f"gateway:{g}", "ActorMismatch", i)
            _expect(_int(pl["round_id"]) == cfg.round_id and slot_ok(g, d, s), "BadEntry", i)
            eid = make_entry_id(cfg.round_id, g, d, s)
            _expect(pl["entry_id"] == eid and eid not in entries, "BadEntry", i)
            _expect(_int(pl["published_at"]) == i, "BadTimestamp", i)
            _expect((g, d) in device_keys, "UnregisteredDevice", i)
            element = grp.decode(pl["commitment"])
            sealed = _hex(pl["sealed_payload"])
            entries[eid] = PoolEntry(eid, cfg.round_id, g, d, s, Commitment(element), sealed, i)
            slots.add((g, d, s))

        elif kind == "deposit":
            _expect(set(pl) == {"entry_id", "recipient", "ciphertext"}, "MalformedRecord", i)
            eid, r = pl["entry_id"], _int(pl["recipient"])
            _expect(eid in entries, "UnpublishedEntry", i)
            _expect(actor == f"gateway:{entries[eid].gateway_id}", "ActorMismatch", i)
            _expect(1 <= r <= cfg.k and r not in recipients.setdefault(eid, set()), "BadEnvelope", i)
            _expect(len(_hex(pl["ciphertext"])) > 16, "BadEnvelope", i)
            recipients[eid].add(r)

        elif kind == "ingest_rejected":
            _expect(set(pl) == {"gateway_id", "device_id", "sequence", "reason"}, "MalformedRecord", i)
            g, d, s = _int(pl["gateway_id"]), _int(pl["device_id"]), _int(pl["sequence"])
            _expect(actor == f"gateway:{g}" and slot_ok(g, d, s), "BadFlag", i)
            _expect(pl["reason"] == "BadDeviceSignature" and (g, d, s) not in flagged, "BadFlag", i)
            flagged.add((g, d, s))

        elif kind == "request":
            _expect(request is None and actor == "dapp", "BadRequest", i)
            _expect(set(pl) == {"request_id", "round_id", "selected_entries", "aggregation_method",
                                "requester", "requested_at"}, "MalformedRecord", i)
            _expect(pl["request_id"] == f"req/{cfg.round_id}" and pl["requester"] == "dapp", "BadRequest", i)
            _expect(_int(pl["requested_at"]) == i and _int(pl["round_id"]) == cfg.round_id, "BadRequest", i)
            sel = pl["selected_entries"]
            _expect(isinstance(sel, list) and all(isinstance(e, str) for e in sel), "BadRequest", i)
            request = RandomRequest(pl["request_id"], cfg.round_id, tuple(sel),
                                    pl["aggregation_method"], pl["requester"], i)
            verdict = validate_request(request, entries, ell=cfg.ell, n_mg=cfg.n_mg, mode=cfg.mode)
            if not verdict:
                raise Rejected(verdict.reason, verdict.detail)

        elif kind == "request_validation":
            _expect(request is not None and not validated and actor == "chain", "BadValidation", i)
            _expect(pl == {"verdict": "accept"}, "BadValidation", i)
            validated = True

        elif kind == "share":
            _expect(validated, "ShareBeforeRequest", i)
            _expect(set(pl) == {"entry_id", "gateway_id", "index", "message_part", "blinding_part"},
                    "MalformedRecord", i)
            eid, g = pl["entry_id"], _int(pl["gateway_id"])
            _expect(eid in request.selected_entries and len(reveals) < cfg.ell
                    and eid == request.selected_entries[len(reveals)], "BadShare", i)
            _expect(actor == f"gateway:{g}" and _int(pl["index"]) == g and 1 <= g <= cfg.k, "BadShare", i)
            got = shares.setdefault(eid, [])
            _expect(g not in {x for x, _ in got}, "BadShare", i)
            got.append((g, Share(g, _dec(pl["message_part"], p), _dec(pl["blinding_part"], p))))

        elif kind == "reveal":
            _expect(validated and actor == "gateways", "BadReveal", i)
            _expect(set(pl) == {"entry_id", "message", "blinding", "contributors", "raw_bits",
                                "device_signature"}, "MalformedRecord", i)
            eid = pl["entry_id"]
            _expect(len(reveals) < cfg.ell and eid == request.selected_entries[len(reveals)], "BadReveal", i)
            contrib = shares.get(eid, [])
            _expect(pl["contributors"] == [g for g, _ in contrib], "BadReveal", i)
            rv = RevealRecord(
                eid,
                Opening(_dec(pl["message"], p), _dec(pl["blinding"], p)),
                tuple(contrib),
                _hex(pl["device_signature"]),
                BitString.parse(pl["raw_bits"]),
            )
            entry = entries[eid]
            check_provenance(rv, entry, device_keys.get((entry.gateway_id, entry.device_id)),
                             p=p, t=cfg.t, entropy_bits=cfg.bits, margin=cfg.margin_bits)
            _expect(open_payload(rv.opening, eid, entry.sealed_payload) == (rv.raw_bits, rv.device_signature),
                    "PayloadMismatch", eid)
            reveals.append(rv)

        elif kind == "final":
            _expect(actor == "chain" and len(reveals) == cfg.ell, "BadFinal", i)
            _expect(set(pl) == {"mode", "value", "gas_report", "message_counters", "offchain_ops"},
                    "MalformedRecord", i)
            _expect(pl["mode"] == cfg.mode.value, "ModeMismatch", i)
            result = aggregate(cfg.mode, reveals, entries, params, cfg.bits)
            _expect(pl["value"] == encode_value(result.value), "FinalValueMismatch", i)
            report = result.gas_report(cfg.ell, cfg.gas_schedule)
            _expect(report.matches_closed_form, "GasFormulaMismatch", i)
            _expect(canonical(pl["gas_report"]) == canonical(report.to_json()), "GasReportMismatch", i)
            messages, ops = count_messages(records[: i])
            _expect(canonical(pl["message_counters"]) == canonical(messages), "CounterMismatch", i)
            _expect(canonical(pl["offchain_ops"]) == canonical(ops), "CounterMismatch", i)
            final = result

    _expect(final is not None, "MissingFinal")
    _expect(len(device_keys) == cfg.n_g * cfg.n_i, "MissingRegistration")
    _expect(not (slots & flagged), "BadFlag")
    for eid in entries:
        _expect(recipients.get(eid) == set(range(1, cfg.k + 1)), "MissingEnvelope", eid)
