"""Round orchestration: PUBLISH -> REQUEST -> RESPOND -> CONSTRUCT.

A single driver walks the phases in order, writing one transcript record per
event. Everything random comes from named sub-streams of ``config.seed``, so
equal inputs give byte-identical transcripts.
"""
from __future__ import annotations

from typing import Mapping, Sequence

from .adversary import (
    AdversarySpec,
    DeviceStrategy,
    biased_device_generate,
    discarding_device_generate,
    refusing_gateway,
    select_entries,
)
from .config import SystemConfig
from .crypto.groups import GroupParams
from .crypto.shamir import Share, reconstruct
from .crypto.signing import keygen
from .errors import Rejected, RoundFailed
from .messages import DeviceOutput, RandomRequest, RevealRecord
from .pool import InMemoryPool, Phase, PoolEntry, open_share
from .rng import substream
from .roles import Device, Gateway, device_generate, gateway_process, open_payload
from .transcript import (
    FORMAT_VERSION,
    RoundTranscript,
    TranscriptWriter,
    count_messages,
    encode_entry,
    encode_value,
    verify_transcript,
)
from .verifier import aggregate, check_provenance, validate_request

__all__ = [
    "SystemConfig",
    "build_request",
    "respond_to_request",
    "run_round",
    "verify_transcript",
]


def _make_devices(cfg: SystemConfig) -> dict[tuple[int, int], Device]:
    devices = {}
    for g in range(1, cfg.n_g + 1):
        for d in range(1, cfg.n_i + 1):
            keys = keygen(substream(cfg.seed, "device-key", g, d))
            rng = substream(cfg.seed, "device", cfg.round_id, g, d)
            devices[(g, d)] = Device(g, d, keys, cfg.bits, rng)
    return devices


def _make_gateways(cfg: SystemConfig) -> dict[int, Gateway]:
    return {
        g: Gateway(
            g,
            substream(cfg.seed, "gateway-key", g).getrandbits(256).to_bytes(32, "big"),
            substream(cfg.seed, "gateway", cfg.round_id, g),
        )
        for g in range(1, cfg.n_g + 1)
    }


def _device_output(dev: Device, cfg: SystemConfig, seq: int, adv: AdversarySpec) -> DeviceOutput | None:
    if not adv.device_compromised(dev.gateway_id, dev.device_id):
        return device_generate(dev, cfg.round_id, seq)
    if adv.device_strategy is DeviceStrategy.BIASED_OUTPUT:
        return biased_device_generate(dev, cfg.round_id, seq, adv.target_value)
    if adv.device_strategy is DeviceStrategy.DISCARD_UNFAVORED:
        return discarding_device_generate(dev, cfg.round_id, seq, adv.keep_rule, adv.target_value)
    return device_generate(dev, cfg.round_id, seq)


def build_request(
    pool_entries: Sequence[PoolEntry], cfg: SystemConfig, adversary: AdversarySpec, requested_at: int = -1
) -> RandomRequest:
    """The dApp's request: which entries, and how to combine them."""
    picked = select_entries(pool_entries, cfg.ell, cfg.n_mg, adversary)
    return RandomRequest(
        request_id=f"req/{cfg.round_id}",
        round_id=cfg.round_id,
        selected_entries=tuple(e.entry_id for e in picked),
        aggregation_method=cfg.method.value,
        requester="dapp",
        requested_at=requested_at,
    )


def respond_to_request(
    gateways: Mapping[int, Gateway],
    request: RandomRequest,
    pool: InMemoryPool,
    cfg: SystemConfig,
    adversary: AdversarySpec,
    on_share=None,
) -> list[RevealRecord]:
    """Collect ``t`` shares per selected entry from willing gateways and reconstruct each opening."""
    p = cfg.p
    reveals = []
    for eid in request.selected_entries:
        contributed: list[tuple[int, Share]] = []
        for g in sorted(gateways):
            if len(contributed) == cfg.t:
                break
            if adversary.refuses(g):
                refusing_gateway(g, request)
                continue
            env = pool.fetch_share(eid, recipient=g, requester=g)
            share = open_share(gateways[g].enc_key, env)
            contributed.append((g, share))
            if on_share is not None:
                on_share(eid, g, share)
        if len(contributed) < cfg.t:
            raise RoundFailed(f"{eid}: {len(contributed)} of t={cfg.t} shares available")
        opening = reconstruct([s for _, s in contributed], cfg.t, p)
        entry = pool.get(eid)
        payload = open_payload(opening, eid, entry.sealed_payload)
        if payload is None:
            raise RoundFailed(f"{eid}: reconstructed opening does not unlock the device payload")
        raw_bits, signature = payload
        reveals.append(RevealRecord(eid, opening, tuple(contributed), signature, raw_bits))
    return reveals


def run_round(
    config: SystemConfig,
    adversary: AdversarySpec | None = None,
    *,
    enforce_diversity: bool = True,
) -> RoundTranscript:
    """Run one full round and return its transcript.

    ``enforce_diversity=False`` disables the gateway-diversity rule on the
    chain side; it exists only as a negative control for the statistics
    suite, and transcripts produced that way will not verify.

    Raises InvalidConfig, RoundFailed (too few shares) or Rejected (the chain
    refused the dApp's request).
    """
    cfg = config.validate()
    adv = adversary or AdversarySpec()
    params: GroupParams = cfg.params
    grp = params.group
    w = TranscriptWriter()
    pool = InMemoryPool(clock=lambda: w.next_seq)

    w.emit(Phase.SETUP, "simulator", "config", {
        "format": FORMAT_VERSION,
        "config": cfg.to_dict(),
        "adversary": adv.to_dict(),
        "group": params.description,
        "within_assumptions": not adv.bound_violations(cfg.n_g, cfg.n_i, cfg.n_mg, cfg.n_mi),
    })
    devices = _make_devices(cfg)
    gateways = _make_gateways(cfg)
    device_keys = {gd: dev.keys.public_key for gd, dev in devices.items()}
    gateway_keys = {g: gw.enc_key for g, gw in gateways.items()}
    for (g, d), dev in devices.items():
        w.emit(Phase.SETUP, f"device:{g}:{d}", "register_device",
               {"gateway_id": g, "device_id": d, "public_key": dev.keys.public_key.hex()})

    # PUBLISH
    pool.advance(Phase.PUBLISH)
    flags: list[dict] = []
    for g, gw in gateways.items():
        outputs = []
        for d in range(1, cfg.n_i + 1):
            for seq in range(1, cfg.n_r + 1):
                out = _device_output(devices[(g, d)], cfg, seq, adv)
                if out is not None:
                    outputs.append(out)
        batch = gateway_process(gw, outputs, round_id=cfg.round_id, params=params,
                                device_keys=device_keys, gateway_keys=gateway_keys,
                                t=cfg.t, k=cfg.k, margin=cfg.margin_bits)
        for flag in batch.flags:
            flags.append(flag)
            w.emit(Phase.PUBLISH, f"gateway:{g}", "ingest_rejected", flag)
        by_entry: dict[str, list] = {}
        for env in batch.envelopes:
            by_entry.setdefault(env.entry_id, []).append(env)
        for entry in batch.entries:
            pool.publish(entry)
            w.emit(Phase.PUBLISH, f"gateway:{g}", "publish", encode_entry(pool.get(entry.entry_id), grp.encode))
            for env in by_entry[entry.entry_id]:
                pool.deposit_share(env)
                w.emit(Phase.PUBLISH, f"gateway:{g}", "deposit", {
                    "entry_id": env.entry_id, "recipient": env.recipient_gateway,
                    "ciphertext": env.ciphertext.hex()})

    # REQUEST
    pool.advance(Phase.REQUEST)
    entries = pool.query(cfg.round_id)
    request = build_request(entries, cfg, adv, requested_at=w.next_seq)
    w.emit(Phase.REQUEST, "dapp", "request", {
        "request_id": request.request_id,
        "round_id": request.round_id,
        "selected_entries": list(request.selected_entries),
        "aggregation_method": request.aggregation_method,
        "requester": request.requester,
        "requested_at": request.requested_at,
    })
    view = {e.entry_id: e for e in entries}
    verdict = validate_request(request, view, ell=cfg.ell, n_mg=cfg.n_mg, mode=cfg.mode,
                               enforce_diversity=enforce_diversity)
    if not verdict:
        raise Rejected(verdict.reason, verdict.detail)
    w.emit(Phase.REQUEST, "chain", "request_validation", {"verdict": "accept"})

    # RESPOND
    pool.advance(Phase.RESPOND)

    def on_share(eid: str, g: int, share: Share) -> None:
        w.emit(Phase.RESPOND, f"gateway:{g}", "share", {
            "entry_id": eid, "gateway_id": g, "index": share.index,
            "message_part": str(share.message_part), "blinding_part": str(share.blinding_part)})

    reveals = []
    for eid in request.selected_entries:
        sub = RandomRequest(request.request_id, request.round_id, (eid,), request.aggregation_method,
                            request.requester, request.requested_at)
        rv = respond_to_request(gateways, sub, pool, cfg, adv, on_share)[0]
        reveals.append(rv)
        w.emit(Phase.RESPOND, "gateways", "reveal", {
            "entry_id": rv.entry_id,
            "message": str(rv.opening.message),
            "blinding": str(rv.opening.blinding),
            "contributors": [g for g, _ in rv.contributing_shares],
            "raw_bits": str(rv.raw_bits),
            "device_signature": rv.device_signature.hex(),
        })

    # CONSTRUCT
    pool.advance(Phase.CONSTRUCT)
    for rv in reveals:
        entry = view[rv.entry_id]
        check_provenance(rv, entry, device_keys.get((entry.gateway_id, entry.device_id)),
                         p=params.p, t=cfg.t, entropy_bits=cfg.bits, margin=cfg.margin_bits)
    result = aggregate(cfg.mode, reveals, view, params, cfg.bits)
    report = result.gas_report(cfg.ell, cfg.gas_schedule)
    messages, ops = count_messages(w.records)
    w.emit(Phase.CONSTRUCT, "chain", "final", {
        "mode": cfg.mode.value,
        "value": encode_value(result.value),
        "gas_report": report.to_json(),
        "message_counters": messages,
        "offchain_ops": ops,
    })
    return RoundTranscript(
        config=cfg,
        adversary=adv,
        pool_entries=entries,
        share_envelopes=pool.envelopes(),
        request=request,
        reveals=reveals,
        result=result,
        gas_report=report,
        message_counters=messages,
        offchain_ops=ops,
        flags=flags,
        records=w.records,
    )
