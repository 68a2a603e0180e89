import pytest

from hrng import AdversarySpec, SystemConfig, run_round, verify_transcript
from hrng.adversary import DappStrategy, DeviceStrategy, KeepRule, colluding_selection
from hrng.crypto import bits_to_scalar, verify_sig
from hrng.errors import Rejected, RoundFailed
from hrng.messages import signed_payload
from hrng.protocol import _make_devices
from hrng.adversary import biased_device_generate, discarding_device_generate

CFG = SystemConfig(n_g=4, n_i=2, n_r=2, n_mg=1, n_mi=1, t=2, k=4, ell=3)


def test_bound_violations():
    ok = AdversarySpec(compromised_gateways={1}, compromised_devices={(1, 1), (2, 1)})
    assert ok.bound_violations(4, 2, 1, 1) == []
    bad = AdversarySpec(compromised_gateways={1, 2}, compromised_devices={(1, 1), (1, 2)})
    assert len(bad.bound_violations(4, 2, 1, 1)) == 2


def test_spec_dict_roundtrip():
    adv = AdversarySpec(compromised_gateways={2}, compromised_devices={(2, 1)},
                        device_strategy="biased_output", target_value=5, honest_mix=1)
    assert AdversarySpec.from_dict(adv.to_dict()) == adv
    with pytest.raises(ValueError):
        AdversarySpec.from_dict({"gateway_strategy": "sulk"})
    with pytest.raises(ValueError):
        AdversarySpec.from_dict({"surprise": 1})


def test_biased_device_output_is_signed_target():
    dev = _make_devices(CFG)[(1, 1)]
    out = biased_device_generate(dev, 1, 1, target=0b1011)
    assert out.raw_bits.value == 0b1011 and out.raw_bits.length == CFG.bits
    assert verify_sig(dev.keys.public_key, signed_payload(1, 1, 1, 1, out.raw_bits), out.signature)


def test_discarding_device_rules():
    dev = _make_devices(CFG)[(1, 1)]
    assert discarding_device_generate(dev, 1, 1, KeepRule.NEVER, 0) is None
    assert discarding_device_generate(dev, 1, 1, KeepRule.ALWAYS, 0) is not None
    kept = [discarding_device_generate(dev, 1, s, KeepRule.MATCH_TARGET_PARITY, 1) for s in range(400)]
    survivors = [o for o in kept if o is not None]
    assert all(o.raw_bits.value & 1 for o in survivors)
    assert 150 < len(survivors) < 250


def test_always_keep_matches_honest():
    adv = AdversarySpec(compromised_devices={(1, 1)}, device_strategy="discard_unfavored", keep_rule="always")
    assert run_round(CFG, adv).final_value == run_round(CFG).final_value


def test_never_keep_device_contributes_nothing():
    adv = AdversarySpec(compromised_devices={(1, 1), (2, 1)}, device_strategy="discard_unfavored",
                        keep_rule="never")
    tr = run_round(CFG, adv)
    assert len(tr.pool_entries) == CFG.n_g * CFG.n_i * CFG.n_r - 2 * CFG.n_r
    assert all(e.device_id != 1 or e.gateway_id > 2 for e in tr.pool_entries)
    assert verify_transcript(tr)


def test_biased_device_in_selection_still_verifies():
    adv = AdversarySpec(compromised_devices={(1, 1)}, device_strategy="biased_output", target_value=3)
    tr = run_round(CFG, adv)
    assert verify_transcript(tr)
    biased = [rv for rv in tr.reveals if rv.entry_id.startswith("r1/g1/d1/")]
    assert biased and biased[0].opening.message == bits_to_scalar(biased[0].raw_bits, 11)
    assert biased[0].raw_bits.value == 3


@pytest.mark.parametrize("refusers,completes", [({1}, True), ({1, 2}, True), ({1, 2, 3}, False)])
def test_refusing_gateways(refusers, completes):
    adv = AdversarySpec(compromised_gateways=refusers, gateway_strategy="refuse_reveal")
    if completes:
        tr = run_round(CFG, adv)
        assert verify_transcript(tr)
    else:
        with pytest.raises(RoundFailed):
            run_round(CFG, adv)


def test_refuser_entries_still_opened():
    adv = AdversarySpec(compromised_gateways={1}, gateway_strategy="refuse_reveal")
    tr = run_round(CFG, adv)
    own = [rv for rv in tr.reveals if rv.entry_id.startswith("r1/g1/")]
    assert own, "gateway 1's entry is selected by round robin"
    assert all(1 not in [g for g, _ in rv.contributing_shares] for rv in own)


def test_three_gateway_two_refusers_fail():
    cfg = SystemConfig(n_g=3, k=3, n_i=1, n_r=1, n_mg=1, t=2, ell=2)
    adv = AdversarySpec(compromised_gateways={1, 2}, gateway_strategy="refuse_reveal")
    with pytest.raises(RoundFailed):
        run_round(cfg, adv)


def test_colluder_only_selection_rejected():
    adv = AdversarySpec(compromised_gateways={1}, compromised_devices={(1, 1)},
                        dapp_strategy=DappStrategy.COLLUDER_ONLY_SELECTION)
    with pytest.raises(Rejected) as exc:
        run_round(CFG.replace(ell=2), adv)
    assert exc.value.reason == "GatewayDiversity"


def test_colluder_mixing_one_honest_entry_accepted():
    adv = AdversarySpec(compromised_gateways={1}, compromised_devices={(1, 1)},
                        device_strategy=DeviceStrategy.BIASED_OUTPUT, target_value=0,
                        dapp_strategy="colluder_only_selection", honest_mix=1)
    tr = run_round(CFG, adv)
    assert verify_transcript(tr)
    ids = tr.request.selected_entries
    assert ids[:2] == ("r1/g1/d1/s1", "r1/g1/d1/s2")
    assert not ids[2].startswith("r1/g1/")


def test_colluding_without_compromised_gateways_is_honest():
    tr = run_round(CFG)
    adv = AdversarySpec(dapp_strategy="colluder_only_selection")
    assert [e.entry_id for e in colluding_selection(tr.pool_entries, 3, 1, adv)] == list(tr.request.selected_entries)
