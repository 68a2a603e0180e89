"""Sweep adversary strategies and report liveness and output uniformity.

Each scenario runs ``--trials`` seeded rounds on the p=11 test group and
prints completion counts plus a chi-square verdict over final values.

    python3 scripts/adversary_sweep.py --trials 2000
"""
import argparse
import json
import sys

from hrng import AdversarySpec, SystemConfig
from hrng.stats import end_to_end_uniformity

BASE = SystemConfig(n_g=3, k=3, n_i=2, n_r=3, n_mg=1, n_mi=1, t=2, ell=3)


def scenarios():
    yield "honest", BASE, AdversarySpec(), True
    yield "one refuser", BASE, AdversarySpec(compromised_gateways={1}, gateway_strategy="refuse_reveal"), True
    yield "two refusers (k - 2 < t)", BASE, AdversarySpec(compromised_gateways={1, 2}, gateway_strategy="refuse_reveal"), True
    yield "biased device", BASE, AdversarySpec(compromised_devices={(1, 1)}, device_strategy="biased_output"), True
    yield "discarding device", BASE, AdversarySpec(
        compromised_devices={(1, 1)}, device_strategy="discard_unfavored",
        keep_rule="match_target_parity", target_value=0), True
    yield "colluder, all-but-one fixed", BASE, AdversarySpec(
        compromised_gateways={1}, compromised_devices={(1, 1)}, device_strategy="biased_output",
        dapp_strategy="colluder_only_selection", honest_mix=1), True
    yield "colluder, all fixed", BASE, AdversarySpec(
        compromised_gateways={1}, compromised_devices={(1, 1)}, device_strategy="biased_output",
        dapp_strategy="colluder_only_selection"), True
    yield "colluder, all fixed, diversity off", BASE, AdversarySpec(
        compromised_gateways={1, 2}, compromised_devices={(1, 1), (1, 2), (2, 1), (2, 2)},
        device_strategy="biased_output", dapp_strategy="colluder_only_selection"), False


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for name, cfg, adv, enforce in scenarios():
        rep = end_to_end_uniformity(cfg.replace(seed=args.seed), adv, args.trials, enforce_diversity=enforce)
        print(json.dumps({
            "scenario": name,
            "completed": rep.sample_count,
            "failed_or_rejected": rep.failed_rounds,
            "p_value": round(rep.p_value, 6),
            "verdict": rep.verdict if rep.sample_count else "n/a",
        }))
    return 0


if __name__ == "__main__":
    sys.exit(main())
