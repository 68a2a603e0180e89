"""Command-line entry point: ``hrng run | verify | gas-report | uniformity``.

Exit codes: 0 success, 1 protocol or assertion failure, 2 usage/config error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import random
import sys
from pathlib import Path

from .config import LoadedConfig, SystemConfig, load_config
from .errors import ConfigError, InvalidConfig, Rejected, RoundFailed
from .gas import VerifierMode, closed_form, price
from .protocol import run_round
from .transcript import read_records, verify_transcript
from .verifier import measure_ops

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = ("eq3", "xor", "irwin-hall", "bias", "e2e")


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


# ----------------------------------------------------------------------- run


def _add_overrides(parser: argparse.ArgumentParser) -> None:
    for f in dataclasses.fields(SystemConfig):
        if f.name == "gas_schedule":
            continue  # config file only
        flag = "--" + f.name.replace("_", "-")
        kind = str if f.name in ("group", "mode") else int
        parser.add_argument(flag, dest=f"ov_{f.name}", type=kind, default=None, metavar=f.name.upper())


def _merged_config(args: argparse.Namespace) -> LoadedConfig:
    loaded = load_config(args.config) if args.config else LoadedConfig(SystemConfig())
    overrides = {
        k[3:]: v for k, v in vars(args).items() if k.startswith("ov_") and v is not None
    }
    if overrides:
        loaded.system = loaded.system.replace(**overrides)
    return loaded


def cmd_run(args: argparse.Namespace) -> int:
    try:
        loaded = _merged_config(args)
        cfg = loaded.system.validate()
    except (ConfigError, InvalidConfig) as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE
    adv = loaded.adversary
    problems = adv.bound_violations(cfg.n_g, cfg.n_i, cfg.n_mg, cfg.n_mi)
    if problems:
        _err("warning: adversary exceeds the assumed bounds: " + "; ".join(problems))
    try:
        transcript = run_round(cfg, adv)
    except RoundFailed as exc:
        _err(f"RoundFailed: {exc}")
        return EXIT_FAIL
    except Rejected as exc:
        _err(f"request rejected: {exc}")
        return EXIT_FAIL
    transcript.write(args.out)
    print(json.dumps({
        "transcript": str(args.out),
        "final_value": str(transcript.final_value),
        "mode": cfg.mode.value,
        "ell": cfg.ell,
        "total_gas": transcript.gas_report.total_gas,
        "pool_entries": len(transcript.pool_entries),
    }))
    return EXIT_OK


# -------------------------------------------------------------------- verify


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        records = read_records(args.transcript)
    except (OSError, ValueError, UnicodeDecodeError) as exc:
        _err(f"cannot read transcript: {exc}")
        return EXIT_USAGE
    verdict = verify_transcript(records)
    if verdict:
        print(str(verdict))
        return EXIT_OK
    _err(str(verdict))
    return EXIT_FAIL


# ---------------------------------------------------------------- gas-report


GAS_COLUMNS = ("ell", "mode", "ecadd", "ecmul", "addmod", "total_gas", "closed_form_gas")


def gas_rows(ell_min: int, ell_max: int) -> list[dict]:
    rows = []
    for ell in range(ell_min, ell_max + 1):
        for mode in (VerifierMode.NON_OPTIMIZED, VerifierMode.OPTIMIZED):
            counts = measure_ops(mode, ell)
            rows.append({
                "ell": ell, "mode": mode.value,
                "ecadd": counts.ecadd, "ecmul": counts.ecmul, "addmod": counts.addmod,
                "total_gas": price(counts), "closed_form_gas": closed_form(mode, ell),
            })
    return rows


def cmd_gas_report(args: argparse.Namespace) -> int:
    if args.ell_min < 1 or args.ell_max < args.ell_min:
        _err("need 1 <= ell-min <= ell-max")
        return EXIT_USAGE
    rows = gas_rows(args.ell_min, args.ell_max)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=GAS_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    mismatches = [r for r in rows if r["total_gas"] != r["closed_form_gas"]]
    by = {(r["ell"], r["mode"]): r["total_gas"] for r in rows}
    summary = {
        "ell_min": args.ell_min,
        "ell_max": args.ell_max,
        "rows": len(rows),
        "mismatches": len(mismatches),
        "ratio_at_ell_max": by[(args.ell_max, "optimized")] / by[(args.ell_max, "non_optimized")],
    }
    if args.json:
        Path(args.json).write_text(json.dumps(summary, indent=2) + "\n")
    else:
        _err(json.dumps(summary))
    if mismatches:
        _err(f"{len(mismatches)} rows where measured gas != closed form")
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------- uniformity


def run_suite(name: str, seed: int, trials: int) -> tuple[dict, list[tuple[str, int, int]]]:
    from . import stats

    hist: list[tuple[str, int, int]] = []
    if name == "eq3":
        v = stats.sum_mod_p_uniformity_oracle(251)
        return {"passed": v.ok, "p": 251, "cases": v.cases, "detail": v.detail}, hist
    if name == "xor":
        rng = random.Random(seed)
        values = [rng.getrandbits(8) for _ in range(100)]
        v = stats.xor_uniformity_oracle(8, values)
        return {"passed": v.ok, "bit_width": 8, "cases": v.cases, "detail": v.detail}, hist
    if name == "irwin-hall":
        res = stats.irwin_hall_negative_check(2, 3, seed=seed)
        hist += [("irwin-hall/unreduced", b, c) for b, c in enumerate(res.unreduced.histogram)]
        hist += [("irwin-hall/reduced", b, c) for b, c in enumerate(res.reduced.histogram)]
        return {
            "passed": res.confirmed,
            "pmf": [str(x) for x in res.pmf],
            "unreduced": res.unreduced.to_json(),
            "reduced": res.reduced.to_json(),
        }, hist
    if name == "bias":
        bounds = [stats.reduction_bias_bound(b, 251) for b in range(8, 25)]
        ok = all(x >= y for x, y in zip(bounds, bounds[1:])) and all(b > 0 for b in bounds)
        return {"passed": ok, "p": 251, "bit_lengths": [8, 24],
                "max_deviation": [str(b) for b in bounds]}, hist
    if name == "e2e":
        cfg = SystemConfig(seed=seed)
        rep = stats.end_to_end_uniformity(cfg, trials=trials)
        hist += [("e2e", b, c) for b, c in enumerate(rep.histogram)]
        return {"passed": rep.passed, **rep.to_json()}, hist
    raise KeyError(name)


def cmd_uniformity(args: argparse.Namespace) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        _err(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}, all")
        return EXIT_USAGE
    results, hist = {}, []
    for n in names:
        results[n], h = run_suite(n, args.seed, args.trials)
        hist += h
    report = {"seed": args.seed, "suites": results, "passed": all(r["passed"] for r in results.values())}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.histogram:
        with open(args.histogram, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["suite", "bucket", "count"])
            w.writerows(hist)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hrng", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one round and write its transcript")
    run.add_argument("--config", type=Path)
    run.add_argument("--out", type=Path, default=Path("transcript.jsonl"))
    _add_overrides(run)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="check a transcript from its records alone")
    ver.add_argument("transcript", type=Path)
    ver.set_defaults(func=cmd_verify)

    gas = sub.add_parser("gas-report", help="measured vs closed-form gas per arity and mode")
    gas.add_argument("--ell-min", type=int, default=1)
    gas.add_argument("--ell-max", type=int, default=12)
    gas.add_argument("--csv", type=Path)
    gas.add_argument("--json", type=Path)
    gas.set_defaults(func=cmd_gas_report)

    uni = sub.add_parser("uniformity", help="exhaustive and chi-square uniformity checks")
    uni.add_argument("--suite", default="all")
    uni.add_argument("--seed", type=int, default=0)
    uni.add_argument("--trials", type=int, default=10_000)
    uni.add_argument("--out", type=Path)
    uni.add_argument("--histogram", type=Path)
    uni.set_defaults(func=cmd_uniformity)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
