"""Measured verifier gas for both aggregation modes over a range of arities.

    python3 scripts/gas_curve.py --ell-max 32 --out results/gas_curve.csv
"""
import argparse
import csv
import sys
from pathlib import Path

from hrng.cli import GAS_COLUMNS, gas_rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ell-max", type=int, default=32)
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()

    rows = gas_rows(1, args.ell_max)
    fh = args.out.open("w", newline="") if args.out else sys.stdout
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
    w = csv.DictWriter(fh, fieldnames=GAS_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)

    by = {(r["ell"], r["mode"]): r["total_gas"] for r in rows}
    for ell in range(1, args.ell_max + 1):
        ratio = by[(ell, "optimized")] / by[(ell, "non_optimized")]
        print(f"ell={ell:3d}  ratio={ratio:.4f}", file=sys.stderr)
    return 0 if all(r["total_gas"] == r["closed_form_gas"] for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
