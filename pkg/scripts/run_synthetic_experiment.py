#!/usr/bin/env python3
"""Run the repeated-split accuracy grid on the synthetic dataset.

Prints a mean +/- std accuracy table per (classifier, variant, rate) plus
the per-classifier ANOVA over variants, and optionally saves the full
JSON report. Everything is seeded, so identical invocations print
identical tables.
"""

import argparse
import json
import sys
from pathlib import Path

from prs.dataset import generate_synthetic, load_dataset
from prs.evaluation import VARIANTS, run_experiment


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--manifest", help="dataset manifest; omit to synthesize")
    parser.add_argument("--n", type=int, default=40, help="segments per class")
    parser.add_argument("--len", type=int, default=2000, dest="length")
    parser.add_argument("--data-seed", type=int, default=1)
    parser.add_argument("--seed", type=int, default=1, help="experiment seed")
    parser.add_argument("--reps", type=int, default=100)
    parser.add_argument("--rates", default="0.6", help="comma-separated train rates")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--global-prep", action="store_true")
    parser.add_argument("--out", help="write the JSON report here")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    if args.manifest:
        dataset = load_dataset(args.manifest)
    else:
        dataset = generate_synthetic(args.n, args.length, seed=args.data_seed)
    rates = tuple(float(r) for r in args.rates.split(","))

    report = run_experiment(
        dataset,
        rates=rates,
        reps=args.reps,
        seed=args.seed,
        threads=args.threads,
        global_prep=args.global_prep,
    )

    print(f"dataset: {report['dataset']} ({report['n_segments']} segments)")
    print(f"reps: {report['reps']}, seed: {report['seed']}, rates: {report['rates']}")
    print()
    header = f"{'classifier':<10} {'rate':>5} " + " ".join(
        f"{v:>15}" for v in VARIANTS
    )
    print(header)
    by_key = {
        (c["classifier"], c["variant"], c["rate"]): c for c in report["cells"]
    }
    for kind in report["classifiers"]:
        for rate in report["rates"]:
            cells = [by_key[(kind, v, rate)] for v in VARIANTS]
            row = " ".join(
                f"{c['mean_accuracy']:.4f} +-{c['std_accuracy']:.4f}" for c in cells
            )
            print(f"{kind:<10} {rate:>5.2f} {row}")
    if report["anova"]:
        print()
        print("ANOVA across variants (per classifier):")
        for row in report["anova"]:
            print(
                f"  {row['classifier']:<10} rate={row['rate']:.2f} "
                f"F={row['f']} df=({row['df_between']}, {row['df_within']})"
            )

    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
        print(f"\nreport written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
