#!/usr/bin/env python3
"""Plot objective / accuracy-residual curves from drsplit trace CSVs.

Usage: plot_trace.py trace1.csv [trace2.csv ...] [--column objective] [--out plot.png]
"""
import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    ts, values = [], {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            ts.append(int(row["t"]))
            for key in ("objective", "eps_norm", "avg_regret"):
                values.setdefault(key, []).append(float(row[key]))
    return ts, values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("traces", nargs="+")
    ap.add_argument("--column", default="objective",
                    choices=["objective", "eps_norm", "avg_regret"])
    ap.add_argument("--out", default="trace.png")
    ap.add_argument("--logy", action="store_true")
    args = ap.parse_args()

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in args.traces:
        ts, values = load(path)
        ax.plot(ts, values[args.column], label=pathlib.Path(path).stem)
    ax.set_xlabel("iteration")
    ax.set_ylabel(args.column)
    if args.logy:
        ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
