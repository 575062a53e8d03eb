#!/usr/bin/env python3
"""Render mimosim experiment CSVs into PNG figures.

Rows sharing an experiment family ("ber-vs-snr", "mse-vs-w",
"convergence") land in one figure; each (experiment tag, scheme) pair
becomes one curve. --labels prefixes curve names per input file, which
disambiguates runs whose tags coincide (e.g. a BER sweep per antenna
count).
"""
import argparse
import collections
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path, label):
    rows = []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            rows.append(
                {
                    "experiment": row["experiment"],
                    "scheme": row["scheme"],
                    "sweep_name": row["sweep_name"],
                    "x": float(row["sweep_value"]),
                    "y": float(row["metric"]),
                    "se": float(row["stderr"]),
                    "label": label,
                }
            )
    return rows


def family(experiment):
    return experiment.split("/", 1)[0]


def curve_name(row):
    suffix = ""
    if "/" in row["experiment"]:
        suffix = row["experiment"].split("/", 1)[1]
    parts = [p for p in (row["label"], suffix, row["scheme"]) if p]
    return " ".join(parts)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csvs", nargs="+", help="experiment CSV files")
    ap.add_argument("--labels", nargs="*", default=[], help="one label per input file")
    ap.add_argument("--outdir", default=".", help="directory for the PNGs")
    args = ap.parse_args()

    rows = []
    for i, path in enumerate(args.csvs):
        label = args.labels[i] if i < len(args.labels) else ""
        rows.extend(load(path, label))

    os.makedirs(args.outdir, exist_ok=True)
    for fam in sorted({family(r["experiment"]) for r in rows}):
        fam_rows = [r for r in rows if family(r["experiment"]) == fam]
        curves = collections.defaultdict(list)
        for r in fam_rows:
            curves[curve_name(r)].append(r)

        fig, ax = plt.subplots(figsize=(6, 4.5))
        for name, pts in sorted(curves.items()):
            pts.sort(key=lambda r: r["x"])
            xs = [p["x"] for p in pts]
            ys = [p["y"] for p in pts]
            ax.plot(xs, ys, marker="o", markersize=3, label=name)

        sweep = fam_rows[0]["sweep_name"]
        ax.set_xlabel(sweep)
        if fam == "ber-vs-snr":
            ax.set_ylabel("average BER")
            ax.set_yscale("log")
        elif fam == "mse-vs-w":
            ax.set_ylabel("average MSE per user symbol")
            ax.set_yscale("log")
            ax.set_xscale("log")
        else:
            ax.set_ylabel("total MSE")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize=8)
        out = os.path.join(args.outdir, fam + ".png")
        fig.tight_layout()
        fig.savefig(out, dpi=150)
        print("wrote", out)


if __name__ == "__main__":
    main()
