#!/usr/bin/env python3
"""Render the figure CSVs written by `fkink kink --figure1/--figure3` and `fkink sweep`."""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def load(path):
    return pd.read_csv(path, comment="#")


def loglog(csv, png, title):
    t = load(csv)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(t["log_x"], t["log_defect"], label="log(1 - phi)")
    ax.plot(t["log_x"], t["log_asymptote"], "--", label="log asymptote")
    ax.set_xlabel("log x")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png, dpi=150)
    plt.close(fig)


def sweep(csv, png):
    t = load(csv)
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(t["alpha"], t["lambda1"], "o-", label="lambda1")
    ax.axhline(1.0, color="gray", lw=0.8)
    ax.set_xlabel("alpha")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png, dpi=150)
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", type=Path, help="--out directory of the fkink runs")
    args = parser.parse_args()
    d = args.directory
    jobs = [
        ("figure1.csv", lambda c: loglog(c, d / "figure1.png", "alpha = 1.5")),
        ("figure3.csv", lambda c: loglog(c, d / "figure3.png", "alpha = 2.5")),
        ("sweep.csv", lambda c: sweep(c, d / "figure2.png")),
    ]
    found = False
    for name, render in jobs:
        if (d / name).exists():
            render(d / name)
            found = True
    if not found:
        raise SystemExit(f"no figure CSVs in {d}")


if __name__ == "__main__":
    main()
