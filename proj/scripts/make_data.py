#!/usr/bin/env python3
"""Regenerate the bundled sample datasets in data/.

Iris comes from scikit-learn's bundled copy. The sunspot series is the yearly
SIDC record shipped with statsmodels, interpolated to monthly resolution with
a small amount of observation noise. The laser and abalone files are
deterministic synthetic stand-ins with the same shapes and difficulty as the
originals (see README). Everything is seeded, so re-running this script
reproduces the files byte for byte.
"""
import argparse
import os

import numpy as np


def write_csv(path, header, rows, fmt):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(fmt(v) for v in row) + "\n")


def make_iris(outdir):
    from sklearn.datasets import load_iris

    d = load_iris()
    names = ["setosa", "versicolor", "virginica"]
    rows = [
        list(d.data[i]) + [names[d.target[i]]]
        for i in range(len(d.target))
    ]
    write_csv(
        os.path.join(outdir, "iris.csv"),
        ["sepal_length", "sepal_width", "petal_length", "petal_width", "species"],
        rows,
        lambda v: v if isinstance(v, str) else f"{v:.1f}",
    )


def make_sunspots(outdir):
    import statsmodels.api as sm

    s = sm.datasets.sunspots.load_pandas().data["SUNACTIVITY"].values
    years = np.arange(len(s))
    months = np.arange(0, len(s) - 1, 1 / 12.0)
    monthly = np.interp(months, years, s)
    rng = np.random.default_rng(7)
    noisy = np.clip(monthly + rng.normal(0, 4.0, len(monthly)), 0, None)
    series = noisy[-1365:]
    write_csv(
        os.path.join(outdir, "sunspots.csv"),
        ["value"],
        [[v] for v in series],
        lambda v: f"{v:.6f}",
    )


def make_lazer(outdir):
    # Mackey-Glass chaotic series, a standard laser-intensity proxy.
    n, tau = 503, 17
    rng = np.random.default_rng(1)
    x = np.zeros(n + tau + 1)
    x[: tau + 1] = 1.2 + 0.1 * rng.standard_normal(tau + 1)
    for t in range(tau, n + tau):
        x[t + 1] = x[t] + 0.2 * x[t - tau] / (1 + x[t - tau] ** 10) - 0.1 * x[t]
    series = x[tau + 1 :]
    write_csv(
        os.path.join(outdir, "lazer.csv"),
        ["value"],
        [[v] for v in series],
        lambda v: f"{v:.6f}",
    )


def make_abalone(outdir):
    # Single latent size factor driving correlated shell measurements, with
    # ring count linear in the latent plus noise. Noise level tuned so a small
    # network reaches ~79% 4-class test accuracy, like the UCI original.
    rng = np.random.default_rng(42)
    n = 4177
    u = rng.uniform(0, 1, n)
    sex = rng.integers(0, 3, n)
    length = 0.1 + 0.7 * u + rng.normal(0, 0.015, n)
    diam = 0.08 + 0.56 * u + rng.normal(0, 0.015, n)
    height = 0.03 + 0.25 * u + rng.normal(0, 0.01, n)
    whole = 0.02 + 2.7 * u ** 2.2 + rng.normal(0, 0.05, n)
    shucked = whole * 0.43 + rng.normal(0, 0.03, n)
    viscera = whole * 0.22 + rng.normal(0, 0.02, n)
    shell = whole * 0.28 + rng.normal(0, 0.02, n)
    rings = 4 + 16 * u + rng.normal(0, 1.4, n)
    qs = np.quantile(rings, [0.25, 0.5, 0.75])
    ring_class = np.digitize(rings, qs)
    rows = [
        [
            int(sex[i]), length[i], diam[i], height[i], whole[i],
            shucked[i], viscera[i], shell[i], rings[i], int(ring_class[i]),
        ]
        for i in range(n)
    ]
    write_csv(
        os.path.join(outdir, "abalone.csv"),
        [
            "sex", "length", "diameter", "height", "whole_weight",
            "shucked_weight", "viscera_weight", "shell_weight", "rings",
            "ring_class",
        ],
        rows,
        lambda v: str(v) if isinstance(v, int) else f"{v:.6f}",
    )


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--outdir", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    make_iris(args.outdir)
    make_sunspots(args.outdir)
    make_lazer(args.outdir)
    make_abalone(args.outdir)
    print("wrote datasets to", os.path.abspath(args.outdir))


if __name__ == "__main__":
    main()
