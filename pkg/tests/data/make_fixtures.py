"""Regenerate the synthetic golden fixtures in this directory.

clustered_correlated.csv: 100 runs x 30 dims, values snapped to a coarse
lattice (clustering with wide gaps) and dims 0..9 sharing a latent factor,
so 45 of the 435 dimension pairs (~0.10) are genuinely correlated.
"""
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent


def clustered_correlated(seed=7, runs=100, n=30, block=10, levels=12):
    rng = np.random.default_rng(seed)
    latent = rng.random(runs)
    X = rng.random((runs, n))
    X[:, :block] = 0.6 * latent[:, None] + 0.4 * X[:, :block]
    X = np.round(X * (levels - 1)) / (levels - 1)
    X += rng.normal(0.0, 0.004, X.shape)
    return np.clip(X, 0.0, 1.0)


def write(path, X):
    with open(path, "w") as fh:
        fh.write("run,seed,poc," + ",".join(f"dim_{j}" for j in range(X.shape[1])) + "\n")
        for r, row in enumerate(X):
            fh.write(f"{r},{r},0," + ",".join(format(v, ".17g") for v in row) + "\n")


if __name__ == "__main__":
    write(HERE / "clustered_correlated.csv", clustered_correlated())
