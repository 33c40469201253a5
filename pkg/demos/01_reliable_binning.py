"""
Reliable histograms from a raw sample
=====================================

Bins grow left to right until the bin mean, widened by its confidence
half-width, sits strictly inside the bin.
"""

import numpy as np

from histarith import BinningConfig, build_histogram, quality

rng = np.random.default_rng(0)
x = np.concatenate([rng.normal(-2.0, 0.5, 1500), rng.normal(2.0, 0.7, 1500)])

# default per-bin reliability 0.999
hist = build_histogram(x)
print(f"{hist.k} bins, histogram reliability {hist.gamma:.4f}")

for b in hist.bins[:5]:
    print(f"  [{b.lo:+.3f}, {b.hi:+.3f})  n={b.count:4d}  mean={b.mean:+.3f}  delta={b.delta:.4f}")

# stricter reliability -> fewer, wider bins
strict = build_histogram(x, BinningConfig(gamma_per_bin=0.99999))
print(f"gamma_per_bin=0.99999: {strict.k} bins")

# quality combines the reliability with the Kolmogorov fit to the sample
rep = quality(hist, x)
print(f"D = {rep.ks_statistic:.4f}, alpha = {rep.alpha:.3f}, Q = {rep.quality:.4f}")
