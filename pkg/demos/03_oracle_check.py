"""
Checking an analytic result against brute force
===============================================

Every pairwise combination of two observed samples, and an independent
Monte Carlo draw, compared with the analytic distribution by the
Kolmogorov statistic.
"""

import numpy as np

from histarith import build_histogram
from histarith.arithmetic import Op, combine
from histarith.oracle import compare, mc_sample, pairwise_combine, rebuild_z_histogram

rng = np.random.default_rng(1)
sx = rng.uniform(1.0, 2.0, 400)
sy = rng.uniform(2.0, 5.0, 400)
hx, hy = build_histogram(sx), build_histogram(sy)
d = combine(hx, hy, Op.MUL)

# all 160000 products; the values share factors, so alpha is only indicative
pairs = pairwise_combine(sx, sy, Op.MUL)
res = compare(d, pairs)
print(f"pairwise: D = {res.D:.4f}, alpha = {res.alpha:.3g}, dependent = {res.dependent_sample}")

# independent draws from the operand histograms
res = compare(d, mc_sample(hx, hy, Op.MUL, 100_000, seed=2))
print(f"monte carlo: D = {res.D:.4f}, alpha = {res.alpha:.3f}")

# re-bin the products; provenance is the product of the contributing gammas
ph = rebuild_z_histogram(pairs, hx, hy)
print(f"{ph.histogram.k} Z bins, min provenance gamma {min(ph.provenance_gamma):.4f}")
