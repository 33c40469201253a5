"""Reliability-driven histogram construction.

A group of consecutive order statistics becomes a bin when the confidence
interval of its mean, ``mean +/- delta`` with

    delta = t(gamma, n_j) * s_j * (1 + q(gamma, n_j)) / sqrt(n_j),

lies strictly inside the bin edges. Bins are grown greedily from the left;
an unreliable tail is merged leftwards until it passes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .core import Bin, CurveKind, DataError, PiecewiseAnalyticCurve, ReliableHistogram, Sample
from .special import QMode, _check_confidence, kolmogorov_pvalue, sigma_correction, t_quantile


class BoundaryPlacement(Enum):
    MIDPOINT = "midpoint"
    LEFT_EXTREME = "left"
    RIGHT_EXTREME = "right"


_PLACEMENT_FRACTION = {
    BoundaryPlacement.MIDPOINT: 0.5,
    BoundaryPlacement.LEFT_EXTREME: 0.0,
    BoundaryPlacement.RIGHT_EXTREME: 1.0,
}


@dataclass(frozen=True)
class BinningConfig:
    gamma_per_bin: float = 0.999
    q_mode: QMode = QMode.CHI_SQUARE
    min_bin_count: int = 2
    boundary_placement: BoundaryPlacement = BoundaryPlacement.MIDPOINT

    def __post_init__(self):
        _check_confidence(self.gamma_per_bin)
        object.__setattr__(self, "q_mode", QMode(self.q_mode))
        placement = self.boundary_placement
        if isinstance(placement, str) and placement in ("left_extreme", "right_extreme"):
            placement = placement.split("_")[0]
        object.__setattr__(self, "boundary_placement", BoundaryPlacement(placement))
        if self.min_bin_count < 2:
            raise DataError("min_bin_count must be at least 2")

    def echo(self) -> dict:
        d = asdict(self)
        d["q_mode"] = self.q_mode.value
        d["boundary_placement"] = self.boundary_placement.value
        return d


class BinCheck(NamedTuple):
    passed: bool
    count: int
    mean: float
    s: float
    delta: float
    reason: str = ""


class QualityReport(NamedTuple):
    gamma: float
    ks_statistic: float
    alpha: float
    quality: float


def bin_delta(s: float, n: int, gamma: float, q_mode=QMode.CHI_SQUARE) -> float:
    """Half-width of the reliability interval of a group mean."""
    if s == 0.0:
        return 0.0
    return t_quantile(gamma, n - 1) * s * (1.0 + sigma_correction(gamma, n, q_mode)) / math.sqrt(n)


def check_bin(values, lo: float, hi: float, gamma: float, q_mode=QMode.CHI_SQUARE) -> BinCheck:
    """Test ``lo < mean - delta`` and ``mean + delta < hi`` for one group."""
    vals = np.asarray(values, dtype=np.float64)
    n = int(vals.size)
    if n < 2:
        return BinCheck(False, n, float(vals.mean()) if n else math.nan, math.nan, math.nan, "insufficient count")
    if not lo < hi:
        raise DataError("bin edges must satisfy lo < hi")
    mean = float(vals.mean())
    s = float(vals.std(ddof=1))
    return _decide(n, mean, s, lo, hi, gamma, q_mode)


def _decide(n, mean, s, lo, hi, gamma, q_mode) -> BinCheck:
    delta = bin_delta(s, n, gamma, q_mode)
    ok = lo < mean - delta and mean + delta < hi
    return BinCheck(ok, n, mean, s, delta, "" if ok else "interval not inside bin")


def _group_stats(values: np.ndarray, i: int, j: int):
    """Mean and unbiased std of values[i:j] (recomputed, not from prefix sums)."""
    g = values[i:j]
    return float(g.mean()), float(g.std(ddof=1))


def _achieved_gamma(n, mean, s, lo, hi, q_mode, target) -> float:
    """Largest reliability at which a failing group would pass."""
    lo_g, hi_g = 1e-12, target
    if not _decide(n, mean, s, lo, hi, lo_g, q_mode).passed:
        return lo_g
    for _ in range(100):
        mid = 0.5 * (lo_g + hi_g)
        if _decide(n, mean, s, lo, hi, mid, q_mode).passed:
            lo_g = mid
        else:
            hi_g = mid
    return lo_g


def build_histogram(sample, config: Optional[BinningConfig] = None) -> ReliableHistogram:
    """Greedy left-to-right reliable histogram of ``sample``."""
    config = config or BinningConfig()
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    v = sample.values
    n = sample.n
    if n < 2:
        raise DataError("need at least two observations to build a histogram")
    gamma = config.gamma_per_bin
    qm = config.q_mode
    echo = config.echo()

    if v[0] == v[-1]:
        c = float(v[0])
        eps = max(abs(c), 1.0) * 1e-9
        b = Bin(c - eps, c + eps, n, gamma, c, c, c, 0.0, 0.0)
        return ReliableHistogram((b,), degenerate=True, config=echo)

    frac = _PLACEMENT_FRACTION[config.boundary_placement]
    m = config.min_bin_count
    # groups as (start, stop, hi) over the sorted values
    groups = []
    start = 0
    lo = float(v[0])
    while start < n:
        closed = False
        for e in range(start + m - 1, n - 1):
            if v[e] == v[e + 1]:
                continue
            hi = float(v[e] + frac * (v[e + 1] - v[e]))
            if not lo < hi:
                continue
            mean, s = _group_stats(v, start, e + 1)
            if _decide(e + 1 - start, mean, s, lo, hi, gamma, qm).passed:
                groups.append((start, e + 1, hi))
                start, lo = e + 1, hi
                closed = True
                break
        if not closed:
            groups.append((start, n, float(v[-1])))
            break

    # the last group ends at the largest observation; merge left until it passes
    reliable = True
    while True:
        start, stop, hi = groups[-1]
        lo = groups[-2][2] if len(groups) > 1 else float(v[0])
        ok = stop - start >= 2 and lo < hi
        if ok:
            mean, s = _group_stats(v, start, stop)
            ok = _decide(stop - start, mean, s, lo, hi, gamma, qm).passed
        if ok:
            break
        if len(groups) == 1:
            reliable = False
            break
        prev = groups[-2]
        groups[-2:] = [(prev[0], stop, hi)]

    bins = []
    lo = float(v[0])
    for start, stop, hi in groups:
        g = v[start:stop]
        mean, s = _group_stats(v, start, stop)
        delta = bin_delta(s, stop - start, gamma, qm)
        g_j = gamma
        if not reliable:
            g_j = _achieved_gamma(stop - start, mean, s, lo, hi, qm, gamma)
            delta = bin_delta(s, stop - start, g_j, qm)
        bins.append(Bin(lo, hi, stop - start, g_j, float(g[0]), float(g[-1]), mean, s, delta))
        lo = hi
    return ReliableHistogram(tuple(bins), unreliable=not reliable, config=echo)


def histogram_cdf(hist: ReliableHistogram) -> PiecewiseAnalyticCurve:
    """Piecewise-linear CDF of the piecewise-uniform density."""
    edges = hist.edges
    masses = hist.masses
    cum = np.concatenate([[0.0], np.cumsum(masses)])
    cum[-1] = 1.0
    coeffs = np.zeros((hist.k, 7))
    slope = masses / np.diff(edges)
    coeffs[:, 1] = slope
    coeffs[:, 0] = cum[:-1] - slope * edges[:-1]
    return PiecewiseAnalyticCurve(edges, coeffs, CurveKind.CDF)


def histogram_pdf(hist: ReliableHistogram) -> PiecewiseAnalyticCurve:
    coeffs = np.zeros((hist.k, 7))
    coeffs[:, 0] = hist.masses / np.diff(hist.edges)
    return PiecewiseAnalyticCurve(hist.edges, coeffs, CurveKind.PDF)


def ks_statistic(cdf_values: np.ndarray) -> float:
    """Two-sided KS distance given model CDF values at the sorted sample."""
    f = np.asarray(cdf_values, dtype=np.float64)
    n = f.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n), 0.0))


def quality(hist: ReliableHistogram, sample) -> QualityReport:
    if not isinstance(sample, Sample):
        sample = Sample(sample)
    if sample.n != hist.n:
        raise DataError(f"sample has {sample.n} values but histogram counts {hist.n}")
    d = ks_statistic(histogram_cdf(hist)(sample.values))
    alpha = kolmogorov_pvalue(d, sample.n)
    g = hist.gamma
    return QualityReport(g, d, alpha, g * alpha)
