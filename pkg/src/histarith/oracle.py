"""Brute-force checks for the analytic results.

* :func:`grid_cut_area` integrates the region ``{op(x, y) <= z}`` inside a
  rectangle numerically, without using any of the closed forms.
* :func:`pairwise_combine` evaluates the operation on every ordered pair of
  observed values; :func:`mc_sample` is its scalable random counterpart.
* :func:`rebuild_z_histogram` re-bins such a result sample and attaches the
  reliability of the source rectangles feeding each bin.
* :func:`compare` measures the KS distance between a sample and an analytic
  result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from .arithmetic import Op, Rect, ResultDistribution, draw_histogram, rectangles
from .binning import BinningConfig, build_histogram
from .core import DataError, DomainError, ReliableHistogram, Sample, evaluate
from .special import kolmogorov_pvalue

DEFAULT_PAIR_CAP = 10**8
_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# numeric integration of cut areas
# ---------------------------------------------------------------------------


def _cut_bound(op: Op, z: float, along_x: bool):
    """Boundary of {op <= z} as a function of the integration coordinate.

    Returns (bound, below) where the admissible set on the other axis is
    ``other <= bound(t)`` if ``below`` else ``other >= bound(t)``.
    """
    if along_x:
        table = {
            Op.ADD: (lambda x: z - x, True),
            Op.SUB: (lambda x: x - z, False),
            Op.MUL: (lambda x: z / x, True),
            Op.DIV: (lambda x: z * x, True),
        }
    else:
        table = {
            Op.ADD: (lambda y: z - y, True),
            Op.SUB: (lambda y: z + y, True),
            Op.MUL: (lambda y: z / y, True),
            Op.DIV: (lambda y: y / z, False),
        }
    return table[op]


def grid_cut_area(op, rect: Rect, z: float, n: int = 2000) -> float:
    """Fraction of ``rect`` where ``op(x, y) <= z``, on an ``n`` x ``n`` cell grid.

    Columns run along the shorter side and are split at the points where the
    level curve enters or leaves the rectangle; within a column, the covered
    rows are summed exactly, i.e. each cell contributes its covered fraction.
    """
    op = Op(op)
    if op in (Op.DIV, Op.MUL) and (rect.ax <= 0 or rect.ay <= 0):
        raise DomainError("grid oracle for mul/div needs a positive rectangle")
    if op is Op.DIV and z <= 0:
        return 0.0
    if op is Op.MUL and z <= 0:
        return 0.0
    along_x = (rect.bx - rect.ax) <= (rect.by - rect.ay)
    t0, t1, o0, o1 = (rect.ax, rect.bx, rect.ay, rect.by) if along_x else (rect.ay, rect.by, rect.ax, rect.bx)
    bound, below = _cut_bound(op, z, along_x)

    cuts = [t0, t1]
    for edge in (o0, o1):
        g = lambda t, e=edge: bound(t) - e  # noqa: E731
        g0, g1 = g(t0), g(t1)
        if g0 * g1 < 0:
            cuts.append(brentq(g, t0, t1, xtol=1e-15, rtol=1e-15))
    cuts = np.unique(cuts)

    height = o1 - o0
    total = 0.0
    span = t1 - t0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        m = max(8, int(round(n * (hi - lo) / span)))
        dt = (hi - lo) / m
        t = lo + dt * (np.arange(m) + 0.5)
        b = bound(t)
        cover = np.clip(b - o0, 0.0, height) if below else np.clip(o1 - b, 0.0, height)
        total += cover.sum() * dt
    return total / (span * height)


# ---------------------------------------------------------------------------
# pairwise and Monte Carlo result samples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairwiseResult:
    sample: Sample
    op: Op
    n_x: int
    n_y: int


@dataclass(frozen=True)
class ProvenancedHistogram:
    histogram: ReliableHistogram
    provenance_gamma: tuple
    provenance_pairs: tuple


class Comparison(NamedTuple):
    D: float
    alpha: float
    dependent_sample: bool = False


def _as_sample(s) -> Sample:
    return s if isinstance(s, Sample) else Sample(s)


def pairwise_combine(sx, sy, op, cap: int = DEFAULT_PAIR_CAP) -> PairwiseResult:
    """``op`` applied to every ordered pair (x from ``sx``, y from ``sy``)."""
    op = Op(op)
    sx, sy = _as_sample(sx), _as_sample(sy)
    if sx.n * sy.n > cap:
        raise DataError(f"{sx.n} x {sy.n} pairs exceed the cap of {cap}; use Monte Carlo sampling instead")
    if op is Op.DIV:
        zeros = np.flatnonzero(sx.values == 0.0)
        if zeros.size:
            raise DomainError(f"zero divisor in X sample at sorted indices {zeros.tolist()}")
    z = op.outer(sx.values, sy.values).ravel()
    return PairwiseResult(Sample(z), op, sx.n, sy.n)


def mc_sample(hx: ReliableHistogram, hy: ReliableHistogram, op, n: int, seed: int) -> Sample:
    """``n`` independent draws of ``op(X, Y)`` from the operand histograms."""
    op = Op(op)
    if n < 1:
        raise DataError("need n >= 1")
    if op is Op.DIV and hx.support[0] <= 0:
        raise DomainError("quotient requires strictly positive X support")
    rng = np.random.default_rng(seed)
    x = draw_histogram(hx, n, rng)
    y = draw_histogram(hy, n, rng)
    return Sample(op.apply(x, y))


def rebuild_z_histogram(
    p: PairwiseResult,
    hx: ReliableHistogram,
    hy: ReliableHistogram,
    config: Optional[BinningConfig] = None,
) -> ProvenancedHistogram:
    """Re-bin a result sample; each bin carries the product of gamma_j * gamma_r
    over the source rectangles whose image overlaps it."""
    hz = build_histogram(p.sample, config)
    rects = rectangles(hx, hy)
    images = [rc.image(p.op) for rc in rects]
    gammas, pairs = [], []
    for b in hz.bins:
        hits = [rc for rc, (lo, hi) in zip(rects, images) if lo < b.hi and hi > b.lo]
        pairs.append(tuple((rc.j, rc.r) for rc in hits))
        g = 1.0
        for rc in hits:
            g *= rc.gamma
        gammas.append(g)
    return ProvenancedHistogram(hz, tuple(gammas), tuple(pairs))


def compare(d: ResultDistribution, s, dependent: Optional[bool] = None) -> Comparison:
    """KS distance and Kolmogorov p-value of sample ``s`` against ``d.cdf``.

    Pairwise samples are not independent draws; their p-value is flagged.
    """
    if isinstance(s, PairwiseResult):
        dependent = True if dependent is None else dependent
        s = s.sample
    s = _as_sample(s)
    v = s.values
    n = v.size
    D = 0.0
    for start in range(0, n, _CHUNK):
        f = evaluate(d.cdf, v[start : start + _CHUNK])
        i = np.arange(start + 1, start + f.size + 1)
        D = max(D, float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    return Comparison(D, kolmogorov_pvalue(D, s.n), bool(dependent))
