"""Exact arithmetic on independent piecewise-uniform random variables.

Each pair of bins (j, r) spans a rectangle in the (x, y) plane on which the
joint density is uniform. For ``z`` fixed, the probability ``P(op(X, Y) <= z)``
restricted to that rectangle is the area cut off by the level curve of the
operation, divided by the rectangle area. The full result is the mixture of
these per-rectangle curves weighted by the joint bin masses.

Operand order for the quotient follows ``Z = Y / X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .core import (
    CurveKind,
    DataError,
    DomainError,
    PiecewiseAnalyticCurve,
    ReliableHistogram,
    Sample,
    dedupe_breakpoints,
    derivative,
    evaluate,
    integrate_moment,
)


class Op(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"

    def apply(self, x, y):
        """Elementwise ``op(x, y)``; ``DIV`` is ``y / x``."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if self is Op.ADD:
            return x + y
        if self is Op.SUB:
            return x - y
        if self is Op.MUL:
            return x * y
        return y / x

    def outer(self, x, y):
        """All ordered pairs, rows indexed by ``x``."""
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if self is Op.ADD:
            return np.add.outer(x, y)
        if self is Op.SUB:
            return np.subtract.outer(x, y)
        if self is Op.MUL:
            return np.multiply.outer(x, y)
        return np.divide(y[None, :], x[:, None])


@dataclass(frozen=True)
class Rect:
    """Bin-pair rectangle ``[ax, bx] x [ay, by]`` with joint mass and reliability."""

    ax: float
    bx: float
    ay: float
    by: float
    mass: float = 1.0
    gamma: float = 1.0
    j: int = 0
    r: int = 0

    def __post_init__(self):
        if not (self.ax < self.bx and self.ay < self.by):
            raise DataError("rectangle must have positive width and height")
        if not 0.0 < self.mass <= 1.0 + 1e-12:
            raise DataError("rectangle mass must lie in (0, 1]")

    @property
    def area(self) -> float:
        return (self.bx - self.ax) * (self.by - self.ay)

    def image(self, op: Op) -> tuple:
        """Range of op over the rectangle."""
        z = critical_points(op, self)
        return (z[0], z[-1])


def _require_positive(op: Op, rect: Rect):
    if op is Op.MUL and (rect.ax <= 0 or rect.ay <= 0):
        raise DomainError("product requires strictly positive supports (unsupported support sign)")
    if op is Op.DIV:
        if rect.ax <= 0:
            raise DomainError("quotient requires strictly positive X support")
        if rect.ay <= 0:
            raise DomainError("quotient requires strictly positive Y support (unsupported support sign)")


def critical_points(op: Op, rect: Rect) -> list:
    """The four sorted abscissae where the cut area changes formula."""
    a, ab, b, bb = rect.ax, rect.bx, rect.ay, rect.by
    if op is Op.ADD:
        pts = [a + b, ab + b, a + bb, ab + bb]
    elif op is Op.SUB:
        pts = [a - bb, ab - bb, a - b, ab - b]
    elif op is Op.MUL:
        pts = [a * b, ab * b, a * bb, ab * bb]
    else:
        pts = [b / ab, b / a, bb / ab, bb / a]
    return sorted(pts)


# ---------------------------------------------------------------------------
# Per-rectangle cut areas, as coefficient rows over {1, z, z^2, ln z, z ln z, 1/z, 1/z^2}
# ---------------------------------------------------------------------------


def _row(c0=0.0, z=0.0, z2=0.0, lnz=0.0, zlnz=0.0, inv=0.0, inv2=0.0) -> np.ndarray:
    return np.array([c0, z, z2, lnz, zlnz, inv, inv2])


def _linear_pieces(lo_corner: float, hi_corner: float, w: float, h: float):
    """Cut areas for {x + y <= z} on a w-by-h rectangle spanning [lo_corner, hi_corner]."""
    m = min(w, h)
    z1 = lo_corner + m
    lower = _row(0.5 * lo_corner * lo_corner, -lo_corner, 0.5)
    middle = _row(0.5 * m * m - m * z1, m)
    upper = _row(w * h - 0.5 * hi_corner * hi_corner, hi_corner, -0.5)
    return lower, middle, upper


def _area_rows(op: Op, rect: Rect):
    """(lower, middle, upper) unnormalised cut-area rows for one rectangle."""
    a, ab, b, bb = rect.ax, rect.bx, rect.ay, rect.by
    w, h = ab - a, bb - b
    A = w * h
    if op is Op.ADD:
        return _linear_pieces(a + b, ab + bb, w, h)
    if op is Op.SUB:
        # X - Y = X + (-Y) with -Y uniform on [-bb, -b]
        return _linear_pieces(a - bb, ab - b, w, h)
    if op is Op.MUL:
        # lower: z ln z - z (ln(ab) + 1) + ab
        lower = _row(a * b, -(math.log(a) + math.log(b) + 1.0), zlnz=1.0)
        if ab * b <= a * bb:
            middle = _row(-b * w, math.log(ab) - math.log(a))
        else:
            middle = _row(-a * h, math.log(bb) - math.log(b))
        # upper: A - (ab*bb - z - z ln(ab*bb / z))
        upper = _row(A - ab * bb, 1.0 + math.log(ab) + math.log(bb), zlnz=-1.0)
        return lower, middle, upper
    # DIV, Z = Y / X
    # lower: (ab^2 z - 2 ab b + b^2 / z) / 2
    lower = _row(-ab * b, 0.5 * ab * ab, inv=0.5 * b * b)
    if b * ab <= bb * a:
        middle = _row(-b * w, 0.5 * (ab * ab - a * a))
    else:
        middle = _row(h * ab, inv=-0.5 * h * (b + bb))
    # upper: A - (a^2 z - 2 a bb + bb^2 / z) / 2
    upper = _row(A + a * bb, -0.5 * a * a, inv=-0.5 * bb * bb)
    return lower, middle, upper


def rect_cdf(op, rect: Rect) -> PiecewiseAnalyticCurve:
    """CDF of op(X, Y) for (X, Y) uniform on one rectangle (rises 0 -> 1)."""
    op = Op(op)
    _require_positive(op, rect)
    pts = critical_points(op, rect)
    lower, middle, upper = _area_rows(op, rect)
    A = rect.area
    bp = [pts[0], pts[1]]
    rows = [lower / A]
    if pts[2] - pts[1] > 1e-12 * max(1.0, abs(pts[2])):
        bp.append(pts[2])
        rows.append(middle / A)
    if pts[3] - bp[-1] > 1e-12 * max(1.0, abs(pts[3])):
        bp.append(pts[3])
        rows.append(upper / A)
    else:
        bp[-1] = pts[3]
    if len(bp) == 2 and pts[1] - pts[0] <= 1e-12 * max(1.0, abs(pts[1])):
        raise DataError("rectangle image collapsed to a point")
    return PiecewiseAnalyticCurve(np.array(bp), np.array(rows), CurveKind.CDF)


def rect_pdf(op, rect: Rect) -> PiecewiseAnalyticCurve:
    return derivative(rect_cdf(op, rect))


# ---------------------------------------------------------------------------
# Mixture over all bin pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ResultDistribution:
    """Exact piecewise-analytic distribution of ``op(X, Y)``.

    ``provenance[i]`` lists the ``(j, r)`` bin pairs whose rectangles
    contribute on breakpoint interval ``i`` together with the product of
    their reliabilities ``gamma_j * gamma_r``.
    """

    op: Op
    rects: tuple
    cdf: PiecewiseAnalyticCurve
    pdf: PiecewiseAnalyticCurve
    provenance: tuple

    @property
    def support(self) -> tuple:
        return self.cdf.support

    @property
    def breakpoints(self) -> np.ndarray:
        return self.cdf.breakpoints

    def moment(self, k: int) -> float:
        return moment(self, k)

    def mean(self) -> float:
        return moment(self, 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResultDistribution):
            return NotImplemented
        return (
            self.op == other.op
            and self.rects == other.rects
            and self.cdf == other.cdf
            and self.pdf == other.pdf
            and self.provenance == other.provenance
        )


@dataclass(frozen=True)
class Provenance:
    interval_index: int
    pairs: tuple
    gamma_product: float


def rectangles(hx: ReliableHistogram, hy: ReliableHistogram) -> list:
    px, py = hx.masses, hy.masses
    out = []
    for j, bx in enumerate(hx.bins):
        for r, by in enumerate(hy.bins):
            out.append(Rect(bx.lo, bx.hi, by.lo, by.hi, float(px[j] * py[r]), bx.gamma * by.gamma, j, r))
    return out


def mixture(op: Op, rects) -> ResultDistribution:
    """Mass-weighted sum of per-rectangle curves on the union of breakpoints."""
    op = Op(op)
    rects = tuple(rects)
    if not rects:
        raise DataError("no rectangles to combine")
    pieces = [rect_cdf(op, rc) for rc in rects]
    bp = dedupe_breakpoints(np.concatenate([p.breakpoints for p in pieces]))
    mids = 0.5 * (bp[:-1] + bp[1:])
    coeffs = np.zeros((mids.size, 7))
    images = []
    # fixed (j, r) order keeps the summation bit-reproducible
    for rc, p in zip(rects, pieces):
        idx = np.searchsorted(p.breakpoints, mids, side="right") - 1
        inside = (idx >= 0) & (idx < p.nseg)
        coeffs[inside] += rc.mass * p.coeffs[idx[inside]]
        coeffs[idx >= p.nseg, 0] += rc.mass
        images.append((p.breakpoints[0], p.breakpoints[-1]))
    cdf = PiecewiseAnalyticCurve(bp, coeffs, CurveKind.CDF)
    zl = np.array([im[0] for im in images])
    zh = np.array([im[1] for im in images])
    gam = np.array([rc.gamma for rc in rects])
    jr = [(rc.j, rc.r) for rc in rects]
    overlap = (zl[None, :] < bp[1:, None]) & (zh[None, :] > bp[:-1, None])
    prov = []
    for i, row in enumerate(overlap):
        hit = np.flatnonzero(row)
        prov.append(Provenance(i, tuple(jr[h] for h in hit), float(np.prod(gam[hit]))))
    return ResultDistribution(op, rects, cdf, derivative(cdf), tuple(prov))


def combine(hx: ReliableHistogram, hy: ReliableHistogram, op) -> ResultDistribution:
    """Distribution of ``op(X, Y)`` for independent histogram variables."""
    op = Op(op)
    if hx is None or hy is None or hx.k == 0 or hy.k == 0:
        raise DataError("empty histogram")
    if op is Op.MUL and (hx.support[0] <= 0 or hy.support[0] <= 0):
        raise DomainError("product requires strictly positive supports")
    if op is Op.DIV:
        if hx.support[0] <= 0:
            raise DomainError("quotient requires strictly positive X support")
        if hy.support[0] <= 0:
            raise DomainError("quotient requires strictly positive Y support")
    return mixture(op, rectangles(hx, hy))


def moment(d, k: int) -> float:
    """E[Z**k] for k in 1..4 by exact per-segment antiderivatives."""
    if int(k) != k or not 1 <= k <= 4:
        raise DataError("moment order must be 1, 2, 3 or 4")
    pdf = d.pdf if isinstance(d, ResultDistribution) else d
    return integrate_moment(pdf, int(k))


def _draw_uniform_in_bins(rng, lo, hi, idx):
    return lo[idx] + (hi[idx] - lo[idx]) * rng.random(idx.size)


def sample_result(d: ResultDistribution, n: int, seed: int) -> Sample:
    """Draw ``n`` values of Z by rectangle, then uniformly inside it."""
    if n < 1:
        raise DataError("need n >= 1")
    rng = np.random.default_rng(seed)
    mass = np.array([rc.mass for rc in d.rects])
    idx = rng.choice(mass.size, size=n, p=mass / mass.sum())
    ax = np.array([rc.ax for rc in d.rects])
    bx = np.array([rc.bx for rc in d.rects])
    ay = np.array([rc.ay for rc in d.rects])
    by = np.array([rc.by for rc in d.rects])
    x = _draw_uniform_in_bins(rng, ax, bx, idx)
    y = _draw_uniform_in_bins(rng, ay, by, idx)
    return Sample(d.op.apply(x, y))


def draw_histogram(hist: ReliableHistogram, n: int, rng) -> np.ndarray:
    """Unsorted draws from the piecewise-uniform density."""
    idx = rng.choice(hist.k, size=n, p=hist.masses)
    e = hist.edges
    return _draw_uniform_in_bins(rng, e[:-1], e[1:], idx)


def evaluate_cdf(d: ResultDistribution, z):
    return evaluate(d.cdf, z)
