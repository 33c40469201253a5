"""Shared value types and the piecewise-analytic curve representation.

A :class:`PiecewiseAnalyticCurve` stores a CDF or PDF as breakpoints plus one
coefficient vector per segment over the fixed basis

    {1, z, z**2, ln z, z ln z, 1/z, 1/z**2}

which is closed under differentiation of every CDF produced by the four
histogram operations (the 1/z**2 slot only ever appears in densities).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np


class HistArithError(ValueError):
    """Base class for library errors."""


class DataError(HistArithError):
    """Malformed input data or a violated structural invariant."""


class DomainError(HistArithError):
    """Mathematically unsupported request (sign violation, zero divisor)."""


BASIS = ("1", "z", "z^2", "ln z", "z ln z", "1/z", "1/z^2")
NBASIS = len(BASIS)
_LOG_SLOTS = (3, 4, 5, 6)


class CurveKind(Enum):
    CDF = "cdf"
    PDF = "pdf"


# ---------------------------------------------------------------------------
# Samples and histograms
# ---------------------------------------------------------------------------


class Sample:
    """Finite collection of real observations, stored sorted ascending."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise DataError("sample must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise DataError("sample values must be finite")
        arr = np.sort(arr, kind="stable")
        arr.setflags(write=False)
        self.values = arr

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.values.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"Sample(n={self.n})"

    def mean(self) -> float:
        return float(np.mean(self.values))


@dataclass(frozen=True)
class Bin:
    """One histogram bin (a half-segment ``[lo, hi)``).

    The statistics ``x_min`` .. ``delta`` are ``None`` for bins that were
    specified by hand rather than built from a sample.
    """

    lo: float
    hi: float
    count: int
    gamma: float
    x_min: Optional[float] = None
    x_max: Optional[float] = None
    mean: Optional[float] = None
    s: Optional[float] = None
    delta: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise DataError(f"bin edges must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.count < 1:
            raise DataError("bin count must be positive")
        if not 0.0 < self.gamma <= 1.0:
            raise DataError(f"bin reliability must lie in (0, 1], got {self.gamma}")
        if self.x_min is not None and self.x_max is not None:
            if not self.lo <= self.x_min <= self.x_max <= self.hi:
                raise DataError("observed extremes must lie within the bin edges")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def has_stats(self) -> bool:
        return self.mean is not None


@dataclass(frozen=True)
class ReliableHistogram:
    """Contiguous bins with counts and per-bin reliabilities.

    ``gamma`` is the whole-histogram reliability, the product of the per-bin
    reliabilities. ``degenerate`` marks the zero-spread fallback and
    ``unreliable`` marks a single bin that fails the reliability test even
    after all merges (its ``gamma`` is then the level actually achieved).
    """

    bins: tuple
    degenerate: bool = False
    unreliable: bool = False
    config: Optional[dict] = None

    def __post_init__(self):
        bins = tuple(self.bins)
        object.__setattr__(self, "bins", bins)
        if not bins:
            raise DataError("histogram must have at least one bin")
        for left, right in zip(bins[:-1], bins[1:]):
            if left.hi != right.lo:
                raise DataError("bins must be contiguous")

    @classmethod
    def from_edges(cls, edges: Sequence[float], counts: Sequence[int], gammas=0.999, **kw):
        edges = [float(e) for e in edges]
        counts = [int(c) for c in counts]
        if len(edges) != len(counts) + 1:
            raise DataError("need exactly one more edge than counts")
        if any(b <= a for a, b in zip(edges[:-1], edges[1:])):
            raise DataError("edges not increasing")
        if np.isscalar(gammas):
            gammas = [float(gammas)] * len(counts)
        if len(gammas) != len(counts):
            raise DataError("need one reliability per bin")
        bins = [Bin(lo, hi, c, float(g)) for lo, hi, c, g in zip(edges[:-1], edges[1:], counts, gammas)]
        return cls(tuple(bins), **kw)

    @property
    def k(self) -> int:
        return len(self.bins)

    @property
    def n(self) -> int:
        return sum(b.count for b in self.bins)

    @property
    def edges(self) -> np.ndarray:
        return np.array([b.lo for b in self.bins] + [self.bins[-1].hi])

    @property
    def counts(self) -> np.ndarray:
        return np.array([b.count for b in self.bins], dtype=np.int64)

    @property
    def masses(self) -> np.ndarray:
        c = self.counts
        return c / c.sum()

    @property
    def gammas(self) -> np.ndarray:
        return np.array([b.gamma for b in self.bins])

    @property
    def gamma(self) -> float:
        return math.prod(b.gamma for b in self.bins)

    @property
    def support(self) -> tuple:
        return (self.bins[0].lo, self.bins[-1].hi)

    def mean(self) -> float:
        """Mean of the piecewise-uniform density."""
        return float(np.dot(self.masses, [b.midpoint for b in self.bins]))


# ---------------------------------------------------------------------------
# Piecewise-analytic curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PiecewiseAnalyticCurve:
    breakpoints: np.ndarray
    coeffs: np.ndarray
    kind: CurveKind = field(default=CurveKind.CDF)

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=np.float64)
        co = np.array(self.coeffs, dtype=np.float64).reshape(-1, NBASIS)
        if bp.ndim != 1 or bp.size < 2:
            raise DataError("curve needs at least two breakpoints")
        if co.shape[0] != bp.size - 1:
            raise DataError("need one coefficient row per segment")
        if not np.all(np.isfinite(bp)) or not np.all(np.diff(bp) > 0):
            raise DataError("breakpoints not strictly increasing")
        if not np.all(np.isfinite(co)):
            raise DataError("coefficients must be finite")
        nonpos = bp[:-1] <= 0
        if np.any(co[nonpos][:, _LOG_SLOTS] != 0):
            raise DataError("log/reciprocal terms are only allowed on positive segments")
        bp.setflags(write=False)
        co.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", co)
        object.__setattr__(self, "kind", CurveKind(self.kind))

    @property
    def support(self) -> tuple:
        return (float(self.breakpoints[0]), float(self.breakpoints[-1]))

    @property
    def nseg(self) -> int:
        return self.coeffs.shape[0]

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseAnalyticCurve):
            return NotImplemented
        return (
            self.kind == other.kind
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.coeffs, other.coeffs)
        )


def basis_values(z: np.ndarray) -> np.ndarray:
    """Basis functions at ``z``; log/reciprocal columns are 0 where z <= 0."""
    z = np.asarray(z, dtype=np.float64)
    pos = z > 0
    zs = np.where(pos, z, 1.0)
    lz = np.where(pos, np.log(zs), 0.0)
    inv = np.where(pos, 1.0 / zs, 0.0)
    return np.stack([np.ones_like(z), z, z * z, lz, np.where(pos, z * lz, 0.0), inv, inv * inv], axis=-1)


def evaluate(curve: PiecewiseAnalyticCurve, z):
    """Vectorised evaluation; right segment at breakpoints."""
    z = np.asarray(z, dtype=np.float64)
    if np.any(np.isnan(z)):
        raise DataError("cannot evaluate a curve at NaN")
    bp = curve.breakpoints
    idx = np.searchsorted(bp, z, side="right") - 1
    inside = (idx >= 0) & (idx < curve.nseg)
    c = curve.coeffs[np.clip(idx, 0, curve.nseg - 1)]
    # basis terms vanish by construction where their coefficient is zero
    val = np.einsum("...i,...i->...", c, basis_values(z))
    above = 1.0 if curve.kind is CurveKind.CDF else 0.0
    out = np.where(inside, val, np.where(idx < 0, 0.0, above))
    return out if out.ndim else float(out)


def eval_curve(curve: PiecewiseAnalyticCurve, z: float) -> float:
    z = float(z)
    if math.isnan(z):
        raise DataError("cannot evaluate a curve at NaN")
    return float(evaluate(curve, z))


def derivative(curve: PiecewiseAnalyticCurve) -> PiecewiseAnalyticCurve:
    """Segment-wise symbolic derivative of a CDF curve."""
    if curve.kind is not CurveKind.CDF:
        raise DataError("derivative is defined for CDF curves only")
    c = curve.coeffs
    if np.any(c[:, 6] != 0):
        raise DataError("1/z^2 terms have no derivative in the basis")
    d = np.zeros_like(c)
    d[:, 0] = c[:, 1] + c[:, 4]
    d[:, 1] = 2.0 * c[:, 2]
    d[:, 3] = c[:, 4]
    d[:, 5] = c[:, 3]
    d[:, 6] = -c[:, 5]
    return PiecewiseAnalyticCurve(curve.breakpoints, d, CurveKind.PDF)


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------


def _power_antiderivative(p: int, z: float) -> float:
    if p == -1:
        return math.log(z)
    return z ** (p + 1) / (p + 1)


def _power_log_antiderivative(p: int, z: float) -> float:
    # integral of z**p ln z for p >= 0
    m = p + 1
    return z**m * (math.log(z) / m - 1.0 / (m * m))


def _segment_moment(c: np.ndarray, k: int, lo: float, hi: float) -> float:
    total = 0.0
    for slot, p in ((0, k), (1, k + 1), (2, k + 2), (5, k - 1), (6, k - 2)):
        if c[slot] != 0.0:
            if p < -1 and (lo <= 0 or hi <= 0):
                raise DataError("reciprocal term on a non-positive segment")
            if p < -1:
                total += c[slot] * (hi ** (p + 1) - lo ** (p + 1)) / (p + 1)
            elif p == -1:
                total += c[slot] * math.log(hi / lo)
            else:
                total += c[slot] * (_power_antiderivative(p, hi) - _power_antiderivative(p, lo))
    for slot, p in ((3, k), (4, k + 1)):
        if c[slot] != 0.0:
            total += c[slot] * (_power_log_antiderivative(p, hi) - _power_log_antiderivative(p, lo))
    return total


def _segment_moment_quad(curve: PiecewiseAnalyticCurve, k: int, lo: float, hi: float) -> float:
    from scipy.integrate import quad

    val, _ = quad(lambda t: t**k * evaluate(curve, t), lo, hi, epsabs=1e-10, epsrel=1e-10, limit=200)
    return val


def integrate_moment(curve: PiecewiseAnalyticCurve, k: int) -> float:
    """Integral of z**k times a PDF curve over its support."""
    if curve.kind is not CurveKind.PDF:
        raise DataError("moments are defined on PDF curves")
    if k < 0:
        raise DataError("moment order must be non-negative")
    bp = curve.breakpoints
    total = 0.0
    for i, c in enumerate(curve.coeffs):
        lo, hi = float(bp[i]), float(bp[i + 1])
        has_log = np.any(c[list(_LOG_SLOTS)] != 0)
        if has_log and min(abs(lo), abs(hi)) < 1e-6:
            total += _segment_moment_quad(curve, k, lo, hi)
        else:
            total += _segment_moment(c, k, lo, hi)
    return total


def dedupe_breakpoints(z: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Sorted unique abscissae, merging values closer than rtol*max(1,|z|)."""
    z = np.sort(np.asarray(z, dtype=np.float64))
    if z.size == 0:
        return z
    keep = [z[0]]
    for v in z[1:]:
        if v - keep[-1] > rtol * max(1.0, abs(v)):
            keep.append(v)
    return np.array(keep)
