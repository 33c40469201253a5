"""Reliable histograms and exact arithmetic on histogram-distributed variables."""

from .arithmetic import Op, Rect, ResultDistribution, combine, moment, rect_cdf, rect_pdf, sample_result
from .binning import BinningConfig, BoundaryPlacement, build_histogram, check_bin, histogram_cdf, quality
from .core import (
    Bin,
    CurveKind,
    DataError,
    DomainError,
    HistArithError,
    PiecewiseAnalyticCurve,
    ReliableHistogram,
    Sample,
    derivative,
    eval_curve,
)
from .special import QMode, kolmogorov_pvalue, sigma_correction, t_quantile

__version__ = "0.1.0"
