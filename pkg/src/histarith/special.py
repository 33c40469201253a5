"""Statistical special functions used by the binning rules.

Everything here is self-contained (standard library ``math`` only):
regularized incomplete beta and gamma functions, the two-sided Student-t
quantile, the chi-square based correction to the sample standard deviation,
and the asymptotic Kolmogorov distribution.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache

from .core import DataError

_EPS = 1e-15
_TINY = 1e-300
_MAXIT = 10000


class QMode(Enum):
    CHI_SQUARE = "chi_square"
    ZERO = "zero"


def _check_confidence(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise DataError(f"confidence must lie in (0, 1), got {gamma}")
    return gamma


# ---------------------------------------------------------------------------
# incomplete beta
# ---------------------------------------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b) (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAXIT + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float, y: float | None = None) -> float:
    """Regularized incomplete beta I_x(a, b).

    ``y`` may carry an exactly computed ``1 - x`` to avoid cancellation.
    """
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    lbt = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log(y)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(lbt) * _betacf(a, b, x) / a
    return 1.0 - math.exp(lbt) * _betacf(b, a, y) / b


# ---------------------------------------------------------------------------
# incomplete gamma
# ---------------------------------------------------------------------------


def gammainc(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if x <= 0.0:
        return 0.0
    gln = math.lgamma(a)
    if x < a + 1.0:
        ap = a
        term = total = 1.0 / a
        for _ in range(_MAXIT):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                return total * math.exp(-x + a * math.log(x) - gln)
        raise ArithmeticError("incomplete gamma series did not converge")
    return 1.0 - gammaincc(a, x)


def gammaincc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x)."""
    if x <= 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - gammainc(a, x)
    gln = math.lgamma(a)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAXIT + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + a * math.log(x) - gln) * h
    raise ArithmeticError("incomplete gamma continued fraction did not converge")


def _bisect_log(fn, lo: float, hi: float, iters: int = 200) -> float:
    """Root of an increasing function on (lo, hi), bisecting in log space."""
    a, b = math.log(lo), math.log(hi)
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if fn(math.exp(mid)) < 0.0:
            a = mid
        else:
            b = mid
        if b - a < 1e-15:
            break
    return math.exp(0.5 * (a + b))


# ---------------------------------------------------------------------------
# Student t
# ---------------------------------------------------------------------------


def t_two_sided_tail(t: float, df: float) -> float:
    """P(|T_df| > t) for t >= 0."""
    t2 = t * t
    denom = df + t2
    return betainc(0.5 * df, 0.5, df / denom, t2 / denom)


def t_cdf(t: float, df: float) -> float:
    tail = 0.5 * t_two_sided_tail(abs(t), df)
    return 1.0 - tail if t >= 0 else tail


@lru_cache(maxsize=4096)
def t_quantile(gamma: float, df: int) -> float:
    """Half-width ``t`` of the central interval with P(|T_df| <= t) = gamma."""
    gamma = _check_confidence(gamma)
    if int(df) != df or df < 1:
        raise DataError(f"degrees of freedom must be a positive integer, got {df}")
    target = 1.0 - gamma
    # the tail is decreasing in t: bisect on its negation
    return _bisect_log(lambda t: target - t_two_sided_tail(t, df), 1e-300, 1e300)


# ---------------------------------------------------------------------------
# chi-square and the sigma correction
# ---------------------------------------------------------------------------


def chi2_cdf(x: float, k: float) -> float:
    return gammainc(0.5 * k, 0.5 * x)


def chi2_quantile(p: float, k: float) -> float:
    if not 0.0 < p < 1.0:
        raise DataError(f"probability must lie in (0, 1), got {p}")
    if p < 0.5:
        fn = lambda x: chi2_cdf(x, k) - p  # noqa: E731
    else:
        fn = lambda x: (1.0 - p) - gammaincc(0.5 * k, 0.5 * x)  # noqa: E731
    return _bisect_log(fn, 1e-300, 1e300)


@lru_cache(maxsize=4096)
def sigma_correction(gamma: float, n: int, mode: QMode | str = QMode.CHI_SQUARE) -> float:
    """Relative inflation ``q`` so that ``s * (1 + q)`` bounds sigma at level gamma.

    Uses the two-sided interval for sigma, matching the two-sided t
    interval for the mean: ``1 + q = sqrt((n - 1) / chi2_{(1-gamma)/2, n-1})``.
    """
    gamma = _check_confidence(gamma)
    if int(n) != n or n < 2:
        raise DataError(f"sigma correction needs n >= 2, got {n}")
    if QMode(mode) is QMode.ZERO:
        return 0.0
    lower = chi2_quantile(0.5 * (1.0 - gamma), n - 1)
    return math.sqrt((n - 1) / lower) - 1.0


# ---------------------------------------------------------------------------
# Kolmogorov
# ---------------------------------------------------------------------------


def kolmogorov_cdf(lam: float) -> float:
    """Asymptotic Kolmogorov distribution K(lambda)."""
    if lam <= 0.0:
        return 0.0
    if lam < 1.0:
        # theta-function form; the alternating series converges slowly here
        f = -(math.pi**2) / (8.0 * lam * lam)
        total = 0.0
        k = 1
        while True:
            term = math.exp(f * (2 * k - 1) ** 2)
            total += term
            if term < 1e-17:
                break
            k += 1
        return min(1.0, math.sqrt(2.0 * math.pi) / lam * total)
    return 1.0 - kolmogorov_sf(lam)


def kolmogorov_sf(lam: float) -> float:
    """1 - K(lambda), series summed until a term drops below 1e-12."""
    if lam < 1.0:
        return 1.0 - kolmogorov_cdf(lam)
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-12:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def kolmogorov_pvalue(d: float, n: int) -> float:
    """Type-I error probability of the Kolmogorov criterion for statistic d."""
    d = float(d)
    if math.isnan(d) or d < 0.0:
        raise DataError(f"KS statistic must be non-negative, got {d}")
    if n < 1:
        raise DataError("sample size must be positive")
    return kolmogorov_sf(math.sqrt(n) * d)
