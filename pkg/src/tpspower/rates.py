"""Power-law decay fitting for table emission: y ~ c * h**alpha."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DecaySeries:
    """Labelled positive samples ``(h, y)`` of a decaying quantity."""

    label: str
    points: tuple

    def __post_init__(self):
        pts = tuple((float(h), float(y)) for h, y in self.points)
        hs = [h for h, _ in pts]
        if any(h <= 0.0 for h in hs) or len(set(hs)) != len(hs):
            raise ValueError(f"{self.label}: h values must be positive and distinct")
        if any(y <= 0.0 for _, y in pts):
            raise ValueError(f"{self.label}: y values must be positive for log-space fitting")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class RateFit:
    """Fitted prefactor and exponent, plus the per-h exponents they imply.

    ``alpha_per_h[i] = ln(y_i / c) / ln(h_i)`` and ``residual`` is the
    largest log-space deviation from the fitted line.
    """

    c: float
    alpha_global: float
    alpha_per_h: tuple
    residual: float


def per_h_exponents(series: DecaySeries, c: float):
    """Exponents ``ln(y/c)/ln(h)`` per point, for an externally fixed prefactor."""
    return tuple((h, math.log(y / c) / math.log(h)) for h, y in series.points)


def fit_power_law(series: DecaySeries) -> RateFit:
    """Least-squares line through ``(ln h, ln y)``; needs at least two points."""
    if len(series.points) < 2:
        raise ValueError(f"{series.label}: need at least 2 points to fit, got {len(series.points)}")
    log_h = np.log([h for h, _ in series.points])
    log_y = np.log([y for _, y in series.points])
    alpha, log_c = np.polyfit(log_h, log_y, 1)
    residual = float(np.max(np.abs(log_y - log_c - alpha * log_h)))
    c = math.exp(log_c)
    return RateFit(
        c=c,
        alpha_global=float(alpha),
        alpha_per_h=per_h_exponents(series, c),
        residual=residual,
    )


def fit_prefactor(series: DecaySeries, alpha: float) -> float:
    """Least-squares prefactor with the exponent pinned at ``alpha``.

    Equals the geometric mean of ``y * h**(-alpha)`` over the series; used
    where a conjectured rate is imposed and only the constant is estimated.
    """
    log_c = np.mean([math.log(y) - alpha * math.log(h) for h, y in series.points])
    return math.exp(log_c)


def per_h_exponents_doubling(series: DecaySeries):
    """Successive-ratio exponents for an h-halving series.

    Consecutive points must have ``h_i = 2 * h_{i+1}`` exactly (to 1e-12
    relative); each exponent ``log2(y_i / y_{i+1})`` is reported against the
    finer of the two mesh sizes.
    """
    pts = series.points
    if len(pts) < 2:
        raise ValueError(f"{series.label}: need at least 2 points, got {len(pts)}")
    out = []
    for (h0, y0), (h1, y1) in zip(pts[:-1], pts[1:]):
        if abs(h0 - 2.0 * h1) > 1e-12 * h0:
            raise ValueError(
                f"{series.label}: successive h values {h0} and {h1} are not in exact ratio 2"
            )
        out.append((h1, math.log2(y0 / y1)))
    return out
